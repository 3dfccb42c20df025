"""Backend dispatch for the numeric kernels.

The numba backend is used when numba imports cleanly, unless the environment
variable ``GEOSUB_NO_NUMBA`` is set to a truthy value, in which case the
pure-numpy implementations are used. ``BACKEND`` records the choice.

All entry points coerce their inputs to contiguous float64 (or complex128 for
evaluation nodes) so both backends see identical dtypes.
"""
import os

import numpy as np

from . import _kernels_numpy

_FALSEY = {"", "0", "false", "no", "off"}


def _want_numba():
    return os.environ.get("GEOSUB_NO_NUMBA", "").strip().lower() in _FALSEY


if _want_numba():
    try:
        from . import _kernels_numba as _impl
        BACKEND = "numba"
    except ImportError:  # numba missing or broken
        _impl = _kernels_numpy
        BACKEND = "numpy"
else:
    _impl = _kernels_numpy
    BACKEND = "numpy"


def _f(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def _c(x):
    return np.ascontiguousarray(np.atleast_1d(x), dtype=np.complex128)


def markov_blocks(A, B, C, D, count):
    """Return ``[D, CB, CAB, ..., CA^(count-2)B]`` stacked as ``(count, p, m)``."""
    return _impl.markov_blocks(_f(A), _f(B), _f(C), _f(D), int(count))


def assemble_markov(blocks, k):
    return _impl.assemble_markov(_f(blocks), int(k))


def krylov_blocks(A, B, k):
    """``[B, AB, ..., A^(k-1)B]`` as one ``n x km`` array."""
    return _impl.krylov_blocks(_f(A), _f(B), int(k))


def faddeev_leverrier(A):
    """Characteristic polynomial and adjugate of ``sI - A``.

    Returns ``(chi, adj)`` with ``chi`` ascending coefficients of
    ``det(sI - A)`` and ``adj[:, :, j]`` the coefficient of ``s**j`` in
    ``adj(sI - A)``.
    """
    return _impl.faddeev_leverrier(_f(A))


def polymat_mul(P, Q):
    P, Q = _f(P), _f(Q)
    if P.ndim != 3 or Q.ndim != 3 or P.shape[1] != Q.shape[0]:
        raise ValueError(f"cannot multiply polynomial matrices {P.shape} and {Q.shape}")
    return _impl.polymat_mul(P, Q)


def polymat_eval(P, nodes):
    return _impl.polymat_eval(_f(P), _c(nodes))


def pencil_dets(E, A, nodes):
    """``det(s E - A)`` at every node ``s``."""
    return _impl.pencil_dets(_f(E), _f(A), _c(nodes))


def polymat_dets(P, nodes):
    """Determinant of a square polynomial matrix at every node."""
    return _impl.polymat_dets(_f(P), _c(nodes))
