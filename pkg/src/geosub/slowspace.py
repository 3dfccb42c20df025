"""Weakly unobservable (slow) subspaces from the Rosenbrock pencil.

For a square system the pencil ``s U1 - U2`` with ``U1 = diag(I_n, 0)`` and
``U2 = [[A, B], [C, D]]`` has a real deflating subspace ``[V1; V2]`` for its
finite eigenvalues; the slow space is ``img V1`` and ``F V1 = V2`` gives a
feedback certifying it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSquare, NumericalInconsistency
from .linalg import (
    DEFAULT_TOL,
    PencilEigenspace,
    SubspaceBasis,
    image_basis,
    ordered_pencil_eigenspace,
    rank,
)
from .sysmodel import StateSpaceSystem, validate
from .transferdim import rosenbrock_matrices


@dataclass(frozen=True)
class RosenbrockPencil:
    U1: np.ndarray
    U2: np.ndarray
    n: int
    m: int


def build_pencil(sys: StateSpaceSystem) -> RosenbrockPencil:
    validate(sys)
    if not sys.is_square:
        raise NotSquare(f"Rosenbrock pencil needs p == m, got p={sys.p}, m={sys.m}")
    U1, U2 = rosenbrock_matrices(sys)
    return RosenbrockPencil(U1, U2, sys.n, sys.m)


def _slow(sys, region, tol):
    pencil = build_pencil(sys)
    eig = ordered_pencil_eigenspace(pencil.U1, pencil.U2, region, tol, n=sys.n)
    if eig.r and rank(eig.V1, tol) < eig.r:
        raise NumericalInconsistency(
            f"V1 has rank {rank(eig.V1, tol)} < r = {eig.r}; expected full column rank")
    O = image_basis(eig.V1, tol, scale=1.0) if eig.r else SubspaceBasis.zero(sys.n, tol)
    if O.dim != eig.r:
        raise NumericalInconsistency(f"dim img V1 = {O.dim}, expected {eig.r}")
    return O, eig


def weakly_unobservable(sys: StateSpaceSystem, tol: float = DEFAULT_TOL
                        ) -> tuple[SubspaceBasis, PencilEigenspace]:
    """Slow space ``img V1`` over all finite pencil eigenvalues; ``dim = deg det(s U1 - U2)``."""
    return _slow(sys, "all_finite", tol)


def good_weakly_unobservable(sys: StateSpaceSystem, tol: float = DEFAULT_TOL
                             ) -> tuple[SubspaceBasis, PencilEigenspace]:
    """Good slow space: the part of the slow space with open-left-half-plane dynamics.

    Raises BoundaryAmbiguity when an eigenvalue is too close to the imaginary
    axis to decide.
    """
    return _slow(sys, "open_left_half_plane", tol)


def friend_feedback(eig: PencilEigenspace, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Minimum-norm ``F`` (``m x n``) with ``F V1 = V2``.

    Then ``(A + BF) V1 = V1 J`` and ``(C + DF) V1 = 0`` follow from the pencil
    relation ``A V1 + B V2 = V1 J``, ``C V1 + D V2 = 0``.
    """
    n, m = eig.V1.shape[0], eig.V2.shape[0]
    if eig.r == 0:
        return np.zeros((m, n))
    if rank(eig.V1, tol) < eig.r:
        raise NumericalInconsistency("V1 is rank deficient; no feedback extends V1 -> V2")
    return eig.V2 @ np.linalg.pinv(eig.V1)


def friend_residuals(sys: StateSpaceSystem, eig: PencilEigenspace, F) -> tuple[float, float]:
    """``(|(A+BF)V1 - V1 J|, |(C+DF)V1|)`` in the spectral norm."""
    if eig.r == 0:
        return 0.0, 0.0
    V1 = eig.V1
    inv = np.linalg.norm((sys.A + sys.B @ F) @ V1 - V1 @ eig.J, 2)
    null = np.linalg.norm((sys.C + sys.D @ F) @ V1, 2)
    return float(inv), float(null)
