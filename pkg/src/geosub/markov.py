"""Markov parameter matrices, admissible impulsive inputs and the strongly
reachable (fast) subspace in closed form.

An impulsive input ``u = sum_i u_i delta^(i)`` is stored as its coefficient
array of shape ``(k, m)``, row ``i`` holding ``u_i``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    InfiniteImpulsiveSpace,
    InvalidOrder,
    NoImpulsivePart,
    NotAdmissible,
    NothingToShift,
    NumericalInconsistency,
)
from .linalg import DEFAULT_TOL, SubspaceBasis, image_basis, nullspace_basis, rank
from .sysmodel import StateSpaceSystem, validate


@dataclass(frozen=True)
class MarkovMatrix:
    """Block anti-triangular matrix of ``D, CB, CAB, ...`` of block order ``k``.

    ``blocks[j]`` is the ``j``-th Markov parameter (``blocks[0] = D``,
    ``blocks[j] = C A^(j-1) B``); ``assembled`` has block ``(i, j)`` equal to
    ``blocks[i + j - k + 1]`` above the anti-diagonal and zero below it.
    """

    k: int
    blocks: np.ndarray
    assembled: np.ndarray

    @property
    def p(self) -> int:
        return self.blocks.shape[1]

    @property
    def m(self) -> int:
        return self.blocks.shape[2]

    def tail_column(self) -> np.ndarray:
        """``col(CB, CAB, ..., CA^(k-2)B)``: last block column without its top block."""
        return self.assembled[self.p:, -self.m:]

    def tail_row(self) -> np.ndarray:
        """``[CB, CAB, ..., CA^(k-2)B]``: last block row without its first block."""
        return self.assembled[-self.p:, self.m:]


@dataclass(frozen=True)
class ImpulsiveInputBasis:
    """Basis of the admissible impulsive inputs.

    Column ``v`` of ``N`` stacks the coefficients ``N_0 v, ..., N_{f-d} v`` of
    the input ``sum_i (N_i v) delta^(i)``.
    """

    f: int
    d: int
    N: np.ndarray
    m: int

    @property
    def order(self) -> int:
        """Highest derivative order ``f - d`` appearing in the basis."""
        return self.N.shape[0] // self.m - 1

    @property
    def blocks(self) -> tuple[np.ndarray, ...]:
        if self.f == 0:
            return ()
        return tuple(self.N[i * self.m:(i + 1) * self.m] for i in range(self.order + 1))

    def input_coeffs(self, v) -> np.ndarray:
        """Coefficient array ``(f - d + 1, m)`` of the input encoded by ``v``."""
        v = np.asarray(v, dtype=float).reshape(self.f)
        return (self.N @ v).reshape(-1, self.m)


def _coeffs(u, m: int) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim == 2 and u.shape[1] == m:
        return u
    if u.size % m:
        raise ValueError(f"coefficients of size {u.size} do not split into R^{m} vectors")
    return u.reshape(-1, m)


def build_markov(sys: StateSpaceSystem, k: int) -> MarkovMatrix:
    if k < 1:
        raise InvalidOrder(f"block order must be >= 1, got {k}")
    blocks = kernels.markov_blocks(sys.A, sys.B, sys.C, sys.D, k)
    return MarkovMatrix(k, blocks, kernels.assemble_markov(blocks, k))


def _markov_sequence(sys: StateSpaceSystem, k_max: int):
    blocks = kernels.markov_blocks(sys.A, sys.B, sys.C, sys.D, k_max)
    for k in range(1, k_max + 1):
        yield kernels.assemble_markov(blocks, k)


def kernel_dim_sequence(sys: StateSpaceSystem, k_max: int,
                        tol: float = DEFAULT_TOL) -> list[int]:
    """``[dim ker M_1, ..., dim ker M_k_max]``."""
    if k_max < 1:
        raise InvalidOrder(f"k_max must be >= 1, got {k_max}")
    return [M.shape[1] - rank(M, tol) for M in _markov_sequence(sys, k_max)]


def impulsive_space(sys: StateSpaceSystem, tol: float = DEFAULT_TOL) -> ImpulsiveInputBasis:
    """Dimension ``f`` and a basis of the admissible impulsive inputs.

    ``f`` is the kernel dimension at which ``dim ker M_k`` first repeats. The
    kernel dimension grows by at least one per step until then and the
    repeated value cannot exceed ``n``, so ``k`` never needs to pass
    ``n + 2``.

    Raises
    ------
    InfiniteImpulsiveSpace
        The kernel dimension exceeds ``n`` before repeating; this happens
        exactly when the transfer matrix has a nontrivial right kernel.
    """
    validate(sys)
    n, m = sys.n, sys.m
    k_max = n + 2
    blocks = kernels.markov_blocks(sys.A, sys.B, sys.C, sys.D, k_max)
    dims = []
    for k in range(1, k_max + 1):
        M = kernels.assemble_markov(blocks, k)
        dims.append(M.shape[1] - rank(M, tol))
        if dims[-1] > n:
            raise InfiniteImpulsiveSpace(
                f"dim ker M_{k} = {dims[-1]} exceeds n = {n} without stabilizing; "
                f"kernel dimensions {dims}")
        if k >= 2 and dims[-1] == dims[-2]:
            break
    else:
        raise InfiniteImpulsiveSpace(f"kernel dimensions {dims} did not stabilize")

    f = dims[-1]
    d = dims[0]
    k_stable = len(dims) - 1
    if f == 0:
        return ImpulsiveInputBasis(0, d, np.zeros((m, 0)), m)
    order = f - d + 1
    if k_stable > order:
        raise NumericalInconsistency(
            f"kernel dimensions stabilized at k={k_stable} > f - d + 1 = {order}")
    M = kernels.assemble_markov(blocks, order)
    N = nullspace_basis(M, tol).basis
    if N.shape[1] != f:
        raise NumericalInconsistency(f"dim ker M_{order} = {N.shape[1]}, expected {f}")
    return ImpulsiveInputBasis(f, d, N, m)


def _residual_ok(M, v, tol):
    scale = max(1.0, np.linalg.norm(M, 2)) * max(1.0, np.linalg.norm(v))
    return np.linalg.norm(M @ v) <= 10 * tol * scale


def is_admissible(sys: StateSpaceSystem, u, tol: float = DEFAULT_TOL) -> bool:
    """Whether the impulsive input with coefficients ``u`` yields an impulse-free output."""
    u = _coeffs(u, sys.m)
    if not u.any():
        return True
    M = build_markov(sys, u.shape[0]).assembled
    return bool(_residual_ok(M, u.reshape(-1), tol))


def shift_input(u) -> np.ndarray:
    """Drop ``u_0``: ``sum u_i delta^(i)`` becomes ``sum u_i delta^(i-1)``."""
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        u = u.reshape(-1, 1)
    if u.shape[0] < 2:
        raise NothingToShift("need at least two coefficients to shift")
    return u[1:].copy()


def impulse_state_coeffs(sys: StateSpaceSystem, u) -> np.ndarray:
    """Coefficients ``x_0 .. x_{k-2}`` of the impulsive part of the state.

    Row ``i`` of the result is ``x_i``; the recursion runs downward from
    ``x_{k-2} = B u_{k-1}`` via ``x_{j} = A x_{j+1} + B u_{j+1}``.
    """
    u = _coeffs(u, sys.m)
    k = u.shape[0]
    if k < 2:
        raise NoImpulsivePart("an input with only a delta term has no impulsive state")
    x = np.zeros((k - 1, sys.n))
    x[k - 2] = sys.B @ u[k - 1]
    for j in range(k - 3, -1, -1):
        x[j] = sys.A @ x[j + 1] + sys.B @ u[j + 1]
    return x


def strong_state_from_input(sys: StateSpaceSystem, u, tol: float = DEFAULT_TOL) -> np.ndarray:
    """State reached at ``0+`` from rest: ``[B AB ... A^(k-1)B] col(u_0, ..., u_{k-1})``."""
    u = _coeffs(u, sys.m)
    if not is_admissible(sys, u, tol):
        raise NotAdmissible("input produces impulses in the output")
    if u.shape[0] == 0:
        return np.zeros(sys.n)
    return kernels.krylov_blocks(sys.A, sys.B, u.shape[0]) @ u.reshape(-1)


def fast_space(sys: StateSpaceSystem, tol: float = DEFAULT_TOL,
               imp: ImpulsiveInputBasis | None = None) -> SubspaceBasis:
    """Strongly reachable subspace as ``img [B AB ... A^(f-d)B] N``."""
    if imp is None:
        imp = impulsive_space(sys, tol)
    if imp.f == 0:
        return SubspaceBasis.zero(sys.n, tol)
    K = kernels.krylov_blocks(sys.A, sys.B, imp.order + 1)
    R = image_basis(K @ imp.N, tol, scale=np.linalg.norm(K, 2))
    if R.dim != imp.f:
        raise NumericalInconsistency(
            f"strongly reachable subspace has dim {R.dim}, expected f = {imp.f}")
    return R
