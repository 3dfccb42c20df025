"""Tolerance-aware dense real linear algebra.

Rank decisions are relative: a singular value counts when it exceeds
``tol * sigma_max``. Subspaces are carried as orthonormal column bases
(:class:`SubspaceBasis`); the zero subspace is a basis with no columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg

from . import kernels
from .errors import (
    BoundaryAmbiguity,
    DimensionMismatch,
    InvalidMatrix,
    NumericalInconsistency,
    SingularPencil,
)

DEFAULT_TOL = 1e-9

Region = Literal["all_finite", "open_left_half_plane"]
REGIONS = ("all_finite", "open_left_half_plane")


def as_matrix(M) -> np.ndarray:
    """Coerce to a finite 2-D float array, raising InvalidMatrix otherwise."""
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else M.reshape(0, 0)
    if M.ndim != 2:
        raise InvalidMatrix(f"expected a 2-D matrix, got ndim={M.ndim}")
    if not np.all(np.isfinite(M)):
        raise InvalidMatrix("matrix has non-finite entries")
    return M


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal column basis of a subspace of ``R^ambient_dim``."""

    basis: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise InvalidMatrix("basis must be 2-D")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int, tol: float = DEFAULT_TOL) -> "SubspaceBasis":
        return cls(np.zeros((ambient_dim, 0)), tol)

    @classmethod
    def full(cls, ambient_dim: int, tol: float = DEFAULT_TOL) -> "SubspaceBasis":
        return cls(np.eye(ambient_dim), tol)

    def project(self, v) -> np.ndarray:
        return self.basis @ (self.basis.T @ np.asarray(v, dtype=float))

    def residual(self, v) -> np.ndarray:
        """Distance of each column of ``v`` from the subspace."""
        v = np.asarray(v, dtype=float).reshape(self.ambient_dim, -1)
        return np.linalg.norm(v - self.project(v), axis=0)

    def contains(self, v, tol: float | None = None) -> bool:
        v = np.asarray(v, dtype=float).reshape(self.ambient_dim, -1)
        tol = 10 * self.tol if tol is None else tol
        scale = np.maximum(1.0, np.linalg.norm(v, axis=0))
        return bool(np.all(self.residual(v) <= tol * scale))

    def orthogonality_error(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.abs(self.basis.T @ self.basis - np.eye(self.dim)).max())


@dataclass(frozen=True)
class PencilEigenspace:
    """Deflating subspace ``[V1; V2]`` of a pencil with ``U2 V = U1 V J``."""

    V1: np.ndarray
    V2: np.ndarray
    J: np.ndarray
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    @property
    def r(self) -> int:
        return self.J.shape[0]

    @property
    def V(self) -> np.ndarray:
        return np.vstack([self.V1, self.V2])

    def residual(self, U1, U2) -> float:
        V = self.V
        if V.shape[1] == 0:
            return 0.0
        return float(np.linalg.norm(U2 @ V - U1 @ V @ self.J, 2))


def singular_values(M) -> np.ndarray:
    M = as_matrix(M)
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def _rank_from_sv(s, tol, scale=0.0):
    ref = max(s[0] if s.size else 0.0, scale)
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * ref))


def rank(M, tol: float = DEFAULT_TOL) -> int:
    """Numerical rank: number of singular values above ``tol * sigma_max``."""
    return _rank_from_sv(singular_values(M), tol)


def nullspace_basis(M, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    """Orthonormal basis of the right nullspace of ``M``."""
    M = as_matrix(M)
    rows, cols = M.shape
    if rows == 0 or cols == 0 or not M.any():
        return SubspaceBasis(np.eye(cols), tol)
    _, s, Vt = np.linalg.svd(M, full_matrices=True)
    r = _rank_from_sv(s, tol)
    return SubspaceBasis(Vt[r:].T, tol)


def image_basis(M, tol: float = DEFAULT_TOL, scale: float = 0.0) -> SubspaceBasis:
    """Orthonormal basis of the column span of ``M``.

    ``scale`` is a floor for the reference singular value. Pass the norm a
    nonzero ``M`` is expected to have when ``M`` may be all rounding noise,
    e.g. 1 for a slice of an orthonormal basis.
    """
    M = as_matrix(M)
    rows, cols = M.shape
    if rows == 0 or cols == 0 or not M.any():
        return SubspaceBasis(np.zeros((rows, 0)), tol)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = _rank_from_sv(s, tol, scale)
    return SubspaceBasis(U[:, :r], tol)


def orthogonal_complement(U: SubspaceBasis) -> SubspaceBasis:
    if U.dim == 0:
        return SubspaceBasis.full(U.ambient_dim, U.tol)
    return nullspace_basis(U.basis.T, U.tol)


def _check_ambient(U: SubspaceBasis, V: SubspaceBasis):
    if U.ambient_dim != V.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {U.ambient_dim} vs {V.ambient_dim}")


def subspace_equal(U: SubspaceBasis, V: SubspaceBasis, tol: float = 1e-8) -> bool:
    """True iff both spans coincide, by mutual projection residuals."""
    _check_ambient(U, V)
    if U.dim != V.dim:
        return False
    if U.dim == 0:
        return True
    return bool(U.residual(V.basis).max() <= tol and V.residual(U.basis).max() <= tol)


def subspace_sum(U: SubspaceBasis, V: SubspaceBasis, tol: float = DEFAULT_TOL) -> SubspaceBasis:
    _check_ambient(U, V)
    return image_basis(np.hstack([U.basis, V.basis]), tol)


def subspace_intersection(U: SubspaceBasis, V: SubspaceBasis,
                          tol: float = DEFAULT_TOL) -> SubspaceBasis:
    _check_ambient(U, V)
    if U.dim == 0 or V.dim == 0:
        return SubspaceBasis.zero(U.ambient_dim, tol)
    # U a = V b
    K = nullspace_basis(np.hstack([U.basis, -V.basis]), tol)
    return image_basis(U.basis @ K.basis[:U.dim], tol, scale=1.0)


# -- pencils ------------------------------------------------------------------

def is_regular_pencil(U1, U2, tol: float = DEFAULT_TOL) -> bool:
    """Decide whether ``det(s U1 - U2)`` is not the zero polynomial.

    The determinant has degree at most ``size``, so it is identically zero
    iff it vanishes at ``size + 1`` distinct points; we sample ``1, 2, ...``
    and compare against the Hadamard-type bound ``(s|U1| + |U2|)^size``.
    """
    U1 = as_matrix(U1)
    U2 = as_matrix(U2)
    size = U1.shape[0]
    if size == 0:
        return True
    nodes = np.arange(1, size + 2, dtype=float)
    dets = np.abs(kernels.pencil_dets(U1, U2, nodes))
    scale = nodes * np.linalg.norm(U1, 2) + np.linalg.norm(U2, 2)
    return bool(np.any(dets > tol * np.maximum(scale, 1.0) ** size))


def _infinite_left_complement(U1, U2, tol):
    """Orthonormal basis of the left deflating subspace of the infinite part.

    Computed as the right infinite deflating subspace of the transposed
    pencil through the sequence W_0 = 0, W_{i+1} = {x : U1^T x in U2^T W_i}.
    """
    N = U1.shape[0]
    E, A = U1.T, U2.T
    W = np.zeros((N, 0))
    for _ in range(N + 1):
        K = nullspace_basis(np.hstack([E, -(A @ W)]), tol)
        W_next = image_basis(K.basis[:N], tol, scale=1.0).basis
        if W_next.shape[1] == W.shape[1]:
            return W_next
        W = W_next
    return W


def _boundary_band(lam: np.ndarray, tol: float) -> np.ndarray:
    # multiple eigenvalues perturb like sqrt(eps); a tol-sized band is too thin
    return np.sqrt(tol) * np.maximum(1.0, np.abs(lam))


def ordered_pencil_eigenspace(U1, U2, region: Region = "all_finite",
                              tol: float = DEFAULT_TOL,
                              n: int | None = None) -> PencilEigenspace:
    """Real deflating subspace of ``s U1 - U2`` for the finite eigenvalues in ``region``.

    Parameters
    ----------
    U1, U2 : array, shape (N, N)
        Regular pencil. Infinite eigenvalues are never selected.
    region : {"all_finite", "open_left_half_plane"}
    tol : float
        Relative rank tolerance for every internal rank decision.
    n : int, optional
        Number of leading rows returned as ``V1``; the rest form ``V2``.
        Defaults to ``rank(U1)``, which is the state dimension for a
        Rosenbrock pencil.

    Returns
    -------
    PencilEigenspace
        ``[V1; V2]`` has orthonormal columns, ``J`` is quasi-upper-triangular
        and ``U2 V = U1 V J``.

    Raises
    ------
    SingularPencil
        ``det(s U1 - U2)`` vanishes identically.
    BoundaryAmbiguity
        ``region`` is the open left half-plane and some finite eigenvalue
        lies within the classification band of the imaginary axis.
    """
    if region not in REGIONS:
        raise ValueError(f"unknown region {region!r}")
    U1 = as_matrix(U1)
    U2 = as_matrix(U2)
    if U1.shape != U2.shape or U1.shape[0] != U1.shape[1]:
        raise DimensionMismatch("pencil matrices must be square and of equal size")
    N = U1.shape[0]
    if n is None:
        n = rank(U1, tol)
    if not is_regular_pencil(U1, U2, tol):
        raise SingularPencil("det(s U1 - U2) vanishes identically")

    def empty():
        return PencilEigenspace(np.zeros((n, 0)), np.zeros((N - n, 0)),
                                np.zeros((0, 0)), np.zeros(0, complex))

    # Deflate infinite eigenvalues: X spans the finite right deflating
    # subspace, Y its left partner; Y^T (s U1 - U2) X has invertible U1 part.
    P_inf = _infinite_left_complement(U1, U2, tol)
    r = N - P_inf.shape[1]
    if r == 0:
        return empty()
    X = nullspace_basis(np.vstack([P_inf.T @ U1, P_inf.T @ U2]), tol).basis
    if X.shape[1] != r:
        raise NumericalInconsistency(
            f"finite deflating subspace has dim {X.shape[1]}, expected {r}")
    Y = orthogonal_complement(SubspaceBasis(P_inf, tol)).basis
    Ar = Y.T @ U2 @ X
    Er = Y.T @ U1 @ X

    lam = scipy.linalg.eigvals(Ar, Er)
    if region == "open_left_half_plane":
        if np.any(np.abs(lam.real) <= _boundary_band(lam, tol)):
            raise BoundaryAmbiguity(
                "eigenvalue within classification band of the imaginary axis: "
                f"{lam[np.argmin(np.abs(lam.real))]}")
        k = int(np.count_nonzero(lam.real < 0))
        if k == 0:
            return empty()
        AA, BB, _, _, _, Z = scipy.linalg.ordqz(
            Ar, Er, sort=_lhp_sort, output="real")
    else:
        k = r
        AA, BB, _, Z = scipy.linalg.qz(Ar, Er, output="real")

    J = scipy.linalg.solve_triangular(BB[:k, :k], AA[:k, :k])
    # orthonormal X and orthogonal Z keep V orthonormal
    V = X @ Z[:, :k]
    eig = scipy.linalg.eigvals(AA[:k, :k], BB[:k, :k])
    return PencilEigenspace(V[:n], V[n:], J, np.sort_complex(eig))


def _lhp_sort(alpha, beta):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.real(alpha / beta) < 0
