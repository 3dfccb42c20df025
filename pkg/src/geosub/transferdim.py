"""Polynomial transfer-matrix machinery and the dimension formulas.

``G(s) = C (sI - A)^-1 B + D`` is handled over the common denominator
``chi(s) = det(sI - A)`` as ``G = P / chi`` with the polynomial numerator
matrix ``P(s) = C adj(sI - A) B + D chi(s)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, count

import numpy as np

from . import kernels
from .errors import (
    Inapplicable,
    NotLeftInvertible,
    NotSquare,
    NumericalInconsistency,
    SingularPencil,
)
from .linalg import DEFAULT_TOL, is_regular_pencil, rank
from .sysmodel import StateSpaceSystem, validate

TRIM_RTOL = 1e-8
ZERO_DEGREE = -math.inf


def _as_coeffs(x) -> np.ndarray:
    return x.coeffs if isinstance(x, Polynomial) else np.atleast_1d(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Real polynomial, ascending coefficients ``c_0, c_1, ...``.

    Coefficients are kept as given. :attr:`degree` drops trailing terms with
    ``|c_i| rho^i <= TRIM_RTOL * max_j |c_j| rho^j`` where ``rho`` is
    :attr:`radius` (1 unless the coefficients came from a balanced
    interpolation); the zero polynomial has degree ``-inf``.
    """

    coeffs: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).copy()
        if c.size == 0:
            c = np.zeros(1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def _balanced(self) -> np.ndarray:
        return np.abs(self.coeffs) * self.radius ** np.arange(self.coeffs.size)

    @property
    def degree(self):
        b = self._balanced()
        scale = b.max()
        if scale == 0.0:
            return ZERO_DEGREE
        return int(np.flatnonzero(b > TRIM_RTOL * scale)[-1])

    def is_zero(self) -> bool:
        return self.degree == ZERO_DEGREE

    def trimmed(self) -> "Polynomial":
        d = self.degree
        if d == ZERO_DEGREE:
            return Polynomial([0.0])
        return Polynomial(self.coeffs[:d + 1], self.radius)

    def __call__(self, s):
        return np.polynomial.polynomial.polyval(s, self.coeffs)

    def reflect(self) -> "Polynomial":
        """``p(-s)``."""
        signs = (-1.0) ** np.arange(self.coeffs.size)
        return Polynomial(self.coeffs * signs, self.radius)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * float(other), self.radius)

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = self.coeffs, _as_coeffs(other)
        out = np.zeros(max(a.size, b.size))
        out[:a.size] += a
        out[:b.size] += b
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs, self.radius)

    def __sub__(self, other):
        return self + (-_as_coeffs(other))

    def __pow__(self, k: int):
        out = Polynomial([1.0])
        for _ in range(k):
            out = out * self
        return out

    def allclose(self, other, rtol: float = 1e-8) -> bool:
        """Coefficientwise equality relative to the larger coefficient magnitude."""
        b = _as_coeffs(other)
        scale = max(np.abs(self.coeffs).max(), np.abs(b).max(), 1e-300)
        return bool(np.abs((self - b).coeffs).max() <= rtol * scale)

    def odd_part_ratio(self) -> float:
        """``max|odd coefficient| / max|coefficient|`` in the balanced variable."""
        b = self._balanced()
        scale = b.max()
        if scale == 0.0 or b.size < 2:
            return 0.0
        return float(b[1::2].max() / scale)

    def __repr__(self):
        return f"Polynomial({np.array2string(self.coeffs, precision=6)})"


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """Matrix of polynomials; ``coeffs[i, j, k]`` multiplies ``s**k`` in entry ``(i, j)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 3:
            raise ValueError("PolyMatrix coefficients must have shape (rows, cols, terms)")
        if c.shape[2] == 0:
            c = np.zeros(c.shape[:2] + (1,))
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, M) -> "PolyMatrix":
        M = np.asarray(M, dtype=float)
        return cls(M[:, :, None])

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[:2]

    @property
    def max_degree(self):
        return max((self.entry(i, j).degree for i in range(self.shape[0])
                    for j in range(self.shape[1])), default=ZERO_DEGREE)

    def entry(self, i: int, j: int) -> Polynomial:
        return Polynomial(self.coeffs[i, j])

    def __call__(self, s):
        return kernels.polymat_eval(self.coeffs, s)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return PolyMatrix(kernels.polymat_mul(self.coeffs, other.coeffs))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        a, b = self.coeffs, other.coeffs
        out = np.zeros(a.shape[:2] + (max(a.shape[2], b.shape[2]),))
        out[:, :, :a.shape[2]] += a
        out[:, :, :b.shape[2]] += b
        return PolyMatrix(out)

    def scale(self, p: Polynomial) -> "PolyMatrix":
        """Entrywise product with the scalar polynomial ``p``."""
        a, c = self.coeffs, p.coeffs
        out = np.zeros(a.shape[:2] + (a.shape[2] + c.size - 1,))
        for k, ck in enumerate(c):
            out[:, :, k:k + a.shape[2]] += ck * a
        return PolyMatrix(out)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.coeffs.transpose(1, 0, 2))

    def reflect(self) -> "PolyMatrix":
        signs = (-1.0) ** np.arange(self.coeffs.shape[2])
        return PolyMatrix(self.coeffs * signs)


# -- interpolation ------------------------------------------------------------

def integer_nodes(count_: int) -> np.ndarray:
    """``0, 1, -1, 2, -2, ...`` truncated to ``count_`` points."""
    out = [0]
    for k in count(1):
        if len(out) >= count_:
            break
        out.append(k)
        if len(out) >= count_:
            break
        out.append(-k)
    return np.array(out[:count_], dtype=float)


def interpolate_integer_nodes(values, nodes, degree: int) -> np.ndarray:
    """Least-squares fit of a degree-``degree`` polynomial through real samples."""
    V = np.vander(nodes, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, np.real(values), rcond=None)
    return coef


# nodes are rotated off the real axis so none sits on a real root of chi
_ROTATION = 1 / np.pi


def circle_nodes(npts: int, radius: float) -> np.ndarray:
    theta = 2 * np.pi * (np.arange(npts) + _ROTATION) / npts
    return radius * np.exp(1j * theta)


def interpolate_circle(values) -> np.ndarray:
    """Coefficients of ``q(radius * t)`` from the samples of ``q`` at
    ``circle_nodes(len(values), radius)``."""
    npts = len(values)
    shift = np.exp(-2j * np.pi * _ROTATION * np.arange(npts) / npts)
    return np.fft.fft(values) / npts * shift


def fujiwara_bound(coeffs) -> float:
    """Upper bound on root magnitudes of a polynomial with ascending ``coeffs``."""
    c = np.asarray(coeffs, dtype=float)
    d = c.size - 1
    if d <= 0:
        return 0.0
    lead = c[-1]
    ratios = [abs(c[j] / lead) ** (1.0 / (d - j)) for j in range(d)]
    ratios[0] = ratios[0] / 2 ** (1.0 / d)
    return 2.0 * max(ratios)


def _balanced_coeffs(sample, degree_bound: int, tol: float = TRIM_RTOL,
                     max_rounds: int = 12, max_radius: float = 1e4):
    """Recover coefficients of a real polynomial known only through ``sample``.

    Samples are taken on a circle whose radius is enlarged until it bounds
    every root of the recovered polynomial; in the variable scaled by that
    radius the leading coefficient cannot be swamped by lower ones, so the
    relative trim decides the degree reliably.
    """
    npts = degree_bound + 1
    radius = 1.0
    for _ in range(max_rounds):
        z = circle_nodes(npts, radius)
        scaled = interpolate_circle(sample(z))
        imag = np.abs(scaled.imag).max()
        scaled = scaled.real
        peak = np.abs(scaled).max()
        if peak == 0.0:
            return np.zeros(1), radius
        if imag > 1e-6 * peak:
            raise NumericalInconsistency(
                f"interpolated polynomial is not real (imag/peak = {imag / peak:.2e})")
        keep = np.flatnonzero(np.abs(scaled) > tol * peak)
        trimmed = scaled[:keep[-1] + 1]
        coeffs = trimmed / radius ** np.arange(trimmed.size)
        bound = fujiwara_bound(coeffs)
        if bound <= radius:
            return coeffs, radius
        if bound > max_radius:
            raise NumericalInconsistency(
                f"root bound {bound:.3g} exceeds {max_radius:.3g}; samples too noisy")
        radius = 2.0 * bound
    raise NumericalInconsistency("could not find a radius enclosing all roots")


# -- operations ---------------------------------------------------------------

def char_poly_and_adjugate(A) -> tuple[Polynomial, PolyMatrix]:
    """``chi(s) = det(sI - A)`` and ``adj(sI - A)`` by the Faddeev-LeVerrier recursion."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    chi, adj = kernels.faddeev_leverrier(A)
    return Polynomial(chi), PolyMatrix(adj)


def numerator_matrix(sys: StateSpaceSystem) -> tuple[PolyMatrix, Polynomial]:
    """``(P, chi)`` with ``G(s) = P(s) / chi(s)``."""
    validate(sys)
    chi, adj = char_poly_and_adjugate(sys.A)
    P = PolyMatrix.constant(sys.C) @ adj @ PolyMatrix.constant(sys.B)
    P = P + PolyMatrix.constant(sys.D).scale(chi)
    return P, chi


def rosenbrock_matrices(sys: StateSpaceSystem) -> tuple[np.ndarray, np.ndarray]:
    n, m = sys.n, sys.m
    U1 = np.zeros((n + m, n + m))
    U1[:n, :n] = np.eye(n)
    U2 = np.block([[sys.A, sys.B], [sys.C, sys.D]])
    return U1, U2


def pencil_det_poly(sys: StateSpaceSystem) -> Polynomial:
    """``det(s U1 - U2)`` for the Rosenbrock pencil, by interpolation at ``n + 2`` integers."""
    validate(sys)
    if not sys.is_square:
        raise NotSquare(f"pencil determinant needs p == m, got p={sys.p}, m={sys.m}")
    U1, U2 = rosenbrock_matrices(sys)
    nodes = integer_nodes(sys.n + 2)
    vals = kernels.pencil_dets(U1, U2, nodes)
    return Polynomial(interpolate_integer_nodes(vals, nodes, sys.n))


def is_left_invertible(sys: StateSpaceSystem, tol: float = DEFAULT_TOL) -> bool:
    """Full column rank of ``P(s)`` over the rational functions.

    The rank of ``P`` is attained at all but finitely many points, and the
    exceptional set is bounded by the degree, so ``n*m + 1`` samples suffice.
    """
    validate(sys)
    if sys.p < sys.m:
        return False
    P, _ = numerator_matrix(sys)
    nodes = integer_nodes(sys.n * sys.m + 1)
    vals = P(nodes)
    best = 0
    for V in vals:
        r = rank(np.real(V), tol)
        best = max(best, r)
        if best == sys.m:
            return True
    return False


def row_subsystem(sys: StateSpaceSystem, rows) -> StateSpaceSystem:
    rows = list(rows)
    return StateSpaceSystem(sys.A, sys.B, sys.C[rows], sys.D[rows])


def even_numdet(sys: StateSpaceSystem, tol: float = DEFAULT_TOL) -> Polynomial:
    """``num det G(-s)^T G(s)`` over the denominator ``chi(s) chi(-s)``.

    By Cauchy-Binet this is ``sum_I q_I(-s) q_I(s)`` over the ``m``-row
    subsets ``I`` of the outputs, ``q_I`` being the Rosenbrock pencil
    determinant of the square subsystem on those rows. The leading terms of
    equal degree all carry the same sign, so the degree is ``2 max deg q_I``.
    The result's radius is the largest root bound of the ``q_I``.
    """
    if not is_left_invertible(sys, tol):
        raise NotLeftInvertible("transfer matrix is not left-invertible")
    total = Polynomial([0.0])
    radius = 1.0
    for rows in combinations(range(sys.p), sys.m):
        q = pencil_det_poly(row_subsystem(sys, rows)).trimmed()
        if q.is_zero():
            continue
        total = total + q.reflect() * q
        radius = max(radius, fujiwara_bound(q.coeffs))
    out = Polynomial(total.coeffs, radius)
    if out.is_zero():
        raise NumericalInconsistency("left-invertible system with zero even polynomial")
    odd = out.odd_part_ratio()
    if odd > TRIM_RTOL:
        raise NumericalInconsistency(f"num det is not even (odd/peak = {odd:.2e})")
    return out.trimmed()


def even_numdet_by_division(sys: StateSpaceSystem, tol: float = DEFAULT_TOL) -> Polynomial:
    """Same polynomial as :func:`even_numdet`, computed the long way.

    ``det(P(-s)^T P(s)) / (chi(s) chi(-s))^(m-1)``: the quotient comes from
    pointwise ratios on a circle and the division is certified by the size
    of ``det - divisor * quotient``. Forming ``P(-s)^T P(s)`` squares the
    conditioning of ``P``, so this route loses accuracy quickly as ``n``
    grows; it serves as an independent check on small systems.
    """
    if not is_left_invertible(sys, tol):
        raise NotLeftInvertible("transfer matrix is not left-invertible")
    n, m = sys.n, sys.m
    P, chi = numerator_matrix(sys)
    Phi = P.reflect().T @ P
    divisor = (chi * chi.reflect()) ** (m - 1)

    def det_phi(z):
        return kernels.polymat_dets(Phi.coeffs, z)

    q_coeffs, radius = _balanced_coeffs(lambda z: det_phi(z) / divisor(z), 2 * n)
    quotient = Polynomial(q_coeffs, radius)

    # remainder certificate, in the balanced variable s = radius * t
    npts = 2 * n * m + 1
    full = interpolate_circle(det_phi(circle_nodes(npts, radius))).real
    prod = (divisor * quotient).coeffs * radius ** np.arange((divisor * quotient).coeffs.size)
    rem = full.copy()
    rem[:prod.size] -= prod[:npts]
    if np.abs(rem).max() > 1e-6 * max(np.abs(full).max(), 1e-300):
        raise NumericalInconsistency(
            f"det(Phi) not divisible by (chi(s)chi(-s))^{m - 1}: relative remainder "
            f"{np.abs(rem).max() / np.abs(full).max():.2e}")

    deg = quotient.degree
    if deg != ZERO_DEGREE and deg > 2 * n:
        raise NumericalInconsistency(f"num det has degree {deg} > 2n = {2 * n}")
    odd = quotient.odd_part_ratio()
    if odd > TRIM_RTOL:
        raise NumericalInconsistency(f"num det is not even (odd/peak = {odd:.2e})")
    return quotient


@dataclass(frozen=True)
class TransferDims:
    n_s: int
    n_f: int
    route: str


def dims_from_transfer(sys: StateSpaceSystem, tol: float = DEFAULT_TOL) -> TransferDims:
    """``n_s`` and ``n_f = n - n_s`` read off the transfer matrix.

    Square systems with a regular Rosenbrock pencil use the pencil
    determinant; left-invertible systems use the even polynomial. When both
    apply they must agree.
    """
    validate(sys)
    square = None
    if sys.is_square:
        U1, U2 = rosenbrock_matrices(sys)
        if is_regular_pencil(U1, U2, tol):
            square = pencil_det_poly(sys).degree
    even = None
    if is_left_invertible(sys, tol):
        deg = even_numdet(sys, tol).degree
        if deg % 2:
            raise NumericalInconsistency(f"even polynomial has odd degree {deg}")
        even = deg // 2
    if square is None and even is None:
        if sys.is_square:
            raise SingularPencil("pencil is singular and G is not left-invertible")
        raise Inapplicable("system is neither square-regular nor left-invertible")
    if square is not None and even is not None and square != even:
        raise NumericalInconsistency(
            f"pencil route gives n_s={square}, even route gives n_s={even}")
    n_s = square if square is not None else even
    return TransferDims(n_s, sys.n - n_s, "square" if square is not None else "even")


def strictly_proper_product_check(sys: StateSpaceSystem, u, tol: float = 1e-6) -> bool:
    """Strict properness of ``G(s) U(s)``, checked on both sides of the norm identity.

    ``U(s) = sum_i u_i s^i``. Side one requires every coefficient of degree
    ``>= n`` in ``P U`` to vanish; side two requires the same of degree
    ``>= 2n`` in ``U(-s)^T Phi(s) U(s)`` with ``Phi = P(-s)^T P(s)``. Side two
    is quadratic in ``P U``, so its threshold is compared after a square
    root. Disagreement raises NumericalInconsistency.
    """
    validate(sys)
    m, n = sys.m, sys.n
    u = np.asarray(u, dtype=float).reshape(-1, m)
    if not u.any():
        return True
    U = PolyMatrix(u.T[:, None, :].copy())  # m x 1
    P, _ = numerator_matrix(sys)
    PU = (P @ U).coeffs
    Phi = P.reflect().T @ P
    w = (U.reflect().T @ Phi @ U).coeffs

    scale = max(np.abs(P.coeffs).max(), 1e-300) * np.abs(u).sum()
    high1 = PU[..., n:]
    high2 = w[..., 2 * n:]
    first = high1.size == 0 or np.abs(high1).max() <= tol * scale
    second = high2.size == 0 or np.sqrt(np.abs(high2).max()) <= tol * scale * np.sqrt(sys.p)
    if first != second:
        raise NumericalInconsistency(
            "strict properness of G U and of U(-s)^T G(-s)^T G(s) U disagree")
    return bool(first)
