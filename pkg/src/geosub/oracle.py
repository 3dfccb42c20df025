"""Recursive subspace algorithms used as ground truth for the closed forms,
and :func:`cross_check`, which runs every applicable pair."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import markov, slowspace, transferdim
from .errors import GeosubError, Inapplicable, InfiniteImpulsiveSpace
from .linalg import (
    DEFAULT_TOL,
    SubspaceBasis,
    image_basis,
    nullspace_basis,
    orthogonal_complement,
    subspace_equal,
    subspace_intersection,
)
from .sysmodel import StateSpaceSystem, validate

# subspace comparisons run at this multiple of the rank tolerance (1e-8 at default)
SUBSPACE_TOL_FACTOR = 10


def recursive_fast_space(sys: StateSpaceSystem, tol: float = DEFAULT_TOL,
                         history: list | None = None) -> SubspaceBasis:
    """Strongly reachable subspace as the limit of
    ``R_0 = 0``, ``R_{i+1} = [A B] ((R_i x R^m) ∩ ker [C D])``.

    If ``history`` is a list, every iterate ``R_0, R_1, ...`` is appended.
    """
    validate(sys)
    n, m = sys.n, sys.m
    AB = np.hstack([sys.A, sys.B])
    CD = np.hstack([sys.C, sys.D])
    R = SubspaceBasis.zero(n, tol)
    if history is not None:
        history.append(R)
    for _ in range(n + 1):
        Q = orthogonal_complement(R).basis.T  # annihilates R
        K = np.vstack([CD, np.hstack([Q, np.zeros((Q.shape[0], m))])])
        W = nullspace_basis(K, tol)
        if W.dim:
            R_next = image_basis(AB @ W.basis, tol, scale=np.linalg.norm(AB, 2))
        else:
            R_next = SubspaceBasis.zero(n, tol)
        if history is not None:
            history.append(R_next)
        if subspace_equal(R_next, R, SUBSPACE_TOL_FACTOR * tol):
            return R_next
        R = R_next
    return R


def recursive_weakly_unobservable(sys: StateSpaceSystem, tol: float = DEFAULT_TOL,
                                  history: list | None = None) -> SubspaceBasis:
    """Largest output-nulling controlled-invariant subspace, via
    ``V_0 = R^n``, ``V_{i+1} = {x : Ax + Bu in V_i, Cx + Du = 0 for some u}``."""
    validate(sys)
    n = sys.n
    V = SubspaceBasis.full(n, tol)
    if history is not None:
        history.append(V)
    for _ in range(n + 1):
        Q = orthogonal_complement(V).basis.T
        K = np.vstack([np.hstack([Q @ sys.A, Q @ sys.B]), np.hstack([sys.C, sys.D])])
        W = nullspace_basis(K, tol)
        if W.dim:
            V_next = image_basis(W.basis[:n], tol, scale=1.0)
        else:
            V_next = SubspaceBasis.zero(n, tol)
        if history is not None:
            history.append(V_next)
        if subspace_equal(V_next, V, SUBSPACE_TOL_FACTOR * tol):
            return V_next
        V = V_next
    return V


# -- cross validation ---------------------------------------------------------

@dataclass
class CheckEntry:
    quantity: str
    status: str  # "ok" | "inapplicable" | "error"
    closed_form: object = None
    oracle: object = None
    agree: bool | None = None
    detail: str = ""


@dataclass
class CrossCheckReport:
    n: int
    m: int
    p: int
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def disagreements(self) -> list[CheckEntry]:
        return [e for e in self.entries if e.agree is False or e.status == "error"]

    @property
    def compared(self) -> int:
        return sum(1 for e in self.entries if e.agree is not None)

    @property
    def all_agree(self) -> bool:
        return not self.disagreements

    def get(self, quantity: str) -> CheckEntry:
        for e in self.entries:
            if e.quantity == quantity:
                return e
        raise KeyError(quantity)

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "p": self.p,
                "entries": [asdict(e) for e in self.entries]}


def cross_check(sys: StateSpaceSystem, tol: float = DEFAULT_TOL) -> CrossCheckReport:
    """Run every applicable closed form next to its independent counterpart.

    Disagreements and numerical failures become report entries; nothing is
    raised for an individual check.
    """
    validate(sys)
    stol = SUBSPACE_TOL_FACTOR * tol
    rep = CrossCheckReport(sys.n, sys.m, sys.p)
    add = rep.entries.append

    R_oracle = recursive_fast_space(sys, tol)
    R_closed = None
    f = None
    try:
        imp = markov.impulsive_space(sys, tol)
        f = imp.f
        R_closed = markov.fast_space(sys, tol, imp)
    except InfiniteImpulsiveSpace as exc:
        add(CheckEntry("fast_space", "inapplicable", None, R_oracle.dim, None, str(exc)))
    except GeosubError as exc:
        add(CheckEntry("fast_space", "error", None, R_oracle.dim, None, repr(exc)))
    else:
        add(CheckEntry("fast_space", "ok", R_closed.dim, R_oracle.dim,
                       subspace_equal(R_closed, R_oracle, stol)))
        add(CheckEntry("dim_fast_space_vs_f", "ok", R_closed.dim, f, R_closed.dim == f))

    O_closed = None
    if sys.is_square:
        V_oracle = recursive_weakly_unobservable(sys, tol)
        try:
            O_closed, eig = slowspace.weakly_unobservable(sys, tol)
        except Inapplicable as exc:
            add(CheckEntry("slow_space", "inapplicable", None, V_oracle.dim, None, str(exc)))
        except GeosubError as exc:
            add(CheckEntry("slow_space", "error", None, V_oracle.dim, None, repr(exc)))
        else:
            add(CheckEntry("slow_space", "ok", O_closed.dim, V_oracle.dim,
                           subspace_equal(O_closed, V_oracle, stol)))
            deg = transferdim.pencil_det_poly(sys).degree
            add(CheckEntry("dim_slow_space_vs_pencil_degree", "ok", O_closed.dim, deg,
                           O_closed.dim == deg))
            F = slowspace.friend_feedback(eig, tol)
            res = max(slowspace.friend_residuals(sys, eig, F))
            add(CheckEntry("friend_feedback_residual", "ok", res, 0.0,
                           res <= 100 * stol * max(1.0, np.abs(F).max()),
                           f"residual {res:.3e}"))
    else:
        add(CheckEntry("slow_space", "inapplicable", None, None, None, "system is not square"))

    try:
        dims = transferdim.dims_from_transfer(sys, tol)
    except Inapplicable as exc:
        add(CheckEntry("transfer_n_f_vs_f", "inapplicable", None, f, None, str(exc)))
    except GeosubError as exc:
        add(CheckEntry("transfer_n_f_vs_f", "error", None, f, None, repr(exc)))
    else:
        if f is None:
            add(CheckEntry("transfer_n_f_vs_f", "error", dims.n_f, None, None,
                           "left-invertible system but impulsive space unavailable"))
        else:
            add(CheckEntry("transfer_n_f_vs_f", "ok", dims.n_f, f, dims.n_f == f,
                           f"route {dims.route}"))
        if O_closed is not None and R_closed is not None and sys.is_square:
            inter = subspace_intersection(O_closed, R_closed, tol)
            total = O_closed.dim + R_closed.dim
            add(CheckEntry("slow_fast_direct_sum", "ok", total, sys.n,
                           total == sys.n and inter.dim == 0,
                           f"dim intersection {inter.dim}"))
    return rep
