"""State-space systems ``dx/dt = Ax + Bu, y = Cx + Du``: validation, JSON I/O,
and seeded random integer systems for test corpora."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NonFiniteEntry, ParseError, ShapeMismatch

FIELDS = ("n", "m", "p", "A", "B", "C", "D")


def _frozen(x) -> np.ndarray:
    a = np.array(x, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateSpaceSystem:
    """The quadruple (A, B, C, D).

    Arrays are copied to read-only float64 on construction but not
    validated; call :func:`validate` for shape and finiteness checks.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def is_square(self) -> bool:
        return self.p == self.m

    def __eq__(self, other):
        if not isinstance(other, StateSpaceSystem):
            return NotImplemented
        return all(
            getattr(self, k).shape == getattr(other, k).shape
            and np.array_equal(getattr(self, k), getattr(other, k))
            for k in "ABCD")

    def __repr__(self):
        return f"StateSpaceSystem(n={self.n}, m={self.m}, p={self.p})"


def validate(sys: StateSpaceSystem) -> StateSpaceSystem:
    """Check shapes and finiteness; return ``sys`` unchanged when valid."""
    for name in "ABCD":
        if getattr(sys, name).ndim != 2:
            raise ShapeMismatch(f"{name} must be a 2-D matrix")
    n, m = sys.B.shape
    p = sys.C.shape[0]
    if n < 1 or m < 1 or p < 1:
        raise ShapeMismatch(f"dimensions must be >= 1, got n={n}, m={m}, p={p}")
    expected = {"A": (n, n), "B": (n, m), "C": (p, n), "D": (p, m)}
    for name, shape in expected.items():
        got = getattr(sys, name).shape
        if got != shape:
            raise ShapeMismatch(f"{name} has shape {got}, expected {shape}")
    for name in "ABCD":
        if not np.all(np.isfinite(getattr(sys, name))):
            raise NonFiniteEntry(f"{name} contains non-finite entries")
    return sys


def random_system(n: int, m: int, p: int, seed: int = 0,
                  entry_range: tuple[int, int] = (-3, 3)) -> StateSpaceSystem:
    """Integer-valued system with entries uniform on ``entry_range`` (inclusive)."""
    if min(n, m, p) < 1:
        raise ShapeMismatch(f"dimensions must be >= 1, got n={n}, m={m}, p={p}")
    lo, hi = (int(v) for v in entry_range)
    if lo > hi:
        raise ValueError(f"empty entry range [{lo}, {hi}]")
    rng = np.random.default_rng(seed)

    def draw(shape):
        return rng.integers(lo, hi + 1, size=shape).astype(float)

    return StateSpaceSystem(draw((n, n)), draw((n, m)), draw((p, n)), draw((p, m)))


# -- JSON interchange ---------------------------------------------------------

def to_dict(sys: StateSpaceSystem) -> dict:
    return {
        "n": sys.n, "m": sys.m, "p": sys.p,
        "A": sys.A.tolist(), "B": sys.B.tolist(),
        "C": sys.C.tolist(), "D": sys.D.tolist(),
    }


def _matrix_field(doc, name, rows, cols):
    raw = doc[name]
    if not isinstance(raw, list):
        raise ParseError("expected a nested array", field=name)
    if len(raw) != rows:
        raise ShapeMismatch(f"{name} has {len(raw)} rows, expected {rows}")
    for i, row in enumerate(raw):
        if not isinstance(row, list):
            raise ParseError(f"row {i} is not an array", field=name)
        if len(row) != cols:
            raise ShapeMismatch(f"{name} row {i} has length {len(row)}, expected {cols}")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"non-numeric entry {v!r} in row {i}", field=name)
    return np.array(raw, dtype=float).reshape(rows, cols)


def from_dict(doc) -> StateSpaceSystem:
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    unknown = sorted(set(doc) - set(FIELDS))
    if unknown:
        raise ParseError("unknown field", field=unknown[0])
    for name in FIELDS:
        if name not in doc:
            raise ParseError("missing required field", field=name)
    dims = {}
    for name in "nmp":
        v = doc[name]
        if isinstance(v, bool) or not isinstance(v, int):
            raise ParseError(f"expected an integer, got {v!r}", field=name)
        if v < 1:
            raise ShapeMismatch(f"{name} must be >= 1, got {v}")
        dims[name] = v
    n, m, p = dims["n"], dims["m"], dims["p"]
    sys = StateSpaceSystem(
        _matrix_field(doc, "A", n, n), _matrix_field(doc, "B", n, m),
        _matrix_field(doc, "C", p, n), _matrix_field(doc, "D", p, m))
    return validate(sys)


def loads(text: str) -> StateSpaceSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return from_dict(doc)


def dumps(sys: StateSpaceSystem) -> str:
    validate(sys)
    # json writes floats with repr, which round-trips doubles exactly
    return json.dumps(to_dict(sys), indent=2) + "\n"


def load(path) -> StateSpaceSystem:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(sys: StateSpaceSystem, path) -> None:
    text = dumps(sys)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)

