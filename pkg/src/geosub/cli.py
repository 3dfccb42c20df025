"""Command-line front end: ``geosub compute | check | random``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, markov, oracle, slowspace, sysmodel, transferdim
from .errors import (
    GeosubError,
    Inapplicable,
    InfiniteImpulsiveSpace,
    NonFiniteEntry,
    ParseError,
    ShapeMismatch,
)
from .linalg import DEFAULT_TOL, SubspaceBasis

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_INVALID = 2
EXIT_INAPPLICABLE = 3
EXIT_INFINITE = 4

QUANTITIES = ("fast", "slow", "goodslow", "uimp", "dims")

_INPUT_ERRORS = (ParseError, ShapeMismatch, NonFiniteEntry, OSError)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on its own; raise instead so main() owns every exit
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def _basis_columns(B: SubspaceBasis) -> list[list[float]]:
    return [col.tolist() for col in B.basis.T]


def _entry(name, status, dim=None, basis=None, diagnostics=None) -> dict:
    out = {"name": name, "status": status, "dim": dim}
    if status == "ok" and basis is not None:
        out["basis"] = basis
    out["diagnostics"] = diagnostics or {}
    return out


def _compute_one(sys_, what, tol):
    """Return ``(entry, exit_code)`` for one quantity."""
    try:
        if what == "fast":
            R = markov.fast_space(sys_, tol)
            return _entry(what, "ok", R.dim, _basis_columns(R)), EXIT_OK
        if what == "uimp":
            imp = markov.impulsive_space(sys_, tol)
            cols = [c.tolist() for c in imp.N.T]
            return _entry(what, "ok", imp.f, cols, {"d": imp.d, "order": imp.order}), EXIT_OK
        if what in ("slow", "goodslow"):
            fn = slowspace.weakly_unobservable if what == "slow" \
                else slowspace.good_weakly_unobservable
            O, eig = fn(sys_, tol)
            F = slowspace.friend_feedback(eig, tol)
            ev = sorted(eig.eigenvalues.tolist(), key=lambda z: (z.real, z.imag))
            diag = {"eigenvalues": [[z.real, z.imag] for z in ev],
                    "friend_feedback": F.tolist(),
                    "friend_residuals": list(slowspace.friend_residuals(sys_, eig, F))}
            return _entry(what, "ok", O.dim, _basis_columns(O), diag), EXIT_OK
        if what == "dims":
            d = transferdim.dims_from_transfer(sys_, tol)
            return _entry(what, "ok", d.n_f,
                          diagnostics={"n_s": d.n_s, "n_f": d.n_f, "route": d.route}), EXIT_OK
    except InfiniteImpulsiveSpace as exc:
        return _entry(what, "inapplicable", diagnostics={
            "error": type(exc).__name__, "message": str(exc)}), EXIT_INFINITE
    except Inapplicable as exc:
        return _entry(what, "inapplicable", diagnostics={
            "error": type(exc).__name__, "message": str(exc)}), EXIT_INAPPLICABLE
    except GeosubError as exc:
        return _entry(what, "error", diagnostics={
            "error": type(exc).__name__, "message": str(exc)}), EXIT_INAPPLICABLE
    raise ValueError(f"unknown quantity {what!r}")


def build_report(sys_, whats, tol) -> tuple[dict, int]:
    entries, code = [], EXIT_OK
    for what in whats:
        entry, c = _compute_one(sys_, what, tol)
        entries.append(entry)
        code = max(code, c)
    report = {"tool": "geosub", "version": __version__, "tol": tol,
              "system": {"n": sys_.n, "m": sys_.m, "p": sys_.p},
              "quantities": entries}
    return report, code


def _emit(text: str, path, out) -> None:
    if path is None:
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_compute(args, out, err) -> int:
    try:
        sys_ = sysmodel.load(args.input)
    except _INPUT_ERRORS as exc:
        print(f"invalid input: {exc}", file=err)
        return EXIT_INVALID
    whats = QUANTITIES if args.what == "all" else (args.what,)
    report, code = build_report(sys_, whats, args.tol)
    try:
        _emit(json.dumps(report, indent=2) + "\n", args.output, out)
    except OSError as exc:
        print(f"cannot write report: {exc}", file=err)
        return EXIT_INVALID
    return code


def _jsonable(x):
    if isinstance(x, SubspaceBasis):
        return {"dim": x.dim}
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def cmd_check(args, out, err) -> int:
    if args.input is not None:
        try:
            systems = [sysmodel.load(args.input)]
        except _INPUT_ERRORS as exc:
            print(f"invalid input: {exc}", file=err)
            return EXIT_INVALID
    else:
        try:
            systems = [sysmodel.random_system(args.n, args.m, args.p, args.seed + k)
                       for k in range(args.random)]
        except (ShapeMismatch, ValueError) as exc:
            print(f"invalid input: {exc}", file=err)
            return EXIT_INVALID

    def run(s):
        return oracle.cross_check(s, args.tol)

    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(run, systems))  # map keeps seed order
    else:
        reports = [run(s) for s in systems]

    bad = 0
    for k, rep in enumerate(reports):
        if rep.all_agree:
            continue
        bad += len(rep.disagreements)
        doc = rep.to_dict()
        doc["index"] = k
        if args.input is None:
            doc["seed"] = args.seed + k
        print(json.dumps(doc, indent=2, default=_jsonable), file=out)
    compared = sum(r.compared for r in reports)
    print(f"checked {len(reports)} systems, {compared} quantities, {bad} disagreements", file=out)
    return EXIT_DISAGREE if bad else EXIT_OK


def cmd_random(args, out, err) -> int:
    try:
        sys_ = sysmodel.random_system(args.n, args.m, args.p, args.seed)
    except (ShapeMismatch, ValueError) as exc:
        print(f"invalid input: {exc}", file=err)
        return EXIT_INVALID
    try:
        sysmodel.save(sys_, args.output)
    except OSError as exc:
        print(f"cannot write {args.output}: {exc}", file=err)
        return EXIT_INVALID
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geosub",
                     description="Slow and fast subspaces of linear state-space systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="compute subspaces and dimensions for one system")
    p.add_argument("--input", required=True)
    p.add_argument("--what", choices=QUANTITIES + ("all",), default="all")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--output")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("check", help="cross-check closed forms against the recursive algorithms")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--random", type=int, metavar="K")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--jobs", type=int, default=1, help="worker threads for --random")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("random", help="write a seeded random integer system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check" and args.random is not None:
            if None in (args.n, args.m, args.p):
                raise _Usage("geosub check: error: --random needs --n, --m and --p")
            if args.random < 1:
                raise _Usage("geosub check: error: --random must be >= 1")
    except _Usage as exc:
        print(parser.format_usage().rstrip(), file=err)
        print(exc, file=err)
        return EXIT_INVALID
    if not getattr(args, "tol", 1.0) > 0:
        print(f"invalid input: --tol must be positive, got {args.tol}", file=err)
        return EXIT_INVALID
    return args.func(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
