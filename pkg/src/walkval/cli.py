"""``walkval`` command line.

Exit codes: 0 success, 1 verification failure or mismatch, 2 usage or
input error, 3 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .automaton import DEFAULT_STATE_LIMIT, dump, language_equals_equality_cases, minimize, synthesize
from .bfile import BFileError, parse_bfile
from .cache import SequenceCache, default_cache_path
from .errors import ResourceLimitError
from .poly import parse_symmetric
from .reduction import HALT_EMPTY, HALT_MODES
from .verify import SCENARIO_NAMES, failures, get_scenario, render_rows, run_scenario
from .walks import abelian_square_count, domb, gen_domb, grid_colorings, walk_count, walk_valuation

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "()"):
        return []
    try:
        return [int(t) for t in text.strip("()").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _params(pairs: list[str] | None) -> dict[str, int]:
    out = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise UsageError(f"--param {key} needs an integer value") from None
    return out


def _cache(args) -> SequenceCache | None:
    path = getattr(args, "cache", None) or default_cache_path()
    return SequenceCache(path) if path else None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_walks(args, out) -> int:
    cache = _cache(args)
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        v = walk_valuation(args.d, n, cache)
        rows.append((n, v.s, v.w, v.w_star))
    if args.format == "json":
        keys = ("n", "s2", "w", "w_star") if args.star else ("n", "s2", "w")
        payload = {"d": args.d, "rows": [dict(zip(keys, r)) for r in rows]}
        out.write(json.dumps(payload, indent=2) + "\n")
        return EXIT_OK
    out.write(f"#walks d={args.d}\n")
    out.write("#n\ts2\tw\tw_star\n" if args.star else "#n\ts2\tw\n")
    for n, s, w, ws in rows:
        out.write(f"{n}\t{s}\t{w}\t{ws}\n" if args.star else f"{n}\t{s}\t{w}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        sc = get_scenario(args.scenario, **_params(args.param))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = run_scenario(sc, args.n_max, jobs=args.jobs, cache=_cache(args))
    out.write(render_rows(sc, rows, args.format))
    return EXIT_FAIL if failures(rows) else EXIT_OK


def cmd_automaton(args, out) -> int:
    try:
        P = parse_symmetric(args.poly, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        aut = synthesize(args.p, args.r, args.e, P, args.mode, args.alphabet, args.letters,
                         args.state_limit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not args.no_minimize:
        aut = minimize(aut)
    out.write(dump(aut, args.format))
    status = EXIT_OK
    if args.crosscheck is not None:
        if not args.scenario:
            raise UsageError("--crosscheck needs --scenario")
        try:
            sc = get_scenario(args.scenario, **_params(args.param))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report = language_equals_equality_cases(aut, sc, args.crosscheck, jobs=args.jobs)
        out.write(report.render())
        if not report.ok:
            status = EXIT_FAIL
    return status


_KINDS = {
    "W": ("d",),
    "Wstar": ("d",),
    "Domb": (),
    "GenDomb": ("a", "b", "c"),
    "U": ("k", "l"),
}


def _term_function(kind: str, params: list[int], cache):
    need = _KINDS[kind]
    if len(params) != len(need):
        raise UsageError(f"kind {kind} needs --params {','.join(need) or '(none)'}")
    if kind == "W":
        return lambda n: walk_count(params[0], n, cache)
    if kind == "Wstar":
        return lambda n: abelian_square_count(params[0], n, cache)
    if kind == "Domb":
        return domb
    if kind == "GenDomb":
        return lambda n: gen_domb(tuple(params), n)
    return lambda n: grid_colorings(params[0], params[1], n)


def cmd_crosscheck(args, out) -> int:
    path = Path(args.path)
    if not path.is_file():
        raise UsageError(f"no such b-file: {path}")
    try:
        entries = parse_bfile(path)
    except BFileError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if any(e.n < 0 for e in entries):
        raise UsageError(f"{path}: negative index")
    f = _term_function(args.kind, args.params, _cache(args))
    mismatches = []
    for e in entries:
        got = f(e.n)
        if got != e.value:
            mismatches.append((e, got))
    label = args.kind + (f"({','.join(map(str, args.params))})" if args.params else "")
    out.write(f"#crosscheck {label} {path.name} terms={len(entries)} mismatches={len(mismatches)}\n")
    if mismatches:
        out.write("#line\tn\tfile\tcomputed\n")
        for e, got in mismatches:
            out.write(f"{e.line_no}\t{e.n}\t{e.value}\t{got}\n")
    return EXIT_FAIL if mismatches else EXIT_OK


def cmd_cache(args, out) -> int:
    cache = _cache(args)
    if cache is None:
        raise UsageError("no cache configured; pass --cache PATH or set WALKVAL_CACHE")
    if args.action == "clear":
        cache.clear()
        out.write(f"#cleared {cache.path}\n")
        return EXIT_OK
    out.write(f"#cache {cache.path} records={len(cache)}\n")
    out.write("#kind\tparams\trecords\tmax_n\n")
    for kind, params, count, top in cache.summary():
        out.write(f"{kind}\t{params}\t{count}\t{top}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walkval", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, jobs=True):
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")
        p.add_argument("--cache", metavar="PATH", help="sequence cache file (default: $WALKVAL_CACHE)")
        if jobs:
            p.add_argument("--jobs", type=_positive, default=1, help="worker processes")

    w = sub.add_parser("walks", help="valuations w_d(n) of closed walk counts")
    w.add_argument("--d", type=_positive, required=True)
    w.add_argument("--n-max", type=int, required=True)
    w.add_argument("--n-min", type=_positive, default=1)
    w.add_argument("--star", action="store_true", help="also print w*_d(n)")
    common(w, jobs=False)
    w.set_defaults(func=cmd_walks)

    v = sub.add_parser("verify", help="sweep one scenario over n")
    v.add_argument("scenario", choices=SCENARIO_NAMES)
    v.add_argument("--n-max", type=int, required=True)
    v.add_argument("--param", action="append", metavar="KEY=VALUE", help="scenario parameter")
    common(v)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("automaton", help="synthesize, minimize and dump an automaton")
    a.add_argument("--p", type=int, default=2)
    a.add_argument("--r", type=_positive, default=2)
    a.add_argument("--e", type=_int_list, default=[-1], help="exponents, e.g. --e=-4,1")
    a.add_argument("--poly", default="1", help="symmetric polynomial, e.g. '1' or 'e1+1'")
    a.add_argument("--mode", choices=HALT_MODES, default=HALT_EMPTY)
    a.add_argument("--alphabet", choices=("multiset", "digit-sum"), default="multiset")
    a.add_argument("--letters", choices=("cf", "all"), default="cf")
    a.add_argument("--state-limit", type=_positive, default=DEFAULT_STATE_LIMIT)
    a.add_argument("--no-minimize", action="store_true")
    a.add_argument("--crosscheck", type=int, metavar="N_MAX")
    a.add_argument("--scenario", choices=SCENARIO_NAMES)
    a.add_argument("--param", action="append", metavar="KEY=VALUE")
    common(a)
    a.set_defaults(func=cmd_automaton)

    c = sub.add_parser("crosscheck", help="compare a b-file against recomputed terms")
    c.add_argument("path")
    c.add_argument("--kind", choices=tuple(_KINDS), required=True)
    c.add_argument("--params", type=_int_list, default=[])
    c.add_argument("--cache", metavar="PATH")
    c.set_defaults(func=cmd_crosscheck)

    k = sub.add_parser("cache", help="inspect or clear the sequence cache")
    k.add_argument("action", choices=("inspect", "clear"))
    k.add_argument("--cache", metavar="PATH")
    k.set_defaults(func=cmd_cache)
    return ap


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"walkval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"walkval: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
