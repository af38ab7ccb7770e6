"""Command-line front end.

Results go to stdout and depend only on the request, so reruns are
byte-identical whatever the cache state or ``--jobs``. Run metadata
(mode, cache hits, timing) goes to stderr as one ``#`` line.

Exit codes: 0 success, 2 invalid input, 3 internal inconsistency,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import List, Optional, Sequence

from . import __version__
from .engine import CACHE_ENV, DEFAULT_EXACT_CEILING, MODES, ChiRequest, ChiResult, Engine, MemoCache
from .errors import InputError, InternalConsistencyError, InversionUnsupported, PoleError, QKError
from .arith.text import var_name

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_VERIFY = 0, 2, 3, 4


# -- argument parsing -------------------------------------------------------------


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _int_range(text: str) -> List[int]:
    """``a`` or ``a:b`` (inclusive)."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":", 1))
            if hi < lo:
                raise InputError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise InputError(f"expected an integer or a range a:b, got {text!r}") from None


def _common(p: argparse.ArgumentParser, fmt: str = "text") -> None:
    p.add_argument("--format", choices=("text", "csv", "json"), default=fmt)
    p.add_argument("--cache", metavar="PATH", help=f"cache file (default: ${CACHE_ENV})")
    p.add_argument("--no-cache", action="store_true", help="do not read or write a cache file")
    p.add_argument("--exact-ceiling", type=int, default=DEFAULT_EXACT_CEILING, metavar="N",
                   help="largest n handled in exact mode by --mode auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkgenus1",
        description="Euler characteristics of H^hodge (x) L_1^d1 (x) ... (x) L_n^dn on genus-one moduli stacks.",
        epilog="Negative exponent lists need '=': --exps=-1,-2",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chi", help="one Euler characteristic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--hodge", type=int, default=0)
    p.add_argument("--exps", required=True, help="comma-separated exponents d1,...,dn")
    p.add_argument("--mode", choices=MODES, default="auto")
    _common(p)

    p = sub.add_parser("table", help="Euler characteristics over a box of exponents")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--hodge", default="0", help="integer or inclusive range a:b")
    p.add_argument("--exps", required=True, help="one integer or range a:b per marked point, comma-separated")
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--jobs", type=int, default=1, metavar="K")
    _common(p, "csv")

    p = sub.add_parser("series", help="truncated power series of the full generating function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, required=True, help="total-degree truncation")
    _common(p)

    p = sub.add_parser("genfun", help="exact generating function P_(n,m) in canonical form")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, help="number of insertion variables (default n)")
    _common(p)

    p = sub.add_parser("verify", help="run the independent verification checks")
    p.add_argument("--suite", choices=("fast", "all"), default="fast")
    _common(p)

    p = sub.add_parser("cache", help="inspect or clear the cache file")
    p.add_argument("action", choices=("info", "clear"))
    _common(p)
    return parser


def _engine(args) -> Engine:
    if args.exact_ceiling < 1:
        raise InputError("--exact-ceiling must be at least 1")
    path = None if args.no_cache else (args.cache or os.environ.get(CACHE_ENV) or None)
    return Engine(MemoCache(path), exact_ceiling=args.exact_ceiling)


# -- output -------------------------------------------------------------------------


def _record(r: ChiResult) -> dict:
    return {"n": r.request.n, "hodge": r.request.hodge, "exps": list(r.request.exps), "mode": r.mode, "chi": r.value}


def emit_table(rows: Sequence[ChiResult], fmt: str, n: int) -> str:
    """CSV with header ``n,hodge,d1..dn,chi``, a JSON array, or plain columns."""
    if fmt == "json":
        return json.dumps([_record(r) for r in rows], indent=1) + "\n"
    header = ["n", "hodge"] + [f"d{i}" for i in range(1, n + 1)] + ["chi"]
    body = [[r.request.n, r.request.hodge, *r.request.exps, r.value] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    return "".join(" ".join(str(x) for x in line) + "\n" for line in [header] + body)


def _series_output(s, fmt: str) -> str:
    names = [var_name(i) for i in range(len(s.orders))]
    items = sorted(s.items(), key=lambda t: (sum(t[0]), t[0]))
    if fmt == "json":
        doc = {"orders": list(s.orders), "cap": s.cap,
               "terms": [{"exponents": list(e), "coefficient": str(c)} for e, c in items]}
        return json.dumps(doc, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(names + ["coefficient"])
        w.writerows([[*e, c] for e, c in items])
        return buf.getvalue()
    return s.serialize() + "\n"


def _meta(engine: Engine, mode: str, t0: float) -> None:
    st = engine.cache.stats()
    print(f"# mode={mode} cache_hits={st['hits']} cache_misses={st['misses']} "
          f"cache_discarded={st['discarded']} seconds={time.perf_counter() - t0:.3f}", file=sys.stderr)


# -- commands -----------------------------------------------------------------------


def _cmd_chi(args, out) -> int:
    exps = tuple(_int_list(args.exps))
    req = ChiRequest(args.n, args.hodge, exps, args.mode)
    engine = _engine(args)
    t0 = time.perf_counter()
    mode = engine.resolve_mode(req)
    row = ChiResult(req, engine.chi(req), mode)
    if args.format == "text":
        out.write(f"{row.value}\n")
    else:
        out.write(emit_table([row], args.format, args.n))
    _meta(engine, mode, t0)
    return EXIT_OK


def _cmd_table(args, out) -> int:
    if args.n < 1:
        raise InputError(f"n must be at least 1, got {args.n}")
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    ranges = [_int_range(x.strip()) for x in args.exps.split(",")]
    if len(ranges) != args.n:
        raise InputError(f"--exps lists {len(ranges)} ranges for n={args.n}")
    hodges = _int_range(args.hodge)
    engine = _engine(args)
    t0 = time.perf_counter()
    rows = engine.chi_table(args.n, hodges, ranges, args.mode, args.jobs)
    out.write(emit_table(rows, args.format, args.n))
    _meta(engine, ",".join(sorted({r.mode for r in rows})) or "none", t0)
    return EXIT_OK


def _cmd_series(args, out) -> int:
    if args.order < 0:
        raise InputError("--order must be nonnegative")
    engine = _engine(args)
    t0 = time.perf_counter()
    s = engine.full_genfun_series(args.n, (args.order,) * (args.n + 1), args.order)
    out.write(_series_output(s, args.format))
    _meta(engine, "series", t0)
    return EXIT_OK


def _cmd_genfun(args, out) -> int:
    m = args.n if args.m is None else args.m
    engine = _engine(args)
    t0 = time.perf_counter()
    f = engine.partial_genfun(args.n, m)
    text = f.serialize()
    if args.format == "json":
        out.write(json.dumps({"n": args.n, "m": m, "genfun": text}) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows([["n", "m", "genfun"], [args.n, m, text]])
        out.write(buf.getvalue())
    else:
        out.write(text + "\n")
    _meta(engine, "exact", t0)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    from .oracles import run_suite

    engine = _engine(args)
    results = run_suite(args.suite, engine)
    if args.format == "json":
        out.write(json.dumps([r.to_dict() for r in results], indent=1) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "status", "detail", "witness"])
        w.writerows([[r.name, r.status, r.detail, r.witness or ""] for r in results])
        out.write(buf.getvalue())
    else:
        for r in results:
            line = f"{r.status.upper():4} {r.name}: {r.detail}"
            if r.witness:
                line += f" [{r.witness}]"
            out.write(line + "\n")
    failed = [r.name for r in results if not r.passed]
    print(f"# suite={args.suite} checks={len(results)} failed={len(failed)}"
          + (f" ({', '.join(failed)})" if failed else ""), file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def _cmd_cache(args, out) -> int:
    engine = _engine(args)
    cache = engine.cache
    if not cache.path:
        raise InputError(f"no cache file: pass --cache PATH or set {CACHE_ENV}")
    if args.action == "clear":
        cache.clear()
        out.write(f"cleared {cache.path}\n")
        return EXIT_OK
    keys = cache.keys()
    size = os.path.getsize(cache.path) if os.path.exists(cache.path) else 0
    info = {"path": cache.path, "bytes": size, "entries": [str(k) for k in keys],
            "discarded": cache.stats()["discarded"]}
    if args.format == "json":
        out.write(json.dumps(info) + "\n")
    else:
        out.write(f"path {info['path']}\nbytes {size}\nentries {len(keys)}: {' '.join(info['entries'])}\n"
                  f"discarded {info['discarded']}\n")
    return EXIT_OK


_COMMANDS = {"chi": _cmd_chi, "table": _cmd_table, "series": _cmd_series, "genfun": _cmd_genfun,
             "verify": _cmd_verify, "cache": _cmd_cache}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except InputError as exc:
        print(f"qkgenus1: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InternalConsistencyError, InversionUnsupported, PoleError) as exc:
        print(f"qkgenus1: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except QKError as exc:
        print(f"qkgenus1: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
