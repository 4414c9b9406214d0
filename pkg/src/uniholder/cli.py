"""Command-line interface: ``gen``, ``analyze``, ``verify`` and ``criterion``.

Exit codes: 0 success, 1 a verify suite failed, 2 usage or input error,
3 degenerate estimation (some estimate could not be formed).
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict
import io as _io
import json
import sys
import warnings

from . import __version__, kernels
from .errors import AccuracyError, DomainError, HolderError, TruncationError
from .estimators import irregularity_criterion
from .io import SignalFile, load_input, write_pyramid
from .report import STATUS_DEGENERATE, analyze_pyramid, analyze_signal, summary_line
from .smoothness import M_CAP
from .verify import SUITES, run_suite
from .wavelets import WaveletSpec, dwt_pyramid
from .zoo import (Cex1Params, FabeParams, Grid, cex1_signal, cex1_terms, fabe_series, fabe_signal,
                  gap_pyramid, weierstrass, weierstrass_exponent)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument types


def int_expr(text):
    """Integer, also accepting ``2^k`` and ``2**k``."""
    t = text.strip().replace("**", "^")
    try:
        if "^" in t:
            base, exp = t.split("^", 1)
            return int(base) ** int(exp)
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def order_arg(text):
    if text == "auto":
        return "auto"
    try:
        M = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"M must be 'auto' or an integer, got {text!r}") from None
    if not 1 <= M <= M_CAP:
        raise argparse.ArgumentTypeError(f"M must lie in [1, {M_CAP}]")
    return M


def window_arg(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like jmin:jmax, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def wavelet_arg(text):
    try:
        return WaveletSpec.parse(text)
    except (DomainError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# --------------------------------------------------------------------------
# parser


def _grid_options(p, x0=0.0):
    p.add_argument("--n", type=int_expr, default=2**16, help="number of samples (default 2^16)")
    p.add_argument("--x0", type=float, default=x0, help="left end of the window")
    p.add_argument("--length", type=float, default=2.0, help="window length")
    p.add_argument("--extension", choices=("periodic", "clamp"), default="periodic")
    p.add_argument("-o", "--output", required=True, help="payload path; a .csv suffix writes CSV")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uniholder",
        description="Estimate lower and upper global Hölder indices of sampled signals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a reference signal or pyramid")
    gsub = gen.add_subparsers(dest="generator", required=True)

    w = gsub.add_parser("weierstrass", help="sum of a^n cos(b^n pi x)")
    w.add_argument("--a", type=float, required=True)
    w.add_argument("--b", type=int, default=2)
    w.add_argument("--terms", type=int, default=None, help="number of terms (default: until a^n < 1e-12)")
    _grid_options(w)

    c = gsub.add_parser("cex1", help="three-block wavelet series")
    c.add_argument("--alpha", type=float, required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--ell0", type=int, default=3)
    c.add_argument("--truncation", type=int, default=2, help="number of blocks")
    c.add_argument("--wavelet-N", type=int, default=4, dest="wavelet_N")
    c.add_argument("--clip", action="store_true", help="drop scales above 2^30 instead of failing")
    _grid_options(c, x0=-0.5)

    f = gsub.add_parser("fabe", help="lacunary sine series")
    f.add_argument("--alpha", type=float, required=True)
    f.add_argument("--eps", type=float, required=True)
    f.add_argument("--growth", type=float, default=2.0)
    f.add_argument("--nmax", type=int, default=4)
    f.add_argument("--jcap", type=int, default=30)
    _grid_options(f)

    g = gsub.add_parser("gap-pyramid", help="pyramid with vanishing scales (JSON)")
    g.add_argument("--alpha", type=float, required=True, help="envelope exponent")
    g.add_argument("--M", type=int, default=1)
    g.add_argument("--pattern", default="alternating", help="all, alternating, dyadic or a 0/1 string")
    g.add_argument("--jmax", type=int, default=24)
    g.add_argument("--jmin", type=int, default=1)
    g.add_argument("-o", "--output", required=True)

    a = sub.add_parser("analyze", help="estimate both indices of signal or pyramid files")
    a.add_argument("inputs", nargs="+", help="signal payloads or pyramid JSON documents")
    _analysis_options(a)
    a.add_argument("--oracle-window", type=window_arg, default=None, help="modulus fit window jmin:jmax")
    a.add_argument("--alpha", type=float, action="append", default=None,
                   help="exponent for the witness search (repeatable; default: the upper estimate)")
    a.add_argument("--convention", choices=("envelope", "chord", "regression"), default="envelope")
    a.add_argument("--no-provenance", action="store_true", help="omit the provenance field")

    v = sub.add_parser("verify", help="run self-check suites")
    v.add_argument("suites", nargs="+", choices=sorted(SUITES) + ["all"])
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("-o", "--output", default=None)

    cr = sub.add_parser("criterion", help="dump the irregularity criterion trace")
    cr.add_argument("input")
    _analysis_options(cr)
    return parser


def _analysis_options(p):
    p.add_argument("--wavelet", type=wavelet_arg, default=None, help="daubechies:N (default 4) or meyer")
    p.add_argument("--M", type=order_arg, default="auto", help="difference order: auto or 1..5")
    p.add_argument("--window", type=window_arg, default=None, help="wavelet fit window jmin:jmax")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("-o", "--output", default=None, help="write here instead of stdout")


# --------------------------------------------------------------------------
# commands


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows):
    buf = _io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _grid(args):
    return Grid(n=args.n, x0=args.x0, length=args.length, extension=args.extension)


def cmd_gen(args):
    name = args.generator
    if name == "gap-pyramid":
        pattern = args.pattern
        if pattern not in ("all", "alternating", "dyadic"):
            if set(pattern) - {"0", "1"}:
                raise UsageError(f"pattern must be all, alternating, dyadic or a 0/1 string, got {pattern!r}")
            pattern = [ch == "1" for ch in pattern]
        pyr = gap_pyramid(args.alpha, args.M, pattern, args.jmax, args.jmin)
        write_pyramid(pyr, args.output)
        print(f"wrote pyramid j={pyr.j_min}..{pyr.j_max} to {args.output}", file=sys.stderr)
        return EXIT_OK

    grid = _grid(args)
    if name == "weierstrass":
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            sig = weierstrass(args.a, args.b, args.terms, grid)
        for wmsg in rec:
            print(f"warning: {wmsg.message}", file=sys.stderr)
        prov = {"generator": "weierstrass", "params": {"a": args.a, "b": args.b, "n_terms": args.terms},
                "predicted_index": weierstrass_exponent(args.a, args.b)}
    elif name == "cex1":
        p = Cex1Params(args.alpha, args.eps, args.ell0, args.truncation, args.wavelet_N, clip=args.clip)
        try:
            _, info = cex1_terms(p)
        except TruncationError as exc:
            raise UsageError(f"{exc} (feasible n = {exc.feasible})") from None
        sig = cex1_signal(p, grid)
        prov = {"generator": "cex1", "params": asdict(p), **info}
    elif name == "fabe":
        p = FabeParams(args.alpha, args.eps, args.growth, args.nmax, args.jcap)
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            _, info = fabe_series(p)
            sig, series = fabe_signal(p, grid)
        for wmsg in dict.fromkeys(str(w.message) for w in rec):
            print(f"warning: {wmsg}", file=sys.stderr)
        prov = {"generator": "fabe", "params": asdict(p), **info, "series": series.to_dict()}
    else:
        raise UsageError(f"unknown generator {name!r}")
    path = SignalFile(sig, prov).write(args.output)
    print(f"wrote {sig.n} samples to {path}", file=sys.stderr)
    return EXIT_OK


def _analyze_one(path, args):
    kind, obj = load_input(path)
    if kind == "pyramid":
        return analyze_pyramid(obj, args.M, args.window, args.alpha, convention=args.convention, source=path)
    spec = args.wavelet or WaveletSpec.daubechies(4)
    return analyze_signal(obj.signal, spec, args.M, args.window, args.oracle_window, args.alpha,
                          convention=args.convention, source=path, input_provenance=obj.provenance)


def cmd_analyze(args):
    workers = max(1, min(kernels.thread_count(), len(args.inputs)))

    def run(path):
        try:
            return _analyze_one(path, args), None
        except (DomainError, AccuracyError, OSError, ValueError) as exc:
            msg = str(exc)
            return None, msg if msg.startswith(str(path)) else f"{path}: {msg}"

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, args.inputs))
    else:
        results = [run(p) for p in args.inputs]

    code = EXIT_OK
    reports = []
    for rep, err in results:
        if err:
            print(f"error: {err}", file=sys.stderr)
            code = max(code, EXIT_USAGE)
            continue
        print(summary_line(rep), file=sys.stderr)
        if rep.status == STATUS_DEGENERATE:
            code = max(code, EXIT_DEGENERATE)
        reports.append(rep)
    if not reports:
        return code
    if args.format == "csv":
        rows = [["input"] + reports[0].csv_rows()[0]]
        for rep in reports:
            rows += [[rep.input.get("path")] + r for r in rep.csv_rows()[1:]]
        _emit(_csv_text(rows), args.output)
    else:
        docs = [r.to_dict(provenance=not args.no_provenance) for r in reports]
        doc = docs[0] if len(args.inputs) == 1 else docs
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output)
    return code


def cmd_verify(args):
    names = sorted(SUITES) if "all" in args.suites else list(dict.fromkeys(args.suites))
    results = [run_suite(n) for n in names]
    for r in results:
        for c in r.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {r.suite}: {c.name}", file=sys.stderr)
    if args.format == "csv":
        rows = [["suite", "check", "passed"]]
        rows += [[r.suite, c.name, int(c.passed)] for r in results for c in r.checks]
        _emit(_csv_text(rows), args.output)
    else:
        doc = {"passed": all(r.passed for r in results), "suites": [r.to_dict() for r in results]}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def cmd_criterion(args):
    kind, obj = load_input(args.input)
    if kind == "pyramid":
        pyr = obj
        M = args.M if args.M != "auto" else analyze_pyramid(pyr, "auto", args.window, []).M
    else:
        spec = args.wavelet or WaveletSpec.daubechies(4)
        if spec.family != "daubechies":
            raise UsageError("the criterion dump of a signal needs a Daubechies wavelet")
        pyr = dwt_pyramid(obj.signal, spec)
        M = args.M if args.M != "auto" else 1
    trace = irregularity_criterion(pyr, M)
    if args.window:
        keep = (trace.js >= args.window[0]) & (trace.js <= args.window[1])
        trace = type(trace)(trace.js[keep], trace.tail_sup[keep], trace.head_sup[keep], trace.value[keep], trace.M)
    if args.format == "csv":
        _emit(_csv_text([["j", "tail_sup", "head_sup", "value"]] + [list(r) for r in trace.rows()]), args.output)
    else:
        _emit(json.dumps(trace.to_dict(), indent=2) + "\n", args.output)
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "analyze": cmd_analyze, "verify": cmd_verify, "criterion": cmd_criterion}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, HolderError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
