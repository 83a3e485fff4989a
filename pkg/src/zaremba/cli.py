"""Command-line front end: ``zaremba <command> ...``.

Exit codes: 0 ok, 2 bad configuration or precondition, 3 infeasible
parameters or an emptied construction, 4 integer overflow, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import datetime as _dt
import json
import sys
from decimal import Decimal, InvalidOperation
from typing import IO, Iterator, Sequence

import numpy as np

from . import census, dimension, expsum
from .cfcore import Alphabet
from .ensemble import (
    Mode,
    build_ensemble,
    dump_ensemble,
    ensemble_histogram,
    load_ensemble,
    verify_ensemble_norms,
    verify_golden_ratio,
    verify_unique_expansion,
)
from .errors import (
    ConstructionEmptyError,
    ContinuantOverflowError,
    DomainError,
    InfeasibleParametersError,
)
from .parallel import resolve_workers

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_OVERFLOW = 4
EXIT_IO = 5


class ConfigError(Exception):
    pass


def parse_int(text: str) -> int:
    """Exact integer from ``"100000"``, ``"1e12"`` or ``"2**40"``."""
    text = text.strip().replace("_", "")
    if "**" in text:
        base, _, exp = text.partition("**")
        return parse_int(base) ** parse_int(exp)
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_int_list(text: str) -> list[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def parse_float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def fmt(x) -> str:
    """Integers in full, floats at 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


@contextlib.contextmanager
def open_out(path: str | None) -> Iterator[IO[str]]:
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def header(fh: IO[str], args) -> None:
    if not args.no_timestamp:
        stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        fh.write(f"# generated {stamp}\n")


def write_rows(fh: IO[str], head: Sequence[str], rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(head)
    for r in rows:
        w.writerow([fmt(v) for v in r])


def alphabet_arg(text: str) -> Alphabet:
    try:
        return Alphabet.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def mode_arg(text: str) -> Mode:
    try:
        return Mode.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# commands


def cmd_census(args) -> int:
    alphabet = args.alphabet
    if args.grid:
        rows = census.census_rows(alphabet, args.grid, args.threads)
        with open_out(args.out) as fh:
            header(fh, args)
            write_rows(fh, census.CENSUS_HEADER, rows)
        return EXIT_OK
    report = census.run_census(census.CensusConfig(alphabet, args.limit, args.threads), args.delta)
    with open_out(args.out) as fh:
        header(fh, args)
        if args.emit == "json":
            data = {
                "alphabet": list(alphabet.letters),
                "limit": report.limit,
                "word_count": report.word_count,
                "distinct": report.distinct_denominators,
                "missing_count": report.missing_count,
                "missing": report.missing,
            }
            v = report.bound_verdict
            if v is not None:
                data["bounds"] = {
                    "delta": v.delta,
                    "F_x": v.F_x,
                    "F_low": v.F_low,
                    "lower_bound": v.lower_bound,
                    "upper_bound": v.upper_bound,
                    "ratio": v.ratio,
                    "ok": v.ok,
                }
            json.dump(data, fh, indent=2, default=fmt)
            fh.write("\n")
        else:
            write_rows(
                fh,
                census.CENSUS_HEADER,
                [(report.limit, report.word_count, report.distinct_denominators, report.missing_count)],
            )
    if args.gaps_out:
        with open_out(args.gaps_out) as fh:
            census.write_gaps_csv(report.missing, fh)
    return EXIT_OK


def cmd_zaremba(args) -> int:
    gap = census.zaremba_verify(args.alphabet, args.limit, args.threads)
    with open_out(args.out) as fh:
        header(fh, args)
        write_rows(fh, ("alphabet", "limit", "first_missing"), [(args.alphabet.label, args.limit, "none" if gap is None else gap)])
    return EXIT_OK


DIMENSION_METHODS = ("hensley", "fit", "reference")


def cmd_dimension(args) -> int:
    alphabet = args.alphabet
    unknown = [m for m in args.method if m not in DIMENSION_METHODS]
    if unknown:
        raise ConfigError(f"unknown method(s) {unknown}; choose from {', '.join(DIMENSION_METHODS)}")
    rows = []
    for method in args.method:
        if method == "hensley":
            if alphabet.letters != tuple(range(1, alphabet.max_letter + 1)):
                raise ConfigError("the asymptotic formula needs an alphabet of the form 1-A")
            rows.append((alphabet.label, dimension.hensley_estimate(alphabet.max_letter)))
        elif method == "fit":
            rows.append((alphabet.label, dimension.fit_dimension(alphabet, args.grid, args.threads)))
        else:
            ref = dimension.reference_dimension(alphabet)
            if ref is None:
                raise ConfigError(f"no reference value for alphabet {alphabet.label}")
            rows.append((alphabet.label, ref))
    with open_out(args.out) as fh:
        header(fh, args)
        dimension.write_dimension_csv(rows, fh)
    return EXIT_OK


def cmd_ensemble_build(args) -> int:
    if not args.out or args.out == "-":
        raise ConfigError("ensemble build needs --out FILE for the serialised ensemble")
    e = build_ensemble(args.n, args.eps, args.alphabet, args.mode)
    with open(args.out, "w") as fh:
        dump_ensemble(e, fh)
    with open_out(args.report) as fh:
        header(fh, args)
        rows = [
            (j, f.M, f.L, e.alphas[j - 1], f.p, f.k, len(f))
            for j, f in enumerate(e.factors, start=1)
        ]
        write_rows(fh, ("factor", "M", "L", "alpha", "p", "k", "size"), rows)
    return EXIT_OK


def cmd_ensemble_verify(args) -> int:
    with open(args.ensemble) as fh:
        e = load_ensemble(fh)
    rows = []
    for j, f in enumerate(e.factors, start=1):
        g = verify_golden_ratio(f)
        rows.append((f"factor{j}_invariants", len(f.violations()) == 0, len(f.violations())))
        rows.append((f"factor{j}_golden_ratio", g.ok, max(g.max_b_dev, g.max_c_dev)))
    norms = verify_ensemble_norms(e, args.samples, args.seed)
    rows.append(("norm_windows", norms.ok, norms.pi_violations + norms.full_violations))
    uniq = verify_unique_expansion(e, args.samples, args.seed)
    rows.append(("unique_expansion", uniq.ok, uniq.collisions))
    with open_out(args.out) as fh:
        header(fh, args)
        write_rows(fh, ("check", "ok", "value"), rows)
    return EXIT_OK if all(r[1] for r in rows) else EXIT_INFEASIBLE


def _histograms(args) -> list[tuple[int, expsum.NormHistogram]]:
    if args.ensemble:
        with open(args.ensemble) as fh:
            e = load_ensemble(fh)
        return [(e.params.N, ensemble_histogram(e))]
    if not args.n:
        raise ConfigError("give --ensemble FILE or --n N[,N...] with --alphabet")
    return [(n, expsum.census_window_histogram(args.alphabet, n, args.threads)) for n in args.n]


def cmd_expsum(args) -> int:
    sub = args.expsum_cmd
    with open_out(args.out) as fh:
        if sub in ("l2", "ratio"):
            rows = _histograms(args)
            header(fh, args)
            expsum.write_ratio_csv(rows, fh)
        elif sub == "theta":
            (_, h), *_ = _histograms(args)
            thetas = args.theta if args.theta else list(np.arange(args.points) / args.points)
            values = expsum.s_theta_grid(h, thetas)
            header(fh, args)
            expsum.write_theta_csv(thetas, values, fh)
        elif sub == "knuth-yao":
            header(fh, args)
            write_rows(fh, ("b", "sum", "ratio"), [(b, *expsum.knuth_yao_check(b)) for b in args.b])
        elif sub == "dirichlet":
            header(fh, args)
            rows = []
            for t in args.theta:
                d = expsum.dirichlet_decompose(t, args.n[0], args.A)
                rows.append((t, d.a, d.q, d.K, len(d.violations()) == 0))
            write_rows(fh, ("theta", "a", "q", "K", "ok"), rows)
    return EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $ZAREMBA_THREADS or CPU count)")
    common.add_argument("--no-timestamp", action="store_true", help="omit the '# generated' header line")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    ap = argparse.ArgumentParser(prog="zaremba", description="Bounded continued fractions workbench.")
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("census", parents=[common], help="count words and denominators up to a limit")
    p.add_argument("--alphabet", type=alphabet_arg, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--limit", type=parse_int)
    g.add_argument("--grid", type=parse_int_list, help="comma-separated limits, one CSV row each")
    p.add_argument("--emit", choices=("csv", "json"), default="csv")
    p.add_argument("--delta", type=float, default=None, help="also check the counting bounds at this dimension")
    p.add_argument("--gaps-out", default=None, help="write missing denominators here")
    p.set_defaults(func=cmd_census)

    p = sp.add_parser("zaremba", parents=[common], help="smallest denominator not reached, if any")
    p.add_argument("--alphabet", type=alphabet_arg, default=Alphabet.range(5))
    p.add_argument("--limit", type=parse_int, required=True)
    p.set_defaults(func=cmd_zaremba)

    p = sp.add_parser("dimension", parents=[common], help="Hausdorff dimension estimates")
    p.add_argument("--alphabet", type=alphabet_arg, required=True)
    p.add_argument("--method", type=lambda s: s.split(","), default=["fit"], help="hensley, fit, reference (comma list)")
    p.add_argument("--grid", type=parse_float_list, default=[1e3, 1e4, 1e5, 1e6])
    p.set_defaults(func=cmd_dimension)

    p = sp.add_parser("ensemble", help="build or verify ensembles")
    esp = p.add_subparsers(dest="ensemble_cmd", required=True)
    b = esp.add_parser("build", parents=[common], help="construct and serialise an ensemble")
    b.add_argument("--n", type=parse_int, required=True)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--mode", type=mode_arg, default=Mode.relaxed(1.0), help="strict | relaxed[:scale]")
    b.add_argument("--alphabet", type=alphabet_arg, default=Alphabet.range(2))
    b.add_argument("--report", default=None, help="factor table destination (default: stdout)")
    b.set_defaults(func=cmd_ensemble_build)
    v = esp.add_parser("verify", parents=[common], help="re-check a serialised ensemble")
    v.add_argument("--ensemble", required=True)
    v.add_argument("--samples", type=parse_int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_ensemble_verify)

    p = sp.add_parser("expsum", help="exponential-sum experiments")
    xsp = p.add_subparsers(dest="expsum_cmd", required=True)
    for name, helptext in (
        ("l2", "exact L2 integral and ratio row"),
        ("ratio", "ratio rows over several N"),
        ("theta", "S(theta) on a grid"),
    ):
        x = xsp.add_parser(name, parents=[common], help=helptext)
        x.add_argument("--ensemble", default=None, help="serialised ensemble file")
        x.add_argument("--alphabet", type=alphabet_arg, default=Alphabet.range(5))
        x.add_argument("--n", type=parse_int_list, default=None, help="census window (N/2, N]")
        if name == "theta":
            x.add_argument("--theta", type=parse_float_list, default=None)
            x.add_argument("--points", type=int, default=1000)
        x.set_defaults(func=cmd_expsum)
    x = xsp.add_parser("knuth-yao", parents=[common], help="partial-quotient sums over a/b")
    x.add_argument("--b", type=parse_int_list, required=True)
    x.set_defaults(func=cmd_expsum)
    x = xsp.add_parser("dirichlet", parents=[common], help="decompose theta = a/q + K/N")
    x.add_argument("--theta", type=parse_float_list, required=True)
    x.add_argument("--n", type=parse_int_list, required=True)
    x.add_argument("--A", type=int, required=True)
    x.set_defaults(func=cmd_expsum)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.threads = resolve_workers(getattr(args, "threads", None))
        return args.func(args)
    except InfeasibleParametersError as exc:
        print(f"infeasible: {exc.constraint}" + (f" ({exc.detail})" if exc.detail else ""), file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConstructionEmptyError as exc:
        print(f"construction empty: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ContinuantOverflowError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (DomainError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
