"""Command-line entry point: ``hirschstat <command> ...``.

Exit status: 0 success, 1 I/O failure, 2 parse or usage error, 3 domain
error, 4 degenerate statistic.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import __version__
from .core import as_sample, empirical_h_integer
from .distributions import DiscreteStable, DiscretizedWeibull
from .errors import DegenerateStatisticError, DomainError, ParseError
from .estimation import confidence_set, homogeneity_statistic
from .io import ReportTable, emit_table, format_set, parse_citation_file
from .moments import moment_report
from .montecarlo import STUDY_SAMPLE_SIZES, StudyConfig, StudyRow, run_study

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_DEGENERATE = 4


def _int_list(text):
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_output(p):
    p.add_argument("--output-format", choices=("text", "tsv", "json"), default="text", help="report format (default: text)")
    p.add_argument("-o", "--output", metavar="PATH", help="write the report to PATH instead of stdout")


def _add_input(p):
    p.add_argument("file", help="citation file: 'scholar_id,count' lines or a JSON object")
    p.add_argument("--format", choices=("csv", "json"), dest="input_format", help="input format (default: from extension)")


def _add_law(p):
    p.add_argument("--dist", required=True, choices=("discrete-stable", "discretized-weibull"))
    p.add_argument("--alpha", type=float, help="discrete stable index in (0, 1]")
    p.add_argument("--lambda", type=float, dest="lam", help="discrete stable scale")
    p.add_argument("--shift", type=int, default=1, help="add this constant to stable counts (default: 1)")
    p.add_argument("--tau", type=float, help="discretized Weibull shape")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hirschstat", description="Inference for the h-index.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("compute", help="number of papers and h-index per scholar")
    _add_input(p)
    _add_output(p)

    p = sub.add_parser("ci", help="h-index confidence set per scholar")
    _add_input(p)
    p.add_argument("--level", type=float, default=0.95, help="confidence level (default: 0.95)")
    _add_output(p)

    p = sub.add_parser("test", help="compare the h-indexes of two scholars")
    _add_input(p)
    p.add_argument("--a", required=True, metavar="ID", help="first scholar")
    p.add_argument("--b", required=True, metavar="ID", help="second scholar")
    p.add_argument("--one-sided", action="store_true", help="alternative: first h-index is larger")
    _add_output(p)

    p = sub.add_parser("moments", help="exact and asymptotic moments under a citation law")
    _add_law(p)
    p.add_argument("--n", type=_int_list, required=True, metavar="N[,N...]", help="number of papers")
    _add_output(p)

    p = sub.add_parser("simulate", help="Monte Carlo study of estimator and coverage")
    _add_law(p)
    p.add_argument("--n-list", type=_int_list, default=list(STUDY_SAMPLE_SIZES), metavar="N,N,...")
    p.add_argument("--reps", type=int, default=10_000, help="replications per sample size (default: 10000)")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--level", type=float, default=0.95, help="confidence level (default: 0.95)")
    p.add_argument("--jobs", type=int, help="worker threads (default: $HINDEX_JOBS or CPU count)")
    _add_output(p)

    p = sub.add_parser("pmf", help="probability mass and survival table of a citation law")
    _add_law(p)
    p.add_argument("--kmax", type=int, required=True, help="largest count tabulated")
    _add_output(p)
    return parser


def _law(args, parser):
    if args.dist == "discrete-stable":
        if args.alpha is None or args.lam is None:
            parser.error("--dist discrete-stable requires --alpha and --lambda")
        return DiscreteStable(args.alpha, args.lam, shift=args.shift)
    if args.tau is None:
        parser.error("--dist discretized-weibull requires --tau")
    return DiscretizedWeibull(args.tau)


def _records(args):
    return parse_citation_file(args.file, args.input_format)


def _scholar_sample(record):
    if not record.counts:
        raise DomainError(f"scholar {record.scholar_id!r} has no papers")
    return as_sample(record.counts)


def cmd_compute(args, parser):
    rows = []
    for rec in _records(args):
        s = _scholar_sample(rec)
        rows.append({"scholar": rec.scholar_id, "n": s.n, "h": empirical_h_integer(s)})
    return ReportTable(["scholar", "n", "h"], rows)


def cmd_ci(args, parser):
    rows = []
    for rec in _records(args):
        s = _scholar_sample(rec)
        if not s.counts.any():
            warnings.warn(f"scholar {rec.scholar_id!r} has no citations; h = 0 and the confidence set is {{0}}")
        r = confidence_set(s, args.level)
        rows.append(
            {
                "scholar": rec.scholar_id,
                "n": r.n,
                "h": r.h_hat,
                "v_hat": r.v_hat,
                "ci_lo": r.ci_lo,
                "ci_hi": r.ci_hi,
                "ci": format_set(r.ci_lo, r.ci_hi),
            }
        )
    return ReportTable(["scholar", "n", "h", "ci"], rows)


def cmd_test(args, parser):
    records = {rec.scholar_id: rec for rec in _records(args)}
    for key in (args.a, args.b):
        if key not in records:
            raise DomainError(f"unknown scholar {key!r}")
    r1 = confidence_set(_scholar_sample(records[args.a]))
    r2 = confidence_set(_scholar_sample(records[args.b]))
    t, p = homogeneity_statistic(r1.h_hat, r1.v_hat, r2.h_hat, r2.v_hat, args.one_sided)
    row = {
        "a": args.a,
        "b": args.b,
        "h_a": r1.h_hat,
        "v_a": r1.v_hat,
        "h_b": r2.h_hat,
        "v_b": r2.v_hat,
        "t_stat": t,
        "p_value": p,
        "alternative": "greater" if args.one_sided else "two-sided",
    }
    return ReportTable(list(row), [row])


def cmd_moments(args, parser):
    dist = _law(args, parser)
    rows = []
    for n in args.n:
        if n < 1:
            raise DomainError("n must be at least 1")
        rows.append(moment_report(dist, n).as_dict())
    columns = ["law", "n", "h_n", "exact_mean", "exact_variance", "asymptotic_variance", "closed_form_variance"]
    return ReportTable(columns, rows)


def cmd_simulate(args, parser):
    dist = _law(args, parser)
    config = StudyConfig(dist, tuple(args.n_list), args.reps, args.level, args.seed, args.jobs)
    rows = [row.as_dict() for row in run_study(config)]
    columns = [
        "law", "n", "replications", "h_n", "exact_mean_h", "exact_var_h", "asymp_var",
        "mc_mean_h", "mc_mean_h_se", "mc_var_h", "mc_var_h_se",
        "mc_mean_vhat", "mc_mean_vhat_se", "coverage", "coverage_se",
    ]  # fmt: skip
    uncertain = {c: f"{c}_se" for c in StudyRow.MC_COLUMNS}
    return ReportTable(columns, rows, uncertain)


def cmd_pmf(args, parser):
    dist = _law(args, parser)
    if args.kmax < 0:
        raise DomainError("--kmax must be nonnegative")
    ks = range(args.kmax + 1)
    pmf = dist.pmf_array(ks)
    surv = dist.survival_array(ks)
    rows = [{"k": k, "pmf": float(pmf[k]), "survival": float(surv[k])} for k in ks]
    return ReportTable(["k", "pmf", "survival"], rows, title=dist.label)


COMMANDS = {
    "compute": cmd_compute,
    "ci": cmd_ci,
    "test": cmd_test,
    "moments": cmd_moments,
    "simulate": cmd_simulate,
    "pmf": cmd_pmf,
}


def _report_warning(message, category, filename, lineno, file=None, line=None):
    print(f"hirschstat: warning: {message}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.filterwarnings("ignore", category=RuntimeWarning)
        warnings.showwarning = _report_warning
        try:
            table = COMMANDS[args.command](args, parser)
            emit_table(table, args.output_format, args.output)
        except ParseError as exc:
            print(f"hirschstat: parse error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except DegenerateStatisticError as exc:
            print(f"hirschstat: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
        except DomainError as exc:
            print(f"hirschstat: error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        except OSError as exc:
            print(f"hirschstat: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
