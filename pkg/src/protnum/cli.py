"""Command-line front end.

Commands: limits, probs, coeffs, verify, sample, table.  Exit codes:
0 success, 1 verification failure, 2 usage error, 3 numeric precision
failure.  The default precision (decimal digits) is 64 and can be changed
per run with --precision or globally through PROTNUM_PRECISION.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from mpmath import mp

from .enumeration import finite_probabilities
from .errors import FamilyValidationError, PrecisionError, ProtnumError
from .families import (
    DEFAULT_PRECISION,
    DEFAULT_TRUNCATION,
    make_family,
)
from .enumeration import tk_coefficients
from .protection import (
    ProtectionReport,
    root_limit_probability,
    root_limits,
    sk_series,
    vertex_limits,
)
from .reference import FAMILY_ORDER, TABLE1, TABLE2
from .sampling import SampleConfig, empirical_protection
from .scalars import mpf_to_decimal, rational_str
from .verification import run_verification

_MODES = ("root", "vertex", "both")


def _default_precision() -> int:
    env = os.environ.get("PROTNUM_PRECISION")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return DEFAULT_PRECISION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="protnum",
        description="Limiting protection-number statistics of random rooted trees")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, family_required=True):
        sp.add_argument("--family", required=family_required, default="all",
                        help="family name, 'all', or comma-separated phi coefficients")
        sp.add_argument("--precision", type=int, default=_default_precision(),
                        help="decimal digits (default %(default)s)")
        sp.add_argument("--trunc", type=int, default=DEFAULT_TRUNCATION,
                        help="series truncation order (default %(default)s)")
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")

    sp = sub.add_parser("limits", help="limiting mean/variance reports")
    common(sp)
    sp.add_argument("--mode", choices=_MODES, default="both")

    sp = sub.add_parser("probs", help="limiting or finite-n probabilities")
    common(sp)
    sp.add_argument("--mode", choices=_MODES, default="root")
    sp.add_argument("--k", type=int, help="single protection level")
    sp.add_argument("--kmax", type=int, help="print levels 1..kmax")
    sp.add_argument("--n", type=int, help="finite size (exact rational output)")

    sp = sub.add_parser("coeffs", help="exact series coefficients")
    common(sp)
    sp.add_argument("--series", choices=("T", "Tk", "Sk"), default="T")
    sp.add_argument("--k", type=int, default=1)

    sp = sub.add_parser("verify", help="run the verification suites")
    common(sp, family_required=False)
    sp.set_defaults(precision=None)
    sp.add_argument("--skip-statistical", action="store_true",
                    help="skip the seeded sampling checks")

    sp = sub.add_parser("sample", help="seeded empirical protection statistics")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=1)

    sp = sub.add_parser("table", help="published summary tables vs computed values")
    common(sp, family_required=False)
    return p


def _families(arg: str) -> List:
    if arg is None or arg == "all":
        return [make_family(n) for n in FAMILY_ORDER]
    return [make_family(arg)]


def _emit(lines: List[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# command handlers
# ----------------------------------------------------------------------
def _report_text(r: ProtectionReport) -> List[str]:
    p = r.precision
    out = [
        f"family {r.family}  mode {r.mode}  precision {p}",
        f"  mean      {mpf_to_decimal(r.mean, p)}",
        f"  variance  {mpf_to_decimal(r.variance, p)}",
        f"  k_max     {r.k_max}",
        f"  tail      {mp.nstr(r.tail_bound, 3)}",
    ]
    return out


def _report_csv(r: ProtectionReport) -> List[str]:
    rows = [f"{r.family},{r.mode},mean,{mpf_to_decimal(r.mean, r.precision)}",
            f"{r.family},{r.mode},variance,{mpf_to_decimal(r.variance, r.precision)}"]
    for k, prob in enumerate(r.probabilities, start=1):
        rows.append(f"{r.family},{r.mode},{k},{mpf_to_decimal(prob, r.precision)}")
    return rows


def cmd_limits(args) -> int:
    modes = ("root", "vertex") if args.mode == "both" else (args.mode,)
    reports = []
    for fam in _families(args.family):
        for mode in modes:
            fn = root_limits if mode == "root" else vertex_limits
            reports.append(fn(fam, args.precision, args.trunc))
    if args.format == "json":
        _emit([json.dumps([r.to_dict() for r in reports], indent=2)])
    elif args.format == "csv":
        lines = ["family,mode,k,value"]
        for r in reports:
            lines += _report_csv(r)
        _emit(lines)
    else:
        lines = []
        for r in reports:
            lines += _report_text(r)
        _emit(lines)
    return 0


def cmd_probs(args) -> int:
    if (args.k is None) == (args.kmax is None):
        raise FamilyValidationError("probs needs exactly one of --k or --kmax")
    ks = [args.k] if args.k is not None else list(range(1, args.kmax + 1))
    if min(ks) < 1:
        raise FamilyValidationError("protection levels start at k = 1")
    modes = ("root", "vertex") if args.mode == "both" else (args.mode,)
    rows = []  # (family, mode, k, value-string)
    for fam in _families(args.family):
        if args.n is not None:
            for k in ks:
                root_p, vertex_p = finite_probabilities(fam, args.n, k)
                for mode in modes:
                    val = root_p if mode == "root" else vertex_p
                    rows.append((fam.name, mode, k, rational_str(val)))
        else:
            for mode in modes:
                rep = (root_limits if mode == "root" else vertex_limits)(
                    fam, args.precision, args.trunc)
                for k in ks:
                    with mp.workdps(args.precision):
                        rows.append((fam.name, mode, k,
                                     mpf_to_decimal(rep.probability(k), args.precision)))
    if args.format == "json":
        _emit([json.dumps([
            {"family": f, "mode": m, "k": k, "value": v} for f, m, k, v in rows],
            indent=2)])
    elif args.format == "csv":
        _emit(["family,mode,k,value"] +
              [f"{f},{m},{k},{v}" for f, m, k, v in rows])
    else:
        if len(rows) == 1:
            _emit([rows[0][3]])
        else:
            _emit([f"{f} {m} k={k}: {v}" for f, m, k, v in rows])
    return 0


def cmd_coeffs(args) -> int:
    fam = make_family(args.family)
    if args.series == "T":
        series = tk_coefficients(fam, 0, args.trunc)
    elif args.series == "Tk":
        series = tk_coefficients(fam, args.k, args.trunc)
    else:
        series = sk_series(fam, args.k, args.trunc)
    coeffs = series.serializable_coefficients()
    if args.format == "json":
        _emit([json.dumps(coeffs)])
    elif args.format == "csv":
        _emit([f"{fam.name},{args.series},{args.k},{n},{c}"
               for n, c in enumerate(coeffs)])
    else:
        _emit([f"{n}: {c}" for n, c in enumerate(coeffs)])
    return 0


def cmd_verify(args) -> int:
    precision = args.precision if args.precision else 30
    families = None if args.family in (None, "all") else [make_family(args.family).name]
    results = run_verification(
        precision=precision, trunc=args.trunc, families=families,
        statistical=not args.skip_statistical)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        print(f"FAILED: {failed[0].name}")
        return 1
    return 0


def cmd_sample(args) -> int:
    fam = make_family(args.family)
    config = SampleConfig(fam.name, args.n, args.trials, args.seed)
    summary = empirical_protection(config)
    if args.format in ("json", "csv"):
        _emit([json.dumps(summary.to_dict(), indent=2)])
    else:
        d = summary.to_dict()
        _emit([f"{k}: {v}" for k, v in d.items()])
    return 0


def cmd_table(args) -> int:
    precision = max(args.precision, 20)
    rows2 = []
    with mp.workdps(precision + 10):
        for name, label, ex_ref, ey_ref in TABLE2:
            fam = make_family(name)
            ex = root_limits(fam, precision, args.trunc).mean
            ey = vertex_limits(fam, precision, args.trunc).mean
            rows2.append((label, ex_ref, ey_ref, mp.nstr(ex, 16), mp.nstr(ey, 16),
                          mp.nstr(abs(ex - mp.mpf(ex_ref)), 3),
                          mp.nstr(abs(ey - mp.mpf(ey_ref)), 3)))
        rows1 = []
        for name, label, mean_ref, var_ref in TABLE1:
            fam = make_family(name)
            rep = vertex_limits(fam, precision, args.trunc)
            rows1.append((label, mean_ref, var_ref,
                          mp.nstr(rep.mean, 16), mp.nstr(rep.variance, 16),
                          mp.nstr(abs(rep.mean - mp.mpf(mean_ref)), 3),
                          mp.nstr(abs(rep.variance - mp.mpf(var_ref)), 3)))
    head2 = ("family", "mean_root", "mean_vertex", "computed_root",
             "computed_vertex", "diff_root", "diff_vertex")
    head1 = ("family", "vertex_mean", "vertex_variance", "computed_mean",
             "computed_variance", "diff_mean", "diff_variance")
    if args.format == "json":
        _emit([json.dumps({
            "summary_means": [dict(zip(head2, r)) for r in rows2],
            "vertex_table": [dict(zip(head1, r)) for r in rows1],
        }, indent=2)])
    elif args.format == "csv":
        lines = ["table," + ",".join(head2)]
        lines += ["summary," + ",".join(r) for r in rows2]
        lines.append("table," + ",".join(head1))
        lines += ["vertex," + ",".join(r) for r in rows1]
        _emit(lines)
    else:
        lines = ["summary of limiting means (published vs computed)"]
        lines.append(f"{'family':<26}{'root':>10}{'vertex':>10}"
                     f"{'computed root':>22}{'computed vertex':>22}")
        for label, exr, eyr, exc, eyc, dr, dv in rows2:
            lines.append(f"{label:<26}{exr:>10}{eyr:>10}{exc:>22}{eyc:>22}"
                         f"   |d|={dr},{dv}")
        lines.append("")
        lines.append("random-vertex limits (published vs computed)")
        for label, mr, vr, mc, vc, dm, dvv in rows1:
            lines.append(f"{label:<26}{mr:>20}{vr:>20}")
            lines.append(f"{'':<26}{mc:>20}{vc:>20}   |d|={dm},{dvv}")
        _emit(lines)
    return 0


_HANDLERS = {
    "limits": cmd_limits,
    "probs": cmd_probs,
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "table": cmd_table,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except PrecisionError as exc:
        print(f"precision error: {exc}", file=sys.stderr)
        return 3
    except FamilyValidationError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ProtnumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
