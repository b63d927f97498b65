"""Command-line front end.

    polya-states pmf --M 5 --gamma 0.5 --eta 0.3
    polya-states qline --M 5 --gamma 0.5 --points 101
    polya-states squeeze --M 5 20 --out figs/
    polya-states verify

Every command emits a table (CSV by default, ``--format json`` for a list
of records). Reals are written with 17 significant digits so the output
is byte-stable for a fixed configuration and seed.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .distributions import PolyaParams, polya_log_pmf_vector, polya_pmf, total_variation
from .errors import DomainError
from .fock import polya_state
from .grid import load_grid
from .limits import convergence_report, make_schedule
from .statistics import moments_brute, moments_closed, q_line, q_zero_crossing, squeezing_scan
from .urn import UrnSpec, sample_counts, urn_to_polya
from .verification import all_passed, run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

COMMANDS = ("pmf", "state", "moments", "qline", "squeeze", "limits", "urn", "verify")


class UsageError(Exception):
    pass


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _json_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer, float, np.floating)):
        if isinstance(value, (float, np.floating)) and not math.isfinite(value):
            return "null"
        return format_value(value)
    return json.dumps(str(value), ensure_ascii=False)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        lines = []
        for row in rows:
            fields = ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in row.items())
            lines.append("  {" + fields + "}")
        return "[\n" + ",\n".join(lines) + "\n]\n" if lines else "[]\n"
    buf = io.StringIO()
    if rows:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rows[0].keys())
        for row in rows:
            writer.writerow(format_value(v) for v in row.values())
    return buf.getvalue()


def emit(text: str, out: str | Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _params(args) -> PolyaParams:
    missing = [flag for flag, val in (("--M", args.M), ("--gamma", args.gamma), ("--eta", args.eta)) if val is None]
    if missing:
        raise UsageError(f"{args.command} requires {' '.join(missing)}")
    M = args.M[0] if isinstance(args.M, list) else args.M
    if M < 1:
        raise UsageError("--M must be a positive integer")
    return PolyaParams(M, args.gamma, args.eta)


def cmd_pmf(args) -> list[dict]:
    params = _params(args)
    probs = polya_pmf(params).probs
    logs = polya_log_pmf_vector(params)
    return [{"n": n, "p": probs[n], "log_p": logs[n]} for n in range(params.M + 1)]


def cmd_state(args) -> list[dict]:
    amps = polya_state(_params(args)).amps
    return [{"n": n, "amplitude": a} for n, a in enumerate(amps)]


def cmd_moments(args) -> list[dict]:
    params = _params(args)
    closed, brute = moments_closed(params), moments_brute(params)
    rows = []
    for name in ("mean_n", "mean_n2", "var_n", "q_factor"):
        c, b = getattr(closed, name), getattr(brute, name)
        rows.append({"quantity": name, "closed_form": c, "brute_force": b, "discrepancy": abs(c - b)})
    return rows


def cmd_qline(args) -> list[dict]:
    if args.M is None or args.gamma is None:
        raise UsageError("qline requires --M and --gamma")
    M = args.M[0]
    if M < 1 or args.gamma < 0:
        raise UsageError("qline needs --M >= 1 and --gamma >= 0")
    etas = np.linspace(0.0, 1.0, args.points)
    q = q_line(M, args.gamma, etas)
    rows = [{"kind": "grid", "eta": e, "q_factor": v} for e, v in zip(etas, q)]
    crossing = q_zero_crossing(M, args.gamma)
    rows.append({"kind": "zero_crossing", "eta": crossing, "q_factor": q_line(M, args.gamma, [crossing])[0]})
    return rows


def squeeze_tables(args) -> dict[int, list[dict]]:
    ms = args.M if args.M is not None else [5, 20]
    if any(m < 1 for m in ms):
        raise UsageError("--M must be a positive integer")
    etas = np.linspace(0.0, 1.0, args.points)
    gammas = np.linspace(0.0, args.gamma_max, args.gamma_points)
    tables = {}
    for M in ms:
        scan = squeezing_scan(M, gammas, etas)
        tables[M] = [
            {
                "M": M,
                "eta": eta,
                "gamma": g,
                "var_x": scan.var_x[i, j],
                "var_p": scan.var_p[i, j],
                "squeezed_x": scan.var_x[i, j] < 0.5,
                "squeezed_p": scan.var_p[i, j] < 0.5,
            }
            for i, eta in enumerate(etas)
            for j, g in enumerate(gammas)
        ]
    return tables


def cmd_limits(args) -> list[dict]:
    if args.kind == "BS":
        if args.M is None or args.eta is None:
            raise UsageError("limits --kind BS requires --M and --eta")
        schedule = make_schedule("BS", args.points, M=args.M[0], eta=args.eta)
    else:
        if args.lam is None or args.rho is None:
            raise UsageError("limits --kind NBS requires --lambda and --rho")
        schedule = make_schedule("NBS", args.points, lam=args.lam, rho=args.rho)
    return [
        {"index": i, "M": c.params.M, "gamma": c.params.gamma, "eta": c.params.eta, "tv_distance": c.tv_distance}
        for i, c in enumerate(convergence_report(schedule))
    ]


def cmd_urn(args) -> list[dict]:
    if args.a is not None or args.b is not None or args.c is not None:
        if None in (args.a, args.b, args.c) or args.M is None:
            raise UsageError("urn with explicit balls requires --a, --b, --c and --M")
        spec = UrnSpec(args.a, args.b, args.c, args.M[0])
    else:
        params = _params(args)
        spec = UrnSpec(params.eta, params.eta_bar, params.gamma, params.M)
    counts = sample_counts(spec, args.trials, args.seed)
    exact = polya_pmf(urn_to_polya(spec)).probs
    empirical = counts / args.trials
    tv = total_variation(empirical, exact)
    return [
        {"n": n, "count": int(counts[n]), "empirical_p": empirical[n], "exact_p": exact[n], "tv_distance": tv}
        for n in range(spec.M + 1)
    ]


def cmd_verify(args) -> tuple[list[dict], bool]:
    checks = run_checks(load_grid(args.grid))
    rows = [
        {
            "criterion": c.criterion,
            "name": c.name,
            "value": c.value,
            "tolerance": c.tolerance,
            "relation": c.relation,
            "passed": c.passed,
        }
        for c in checks
    ]
    return rows, all_passed(checks)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--M", type=int, nargs="+", help="photon-number cutoff (squeeze accepts several)")
    common.add_argument("--gamma", type=float)
    common.add_argument("--eta", type=float)
    common.add_argument("--points", type=int, default=101, help="eta resolution / schedule length")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (a directory for squeeze)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1_000_000)

    parser = argparse.ArgumentParser(prog="polya-states", description="Pólya states of a single radiation mode")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("pmf", parents=[common], help="photon-number distribution")
    sub.add_parser("state", parents=[common], help="Fock amplitudes")
    sub.add_parser("moments", parents=[common], help="moments and Mandel Q, both sources")
    sub.add_parser("qline", parents=[common], help="Mandel Q against eta")
    sq = sub.add_parser("squeeze", parents=[common], help="quadrature variances over (eta, gamma)")
    sq.add_argument("--gamma-max", type=float, default=5.0)
    sq.add_argument("--gamma-points", type=int, default=101)
    lim = sub.add_parser("limits", parents=[common], help="convergence to the BS / NBS laws")
    lim.add_argument("--kind", type=str.upper, choices=("BS", "NBS"), default="BS")
    lim.add_argument("--lambda", dest="lam", type=float)
    lim.add_argument("--rho", type=float)
    urn = sub.add_parser("urn", parents=[common], help="Monte Carlo urn histogram")
    urn.add_argument("--a", type=float)
    urn.add_argument("--b", type=float)
    urn.add_argument("--c", type=float)
    ver = sub.add_parser("verify", parents=[common], help="run the grid-wide checks")
    ver.add_argument("--grid", help="grid config JSON (default: packaged standard grid)")
    lim.set_defaults(points=8)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.points < 2 and args.command in ("qline", "squeeze", "limits"):
        parser.print_usage(sys.stderr)
        print("polya-states: error: --points must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    if args.trials < 1:
        print("polya-states: error: --trials must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    status = EXIT_OK
    try:
        if args.command == "squeeze":
            tables = squeeze_tables(args)
            if args.out is None:
                emit(render([row for t in tables.values() for row in t], args.format), None)
            else:
                for M, rows in tables.items():
                    emit(render(rows, args.format), Path(args.out) / f"squeeze_M{M}.{args.format}")
            return EXIT_OK
        if args.command == "verify":
            rows, ok = cmd_verify(args)
            status = EXIT_OK if ok else EXIT_VERIFY_FAILED
        else:
            handler = globals()[f"cmd_{args.command}"]
            rows = handler(args)
        emit(render(rows, args.format), args.out)
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"polya-states: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"polya-states: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
