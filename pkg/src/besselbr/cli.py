"""Batch experiment runner with reproducible, machine-readable reports.

Every subcommand takes a mandatory ``--seed`` and writes (with ``--out``) a
report that is a pure function of its flags: reruns and different
``--threads`` values produce byte-identical files.  Wall-clock timings are
therefore printed to stderr and only embedded in the report when explicitly
requested with ``--emit-timings``.

Exit codes: 0 all configured thresholds met, 1 a threshold failed, 2 usage
error.
"""

import argparse
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__
from .brown_resnick import BRTruncationSpec, TruncationError, gumbel_cdf, sample_br, sample_br_batch
from .numerics import QuadratureError, QuadratureSpec, StreamKey
from .paths import make_dyadic_grid
from .rescale import bessel_constants, scalar_constants
from .stats import (
    EmpiricalSample,
    fdd_check,
    ks_statistic,
    marginal_gumbel_sweep,
    two_sample_ks,
    _normal_maxima_constants,
)
from .tails import (
    chi_square_density,
    chi_square_tail,
    chi_square_tail_asymptotic,
    check_condition_kk,
    product_tail_oracle,
    scalar_product_tail_asymptotic,
)

SCHEMA = "bessel-br/1"

_ORACLE_QUADRATURE = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-12, max_subdivisions=200)


# ---------------------------------------------------------------------------
# deterministic serialization


def _format_real(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("report values must be finite")
    return format(x, ".17g")


def _json_encode(obj, indent=0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{inner}"{key}": {_json_encode(value, indent + 1)}' for key, value in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_json_encode(value, indent + 1)}" for value in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _format_real(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_encode(report) -> str:
    lines = ["statistic,value,threshold,passed"]
    for row in report["results"]:
        threshold = "" if row["threshold"] is None else _format_real(row["threshold"])
        passed = "" if row["passed"] is None else ("true" if row["passed"] else "false")
        lines.append(f'{row["statistic"]},{_format_real(row["value"])},{threshold},{passed}')
    return "\n".join(lines) + "\n"


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".besselbr-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _result(statistic: str, value: float, threshold=None, passed=None) -> dict:
    return {
        "statistic": statistic,
        "value": float(value),
        "threshold": None if threshold is None else float(threshold),
        "passed": passed,
    }


# ---------------------------------------------------------------------------
# flag parsing helpers


def _int_list(text: str):
    try:
        values = [int(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def _float_list(text: str):
    try:
        values = [float(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one real")
    return values


def _add_common(parser, threads=False):
    parser.add_argument("--seed", type=int, required=True, help="master seed (mandatory)")
    parser.add_argument("--out", type=str, default=None, help="report file path")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument(
        "--emit-timings",
        action="store_true",
        help="embed wall-clock timings in the report (breaks byte-reproducibility)",
    )
    if threads:
        parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besselbr",
        description="Convergence experiments for maxima of squared Bessel and "
        "Brownian scalar-product processes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print norming constants (a, b)")
    p.add_argument("--process", choices=("bessel", "scalar", "bm"), required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("tail-check", help="exact vs asymptotic tail at one point")
    p.add_argument("--process", choices=("bessel", "scalar"), default="scalar")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--threshold", type=float, default=0.05, help="bound on |ratio - 1|")
    _add_common(p)

    p = sub.add_parser("kk-check", help="Gaussian-damped lower-tail boundedness sequence")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--ns", type=_int_list, default=[1000, 10000, 100000])
    p.add_argument("--bound-factor", type=float, default=2.0)
    _add_common(p)

    p = sub.add_parser("marginal-sweep", help="KS-to-Gumbel sweep of normalised maxima")
    p.add_argument("--process", choices=("bessel", "scalar", "bm"), required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--ns", type=_int_list, default=[100, 1000, 10000])
    p.add_argument("--replicates", type=int, default=2000)
    p.add_argument("--threshold", type=float, default=0.10, help="bound on the final KS")
    p.add_argument(
        "--allow-nonmonotone",
        action="store_true",
        help="do not require the KS values to decrease across the sweep",
    )
    _add_common(p, threads=True)

    p = sub.add_parser("fdd-check", help="two-time check against the Husler-Reiss law")
    p.add_argument("--process", choices=("bessel", "scalar", "br"), required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--times", type=_float_list, default=[0.0, 1.0])
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--replicates", type=int, default=2000)
    p.add_argument("--epsilon", type=float, default=1e-4, help="truncation budget (br only)")
    p.add_argument(
        "--threshold",
        type=float,
        default=None,
        help="bound on the sup CDF difference (default 0.05, or 0.03 for br)",
    )
    _add_common(p, threads=True)

    p = sub.add_parser("br-sample", help="simulate one limit-process path")
    p.add_argument("--grid-k", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--max-points", type=int, default=10000)
    _add_common(p)

    p = sub.add_parser("br-selftest", help="marginal, stationarity and truncation self-tests")
    p.add_argument("--grid-k", type=int, default=8)
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--replicates", type=int, default=5000)
    p.add_argument("--marginal-threshold", type=float, default=0.026)
    p.add_argument("--two-sample-threshold", type=float, default=0.033)
    _add_common(p, threads=True)

    return parser


# ---------------------------------------------------------------------------
# subcommand handlers (return (passed, result rows, extra report fields))


def _cmd_constants(args):
    if args.process == "bessel":
        consts = bessel_constants(args.n, args.m)
        a, b = consts.a, consts.b
    elif args.process == "scalar":
        consts = scalar_constants(args.n, args.m)
        a, b = consts.a, consts.b
    else:
        a, b = _normal_maxima_constants(args.n)
    return True, [_result("a", a), _result("b", b)], {}


def _cmd_tail_check(args):
    if args.process == "bessel":
        exact = chi_square_tail(args.m, args.x)
        asymptotic = chi_square_tail_asymptotic(args.m, args.x)
    else:
        asymptotic = scalar_product_tail_asymptotic(args.m, args.x)
        if args.m == 2:
            exact = 0.5 * math.exp(-args.x)
        else:
            exact = product_tail_oracle(args.m, args.x, _ORACLE_QUADRATURE)
    ratio = asymptotic / exact
    ok = abs(ratio - 1.0) <= args.threshold
    rows = [
        _result("exact_tail", exact),
        _result("asymptotic_tail", asymptotic),
        _result("ratio", ratio, threshold=args.threshold, passed=ok),
    ]
    return ok, rows, {}


def _cmd_kk_check(args):
    template = bessel_constants(max(args.ns[0], 2), args.m)
    sequence = check_condition_kk(
        lambda y: chi_square_density(args.m, y),
        template,
        args.r,
        args.p,
        args.ns,
        _ORACLE_QUADRATURE,
    )
    rows = [_result(f"kk_integral_n_{n}", v) for n, v in zip(args.ns, sequence)]
    first = sequence[0]
    if first > 0:
        bound = args.bound_factor * first
        ok = max(sequence) <= bound
    else:
        bound = 0.0
        ok = max(sequence) == 0.0
    rows.append(_result("kk_max_over_first", max(sequence) / first if first > 0 else 0.0,
                        threshold=args.bound_factor, passed=ok))
    return ok, rows, {}


def _cmd_marginal_sweep(args):
    report = marginal_gumbel_sweep(
        args.process,
        args.m,
        args.t,
        args.ns,
        args.replicates,
        StreamKey(args.seed),
        threads=args.threads,
    )
    rows = [_result(f"ks_gumbel_n_{r.n}", r.value) for r in report.records]
    decreasing_ok = report.decreasing or args.allow_nonmonotone
    rows.append(
        _result("ks_decreasing", 1.0 if report.decreasing else 0.0, passed=decreasing_ok)
    )
    final_ok = report.final_value <= args.threshold
    rows.append(
        _result("ks_final", report.final_value, threshold=args.threshold, passed=final_ok)
    )
    return decreasing_ok and final_ok, rows, {}


def _cmd_fdd_check(args):
    if len(args.times) != 2:
        raise ValueError("--times needs exactly two values")
    threshold = args.threshold
    if threshold is None:
        threshold = 0.03 if args.process == "br" else 0.05
    diff = fdd_check(
        args.process,
        args.m,
        tuple(args.times),
        args.n,
        args.replicates,
        StreamKey(args.seed),
        br_spec=BRTruncationSpec(epsilon=args.epsilon),
        threads=args.threads,
    )
    ok = diff <= threshold
    return ok, [_result("fdd_sup_diff", diff, threshold=threshold, passed=ok)], {}


def _cmd_br_sample(args):
    grid = make_dyadic_grid(args.grid_k)
    spec = BRTruncationSpec(epsilon=args.epsilon, max_points=args.max_points)
    path = sample_br(grid, spec, StreamKey(args.seed))
    rows = [
        _result("path_min", float(path.values.min())),
        _result("path_max", float(path.values.max())),
    ]
    extra = {
        "path": {
            "times": [float(t) for t in grid.points],
            "values": [float(v) for v in path.values],
        }
    }
    return True, rows, extra


def _cmd_br_selftest(args):
    grid = make_dyadic_grid(args.grid_k)
    key = StreamKey(args.seed)
    base = sample_br_batch(
        grid, BRTruncationSpec(epsilon=args.epsilon), key, args.replicates, args.threads
    )
    rows = []
    ok = True
    for t in (0.0, 0.5, 1.0):
        ks = ks_statistic(EmpiricalSample(base[:, grid.index_of(t)]), gumbel_cdf)
        good = ks <= args.marginal_threshold
        ok = ok and good
        rows.append(
            _result(f"ks_marginal_t_{t:g}", ks, threshold=args.marginal_threshold, passed=good)
        )

    stationarity = two_sample_ks(
        EmpiricalSample(base[:, grid.index_of(0.0)]),
        EmpiricalSample(base[:, grid.index_of(1.0)]),
    )
    good = stationarity <= args.two_sample_threshold
    ok = ok and good
    rows.append(
        _result("ks_stationarity", stationarity, threshold=args.two_sample_threshold, passed=good)
    )

    column = grid.index_of(1.0)
    loose = sample_br_batch(
        grid, BRTruncationSpec(epsilon=1e-3), key.with_substream(10), args.replicates, args.threads
    )[:, column]
    tight = sample_br_batch(
        grid, BRTruncationSpec(epsilon=1e-6), key.with_substream(20), args.replicates, args.threads
    )[:, column]
    insensitivity = two_sample_ks(EmpiricalSample(loose), EmpiricalSample(tight))
    good = insensitivity <= args.two_sample_threshold
    ok = ok and good
    rows.append(
        _result(
            "ks_epsilon_insensitivity",
            insensitivity,
            threshold=args.two_sample_threshold,
            passed=good,
        )
    )
    return ok, rows, {}


_HANDLERS = {
    "constants": _cmd_constants,
    "tail-check": _cmd_tail_check,
    "kk-check": _cmd_kk_check,
    "marginal-sweep": _cmd_marginal_sweep,
    "fdd-check": _cmd_fdd_check,
    "br-sample": _cmd_br_sample,
    "br-selftest": _cmd_br_selftest,
}


def _config_echo(args) -> dict:
    # `out` and `threads` are execution details, not part of the experiment;
    # excluding them keeps reports byte-identical across paths and workers
    config = {}
    for name, value in sorted(vars(args).items()):
        if name in ("command", "emit_timings", "out", "threads"):
            continue
        config[name] = value
    return config


def argv_from_config(command: str, config: dict) -> list[str]:
    """Reconstruct an argv that reproduces the run described by a config echo."""
    argv = [command]
    for name, value in config.items():
        if value is None or value is False:
            continue
        flag = "--" + name.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, (list, tuple)):
            argv.extend([flag, ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)])
        elif isinstance(value, float):
            argv.extend([flag, repr(value)])
        else:
            argv.extend([flag, str(value)])
    return argv


def run(argv=None) -> int:
    """Parse ``argv``, run the subcommand, write/print the report.

    Returns 0 when all configured thresholds pass, 1 on a threshold failure,
    2 on usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    started = time.perf_counter()
    try:
        passed, rows, extra = _HANDLERS[args.command](args)
    except (ValueError, OverflowError, TruncationError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    elapsed_ms = 1000.0 * (time.perf_counter() - started)

    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "results": rows,
        "passed": passed,
    }
    report.update(extra)
    if args.emit_timings:
        report["timings_ms"] = {"total": elapsed_ms}
    else:
        print(f"[{args.command}] {elapsed_ms:.1f} ms", file=sys.stderr)

    text = _json_encode(report) + "\n" if args.format == "json" else _csv_encode(report)
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)

    for row in rows:
        verdict = ""
        if row["passed"] is not None:
            verdict = "  PASS" if row["passed"] else "  FAIL"
            if row["threshold"] is not None:
                verdict += f" (threshold {row['threshold']:g})"
        print(f"{row['statistic']} = {row['value']:.6g}{verdict}")
    print("PASS" if passed else "FAIL")
    return 0 if passed else 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
