"""Command-line entry point: fit, simulate, and benchmark workflows.

File formats:
  data CSV    rows are samples, columns are variables, one header row
              (a non-numeric first line is auto-detected on input)
  model JSON  {"blocks", "b", "noise_std", "within_block_cov", "params"};
              truth files and fitted output share the schema
  report CSV  trial,p,n,mode,delta,error_count,runtime_ms (+ companion
              <report>_scatter.csv with true_b,est_b)

Exit codes: 0 success, 2 usage/input error, 1 estimation failure.
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from .covering import fit_large
from .datagen import GenSpec, derive_seed, generate_dataset
from .errors import (
    BlockOrderError,
    DegenerateInputError,
    InvalidInputError,
    ModelInvalidError,
    SearchTooLargeError,
    SingularMatrixError,
)
from .evaluate import order_error_count, scatter_pairs
from .linalg import DataMatrix, center
from .mi import MiConfig
from .model import write_model_json
from .search import SearchConfig, fit

_CLI_MODES = {"chain": "chain_graph", "dag": "dag", "eq4": "eq4_example"}


def _parse_delta(text: str) -> float:
    if text.strip().lower() in {"inf", "+inf", "infinity"}:
        return math.inf
    try:
        value = float(text)
    except ValueError as exc:
        raise InvalidInputError(f"--delta must be a number or 'inf', got {text!r}") from exc
    if math.isnan(value) or value < 0:
        raise InvalidInputError("--delta must be >= 0 or 'inf'")
    return value


def _parse_kneig(text: str) -> int | None:
    if text.strip().lower() == "auto":
        return None
    try:
        value = int(text)
    except ValueError as exc:
        raise InvalidInputError(f"--kneig must be an integer or 'auto', got {text!r}") from exc
    if value < 1:
        raise InvalidInputError("--kneig must be >= 1")
    return value


def _delta_repr(delta: float):
    return "inf" if math.isinf(delta) else delta


def read_csv_matrix(path) -> DataMatrix:
    """Load a samples-by-variables CSV (header auto-detected) and center it."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        first = handle.readline()
    if not first.strip():
        raise InvalidInputError(f"{path}: empty input file")
    try:
        [float(tok) for tok in first.strip().split(",")]
        skip = 0
    except ValueError:
        skip = 1
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: could not parse CSV: {exc}") from exc
    if table.shape[0] < 2:
        raise InvalidInputError(f"{path}: need at least 2 samples")
    return center(table.T)


def write_csv_matrix(path, data: DataMatrix) -> None:
    values = data.values
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(f"x{i}" for i in data.variable_ids) + "\n")
        for col in range(values.shape[1]):
            handle.write(",".join(repr(float(v)) for v in values[:, col]) + "\n")


def _write_trace_csv(path, trace) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("level,subset,score\n")
        for record in trace:
            subset = ";".join(str(i) for i in record.subset)
            handle.write(f"{record.level},{subset},{repr(float(record.score))}\n")


def _write_scatter_csv(path, pairs) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("true_b,est_b\n")
        for true_b, est_b in pairs:
            handle.write(f"{repr(float(true_b))},{repr(float(est_b))}\n")


def _cmd_fit(args) -> int:
    delta = _parse_delta(args.delta)
    kneig = _parse_kneig(args.kneig)
    data = read_csv_matrix(args.input)
    cfg = SearchConfig(delta=delta, mi=MiConfig(kneig) if kneig is not None else None)
    if args.mode == "exact":
        if data.n_variables > cfg.max_exact_p:
            raise SearchTooLargeError(
                f"{data.n_variables} variables exceed the exact-mode limit "
                f"({cfg.max_exact_p}); rerun with --mode large"
            )
        model, trace = fit(data, cfg)
    else:
        model, trace = fit_large(data, args.h, args.subsets, cfg, args.seed)
    params = {
        "command": "fit",
        "input": str(args.input),
        "delta": _delta_repr(delta),
        "kneig": "auto" if kneig is None else kneig,
        "mode": args.mode,
        "h": args.h,
        "subsets": args.subsets,
        "seed": args.seed,
    }
    write_model_json(args.output, model, params)
    if args.trace:
        _write_trace_csv(args.trace, trace)
    return 0


def _cmd_simulate(args) -> int:
    mode = _CLI_MODES[args.mode]
    p = args.p
    if p is None:
        if mode != "eq4_example":
            raise InvalidInputError("--p is required unless --mode eq4")
        p = 5
    spec = GenSpec(p=p, n=args.n, seed=args.seed, mode=mode)
    data, truth = generate_dataset(spec)
    write_csv_matrix(args.output, data)
    params = {
        "command": "simulate",
        "p": spec.p,
        "n": spec.n,
        "seed": spec.seed,
        "mode": args.mode,
    }
    write_model_json(args.truth, truth, params)
    return 0


def _cmd_benchmark(args) -> int:
    delta = _parse_delta(args.delta)
    mode = _CLI_MODES[args.mode]
    cfg = SearchConfig(delta=delta)
    report_path = Path(args.report)
    scatter_path = report_path.with_name(report_path.stem + "_scatter" + (report_path.suffix or ".csv"))
    rows = []
    all_pairs = []
    for trial in range(args.trials):
        data_seed = derive_seed(args.seed, 2 * trial)
        fit_seed = derive_seed(args.seed, 2 * trial + 1)
        spec = GenSpec(p=args.p, n=args.n, seed=data_seed, mode=mode)
        data, truth = generate_dataset(spec)
        start = time.perf_counter()
        if args.p <= cfg.max_exact_p:
            model, _ = fit(data, cfg)
        else:
            model, _ = fit_large(data, args.h, args.subsets, cfg, fit_seed)
        runtime_ms = (time.perf_counter() - start) * 1000.0
        rows.append(
            (trial, args.p, args.n, args.mode, _delta_repr(delta),
             order_error_count(truth, model.ordering), runtime_ms)
        )
        all_pairs.extend(scatter_pairs(truth, model))
    with report_path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("trial,p,n,mode,delta,error_count,runtime_ms\n")
        for trial, p, n, mode_name, delta_val, errors, runtime_ms in rows:
            handle.write(
                f"{trial},{p},{n},{mode_name},{delta_val},{errors},{runtime_ms:.3f}\n"
            )
    _write_scatter_csv(scatter_path, all_pairs)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockorder",
        description="Estimate ordered blocks of variables from non-Gaussian data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit_p = sub.add_parser("fit", help="estimate a model from a data CSV")
    fit_p.add_argument("--input", required=True, help="samples-by-variables CSV")
    fit_p.add_argument("--delta", default="0.01", help="stop threshold, number or 'inf'")
    fit_p.add_argument("--kneig", default="auto", help="neighbor count, integer or 'auto'")
    fit_p.add_argument("--mode", choices=("exact", "large"), default="exact")
    fit_p.add_argument("--h", type=int, default=5, help="subset size for large mode")
    fit_p.add_argument("--subsets", type=int, default=50, help="covering size for large mode")
    fit_p.add_argument("--seed", type=int, default=0, help="covering seed for large mode")
    fit_p.add_argument("--output", required=True, help="model JSON path")
    fit_p.add_argument("--trace", default=None, help="optional score-trace CSV path")
    fit_p.set_defaults(func=_cmd_fit)

    sim_p = sub.add_parser("simulate", help="generate a synthetic dataset plus truth")
    sim_p.add_argument("--p", type=int, default=None, help="variable count")
    sim_p.add_argument("--n", type=int, required=True, help="sample count")
    sim_p.add_argument("--seed", type=int, default=0)
    sim_p.add_argument("--mode", choices=tuple(_CLI_MODES), default="chain")
    sim_p.add_argument("--output", required=True, help="data CSV path")
    sim_p.add_argument("--truth", required=True, help="truth model JSON path")
    sim_p.set_defaults(func=_cmd_simulate)

    bench_p = sub.add_parser("benchmark", help="generate, fit, and score repeatedly")
    bench_p.add_argument("--p", type=int, required=True)
    bench_p.add_argument("--n", type=int, required=True)
    bench_p.add_argument("--trials", type=int, default=10)
    bench_p.add_argument("--mode", choices=tuple(_CLI_MODES), default="chain")
    bench_p.add_argument("--delta", default="0.01")
    bench_p.add_argument("--h", type=int, default=5)
    bench_p.add_argument("--subsets", type=int, default=50)
    bench_p.add_argument("--seed", type=int, default=0)
    bench_p.add_argument("--report", required=True, help="report CSV path")
    bench_p.set_defaults(func=_cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, SearchTooLargeError) as exc:
        print(f"blockorder: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"blockorder: error: {exc}", file=sys.stderr)
        return 2
    except (SingularMatrixError, ModelInvalidError, DegenerateInputError) as exc:
        print(f"blockorder: estimation failed: {exc}", file=sys.stderr)
        return 1
    except BlockOrderError as exc:
        print(f"blockorder: estimation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
