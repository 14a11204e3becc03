"""Command-line interface: single runs, seed batches, the equilibrium-pricing
reference, statistics extraction, trade-rate calibration, the first-action
ratio, and named experiment presets.

Every command is deterministic: rerunning with identical inputs overwrites
the output files with byte-identical content.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import baseline as baseline_mod
from . import engine as engine_mod
from . import output, stats
from .config import ConfigError, RunConfig, load_config, parse_flat, serialize_flat

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_INPUT = 3
EXIT_UNWRITABLE = 4
EXIT_BAD_CONFIG = 5

# Named experiment presets: RunConfig overrides plus the stats request.
# "paper-fig1-3" reproduces the published parameter set on the spin-driven
# market; "paper-fig1-3-lt" swaps the spin traders for the same number of
# coin-flip market-order traders as the comparison background.
PRESETS: dict[str, dict] = {
    "paper-fig1-3": {
        "overrides": dict(
            N_random=2160, N_ising=144, N_lt=0, mu_lt=600.0, J=1.0, alpha=4.0,
            beta=1.45, L=12, q_sweep=0.001, dt_list=(10, 30, 60, 360, 540, 720),
        ),
        "window": 1000,
    },
    "paper-fig1-3-lt": {
        "overrides": dict(
            N_random=2160, N_ising=0, N_lt=144, mu_lt=600.0, J=1.0, alpha=4.0,
            beta=1.45, L=12, q_sweep=0.001, dt_list=(10, 30, 60, 360, 540, 720),
        ),
        "window": 1000,
    },
}


def preset_config(name: str, **extra) -> RunConfig:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    cfg = replace(RunConfig(), **PRESETS[name]["overrides"], **extra)
    cfg.validate()
    return cfg


# -- orchestration (also used directly by tests and demos) --------------------


def run_to_dir(
    config: RunConfig,
    out_dir: str | Path,
    events: bool = False,
    dump_lattice: bool = False,
) -> dict:
    """Execute one run and write prices.csv, trades.csv, and summary.json."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if events:
        config = config.with_overrides(log_events=True)
    result = engine_mod.run(config)
    output.write_prices_csv(out_dir / "prices.csv", result)
    output.write_trades_csv(out_dir / "trades.csv", result)
    if result.events is not None:
        output.write_events_csv(out_dir / "events.csv", result)
    if dump_lattice and result.lattice_final is not None:
        output.write_lattice_snapshot(out_dir / "lattice.txt", result)
        output.write_magnetization_csv(out_dir / "magnetization.csv", result)
    summary = result.summary()
    output.write_summary_json(out_dir / "summary.json", summary)
    return summary


def _batch_worker(args: tuple[RunConfig, str]) -> dict:
    config, out_dir = args
    return run_to_dir(config, out_dir)


def batch_to_dirs(
    config: RunConfig,
    runs: int,
    seed_base: int,
    out_dir: str | Path,
    jobs: int = 1,
) -> list[dict]:
    """Run ``runs`` seeds (seed_base + index) into run_### subdirectories."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [
        (config.with_overrides(seed=seed_base + k), str(out_dir / f"run_{k:03d}"))
        for k in range(runs)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(_batch_worker, tasks))
    else:
        summaries = [_batch_worker(task) for task in tasks]
    output.write_summary_json(out_dir / "batch_summary.json", {"runs": summaries})
    return summaries


def stats_to_dir(
    in_dir: str | Path,
    out_dir: str | Path,
    dts: tuple[int, ...],
    window: int = 1000,
    warmup: int | None = None,
    max_tau: int = 1000,
    bins: int = 101,
    normalized_acf: bool = False,
) -> list[tuple]:
    """Compute per-interval distributions, volatilities, and autocorrelations.

    Reads prices.csv (market runs) or returns.csv (equilibrium baseline) from
    ``in_dir``. Default warmup is 10000 steps for price series and 0 for
    return series, where the steps are already coarse lattice periods.
    """
    in_dir, out_dir = Path(in_dir), Path(out_dir)
    prices_path = in_dir / "prices.csv"
    returns_path = in_dir / "returns.csv"
    if prices_path.exists():
        prices = output.read_prices_csv(prices_path)
        skip = 10_000 if warmup is None else warmup
    elif returns_path.exists():
        prices = stats.prices_from_log_returns(output.read_returns_csv(returns_path))
        skip = 0 if warmup is None else warmup
    else:
        raise FileNotFoundError(f"no prices.csv or returns.csv in {in_dir}")
    out_dir.mkdir(parents=True, exist_ok=True)

    summary_rows = []
    for dt in dts:
        r = stats.returns(prices, dt, skip)
        sigma = stats.population_std(r)
        summary_rows.append(
            (dt, sigma, stats.excess_kurtosis(r) if sigma > 0 else 0.0, r.size)
        )
        if sigma > 0:
            g = stats.normalize(r)
            output.write_histogram_csv(
                out_dir / f"gdist_dt{dt}.csv", stats.histogram(g, bins=bins)
            )
            taus = range(0, min(max_tau, g.size - 1) + 1)
            acf = stats.acf_squared(g, taus)
            output.write_acf_csv(out_dir / f"acf_dt{dt}.csv", taus, acf, normalized_acf)
        if r.size >= window:
            vol = stats.windowed_volatility(r, window)
            positive = vol[vol > 0]
            if positive.size:
                output.write_histogram_csv(
                    out_dir / f"voldist_dt{dt}.csv",
                    stats.histogram(positive, bins=bins, reference="lognormal"),
                )
    output.write_stats_summary_csv(out_dir / "summary.csv", summary_rows)
    return summary_rows


# -- argument parsing ----------------------------------------------------------


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbook",
        description="Spin-lattice market simulator on a double-auction order book.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute one simulation run")
    p.add_argument("--config", required=True, help="flat key = value config file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--events", action="store_true", help="also write events.csv")
    p.add_argument("--dump-lattice", action="store_true",
                   help="also write lattice.txt and magnetization.csv")

    p = sub.add_parser("batch", help="run several seeds of one config")
    p.add_argument("--config", required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed-base", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("baseline", help="equilibrium-pricing reference run")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="stylized-facts statistics for a run directory")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--dt", type=_int_list, default=(10, 30, 60, 360, 540, 720),
                   help="comma-separated return intervals")
    p.add_argument("--window", type=int, default=1000)
    p.add_argument("--warmup", type=int, default=None)
    p.add_argument("--max-tau", type=int, default=1000)
    p.add_argument("--bins", type=int, default=101)
    p.add_argument("--normalized-acf", action="store_true",
                   help="add an acf/acf(0) column to acf files")
    p.add_argument("--out", required=True)

    p = sub.add_parser("calibrate-c", help="bisect c to a target trades/step")
    p.add_argument("--config", required=True)
    p.add_argument("--target", type=float, default=5.4)
    p.add_argument("--T", type=int, default=30_000, help="probe run length")
    p.add_argument("--warmup", type=int, default=5_000)
    p.add_argument("--rel-tol", type=float, default=0.02)

    p = sub.add_parser("qratio", help="expected first-action ratio before the first sweep")
    p.add_argument("--q-sweep", type=float, required=True)
    p.add_argument("--mu", type=float, required=True, help="mean waiting time")

    p = sub.add_parser("preset", help="run a named experiment preset plus statistics")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--T", type=int, default=100_000)
    p.add_argument("--seed-base", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)

    return parser


def _load_run_config(path: str) -> RunConfig:
    if not Path(path).is_file():
        print(f"error: config file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_MISSING_INPUT)
    try:
        return load_config(path)
    except ConfigError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_CONFIG)


def _ensure_writable(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: output directory not writable: {out} ({exc})", file=sys.stderr)
        raise SystemExit(EXIT_UNWRITABLE)
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "run":
        config = _load_run_config(args.config)
        if args.seed is not None:
            config = config.with_overrides(seed=args.seed)
        out_dir = _ensure_writable(args.out)
        summary = run_to_dir(config, out_dir, args.events, args.dump_lattice)
        print(f"run complete: {summary['n_trades']} trades, "
              f"final price {summary['final_price_ticks']} ticks -> {out_dir}")
        return EXIT_OK

    if args.command == "batch":
        config = _load_run_config(args.config)
        out_dir = _ensure_writable(args.out)
        summaries = batch_to_dirs(config, args.runs, args.seed_base, out_dir, args.jobs)
        print(f"batch complete: {len(summaries)} runs -> {out_dir}")
        return EXIT_OK

    if args.command == "baseline":
        if not Path(args.config).is_file():
            print(f"error: config file not found: {args.config}", file=sys.stderr)
            return EXIT_MISSING_INPUT
        try:
            config = parse_flat(Path(args.config).read_text(),
                                baseline_mod.BaselineConfig)
        except ConfigError as exc:
            print(f"error: invalid config: {exc}", file=sys.stderr)
            return EXIT_BAD_CONFIG
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        out_dir = _ensure_writable(args.out)
        result = baseline_mod.run_baseline(config)
        output.write_returns_csv(out_dir / "returns.csv", result)
        print(f"baseline complete: {config.T} periods -> {out_dir}")
        return EXIT_OK

    if args.command == "stats":
        if not Path(args.in_dir).is_dir():
            print(f"error: input directory not found: {args.in_dir}", file=sys.stderr)
            return EXIT_MISSING_INPUT
        out_dir = _ensure_writable(args.out)
        try:
            rows = stats_to_dir(
                args.in_dir, out_dir, args.dt, args.window, args.warmup,
                args.max_tau, args.bins, args.normalized_acf,
            )
        except FileNotFoundError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_MISSING_INPUT
        for dt, sigma, kurt, n in rows:
            print(f"dt={dt}: sigma={sigma:.6g} excess_kurtosis={kurt:.4g} n={n}")
        return EXIT_OK

    if args.command == "calibrate-c":
        config = _load_run_config(args.config)
        c, rate = engine_mod.calibrate_c(
            config, target=args.target, rel_tol=args.rel_tol,
            T_probe=args.T, warmup_probe=args.warmup,
        )
        print(f"c = {c:.6g} (measured {rate:.3f} trades/step, target {args.target})")
        return EXIT_OK

    if args.command == "qratio":
        try:
            q = engine_mod.first_action_ratio(args.q_sweep, args.mu)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"Q = {q:.6f}")
        return EXIT_OK

    if args.command == "preset":
        config = preset_config(args.name, T=args.T)
        out_dir = _ensure_writable(args.out)
        batch_to_dirs(config, args.runs, args.seed_base, out_dir, args.jobs)
        window = PRESETS[args.name]["window"]
        for k in range(args.runs):
            run_dir = out_dir / f"run_{k:03d}"
            stats_to_dir(run_dir, run_dir / "stats", config.dt_list, window)
        print(f"preset {args.name} complete: {args.runs} runs -> {out_dir}")
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
