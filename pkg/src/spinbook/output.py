"""CSV/JSON artifact writers and readers for run and statistics outputs.

Floats are written with ``repr`` (shortest round-trip form) and files use
``\\n`` newlines, so rerunning a command with identical inputs produces
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .baseline import BaselineOutput
from .engine import RunOutput
from .stats import Histogram


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_rows(path: Path, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_prices_csv(path: str | Path, out: RunOutput) -> None:
    rows = zip(
        range(1, out.config.T + 1),
        out.prices.tolist(),
        out.trades_per_step.tolist(),
        out.magnetization.tolist(),
    )
    _write_rows(Path(path), "time,price_ticks,trades,M", rows)


def write_trades_csv(path: str | Path, out: RunOutput) -> None:
    _write_rows(
        Path(path), "time,price_ticks,volume,buy_trader,sell_trader", out.trades.rows()
    )


def write_events_csv(path: str | Path, out: RunOutput) -> None:
    if out.events is None:
        raise ValueError("run was executed without event logging")
    _write_rows(
        Path(path),
        "time,event,order_id,side,kind,price_ticks,volume",
        ((e.time, e.event, e.order_id, e.side, e.kind, e.price, e.volume)
         for e in out.events),
    )


def write_magnetization_csv(path: str | Path, out: RunOutput) -> None:
    rows = zip(range(1, out.config.T + 1), out.magnetization.tolist())
    _write_rows(Path(path), "time,M", rows)


def write_lattice_snapshot(path: str | Path, out: RunOutput) -> None:
    if out.lattice_final is None:
        raise ValueError("run had no lattice")
    grid = out.lattice_final
    text = "\n".join(" ".join(str(int(s)) for s in row) for row in grid) + "\n"
    Path(path).write_text(text)


def write_returns_csv(path: str | Path, out: BaselineOutput) -> None:
    rows = zip(
        range(out.config.T),
        out.log_returns.tolist(),
        out.magnetization.tolist(),
    )
    _write_rows(Path(path), "time,r_l,M", rows)


def write_summary_json(path: str | Path, summary: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_histogram_csv(path: str | Path, hist: Histogram) -> None:
    rows = zip(hist.centers.tolist(), hist.density.tolist(), hist.reference.tolist())
    _write_rows(Path(path), "bin_center,density,reference", rows)


def write_acf_csv(path: str | Path, taus, acf: np.ndarray, normalized: bool = False) -> None:
    """Raw acf values; pass normalized=True to add an acf/acf(0) column."""
    if normalized:
        taus = list(taus)
        acf0 = acf[taus.index(0)] if 0 in taus else None
        if acf0 is None or acf0 == 0:
            raise ValueError("normalized output needs tau=0 with nonzero acf")
        rows = zip(taus, acf.tolist(), (acf / acf0).tolist())
        _write_rows(Path(path), "tau,acf,acf_normalized", rows)
    else:
        _write_rows(Path(path), "tau,acf", zip(taus, acf.tolist()))


def write_stats_summary_csv(path: str | Path, rows: list[tuple]) -> None:
    _write_rows(Path(path), "dt,sigma,excess_kurtosis,n_samples", rows)


def read_prices_csv(path: str | Path) -> np.ndarray:
    """Price column of a prices.csv, as int64 ticks."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, usecols=1, dtype=np.int64)
    return np.atleast_1d(data)


def read_returns_csv(path: str | Path) -> np.ndarray:
    """Log-return column of a returns.csv."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, usecols=1, dtype=np.float64)
    return np.atleast_1d(data)


def read_summary_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
