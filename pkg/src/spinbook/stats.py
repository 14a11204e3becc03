"""Stylized-facts measurement on price and return series.

Conventions, fixed package-wide: standard deviations divide by the sample
count (population form sqrt(<x^2> - <x>^2)); the squared-return
autocorrelation is the raw moment <g^2(t) g^2(t+tau)> with no mean
subtraction or normalization, so an i.i.d. unit-variance series gives values
near 1 (not 0) for tau >= 1. Returns are simple relative price changes over
a lag of dt steps, computed on every overlapping window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateSeriesError(ValueError):
    """Raised when an operation needs spread in the data and there is none."""


def returns(prices: np.ndarray, dt: int, warmup: int = 0) -> np.ndarray:
    """Relative price changes (p(t+dt) - p(t)) / p(t), overlapping, stride 1.

    The first ``warmup`` entries of the price series are discarded first.
    """
    if dt < 1:
        raise ValueError(f"dt must be >= 1, got {dt}")
    p = np.asarray(prices, dtype=np.float64)[warmup:]
    if p.size <= dt:
        raise ValueError(f"need more than dt={dt} prices after warmup, got {p.size}")
    if np.any(p <= 0):
        raise ValueError("prices must be positive")
    return (p[dt:] - p[:-dt]) / p[:-dt]


def population_std(values: np.ndarray) -> float:
    return float(np.std(np.asarray(values, dtype=np.float64)))


def normalize(values: np.ndarray) -> np.ndarray:
    """Shift and scale to zero mean and unit (population) standard deviation."""
    x = np.asarray(values, dtype=np.float64)
    sigma = np.std(x)
    if sigma == 0.0:
        raise DegenerateSeriesError("series has zero standard deviation")
    return (x - x.mean()) / sigma


def windowed_volatility(values: np.ndarray, window: int = 1000, stride: int = 1) -> np.ndarray:
    """Population std inside a moving window; output length n - window + 1."""
    x = np.asarray(values, dtype=np.float64)
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    if x.size < window:
        raise ValueError(f"series length {x.size} is shorter than window {window}")
    c1 = np.concatenate(([0.0], np.cumsum(x)))
    c2 = np.concatenate(([0.0], np.cumsum(x * x)))
    m1 = (c1[window:] - c1[:-window]) / window
    m2 = (c2[window:] - c2[:-window]) / window
    var = np.maximum(m2 - m1 * m1, 0.0)  # cumsum roundoff can dip below zero
    return np.sqrt(var)[::stride]


def acf_squared(g: np.ndarray, taus) -> np.ndarray:
    """Raw moment <g^2(t) g^2(t+tau)> for each lag; tau = 0 gives <g^4>."""
    x = np.asarray(g, dtype=np.float64)
    sq = x * x
    out = np.empty(len(taus), dtype=np.float64)
    for k, tau in enumerate(taus):
        if tau < 0 or tau >= x.size:
            raise ValueError(f"tau must be in [0, {x.size - 1}], got {tau}")
        if tau == 0:
            out[k] = float(np.mean(sq * sq))
        else:
            out[k] = float(sq[:-tau] @ sq[tau:]) / (x.size - tau)
    return out


def skewness(values: np.ndarray) -> float:
    """Third standardized moment, population convention."""
    z = normalize(values)
    return float(np.mean(z**3))


def excess_kurtosis(values: np.ndarray) -> float:
    """Fourth standardized moment minus 3, population convention."""
    x = np.asarray(values, dtype=np.float64)
    if x.size < 4:
        raise DegenerateSeriesError(f"need at least 4 samples, got {x.size}")
    z = normalize(x)
    return float(np.mean(z**4)) - 3.0


def normal_pdf(x: np.ndarray, mean: float = 0.0, std: float = 1.0) -> np.ndarray:
    z = (np.asarray(x, dtype=np.float64) - mean) / std
    return np.exp(-0.5 * z * z) / (std * np.sqrt(2.0 * np.pi))


def lognormal_pdf(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    z = (np.log(x[pos]) - mu) / sigma
    out[pos] = np.exp(-0.5 * z * z) / (x[pos] * sigma * np.sqrt(2.0 * np.pi))
    return out


def fit_lognormal(values: np.ndarray) -> tuple[float, float, int]:
    """(mu, sigma) of log(values) over the positive samples, plus the count excluded."""
    x = np.asarray(values, dtype=np.float64)
    pos = x[x > 0]
    excluded = int(x.size - pos.size)
    if pos.size == 0:
        raise DegenerateSeriesError("no positive samples to fit")
    logs = np.log(pos)
    sigma = float(np.std(logs))
    if sigma == 0.0:
        raise DegenerateSeriesError("log-values have zero standard deviation")
    return float(np.mean(logs)), sigma, excluded


@dataclass
class Histogram:
    """Density-normalized histogram with a reference curve at the bin centers."""

    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    reference: np.ndarray
    reference_kind: str  # normal | lognormal
    n_samples: int  # samples inside the binned range
    n_excluded: int  # non-positive samples dropped by a lognormal fit

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def histogram(
    values: np.ndarray,
    bins: int = 101,
    value_range: tuple[float, float] | None = None,
    reference: str = "normal",
) -> Histogram:
    """Histogram plus a reference density: the standard normal, or a lognormal
    fitted to the positive samples (dropped non-positive samples are counted).
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("values must be non-empty")
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    excluded = 0
    if reference == "lognormal":
        mu, sigma, excluded = fit_lognormal(x)
        x = x[x > 0]
        if value_range is None:
            value_range = (float(x.min()), float(x.max()))
    elif reference == "normal":
        if value_range is None:
            value_range = (-10.0, 10.0)
    else:
        raise ValueError(f"unknown reference {reference!r}")
    counts, edges = np.histogram(x, bins=bins, range=value_range)
    density, _ = np.histogram(x, bins=bins, range=value_range, density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    if reference == "normal":
        ref = normal_pdf(centers)
    else:
        ref = lognormal_pdf(centers, mu, sigma)
    return Histogram(
        edges=edges,
        counts=counts,
        density=density,
        reference=ref,
        reference_kind=reference,
        n_samples=int(counts.sum()),
        n_excluded=excluded,
    )


def prices_from_log_returns(log_returns: np.ndarray, p0: float = 1.0) -> np.ndarray:
    """Price path implied by cumulative log returns, starting at p0."""
    r = np.asarray(log_returns, dtype=np.float64)
    return p0 * np.exp(np.concatenate(([0.0], np.cumsum(r))))


def zero_return_fraction(r: np.ndarray) -> float:
    r = np.asarray(r)
    return float(np.mean(r == 0.0)) if r.size else 0.0


@dataclass
class StylizedSummary:
    """Per-interval reductions of one run used for cross-run comparisons."""

    dt: int
    n_samples: int
    sigma: float
    excess_kurtosis: float
    zero_fraction: float
    g_moment_sums: tuple[float, float, float, float]  # sums of g^1..g^4
    acf_band_mean: float | None
    logvol_moment_sums: tuple[float, float, float, float] | None
    n_vol_windows: int
    n_zero_vol_windows: int


def _moment_sums(x: np.ndarray) -> tuple[float, float, float, float]:
    return (
        float(np.sum(x)),
        float(np.sum(x**2)),
        float(np.sum(x**3)),
        float(np.sum(x**4)),
    )


def stylized_summary(
    prices: np.ndarray,
    dt: int,
    warmup: int = 0,
    window: int = 1000,
    acf_band: tuple[int, int] | None = (200, 1000),
) -> StylizedSummary:
    """Reduce one price series at one return interval to comparison scalars."""
    r = returns(prices, dt, warmup)
    sigma = population_std(r)
    g = normalize(r) if sigma > 0 else None
    if g is not None and acf_band is not None and acf_band[1] < g.size:
        taus = range(acf_band[0], acf_band[1] + 1)
        acf_mean = float(np.mean(acf_squared(g, taus)))
    else:
        acf_mean = None
    if r.size >= window:
        vol = windowed_volatility(r, window)
        nonzero = vol[vol > 0]
        logvol = _moment_sums(np.log(nonzero)) if nonzero.size else None
        n_windows, n_zero = vol.size, int(vol.size - nonzero.size)
    else:
        logvol, n_windows, n_zero = None, 0, 0
    return StylizedSummary(
        dt=dt,
        n_samples=r.size,
        sigma=sigma,
        excess_kurtosis=excess_kurtosis(r) if sigma > 0 else 0.0,
        zero_fraction=zero_return_fraction(r),
        g_moment_sums=_moment_sums(g) if g is not None else (0.0, 0.0, 0.0, 0.0),
        acf_band_mean=acf_mean,
        logvol_moment_sums=logvol,
        n_vol_windows=n_windows,
        n_zero_vol_windows=n_zero,
    )


def pooled_standardized_moments(
    moment_sums: list[tuple[float, float, float, float]], counts: list[int]
) -> tuple[float, float]:
    """(skewness, excess kurtosis) of the concatenation of several samples,
    reconstructed exactly from per-sample power sums.
    """
    n = sum(counts)
    if n < 4:
        raise DegenerateSeriesError(f"need at least 4 pooled samples, got {n}")
    s1 = sum(m[0] for m in moment_sums)
    s2 = sum(m[1] for m in moment_sums)
    s3 = sum(m[2] for m in moment_sums)
    s4 = sum(m[3] for m in moment_sums)
    mean = s1 / n
    var = s2 / n - mean**2
    if var <= 0:
        raise DegenerateSeriesError("pooled variance is zero")
    # central moments from raw power sums
    m3 = s3 / n - 3 * mean * (s2 / n) + 2 * mean**3
    m4 = s4 / n - 4 * mean * (s3 / n) + 6 * mean**2 * (s2 / n) - 3 * mean**4
    return m3 / var**1.5, m4 / var**2 - 3.0
