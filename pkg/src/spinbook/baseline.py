"""Equilibrium-pricing reference model driven by the same spin lattice.

Price changes come from balancing two excess demands instead of an order
book: fundamentalists trade toward an external anchor price p* with demand
a*m*log(p*/p), while the lattice traders contribute b*n*M. Setting the sum
to zero gives log p = log p* + lambda*M with lambda = b*n/(a*m), so the
per-period log return is lambda times the magnetization change (p* is held
constant). The lattice advances by one full sweep per period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .config import ConfigError
from .lattice import SpinLattice


@dataclass(frozen=True)
class BkfParams:
    """Demand-balance parameters; only lambda = b*n/(a*m) is observable."""

    a: float = 1.0  # fundamentalist reaction strength
    b: float = 1.0  # lattice-trader strength
    m: int = 144  # number of fundamentalists
    n: int = 144  # number of lattice traders
    p_star: float = 100.0  # anchor price, held constant

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")

    @property
    def lam(self) -> float:
        return (self.b * self.n) / (self.a * self.m)


def fundamentalist_demand(price: float, params: BkfParams) -> float:
    """Excess demand a*m*log(p*/p): buy below the anchor, sell above."""
    if price <= 0:
        raise ValueError(f"price must be positive, got {price}")
    return params.a * params.m * math.log(params.p_star / price)


def interacting_demand(magnetization: float, params: BkfParams) -> float:
    """Excess demand b*n*M of the lattice traders."""
    return params.b * params.n * magnetization


def implied_price(magnetization: float, params: BkfParams) -> float:
    """Price at which the two demands balance: p* exp(lambda*M)."""
    return params.p_star * math.exp(params.lam * magnetization)


def equilibrium_log_return(m_next: float, m_now: float, params: BkfParams) -> float:
    """Log return over one period under demand balance: lambda * (M' - M)."""
    return params.lam * (m_next - m_now)


@dataclass(frozen=True)
class BaselineConfig:
    """Parameterization of an equilibrium-pricing run (one sweep per period)."""

    seed: int = 1
    T: int = 10_000  # number of periods = lattice sweeps
    J: float = 1.0
    alpha: float = 4.0
    beta: float = 1.45
    L: int = 12
    a: float = 1.0
    b: float = 1.0
    m: int = 144
    n: int = 144
    p_star: float = 100.0
    sweep_order: str = "random"
    m_update: str = "per_update"

    def validate(self) -> None:
        if self.T < 0:
            raise ConfigError("T", f"must be >= 0, got {self.T}")
        if self.L < 1:
            raise ConfigError("L", f"must be >= 1, got {self.L}")
        if self.n != self.L * self.L:
            raise ConfigError("n", f"must equal L*L = {self.L * self.L}, got {self.n}")
        for name in ("a", "b", "m", "p_star", "beta"):
            if getattr(self, name) <= 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        if self.alpha < 0:
            raise ConfigError("alpha", f"must be >= 0, got {self.alpha}")

    @property
    def params(self) -> BkfParams:
        return BkfParams(self.a, self.b, self.m, self.n, self.p_star)


@dataclass
class BaselineOutput:
    """Log returns r(t) = lambda*(M(t+1) - M(t)) and the starting M(t) per period."""

    config: BaselineConfig
    log_returns: np.ndarray
    magnetization: np.ndarray  # M(t) at the start of period t


def run_baseline(config: BaselineConfig) -> BaselineOutput:
    """Evolve the lattice one sweep per period and emit equilibrium log returns."""
    config.validate()
    streams = np.random.SeedSequence(config.seed).spawn(2)
    init_rng = np.random.default_rng(streams[0])
    sweep_rng = np.random.default_rng(streams[1])
    lattice = SpinLattice(
        config.L,
        config.J,
        config.alpha,
        config.beta,
        rng=init_rng,
        m_mode=config.m_update,
        sweep_order=config.sweep_order,
    )
    params = config.params
    returns = np.empty(config.T, dtype=np.float64)
    mags = np.empty(config.T, dtype=np.float64)
    m_now = lattice.magnetization()
    for t in range(config.T):
        mags[t] = m_now
        lattice.sweep(sweep_rng)
        m_next = lattice.magnetization()
        returns[t] = equilibrium_log_return(m_next, m_now, params)
        m_now = m_next
    return BaselineOutput(config=config, log_returns=returns, magnetization=mags)
