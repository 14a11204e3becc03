"""Discrete-time event loop binding order expiry, lattice sweeps, and
randomized trader actions.

Each step runs fixed sub-phases: (1) expire resting orders, (2) with
probability q_sweep perform one lattice sweep, (3) let every due trader act
once in uniformly shuffled order, (4) record last trade price (carried
forward), trade count, and magnetization. Steps are numbered 1..T so the
first sweep can already occur before any trader has acted.

One master seed feeds fixed-purpose RNG sub-streams (shuffling, lattice,
sweep coin, one per trader kind), so runs are bit-reproducible and draws for
one kind do not disturb another.
"""

from __future__ import annotations

import heapq
import math
from array import array
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .agents import (
    BehaviorParams,
    TraderKind,
    TraderState,
    draw_waiting_time,
    exponential_step,
    ising_trader_order,
    liquidity_taker_order,
    random_trader_order,
)
from .config import RunConfig
from .lattice import SpinLattice
from .orderbook import OrderBook, OrderEvent

# SeedSequence child indices, fixed so adding traders of one kind never
# shifts the draws of another.
_STREAM_SHUFFLE = 0
_STREAM_LATTICE = 1
_STREAM_SWEEP_COIN = 2
_STREAM_RANDOM = 3
_STREAM_LT = 4
_STREAM_ISING = 5


class StepReport(NamedTuple):
    time: int
    n_expired: int
    swept: bool
    n_actions: int
    n_trades: int


@dataclass
class TradeLog:
    """Columnar record of executed trades."""

    times: array
    prices: array
    volumes: array
    buyers: array
    sellers: array

    @classmethod
    def empty(cls) -> "TradeLog":
        return cls(array("q"), array("q"), array("q"), array("q"), array("q"))

    def __len__(self) -> int:
        return len(self.times)

    def rows(self):
        return zip(self.times, self.prices, self.volumes, self.buyers, self.sellers)


@dataclass
class RunOutput:
    """Per-step series plus the trade log for one finished run."""

    config: RunConfig
    prices: np.ndarray  # last trade price per step, ticks
    trades_per_step: np.ndarray
    magnetization: np.ndarray
    trades: TradeLog
    events: list[OrderEvent] | None
    lattice_final: np.ndarray | None
    first_sweep_step: int | None
    realized_first_action_ratio: float | None

    def mean_trades_per_step(self, skip: int = 0) -> float:
        counted = self.trades_per_step[skip:]
        return float(counted.mean()) if counted.size else 0.0

    def summary(self) -> dict:
        cfg = self.config
        q_prediction = (
            first_action_ratio(cfg.q_sweep, cfg.c * cfg.N_ising)
            if cfg.N_ising > 0 and cfg.q_sweep > 0
            else None
        )
        final_ticks = int(self.prices[-1]) if self.prices.size else cfg.p0
        return {
            "T": cfg.T,
            "seed": cfg.seed,
            "final_price_ticks": final_ticks,
            "final_price": final_ticks * cfg.tick_value,
            "n_trades": len(self.trades),
            "mean_trades_per_step": self.mean_trades_per_step(),
            "mean_trades_per_step_postwarmup": self.mean_trades_per_step(cfg.warmup),
            "q_prediction": q_prediction,
            "realized_first_action_ratio": self.realized_first_action_ratio,
        }


class Engine:
    """Owns the book, the lattice, the traders, and the RNG sub-streams."""

    def __init__(self, config: RunConfig):
        config.validate()
        self.config = config
        streams = np.random.SeedSequence(config.seed).spawn(6)
        self._shuffle_rng = np.random.default_rng(streams[_STREAM_SHUFFLE])
        self._lattice_rng = np.random.default_rng(streams[_STREAM_LATTICE])
        self._coin_rng = np.random.default_rng(streams[_STREAM_SWEEP_COIN])
        self._kind_rng = {
            TraderKind.RANDOM: np.random.default_rng(streams[_STREAM_RANDOM]),
            TraderKind.LIQUIDITY_TAKER: np.random.default_rng(streams[_STREAM_LT]),
            TraderKind.ISING: np.random.default_rng(streams[_STREAM_ISING]),
        }

        self.book = OrderBook(config.p0, record_events=config.log_events)
        self.lattice = (
            SpinLattice(
                config.L,
                config.J,
                config.alpha,
                config.beta,
                rng=self._lattice_rng,
                m_mode=config.m_update,
                sweep_order=config.sweep_order,
            )
            if config.N_ising > 0
            else None
        )

        self._params = {
            TraderKind.RANDOM: BehaviorParams(
                mu_vol=config.mu_vol,
                c=config.c,
                sigma_price=config.sigma_price,
                mu_lt=config.mu_lt,
            ),
            TraderKind.LIQUIDITY_TAKER: BehaviorParams(mu_vol=config.mu_vol, c=config.c),
            TraderKind.ISING: BehaviorParams(mu_vol=config.mu_vol, c=config.c),
        }
        self._n_of_kind = {
            TraderKind.RANDOM: config.N_random,
            TraderKind.LIQUIDITY_TAKER: config.N_lt,
            TraderKind.ISING: config.N_ising,
        }

        self.traders: list[TraderState] = []
        self._due_heap: list[tuple[int, int]] = []
        for kind, count in (
            (TraderKind.RANDOM, config.N_random),
            (TraderKind.LIQUIDITY_TAKER, config.N_lt),
            (TraderKind.ISING, config.N_ising),
        ):
            rng = self._kind_rng[kind]
            for k in range(count):
                trader_id = len(self.traders)
                first = draw_waiting_time(rng, count, config.c)
                site = k if kind is TraderKind.ISING else None
                self.traders.append(TraderState(trader_id, kind, first, site))
                heapq.heappush(self._due_heap, (first, trader_id))

        self._next_order_id = 0
        self.first_sweep_step: int | None = None
        self._ising_first_action: dict[int, int] = {}
        self.trades = TradeLog.empty()

    # -- stepping -------------------------------------------------------------

    def step(self, t: int) -> StepReport:
        """Run the sub-phases of step t (1-based)."""
        expired = self.book.expire(t)

        swept = False
        if self.lattice is not None and self.config.q_sweep > 0:
            if self._coin_rng.random() < self.config.q_sweep:
                self.lattice.sweep(self._lattice_rng)
                swept = True
                if self.first_sweep_step is None:
                    self.first_sweep_step = t

        due: list[int] = []
        heap = self._due_heap
        while heap and heap[0][0] <= t:
            due.append(heapq.heappop(heap)[1])
        n_trades = 0
        if due:
            order_ids = self._shuffle_rng.permutation(len(due))
            for k in order_ids:
                n_trades += self._act(self.traders[due[k]], t)

        return StepReport(t, len(expired), swept, len(due), n_trades)

    def _act(self, trader: TraderState, t: int) -> int:
        rng = self._kind_rng[trader.kind]
        params = self._params[trader.kind]
        order_id = self._next_order_id
        self._next_order_id += 1

        if trader.kind is TraderKind.RANDOM:
            order = random_trader_order(
                order_id, trader.id, t, self.book, rng, params, self.config.price_ref
            )
            executed = self.book.place_limit(order)
        elif trader.kind is TraderKind.LIQUIDITY_TAKER:
            order = liquidity_taker_order(order_id, trader.id, t, rng, params)
            executed = self.book.place_market(order)
        else:
            spin = self.lattice.spins[trader.site]
            order = ising_trader_order(order_id, trader.id, t, spin, rng, params)
            executed = self.book.place_market(order)
            if trader.id not in self._ising_first_action:
                self._ising_first_action[trader.id] = t

        if executed:
            log = self.trades
            for trade in executed:
                log.times.append(trade.time)
                log.prices.append(trade.price)
                log.volumes.append(trade.volume)
                log.buyers.append(trade.buy_trader)
                log.sellers.append(trade.sell_trader)

        trader.next_action = t + draw_waiting_time(
            rng, self._n_of_kind[trader.kind], params.c
        )
        heapq.heappush(self._due_heap, (trader.next_action, trader.id))
        return len(executed)

    def realized_first_action_ratio(self) -> float | None:
        """Fraction of spin traders whose first order preceded the first sweep."""
        if self.first_sweep_step is None or self.config.N_ising == 0:
            return None
        first = self.first_sweep_step
        acted = sum(1 for t in self._ising_first_action.values() if t < first)
        return acted / self.config.N_ising

    def run(self) -> RunOutput:
        cfg = self.config
        prices = np.empty(cfg.T, dtype=np.int64)
        counts = np.empty(cfg.T, dtype=np.int64)
        mags = np.zeros(cfg.T, dtype=np.float64)
        lattice = self.lattice
        book = self.book
        for t in range(1, cfg.T + 1):
            report = self.step(t)
            prices[t - 1] = book.last_trade_price
            counts[t - 1] = report.n_trades
            if lattice is not None:
                mags[t - 1] = lattice.magnetization()
        return RunOutput(
            config=cfg,
            prices=prices,
            trades_per_step=counts,
            magnetization=mags,
            trades=self.trades,
            events=book.events,
            lattice_final=lattice.to_array() if lattice is not None else None,
            first_sweep_step=self.first_sweep_step,
            realized_first_action_ratio=self.realized_first_action_ratio(),
        )


def run(config: RunConfig) -> RunOutput:
    return Engine(config).run()


# -- first-action ratio ------------------------------------------------------


def first_action_ratio(q_sweep: float, mu_wt: float, tail: float = 1e-12) -> float:
    """Expected fraction of spin traders acting before the first lattice sweep.

    Series sum over the step n of the first sweep: the sweep lands at n with
    probability q (1-q)^(n-1), and a trader with exponential first-action time
    (mean mu_wt) has acted strictly earlier with probability 1 - exp(-(n-1)/mu_wt).
    Truncated once the remaining geometric tail is below ``tail``.
    """
    if not 0.0 < q_sweep <= 1.0:
        raise ValueError(f"q_sweep must be in (0, 1], got {q_sweep}")
    if mu_wt <= 0:
        raise ValueError(f"mu_wt must be > 0, got {mu_wt}")
    total = 0.0
    weight = q_sweep  # q (1-q)^(n-1)
    survive = 1.0  # (1-q)^n, bounds the truncated tail
    decay = math.exp(-1.0 / mu_wt)
    acted = 0.0  # 1 - exp(-(n-1)/mu)
    comp = 1.0  # exp(-(n-1)/mu)
    while survive >= tail:
        total += weight * acted
        weight *= 1.0 - q_sweep
        survive *= 1.0 - q_sweep
        comp *= decay
        acted = 1.0 - comp
    return total


def first_action_ratio_closed_form(q_sweep: float, mu_wt: float) -> float:
    """Geometric-series closed form of :func:`first_action_ratio`."""
    if not 0.0 < q_sweep <= 1.0:
        raise ValueError(f"q_sweep must be in (0, 1], got {q_sweep}")
    if mu_wt <= 0:
        raise ValueError(f"mu_wt must be > 0, got {mu_wt}")
    return 1.0 - q_sweep / (1.0 - (1.0 - q_sweep) * math.exp(-1.0 / mu_wt))


def solve_mu_for_ratio(q_sweep: float, target: float) -> float:
    """Mean waiting time at which the first-action ratio equals ``target``."""
    if not 0.0 < q_sweep < 1.0:
        raise ValueError(f"q_sweep must be in (0, 1), got {q_sweep}")
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must be in (0, 1), got {target}")
    x = (1.0 - q_sweep / (1.0 - target)) / (1.0 - q_sweep)
    if not 0.0 < x < 1.0:
        raise ValueError(f"no solution for q_sweep={q_sweep}, target={target}")
    return -1.0 / math.log(x)


def measure_first_action_ratio(
    config: RunConfig, runs: int, seed_base: int, max_steps: int = 50_000
) -> np.ndarray:
    """Realized first-action ratio over independent runs, one value per run.

    Each run is stepped just past its first sweep; runs in which no sweep
    occurs within ``max_steps`` are dropped (vanishingly rare for the
    q_sweep values of interest).
    """
    ratios = []
    for k in range(runs):
        engine = Engine(config.with_overrides(seed=seed_base + k))
        for t in range(1, max_steps + 1):
            engine.step(t)
            if engine.first_sweep_step is not None:
                break
        ratio = engine.realized_first_action_ratio()
        if ratio is not None:
            ratios.append(ratio)
    return np.asarray(ratios)


# -- trade-rate calibration ----------------------------------------------------


def measure_trade_rate(config: RunConfig, T: int | None = None, warmup: int | None = None) -> float:
    """Mean trades per step after warmup for the given config."""
    cfg = config if T is None else config.with_overrides(T=T)
    skip = cfg.warmup if warmup is None else warmup
    out = run(cfg)
    return out.mean_trades_per_step(skip)


def calibrate_c(
    config: RunConfig,
    target: float = 5.4,
    rel_tol: float = 0.02,
    T_probe: int = 30_000,
    warmup_probe: int = 5_000,
    c_lo: float = 0.05,
    c_hi: float = 16.0,
    max_iter: int = 30,
) -> tuple[float, float]:
    """Bisect the waiting-time scale c until trades/step hits ``target``.

    The measured rate decreases in c (larger c means rarer actions). Probes
    reuse one seed so the bracketing function is deterministic. Returns
    (calibrated c, measured trades/step at that c).
    """

    def rate(c: float) -> float:
        return measure_trade_rate(
            config.with_overrides(c=c, T=T_probe, warmup=warmup_probe)
        )

    rate_lo = rate(c_lo)  # high activity
    rate_hi = rate(c_hi)  # low activity
    if not (rate_hi <= target <= rate_lo):
        raise ValueError(
            f"target {target} outside measured range [{rate_hi:.3f}, {rate_lo:.3f}] "
            f"for c in [{c_lo}, {c_hi}]"
        )
    lo, hi = c_lo, c_hi
    best_c, best_rate = lo, rate_lo
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)  # bisect in log space, c spans decades
        r = rate(mid)
        if abs(r - target) < abs(best_rate - target):
            best_c, best_rate = mid, r
        if abs(r - target) <= rel_tol * target:
            return mid, r
        if r > target:
            lo = mid
        else:
            hi = mid
    return best_c, best_rate
