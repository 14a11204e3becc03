"""Trader behaviors: random limit-order placement, random market orders, and
spin-driven market orders.

All continuous draws (waiting times, lifetimes, volumes) are exponential and
rounded up to an integer with a floor of 1, since time steps and shares are
discrete. Waiting times have mean c * N_kind, where N_kind counts traders of
the acting trader's own kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .orderbook import Order, OrderBook, Side, limit_order, market_order


class TraderKind(Enum):
    RANDOM = "random"
    LIQUIDITY_TAKER = "liquidity_taker"
    ISING = "ising"


@dataclass(slots=True)
class TraderState:
    id: int
    kind: TraderKind
    next_action: int
    site: int | None = None  # lattice site, spin-driven traders only


@dataclass(frozen=True)
class BehaviorParams:
    """Behavior parameters shared by a trader kind.

    mu_vol: mean order volume (shares); sigma_price: std of the limit-price
    offset in ticks (limit traders only); mu_lt: mean limit-order lifetime in
    steps (limit traders only); c: waiting-time scale, mean wait = c * N_kind.
    """

    mu_vol: float
    c: float
    sigma_price: float | None = None
    mu_lt: float | None = None

    def __post_init__(self):
        for name in ("mu_vol", "c", "sigma_price", "mu_lt"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")


def exponential_step(rng: np.random.Generator, mean: float) -> int:
    """Exponential draw rounded up to an integer >= 1."""
    return max(1, math.ceil(rng.exponential(mean)))


def draw_waiting_time(rng: np.random.Generator, n_of_kind: int, c: float) -> int:
    if n_of_kind < 1:
        raise ValueError(f"n_of_kind must be >= 1, got {n_of_kind}")
    return exponential_step(rng, c * n_of_kind)


def limit_reference_price(book: OrderBook, side: Side, convention: str = "own") -> int:
    """Reference price for a new limit order.

    "own" starts from the best price of the order's own side (best bid for
    buys), "opposite" from the other side. Fallback when absent: other best,
    then last trade price (which is seeded, so this is total).
    """
    bid, ask = book.best_bid(), book.best_ask()
    own, opp = (bid, ask) if side is Side.BUY else (ask, bid)
    if convention == "opposite":
        own, opp = opp, own
    for price in (own, opp, book.last_trade_price):
        if price is not None:
            return price
    raise AssertionError("unreachable: last_trade_price is always set")


def random_trader_order(
    order_id: int,
    trader_id: int,
    now: int,
    book: OrderBook,
    rng: np.random.Generator,
    params: BehaviorParams,
    price_ref: str = "own",
) -> Order:
    """Limit order on a fair coin side, Gaussian-offset price, exp volume/lifetime."""
    side = Side.BUY if rng.random() < 0.5 else Side.SELL
    ref = limit_reference_price(book, side, price_ref)
    price = max(1, math.floor(ref + rng.normal(0.0, params.sigma_price) + 0.5))
    volume = exponential_step(rng, params.mu_vol)
    lifetime = exponential_step(rng, params.mu_lt)
    return limit_order(order_id, trader_id, side, price, volume, now, lifetime)


def liquidity_taker_order(
    order_id: int,
    trader_id: int,
    now: int,
    rng: np.random.Generator,
    params: BehaviorParams,
) -> Order:
    """Market order on a fair coin side with exponential volume."""
    side = Side.BUY if rng.random() < 0.5 else Side.SELL
    volume = exponential_step(rng, params.mu_vol)
    return market_order(order_id, trader_id, side, volume, now)


def ising_trader_order(
    order_id: int,
    trader_id: int,
    now: int,
    spin: int,
    rng: np.random.Generator,
    params: BehaviorParams,
) -> Order:
    """Market order whose side is the trader's current spin: +1 buys, -1 sells."""
    side = Side.BUY if spin > 0 else Side.SELL
    volume = exponential_step(rng, params.mu_vol)
    return market_order(order_id, trader_id, side, volume, now)
