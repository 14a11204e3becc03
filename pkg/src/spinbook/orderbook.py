"""Tick-discretized double-auction limit order book with price-time priority.

Prices are strictly positive integers (ticks). Matching is continuous: an
incoming order trades against the opposite side while it is marketable, each
fill at the resting order's limit price, best price first and FIFO within a
price level. Limit orders carry an expiry step; market orders never rest
(any remainder when the opposite side empties is canceled).
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterator, NamedTuple


class Side(IntEnum):
    BUY = 1
    SELL = -1

    @property
    def label(self) -> str:
        return "buy" if self is Side.BUY else "sell"


class OrderKind(Enum):
    LIMIT = "limit"
    MARKET = "market"


@dataclass(eq=False, slots=True)
class Order:
    """A single buy/sell instruction.

    Limit orders carry a price and an expiry step (``expires_at = placed_at +
    lifetime``); market orders carry neither. ``volume`` is decremented in
    place as the order fills, so after submission it holds the unfilled
    remainder. ``seq`` is the book's arrival stamp used for time priority.
    """

    id: int
    trader_id: int
    side: Side
    kind: OrderKind
    volume: int
    price: int | None = None
    placed_at: int = 0
    expires_at: int | None = None
    seq: int = -1


def limit_order(
    order_id: int,
    trader_id: int,
    side: Side,
    price: int,
    volume: int,
    placed_at: int,
    lifetime: int,
) -> Order:
    if volume <= 0:
        raise ValueError(f"volume must be positive, got {volume}")
    if price < 1:
        raise ValueError(f"price must be >= 1 tick, got {price}")
    if lifetime <= 0:
        raise ValueError(f"lifetime must be positive, got {lifetime}")
    return Order(
        id=order_id,
        trader_id=trader_id,
        side=side,
        kind=OrderKind.LIMIT,
        volume=volume,
        price=price,
        placed_at=placed_at,
        expires_at=placed_at + lifetime,
    )


def market_order(
    order_id: int, trader_id: int, side: Side, volume: int, placed_at: int
) -> Order:
    if volume <= 0:
        raise ValueError(f"volume must be positive, got {volume}")
    return Order(
        id=order_id,
        trader_id=trader_id,
        side=side,
        kind=OrderKind.MARKET,
        volume=volume,
        placed_at=placed_at,
    )


class Trade(NamedTuple):
    time: int
    price: int
    volume: int
    buy_trader: int
    sell_trader: int


class OrderEvent(NamedTuple):
    time: int
    event: str  # place | fill | expire | cancel
    order_id: int
    side: str
    kind: str
    price: int | None
    volume: int


class OrderBook:
    """Two price-time-priority sides plus an expiry index.

    Each side is a dict of price level -> FIFO deque, with a lazily cleaned
    heap of prices for best-price lookup. Expiry uses a (expires_at, id) heap;
    entries for already-filled orders are skipped. All state is integer, so
    identical operation sequences give identical trades.
    """

    def __init__(self, initial_price: int = 10_000, record_events: bool = False):
        if initial_price < 1:
            raise ValueError(f"initial_price must be >= 1 tick, got {initial_price}")
        self._bid_levels: dict[int, deque[Order]] = {}
        self._ask_levels: dict[int, deque[Order]] = {}
        self._bid_heap: list[int] = []  # negated prices, max at top
        self._ask_heap: list[int] = []
        self._expiry_heap: list[tuple[int, int]] = []
        self._orders: dict[int, Order] = {}  # resting limit orders by id
        self._next_seq = 0
        self.last_trade_price: int = initial_price
        self.events: list[OrderEvent] | None = [] if record_events else None

    # -- queries ------------------------------------------------------------

    def best_bid(self) -> int | None:
        heap, levels = self._bid_heap, self._bid_levels
        while heap and -heap[0] not in levels:
            heapq.heappop(heap)
        return -heap[0] if heap else None

    def best_ask(self) -> int | None:
        heap, levels = self._ask_heap, self._ask_levels
        while heap and heap[0] not in levels:
            heapq.heappop(heap)
        return heap[0] if heap else None

    def midpoint(self) -> int | None:
        """Mean of best bid and ask in ticks; half-tick ties round up."""
        bid, ask = self.best_bid(), self.best_ask()
        if bid is None or ask is None:
            return None
        return (bid + ask + 1) // 2

    @property
    def resting_count(self) -> int:
        return len(self._orders)

    def resting_volume(self, side: Side) -> int:
        levels = self._bid_levels if side is Side.BUY else self._ask_levels
        return sum(o.volume for q in levels.values() for o in q)

    def resting_orders(self) -> Iterator[Order]:
        """All resting orders, bids then asks, by (price, seq) within a side."""
        for price in sorted(self._bid_levels, reverse=True):
            yield from self._bid_levels[price]
        for price in sorted(self._ask_levels):
            yield from self._ask_levels[price]

    # -- operations ----------------------------------------------------------

    def place_limit(self, order: Order) -> list[Trade]:
        """Match the order while marketable, then rest any remainder."""
        order.seq = self._next_seq
        self._next_seq += 1
        self._log("place", order)
        trades = self._match(order, price_limit=order.price)
        if order.volume > 0:
            self._rest(order)
        return trades

    def place_market(self, order: Order) -> list[Trade]:
        """Walk the opposite side best-first; cancel any unfillable remainder."""
        order.seq = self._next_seq
        self._next_seq += 1
        self._log("place", order)
        trades = self._match(order, price_limit=None)
        if order.volume > 0:
            self._log("cancel", order)
        return trades

    def expire(self, now: int) -> list[Order]:
        """Remove every resting order with expires_at <= now (inclusive)."""
        removed: list[Order] = []
        heap = self._expiry_heap
        orders = self._orders
        while heap and heap[0][0] <= now:
            _, order_id = heapq.heappop(heap)
            order = orders.pop(order_id, None)
            if order is None:
                continue  # already fully filled
            levels = self._bid_levels if order.side is Side.BUY else self._ask_levels
            queue = levels[order.price]
            queue.remove(order)
            if not queue:
                del levels[order.price]
            removed.append(order)
            self._log("expire", order)
        return removed

    # -- internals -----------------------------------------------------------

    def _match(self, order: Order, price_limit: int | None) -> list[Trade]:
        trades: list[Trade] = []
        buying = order.side is Side.BUY
        levels = self._ask_levels if buying else self._bid_levels
        heap = self._ask_heap if buying else self._bid_heap
        orders = self._orders
        now = order.placed_at
        while order.volume > 0:
            while heap and (heap[0] if buying else -heap[0]) not in levels:
                heapq.heappop(heap)
            if not heap:
                break
            best = heap[0] if buying else -heap[0]
            if price_limit is not None and (
                best > price_limit if buying else best < price_limit
            ):
                break
            queue = levels[best]
            while order.volume > 0 and queue:
                resting = queue[0]
                take = resting.volume if resting.volume <= order.volume else order.volume
                resting.volume -= take
                order.volume -= take
                if buying:
                    trade = Trade(now, best, take, order.trader_id, resting.trader_id)
                else:
                    trade = Trade(now, best, take, resting.trader_id, order.trader_id)
                trades.append(trade)
                self.last_trade_price = best
                if self.events is not None:
                    self.events.append(
                        OrderEvent(now, "fill", resting.id, resting.side.label,
                                   "limit", best, take)
                    )
                if resting.volume == 0:
                    queue.popleft()
                    del orders[resting.id]
            if not queue:
                del levels[best]  # heap entry goes stale, purged on next peek
        return trades

    def _rest(self, order: Order) -> None:
        levels = self._bid_levels if order.side is Side.BUY else self._ask_levels
        heap = self._bid_heap if order.side is Side.BUY else self._ask_heap
        queue = levels.get(order.price)
        if queue is None:
            levels[order.price] = deque([order])
            heapq.heappush(heap, -order.price if order.side is Side.BUY else order.price)
        else:
            queue.append(order)
        self._orders[order.id] = order
        heapq.heappush(self._expiry_heap, (order.expires_at, order.id))

    def _log(self, event: str, order: Order) -> None:
        if self.events is not None:
            self.events.append(
                OrderEvent(order.placed_at, event, order.id, order.side.label,
                           order.kind.value, order.price, order.volume)
            )
