"""Agent-based double-auction market simulator driven by a coupled spin
lattice, with an equilibrium-pricing baseline and stylized-facts statistics.
"""

from .agents import (
    BehaviorParams,
    TraderKind,
    TraderState,
    draw_waiting_time,
    ising_trader_order,
    liquidity_taker_order,
    random_trader_order,
)
from .baseline import (
    BaselineConfig,
    BkfParams,
    equilibrium_log_return,
    fundamentalist_demand,
    implied_price,
    interacting_demand,
    run_baseline,
)
from .config import ConfigError, RunConfig, load_config, parse_config, serialize_config
from .engine import (
    Engine,
    RunOutput,
    calibrate_c,
    first_action_ratio,
    first_action_ratio_closed_form,
    measure_first_action_ratio,
    run,
    solve_mu_for_ratio,
)
from .lattice import SpinLattice
from .orderbook import (
    Order,
    OrderBook,
    OrderKind,
    Side,
    Trade,
    limit_order,
    market_order,
)

__version__ = "0.1.0"

__all__ = [
    "BehaviorParams",
    "BaselineConfig",
    "BkfParams",
    "ConfigError",
    "Engine",
    "Order",
    "OrderBook",
    "OrderKind",
    "RunConfig",
    "RunOutput",
    "Side",
    "SpinLattice",
    "Trade",
    "TraderKind",
    "TraderState",
    "calibrate_c",
    "draw_waiting_time",
    "equilibrium_log_return",
    "first_action_ratio",
    "first_action_ratio_closed_form",
    "fundamentalist_demand",
    "implied_price",
    "interacting_demand",
    "ising_trader_order",
    "limit_order",
    "liquidity_taker_order",
    "load_config",
    "market_order",
    "measure_first_action_ratio",
    "parse_config",
    "random_trader_order",
    "run",
    "run_baseline",
    "serialize_config",
    "solve_mu_for_ratio",
]
