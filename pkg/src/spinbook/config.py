"""Run parameterization and the flat ``key = value`` config-file format.

Config files hold one ``key = value`` pair per line, keys exactly matching
the RunConfig field names; blank lines and ``#`` comments are ignored.
Parsing then serializing then parsing again yields an identical config.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    """Full parameterization of one simulation run.

    Counts per trader kind (N_random place limit orders, N_lt and N_ising
    place market orders); c scales waiting times (mean wait = c * N_kind);
    mu_lt / mu_vol / sigma_price are the behavior parameters; J / alpha /
    beta / L parameterize the spin lattice (N_ising must equal L*L when
    nonzero); q_sweep is the per-step probability of one lattice sweep.
    Prices are integer ticks of ``tick_value`` currency each, seeded at p0.
    """

    seed: int = 1
    T: int = 100_000
    N_random: int = 2160
    N_ising: int = 144
    N_lt: int = 0
    c: float = 0.45
    mu_lt: float = 600.0
    mu_vol: float = 100.0
    sigma_price: float = 10.0
    J: float = 1.0
    alpha: float = 4.0
    beta: float = 1.45
    L: int = 12
    q_sweep: float = 0.001
    tick_value: float = 0.01
    p0: int = 10_000
    dt_list: tuple[int, ...] = (10, 30, 60, 360, 540, 720)
    warmup: int = 10_000
    price_ref: str = "own"  # limit-price reference side: own | opposite
    sweep_order: str = "random"  # random | sequential site order per sweep
    m_update: str = "per_update"  # |M| refresh during a sweep: per_update | per_sweep
    log_events: bool = False

    def validate(self) -> None:
        if self.T < 0:
            raise ConfigError("T", f"must be >= 0, got {self.T}")
        for name in ("N_random", "N_ising", "N_lt"):
            if getattr(self, name) < 0:
                raise ConfigError(name, f"must be >= 0, got {getattr(self, name)}")
        for name in ("c", "mu_lt", "mu_vol", "sigma_price", "beta", "tick_value"):
            if getattr(self, name) <= 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        if self.alpha < 0:
            raise ConfigError("alpha", f"must be >= 0, got {self.alpha}")
        if not 0.0 <= self.q_sweep <= 1.0:
            raise ConfigError("q_sweep", f"must be in [0, 1], got {self.q_sweep}")
        if self.N_ising > 0 and self.N_ising != self.L * self.L:
            raise ConfigError(
                "N_ising", f"must equal L*L = {self.L * self.L}, got {self.N_ising}"
            )
        if self.p0 < 1:
            raise ConfigError("p0", f"must be >= 1 tick, got {self.p0}")
        if self.warmup < 0:
            raise ConfigError("warmup", f"must be >= 0, got {self.warmup}")
        if not self.dt_list or any(dt < 1 for dt in self.dt_list):
            raise ConfigError("dt_list", f"needs intervals >= 1, got {self.dt_list}")
        if self.price_ref not in ("own", "opposite"):
            raise ConfigError("price_ref", f"must be own|opposite, got {self.price_ref}")
        if self.sweep_order not in ("random", "sequential"):
            raise ConfigError(
                "sweep_order", f"must be random|sequential, got {self.sweep_order}"
            )
        if self.m_update not in ("per_update", "per_sweep"):
            raise ConfigError(
                "m_update", f"must be per_update|per_sweep, got {self.m_update}"
            )

    def with_overrides(self, **kwargs) -> "RunConfig":
        cfg = replace(self, **kwargs)
        cfg.validate()
        return cfg


def _parse_value(name: str, kind: str, text: str):
    text = text.strip()
    try:
        if kind == "bool":
            if text.lower() in ("true", "1", "yes"):
                return True
            if text.lower() in ("false", "0", "no"):
                return False
            raise ValueError(text)
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "str":
            return text
        # tuple[int, ...]
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(name, f"cannot parse {text!r}") from exc


def _field_kinds(cls) -> dict[str, str]:
    # annotations are strings under `from __future__ import annotations`
    kinds = {}
    for f in fields(cls):
        ann = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
        kinds[f.name] = "tuple" if ann.startswith("tuple") else ann
    return kinds


def parse_flat(text: str, cls):
    """Parse flat ``key = value`` text into a dataclass and validate it."""
    kinds = _field_kinds(cls)
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key not in kinds:
            raise ConfigError(key, "unknown config key")
        values[key] = _parse_value(key, kinds[key], value)
    cfg = cls(**values)
    cfg.validate()
    return cfg


def serialize_flat(cfg) -> str:
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> RunConfig:
    return parse_flat(text, RunConfig)


def serialize_config(cfg: RunConfig) -> str:
    return serialize_flat(cfg)


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text())


def save_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(serialize_config(cfg))
