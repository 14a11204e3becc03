"""Periodic 2D spin lattice with heat-bath single-spin dynamics.

Each site holds a spin of +-1. The local field couples ferromagnetic
nearest-neighbor alignment (strength J) against a global minority-seeking
term proportional to the absolute magnetization (strength alpha):

    h_i = J * sum(neighbors of i) - alpha * S_i * |M|

A heat-bath update sets S_i = +1 with probability 1 / (1 + exp(-2 beta h_i)),
evaluated on the pre-update configuration. The signed spin sum is cached so
magnetization reads are O(1) and updates are O(1).
"""

from __future__ import annotations

import math

import numpy as np


class SpinLattice:
    """L x L spins with periodic boundaries and a 4-site neighborhood.

    ``m_mode`` selects which |M| enters the local field during a sweep:
    "per_update" uses the live cache (sequential heat-bath semantics),
    "per_sweep" freezes |M| at the start of each sweep. ``sweep_order``
    selects n random sites per sweep ("random") or typewriter order
    ("sequential").
    """

    def __init__(
        self,
        L: int,
        J: float = 1.0,
        alpha: float = 4.0,
        beta: float = 1.45,
        *,
        spins: list[int] | None = None,
        rng: np.random.Generator | None = None,
        m_mode: str = "per_update",
        sweep_order: str = "random",
    ):
        if L < 1:
            raise ValueError(f"L must be >= 1, got {L}")
        if alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {alpha}")
        if beta <= 0:
            raise ValueError(f"beta must be > 0, got {beta}")
        if m_mode not in ("per_update", "per_sweep"):
            raise ValueError(f"unknown m_mode {m_mode!r}")
        if sweep_order not in ("random", "sequential"):
            raise ValueError(f"unknown sweep_order {sweep_order!r}")
        self.L = L
        self.n = L * L
        self.J = J
        self.alpha = alpha
        self.beta = beta
        self.m_mode = m_mode
        self.sweep_order = sweep_order

        if spins is not None:
            if len(spins) != self.n or any(s not in (-1, 1) for s in spins):
                raise ValueError("spins must be n values of +-1")
            self.spins = list(spins)
        elif rng is not None:
            self.spins = [1 if b else -1 for b in rng.integers(0, 2, size=self.n)]
        else:
            self.spins = [1] * self.n

        self.m_sum = sum(self.spins)
        self._neighbors = _neighbor_table(L)

    def magnetization(self) -> float:
        return self.m_sum / self.n

    def local_field(self, i: int, m_abs: float | None = None) -> float:
        """Field at site i; pass m_abs to override the live |M| (per-sweep mode)."""
        a, b, c, d = self._neighbors[i]
        spins = self.spins
        if m_abs is None:
            m_abs = abs(self.m_sum) / self.n
        return self.J * (spins[a] + spins[b] + spins[c] + spins[d]) - (
            self.alpha * spins[i] * m_abs
        )

    def flip_probability(self, i: int, m_abs: float | None = None) -> float:
        """Heat-bath probability that site i becomes +1."""
        return _logistic(2.0 * self.beta * self.local_field(i, m_abs))

    def heat_bath_update(self, i: int, u: float, m_abs: float | None = None) -> int:
        """Set S_i to +1 if u < q else -1; returns the new spin."""
        q = self.flip_probability(i, m_abs)
        new = 1 if u < q else -1
        if new != self.spins[i]:
            self.spins[i] = new
            self.m_sum += 2 * new
        return new

    def sweep(self, rng: np.random.Generator) -> None:
        """n single-site heat-bath updates (site choice per ``sweep_order``)."""
        m_abs = abs(self.m_sum) / self.n if self.m_mode == "per_sweep" else None
        if self.sweep_order == "random":
            sites = rng.integers(0, self.n, size=self.n).tolist()
        else:
            sites = range(self.n)
        us = rng.random(self.n).tolist()
        update = self.heat_bath_update
        for i, u in zip(sites, us):
            update(i, u, m_abs)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.spins, dtype=np.int8).reshape(self.L, self.L)

    def snapshot_text(self) -> str:
        """Row-major +-1 values, one lattice row per line."""
        grid = self.to_array()
        return "\n".join(" ".join(str(int(s)) for s in row) for row in grid) + "\n"


def _neighbor_table(L: int) -> list[tuple[int, int, int, int]]:
    """Flat indices of the four periodic neighbors (up, down, left, right)."""
    table = []
    for r in range(L):
        for c in range(L):
            table.append(
                (
                    ((r - 1) % L) * L + c,
                    ((r + 1) % L) * L + c,
                    r * L + (c - 1) % L,
                    r * L + (c + 1) % L,
                )
            )
    return table


def _logistic(x: float) -> float:
    # overflow-safe 1 / (1 + exp(-x))
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)
