"""Bookmaker betting game: analytic expectation and seeded simulation.

Each round the gambler stakes one unit on a button i drawn from her betting
distribution b; the button lights with probability P_i, paying g_i - eps
with the bookmaker's noncontextual gain g_i = 1 / (alpha b_i).  Against
quantum probabilities summing above alpha, the expected per-round profit
approaches (quantum bound / alpha) - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .rng import uniform_block


@dataclass(frozen=True)
class GameConfig:
    """One game setup; probabilities usually come from a representation."""

    probabilities: tuple[float, ...]
    betting: tuple[float, ...]
    alpha_used: float
    epsilon: float = 0.0
    stake: float = 1.0
    rounds: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        p = self.probabilities
        b = self.betting
        if len(p) == 0 or len(p) != len(b):
            raise InputError("need one betting weight per button")
        if any(not (0.0 <= x <= 1.0) for x in p):
            raise InputError("button probabilities must be in [0, 1]")
        if any(x <= 0.0 for x in b):
            raise InputError("betting weights must be positive")
        if abs(math.fsum(b) - 1.0) > 1e-12:
            raise InputError("betting weights must sum to 1")
        if self.alpha_used <= 0:
            raise InputError("the trusted noncontextual bound must be positive")
        if self.epsilon < 0:
            raise InputError("epsilon must be nonnegative")
        if self.stake <= 0:
            raise InputError("stake must be positive")

    @property
    def gains(self) -> tuple[float, ...]:
        return tuple(1.0 / (self.alpha_used * b) for b in self.betting)


@dataclass
class GameResult:
    empirical_profit_per_unit: float
    standard_error: float
    analytic_expectation: float
    rounds: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "empirical": self.empirical_profit_per_unit,
            "stderr": self.standard_error,
            "analytic": self.analytic_expectation,
            "rounds": self.rounds,
            "seed": self.seed,
        }


def uniform_betting(n: int) -> tuple[float, ...]:
    return tuple(1.0 / n for _ in range(n))


def expected_profit(cfg: GameConfig) -> float:
    """Expected per-round profit per unit stake.

    With gains g_i = 1 / (alpha b_i) the pay-off expectation is
    sum_i b_i P_i (g_i - eps) = (1/alpha) sum_i P_i - eps sum_i b_i P_i;
    subtracting the unit stake gives the profit.
    """
    p = np.asarray(cfg.probabilities)
    b = np.asarray(cfg.betting)
    return float(p.sum() / cfg.alpha_used - cfg.epsilon * (b * p).sum() - 1.0)


def simulate_game(cfg: GameConfig) -> GameResult:
    """Seeded Monte-Carlo run of the game; deterministic for a fixed seed.

    Round r draws stream outputs 2r (button, by inverse CDF over the betting
    weights) and 2r+1 (outcome, lit iff below P_i) from the package's
    portable generator, so results are identical across platforms.
    """
    if cfg.rounds <= 0:
        raise InputError("need at least one round")
    p = np.asarray(cfg.probabilities)
    g = np.asarray(cfg.gains)
    cum_b = np.cumsum(np.asarray(cfg.betting))
    cum_b[-1] = 1.0  # guard the last bin against rounding

    total = 0.0
    total_sq = 0.0
    block = 1 << 18
    for start in range(0, cfg.rounds, block):
        count = min(block, cfg.rounds - start)
        u = uniform_block(cfg.seed, 2 * start, 2 * count)
        buttons = np.searchsorted(cum_b, u[0::2], side="right")
        buttons = np.minimum(buttons, len(cum_b) - 1)
        lit = u[1::2] < p[buttons]
        profit = np.where(lit, g[buttons] - cfg.epsilon, 0.0) - 1.0
        total += float(profit.sum())
        total_sq += float((profit * profit).sum())

    mean = total / cfg.rounds
    var = max(total_sq / cfg.rounds - mean * mean, 0.0)
    stderr = math.sqrt(var / cfg.rounds)
    return GameResult(
        empirical_profit_per_unit=mean,
        standard_error=stderr,
        analytic_expectation=expected_profit(cfg),
        rounds=cfg.rounds,
        seed=cfg.seed,
    )
