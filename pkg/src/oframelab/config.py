"""Run configuration shared by the CLI and the experiment runners."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_SEED = 0xF8A3E


def seed_from_env(flag_value: int | None = None) -> int:
    """Resolve the seed: an explicit flag wins, then OFRAME_SEED, then default."""
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get("OFRAME_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    tol: float = 1e-9
    rank_tol: float = 1e-10
    auerbach_budget: int = 200
    auerbach_restarts: int = 4
    allow_estimates: bool = False
    samples: int = 100
    max_exact_signs: int = 16
    max_exact_multipliers: int = 20

    def __post_init__(self):
        if self.tol <= 0 or self.rank_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.auerbach_budget < 1 or self.samples < 1:
            raise ValueError("budgets must be positive")
