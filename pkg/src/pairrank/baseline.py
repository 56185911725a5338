"""Projected stochastic-gradient comparator on the pairwise squared loss.

The moment-based trainers need no step size; this deliberately plain
SGD exists so experiments can show what the alternative looks like.
Each update draws one positive-negative pair uniformly with
replacement, steps along the squared-loss gradient for that pair, and
projects back onto the weight ball.  Fixed step size, zero
initialization, no schedule, no averaging.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, RankerWeights

__all__ = ["SgdConfig", "train_pairwise_sgd"]


@dataclass(frozen=True, slots=True)
class SgdConfig:
    """Step size, pair budget, seed, and projection radius."""

    step_size: float
    pair_budget: int
    seed: int
    w_star: float

    def __post_init__(self) -> None:
        if not self.step_size >= 0.0:
            raise ValueError(f"step_size must be >= 0, got {self.step_size!r}")
        if self.pair_budget < 1:
            raise ValueError(f"pair_budget must be >= 1, got {self.pair_budget}")
        if not self.w_star > 0.0:
            raise ValueError(f"w_star must be > 0, got {self.w_star!r}")


def train_pairwise_sgd(data: Dataset, cfg: SgdConfig) -> RankerWeights:
    """Run the projected-SGD loop and return the final iterate.

    Update rule for the pair difference d: the squared-loss gradient is
    (w'd - 1) d, so w moves toward margin 1 on the sampled pair, then
    is radially projected whenever it leaves the ball.  The positive
    and negative index sequences are each pre-generated with one PCG64
    call keyed by cfg.seed (positives first), making the whole
    trajectory a pure function of the config.
    """
    data.require_trainable()
    rng = np.random.default_rng(cfg.seed)
    pos_idx = rng.integers(0, data.n1, size=cfg.pair_budget)
    neg_idx = rng.integers(0, data.n0, size=cfg.pair_budget)
    w = np.zeros(data.dim, dtype=np.float64)
    for i, j in zip(pos_idx, neg_idx):
        diff = data.positives[i] - data.negatives[j]
        w -= cfg.step_size * ((w @ diff - 1.0) * diff)
        norm = float(np.linalg.norm(w))
        if norm > cfg.w_star:
            w *= cfg.w_star / norm
    return RankerWeights(w)
