"""Pair-moment builders.

Three routes to the same object, a :class:`~pairrank.core.PairMoments`:

* :func:`batch_moments_naive` walks every positive-negative pair and
  accumulates difference moments literally.  Quadratic in the sample
  counts; kept as the reference implementation and the honest cost
  model for the all-pairs trainer.
* :func:`batch_moments_fast` produces the algebraically identical
  result from per-class moments in linear time.
* :func:`subsample_moments` averages over s pairs drawn uniformly with
  replacement from the n1 * n0 grid, using a counter-based generator so
  the drawn index sequence is a pure function of (seed, s, n1, n0).

Numerical policy, chosen for run-to-run determinism: mean vectors are
accumulated with a chunked Neumaier compensated sum; second-moment
matrices are accumulated in plain index order via einsum with
optimization disabled, which fixes the reduction order regardless of
BLAS vendor or thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BatchProvenance,
    Dataset,
    PairMoments,
    SubsampleProvenance,
)

__all__ = [
    "SubsampleConfig",
    "batch_moments_naive",
    "batch_moments_fast",
    "subsample_moments",
    "draw_pair_indices",
]

# Rows per partial sum in the compensated mean accumulator.
_CHUNK = 512


@dataclass(frozen=True, slots=True)
class SubsampleConfig:
    """How many pairs to draw and with what seed.

    The seed is a single unsigned 64-bit word; it keys the counter-based
    generator described in :func:`draw_pair_indices`.
    """

    s: int
    seed: int

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValueError(f"subsample size must be >= 1, got {self.s}")
        if not (0 <= self.seed < 2**64):
            raise ValueError(f"seed must fit in an unsigned 64-bit word, got {self.seed}")


def _neumaier_over_rows(rows: np.ndarray) -> np.ndarray:
    """Sum matrix rows with chunked Neumaier compensation.

    Rows are grouped into fixed-size chunks summed by numpy (pairwise,
    deterministic for a fixed chunk size), and the chunk partials are
    combined left to right with Neumaier's correction.  This keeps the
    result independent of the total row count's effect on numpy's
    internal blocking while costing one pass.
    """
    n, dim = rows.shape
    total = np.zeros(dim, dtype=np.float64)
    comp = np.zeros(dim, dtype=np.float64)
    for start in range(0, n, _CHUNK):
        part = np.sum(rows[start : start + _CHUNK], axis=0)
        fresh = total + part
        swap = np.abs(total) >= np.abs(part)
        comp += np.where(swap, (total - fresh) + part, (part - fresh) + total)
        total = fresh
    return total + comp


def _second_moment(rows: np.ndarray) -> np.ndarray:
    """Plain index-order sum of row outer products (not BLAS-reordered)."""
    return np.einsum("si,sj->ij", rows, rows, optimize=False)


def batch_moments_naive(data: Dataset) -> PairMoments:
    """All-pairs difference moments by literal enumeration.

    For every positive row i the full block of n0 differences is formed
    and folded into the accumulators, so time is Theta(n1 * n0 * d) for
    the mean and Theta(n1 * n0 * d^2) for the second moment, with
    Theta(d^2) working memory.  Exists as the ground-truth oracle and
    for cost measurement; use :func:`batch_moments_fast` otherwise.
    """
    data.require_trainable()
    n1, n0, dim = data.n1, data.n0, data.dim
    pos, neg = data.positives, data.negatives
    row_sums = np.empty((n1, dim), dtype=np.float64)
    sigma = np.zeros((dim, dim), dtype=np.float64)
    for i in range(n1):
        diffs = pos[i] - neg
        row_sums[i] = np.sum(diffs, axis=0)
        sigma += _second_moment(diffs)
    count = float(n1) * float(n0)
    mu = _neumaier_over_rows(row_sums) / count
    sigma /= count
    return PairMoments(mu=mu, sigma=sigma, provenance=BatchProvenance(n1=n1, n0=n0))


def batch_moments_fast(data: Dataset) -> PairMoments:
    """All-pairs difference moments from per-class moments, linear time.

    Writing m1, m0 for the class means and M1, M0 for the class second
    moments, the average over all n1 * n0 differences factorizes:

        mu    = m1 - m0
        sigma = M1 + M0 - m1 m0' - m0 m1'

    because the cross term of (x1 - x0)(x1 - x0)' averages to the outer
    product of the class means.  Cost Theta((n1 + n0) d^2), same result
    as :func:`batch_moments_naive` up to rounding.
    """
    data.require_trainable()
    n1, n0 = data.n1, data.n0
    m1 = _neumaier_over_rows(data.positives) / n1
    m0 = _neumaier_over_rows(data.negatives) / n0
    big_m1 = _second_moment(data.positives) / n1
    big_m0 = _second_moment(data.negatives) / n0
    cross = np.outer(m1, m0)
    mu = m1 - m0
    sigma = big_m1 + big_m0 - cross - cross.T
    return PairMoments(mu=mu, sigma=sigma, provenance=BatchProvenance(n1=n1, n0=n0))


def draw_pair_indices(seed: int, s: int, n1: int, n0: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic uniform pair indices, with replacement.

    Generator contract (stable across platforms and releases of this
    package; changing it is a format break):

    * The stream is Philox4x64-10 keyed by ``seed``, read as raw 64-bit
      words in counter order.
    * Draw t (0-based) consumes word 2t for its positive index and word
      2t + 1 for its negative index.
    * A word u maps to an index in {0, ..., n-1} by modulo rejection:
      u is accepted iff u < 2**64 - (2**64 mod n), in which case the
      index is u mod n.  Rejected slots are redrawn from the words
      after the first 2s: all still-rejected positive slots first, in
      ascending draw position, round by round until none remain, then
      the negative slots the same way.  When n is a power of two no
      word is ever rejected.

    Rejection makes every index exactly equally likely, and the fixed
    word layout makes the sequence a pure function of (seed, s, n1, n0).
    """
    if s < 1:
        raise ValueError(f"need at least one pair, got s={s}")
    if n1 < 1 or n0 < 1:
        raise ValueError(f"both classes must be non-empty, got n1={n1}, n0={n0}")
    bits = np.random.Philox(key=seed)
    words = bits.random_raw(2 * s)
    pos_raw = words[0::2].copy()
    neg_raw = words[1::2].copy()
    out: list[np.ndarray] = []
    for raw, n in ((pos_raw, np.uint64(n1)), (neg_raw, np.uint64(n0))):
        remainder = (1 << 64) % int(n)
        # remainder == 0 means every 64-bit word already maps uniformly.
        if remainder:
            cutoff = np.uint64((1 << 64) - remainder)
            rejected = np.flatnonzero(raw >= cutoff)
            while rejected.size:
                redraw = bits.random_raw(rejected.size)
                raw[rejected] = redraw
                rejected = rejected[redraw >= cutoff]
        out.append((raw % n).astype(np.int64))
    return out[0], out[1]


def subsample_moments(data: Dataset, cfg: SubsampleConfig) -> PairMoments:
    """Difference moments over s uniformly drawn pairs, with replacement.

    Each of the s draws picks one positive and one negative index
    independently and uniformly, so the expectation of the returned
    moments under the seed equals the all-pairs moments.  Cost is
    Theta(s * d^2) time and Theta(d^2) memory.
    """
    data.require_trainable()
    i_idx, j_idx = draw_pair_indices(cfg.seed, cfg.s, data.n1, data.n0)
    diffs = data.positives[i_idx] - data.negatives[j_idx]
    mu = _neumaier_over_rows(diffs) / cfg.s
    sigma = _second_moment(diffs) / cfg.s
    return PairMoments(
        mu=mu, sigma=sigma, provenance=SubsampleProvenance(s=cfg.s, seed=cfg.seed)
    )
