"""Advice computation by order statistics and exhaustive emulation.

The oracle knows the whole input.  It counts the 2-items, tries every
number m of critical bins from 0 up to that count with x_m set to the m-th
largest input value, emulates the advice strategy for each, and reports
the advice that covers the most bins (smallest such m on ties).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import ONE, DomainError, Sequence, TItem, classify
from .strategies import advice_dh_run


def select_mth_largest(seq: Sequence, m: int) -> Fraction:
    """The m-th largest value in the sequence; m = 0 returns the sentinel 1.

    Ties are kept as duplicates, matching a descending sort of the values.
    """
    if m == 0:
        return ONE
    if not 0 <= m <= seq.n:
        raise DomainError(f"m must lie in 0..{seq.n}, got {m}")
    ordered = sorted((item.value for item in seq.items), reverse=True)
    return ordered[m - 1]


def count_t_items(seq: Sequence, k: int, t: int) -> int:
    """Number of t-items in the sequence under the k-way classification."""
    if not 2 <= t <= k:
        raise DomainError(f"t must lie in 2..{k}, got {t}")
    wanted = TItem(t)
    return sum(1 for item in seq.items if classify(item.value, k) == wanted)


@dataclass(frozen=True)
class OracleResult:
    """Best advice found by the sweep, plus the full sweep table."""

    m: int
    x_m: Fraction
    covered: int
    sweep: tuple[tuple[int, int], ...]


def compute_advice(seq: Sequence, k: int) -> OracleResult:
    """Sweep m from 0 to the 2-item count and keep the best advice.

    Each candidate m is emulated with x_m = m-th largest value; the result
    is the smallest m whose emulated covered count is maximal.
    """
    two_items = count_t_items(seq, k, 2)
    ordered = sorted((item.value for item in seq.items), reverse=True)
    sweep: list[tuple[int, int]] = []
    best_m = 0
    best_covered = -1
    best_x = ONE
    for m in range(two_items + 1):
        x_m = ONE if m == 0 else ordered[m - 1]
        covered = advice_dh_run(seq, k, m, x_m).covered_count
        sweep.append((m, covered))
        if covered > best_covered:
            best_m, best_covered, best_x = m, covered, x_m
    return OracleResult(best_m, best_x, best_covered, tuple(sweep))
