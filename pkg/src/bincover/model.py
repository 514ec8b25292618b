"""Exact core model for online bin covering.

Every quantity is a :class:`fractions.Fraction`; there is no floating point
anywhere in the library.  Items, sequences, bins and coverings are plain
data objects shared by the strategies, the advice oracle, the exact solver
and the CLI harness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

# Bin kinds.
CRITICAL = "critical"
T_BIN = "t-bin"
SMALL_BIN = "small-bin"
DNF_BIN = "dnf"
OPT_BIN = "opt"
PREPACKED = "prepacked"


class DomainError(ValueError):
    """A value fell outside the domain an operation is defined on."""


@dataclass(frozen=True)
class Item:
    """One input value together with its 0-based position in the input."""

    value: Fraction
    source_index: int


@dataclass(frozen=True)
class TItem:
    """Size class of values v with 1/t <= v < 1/(t-1), for 2 <= t <= k."""

    t: int


@dataclass(frozen=True)
class Small:
    """Size class of values below 1/k."""


SMALL = Small()


def classify(value: Fraction, k: int) -> TItem | Small:
    """Return the size class of ``value`` under the k-way partition.

    Values in [1/t, 1/(t-1)) are t-items and values below 1/k are small.
    Comparisons are exact, so 1/2 is a 2-item and exactly 1/k is a k-item.
    """
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    v = Fraction(value)
    if not ZERO < v < ONE:
        raise DomainError(f"classify is defined on ]0,1[, got {v}")
    reciprocal = 1 / v
    t = -(-reciprocal.numerator // reciprocal.denominator)  # exact ceil
    if t > k:
        return SMALL
    return TItem(t)


@dataclass
class Bin:
    """A bin with an id, a kind tag, and the items packed into it."""

    id: int
    kind: str
    items: list[Item] = field(default_factory=list)
    t: int | None = None  # class index, set for t-bins only


def load(bin: Bin) -> Fraction:
    """Exact sum of the item values in ``bin`` (0 for an empty bin)."""
    return sum((item.value for item in bin.items), ZERO)


def is_covered(bin: Bin) -> bool:
    """True iff the bin's load is at least 1 (exact comparison)."""
    return load(bin) >= ONE


@dataclass(frozen=True)
class Sequence:
    """An ordered input sequence, consumed item by item by strategies."""

    items: tuple[Item, ...]

    @classmethod
    def from_values(cls, values: Iterable[Fraction | int | str]) -> "Sequence":
        return cls(tuple(Item(Fraction(v), i) for i, v in enumerate(values)))

    @property
    def n(self) -> int:
        return len(self.items)

    def values(self) -> tuple[Fraction, ...]:
        return tuple(item.value for item in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Item]:
        return iter(self.items)


def total_load(seq: Sequence) -> Fraction:
    """Exact sum of all item values in the sequence."""
    return sum((item.value for item in seq.items), ZERO)


@dataclass
class Covering:
    """Covered bins produced by a run, plus items stranded in uncovered bins.

    ``bins`` holds only covered bins, so ``covered_count == len(bins)``;
    the multiset of items across ``bins`` and ``leftover`` equals the input.
    ``prepacked_count`` records how many of the covered bins came from input
    normalization rather than from the strategy itself.
    """

    bins: list[Bin]
    covered_count: int
    leftover: list[Item]
    prepacked_count: int = 0


def covering_items(covering: Covering) -> list[Item]:
    """All items of a covering: packed into bins or left over."""
    items: list[Item] = []
    for bin in covering.bins:
        items.extend(bin.items)
    items.extend(covering.leftover)
    return items


@dataclass(frozen=True)
class NormalizedInput:
    """Result of input normalization: online sequence plus prepacked bins."""

    sequence: Sequence
    prepacked: tuple[Bin, ...]
    discarded_zeros: tuple[Item, ...]


def normalize_sequence(raw: Iterable[Fraction | int | str]) -> NormalizedInput:
    """Split raw values into an online sequence over ]0,1[ and prepacked bins.

    A value >= 1 covers a bin on its own and is removed from the online
    sequence; zeros are attached to the first prepacked bin when one exists
    and recorded as discarded otherwise.  Negative values are rejected.
    Kept items retain their position in the raw input as ``source_index``.
    """
    kept: list[Item] = []
    prepacked: list[Bin] = []
    zeros: list[Item] = []
    for index, value in enumerate(Fraction(v) for v in raw):
        if value < 0:
            raise DomainError(f"negative item value {value} at position {index}")
        if value >= 1:
            prepacked.append(Bin(len(prepacked), PREPACKED, [Item(value, index)]))
        elif value == 0:
            zeros.append(Item(value, index))
        else:
            kept.append(Item(value, index))
    discarded: tuple[Item, ...] = ()
    if zeros:
        if prepacked:
            prepacked[0].items.extend(zeros)
        else:
            discarded = tuple(zeros)
    return NormalizedInput(Sequence(tuple(kept)), tuple(prepacked), discarded)


def merge_prepacked(covering: Covering, prepacked: Iterable[Bin]) -> Covering:
    """Append prepacked bins to a strategy covering, renumbering their ids."""
    extra = list(prepacked)
    if not extra:
        return covering
    next_id = max((bin.id for bin in covering.bins), default=-1) + 1
    bins = list(covering.bins)
    for offset, bin in enumerate(extra):
        bins.append(Bin(next_id + offset, PREPACKED, list(bin.items)))
    return Covering(
        bins,
        covering.covered_count + len(extra),
        list(covering.leftover),
        prepacked_count=covering.prepacked_count + len(extra),
    )


def parse_instance(text: str) -> list[Fraction]:
    """Parse the shared instance format: one value per line.

    A value is either ``p/q`` with integers and q > 0, or a finite decimal
    parsed exactly (``0.45`` becomes 9/20).  Blank lines and lines starting
    with ``#`` are ignored.
    """
    values: list[Fraction] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = Fraction(line)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"line {lineno}: cannot parse {line!r} as a rational") from exc
        values.append(value)
    return values


def format_instance(values: Iterable[Fraction]) -> str:
    return "".join(f"{value}\n" for value in values)


def load_instance(path: str | Path) -> list[Fraction]:
    return parse_instance(Path(path).read_text())


def save_instance(path: str | Path, values: Iterable[Fraction]) -> None:
    Path(path).write_text(format_instance(values))
