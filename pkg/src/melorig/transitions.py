"""Pitch-class transition counts, their row-stochastic form, and n-gram counts."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BadOrder, UndefinedRow
from .ingest import PITCH_CLASS_NAMES, PitchClassSequence

MIN_ORDER = 2
MAX_ORDER = 8


def _notes(seq: PitchClassSequence | Sequence[int]) -> Sequence[int]:
    return seq.notes if isinstance(seq, PitchClassSequence) else seq


@dataclass(frozen=True)
class CountMatrix:
    counts: np.ndarray  # (12, 12) int64, row = from, column = to

    def __post_init__(self):
        arr = np.asarray(self.counts, dtype=np.int64)
        if arr.shape != (12, 12):
            raise ValueError(f"count matrix must be 12x12, got {arr.shape}")
        if (arr < 0).any():
            raise ValueError("transition counts must be non-negative")
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)

    @classmethod
    def zeros(cls) -> "CountMatrix":
        return cls(np.zeros((12, 12), dtype=np.int64))

    @property
    def total_bigrams(self) -> int:
        return int(self.counts.sum())

    def row_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def __eq__(self, other):
        return isinstance(other, CountMatrix) and np.array_equal(self.counts, other.counts)

    def __add__(self, other: "CountMatrix") -> "CountMatrix":
        return merge_counts(self, other)

    def __sub__(self, other: "CountMatrix") -> "CountMatrix":
        return CountMatrix(self.counts - other.counts)


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic transition probabilities.

    Rows with no observations are NaN and absent from ``defined_rows``.
    """

    probs: np.ndarray
    defined_rows: frozenset[int]

    def __post_init__(self):
        arr = np.array(self.probs, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @classmethod
    def uniform(cls) -> "StochasticMatrix":
        return cls(np.full((12, 12), 1.0 / 12.0), frozenset(range(12)))

    @property
    def fully_defined(self) -> bool:
        return len(self.defined_rows) == 12


def count_transitions(seq: PitchClassSequence | Sequence[int]) -> CountMatrix:
    notes = np.asarray(_notes(seq), dtype=np.intp)
    counts = np.zeros((12, 12), dtype=np.int64)
    if len(notes) >= 2:
        np.add.at(counts, (notes[:-1], notes[1:]), 1)
    return CountMatrix(counts)


def merge_counts(a: CountMatrix, b: CountMatrix) -> CountMatrix:
    return CountMatrix(a.counts + b.counts)


def corpus_counts(seqs: Iterable[PitchClassSequence]) -> CountMatrix:
    return reduce(merge_counts, (count_transitions(s) for s in seqs), CountMatrix.zeros())


def normalize(c: CountMatrix) -> StochasticMatrix:
    totals = c.row_totals()
    probs = np.full((12, 12), np.nan)
    defined = np.flatnonzero(totals > 0)
    probs[defined] = c.counts[defined] / totals[defined, None]
    return StochasticMatrix(probs, frozenset(int(i) for i in defined))


def lookup(m: StochasticMatrix, src: int, dst: int) -> float:
    if src not in m.defined_rows:
        raise UndefinedRow(src)
    return float(m.probs[src, dst])


# --- n-grams -------------------------------------------------------------

@dataclass(frozen=True)
class NgramCounts:
    n: int
    counts: dict[tuple[int, ...], int]

    def __getitem__(self, key: tuple[int, ...]) -> int:
        return self.counts.get(tuple(key), 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_matrix(self) -> CountMatrix:
        """Collapse order-2 counts into a dense 12x12 count matrix."""
        if self.n != 2:
            raise BadOrder(f"only bigram counts collapse to a matrix, got n={self.n}")
        arr = np.zeros((12, 12), dtype=np.int64)
        for (i, j), v in self.counts.items():
            arr[i, j] = v
        return CountMatrix(arr)


def check_order(n: int) -> None:
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise BadOrder(f"n-gram order must be in [{MIN_ORDER}, {MAX_ORDER}], got {n}")


def _windows(notes: Sequence[int], n: int):
    return (tuple(notes[k:k + n]) for k in range(len(notes) - n + 1))


def count_ngrams(seq: PitchClassSequence | Sequence[int], n: int) -> NgramCounts:
    check_order(n)
    return NgramCounts(n, dict(Counter(_windows(_notes(seq), n))))


def merge_ngrams(a: NgramCounts, b: NgramCounts) -> NgramCounts:
    if a.n != b.n:
        raise BadOrder(f"cannot merge orders {a.n} and {b.n}")
    merged = Counter(a.counts)
    merged.update(b.counts)
    return NgramCounts(a.n, dict(merged))


def subtract_ngrams(a: NgramCounts, b: NgramCounts) -> NgramCounts:
    if a.n != b.n:
        raise BadOrder(f"cannot subtract orders {a.n} and {b.n}")
    out = Counter(a.counts)
    out.subtract(b.counts)
    if any(v < 0 for v in out.values()):
        raise ValueError("subtracted n-gram counts exceed the totals")
    return NgramCounts(a.n, {k: v for k, v in out.items() if v > 0})


def corpus_ngrams(seqs: Iterable[PitchClassSequence], n: int) -> NgramCounts:
    check_order(n)
    total: Counter = Counter()
    for s in seqs:
        total.update(_windows(_notes(s), n))
    return NgramCounts(n, dict(total))


# --- CSV -----------------------------------------------------------------

def write_matrix_csv(values: np.ndarray, path: str | Path, *, decimals: int | None = None) -> Path:
    """Write a labelled 12x12 grid (rows = from, columns = to).

    Integers are written as-is; floats in full ``repr`` precision unless
    ``decimals`` is given. Undefined (NaN) cells are left empty.
    """
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["", *PITCH_CLASS_NAMES])
        for name, row in zip(PITCH_CLASS_NAMES, values):
            w.writerow([name, *(_fmt_cell(v, decimals) for v in row)])
    return path


def _fmt_cell(v, decimals):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if np.isnan(v):
        return ""
    return f"{v:.{decimals}f}" if decimals is not None else repr(float(v))


def read_count_csv(path: str | Path) -> CountMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if [c.strip() for c in rows[0][1:]] != list(PITCH_CLASS_NAMES):
        raise ValueError(f"{path}: column labels must be {', '.join(PITCH_CLASS_NAMES)}")
    return CountMatrix(np.array([[int(v) for v in r[1:]] for r in rows[1:13]], dtype=np.int64))


def read_probability_csv(path: str | Path) -> StochasticMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    probs = np.array([[float(v) if v else np.nan for v in r[1:]] for r in rows[1:13]])
    defined = frozenset(i for i in range(12) if not np.isnan(probs[i]).any())
    return StochasticMatrix(probs, defined)
