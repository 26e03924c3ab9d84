"""Melodic originality scores.

All three scores share one shape: one minus the mean conditional
probability of a piece's consecutive note transitions. They differ in which
transitions are averaged (every bigram, the opening five bigrams, or every
n-note window).
"""

from __future__ import annotations

import csv
import enum
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import BadOrder, MelorigError, TooShort
from .ingest import PitchClassSequence
from .transitions import (
    NgramCounts,
    StochasticMatrix,
    check_order,
    corpus_counts,
    corpus_ngrams,
    count_ngrams,
    count_transitions,
    lookup,
    normalize,
    subtract_ngrams,
)

log = logging.getLogger(__name__)

SIMONTON_BIGRAMS = 5


class Method(str, enum.Enum):
    ALL_NOTES = "all_notes"
    SIMONTON = "simonton"
    NGRAM = "ngram"


@dataclass(frozen=True)
class OriginalityScore:
    piece_id: str
    method: Method
    value: float
    bigram_count: int
    order: int = 2

    @property
    def label(self) -> str:
        return f"ngram{self.order}" if self.method is Method.NGRAM else self.method.value


def _one_minus_mean(probs: Sequence[float]) -> float:
    return 1.0 - math.fsum(probs) / len(probs)


def _bigram_probs(notes: Sequence[int], m: StochasticMatrix) -> list[float]:
    return [lookup(m, a, b) for a, b in zip(notes, notes[1:])]


def originality_all_notes(seq: PitchClassSequence, m: StochasticMatrix) -> OriginalityScore:
    if len(seq.notes) < 2:
        raise TooShort(f"{seq.piece_id}: need at least 2 notes, have {len(seq.notes)}")
    probs = _bigram_probs(seq.notes, m)
    return OriginalityScore(seq.piece_id, Method.ALL_NOTES, _one_minus_mean(probs), len(probs))


def originality_simonton(seq: PitchClassSequence, m: StochasticMatrix) -> OriginalityScore:
    """Score only the opening six notes (five bigrams)."""
    need = SIMONTON_BIGRAMS + 1
    if len(seq.notes) < need:
        raise TooShort(f"{seq.piece_id}: need at least {need} notes, have {len(seq.notes)}")
    probs = _bigram_probs(seq.notes[:need], m)
    return OriginalityScore(seq.piece_id, Method.SIMONTON, _one_minus_mean(probs), SIMONTON_BIGRAMS)


def originality_ngram(
    seq: PitchClassSequence, counts: NgramCounts, context_counts: NgramCounts
) -> OriginalityScore:
    """Score each n-note window by count(window) / count(its first n-1 notes).

    Windows whose prefix was never observed contribute probability 0.
    """
    n = counts.n
    check_order(n)
    if n < 3:
        raise BadOrder(f"n-gram originality needs n >= 3, got {n}; use originality_all_notes for bigrams")
    if context_counts.n != n - 1:
        raise BadOrder(f"context counts must have order {n - 1}, got {context_counts.n}")
    notes = seq.notes
    if len(notes) < n:
        raise TooShort(f"{seq.piece_id}: need at least {n} notes, have {len(notes)}")
    probs = []
    unseen = 0
    for k in range(len(notes) - n + 1):
        window = tuple(notes[k:k + n])
        prefix = context_counts[window[:-1]]
        if prefix == 0:
            unseen += 1
            probs.append(0.0)
        else:
            probs.append(counts[window] / prefix)
    if unseen:
        log.info("%s: %d of %d windows have an unseen context", seq.piece_id, unseen, len(probs))
    return OriginalityScore(seq.piece_id, Method.NGRAM, _one_minus_mean(probs), len(probs), n)


# --- corpus-level scoring -----------------------------------------------

@dataclass
class ScoringRun:
    scores: list[OriginalityScore]
    failures: list[tuple[str, MelorigError]]


def score_corpus(
    seqs: Iterable[PitchClassSequence],
    method: Method | str = Method.ALL_NOTES,
    *,
    order: int = 3,
    leave_one_out: bool = False,
) -> ScoringRun:
    """Score every piece against statistics of the whole corpus.

    By default each piece contributes to the statistics it is scored
    against. ``leave_one_out`` removes the piece's own transitions first.
    Scores come back sorted by piece id; per-piece errors are collected.
    """
    method = Method(method)
    seqs = sorted(seqs, key=lambda s: s.piece_id)
    scores: list[OriginalityScore] = []
    failures: list[tuple[str, MelorigError]] = []

    if method is Method.NGRAM:
        check_order(order)
        if order < 3:
            raise BadOrder(f"n-gram originality needs n >= 3, got {order}")
        full = corpus_ngrams(seqs, order)
        full_ctx = corpus_ngrams(seqs, order - 1)
    else:
        total = corpus_counts(seqs)
        shared = normalize(total)

    for s in seqs:
        try:
            if method is Method.NGRAM:
                if leave_one_out:
                    grams = subtract_ngrams(full, count_ngrams(s, order))
                    ctx = subtract_ngrams(full_ctx, count_ngrams(s, order - 1))
                else:
                    grams, ctx = full, full_ctx
                scores.append(originality_ngram(s, grams, ctx))
                continue
            m = normalize(total - count_transitions(s)) if leave_one_out else shared
            fn = originality_simonton if method is Method.SIMONTON else originality_all_notes
            scores.append(fn(s, m))
        except MelorigError as exc:
            log.warning("%s: not scored: %s", s.piece_id, exc)
            failures.append((s.piece_id, exc))
    return ScoringRun(scores, failures)


# --- ranking -------------------------------------------------------------

@dataclass(frozen=True)
class RankedPiece:
    rank: int
    title: str
    composer: str
    value: float

    @property
    def originality(self) -> str:
        return f"{self.value:.4f}"


def rank_pieces(
    scores: Iterable[OriginalityScore],
    k: int,
    meta: Mapping[str, tuple[str, str]] | None = None,
) -> list[RankedPiece]:
    """Top ``k`` pieces by score; ties go to the alphabetically first title.

    ``meta`` maps piece id to ``(title, composer)``; without it the piece id
    stands in for the title.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    meta = meta or {}
    rows = [(*meta.get(s.piece_id, (s.piece_id, "")), s.value) for s in scores]
    rows.sort(key=lambda r: (-r[2], r[0]))
    return [RankedPiece(i, t, c, v) for i, (t, c, v) in enumerate(rows[:k], start=1)]


def write_ranked_csv(rows: Sequence[RankedPiece], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Rank", "Title", "Composer", "Originality"])
        for r in rows:
            w.writerow([r.rank, r.title, r.composer, r.originality])
    return path


def write_scores_csv(scores: Sequence[OriginalityScore], path: str | Path) -> Path:
    """Full-precision, machine-readable score table."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["piece_id", "method", "value", "bigram_count"])
        for s in scores:
            w.writerow([s.piece_id, s.label, repr(s.value), s.bigram_count])
    return path
