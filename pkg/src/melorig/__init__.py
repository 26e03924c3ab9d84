"""Melodic originality of symbolic music from pitch-class transition statistics."""

from .errors import MelorigError
from .ingest import ExtractionConfig, PitchClassSequence, extract_sequence, load_sequence, scan_corpus
from .midi import parse_midi
from .originality import (
    Method,
    OriginalityScore,
    originality_all_notes,
    originality_ngram,
    originality_simonton,
    rank_pieces,
    score_corpus,
)
from .transitions import corpus_counts, count_ngrams, count_transitions, lookup, merge_counts, normalize

__version__ = "0.1.0"
