"""Turn MIDI files and the corpus datasheet into pitch-class sequences."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BadHeader, EmptyPiece, MissingFile
from .midi import NOTE_ON, MidiDocument, parse_midi

PITCH_CLASS_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")
DATASHEET_REQUIRED = ("File Name", "Piece Title", "Composer")
PERCUSSION_CHANNEL = 9


def pitch_class(note_number: int) -> int:
    """MIDI note number -> pitch class (C=0)."""
    if not 0 <= note_number <= 127:
        raise ValueError(f"MIDI note number out of range: {note_number}")
    return note_number % 12


def pitch_class_index(name: str) -> int:
    return PITCH_CLASS_NAMES.index(name)


@dataclass(frozen=True)
class TimedNoteEvent:
    tick: int
    track_index: int
    channel: int
    note_number: int
    velocity: int


@dataclass(frozen=True)
class PitchClassSequence:
    piece_id: str
    notes: tuple[int, ...]

    @property
    def note_count(self) -> int:
        return len(self.notes)

    def __len__(self) -> int:
        return len(self.notes)

    def names(self) -> list[str]:
        return [PITCH_CLASS_NAMES[p] for p in self.notes]


@dataclass(frozen=True)
class ExtractionConfig:
    exclude_percussion: bool = False


def note_events(doc: MidiDocument, config: ExtractionConfig = ExtractionConfig()) -> list[TimedNoteEvent]:
    """Sounding note onsets across all tracks, in timeline order.

    Simultaneous onsets are ordered by track, then channel, then ascending
    note number.
    """
    events = [
        TimedNoteEvent(ev.tick, ev.track_index, ev.channel, ev.data1, ev.data2)
        for track in doc.tracks
        for ev in track
        if ev.kind == NOTE_ON and ev.data2 > 0
        and not (config.exclude_percussion and ev.channel == PERCUSSION_CHANNEL)
    ]
    events.sort(key=lambda e: (e.tick, e.track_index, e.channel, e.note_number))
    return events


def extract_sequence(
    doc: MidiDocument, config: ExtractionConfig = ExtractionConfig(), piece_id: str = ""
) -> PitchClassSequence:
    notes = tuple(e.note_number % 12 for e in note_events(doc, config))
    if not notes:
        raise EmptyPiece(f"no sounding notes in {piece_id or 'document'}")
    return PitchClassSequence(piece_id, notes)


def load_sequence(path: str | Path, config: ExtractionConfig = ExtractionConfig(),
                  piece_id: str | None = None) -> PitchClassSequence:
    path = Path(path)
    doc = parse_midi(path.read_bytes())
    return extract_sequence(doc, config, piece_id if piece_id is not None else path.name)


@dataclass(frozen=True)
class CorpusEntry:
    file_name: str
    title: str
    composer: str
    extra: dict[str, str] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CorpusIndex:
    root: Path
    entries: tuple[CorpusEntry, ...]
    missing: tuple[MissingFile, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def path_of(self, entry: CorpusEntry) -> Path:
        return self.root / entry.file_name


def read_datasheet_rows(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Read the datasheet CSV, checking the required header columns."""
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = list(reader.fieldnames or [])
        absent = [c for c in DATASHEET_REQUIRED if c not in header]
        if absent:
            raise BadHeader(f"{path}: datasheet header lacks {', '.join(absent)}")
        rows = list(reader)
    return header, rows


def scan_corpus(root: str | Path, datasheet: str | Path, *, strict: bool = False) -> CorpusIndex:
    """Index every datasheet row whose MIDI file exists under ``root``.

    Rows pointing at absent files are collected in ``CorpusIndex.missing``;
    with ``strict`` the first one is raised instead.
    """
    root = Path(root)
    _, rows = read_datasheet_rows(datasheet)
    entries: list[CorpusEntry] = []
    missing: list[MissingFile] = []
    seen: set[str] = set()
    for i, row in enumerate(rows, start=1):
        name = (row.get("File Name") or "").strip()
        if name in seen:
            raise BadHeader(f"{datasheet}: duplicate File Name {name!r} on row {i}")
        seen.add(name)
        if not name or not (root / name).is_file():
            err = MissingFile(i, name)
            if strict:
                raise err
            missing.append(err)
            continue
        extra = {k: v for k, v in row.items() if k not in DATASHEET_REQUIRED and k is not None}
        entries.append(CorpusEntry(name, row["Piece Title"], row["Composer"], extra))
    return CorpusIndex(root, tuple(entries), tuple(missing))
