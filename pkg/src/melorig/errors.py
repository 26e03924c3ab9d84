"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class MelorigError(Exception):
    """Base class for all errors raised by this package."""


# --- MIDI / ingest -------------------------------------------------------

class MidiError(MelorigError):
    pass


class BadMagic(MidiError):
    pass


class UnsupportedFormat(MidiError):
    pass


class TruncatedChunk(MidiError):
    pass


class InvalidVarLen(MidiError):
    pass


class EmptyPiece(MelorigError):
    pass


class MissingFile(MelorigError):
    def __init__(self, row: int, file_name: str):
        super().__init__(f"row {row}: file not found: {file_name}")
        self.row = row
        self.file_name = file_name


class BadHeader(MelorigError):
    pass


# --- transitions / originality ------------------------------------------

class BadOrder(MelorigError):
    pass


class UndefinedRow(MelorigError):
    def __init__(self, row: int):
        super().__init__(f"transition row {row} has no observations")
        self.row = row


class TooShort(MelorigError):
    pass


# --- popularity ---------------------------------------------------------

class MissingTitle(MelorigError):
    def __init__(self, title: str):
        super().__init__(f"no popularity entry for title {title!r}")
        self.title = title


class NetworkError(MelorigError):
    pass


class PatternMiss(MelorigError):
    pass


# --- stats --------------------------------------------------------------

class LengthMismatch(MelorigError):
    pass


class DegenerateX(MelorigError):
    pass


class TooFewSamples(MelorigError):
    pass


class ZeroVariance(MelorigError):
    pass


class SingularSystem(MelorigError):
    pass


class BadDf(MelorigError):
    pass


# --- report -------------------------------------------------------------

class MissingFields(MelorigError):
    def __init__(self, offenders: list[str]):
        super().__init__("records missing originality or popularity: " + ", ".join(offenders))
        self.offenders = offenders


class EmptyGroup(MelorigError):
    pass


class ConfigError(MelorigError):
    pass
