"""Minimal Standard MIDI File reader and writer.

Only what the pipeline needs: header, track chunks, delta times, running
status, and channel voice events. Meta and sysex events are consumed and
dropped.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BadMagic, InvalidVarLen, MidiError, TruncatedChunk, UnsupportedFormat

NOTE_OFF = 0x80
NOTE_ON = 0x90

# data bytes following each channel status nibble
_CHANNEL_DATA_LEN = {0x80: 2, 0x90: 2, 0xA0: 2, 0xB0: 2, 0xC0: 1, 0xD0: 1, 0xE0: 2}
# system common messages (rare in files, but legal)
_SYSTEM_DATA_LEN = {0xF1: 1, 0xF2: 2, 0xF3: 1, 0xF6: 0, 0xF8: 0, 0xFA: 0, 0xFB: 0, 0xFC: 0, 0xFE: 0}


@dataclass(frozen=True)
class ChannelEvent:
    tick: int
    track_index: int
    kind: int  # status high nibble, e.g. 0x90
    channel: int
    data1: int
    data2: int = 0


@dataclass(frozen=True)
class MidiDocument:
    format: int
    division: int
    tracks: list[list[ChannelEvent]] = field(default_factory=list)

    @property
    def ntracks(self) -> int:
        return len(self.tracks)


def read_varlen(data: bytes, pos: int, end: int) -> tuple[int, int]:
    """Decode a variable-length quantity starting at ``pos``.

    Returns ``(value, new_pos)``. At most four bytes are allowed.
    """
    value = 0
    for i in range(4):
        if pos >= end:
            raise TruncatedChunk("variable-length quantity runs past end of chunk")
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos
    raise InvalidVarLen("variable-length quantity longer than 4 bytes")


def encode_varlen(value: int) -> bytes:
    if value < 0 or value > 0x0FFFFFFF:
        raise ValueError(f"value out of range for a variable-length quantity: {value}")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def _parse_track(data: bytes, pos: int, end: int, track_index: int) -> list[ChannelEvent]:
    events: list[ChannelEvent] = []
    tick = 0
    running = None
    while pos < end:
        delta, pos = read_varlen(data, pos, end)
        tick += delta
        if pos >= end:
            raise TruncatedChunk("event missing after delta time")
        status = data[pos]
        if status & 0x80:
            pos += 1
        elif running is None:
            raise MidiError(f"data byte 0x{status:02X} with no running status in track {track_index}")
        else:
            status = running

        if status == 0xFF:
            if pos >= end:
                raise TruncatedChunk("meta event missing type byte")
            meta_type = data[pos]
            length, pos = read_varlen(data, pos + 1, end)
            pos += length
            running = None
            if meta_type == 0x2F:  # end of track
                break
            continue
        if status in (0xF0, 0xF7):
            length, pos = read_varlen(data, pos, end)
            pos += length
            running = None
            continue
        if status >= 0xF0:
            pos += _SYSTEM_DATA_LEN.get(status, 0)
            continue

        kind = status & 0xF0
        n = _CHANNEL_DATA_LEN[kind]
        if pos + n > end:
            raise TruncatedChunk("channel event runs past end of chunk")
        d1 = data[pos]
        d2 = data[pos + 1] if n == 2 else 0
        pos += n
        running = status
        events.append(ChannelEvent(tick, track_index, kind, status & 0x0F, d1, d2))
    if pos > end:
        raise TruncatedChunk("event payload runs past end of chunk")
    return events


def parse_midi(data: bytes) -> MidiDocument:
    """Parse a complete SMF image (format 0 or 1)."""
    if len(data) < 8:
        raise TruncatedChunk("file shorter than a chunk header")
    if data[:4] != b"MThd":
        raise BadMagic(f"expected b'MThd', found {data[:4]!r}")
    (hlen,) = struct.unpack(">I", data[4:8])
    if hlen < 6 or 8 + hlen > len(data):
        raise TruncatedChunk("header chunk truncated")
    fmt, ntrks, division = struct.unpack(">HHH", data[8:14])
    if fmt not in (0, 1):
        raise UnsupportedFormat(f"SMF format {fmt} is not supported")

    tracks: list[list[ChannelEvent]] = []
    pos = 8 + hlen
    while pos < len(data) and len(tracks) < ntrks:
        if pos + 8 > len(data):
            raise TruncatedChunk("chunk header truncated")
        ctype = data[pos:pos + 4]
        (clen,) = struct.unpack(">I", data[pos + 4:pos + 8])
        start = pos + 8
        end = start + clen
        if end > len(data):
            raise TruncatedChunk(f"chunk {ctype!r} declares {clen} bytes, {len(data) - start} available")
        if ctype == b"MTrk":
            tracks.append(_parse_track(data, start, end, len(tracks)))
        pos = end
    if len(tracks) < ntrks:
        raise TruncatedChunk(f"header declares {ntrks} tracks, found {len(tracks)}")
    return MidiDocument(fmt, division, tracks)


# --- writing -------------------------------------------------------------

def _track_chunk(events: Iterable[tuple[int, bytes]], running_status: bool) -> bytes:
    body = bytearray()
    last_tick = 0
    last_status = None
    for tick, msg in sorted(events, key=lambda e: e[0]):
        body += encode_varlen(tick - last_tick)
        last_tick = tick
        status = msg[0]
        if running_status and status < 0xF0 and status == last_status:
            body += msg[1:]
        else:
            body += msg
        last_status = status if status < 0xF0 else None
    body += encode_varlen(0) + b"\xFF\x2F\x00"
    return b"MTrk" + struct.pack(">I", len(body)) + bytes(body)


def write_midi(
    tracks: Sequence[Iterable[tuple[int, bytes]]],
    *,
    fmt: int = 1,
    division: int = 480,
    running_status: bool = True,
) -> bytes:
    """Assemble an SMF image from per-track ``(absolute_tick, message)`` lists.

    Events within a track are stably sorted by tick, so insertion order
    decides ties.
    """
    if fmt == 0 and len(tracks) != 1:
        raise ValueError("format 0 requires exactly one track")
    header = b"MThd" + struct.pack(">IHHH", 6, fmt, len(tracks), division)
    return header + b"".join(_track_chunk(t, running_status) for t in tracks)


def note_on(channel: int, note: int, velocity: int) -> bytes:
    return bytes([NOTE_ON | channel, note, velocity])


def note_off(channel: int, note: int, velocity: int = 0) -> bytes:
    return bytes([NOTE_OFF | channel, note, velocity])


def melody_to_midi(
    notes: Sequence[int],
    *,
    fmt: int = 1,
    division: int = 480,
    channel: int = 0,
    velocity: int = 64,
    zero_velocity_off: bool = False,
) -> bytes:
    """Encode MIDI note numbers as monophonic quarter notes.

    Format 1 output places a tempo-only conductor track first. With
    ``zero_velocity_off`` the note releases are written as velocity-0
    note-ons, which also exercises running status.
    """
    events: list[tuple[int, bytes]] = []
    for k, n in enumerate(notes):
        t = k * division
        events.append((t, note_on(channel, n, velocity)))
        off = note_on(channel, n, 0) if zero_velocity_off else note_off(channel, n)
        events.append((t + division - 1, off))
    if fmt == 0:
        return write_midi([events], fmt=0, division=division)
    tempo = [(0, b"\xFF\x51\x03\x07\xA1\x20")]
    return write_midi([tempo, events], fmt=1, division=division)
