"""The corpus datasheet: one row per piece, round-tripped as CSV."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .ingest import read_datasheet_rows

HEADER = ("File Name", "Piece Title", "Composer", "Melodic Originality", "Popularity")


@dataclass(frozen=True)
class PieceRecord:
    file_name: str
    title: str
    composer: str
    originality: float | None = None
    popularity: int | None = None

    def __post_init__(self):
        if self.originality is not None and not 0.0 <= self.originality <= 1.0:
            raise ValueError(f"{self.file_name}: originality {self.originality} outside [0, 1]")
        if self.popularity is not None and self.popularity < 0:
            raise ValueError(f"{self.file_name}: negative popularity {self.popularity}")

    @property
    def complete(self) -> bool:
        return self.originality is not None and self.popularity is not None


def write_datasheet(records: Iterable[PieceRecord], path: str | Path, *, decimals: int | None = 4) -> Path:
    """Write records under the fixed five-column header.

    Originality is rounded to ``decimals`` places (``None`` keeps full
    precision); missing values are left blank.
    """
    path = Path(path)
    records = list(records)
    names = [r.file_name for r in records]
    if len(set(names)) != len(names):
        raise ValueError("duplicate File Name in datasheet records")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for r in records:
            if r.originality is None:
                orig = ""
            elif decimals is None:
                orig = repr(r.originality)
            else:
                orig = f"{r.originality:.{decimals}f}"
            pop = "" if r.popularity is None else str(r.popularity)
            w.writerow([r.file_name, r.title, r.composer, orig, pop])
    return path


def read_datasheet(path: str | Path) -> list[PieceRecord]:
    _, rows = read_datasheet_rows(path)
    out = []
    for row in rows:
        orig = (row.get("Melodic Originality") or "").strip()
        pop = (row.get("Popularity") or "").strip()
        out.append(PieceRecord(
            row["File Name"], row["Piece Title"], row["Composer"],
            float(orig) if orig else None,
            int(pop) if pop else None,
        ))
    return out
