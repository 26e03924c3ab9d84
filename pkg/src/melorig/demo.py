"""Deterministic 12-piece synthetic corpus used for smoke runs and examples.

Six composers, two pieces each. Each composer draws melodies from a
different interval palette so the composer groups separate on originality.
"""

from __future__ import annotations

import csv
import random
import shutil
from importlib import resources
from pathlib import Path

from .midi import melody_to_midi, note_off, note_on, write_midi

SEED = 1827

MAJOR = (0, 2, 4, 5, 7, 9, 11)

# composer -> (diatonic weight, interval palette, base popularity)
STYLES = {
    "Beethoven": (0.95, (0, 0, 1, -1, 2, -2, 4, -3), 900_000),
    "Brahms": (0.85, (0, 1, -1, 2, -2, 3, -4, 5), 400_000),
    "Chopin": (0.45, (1, -1, 3, -3, 6, -5, 8, 11), 1_200_000),
    "Liszt": (0.7, (1, -1, 2, -2, 4, -4, 7), 650_000),
    "Schubert": (0.9, (0, 1, -1, 2, -2, 3, -3), 500_000),
    "Schumann": (0.55, (1, -1, 2, -3, 5, -6, 7, 10), 300_000),
}

PIECES = [
    ("Beethoven", "Piano Sonata No. 8, Op.13, Mvt. 2"),
    ("Beethoven", "Bagatelle in A minor, WoO 59"),
    ("Brahms", "Intermezzo, Op.118, No.2"),
    ("Brahms", "Waltz, Op.39, No.15"),
    ("Chopin", "Mazurka, Op.50, No.2"),
    ("Chopin", "Valse Op.64 No. 1"),
    ("Liszt", "Consolation, S.172, No.3"),
    ("Liszt", "Liebestraum No. 3"),
    ("Schubert", "Impromptu, Op.90, No.3"),
    ("Schubert", "Moment Musical No. 3"),
    ("Schumann", "Träumerei, Op.15, No.7"),
    ("Schumann", "7 Klavierstücke, Op.126, No. 1"),
]


def _melody(rng: random.Random, composer: str, length: int) -> list[int]:
    diatonic, palette, _ = STYLES[composer]
    note = 60 + rng.choice(MAJOR)
    out = [note]
    for _ in range(length - 1):
        step = rng.choice(palette) * rng.choice((1, 1, 1, -1))
        cand = note + step
        if rng.random() < diatonic and cand % 12 not in MAJOR:
            cand += 1
        if not 40 <= cand <= 88:
            cand = 60 + (cand % 12)
        note = cand
        out.append(note)
    return out


def _with_chords(notes: list[int]) -> bytes:
    """Format-1, two hands: the melody plus an occasional bass note on the same beat."""
    right, left = [], []
    for k, n in enumerate(notes):
        t = k * 240
        right += [(t, note_on(0, n, 70)), (t + 239, note_on(0, n, 0))]
        if k % 8 == 0:
            b = 36 + (n % 12)
            left += [(t, note_on(1, b, 50)), (t + 239, note_off(1, b))]
    tempo = [(0, b"\xFF\x51\x03\x08\x52\xAE")]
    return write_midi([tempo, right, left], fmt=1, division=240)


def build_demo(dest: str | Path) -> Path:
    """Generate the corpus into ``dest``; returns the config file path."""
    dest = Path(dest)
    corpus = dest / "corpus"
    corpus.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    rows = []
    pops = []
    for k, (composer, title) in enumerate(PIECES):
        notes = _melody(rng, composer, rng.randint(120, 260))
        name = f"{k + 1:02d}_{composer.lower()}.mid"
        data = _with_chords(notes) if k % 2 else melody_to_midi(notes, fmt=k % 4 // 2)
        (corpus / name).write_bytes(data)
        rows.append((name, title, composer))
        base = STYLES[composer][2]
        pops.append((title, int(base * rng.uniform(0.3, 2.5))))

    with open(dest / "datasheet.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["File Name", "Piece Title", "Composer", "Melodic Originality", "Popularity"])
        for r in rows:
            w.writerow([*r, "", ""])
    with open(dest / "popularity.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Title", "Popularity"])
        w.writerows(pops)
    cfg = dest / "melorig.cfg"
    cfg.write_text(
        "# demo corpus configuration\n"
        "corpus_root = corpus\n"
        "datasheet = datasheet.csv\n"
        "provider = static_csv\n"
        "popularity_file = popularity.csv\n"
        "out_dir = out\n"
        "method = all_notes\n"
        "top_k = 5\n",
        encoding="utf-8",
    )
    return cfg


def bundled_demo_dir() -> Path:
    return Path(str(resources.files("melorig") / "data" / "demo"))


def copy_demo(dest: str | Path) -> Path:
    """Copy the bundled corpus into ``dest``; returns the config file path."""
    dest = Path(dest)
    shutil.copytree(bundled_demo_dir(), dest, dirs_exist_ok=True)
    return dest / "melorig.cfg"
