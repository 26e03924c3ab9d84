"""SVG figures (matplotlib, no pyplot state) with CSV companions.

Each ``*_figure`` builder returns the matplotlib ``Figure`` so callers and
tests can inspect artists; the ``emit_*`` functions save SVG plus the
machine-readable numbers behind it.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import matplotlib
import numpy as np
from matplotlib.colors import Normalize
from matplotlib.figure import Figure

from .datasheet import PieceRecord
from .errors import EmptyGroup, MissingFields, UndefinedRow
from .ingest import PITCH_CLASS_NAMES
from .stats import linear_regression
from .transitions import StochasticMatrix, write_matrix_csv

HEATMAP_CMAP = "Reds"
SVG_RC = {"svg.hashsalt": "melorig", "svg.fonttype": "none", "font.size": 9}


def save_svg(fig: Figure, path: str | Path) -> Path:
    path = Path(path)
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


# --- heat map -----------------------------------------------------------

def heatmap_figure(m: StochasticMatrix, *, annotate: bool = True) -> Figure:
    """12x12 grid, rows = first note, columns = second note, linear colour scale."""
    if not m.fully_defined:
        raise UndefinedRow(min(set(range(12)) - m.defined_rows))
    probs = m.probs
    fig = Figure(figsize=(7.5, 6.2))
    ax = fig.add_subplot()
    norm = Normalize(vmin=float(probs.min()), vmax=float(probs.max()))
    mesh = ax.pcolormesh(probs, cmap=HEATMAP_CMAP, norm=norm, edgecolors="white", linewidth=0.5)
    ax.set_xticks(np.arange(12) + 0.5, PITCH_CLASS_NAMES)
    ax.set_yticks(np.arange(12) + 0.5, PITCH_CLASS_NAMES)
    ax.invert_yaxis()
    ax.xaxis.tick_top()
    ax.xaxis.set_label_position("top")
    ax.set_xlabel("Second note")
    ax.set_ylabel("First note")
    ax.set_aspect("equal")
    if annotate:
        mid = 0.5 * (norm.vmin + norm.vmax)
        for i in range(12):
            for j in range(12):
                ax.text(j + 0.5, i + 0.5, f"{probs[i, j]:.3f}", ha="center", va="center", fontsize=5.5,
                        color="white" if probs[i, j] > mid else "black")
    fig.colorbar(mesh, ax=ax, label="Transition probability")
    fig.tight_layout()
    return fig


def heatmap_cell_colors(fig: Figure) -> np.ndarray:
    """RGBA face colours of the heat map cells, shaped (12, 12, 4)."""
    mesh = fig.axes[0].collections[0]
    return mesh.to_rgba(np.asarray(mesh.get_array()).reshape(12, 12))


def emit_heatmap(m: StochasticMatrix, path: str | Path) -> tuple[Path, Path]:
    path = Path(path)
    fig = heatmap_figure(m)
    svg = save_svg(fig, path)
    grid = write_matrix_csv(m.probs, path.with_suffix(".csv"))
    return svg, grid


# --- scatter plots ------------------------------------------------------

class ScatterMode(str, enum.Enum):
    REGRESSION = "regression"
    BY_COMPOSER = "by_composer"


@dataclass(frozen=True)
class Fit:
    label: str
    fn: Callable[[float], float]


def _xy(records: Sequence[PieceRecord], swap: bool):
    missing = [r.file_name for r in records if not r.complete]
    if missing:
        raise MissingFields(missing)
    pop = [float(r.popularity) for r in records]
    orig = [float(r.originality) for r in records]
    return (orig, pop) if swap else (pop, orig)


def scatter_figure(
    records: Sequence[PieceRecord],
    mode: ScatterMode | str = ScatterMode.REGRESSION,
    fit: Fit | None = None,
    *,
    swap: bool = False,
    title: str | None = None,
) -> Figure:
    """Popularity (x) against originality (y), or the reverse with ``swap``.

    In regression mode a straight line from ``linear_regression`` is drawn
    unless ``fit`` supplies another curve.
    """
    mode = ScatterMode(mode)
    x, y = _xy(records, swap)
    xlabel, ylabel = ("Melodic Originality", "Popularity") if swap else ("Popularity", "Melodic Originality")
    fig = Figure(figsize=(7, 4.8))
    ax = fig.add_subplot()
    if mode is ScatterMode.BY_COMPOSER:
        composers = sorted({r.composer for r in records})
        colors = matplotlib.colormaps["tab10"]
        for k, comp in enumerate(composers):
            idx = [i for i, r in enumerate(records) if r.composer == comp]
            ax.scatter([x[i] for i in idx], [y[i] for i in idx], s=18, color=colors(k % 10), label=comp)
    else:
        ax.scatter(x, y, s=14, color="tab:blue", alpha=0.8, label="Pieces")
    if mode is ScatterMode.REGRESSION and fit is None and len(set(x)) > 1 and len(x) >= 3:
        reg = linear_regression(x, y)
        fit = Fit(f"y = {reg.slope:.4g} x + {reg.intercept:.4g}", reg.predict)
    if fit is not None:
        lo, hi = min(x), max(x)
        xs = np.linspace(lo, hi, 101)
        ax.plot(xs, [fit.fn(v) for v in xs], color="tab:red", linewidth=1.4, label=fit.label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=7)
    fig.tight_layout()
    return fig


def fitted_line(fig: Figure) -> tuple[np.ndarray, np.ndarray] | None:
    lines = fig.axes[0].get_lines()
    if not lines:
        return None
    return lines[0].get_xdata(), lines[0].get_ydata()


def emit_scatter(
    records: Sequence[PieceRecord],
    mode: ScatterMode | str,
    fit: Fit | None,
    path: str | Path,
    **kwargs,
) -> Path:
    return save_svg(scatter_figure(records, mode, fit, **kwargs), path)


# --- box plot -----------------------------------------------------------

@dataclass(frozen=True)
class BoxStats:
    composer: str
    min: float
    q1: float
    median: float
    q3: float
    max: float
    n: int
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...] = ()


def _median(v: Sequence[float]) -> float:
    n = len(v)
    mid = n // 2
    return v[mid] if n % 2 else 0.5 * (v[mid - 1] + v[mid])


def box_stats(composer: str, values: Sequence[float]) -> BoxStats:
    """Five-number summary with median-exclusive quartiles.

    Whiskers reach the most extreme data within 1.5 IQR of the box.
    """
    v = sorted(float(x) for x in values)
    n = len(v)
    if n == 0:
        raise EmptyGroup(f"no scores for {composer}")
    med = _median(v)
    if n == 1:
        q1 = q3 = med
    else:
        q1 = _median(v[: n // 2])
        q3 = _median(v[(n + 1) // 2:])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = [x for x in v if lo_fence <= x <= hi_fence]
    outliers = tuple(x for x in v if x < lo_fence or x > hi_fence)
    return BoxStats(composer, v[0], q1, med, q3, v[-1], n, min(inside), max(inside), outliers)


def box_plot_figure(stats: Sequence[BoxStats]) -> Figure:
    fig = Figure(figsize=(7, 4.8))
    ax = fig.add_subplot()
    ax.bxp(
        [
            {"label": s.composer, "med": s.median, "q1": s.q1, "q3": s.q3,
             "whislo": s.whisker_low, "whishi": s.whisker_high, "fliers": list(s.outliers)}
            for s in stats
        ],
        showfliers=True,
    )
    ax.set_xlabel("Composer")
    ax.set_ylabel("Melodic Originality")
    fig.tight_layout()
    return fig


def write_box_stats_csv(stats: Sequence[BoxStats], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Composer", "n", "min", "q1", "median", "q3", "max", "whisker_low", "whisker_high", "outliers"])
        for s in stats:
            w.writerow([s.composer, s.n, *(repr(v) for v in (s.min, s.q1, s.median, s.q3, s.max,
                                                              s.whisker_low, s.whisker_high)),
                        " ".join(repr(o) for o in s.outliers)])
    return path


def emit_box_plot(scores_by_composer: Mapping[str, Sequence[float]], path: str | Path) -> tuple[Path, Path]:
    path = Path(path)
    stats = [box_stats(c, scores_by_composer[c]) for c in sorted(scores_by_composer)]
    svg = save_svg(box_plot_figure(stats), path)
    table = write_box_stats_csv(stats, path.with_suffix(".csv"))
    return svg, table

