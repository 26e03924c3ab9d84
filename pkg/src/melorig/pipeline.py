"""End-to-end orchestration: corpus -> matrices -> scores -> popularity -> stats -> files."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, fields
from functools import cached_property
from pathlib import Path

from . import figures, tables
from .datasheet import PieceRecord, write_datasheet
from .errors import ConfigError, MelorigError
from .ingest import CorpusIndex, ExtractionConfig, PitchClassSequence, load_sequence, scan_corpus
from .originality import Method, rank_pieces, score_corpus, write_ranked_csv, write_scores_csv
from .popularity import ProviderConfig, ProviderKind, annotate_datasheet, open_provider
from .stats import linear_regression, ols_no_intercept, pairwise_composer_tests, quadratic_fit
from .transitions import corpus_counts, normalize, write_matrix_csv

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_CONFIG = 2


# --- configuration ------------------------------------------------------

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


@dataclass
class Config:
    corpus_root: Path
    datasheet: Path
    out_dir: Path = Path("out")
    provider: str = "static_csv"
    popularity_file: Path | None = None
    endpoint: str = ""
    count_pattern: str = ProviderConfig.count_pattern
    min_interval: float = 1.0
    cache_path: Path | None = None
    cache_ttl: float | None = None
    exact_phrase: bool = False
    user_agent: str = ProviderConfig.user_agent
    method: str = "all_notes"
    ngram_order: int = 3
    leave_one_out: bool = False
    exclude_percussion: bool = False
    top_k: int = 5
    alpha: float = 0.05
    pooled_ttest: bool = False

    def provider_config(self) -> ProviderConfig:
        try:
            kind = ProviderKind(self.provider)
        except ValueError:
            raise ConfigError(f"unknown provider {self.provider!r}") from None
        cfg = ProviderConfig(
            kind=kind, static_path=self.popularity_file, endpoint_template=self.endpoint,
            count_pattern=self.count_pattern, min_interval=self.min_interval,
            cache_path=self.cache_path, cache_ttl=self.cache_ttl,
            exact_phrase=self.exact_phrase, user_agent=self.user_agent,
        )
        cfg.validate()
        return cfg


_PATH_KEYS = {"corpus_root", "datasheet", "out_dir", "popularity_file", "cache_path"}


def _convert(key: str, raw: str, typ: str, base: Path):
    if key in _PATH_KEYS:
        p = Path(raw).expanduser()
        return p if p.is_absolute() else base / p
    if "bool" in typ:
        if raw.lower() not in _BOOL:
            raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
        return _BOOL[raw.lower()]
    try:
        if "int" in typ:
            return int(raw)
        if "float" in typ:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: bad number {raw!r}") from None
    return raw


def parse_config(text: str, base: Path = Path(".")) -> Config:
    """Parse ``key = value`` lines; ``#`` starts a comment line.

    Relative paths are resolved against ``base`` (the config file's folder).
    """
    known = {f.name: str(f.type) for f in fields(Config)}
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _convert(key, raw, known[key], base) if raw else None
    for required in ("corpus_root", "datasheet"):
        if values.get(required) is None:
            raise ConfigError(f"config is missing {required}")
    values = {k: v for k, v in values.items() if v is not None}
    cfg = Config(**values)
    try:
        Method(cfg.method)
    except ValueError:
        raise ConfigError(f"unknown method {cfg.method!r}") from None
    return cfg


def load_config(path: str | Path) -> Config:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, path.parent)


# --- stages -------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    stage: str
    item: str
    message: str


@dataclass
class Pipeline:
    """Lazily evaluated stages; each property runs its upstream stages once."""

    config: Config
    strict: bool = False
    failures: list[Failure] = field(default_factory=list)

    def _fail(self, stage: str, item: str, exc: Exception) -> None:
        log.warning("%s: %s: %s", stage, item, exc)
        self.failures.append(Failure(stage, item, str(exc)))

    @cached_property
    def index(self) -> CorpusIndex:
        idx = scan_corpus(self.config.corpus_root, self.config.datasheet)
        for miss in idx.missing:
            self._fail("scan", miss.file_name or f"row {miss.row}", miss)
        return idx

    @cached_property
    def sequences(self) -> dict[str, PitchClassSequence]:
        cfg = ExtractionConfig(exclude_percussion=self.config.exclude_percussion)
        out = {}
        for entry in self.index.entries:
            try:
                out[entry.file_name] = load_sequence(self.index.path_of(entry), cfg, entry.file_name)
            except (MelorigError, OSError) as exc:
                self._fail("ingest", entry.file_name, exc)
        return out

    @cached_property
    def counts(self):
        return corpus_counts(self.sequences[k] for k in sorted(self.sequences))

    @cached_property
    def matrix(self):
        return normalize(self.counts)

    @cached_property
    def scores(self):
        run = score_corpus(self.sequences.values(), self.config.method,
                           order=self.config.ngram_order, leave_one_out=self.config.leave_one_out)
        for piece, exc in run.failures:
            self._fail("score", piece, exc)
        return run.scores

    @cached_property
    def popularity(self) -> dict[str, int]:
        provider = open_provider(self.config.provider_config())
        ann = annotate_datasheet(self.index, provider)
        for title, exc in ann.failures:
            self._fail("popularity", title, exc)
        return {r.title: r.count for r in ann.records}

    @cached_property
    def records(self) -> list[PieceRecord]:
        by_piece = {s.piece_id: s.value for s in self.scores}
        return [
            PieceRecord(e.file_name, e.title, e.composer, by_piece.get(e.file_name), self.popularity.get(e.title))
            for e in self.index.entries
        ]

    @property
    def complete_records(self) -> list[PieceRecord]:
        return [r for r in self.records if r.complete]

    def scores_by_composer(self) -> dict[str, list[float]]:
        groups: dict[str, list[float]] = {}
        for r in self.records:
            if r.originality is not None:
                groups.setdefault(r.composer, []).append(r.originality)
        return groups

    def _try(self, stage: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except MelorigError as exc:
            self._fail("stats", stage, exc)
            return None

    @cached_property
    def regression(self):
        recs = self.complete_records
        return self._try("linear_regression", linear_regression,
                         [r.popularity for r in recs], [r.originality for r in recs])

    @cached_property
    def ols(self):
        recs = self.complete_records
        return self._try("ols_no_intercept", ols_no_intercept,
                         [r.originality for r in recs], [r.popularity for r in recs])

    @cached_property
    def quadratic(self):
        # popularity as a function of originality: an inverted U shows as c2 < 0
        recs = self.complete_records
        return self._try("quadratic_fit", quadratic_fit,
                         [r.originality for r in recs], [r.popularity for r in recs])

    @cached_property
    def ttests(self):
        groups = {c: v for c, v in self.scores_by_composer().items() if len(v) >= 2}
        tests = self._try("pairwise_composer_tests", pairwise_composer_tests, groups,
                          alpha=self.config.alpha, equal_var=self.config.pooled_ttest)
        for t in tests or []:
            if t.error is not None:
                self._fail("stats", t.label, t.error)
        return tests or []

    # --- writers --------------------------------------------------------

    @property
    def out(self) -> Path:
        self.config.out_dir.mkdir(parents=True, exist_ok=True)
        return self.config.out_dir

    def write_matrix(self) -> list[Path]:
        out = self.out
        paths = [
            write_matrix_csv(self.counts.counts, out / "transition_counts.csv"),
            write_matrix_csv(self.matrix.probs, out / "transition_probabilities.csv"),
            write_matrix_csv(self.matrix.probs, out / "transition_probabilities_4dp.csv", decimals=4),
        ]
        try:
            paths.extend(figures.emit_heatmap(self.matrix, out / "heatmap.svg"))
        except MelorigError as exc:
            self._fail("report", "heatmap", exc)
        return paths

    def write_scores(self) -> list[Path]:
        out = self.out
        meta = {e.file_name: (e.title, e.composer) for e in self.index.entries}
        ranked = rank_pieces(self.scores, self.config.top_k, meta)
        return [write_scores_csv(self.scores, out / "scores.csv"),
                write_ranked_csv(ranked, out / "top_pieces.csv")]

    def write_popularity(self) -> list[Path]:
        path = self.out / "popularity.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["Title", "Popularity"])
            for title in sorted(self.popularity):
                w.writerow([title, self.popularity[title]])
        return [path]

    def write_datasheet(self) -> list[Path]:
        return [write_datasheet(self.records, self.out / "datasheet.csv")]

    def write_stats(self) -> list[Path]:
        out = self.out
        paths = []
        if self.regression is not None:
            paths.append(tables.write_regression_csv(self.regression, self.quadratic, out / "regression.csv"))
        if self.ols is not None:
            paths.append(tables.write_ols_csv(self.ols, out / "ols.csv"))
            report = out / "ols_report.txt"
            report.write_text(tables.ols_report(self.ols), encoding="utf-8")
            paths.append(report)
        if self.ttests:
            paths.append(tables.write_ttests_csv(self.ttests, out / "ttests.csv"))
        return paths

    def write_figures(self) -> list[Path]:
        out = self.out
        paths = []
        recs = self.complete_records
        if recs and self.regression is not None:
            paths.append(figures.emit_scatter(recs, "regression", None, out / "scatter_regression.svg",
                                              title="Linear regression"))
        if recs and self.ols is not None:
            coef = self.ols.coef
            fit = figures.Fit(f"OLS fit, coef = {coef:.4g}", lambda v: coef * v)
            paths.append(figures.emit_scatter(recs, "regression", fit, out / "scatter_ols.svg",
                                              title="OLS fitted values"))
        if recs:
            paths.append(figures.emit_scatter(recs, "by_composer", None, out / "scatter_composer.svg",
                                              title="Originality by composer"))
        groups = self.scores_by_composer()
        if groups:
            paths.extend(figures.emit_box_plot(groups, out / "boxplot.svg"))
        return paths

    def write_failures(self) -> Path:
        path = self.out / "failures.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["stage", "item", "message"])
            for f in self.failures:
                w.writerow([f.stage, f.item, f.message])
        return path

    def run_all(self) -> list[Path]:
        paths = self.write_matrix() + self.write_scores() + self.write_popularity()
        paths += self.write_datasheet() + self.write_stats() + self.write_figures()
        paths.append(self.write_failures())
        return paths

    def exit_code(self) -> int:
        return EXIT_FAILURES if self.strict and self.failures else EXIT_OK

    def summary(self) -> str:
        lines = [f"pieces indexed: {len(self.index)}  scored: {len(self.scores)}  "
                 f"with popularity: {len(self.complete_records)}"]
        if self.regression is not None:
            lines.append(f"linear regression: r = {self.regression.r:.6f}, R^2 = {self.regression.r_squared:.6f}, "
                         f"p = {self.regression.p_value:.4f}")
        if self.ols is not None:
            lines.append(f"OLS (no constant): coef = {self.ols.coef:.4g}, "
                         f"R^2 uncentered = {self.ols.r2_uncentered:.3f}, DW = {self.ols.durbin_watson:.3f}")
        if self.ttests:
            sig = sum(t.significant for t in self.ttests)
            lines.append(f"composer t-tests: {sig} of {len(self.ttests)} significant at alpha = {self.config.alpha}")
        if self.failures:
            lines.append(f"failures: {len(self.failures)}")
            lines.extend(f"  [{f.stage}] {f.item}: {f.message}" for f in self.failures)
        return "\n".join(lines)
