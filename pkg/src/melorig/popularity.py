"""Popularity (thematic fame) lookups.

Two providers: a static CSV snapshot (the default, reproducible) and an
HTTP search endpoint whose result-count figure is scraped with a regular
expression. HTTP requests are serialized through a rate limiter and cached
on disk.
"""

from __future__ import annotations

import csv
import enum
import logging
import re
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Iterable

from .errors import ConfigError, MelorigError, MissingTitle, NetworkError, PatternMiss
from .ingest import CorpusIndex

log = logging.getLogger(__name__)

STATIC_HEADER = ("Title", "Popularity")
CACHE_HEADER = ("title", "count", "fetched_at", "provider")
DEFAULT_USER_AGENT = "melorig/0.1 (+corpus analysis)"


class ProviderKind(str, enum.Enum):
    STATIC_CSV = "static_csv"
    HTTP = "http"


@dataclass(frozen=True)
class PopularityRecord:
    title: str
    count: int
    fetched_at: datetime = field(compare=False)
    provider: str = "static_csv"

    def __post_init__(self):
        if not self.title:
            raise ValueError("popularity record needs a title")
        if self.count < 0:
            raise ValueError(f"negative popularity count for {self.title!r}")


@dataclass(frozen=True)
class ProviderConfig:
    kind: ProviderKind = ProviderKind.STATIC_CSV
    static_path: Path | None = None
    endpoint_template: str = ""
    count_pattern: str = r"About ([\d,.\s]+) results"
    min_interval: float = 1.0
    cache_path: Path | None = None
    cache_ttl: float | None = None  # seconds; None keeps cached counts forever
    exact_phrase: bool = False
    user_agent: str = DEFAULT_USER_AGENT
    timeout: float = 30.0

    def validate(self) -> None:
        if self.kind is ProviderKind.STATIC_CSV:
            if self.static_path is None:
                raise ConfigError("static_csv provider needs a popularity file")
            return
        if self.endpoint_template.count("{query}") != 1:
            raise ConfigError("endpoint template must contain exactly one {query} placeholder")
        if self.min_interval < 1.0:
            raise ConfigError(f"min_interval must be at least 1 second, got {self.min_interval}")
        try:
            pattern = re.compile(self.count_pattern)
        except re.error as exc:
            raise ConfigError(f"bad count pattern: {exc}") from exc
        if pattern.groups < 1:
            raise ConfigError("count pattern needs a capture group around the number")


def parse_count(text: str) -> int:
    """'1,234,567' -> 1234567. Thousands separators and spaces are dropped."""
    digits = re.sub(r"[,.\s  ']", "", text)
    if not digits.isdigit():
        raise PatternMiss(f"not an integer count: {text!r}")
    return int(digits)


def read_static_csv(path: str | Path) -> dict[str, int]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header[:2]) != STATIC_HEADER:
            raise ConfigError(f"{path}: header must be {','.join(STATIC_HEADER)}")
        return {row[0]: parse_count(row[1]) for row in reader if row}


class StaticCsvProvider:
    name = ProviderKind.STATIC_CSV.value

    def __init__(self, config: ProviderConfig):
        config.validate()
        self.config = config
        self.table = read_static_csv(config.static_path)

    def fetch(self, title: str) -> PopularityRecord:
        if title not in self.table:
            raise MissingTitle(title)
        return PopularityRecord(title, self.table[title], datetime.now(timezone.utc), self.name)


class RateLimiter:
    """Serializes callers so successive starts are ``min_interval`` apart."""

    def __init__(self, min_interval: float, clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.min_interval = min_interval
        self.clock = clock
        self.sleep = sleep
        self._last: float | None = None
        self._lock = threading.Lock()

    def wait(self) -> float:
        with self._lock:
            now = self.clock()
            if self._last is not None:
                gap = self._last + self.min_interval - now
                if gap > 0:
                    self.sleep(gap)
                    now = self.clock()
            self._last = now
            return now


def read_cache(path: str | Path) -> dict[str, PopularityRecord]:
    path = Path(path)
    if not path.exists():
        return {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return {
            row["title"]: PopularityRecord(
                row["title"], int(row["count"]), datetime.fromisoformat(row["fetched_at"]), row["provider"]
            )
            for row in reader
        }


def write_cache(records: Iterable[PopularityRecord], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CACHE_HEADER)
        for r in sorted(records, key=lambda r: r.title):
            w.writerow([r.title, r.count, r.fetched_at.isoformat(), r.provider])
    return path


def _default_get(url: str, user_agent: str, timeout: float) -> str:
    req = urllib.request.Request(url, headers={"User-Agent": user_agent})
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            charset = resp.headers.get_content_charset() or "utf-8"
            return resp.read().decode(charset, errors="replace")
    except (urllib.error.URLError, OSError) as exc:
        raise NetworkError(f"GET {url} failed: {exc}") from exc


class HttpProvider:
    name = ProviderKind.HTTP.value

    def __init__(self, config: ProviderConfig, *, get: Callable[[str, str, float], str] | None = None,
                 limiter: RateLimiter | None = None,
                 now: Callable[[], datetime] = lambda: datetime.now(timezone.utc)):
        config.validate()
        self.config = config
        self.get = get or _default_get
        self.limiter = limiter or RateLimiter(config.min_interval)
        self.now = now
        self.pattern = re.compile(config.count_pattern)
        self.cache = read_cache(config.cache_path) if config.cache_path else {}

    def url_for(self, title: str) -> str:
        query = f'"{title}"' if self.config.exact_phrase else title
        return self.config.endpoint_template.replace("{query}", urllib.parse.quote_plus(query))

    def _fresh(self, rec: PopularityRecord) -> bool:
        ttl = self.config.cache_ttl
        return ttl is None or self.now() - rec.fetched_at <= timedelta(seconds=ttl)

    def fetch(self, title: str) -> PopularityRecord:
        cached = self.cache.get(title)
        if cached is not None and self._fresh(cached):
            return cached
        url = self.url_for(title)
        self.limiter.wait()
        body = self.get(url, self.config.user_agent, self.config.timeout)
        m = self.pattern.search(body)
        if m is None:
            raise PatternMiss(f"result count not found in response for {title!r}")
        rec = PopularityRecord(title, parse_count(m.group(1)), self.now(), self.name)
        self.cache[title] = rec
        if self.config.cache_path:
            write_cache(self.cache.values(), self.config.cache_path)
        return rec


Provider = StaticCsvProvider | HttpProvider


def open_provider(config: ProviderConfig) -> Provider:
    if config.kind is ProviderKind.HTTP:
        return HttpProvider(config)
    return StaticCsvProvider(config)


def fetch_popularity(title: str, provider: Provider | ProviderConfig) -> PopularityRecord:
    if isinstance(provider, ProviderConfig):
        provider = open_provider(provider)
    return provider.fetch(title)


@dataclass
class Annotation:
    records: list[PopularityRecord]
    failures: list[tuple[str, MelorigError]]


def annotate_datasheet(index: CorpusIndex, provider: Provider | ProviderConfig) -> Annotation:
    """Look up every indexed title; failures are collected, not raised."""
    if isinstance(provider, ProviderConfig):
        provider = open_provider(provider)
    records: list[PopularityRecord] = []
    failures: list[tuple[str, MelorigError]] = []
    for entry in index.entries:
        try:
            records.append(provider.fetch(entry.title))
        except MelorigError as exc:
            log.warning("popularity lookup failed for %r: %s", entry.title, exc)
            failures.append((entry.title, exc))
    return Annotation(records, failures)
