"""Pluggable data providers and scheduled monitors over local feed fixtures.

Providers parse raw payloads into corpus records; monitors decide which
provider runs when, against which feed paths, and which providers to chain
when a new record appears. No live network I/O: feeds are files, the clock
is a parameter.
"""
from __future__ import annotations

import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from email.utils import parsedate_to_datetime
from pathlib import Path
from typing import Iterable, Protocol
from urllib.parse import parse_qsl, urlencode, urlsplit, urlunsplit

from .store import (
    Article,
    Claim,
    CorpusStore,
    Source,
    Split,
    VeracityRating,
    encode_record,
)

logger = logging.getLogger(__name__)

# query parameters that only track the visitor, not the document
TRACKING_PARAMS = ("utm_", "fbclid", "gclid", "mc_cid", "mc_eid", "igshid", "ref")


class FeedParseError(Exception):
    """Malformed feed markup; carries the byte offset of the failure."""

    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


def normalize_url(url: str) -> str:
    """Deduplication identity: lowercase host, drop tracking params/fragment."""
    parts = urlsplit(url.strip())
    query = [
        (k, v)
        for k, v in parse_qsl(parts.query, keep_blank_values=True)
        if not any(k.lower() == p or k.lower().startswith(p) for p in TRACKING_PARAMS)
    ]
    return urlunsplit(
        (
            parts.scheme.lower(),
            parts.netloc.lower(),
            parts.path,
            urlencode(query),
            "",
        )
    )


class DataProvider(Protocol):
    """Anything that turns a raw payload into corpus records.

    ``parse`` must be deterministic for a fixed payload.
    """

    id: str
    accepts: str  # "article_feed" | "fact_check_feed" | "record"

    def parse(self, payload: bytes) -> list: ...


def _byte_offset(payload: bytes, line: int, column: int) -> int:
    lines = payload.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


@dataclass
class RssProvider:
    """RSS 2.0 parser: one Article per ``<item>``.

    Item title -> title, description (or content:encoded) -> body,
    link -> url; the publication date is parsed when present, otherwise
    the record keeps a null timestamp and a warning is logged.
    """

    id: str
    source_id: str
    split: Split = Split.UNSPLIT
    accepts: str = "article_feed"

    def parse(self, payload: bytes) -> list[Article]:
        try:
            text = payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FeedParseError(f"feed is not UTF-8: {exc}", exc.start) from None
        try:
            root = ET.fromstring(text)
        except ET.ParseError as exc:
            line, column = exc.position
            raise FeedParseError(
                f"malformed feed markup: {exc}", _byte_offset(payload, line, column)
            ) from None
        articles: list[Article] = []
        for item in root.iter("item"):
            link = (item.findtext("link") or "").strip()
            title = (item.findtext("title") or "").strip()
            body = item.findtext(
                "{http://purl.org/rss/1.0/modules/content/}encoded"
            ) or item.findtext("description") or ""
            published = None
            raw_date = item.findtext("pubDate")
            if raw_date:
                try:
                    published = parsedate_to_datetime(raw_date.strip())
                except (TypeError, ValueError):
                    logger.warning(
                        "provider %s: unparseable pubDate %r; keeping null timestamp",
                        self.id,
                        raw_date,
                    )
            url = normalize_url(link) if link else ""
            articles.append(
                Article(
                    id=url or f"{self.id}:{title}",
                    source_id=self.source_id,
                    url=url,
                    title=title,
                    body=body.strip(),
                    published_at=published,
                    split=self.split,
                )
            )
        return articles


@dataclass
class ClaimFeedProvider:
    """Generic fact-check feed: line-delimited claim records."""

    id: str
    fact_checker_id: str = ""
    accepts: str = "fact_check_feed"

    def parse(self, payload: bytes) -> list[Claim]:
        claims: list[Claim] = []
        for lineno, line in enumerate(payload.decode("utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FeedParseError(f"line {lineno}: invalid JSON: {exc.msg}", exc.pos) from None
            try:
                claims.append(
                    Claim(
                        id=str(obj["id"]),
                        statement=str(obj["statement"]),
                        rating=VeracityRating(obj.get("rating") or "unknown"),
                        fact_checker_id=str(
                            obj.get("fact_checker_id") or self.fact_checker_id
                        ),
                        fact_check_url=obj.get("fact_check_url"),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise FeedParseError(f"line {lineno}: bad claim record: {exc}") from None
        return claims


def parse_feed(payload: bytes, provider: DataProvider) -> list:
    """Run a provider over a raw payload."""
    return provider.parse(payload)


@dataclass
class Monitor:
    """Schedule binding a provider to its feed paths and chained providers."""

    id: str
    provider_id: str
    interval_seconds: float
    params: dict = field(default_factory=dict)
    chain: list[str] = field(default_factory=list)
    last_run: float | None = None

    def __post_init__(self):
        if self.interval_seconds <= 0:
            raise ValueError(f"monitor {self.id!r}: interval must be positive")

    def due(self, now: float) -> bool:
        return self.last_run is None or self.last_run + self.interval_seconds <= now


def load_monitor_config(path: str | Path) -> list[Monitor]:
    """One monitor per entry: id, provider, interval_seconds, params, chain.

    Accepts either a bare list of monitor entries or an object whose
    ``monitors`` key holds them (the object form also carries provider
    definitions for the CLI).
    """
    entries = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(entries, dict):
        entries = entries.get("monitors", [])
    monitors = []
    for entry in entries:
        monitors.append(
            Monitor(
                id=entry["id"],
                provider_id=entry["provider"],
                interval_seconds=float(entry["interval_seconds"]),
                params=entry.get("params", {}),
                chain=list(entry.get("chain", [])),
            )
        )
    return monitors


@dataclass
class MonitorReport:
    new: int = 0
    updated: int = 0
    errors: list[str] = field(default_factory=list)


class IngestionEngine:
    """Registered providers plus monitors, writing into one corpus store.

    Monitors may run concurrently; every write funnels through the store's
    single-writer upsert. A provider failure is isolated to its monitor's
    report.
    """

    def __init__(self, store: CorpusStore):
        self.store = store
        self.providers: dict[str, DataProvider] = {}
        self.monitors: dict[str, Monitor] = {}

    def register_provider(self, provider: DataProvider) -> None:
        self.providers[provider.id] = provider

    def register_monitor(self, monitor: Monitor) -> None:
        if monitor.provider_id not in self.providers:
            raise ValueError(f"monitor {monitor.id!r}: unknown provider {monitor.provider_id!r}")
        for chained in monitor.chain:
            if chained not in self.providers:
                raise ValueError(f"monitor {monitor.id!r}: unknown chained provider {chained!r}")
        self.monitors[monitor.id] = monitor

    def _upsert(self, record) -> str:
        if isinstance(record, Article):
            return self.store.upsert_article(record)
        if isinstance(record, Claim):
            return self.store.upsert_claim(record)
        if isinstance(record, Source):
            return self.store.upsert_source(record)
        raise TypeError(f"provider produced a non-record: {type(record)!r}")

    def _ingest(self, records: Iterable, monitor: Monitor, report: MonitorReport, chain: bool) -> None:
        for record in records:
            outcome = self._upsert(record)
            if outcome == "created":
                report.new += 1
                if chain:
                    # chaining fires once per newly created record, never for updates
                    self._run_chain(record, monitor, report)
            elif outcome == "updated":
                report.updated += 1

    def _run_chain(self, record, monitor: Monitor, report: MonitorReport) -> None:
        payload = json.dumps(encode_record(record), sort_keys=True).encode("utf-8")
        for provider_id in monitor.chain:
            provider = self.providers[provider_id]
            try:
                self._ingest(provider.parse(payload), monitor, report, chain=False)
            except Exception as exc:
                report.errors.append(f"chained provider {provider_id}: {exc}")

    def run_monitor(self, monitor: Monitor, now: float) -> MonitorReport:
        report = MonitorReport()
        provider = self.providers[monitor.provider_id]
        feeds = monitor.params.get("feeds", [])
        for feed in feeds:
            try:
                payload = Path(feed).read_bytes()
                self._ingest(provider.parse(payload), monitor, report, chain=True)
            except Exception as exc:
                report.errors.append(f"feed {feed}: {exc}")
        monitor.last_run = now
        return report

    def run_due_monitors(self, now: float) -> dict[str, MonitorReport]:
        """Run every monitor whose interval has elapsed; returns per-monitor reports.

        A monitor with interval T runs at most floor(elapsed / T) + 1 times
        over any window because ``last_run`` advances to ``now`` on each run.
        """
        reports: dict[str, MonitorReport] = {}
        for monitor_id in sorted(self.monitors):
            monitor = self.monitors[monitor_id]
            if monitor.due(now):
                reports[monitor_id] = self.run_monitor(monitor, now)
        return reports
