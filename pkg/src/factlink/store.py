"""Canonical data model and file-backed persistence.

Entities live in line-delimited UTF-8 JSON files, one kind per file
(diff-able, streamable, matching the published dump style). Writes are
atomic at file granularity: write to a temp file, then rename.
"""
from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Callable


class StoreError(Exception):
    """Base error for store operations."""


class MalformedRecordError(StoreError):
    """A line in a record file failed to parse; names line number and field."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}: line {line}: {message}")
        self.path = path
        self.line = line


class DuplicateIdError(StoreError):
    """Same id seen twice with conflicting content."""


class UnknownFieldError(StoreError):
    """A query filter referenced a field the record kind does not have."""


class ReferentialIntegrityError(StoreError):
    """A pair label referenced a missing article or claim."""


class UnmappedLabelError(StoreError):
    """A raw fact-checker rating had no mapping entry."""

    def __init__(self, raw_label: str, checker: str):
        super().__init__(
            f"no rating mapping for label {raw_label!r} from checker {checker!r}"
        )
        self.raw_label = raw_label
        self.checker = checker


class Reliability(str, Enum):
    RELIABLE = "reliable"
    UNRELIABLE = "unreliable"
    UNKNOWN = "unknown"


class SourceKind(str, Enum):
    NEWS_OR_BLOG = "news_or_blog"
    FACT_CHECKER = "fact_checker"


class VeracityRating(str, Enum):
    """Unified six-value veracity scale; UNKNOWN is a value, not an error."""

    FALSE = "false"
    MOSTLY_FALSE = "mostly false"
    MIXTURE = "mixture"
    MOSTLY_TRUE = "mostly true"
    TRUE = "true"
    UNKNOWN = "unknown"


class Split(str, Enum):
    SAMPLE1 = "sample1"
    SAMPLE2 = "sample2"
    UNSPLIT = "unsplit"


class Presence(str, Enum):
    PRESENT = "present"
    SUGGESTIVE = "suggestive"
    NOT_PRESENT = "not_present"


class Stance(str, Enum):
    SUPPORTING = "supporting"
    CONTRADICTING = "contradicting"
    NEUTRAL = "neutral"


class LabelOrigin(str, Enum):
    MANUAL = "manual"
    PREDICTED = "predicted"


@dataclass(frozen=True)
class Source:
    id: str
    name: str
    base_url: str = ""
    reliability: Reliability = Reliability.UNKNOWN
    kind: SourceKind = SourceKind.NEWS_OR_BLOG


@dataclass(frozen=True)
class Article:
    id: str
    source_id: str
    url: str
    title: str
    body: str
    published_at: datetime | None = None
    authors: tuple[str, ...] = ()
    split: Split = Split.UNSPLIT

    @property
    def has_body(self) -> bool:
        """Empty-bodied articles are importable but excluded from scoring."""
        return bool(self.body.strip())


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    rating: VeracityRating = VeracityRating.UNKNOWN
    fact_checker_id: str = ""
    fact_check_url: str | None = None

    def __post_init__(self):
        if not self.statement.strip():
            raise ValueError(f"claim {self.id!r} has an empty statement")


@dataclass(frozen=True)
class PairLabel:
    article_id: str
    claim_id: str
    presence: Presence
    stance: Stance | None = None
    origin: LabelOrigin = LabelOrigin.MANUAL
    presence_score: float | None = None
    pair_veracity: VeracityRating | None = None

    def __post_init__(self):
        if self.stance is not None and self.presence == Presence.NOT_PRESENT:
            raise ValueError(
                f"pair ({self.article_id}, {self.claim_id}): stance requires "
                "presence Present or Suggestive"
            )

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.article_id, self.claim_id, self.origin.value)


def parse_rfc3339(value: str) -> datetime:
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt


def _require(obj: dict, key: str) -> Any:
    if key not in obj or obj[key] is None:
        raise KeyError(key)
    return obj[key]


def _source_from_json(obj: dict) -> Source:
    return Source(
        id=str(_require(obj, "id")),
        name=str(_require(obj, "name")),
        base_url=str(obj.get("base_url") or ""),
        reliability=Reliability(obj.get("reliability") or "unknown"),
        kind=SourceKind(obj.get("kind") or "news_or_blog"),
    )


def _source_to_json(s: Source) -> dict:
    return {
        "id": s.id,
        "name": s.name,
        "base_url": s.base_url,
        "reliability": s.reliability.value,
        "kind": s.kind.value,
    }


def _article_from_json(obj: dict) -> Article:
    published = obj.get("published_at")
    return Article(
        id=str(_require(obj, "id")),
        source_id=str(_require(obj, "source_id")),
        url=str(obj.get("url") or ""),
        title=str(obj.get("title") or ""),
        body=str(obj.get("body") if obj.get("body") is not None else ""),
        published_at=parse_rfc3339(published) if published else None,
        authors=tuple(obj.get("authors") or ()),
        split=Split(obj.get("split") or "unsplit"),
    )


def _article_to_json(a: Article) -> dict:
    return {
        "id": a.id,
        "source_id": a.source_id,
        "url": a.url,
        "title": a.title,
        "body": a.body,
        "published_at": a.published_at.isoformat() if a.published_at else None,
        "authors": list(a.authors),
        "split": a.split.value,
    }


def _claim_from_json(obj: dict) -> Claim:
    return Claim(
        id=str(_require(obj, "id")),
        statement=str(_require(obj, "statement")),
        rating=VeracityRating(obj.get("rating") or "unknown"),
        fact_checker_id=str(obj.get("fact_checker_id") or ""),
        fact_check_url=obj.get("fact_check_url"),
    )


def _claim_to_json(c: Claim) -> dict:
    return {
        "id": c.id,
        "statement": c.statement,
        "rating": c.rating.value,
        "fact_checker_id": c.fact_checker_id,
        "fact_check_url": c.fact_check_url,
    }


def _pair_label_from_json(obj: dict) -> PairLabel:
    stance = obj.get("stance")
    veracity = obj.get("pair_veracity")
    score = obj.get("presence_score")
    return PairLabel(
        article_id=str(_require(obj, "article_id")),
        claim_id=str(_require(obj, "claim_id")),
        presence=Presence(_require(obj, "presence")),
        stance=Stance(stance) if stance is not None else None,
        origin=LabelOrigin(obj.get("origin") or "manual"),
        presence_score=float(score) if score is not None else None,
        pair_veracity=VeracityRating(veracity) if veracity is not None else None,
    )


def _pair_label_to_json(p: PairLabel) -> dict:
    return {
        "article_id": p.article_id,
        "claim_id": p.claim_id,
        "presence": p.presence.value,
        "stance": p.stance.value if p.stance else None,
        "origin": p.origin.value,
        "presence_score": p.presence_score,
        "pair_veracity": p.pair_veracity.value if p.pair_veracity else None,
    }


class RecordKind(str, Enum):
    ARTICLES = "articles"
    CLAIMS = "claims"
    SOURCES = "sources"
    PAIR_LABELS = "pair_labels"


_CODECS: dict[RecordKind, tuple[Callable[[dict], Any], Callable[[Any], dict]]] = {
    RecordKind.ARTICLES: (_article_from_json, _article_to_json),
    RecordKind.CLAIMS: (_claim_from_json, _claim_to_json),
    RecordKind.SOURCES: (_source_from_json, _source_to_json),
    RecordKind.PAIR_LABELS: (_pair_label_from_json, _pair_label_to_json),
}


def atomic_write_text(path: str | Path, content: str) -> None:
    """Write-temp-then-rename so readers never observe a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class RatingMap:
    """Checker id -> normalized raw label -> unified rating.

    Shipped as a config file so new fact-checkers need no code change.
    The ``*`` checker entry applies to every checker as a fallback.
    """

    def __init__(self, table: dict[str, dict[str, VeracityRating]]):
        self._table = {
            checker: {raw.strip().lower(): rating for raw, rating in entries.items()}
            for checker, entries in table.items()
        }

    @classmethod
    def load(cls, path: str | Path) -> "RatingMap":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            {
                checker: {label: VeracityRating(v) for label, v in entries.items()}
                for checker, entries in raw.items()
            }
        )

    @classmethod
    def default(cls) -> "RatingMap":
        """The shipped table: just the six unified names, for any checker."""
        with resources.files("factlink").joinpath("data/rating_map.json").open(
            "r", encoding="utf-8"
        ) as fh:
            raw = json.load(fh)
        return cls(
            {
                checker: {label: VeracityRating(v) for label, v in entries.items()}
                for checker, entries in raw.items()
            }
        )

    def unify(self, raw_label: str, checker: str) -> VeracityRating:
        norm = raw_label.strip().lower()
        for key in (checker, "*"):
            entry = self._table.get(key)
            if entry and norm in entry:
                return entry[norm]
        raise UnmappedLabelError(raw_label, checker)


_DEFAULT_MAP: RatingMap | None = None


def unify_rating(raw_label: str, checker: str, mapping: RatingMap | None = None) -> VeracityRating:
    """Map a fact-checker's raw rating string onto the unified 6-value scale.

    Normalization is case-insensitive and whitespace-trimmed; an unmapped
    label raises :class:`UnmappedLabelError` carrying the raw string rather
    than silently becoming UNKNOWN.
    """
    global _DEFAULT_MAP
    if mapping is None:
        if _DEFAULT_MAP is None:
            _DEFAULT_MAP = RatingMap.default()
        mapping = _DEFAULT_MAP
    return mapping.unify(raw_label, checker)


@dataclass
class QueryPage:
    records: list
    total: int


_FILE_NAMES = {
    RecordKind.ARTICLES: "articles.jsonl",
    RecordKind.CLAIMS: "claims.jsonl",
    RecordKind.SOURCES: "sources.jsonl",
    RecordKind.PAIR_LABELS: "pair_labels.jsonl",
}


class CorpusStore:
    """In-memory record sets with JSONL import/export.

    Many concurrent readers, single writer: mutation goes through one lock,
    file writes are atomic.
    """

    def __init__(self):
        self.articles: dict[str, Article] = {}
        self.claims: dict[str, Claim] = {}
        self.sources: dict[str, Source] = {}
        self.pair_labels: dict[tuple[str, str, str], PairLabel] = {}
        self._write_lock = threading.Lock()

    # -- single-record upserts -------------------------------------------

    def _upsert(self, table: dict, key, record) -> str:
        with self._write_lock:
            existing = table.get(key)
            if existing is None:
                table[key] = record
                return "created"
            if existing == record:
                return "unchanged"
            table[key] = record
            return "updated"

    def upsert_article(self, a: Article) -> str:
        return self._upsert(self.articles, a.id, a)

    def upsert_claim(self, c: Claim) -> str:
        return self._upsert(self.claims, c.id, c)

    def upsert_source(self, s: Source) -> str:
        return self._upsert(self.sources, s.id, s)

    def upsert_pair_label(self, p: PairLabel) -> str:
        if p.article_id not in self.articles:
            raise ReferentialIntegrityError(
                f"pair label references unknown article {p.article_id!r}"
            )
        if p.claim_id not in self.claims:
            raise ReferentialIntegrityError(
                f"pair label references unknown claim {p.claim_id!r}"
            )
        return self._upsert(self.pair_labels, p.key, p)

    def scorable_articles(self) -> list[Article]:
        """Articles eligible for presence scoring (non-empty body)."""
        return [a for a in sorted(self.articles.values(), key=lambda a: a.id) if a.has_body]

    # -- bulk import / export --------------------------------------------

    def _table_for(self, kind: RecordKind) -> dict:
        return {
            RecordKind.ARTICLES: self.articles,
            RecordKind.CLAIMS: self.claims,
            RecordKind.SOURCES: self.sources,
            RecordKind.PAIR_LABELS: self.pair_labels,
        }[kind]

    def import_records(self, path: str | Path, kind: RecordKind) -> int:
        """Strict line-by-line import; upserts by id and returns lines read.

        Idempotent for identical input. A line that fails to parse raises
        :class:`MalformedRecordError` naming the line and field; an id that
        is already present with different content raises
        :class:`DuplicateIdError` (monitors use the upsert API instead).
        """
        kind = RecordKind(kind)
        decode, _ = _CODECS[kind]
        table = self._table_for(kind)
        count = 0
        incoming: dict[Any, Any] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    if not isinstance(obj, dict):
                        raise ValueError("record is not a JSON object")
                    record = decode(obj)
                except KeyError as exc:
                    raise MalformedRecordError(
                        str(path), lineno, f"missing field {exc.args[0]!r}"
                    ) from None
                except (ValueError, TypeError) as exc:
                    raise MalformedRecordError(str(path), lineno, str(exc)) from None
                key = record.key if kind == RecordKind.PAIR_LABELS else record.id
                for prior in (incoming, table):
                    if key in prior and prior[key] != record:
                        raise DuplicateIdError(
                            f"{path}: line {lineno}: id {key!r} already exists "
                            "with conflicting content"
                        )
                incoming[key] = record
                count += 1
        if kind == RecordKind.PAIR_LABELS:
            for record in incoming.values():
                self.upsert_pair_label(record)
        else:
            with self._write_lock:
                table.update(incoming)
        return count

    def export_records(self, path: str | Path, kind: RecordKind) -> int:
        kind = RecordKind(kind)
        _, encode = _CODECS[kind]
        table = self._table_for(kind)
        records = [table[k] for k in sorted(table)]
        lines = [json.dumps(encode(r), ensure_ascii=False, sort_keys=True) for r in records]
        atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
        return len(records)

    def save(self, data_dir: str | Path) -> None:
        data_dir = Path(data_dir)
        for kind, name in _FILE_NAMES.items():
            self.export_records(data_dir / name, kind)

    @classmethod
    def load(cls, data_dir: str | Path) -> "CorpusStore":
        store = cls()
        data_dir = Path(data_dir)
        for kind, name in _FILE_NAMES.items():
            path = data_dir / name
            if path.exists():
                store.import_records(path, kind)
        return store

    # -- querying ----------------------------------------------------------

    def query(
        self,
        kind: RecordKind,
        filters: dict[str, Any] | None = None,
        offset: int = 0,
        limit: int | None = None,
    ) -> QueryPage:
        """Equality-filtered page of records, stably ordered by id."""
        kind = RecordKind(kind)
        table = self._table_for(kind)
        records = [table[k] for k in sorted(table)]
        if records:
            known = set(records[0].__dataclass_fields__)
        else:
            sample = {
                RecordKind.ARTICLES: Article,
                RecordKind.CLAIMS: Claim,
                RecordKind.SOURCES: Source,
                RecordKind.PAIR_LABELS: PairLabel,
            }[kind]
            known = set(sample.__dataclass_fields__)
        for field_name in filters or {}:
            if field_name not in known:
                raise UnknownFieldError(f"unknown field {field_name!r} for {kind.value}")
        for field_name, wanted in (filters or {}).items():
            records = [
                r for r in records
                if getattr(r, field_name) == wanted
                or getattr(getattr(r, field_name), "value", None) == wanted
            ]
        total = len(records)
        end = None if limit is None else offset + limit
        return QueryPage(records=records[offset:end], total=total)


_ENCODERS_BY_TYPE: dict[type, Callable[[Any], dict]] = {
    Article: _article_to_json,
    Claim: _claim_to_json,
    Source: _source_to_json,
    PairLabel: _pair_label_to_json,
}


def encode_record(record: Any) -> dict:
    """JSON-object form of any store record (wire format of the JSONL files)."""
    encode = _ENCODERS_BY_TYPE.get(type(record))
    if encode is None:
        raise TypeError(f"not a store record: {type(record)!r}")
    return encode(record)
