"""Annotation workflow: pair serving, label collection, aggregation.

A pair stays Open until enough annotators agree. Presence agreement needs
``agreement`` matching labels (after dropping Can't-tell); when no single
label reaches that count, Present and Suggestive jointly count toward a
Suggestive result. Stance agreement applies the same counting over the
stance labels of annotators who saw the claim in the article. A pair whose
agreed presence is Present/Suggestive keeps being served until stance also
agrees; pairs reaching ``max_annotators`` without full agreement are
discarded.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

from .store import Article, Claim, CorpusStore, LabelOrigin, PairLabel, Presence, Stance
from .text import WordVectorEmbedder, cosine, tokenize


class AnnotationError(Exception):
    """Base error for the annotation workflow."""


class ValidationError(AnnotationError):
    """Label combination violates the annotation rules."""


class DuplicateAnnotationError(AnnotationError):
    """The annotator already labelled this pair."""


class NotAssignedError(AnnotationError):
    """Submission without a live assignment for this pair."""


class PairClosedError(AnnotationError):
    """The pair reached agreement or was discarded in the meantime."""


class UnknownAnnotatorError(AnnotationError):
    pass


class UnknownPairError(AnnotationError):
    pass


class AnnPresence(str, Enum):
    PRESENT = "present"
    SUGGESTIVE = "suggestive"
    NOT_PRESENT = "not_present"
    CANT_TELL = "cant_tell"


class AnnStance(str, Enum):
    SUPPORTING = "supporting"
    CONTRADICTING = "contradicting"
    NEUTRAL = "neutral"
    CANT_TELL = "cant_tell"


_POSITIVE_PRESENCE = frozenset({AnnPresence.PRESENT, AnnPresence.SUGGESTIVE})

_PRESENCE_TO_STORE = {
    AnnPresence.PRESENT: Presence.PRESENT,
    AnnPresence.SUGGESTIVE: Presence.SUGGESTIVE,
    AnnPresence.NOT_PRESENT: Presence.NOT_PRESENT,
}

_STANCE_TO_STORE = {
    AnnStance.SUPPORTING: Stance.SUPPORTING,
    AnnStance.CONTRADICTING: Stance.CONTRADICTING,
    AnnStance.NEUTRAL: Stance.NEUTRAL,
}


@dataclass(frozen=True)
class Annotation:
    """One annotator's judgment on one pair.

    Stance must be given exactly when the annotator chose Present or
    Suggestive (an annotator who saw the claim must also judge the stance,
    even if only as Can't-tell).
    """

    pair_id: str
    annotator_id: str
    presence: AnnPresence
    stance: AnnStance | None = None
    submitted_at: float = 0.0

    def __post_init__(self):
        if self.presence in _POSITIVE_PRESENCE and self.stance is None:
            raise ValidationError(
                f"pair {self.pair_id}: presence {self.presence.value!r} requires a stance label"
            )
        if self.presence not in _POSITIVE_PRESENCE and self.stance is not None:
            raise ValidationError(
                f"pair {self.pair_id}: stance given but presence is {self.presence.value!r}"
            )


class PairStatus(str, Enum):
    OPEN = "open"
    AGREED = "agreed"
    DISCARDED = "discarded"


@dataclass(frozen=True)
class AggregatedLabel:
    pair_id: str
    presence: Presence
    stance: Stance | None = None


@dataclass
class PairState:
    pair_id: str
    article_id: str
    claim_id: str
    annotations: list[Annotation] = field(default_factory=list)
    status: PairStatus = PairStatus.OPEN
    result: AggregatedLabel | None = None
    max_annotators: int = 5
    agreement: int = 2


def _first_to_reach(labels: Sequence, need: int):
    """First label whose running count hits ``need``, scanning in order.

    This is the tie rule: when two labels both reach the agreement count,
    the one that got there first (by submission order) wins.
    """
    counts: dict = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
        if counts[label] == need:
            return label
    return None


def aggregate(
    annotations: Sequence[Annotation],
    agreement: int = 2,
    pair_id: str = "",
) -> AggregatedLabel | None:
    """Aggregate individual annotations into a single label, if agreed.

    Presence: Can't-tell labels are dropped; a label chosen by at least
    ``agreement`` annotators wins; failing that, Present and Suggestive
    jointly reaching the count yield Suggestive. Returns None when presence
    has no agreement. Stance (for Present/Suggestive outcomes) aggregates
    the same way over the stance labels of annotators whose presence was
    Present or Suggestive; a missing stance agreement leaves ``stance``
    None (the pair stays open for more annotators).
    """
    ordered = sorted(annotations, key=lambda a: a.submitted_at)
    presences = [a.presence for a in ordered if a.presence != AnnPresence.CANT_TELL]
    winner = _first_to_reach(presences, agreement)
    if winner is None:
        joint = sum(1 for p in presences if p in _POSITIVE_PRESENCE)
        if joint >= agreement:
            presence = Presence.SUGGESTIVE
        else:
            return None
    else:
        presence = _PRESENCE_TO_STORE[winner]
    if presence == Presence.NOT_PRESENT:
        return AggregatedLabel(pair_id=pair_id, presence=presence)
    stances = [
        a.stance
        for a in ordered
        if a.presence in _POSITIVE_PRESENCE and a.stance != AnnStance.CANT_TELL
    ]
    stance_winner = _first_to_reach(stances, agreement)
    stance = _STANCE_TO_STORE[stance_winner] if stance_winner is not None else None
    return AggregatedLabel(pair_id=pair_id, presence=presence, stance=stance)


def highlights(
    claim: Claim | str,
    article: Article,
    embedder: WordVectorEmbedder,
    top_k: int = 3,
) -> list[int]:
    """Sentence indices ranked by similarity to the claim (ties by index)."""
    statement = claim.statement if isinstance(claim, Claim) else claim
    tok = tokenize(article.body)
    claim_emb = embedder.embed(statement)
    sims = [
        cosine(claim_emb, embedder.embed_tokens(tok.sentence_tokens(i)))
        for i in range(tok.n_sentences)
    ]
    ranked = sorted(range(len(sims)), key=lambda i: (-sims[i], i))
    return ranked[:top_k]


@dataclass(frozen=True)
class HighlightSpan:
    sentence: int
    start: int
    end: int


@dataclass(frozen=True)
class Assignment:
    pair_id: str
    claim: Claim
    article: Article
    highlights: tuple[HighlightSpan, ...]


def pair_id_for(article_id: str, claim_id: str) -> str:
    return f"{article_id}::{claim_id}"


class AnnotationService:
    """Serves pairs to annotators and folds their labels into final ones.

    Assignment and submission are serialized per service (atomic under one
    lock); reads are cheap. The clock is injected so scheduling and lease
    expiry are testable.
    """

    def __init__(
        self,
        store: CorpusStore,
        embedder: WordVectorEmbedder | None = None,
        max_annotators: int = 5,
        agreement: int = 2,
        lease_seconds: float = 3600.0,
        highlight_top_k: int = 3,
        auto_register: bool = True,
        clock: Callable[[], float] = time.time,
        claim_blocklist: Iterable[str] = (),
    ):
        self.store = store
        self.embedder = embedder
        self.max_annotators = max_annotators
        self.agreement = agreement
        self.lease_seconds = lease_seconds
        self.highlight_top_k = highlight_top_k
        self.auto_register = auto_register
        self.clock = clock
        # over-generic claims mistakenly matched with many articles
        self.claim_blocklist = frozenset(claim_blocklist)
        self.pairs: dict[str, PairState] = {}
        self.annotators: set[str] = set()
        self._leases: dict[tuple[str, str], float] = {}  # (annotator, pair) -> expiry
        self._labelled: dict[str, set[str]] = {}  # annotator -> pair ids
        self._lock = threading.Lock()

    # -- pool management ---------------------------------------------------

    def add_pair(self, article_id: str, claim_id: str) -> PairState:
        if article_id not in self.store.articles:
            raise UnknownPairError(f"unknown article {article_id!r}")
        if claim_id not in self.store.claims:
            raise UnknownPairError(f"unknown claim {claim_id!r}")
        if claim_id in self.claim_blocklist:
            raise ValidationError(f"claim {claim_id!r} is blocklisted for annotation")
        pid = pair_id_for(article_id, claim_id)
        with self._lock:
            if pid not in self.pairs:
                self.pairs[pid] = PairState(
                    pair_id=pid,
                    article_id=article_id,
                    claim_id=claim_id,
                    max_annotators=self.max_annotators,
                    agreement=self.agreement,
                )
            return self.pairs[pid]

    def seed_from_labels(self, labels: Iterable[PairLabel]) -> int:
        """Enter pairs from presence-detection batch output."""
        count = 0
        for label in labels:
            if label.claim_id in self.claim_blocklist:
                continue
            self.add_pair(label.article_id, label.claim_id)
            count += 1
        return count

    def register_annotator(self, annotator_id: str) -> None:
        self.annotators.add(annotator_id)

    def _check_annotator(self, annotator_id: str) -> None:
        if annotator_id in self.annotators:
            return
        if self.auto_register and annotator_id:
            self.annotators.add(annotator_id)
            return
        raise UnknownAnnotatorError(f"unknown annotator {annotator_id!r}")

    # -- serving -------------------------------------------------------------

    def _remaining_needed(self, pair: PairState) -> int:
        presences = [
            a.presence for a in pair.annotations if a.presence != AnnPresence.CANT_TELL
        ]
        agg = aggregate(pair.annotations, pair.agreement, pair.pair_id)
        if agg is None:
            counts: dict[AnnPresence, int] = {}
            for p in presences:
                counts[p] = counts.get(p, 0) + 1
            best = max(counts.values(), default=0)
            return max(1, pair.agreement - best)
        # presence agreed, stance still open
        stances = [
            a.stance
            for a in pair.annotations
            if a.presence in _POSITIVE_PRESENCE and a.stance != AnnStance.CANT_TELL
        ]
        counts = {}
        for s in stances:
            counts[s] = counts.get(s, 0) + 1
        best = max(counts.values(), default=0)
        return max(1, pair.agreement - best)

    def next_pair(self, annotator_id: str) -> Assignment | None:
        """Highest-priority open pair this annotator has never labelled.

        Pairs that already collected at least one annotation outrank fresh
        ones (keeps unfinished pairs to a minimum); within a tier, pairs
        closest to agreement come first, then pair id. Returns None when
        nothing is eligible.
        """
        self._check_annotator(annotator_id)
        now = self.clock()
        with self._lock:
            self._expire_leases(now)
            labelled = self._labelled.get(annotator_id, set())
            candidates = [
                p
                for p in self.pairs.values()
                if p.status == PairStatus.OPEN and p.pair_id not in labelled
            ]
            if not candidates:
                return None
            candidates.sort(
                key=lambda p: (
                    0 if p.annotations else 1,
                    self._remaining_needed(p),
                    p.pair_id,
                )
            )
            pair = candidates[0]
            self._leases[(annotator_id, pair.pair_id)] = now + self.lease_seconds
        return self._assignment(pair)

    def _assignment(self, pair: PairState) -> Assignment:
        article = self.store.articles[pair.article_id]
        claim = self.store.claims[pair.claim_id]
        spans: tuple[HighlightSpan, ...] = ()
        if self.embedder is not None:
            tok = tokenize(article.body)
            idx = highlights(claim, article, self.embedder, self.highlight_top_k)
            spans = tuple(
                HighlightSpan(
                    sentence=i,
                    start=tok.sentence_char_spans[i][0],
                    end=tok.sentence_char_spans[i][1],
                )
                for i in idx
            )
        return Assignment(pair_id=pair.pair_id, claim=claim, article=article, highlights=spans)

    def _expire_leases(self, now: float) -> None:
        expired = [k for k, expiry in self._leases.items() if expiry <= now]
        for k in expired:
            del self._leases[k]

    # -- submission ------------------------------------------------------------

    def submit(self, annotation: Annotation) -> PairState:
        """Store an annotation and advance the pair's state machine."""
        self._check_annotator(annotation.annotator_id)
        now = self.clock()
        with self._lock:
            self._expire_leases(now)
            pair = self.pairs.get(annotation.pair_id)
            if pair is None:
                raise UnknownPairError(f"unknown pair {annotation.pair_id!r}")
            key = (annotation.annotator_id, annotation.pair_id)
            if any(a.annotator_id == annotation.annotator_id for a in pair.annotations):
                raise DuplicateAnnotationError(
                    f"annotator {annotation.annotator_id!r} already labelled {pair.pair_id}"
                )
            if key not in self._leases:
                raise NotAssignedError(
                    f"annotator {annotation.annotator_id!r} holds no assignment for {pair.pair_id}"
                )
            if pair.status != PairStatus.OPEN:
                del self._leases[key]
                raise PairClosedError(f"pair {pair.pair_id} is {pair.status.value}")
            del self._leases[key]
            stamped = Annotation(
                pair_id=annotation.pair_id,
                annotator_id=annotation.annotator_id,
                presence=annotation.presence,
                stance=annotation.stance,
                submitted_at=annotation.submitted_at or now,
            )
            pair.annotations.append(stamped)
            self._labelled.setdefault(annotation.annotator_id, set()).add(pair.pair_id)
            self._advance(pair)
            return pair

    def _advance(self, pair: PairState) -> None:
        agg = aggregate(pair.annotations, pair.agreement, pair.pair_id)
        complete = agg is not None and (
            agg.presence == Presence.NOT_PRESENT or agg.stance is not None
        )
        if complete:
            pair.status = PairStatus.AGREED
            pair.result = agg
        elif len(pair.annotations) >= pair.max_annotators:
            pair.status = PairStatus.DISCARDED
            pair.result = None

    # -- export ------------------------------------------------------------------

    def get_pair(self, pair_id: str) -> PairState:
        pair = self.pairs.get(pair_id)
        if pair is None:
            raise UnknownPairError(f"unknown pair {pair_id!r}")
        return pair

    def export_labels(self) -> list[PairLabel]:
        """Manual pair labels for every Agreed pair (others are excluded)."""
        out: list[PairLabel] = []
        for pid in sorted(self.pairs):
            pair = self.pairs[pid]
            if pair.status != PairStatus.AGREED or pair.result is None:
                continue
            out.append(
                PairLabel(
                    article_id=pair.article_id,
                    claim_id=pair.claim_id,
                    presence=pair.result.presence,
                    stance=pair.result.stance,
                    origin=LabelOrigin.MANUAL,
                )
            )
        return out
