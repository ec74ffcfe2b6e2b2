"""Claim presence scorers (IR, SE, IRSE) and thresholded classification.

All scorers are pure given immutable stats/lexicon; pairs can be scored in
parallel. Scores are invariant under article sentence reordering.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .store import Article, Claim, LabelOrigin, PairLabel, Presence
from .text import (
    CorpusStats,
    NGram,
    SynonymConfig,
    TokenizedText,
    WordVectorEmbedder,
    bm25_score,
    cosine,
    extract_ngrams,
    synonyms,
    tfidf,
    tokenize,
)


class Method(str, Enum):
    IR = "ir"
    SE = "se"
    IRSE = "irse"


DEFAULT_THRESHOLDS = {Method.IR: 0.5, Method.SE: 0.5, Method.IRSE: 0.45}
DEFAULT_PREFILTER = 0.25
DEFAULT_TOP_SENTENCES = 5


@dataclass(frozen=True)
class PresenceConfig:
    method: Method = Method.IRSE
    threshold: float | None = None  # None -> per-method default
    prefilter_threshold: float = DEFAULT_PREFILTER
    top_sentences: int = DEFAULT_TOP_SENTENCES

    def __post_init__(self):
        if self.threshold is not None and not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if not 0.0 <= self.prefilter_threshold <= 1.0:
            raise ValueError("prefilter_threshold must lie in [0, 1]")
        if self.top_sentences < 1:
            raise ValueError("top_sentences must be >= 1")

    @property
    def effective_threshold(self) -> float:
        return DEFAULT_THRESHOLDS[self.method] if self.threshold is None else self.threshold


@dataclass(frozen=True)
class ScoreDetail:
    """Raw score plus the sentence indices that drove it."""

    article_id: str
    claim_id: str
    method: Method
    score: float
    matched_sentences: tuple[int, ...] = ()


@dataclass(frozen=True)
class PresenceResult:
    article_id: str
    claim_id: str
    method: Method
    score: float
    decision: Presence
    matched_sentences: tuple[int, ...] = ()


class CorpusIndex:
    """Tokenized article bodies plus corpus statistics for retrieval/scoring.

    Articles with empty bodies are excluded (flagged at import, never scored).
    """

    def __init__(self, articles: Iterable[Article]):
        self.articles: dict[str, Article] = {}
        self.tokenized: dict[str, TokenizedText] = {}
        for a in sorted(articles, key=lambda a: a.id):
            if not a.has_body:
                continue
            self.articles[a.id] = a
            self.tokenized[a.id] = tokenize(a.body)
        self.stats = CorpusStats(self.tokenized.values())


def retrieve_candidates(
    claim: Claim | str,
    index: CorpusIndex,
    k1: float = 1.2,
    b: float = 0.75,
) -> list[tuple[str, float]]:
    """BM25-rank articles for a claim, keeping scores above 2/3 of the maximum.

    Returns (article_id, score) sorted by score descending then id; empty
    when no article scores positively.
    """
    statement = claim.statement if isinstance(claim, Claim) else claim
    query = tokenize(statement)
    scored = [
        (aid, bm25_score(query, tok, index.stats, k1=k1, b=b))
        for aid, tok in index.tokenized.items()
    ]
    if not scored:
        return []
    max_score = max(s for _, s in scored)
    if max_score <= 0.0:
        return []
    cutoff = max_score * 2.0 / 3.0
    kept = [(aid, s) for aid, s in scored if s > cutoff]
    kept.sort(key=lambda p: (-p[1], p[0]))
    return kept


def _mean_top_k(values: Sequence[float], k: int) -> float:
    if not values:
        return 0.0
    top = sorted(values, reverse=True)[:k]
    return sum(top) / len(top)


def _top_k_indices(values: Sequence[float], k: int) -> tuple[int, ...]:
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    return tuple(order[:k])


class _PreparedArticle:
    __slots__ = ("tokenized", "sentence_sets", "sentence_embs", "title_emb")

    def __init__(self, article: Article, embedder: WordVectorEmbedder | None):
        self.tokenized = tokenize(article.body)
        self.sentence_sets = [frozenset(s) for s in self.tokenized.sentences()]
        if embedder is not None:
            self.sentence_embs = [
                embedder.embed_tokens(s) for s in self.tokenized.sentences()
            ]
            self.title_emb = embedder.embed(article.title)
        else:
            self.sentence_embs = []
            self.title_emb = None


class _PreparedClaim:
    __slots__ = ("tokenized", "grams", "weights", "term_alternatives", "emb")

    def __init__(
        self,
        claim: Claim,
        stats: CorpusStats,
        syn_cfg: SynonymConfig,
        embedder: WordVectorEmbedder | None,
        lexicon,
    ):
        self.tokenized = tokenize(claim.statement)
        if not self.tokenized.tokens:
            raise ValueError(f"claim {claim.id!r} tokenizes to nothing")
        self.grams = extract_ngrams(self.tokenized)
        self.weights: dict[NGram, float] = {}
        for glist in self.grams.values():
            for g in glist:
                if g not in self.weights:
                    self.weights[g] = tfidf(g, self.tokenized, stats)
        # medical terms may be substituted by their synonyms during matching
        self.term_alternatives: dict[str, frozenset[str]] = {}
        for term in set(self.tokenized.tokens):
            alts = {term}
            if lexicon is not None and term in syn_cfg.medical_terms:
                alts.update(synonyms(term, syn_cfg, lexicon))
            self.term_alternatives[term] = frozenset(alts)
        self.emb = embedder.embed_tokens(self.tokenized.tokens) if embedder else None

    def gram_in_sentence(self, gram: NGram, sentence_set: frozenset[str]) -> bool:
        return all(
            not self.term_alternatives[t].isdisjoint(sentence_set) for t in gram
        )


def _ir_fractions(
    prepared_claim: _PreparedClaim,
    sentence_sets: Sequence[frozenset[str]],
    sentence_weight,
) -> tuple[float, tuple[int, ...]]:
    """Shared core of IR and IRSE: per-order matched-weight fractions.

    ``sentence_weight(i)`` is the multiplicative weight of a match in
    sentence ``i`` (1.0 for IR, clamped cosine for IRSE) or None when the
    sentence is ineligible. An n-gram's contribution uses its best
    (highest-weight) matching sentence.
    """
    fractions: list[float] = []
    matched_sentences: set[int] = set()
    for order in (1, 2, 3):
        glist = prepared_claim.grams[order]
        if not glist:
            continue
        denom = sum(prepared_claim.weights[g] for g in glist)
        num = 0.0
        for g in glist:
            best = None
            for i, sent_set in enumerate(sentence_sets):
                w = sentence_weight(i)
                if w is None:
                    continue
                if prepared_claim.gram_in_sentence(g, sent_set):
                    matched_sentences.add(i)
                    if best is None or w > best:
                        best = w
            if best is not None:
                num += prepared_claim.weights[g] * best
        fractions.append(num / denom if denom > 0 else 0.0)
    score = sum(fractions) / len(fractions) if fractions else 0.0
    return score, tuple(sorted(matched_sentences))


class PresenceScorer:
    """Scores claim/article pairs with any of the three methods.

    Caches tokenization and embeddings per article and per claim, so a
    batch over many pairs does each preparation once.
    """

    def __init__(
        self,
        stats: CorpusStats,
        embedder: WordVectorEmbedder | None = None,
        syn_cfg: SynonymConfig | None = None,
    ):
        self.stats = stats
        self.embedder = embedder
        self.syn_cfg = syn_cfg or SynonymConfig()
        self._articles: dict[str, _PreparedArticle] = {}
        self._claims: dict[str, _PreparedClaim] = {}

    def _article(self, article: Article) -> _PreparedArticle:
        prep = self._articles.get(article.id)
        if prep is None:
            prep = _PreparedArticle(article, self.embedder)
            self._articles[article.id] = prep
        return prep

    def _claim(self, claim: Claim) -> _PreparedClaim:
        prep = self._claims.get(claim.id)
        if prep is None:
            lexicon = self.embedder.lexicon if self.embedder else None
            prep = _PreparedClaim(claim, self.stats, self.syn_cfg, self.embedder, lexicon)
            self._claims[claim.id] = prep
        return prep

    # -- the three methods -------------------------------------------------

    def score_ir(self, claim: Claim, article: Article) -> ScoreDetail:
        """Fraction of claim n-gram TF-IDF mass matched by article sentences.

        Per order n in {1,2,3} present in the claim, the TF-IDF of n-grams
        whose terms (or medical-term synonyms) all occur in one sentence is
        summed and normalized by the total TF-IDF of that order; the score
        is the mean over available orders. Lies in [0, 1].
        """
        pc = self._claim(claim)
        pa = self._article(article)
        score, matched = _ir_fractions(pc, pa.sentence_sets, lambda i: 1.0)
        return ScoreDetail(article.id, claim.id, Method.IR, score, matched)

    def score_se(self, claim: Claim, article: Article, top_sentences: int = DEFAULT_TOP_SENTENCES) -> ScoreDetail:
        """Average of title similarity and mean top-K sentence similarity."""
        if self.embedder is None:
            raise ValueError("SE scoring requires an embedder")
        pa = self._article(article)
        if not pa.sentence_sets:
            raise ValueError(f"article {article.id!r} has an empty body")
        pc = self._claim(claim)
        title_cos = cosine(pc.emb, pa.title_emb)
        sent_cos = [cosine(pc.emb, e) for e in pa.sentence_embs]
        score = 0.5 * title_cos + 0.5 * _mean_top_k(sent_cos, top_sentences)
        matched = _top_k_indices(sent_cos, top_sentences)
        return ScoreDetail(article.id, claim.id, Method.SE, score, matched)

    def score_irse(
        self,
        claim: Claim,
        article: Article,
        prefilter_threshold: float = DEFAULT_PREFILTER,
        top_sentences: int = DEFAULT_TOP_SENTENCES,
    ) -> ScoreDetail:
        """IR matching with each n-gram weighted by sentence similarity.

        Only sentences whose cosine to the claim reaches both the adaptive
        cut (mean of title similarity and top-K sentence similarity) and
        the fixed prefilter threshold participate. A matched n-gram
        contributes tfidf x cosine of its best matching sentence; negative
        cosines clamp to 0 so the score stays in [0, 1].
        """
        if self.embedder is None:
            raise ValueError("IRSE scoring requires an embedder")
        pc = self._claim(claim)
        pa = self._article(article)
        sent_cos = [cosine(pc.emb, e) for e in pa.sentence_embs]
        title_cos = cosine(pc.emb, pa.title_emb)
        adaptive = 0.5 * title_cos + 0.5 * _mean_top_k(sent_cos, top_sentences)
        cut = max(adaptive, prefilter_threshold)

        def weight(i: int) -> float | None:
            if sent_cos[i] < cut:
                return None
            return min(1.0, max(0.0, sent_cos[i]))

        score, matched = _ir_fractions(pc, pa.sentence_sets, weight)
        return ScoreDetail(article.id, claim.id, Method.IRSE, score, matched)

    def score(self, claim: Claim, article: Article, cfg: PresenceConfig) -> ScoreDetail:
        if cfg.method == Method.IR:
            return self.score_ir(claim, article)
        if cfg.method == Method.SE:
            return self.score_se(claim, article, cfg.top_sentences)
        return self.score_irse(claim, article, cfg.prefilter_threshold, cfg.top_sentences)

    def classify_pair(self, claim: Claim, article: Article, cfg: PresenceConfig) -> PresenceResult:
        return classify(self.score(claim, article, cfg), cfg)


def classify(detail: ScoreDetail, cfg: PresenceConfig) -> PresenceResult:
    """Threshold a score into Present/NotPresent.

    The comparison is >= so ties land on Present, which keeps
    :func:`calibrate_threshold` well-defined.
    """
    decision = (
        Presence.PRESENT
        if detail.score >= cfg.effective_threshold
        else Presence.NOT_PRESENT
    )
    return PresenceResult(
        article_id=detail.article_id,
        claim_id=detail.claim_id,
        method=detail.method,
        score=detail.score,
        decision=decision,
        matched_sentences=detail.matched_sentences,
    )


def calibrate_threshold(
    scored_pairs: Sequence[tuple[float, bool]],
    target_recall: float,
) -> float:
    """Largest threshold achieving the target recall on gold-Present pairs.

    ``scored_pairs`` are (score, gold_is_present) tuples. Raises when no
    threshold can reach the target (more than every positive retrieved).
    """
    positives = sorted((s for s, gold in scored_pairs if gold), reverse=True)
    if not positives:
        raise ValueError("calibration needs at least one gold-Present pair")
    total = len(positives)
    for rank, threshold in enumerate(positives, start=1):
        if rank / total >= target_recall:
            return threshold
    raise ValueError(
        f"target recall {target_recall} unachievable (max recall 1.0 at threshold "
        f"{positives[-1]})"
    )


def predict_labels(
    index: CorpusIndex,
    claims: Iterable[Claim],
    cfg: PresenceConfig,
    embedder: WordVectorEmbedder | None = None,
    syn_cfg: SynonymConfig | None = None,
) -> list[PairLabel]:
    """Batch scoring: BM25 candidate retrieval, then full method scoring.

    Emits one Predicted pair label per (claim, candidate article) with the
    raw presence score attached, including below-threshold pairs so users
    can re-threshold for recall.
    """
    scorer = PresenceScorer(index.stats, embedder, syn_cfg)
    labels: list[PairLabel] = []
    for claim in sorted(claims, key=lambda c: c.id):
        for article_id, _ in retrieve_candidates(claim, index):
            result = scorer.classify_pair(claim, index.articles[article_id], cfg)
            labels.append(
                PairLabel(
                    article_id=article_id,
                    claim_id=claim.id,
                    presence=result.decision,
                    origin=LabelOrigin.PREDICTED,
                    presence_score=result.score,
                )
            )
    return labels


# -- convenience single-shot wrappers (pure functions over fresh state) ----

def score_ir(
    claim: Claim,
    article: Article,
    stats: CorpusStats,
    syn_cfg: SynonymConfig | None = None,
    embedder: WordVectorEmbedder | None = None,
) -> float:
    return PresenceScorer(stats, embedder, syn_cfg).score_ir(claim, article).score


def score_se(
    claim: Claim,
    article: Article,
    embedder: WordVectorEmbedder,
    top_sentences: int = DEFAULT_TOP_SENTENCES,
) -> float:
    stats = CorpusStats([])
    return PresenceScorer(stats, embedder).score_se(claim, article, top_sentences).score


def score_irse(
    claim: Claim,
    article: Article,
    stats: CorpusStats,
    embedder: WordVectorEmbedder,
    cfg: PresenceConfig | None = None,
) -> float:
    cfg = cfg or PresenceConfig(method=Method.IRSE)
    scorer = PresenceScorer(stats, embedder, None)
    return scorer.score_irse(claim, article, cfg.prefilter_threshold, cfg.top_sentences).score
