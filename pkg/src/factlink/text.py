"""Shared NLP primitives: tokenization, n-grams, TF-IDF, BM25, embeddings.

Everything here is pure after construction; ``CorpusStats`` and ``Lexicon``
are immutable once built and safe to share across threads.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

# Words guarding a '.' from being treated as a sentence boundary.
ABBREVIATIONS = frozenset({
    "e.g", "i.e", "etc", "cf", "vs", "al", "approx",
    "dr", "mr", "mrs", "ms", "prof", "st", "jr", "sr",
    "no", "fig", "inc", "ltd", "dept", "col",
})

# Applied only to BM25 query unigrams; claim n-grams are matched literally.
STOPWORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "been", "but", "by", "can",
    "do", "does", "for", "from", "had", "has", "have", "he", "her", "his",
    "i", "if", "in", "into", "is", "it", "its", "me", "my", "no", "not",
    "of", "on", "or", "our", "she", "so", "than", "that", "the", "their",
    "them", "then", "there", "these", "they", "this", "to", "was", "we",
    "were", "what", "when", "which", "who", "will", "with", "would", "you",
})

_SENT_END = frozenset(".!?")
_NON_WORD = re.compile(r"[^\w]+", re.UNICODE)

NGram = tuple[str, ...]


@dataclass(frozen=True)
class TokenizedText:
    """Lowercased tokens plus sentence structure.

    ``sentence_spans`` are end-exclusive (start, end) token-index pairs;
    they are ordered, non-overlapping and cover all tokens.
    ``sentence_char_spans`` are the matching character offsets into the
    original text (used for highlighting).
    """

    tokens: tuple[str, ...]
    sentence_spans: tuple[tuple[int, int], ...]
    sentence_char_spans: tuple[tuple[int, int], ...] = ()

    @property
    def n_sentences(self) -> int:
        return len(self.sentence_spans)

    def sentence_tokens(self, i: int) -> tuple[str, ...]:
        start, end = self.sentence_spans[i]
        return self.tokens[start:end]

    def sentences(self) -> list[tuple[str, ...]]:
        return [self.sentence_tokens(i) for i in range(self.n_sentences)]


def _word_before(text: str, pos: int) -> str:
    """Whitespace-delimited chunk ending just before ``pos``, lowercased."""
    start = pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    return text[start:pos].lower()


def _sentence_ranges(text: str) -> list[tuple[int, int]]:
    """Character ranges of sentences.

    A run of ``.!?`` ends a sentence when followed by whitespace and an
    uppercase letter, or by end of text. A '.' after a known abbreviation
    never ends a sentence.
    """
    ranges: list[tuple[int, int]] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        if text[i] in _SENT_END:
            run_start = i
            while i + 1 < n and text[i + 1] in _SENT_END:
                i += 1
            # look past the punctuation run for whitespace + capital
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            at_end = j >= n
            next_cap = j < n and j > i + 1 and text[j].isupper()
            guarded = (
                text[run_start] == "."
                and run_start == i  # only a lone '.' can be an abbreviation dot
                and _word_before(text, run_start).lstrip("([\"'") in ABBREVIATIONS
            )
            if (at_end or next_cap) and not guarded:
                ranges.append((start, i + 1))
                start = j
                i = j
                continue
        i += 1
    if start < n and text[start:].strip():
        ranges.append((start, n))
    return ranges


def _clean_token(chunk: str) -> str:
    return _NON_WORD.sub("", chunk).lower()


def tokenize(text: str) -> TokenizedText:
    """Segment into sentences and lowercase word tokens.

    Tokens are whitespace-delimited chunks with punctuation stripped;
    chunks that are pure punctuation disappear, and sentences left with
    no tokens are dropped. Deterministic for a fixed input.
    """
    tokens: list[str] = []
    spans: list[tuple[int, int]] = []
    char_spans: list[tuple[int, int]] = []
    for cs, ce in _sentence_ranges(text):
        sent_tokens = [t for t in (_clean_token(c) for c in text[cs:ce].split()) if t]
        if not sent_tokens:
            continue
        spans.append((len(tokens), len(tokens) + len(sent_tokens)))
        char_spans.append((cs, ce))
        tokens.extend(sent_tokens)
    return TokenizedText(tuple(tokens), tuple(spans), tuple(char_spans))


def extract_ngrams(claim: TokenizedText) -> dict[int, list[NGram]]:
    """All contiguous 1-, 2- and 3-grams of the claim, grouped by order.

    N-grams never cross sentence boundaries; duplicates are collapsed
    (first occurrence kept, so iteration order is deterministic).
    """
    if not claim.tokens:
        raise ValueError("cannot extract n-grams from an empty claim")
    grouped: dict[int, list[NGram]] = {1: [], 2: [], 3: []}
    for n in (1, 2, 3):
        seen: set[NGram] = set()
        for sent in claim.sentences():
            for i in range(len(sent) - n + 1):
                gram = tuple(sent[i:i + n])
                if gram not in seen:
                    seen.add(gram)
                    grouped[n].append(gram)
    return grouped


def _count_occurrences(ngram: NGram, text: TokenizedText) -> int:
    n = len(ngram)
    count = 0
    for sent in text.sentences():
        for i in range(len(sent) - n + 1):
            if tuple(sent[i:i + n]) == ngram:
                count += 1
    return count


class CorpusStats:
    """Document counts and document frequencies over a tokenized corpus.

    Unigram document frequencies are precomputed; higher-order n-gram
    frequencies are resolved lazily (only n-grams that actually appear in
    claims are ever requested, a corpus-wide bigram/trigram table would be
    quadratic waste). Logically immutable; the lazy cache only memoizes.
    """

    def __init__(self, docs: Iterable[TokenizedText]):
        self._doc_sentences: list[list[NGram]] = []
        self._doc_lengths: list[int] = []
        self._unigram_df: Counter[str] = Counter()
        for doc in docs:
            sents = doc.sentences()
            self._doc_sentences.append(sents)
            self._doc_lengths.append(len(doc.tokens))
            self._unigram_df.update(set(doc.tokens))
        self.document_count = len(self._doc_sentences)
        self.avg_doc_length = (
            sum(self._doc_lengths) / self.document_count if self.document_count else 0.0
        )
        self._ngram_df_cache: dict[NGram, int] = {}

    def doc_freq(self, ngram: NGram) -> int:
        """Number of documents containing ``ngram`` contiguously within a sentence."""
        if len(ngram) == 1:
            return self._unigram_df.get(ngram[0], 0)
        cached = self._ngram_df_cache.get(ngram)
        if cached is not None:
            return cached
        n = len(ngram)
        df = 0
        for sents in self._doc_sentences:
            if any(
                tuple(sent[i:i + n]) == ngram
                for sent in sents
                for i in range(len(sent) - n + 1)
            ):
                df += 1
        self._ngram_df_cache[ngram] = df
        return df


def tfidf(ngram: NGram, claim: TokenizedText, stats: CorpusStats) -> float:
    """TF within the claim times smoothed IDF over the article corpus.

    idf = ln((N + 1) / (df + 1)) + 1, strictly positive; unseen n-grams
    default to df = 0.
    """
    tf = _count_occurrences(ngram, claim)
    if tf == 0:
        return 0.0
    n = stats.document_count
    df = stats.doc_freq(ngram)
    return tf * (math.log((n + 1) / (df + 1)) + 1.0)


def bm25_score(
    query: TokenizedText,
    doc: TokenizedText,
    stats: CorpusStats,
    k1: float = 1.2,
    b: float = 0.75,
) -> float:
    """Okapi BM25 over unigram terms.

    Stopwords are dropped from the query; idf is floored at 0 so the score
    is monotone non-decreasing in term frequency.
    """
    if stats.document_count == 0 or stats.avg_doc_length == 0:
        return 0.0
    doc_tf = Counter(doc.tokens)
    dl = len(doc.tokens)
    norm = k1 * (1 - b + b * dl / stats.avg_doc_length)
    score = 0.0
    for term in sorted(set(query.tokens)):
        if term in STOPWORDS:
            continue
        tf = doc_tf.get(term, 0)
        if tf == 0:
            continue
        df = stats.doc_freq((term,))
        idf = max(0.0, math.log((stats.document_count - df + 0.5) / (df + 0.5)))
        score += idf * tf * (k1 + 1) / (tf + norm)
    return score


class Lexicon:
    """Immutable token -> vector table; all vectors share one dimension."""

    def __init__(self, vectors: dict[str, Sequence[float]]):
        if not vectors:
            raise ValueError("lexicon is empty")
        dims = {len(v) for v in vectors.values()}
        if len(dims) != 1:
            raise ValueError(f"inconsistent vector dimensions in lexicon: {sorted(dims)}")
        self.dim = dims.pop()
        self._vectors = {t: np.asarray(v, dtype=np.float64) for t, v in vectors.items()}

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        """Read a plain-text vector file.

        Optional first line ``<count> <dim>``, then one line per token:
        the token followed by whitespace-separated decimal components.
        """
        vectors: dict[str, list[float]] = {}
        declared_dim: int | None = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                if lineno == 1 and len(parts) == 2:
                    try:
                        int(parts[0])
                        declared_dim = int(parts[1])
                        continue
                    except ValueError:
                        pass
                token, comps = parts[0], parts[1:]
                try:
                    vec = [float(c) for c in comps]
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad vector component: {exc}") from None
                if declared_dim is not None and len(vec) != declared_dim:
                    raise ValueError(
                        f"{path}:{lineno}: vector for {token!r} has {len(vec)} "
                        f"components, expected {declared_dim}"
                    )
                vectors[token] = vec
        return cls(vectors)

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    def get(self, token: str) -> np.ndarray | None:
        return self._vectors.get(token)

    def terms(self) -> Iterable[str]:
        return self._vectors.keys()


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0.0 whenever either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


class WordVectorEmbedder:
    """Default sentence embedder: L2-normalized average of word vectors.

    Tokens outside the lexicon are skipped; a text with no in-lexicon
    tokens embeds to the zero vector (left unnormalized). Any embedder
    exposing ``dim`` and ``embed_tokens``/``embed`` can substitute for
    this one behind the same contract.
    """

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon
        self.dim = lexicon.dim

    def embed_tokens(self, tokens: Sequence[str]) -> np.ndarray:
        vecs = [self.lexicon.get(t) for t in tokens]
        vecs = [v for v in vecs if v is not None]
        if not vecs:
            return np.zeros(self.dim)
        mean = np.mean(vecs, axis=0)
        norm = float(np.linalg.norm(mean))
        if norm == 0.0:
            return np.zeros(self.dim)
        return mean / norm

    def embed(self, text: str) -> np.ndarray:
        return self.embed_tokens(tokenize(text).tokens)


def embed(text: str, lexicon: Lexicon) -> np.ndarray:
    """Convenience wrapper around :class:`WordVectorEmbedder`."""
    return WordVectorEmbedder(lexicon).embed(text)


@dataclass(frozen=True)
class SynonymConfig:
    """Synonym expansion settings for medical-term matching."""

    medical_terms: frozenset[str] = frozenset()
    top_k: int = 3
    min_cosine: float = 0.7

    def __post_init__(self):
        if self.top_k < 0:
            raise ValueError("top_k must be >= 0")
        if not -1.0 <= self.min_cosine <= 1.0:
            raise ValueError("min_cosine must lie in [-1, 1]")

    @classmethod
    def load_terms(cls, path: str | Path, **kwargs) -> "SynonymConfig":
        """Build a config from a term-list file (one lowercase term per line)."""
        terms = frozenset(
            line.strip().lower()
            for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        )
        return cls(medical_terms=terms, **kwargs)


def synonyms(term: str, cfg: SynonymConfig, lexicon: Lexicon) -> list[str]:
    """Nearest lexicon neighbours of a medical term.

    Non-medical terms and terms missing from the lexicon expand to nothing.
    Results are ordered by similarity (descending), then lexicographically,
    capped at ``cfg.top_k`` and filtered by ``cfg.min_cosine``.
    """
    if term not in cfg.medical_terms or cfg.top_k == 0:
        return []
    base = lexicon.get(term)
    if base is None:
        return []
    scored: list[tuple[float, str]] = []
    for other in lexicon.terms():
        if other == term:
            continue
        sim = cosine(base, lexicon.get(other))
        if sim >= cfg.min_cosine:
            scored.append((sim, other))
    scored.sort(key=lambda p: (-p[0], p[1]))
    return [t for _, t in scored[: cfg.top_k]]
