from __future__ import annotations

import math

import numpy as np
import pytest

from factlink.presence import (
    CorpusIndex,
    Method,
    PresenceConfig,
    PresenceScorer,
    calibrate_threshold,
    classify,
    retrieve_candidates,
)
from factlink.store import Article, Claim, Presence
from factlink.text import (
    CorpusStats,
    Lexicon,
    SynonymConfig,
    WordVectorEmbedder,
    cosine,
    extract_ngrams,
    tfidf,
    tokenize,
)


def _article(body: str, title: str = "", id: str = "a", split=None) -> Article:
    return Article(id=id, source_id="s", url="", title=title, body=body)


def _claim(statement: str, id: str = "c") -> Claim:
    return Claim(id=id, statement=statement)


def _scorer(docs: list[str], lexicon=None, syn=None) -> PresenceScorer:
    stats = CorpusStats([tokenize(d) for d in docs])
    embedder = WordVectorEmbedder(lexicon) if lexicon else None
    return PresenceScorer(stats, embedder, syn)


CORPUS = [
    "Garlic cures cancer quickly. Doctors disagree strongly.",
    "Garlic soup comforts many. Cancer research continues.",
    "Plain cooking advice here. Nothing else to say.",
]


class TestScoreIr:
    def test_verbatim_claim_scores_one(self):
        scorer = _scorer(CORPUS)
        detail = scorer.score_ir(_claim("garlic cures cancer"), _article(CORPUS[0]))
        assert detail.score == 1.0
        assert detail.matched_sentences == (0,)

    def test_no_shared_terms_scores_zero(self):
        scorer = _scorer(CORPUS)
        detail = scorer.score_ir(_claim("garlic cures cancer"), _article(CORPUS[2]))
        assert detail.score == 0.0
        assert detail.matched_sentences == ()

    def test_partial_match_equals_brute_force(self):
        # article has garlic and cancer in one sentence but never "cures"
        article = _article("Garlic helps cancer patients somehow. Cooking is fun.")
        claim_text = "garlic cures cancer"
        scorer = _scorer(CORPUS)
        detail = scorer.score_ir(_claim(claim_text), article)

        # independent oracle: recompute every tfidf weight and fraction
        stats = CorpusStats([tokenize(d) for d in CORPUS])
        claim_tok = tokenize(claim_text)
        sentences = [set(s) for s in tokenize(article.body).sentences()]
        fractions = []
        for order, grams in extract_ngrams(claim_tok).items():
            if not grams:
                continue
            total = sum(tfidf(g, claim_tok, stats) for g in grams)
            matched = sum(
                tfidf(g, claim_tok, stats)
                for g in grams
                if any(all(t in sent for t in g) for sent in sentences)
            )
            fractions.append(matched / total)
        assert detail.score == pytest.approx(sum(fractions) / len(fractions), rel=1e-12)
        # only unigrams garlic and cancer match, so the score is well below 1
        assert 0.0 < detail.score < 0.35

    def test_empty_claim_errors(self):
        scorer = _scorer(CORPUS)
        with pytest.raises(ValueError):
            scorer.score_ir(_claim("..."), _article(CORPUS[0]))

    def test_synonym_substitution_matches(self):
        lex = Lexicon(
            {
                "vaccine": (1.0, 0.0, 0.0),
                "vaccination": (0.98, 0.19899749373532885, 0.0),
                "flu": (0.0, 0.0, 1.0),
            }
        )
        syn = SynonymConfig(medical_terms=frozenset({"vaccine"}), min_cosine=0.9)
        scorer = _scorer(["Vaccination prevents flu."], lexicon=lex, syn=syn)
        detail = scorer.score_ir(_claim("flu vaccine"), _article("Vaccination prevents flu."))
        assert detail.score == 1.0
        no_syn = _scorer(["Vaccination prevents flu."], lexicon=lex, syn=SynonymConfig())
        assert no_syn.score_ir(_claim("flu vaccine"), _article("Vaccination prevents flu.")).score < 1.0


# hand-set unit vectors: cosines against the claim are exact by construction
SE_LEXICON = Lexicon(
    {
        "q": (1.0, 0.0),
        "t": (0.8, 0.6),
        "s1": (0.6, 0.8),
        "s2": (0.2, math.sqrt(1 - 0.04)),
        "zero": (0.0, 0.0),
    }
)


class TestScoreSe:
    def test_identical_title_and_sentences(self):
        scorer = _scorer(["Q."], lexicon=SE_LEXICON)
        detail = scorer.score_se(_claim("q"), _article("Q. Q. Q.", title="q"))
        assert detail.score == pytest.approx(1.0)

    def test_orthogonal_everything(self):
        lex = Lexicon({"q": (1.0, 0.0), "x": (0.0, 1.0)})
        scorer = _scorer(["X."], lexicon=lex)
        detail = scorer.score_se(_claim("q"), _article("X. X.", title="x"))
        assert detail.score == pytest.approx(0.0)

    def test_hand_set_cosines(self):
        # cos(title)=0.8, sentence cosines {0.6, 0.2}, K=5 -> 0.5*0.8 + 0.5*0.4
        scorer = _scorer(["S1. S2."], lexicon=SE_LEXICON)
        detail = scorer.score_se(_claim("q"), _article("S1. S2.", title="t"), top_sentences=5)
        assert detail.score == pytest.approx(0.6, abs=1e-9)
        assert detail.matched_sentences == (0, 1)

    def test_empty_body_errors(self):
        scorer = _scorer(["S1."], lexicon=SE_LEXICON)
        with pytest.raises(ValueError):
            scorer.score_se(_claim("q"), _article("", title="t"))

    def test_top_k_limits_sentence_pool(self):
        scorer = _scorer(["S1."], lexicon=SE_LEXICON)
        detail = scorer.score_se(_claim("q"), _article("S1. S2.", title="t"), top_sentences=1)
        assert detail.score == pytest.approx(0.5 * 0.8 + 0.5 * 0.6, abs=1e-9)
        assert detail.matched_sentences == (0,)


class TestScoreIrse:
    def test_verbatim_with_identical_embedding_scores_one(self):
        lex = Lexicon({"garlic": (1.0, 0.0), "cures": (1.0, 0.0), "cancer": (1.0, 0.0)})
        scorer = _scorer(CORPUS, lexicon=lex)
        detail = scorer.score_irse(
            _claim("garlic cures cancer"),
            _article("Garlic cures cancer quickly.", title="garlic"),
        )
        assert detail.score == pytest.approx(1.0)

    def test_all_sentences_below_prefilter(self):
        # the sentence contains the claim verbatim but ten filler tokens
        # drag its embedding below the 0.25 prefilter: cos = 2/sqrt(104)
        lex = Lexicon({"q": (1.0, 0.0), "w": (1.0, 0.0), "f": (0.0, 1.0)})
        body = "Q w " + " ".join(["f"] * 10) + "."
        scorer = _scorer([body], lexicon=lex)
        detail = scorer.score_irse(
            _claim("q w"), _article(body, title="f"), prefilter_threshold=0.25
        )
        assert scorer.score_ir(_claim("q w"), _article(body, title="f")).score == 1.0
        assert detail.score == 0.0
        assert detail.matched_sentences == ()

    def test_single_matching_sentence_weights_by_cosine(self):
        # one sentence contains the claim verbatim and embeds at cosine 0.5
        lex = Lexicon({"q": (1.0, 0.0), "w": (0.5, math.sqrt(0.75))})
        docs = ["Q w here."]
        scorer = _scorer(docs, lexicon=lex)
        claim, article = _claim("q w"), _article("Q w.", title="q")
        ir = scorer.score_ir(claim, article).score
        irse = scorer.score_irse(claim, article, prefilter_threshold=0.0).score
        sentence_cos = cosine(
            WordVectorEmbedder(lex).embed("q w"), WordVectorEmbedder(lex).embed("q w")
        )
        assert sentence_cos == pytest.approx(1.0)
        # claim and sentence share the embedding, so weight is 1: irse == ir
        assert irse == pytest.approx(ir)

    def test_irse_equals_cosine_times_ir_for_uniform_weight(self):
        # all matched n-grams live in one eligible sentence with cosine w
        lex = Lexicon({"garlic": (1.0, 0.0, 0.0), "cures": (0.0, 1.0, 0.0), "cancer": (0.0, 0.0, 1.0)})
        scorer = _scorer(CORPUS, lexicon=lex)
        claim = _claim("garlic cures cancer")
        article = _article("Garlic cures cancer quickly.", title="zzz")
        ir = scorer.score_ir(claim, article).score
        irse = scorer.score_irse(claim, article, prefilter_threshold=0.0).score
        emb = WordVectorEmbedder(lex)
        w = cosine(emb.embed(claim.statement), emb.embed("garlic cures cancer quickly"))
        assert irse == pytest.approx(w * ir, rel=1e-9)


class TestClassify:
    def test_boundary_is_inclusive(self):
        cfg = PresenceConfig(method=Method.IRSE)
        from factlink.presence import ScoreDetail

        detail = ScoreDetail("a", "c", Method.IRSE, 0.45)
        assert classify(detail, cfg).decision == Presence.PRESENT

    def test_just_below_threshold(self):
        cfg = PresenceConfig(method=Method.IRSE)
        from factlink.presence import ScoreDetail

        detail = ScoreDetail("a", "c", Method.IRSE, 0.449)
        assert classify(detail, cfg).decision == Presence.NOT_PRESENT

    def test_full_score_present_under_all_defaults(self):
        from factlink.presence import ScoreDetail

        for method in Method:
            detail = ScoreDetail("a", "c", method, 1.0)
            assert classify(detail, PresenceConfig(method=method)).decision == Presence.PRESENT


class TestRetrieveCandidates:
    def test_two_thirds_cutoff(self):
        # corpus engineered so one article dominates; verify against the
        # cutoff arithmetic applied to independently computed scores
        articles = [
            _article("Garlic cures cancer. Garlic cures cancer again.", id="top"),
            _article("Garlic cures headaches sometimes.", id="mid"),
            _article("Nothing relevant at all here.", id="none"),
        ]
        index = CorpusIndex(articles)
        from factlink.text import bm25_score

        claim = _claim("garlic cures cancer")
        raw = {
            aid: bm25_score(tokenize(claim.statement), tok, index.stats)
            for aid, tok in index.tokenized.items()
        }
        kept = retrieve_candidates(claim, index)
        max_score = max(raw.values())
        expected = sorted(
            ((a, s) for a, s in raw.items() if s > max_score * 2 / 3),
            key=lambda p: (-p[1], p[0]),
        )
        assert kept == expected
        assert kept[0][0] == "top"

    def test_single_match_is_kept(self):
        articles = [
            _article("Garlic cures cancer.", id="only"),
            _article("Totally unrelated words.", id="other"),
            _article("More filler text here.", id="more"),
        ]
        kept = retrieve_candidates(_claim("garlic"), CorpusIndex(articles))
        assert [a for a, _ in kept] == ["only"]

    def test_no_overlap_gives_empty(self):
        articles = [_article("Nothing shared here.", id="a1")]
        assert retrieve_candidates(_claim("garlic"), CorpusIndex(articles)) == []

    def test_top_article_always_included(self):
        articles = [
            _article("Garlic cures cancer.", id="a1"),
            _article("Garlic soup with cancer research.", id="a2"),
            _article("Garlic only here.", id="a3"),
        ]
        index = CorpusIndex(articles)
        kept = retrieve_candidates(_claim("garlic cures cancer"), index)
        assert kept and kept[0][1] == max(s for _, s in kept)


class TestCalibrate:
    def test_enumerated_thresholds(self):
        pairs = [(0.9, True), (0.6, True), (0.3, True), (0.8, False)]
        assert calibrate_threshold(pairs, 0.66) == 0.6

    def test_zero_target_returns_max_positive(self):
        pairs = [(0.9, True), (0.6, True), (0.2, False)]
        assert calibrate_threshold(pairs, 0.0) == 0.9

    def test_all_ones(self):
        pairs = [(1.0, True), (1.0, True)]
        assert calibrate_threshold(pairs, 1.0) == 1.0

    def test_no_positives_errors(self):
        with pytest.raises(ValueError):
            calibrate_threshold([(0.5, False)], 0.4)

    def test_unachievable_target_errors(self):
        with pytest.raises(ValueError):
            calibrate_threshold([(0.5, True)], 1.5)


def _random_pair(rng, lexicon_words, dim=6):
    vocab = rng.choice(lexicon_words, size=rng.integers(2, 8), replace=True)
    claim_text = " ".join(vocab[: rng.integers(2, min(6, len(vocab)) + 1)])
    n_sentences = rng.integers(1, 7)
    sentences = []
    for _ in range(n_sentences):
        words = rng.choice(lexicon_words, size=rng.integers(2, 9), replace=True)
        sentences.append(" ".join(words).capitalize() + ".")
    return claim_text, " ".join(sentences)


@pytest.fixture(scope="module")
def random_lexicon():
    rng = np.random.default_rng(7)
    words = [f"w{i}" for i in range(30)]
    return Lexicon({w: rng.normal(size=5) for w in words}), words


class TestScoreProperties:

    def test_bounds_ordering_and_monotonicity(self, random_lexicon):
        lexicon, words = random_lexicon
        rng = np.random.default_rng(42)
        corpus = [" ".join(rng.choice(words, size=12)) for _ in range(8)]
        stats = CorpusStats([tokenize(t) for t in corpus])
        embedder = WordVectorEmbedder(lexicon)
        scorer = PresenceScorer(stats, embedder)
        cfg = PresenceConfig()
        for i in range(300):
            claim_text, body = _random_pair(rng, words)
            claim = _claim(claim_text, id=f"c{i}")
            title = " ".join(rng.choice(words, size=3))
            article = _article(body, title=title, id=f"a{i}")
            ir = scorer.score_ir(claim, article).score
            irse = scorer.score_irse(claim, article).score
            se = scorer.score_se(claim, article).score
            assert 0.0 <= ir <= 1.0
            assert 0.0 <= irse <= 1.0
            assert irse <= ir + 1e-12
            # appending the claim verbatim as a sentence never lowers scores
            extended = _article(
                body + " " + claim_text.capitalize() + ".", title=title, id=f"x{i}"
            )
            assert scorer.score_ir(claim, extended).score >= ir - 1e-12
            assert scorer.score_irse(claim, extended).score >= irse - 1e-12
            assert scorer.score_se(claim, extended).score >= se - 1e-12

    def test_sentence_reordering_invariance(self, random_lexicon):
        lexicon, words = random_lexicon
        rng = np.random.default_rng(99)
        corpus = [" ".join(rng.choice(words, size=10)) for _ in range(5)]
        stats = CorpusStats([tokenize(t) for t in corpus])
        embedder = WordVectorEmbedder(lexicon)
        for i in range(40):
            claim_text, body = _random_pair(rng, words)
            sentences = tokenize(body)
            parts = [
                body[a:b] for a, b in sentences.sentence_char_spans
            ]
            perm = list(rng.permutation(len(parts)))
            shuffled = " ".join(parts[j].strip() for j in perm)
            claim = _claim(claim_text, id=f"c{i}")
            title = "w0 w1"
            scorer = PresenceScorer(stats, embedder)
            for method_score in ("score_ir", "score_se", "score_irse"):
                original = getattr(scorer, method_score)(claim, _article(body, title, id=f"o{i}")).score
                reordered = getattr(scorer, method_score)(
                    claim, _article(shuffled, title, id=f"r{i}")
                ).score
                assert original == pytest.approx(reordered, abs=1e-9), method_score
