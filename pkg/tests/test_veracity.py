from __future__ import annotations

import pytest

from factlink.store import (
    Article,
    Claim,
    CorpusStore,
    LabelOrigin,
    PairLabel,
    Presence,
    Reliability,
    Source,
    Stance,
    VeracityRating,
)
from factlink.veracity import (
    assign_pair_veracities,
    combine,
    format_report,
    label_report,
    opposite,
    percent,
)

R = VeracityRating


class TestCombine:
    def test_supporting_inherits_claim_rating(self):
        assert combine(Stance.SUPPORTING, R.FALSE) == R.FALSE
        assert combine(Stance.SUPPORTING, R.MOSTLY_TRUE) == R.MOSTLY_TRUE

    def test_contradicting_flips_rating(self):
        assert combine(Stance.CONTRADICTING, R.FALSE) == R.TRUE
        assert combine(Stance.CONTRADICTING, R.MOSTLY_TRUE) == R.MOSTLY_FALSE

    def test_neutral_is_unknown(self):
        for rating in R:
            assert combine(Stance.NEUTRAL, rating) == R.UNKNOWN

    def test_unknown_claim_rating_dominates(self):
        for stance in Stance:
            assert combine(stance, R.UNKNOWN) == R.UNKNOWN

    def test_opposite_is_involution(self):
        for rating in R:
            assert opposite(opposite(rating)) == rating

    def test_full_table(self):
        expected = {
            (Stance.SUPPORTING, R.FALSE): R.FALSE,
            (Stance.SUPPORTING, R.MOSTLY_FALSE): R.MOSTLY_FALSE,
            (Stance.SUPPORTING, R.MIXTURE): R.MIXTURE,
            (Stance.SUPPORTING, R.MOSTLY_TRUE): R.MOSTLY_TRUE,
            (Stance.SUPPORTING, R.TRUE): R.TRUE,
            (Stance.SUPPORTING, R.UNKNOWN): R.UNKNOWN,
            (Stance.CONTRADICTING, R.FALSE): R.TRUE,
            (Stance.CONTRADICTING, R.MOSTLY_FALSE): R.MOSTLY_TRUE,
            (Stance.CONTRADICTING, R.MIXTURE): R.MIXTURE,
            (Stance.CONTRADICTING, R.MOSTLY_TRUE): R.MOSTLY_FALSE,
            (Stance.CONTRADICTING, R.TRUE): R.FALSE,
            (Stance.CONTRADICTING, R.UNKNOWN): R.UNKNOWN,
            (Stance.NEUTRAL, R.FALSE): R.UNKNOWN,
            (Stance.NEUTRAL, R.MOSTLY_FALSE): R.UNKNOWN,
            (Stance.NEUTRAL, R.MIXTURE): R.UNKNOWN,
            (Stance.NEUTRAL, R.MOSTLY_TRUE): R.UNKNOWN,
            (Stance.NEUTRAL, R.TRUE): R.UNKNOWN,
            (Stance.NEUTRAL, R.UNKNOWN): R.UNKNOWN,
        }
        for (stance, rating), want in expected.items():
            assert combine(stance, rating) == want


def _report_store():
    store = CorpusStore()
    store.upsert_source(Source(id="rel", name="R", reliability=Reliability.RELIABLE))
    store.upsert_source(Source(id="unrel", name="U", reliability=Reliability.UNRELIABLE))
    store.upsert_claim(Claim(id="cf", statement="A false claim.", rating=R.FALSE))
    store.upsert_claim(Claim(id="ct", statement="A true claim.", rating=R.TRUE))
    for aid, src in [("a1", "rel"), ("a2", "unrel"), ("a3", "unrel")]:
        store.upsert_article(
            Article(id=aid, source_id=src, url="", title=aid, body="Text body.")
        )
    return store


def _label(article, claim, stance):
    return PairLabel(
        article_id=article, claim_id=claim, presence=Presence.PRESENT,
        stance=stance, origin=LabelOrigin.PREDICTED,
    )


class TestLabelReport:
    def test_stance_percentages(self):
        store = _report_store()
        labels = [
            _label("a1", "cf", Stance.SUPPORTING),
            _label("a2", "cf", Stance.SUPPORTING),
            _label("a3", "cf", Stance.SUPPORTING),
            _label("a1", "ct", Stance.CONTRADICTING),
        ]
        report = label_report(labels, store)
        assert report["stance"]["percent"]["supporting"] == 75.0
        assert report["stance"]["percent"]["contradicting"] == 25.0

    def test_empty_labels_all_zero(self):
        report = label_report([], _report_store())
        assert report["stance"]["total"] == 0
        assert report["pair_veracity"]["counts"] == {}
        assert report["article_rollup"]["total_articles"] == 0

    def test_mixed_article_rollup(self):
        store = _report_store()
        labels = [
            _label("a1", "cf", Stance.SUPPORTING),   # false
            _label("a1", "ct", Stance.SUPPORTING),   # true -> a1 mixed
            _label("a2", "ct", Stance.SUPPORTING),   # true only
            _label("a3", "cf", Stance.SUPPORTING),   # false only
        ]
        report = label_report(labels, store)
        rollup = report["article_rollup"]["counts"]
        assert rollup["true_false_mixture"] == 1
        assert rollup["only_true"] == 1
        assert rollup["only_false"] == 1

    def test_reliability_crosstab(self):
        store = _report_store()
        labels = [
            _label("a1", "cf", Stance.SUPPORTING),
            _label("a2", "cf", Stance.SUPPORTING),
            _label("a3", "ct", Stance.SUPPORTING),
        ]
        report = label_report(labels, store)
        rel = report["reliability"]
        assert rel["reliable"]["count"] == 1
        assert rel["unreliable"]["count"] == 2
        assert rel["unreliable"]["veracity_percent"]["false"] == 50.0

    def test_percentages_sum_to_100(self):
        store = _report_store()
        labels = [
            _label("a1", "cf", Stance.SUPPORTING),
            _label("a2", "cf", Stance.CONTRADICTING),
            _label("a3", "ct", Stance.NEUTRAL),
        ]
        report = label_report(labels, store)
        for section in ("stance", "pair_veracity"):
            total = sum(report[section]["percent"].values())
            assert total == pytest.approx(100.0, abs=0.05)

    def test_format_report_is_printable(self):
        store = _report_store()
        labels = [_label("a1", "cf", Stance.SUPPORTING)]
        text = format_report(label_report(labels, store))
        assert "Article stance" in text
        assert "supporting" in text


class TestAssignVeracities:
    def test_fills_stanceful_labels_only(self):
        store = _report_store()
        labels = [
            _label("a1", "cf", Stance.SUPPORTING),
            PairLabel(
                article_id="a2", claim_id="cf",
                presence=Presence.NOT_PRESENT, origin=LabelOrigin.PREDICTED,
            ),
        ]
        out = assign_pair_veracities(labels, store.claims)
        assert out[0].pair_veracity == R.FALSE
        assert out[1].pair_veracity is None


def test_percent_rounds_half_up():
    assert percent(1, 8, 1) == 12.5
    assert percent(1, 3, 2) == 33.33
    assert percent(1, 16, 2) == 6.25
    assert percent(5, 8, 0) == 63.0  # 62.5 rounds up, not to even
    assert percent(0, 0) == 0.0
