"""Combine article stance with claim veracity into pair veracity labels.

Pure functions throughout. A supporting article inherits the claim's
rating, a contradicting one the opposite rating, a neutral one is unknown;
an unknown claim rating makes the pair unknown regardless of stance. The
module never produces whole-article verdicts, only per-pair labels.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping

from .store import Claim, CorpusStore, PairLabel, Reliability, Stance, VeracityRating

# opposite is an involution; Mixture and Unknown map to themselves
_OPPOSITE = {
    VeracityRating.FALSE: VeracityRating.TRUE,
    VeracityRating.TRUE: VeracityRating.FALSE,
    VeracityRating.MOSTLY_FALSE: VeracityRating.MOSTLY_TRUE,
    VeracityRating.MOSTLY_TRUE: VeracityRating.MOSTLY_FALSE,
    VeracityRating.MIXTURE: VeracityRating.MIXTURE,
    VeracityRating.UNKNOWN: VeracityRating.UNKNOWN,
}


def opposite(rating: VeracityRating) -> VeracityRating:
    return _OPPOSITE[rating]


def combine(stance: Stance, claim_rating: VeracityRating) -> VeracityRating:
    """Pair veracity from article stance and claim rating."""
    if claim_rating == VeracityRating.UNKNOWN:
        return VeracityRating.UNKNOWN
    if stance == Stance.SUPPORTING:
        return claim_rating
    if stance == Stance.CONTRADICTING:
        return opposite(claim_rating)
    return VeracityRating.UNKNOWN


@dataclass(frozen=True)
class PairVeracity:
    article_id: str
    claim_id: str
    value: VeracityRating


def assign_pair_veracities(
    labels: Iterable[PairLabel],
    claims: Mapping[str, Claim],
) -> list[PairLabel]:
    """Fill ``pair_veracity`` on every label that carries a stance."""
    out: list[PairLabel] = []
    for label in labels:
        if label.stance is None:
            out.append(label)
            continue
        rating = combine(label.stance, claims[label.claim_id].rating)
        out.append(replace(label, pair_veracity=rating))
    return out


def percent(count: int, total: int, precision: int = 2) -> float:
    """Share as a percentage, rounded half-up to ``precision`` decimals."""
    if total == 0:
        return 0.0
    exp = Decimal(1).scaleb(-precision)
    value = (Decimal(count) * 100 / Decimal(total)).quantize(exp, rounding=ROUND_HALF_UP)
    return float(value)


def _distribution(values: list[str], precision: int) -> dict:
    counts: dict[str, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    total = len(values)
    return {
        "total": total,
        "counts": dict(sorted(counts.items())),
        "percent": {k: percent(n, total, precision) for k, n in sorted(counts.items())},
    }


_TRUEISH = frozenset({VeracityRating.TRUE, VeracityRating.MOSTLY_TRUE})
_FALSEISH = frozenset({VeracityRating.FALSE, VeracityRating.MOSTLY_FALSE})


def _article_bucket(ratings: list[VeracityRating]) -> str:
    has_true = any(r in _TRUEISH or r == VeracityRating.MIXTURE for r in ratings)
    has_false = any(r in _FALSEISH or r == VeracityRating.MIXTURE for r in ratings)
    if has_true and has_false:
        return "true_false_mixture"
    if has_true:
        return "only_true"
    if has_false:
        return "only_false"
    return "unknown_only"


def label_report(
    labels: Iterable[PairLabel],
    store: CorpusStore,
    precision: int = 2,
) -> dict:
    """Corpus-level distribution report over pair labels.

    Sections: article stance distribution, pair-veracity distribution,
    per-article rollups (articles mapped only to true labels, only to
    false, to a mixture of both, or only to unknowns), and the share of
    veracity labels by source reliability. Percentages are rounded
    half-up; each section's percentages sum to 100 up to that rounding.
    """
    labels = assign_pair_veracities(list(labels), store.claims)
    stance_values = [l.stance.value for l in labels if l.stance is not None]
    veracity_values = [
        l.pair_veracity.value for l in labels if l.pair_veracity is not None
    ]

    by_article: dict[str, list[VeracityRating]] = {}
    for l in labels:
        if l.pair_veracity is not None:
            by_article.setdefault(l.article_id, []).append(l.pair_veracity)
    rollup_counts: dict[str, int] = {
        "only_true": 0, "only_false": 0, "true_false_mixture": 0, "unknown_only": 0,
    }
    for ratings in by_article.values():
        rollup_counts[_article_bucket(ratings)] += 1
    mapped_articles = len(by_article)

    reliability: dict[str, dict] = {}
    labelled = [l for l in labels if l.pair_veracity is not None]
    for rel in Reliability:
        rel_labels = []
        for l in labelled:
            article = store.articles.get(l.article_id)
            source = store.sources.get(article.source_id) if article else None
            source_rel = source.reliability if source else Reliability.UNKNOWN
            if source_rel == rel:
                rel_labels.append(l)
        reliability[rel.value] = {
            "count": len(rel_labels),
            "percent_of_labels": percent(len(rel_labels), len(labelled), precision),
            "veracity_percent": {
                k: v
                for k, v in _distribution(
                    [l.pair_veracity.value for l in rel_labels], precision
                )["percent"].items()
            },
        }

    return {
        "stance": _distribution(stance_values, precision),
        "pair_veracity": _distribution(veracity_values, precision),
        "article_rollup": {
            "total_articles": mapped_articles,
            "counts": rollup_counts,
            "percent": {
                k: percent(n, mapped_articles, precision) for k, n in rollup_counts.items()
            },
        },
        "reliability": reliability,
    }


def format_report(report: dict) -> str:
    """Human-readable mirror of :func:`label_report` output."""
    lines: list[str] = []

    def section(title: str, dist: dict) -> None:
        lines.append(f"{title} (n={dist['total']})")
        for key, count in dist["counts"].items():
            lines.append(f"  {key:<20} {count:>6}  {dist['percent'][key]:>6}%")

    section("Article stance", report["stance"])
    section("Pair veracity", report["pair_veracity"])
    rollup = report["article_rollup"]
    lines.append(f"Articles with labels (n={rollup['total_articles']})")
    for key, count in rollup["counts"].items():
        lines.append(f"  {key:<20} {count:>6}  {rollup['percent'][key]:>6}%")
    lines.append("Labels by source reliability")
    for rel, entry in report["reliability"].items():
        lines.append(
            f"  {rel:<12} {entry['count']:>6}  {entry['percent_of_labels']:>6}% of labels"
        )
        for rating, share in entry["veracity_percent"].items():
            lines.append(f"      {rating:<18} {share:>6}%")
    return "\n".join(lines)
