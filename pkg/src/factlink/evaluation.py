"""Metrics and experiment harness: P/R/F1, ROC, splits, repeated k-fold CV.

Folds and repeats are independent; results are keyed by (repeat, fold) so
assembly is order-independent.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

import numpy as np

from .presence import PresenceConfig, PresenceScorer, CorpusIndex
from .store import Claim, PairLabel, Presence, Split
from .text import SynonymConfig, WordVectorEmbedder


@dataclass
class ConfusionMatrix:
    """Square count matrix; rows are gold classes, columns predictions."""

    class_order: list
    counts: np.ndarray

    @classmethod
    def empty(cls, class_order: Sequence) -> "ConfusionMatrix":
        k = len(class_order)
        return cls(class_order=list(class_order), counts=np.zeros((k, k), dtype=np.int64))

    @classmethod
    def from_pairs(cls, gold: Sequence, predicted: Sequence, class_order: Sequence) -> "ConfusionMatrix":
        matrix = cls.empty(class_order)
        for g, p in zip(gold, predicted):
            matrix.add(g, p)
        return matrix

    def add(self, gold, predicted) -> None:
        self.counts[self.class_order.index(gold), self.class_order.index(predicted)] += 1

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def prf1(matrix: ConfusionMatrix) -> dict:
    """Per-class precision/recall/F1 plus plain accuracy; 0/0 counts as 0."""
    if matrix.total == 0:
        raise ValueError("empty confusion matrix")
    counts = matrix.counts
    out: dict = {"per_class": {}, "accuracy": float(np.trace(counts)) / matrix.total}
    for i, cls in enumerate(matrix.class_order):
        tp = float(counts[i, i])
        fp = float(counts[:, i].sum() - tp)
        fn = float(counts[i, :].sum() - tp)
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        key = getattr(cls, "value", cls)
        out["per_class"][key] = {"precision": precision, "recall": recall, "f1": f1}
    return out


def roc_points(scores: Sequence[float], gold: Sequence[int]) -> list[tuple[float, float]]:
    """(fpr, tpr) pairs: (0,0), then one point per distinct threshold.

    Thresholds sweep the distinct scores in descending order; samples
    scoring >= the threshold count as predicted positive, so tied scores
    flip together. Both rates are non-decreasing along the curve and the
    final point is (1,1).
    """
    if len(scores) != len(gold):
        raise ValueError("scores and gold must have equal length")
    positives = sum(1 for g in gold if g)
    negatives = len(gold) - positives
    if positives == 0 or negatives == 0:
        raise ValueError("ROC needs at least one positive and one negative")
    points: list[tuple[float, float]] = [(0.0, 0.0)]
    for threshold in sorted(set(scores), reverse=True):
        tp = sum(1 for s, g in zip(scores, gold) if s >= threshold and g)
        fp = sum(1 for s, g in zip(scores, gold) if s >= threshold and not g)
        points.append((fp / negatives, tp / positives))
    return points


GOLD_CLASS_ORDER = [Presence.PRESENT, Presence.NOT_PRESENT]


def _gold_presence(label: PairLabel) -> Presence:
    # Suggestive counts as Present for evaluation purposes
    if label.presence in (Presence.PRESENT, Presence.SUGGESTIVE):
        return Presence.PRESENT
    return Presence.NOT_PRESENT


@dataclass
class SplitMetrics:
    matrix: ConfusionMatrix
    metrics: dict
    scores: list[tuple[float, bool]] = field(default_factory=list)


@dataclass
class PresenceEvaluation:
    method: str
    per_split: dict[str, SplitMetrics]
    overall: SplitMetrics

    def to_json(self) -> dict:
        def enc(sm: SplitMetrics) -> dict:
            return {
                "confusion": sm.matrix.counts.tolist(),
                "class_order": [c.value for c in sm.matrix.class_order],
                **sm.metrics,
            }

        return {
            "method": self.method,
            "overall": enc(self.overall),
            "splits": {name: enc(sm) for name, sm in self.per_split.items()},
        }


def evaluate_presence(
    index: CorpusIndex,
    claims: dict[str, Claim],
    gold_labels: Sequence[PairLabel],
    cfg: PresenceConfig,
    embedder: WordVectorEmbedder | None = None,
    syn_cfg: SynonymConfig | None = None,
) -> PresenceEvaluation:
    """Score gold-labelled pairs and report metrics per split and overall.

    Gold Present includes Suggestive. Splits with no pairs are omitted
    with a warning. Raw (score, gold) pairs are kept on each SplitMetrics
    for ROC analysis.
    """
    scorer = PresenceScorer(index.stats, embedder, syn_cfg)
    by_split: dict[str, list[tuple[Presence, Presence, float]]] = {}
    all_rows: list[tuple[Presence, Presence, float]] = []
    for label in gold_labels:
        article = index.articles.get(label.article_id)
        if article is None:
            warnings.warn(
                f"gold pair references unscorable article {label.article_id!r}; skipped",
                stacklevel=2,
            )
            continue
        claim = claims[label.claim_id]
        result = scorer.classify_pair(claim, article, cfg)
        gold = _gold_presence(label)
        row = (gold, result.decision, result.score)
        by_split.setdefault(article.split.value, []).append(row)
        all_rows.append(row)

    def build(rows: list[tuple[Presence, Presence, float]]) -> SplitMetrics:
        matrix = ConfusionMatrix.from_pairs(
            [r[0] for r in rows], [r[1] for r in rows], GOLD_CLASS_ORDER
        )
        return SplitMetrics(
            matrix=matrix,
            metrics=prf1(matrix),
            scores=[(score, gold == Presence.PRESENT) for gold, _, score in rows],
        )

    per_split: dict[str, SplitMetrics] = {}
    for split in Split:
        rows = by_split.get(split.value, [])
        if not rows:
            if split != Split.UNSPLIT:
                warnings.warn(f"split {split.value!r} has no labelled pairs", stacklevel=2)
            continue
        per_split[split.value] = build(rows)
    if not all_rows:
        raise ValueError("no scorable gold pairs")
    return PresenceEvaluation(
        method=cfg.method.value, per_split=per_split, overall=build(all_rows)
    )


@dataclass(frozen=True)
class CVPlan:
    k: int = 5
    repeats: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


@dataclass
class CVResult:
    mean_accuracy: float
    std_accuracy: float
    fold_accuracies: dict[tuple[int, int], float]  # (repeat, fold) -> accuracy


Trainer = Callable[[list], Callable[[object], Hashable]]


def _stratified_folds(
    labels: list[Hashable], k: int, rng: np.random.Generator
) -> list[list[int]]:
    by_class: dict[Hashable, list[int]] = {}
    for i, y in enumerate(labels):
        by_class.setdefault(y, []).append(i)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for y in sorted(by_class, key=str):
        idx = np.array(by_class[y])
        rng.shuffle(idx)
        for j, i in enumerate(idx):
            folds[(offset + j) % k].append(int(i))
        offset += len(idx)
    return folds


def cross_validate(
    dataset: Sequence[tuple[object, Hashable]],
    trainer: Trainer,
    plan: CVPlan,
) -> CVResult:
    """Repeated stratified k-fold cross-validation of a trainer callable.

    ``trainer(train_rows)`` must return a predictor mapping a feature
    object to a label. Folds are stratified per repeat from seeded
    shuffles (deterministic for a fixed seed); classes with fewer members
    than k trigger a fallback to unstratified folds with a warning.
    """
    n = len(dataset)
    if n < plan.k:
        raise ValueError(f"dataset of {n} rows cannot be split into {plan.k} folds")
    labels = [y for _, y in dataset]
    class_counts: dict[Hashable, int] = {}
    for y in labels:
        class_counts[y] = class_counts.get(y, 0) + 1
    stratified = all(c >= plan.k for c in class_counts.values())
    if not stratified:
        warnings.warn(
            "a class has fewer members than k; falling back to unstratified folds",
            stacklevel=2,
        )
    rng = np.random.default_rng(plan.seed)
    fold_accuracies: dict[tuple[int, int], float] = {}
    for repeat in range(plan.repeats):
        if stratified:
            folds = _stratified_folds(labels, plan.k, rng)
        else:
            idx = np.arange(n)
            rng.shuffle(idx)
            folds = [list(map(int, part)) for part in np.array_split(idx, plan.k)]
        for fold_id, test_idx in enumerate(folds):
            test_set = set(test_idx)
            train_rows = [dataset[i] for i in range(n) if i not in test_set]
            predictor = trainer(train_rows)
            correct = sum(1 for i in test_idx if predictor(dataset[i][0]) == dataset[i][1])
            fold_accuracies[(repeat, fold_id)] = correct / len(test_idx) if test_idx else 0.0
    accs = np.array(list(fold_accuracies.values()))
    return CVResult(
        mean_accuracy=float(accs.mean()),
        std_accuracy=float(accs.std()),
        fold_accuracies=fold_accuracies,
    )
