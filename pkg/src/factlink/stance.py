"""Stance classification: similarity windows, linear softmax model, transfer.

The classifier is a softmax head over pooled window embeddings trained by
mini-batch gradient descent. The relevant-part selection (most similar
sentences plus surrounding context) and the pretrain/fine-tune protocol are
the load-bearing parts; prediction is pure and parallelizable, training is
single-threaded and deterministic for a fixed seed.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .store import Article, Claim, Stance, atomic_write_text
from .text import WordVectorEmbedder, cosine, tokenize

CLASS_ORDER: tuple[Stance, ...] = (Stance.SUPPORTING, Stance.CONTRADICTING, Stance.NEUTRAL)

MODEL_FORMAT = "factlink-stance-model v1"


@dataclass(frozen=True)
class StanceWindow:
    """The article sentences most relevant to a claim, with context."""

    claim_id: str
    article_id: str
    sentence_indices: tuple[int, ...]
    sentence_texts: tuple[str, ...]

    @property
    def window_text(self) -> str:
        return " ".join(self.sentence_texts)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    learning_rate: float = 0.1
    batch_size: int = 16
    seed: int = 0
    l2: float = 0.0
    class_weighting: bool = False  # inverse-frequency weights for imbalance

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class StanceModel:
    weights: np.ndarray  # (3, d)
    bias: np.ndarray  # (3,)
    feature_dim: int
    class_order: tuple[Stance, ...] = CLASS_ORDER
    trained_on: str = "untrained"
    loss_history: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not np.all(np.isfinite(self.weights)) or not np.all(np.isfinite(self.bias)):
            raise ValueError("model weights must be finite")

    def copy(self) -> "StanceModel":
        return StanceModel(
            weights=self.weights.copy(),
            bias=self.bias.copy(),
            feature_dim=self.feature_dim,
            class_order=self.class_order,
            trained_on=self.trained_on,
            loss_history=list(self.loss_history),
        )


def build_window(
    claim: Claim,
    article: Article,
    embedder: WordVectorEmbedder,
    m: int = 3,
    ctx: int = 1,
) -> StanceWindow:
    """Select the m sentences most similar to the claim plus ctx neighbours.

    Neighbour ranges are clipped at article bounds and merged where they
    overlap; indices come back in document order.
    """
    tok = tokenize(article.body)
    if tok.n_sentences == 0:
        raise ValueError(f"article {article.id!r} has an empty body")
    claim_emb = embedder.embed(claim.statement)
    sims = [
        cosine(claim_emb, embedder.embed_tokens(tok.sentence_tokens(i)))
        for i in range(tok.n_sentences)
    ]
    ranked = sorted(range(len(sims)), key=lambda i: (-sims[i], i))
    picked = ranked[:m]
    indices: set[int] = set()
    last = tok.n_sentences - 1
    for i in picked:
        indices.update(range(max(0, i - ctx), min(last, i + ctx) + 1))
    ordered = tuple(sorted(indices))
    texts = tuple(
        article.body[tok.sentence_char_spans[i][0]:tok.sentence_char_spans[i][1]].strip()
        for i in ordered
    )
    return StanceWindow(
        claim_id=claim.id,
        article_id=article.id,
        sentence_indices=ordered,
        sentence_texts=texts,
    )


def featurize(claim: Claim | str, window: StanceWindow, embedder: WordVectorEmbedder) -> np.ndarray:
    """[claim embedding; mean window-sentence embedding; elementwise |diff|]."""
    statement = claim.statement if isinstance(claim, Claim) else claim
    c = embedder.embed(statement)
    sent_embs = [embedder.embed(s) for s in window.sentence_texts]
    w = np.mean(sent_embs, axis=0) if sent_embs else np.zeros(embedder.dim)
    return np.concatenate([c, w, np.abs(c - w)])


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=-1, keepdims=True)


def loss_and_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    l2: float = 0.0,
    sample_weights: np.ndarray | None = None,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Weighted mean cross-entropy of softmax(Wx+b) with L2 on the weights.

    ``x`` is (n, d), ``y`` integer class indices (n,). The bias carries no
    penalty. Returns (loss, dW, db); exposed so tests can check the
    analytic gradient against finite differences.
    """
    n = x.shape[0]
    if sample_weights is None:
        sample_weights = np.ones(n)
    wsum = float(np.sum(sample_weights))
    logits = x @ weights.T + bias
    probs = softmax(logits)
    eps = 1e-300  # log(0) guard; softmax is strictly positive in exact math
    picked = np.clip(probs[np.arange(n), y], eps, None)
    loss = float(-np.sum(sample_weights * np.log(picked)) / wsum)
    loss += l2 * float(np.sum(weights * weights))
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta *= sample_weights[:, None]
    grad_w = delta.T @ x / wsum + 2.0 * l2 * weights
    grad_b = np.sum(delta, axis=0) / wsum
    return loss, grad_w, grad_b


def _as_arrays(
    dataset: Sequence[tuple[np.ndarray, Stance]],
    class_order: tuple[Stance, ...],
) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray([np.asarray(f, dtype=np.float64) for f, _ in dataset])
    index = {c: i for i, c in enumerate(class_order)}
    y = np.asarray([index[s] for _, s in dataset], dtype=np.int64)
    return x, y


def _class_weights(y: np.ndarray, n_classes: int) -> np.ndarray:
    counts = np.bincount(y, minlength=n_classes).astype(np.float64)
    safe = np.where(counts > 0, counts, 1.0)
    per_class = len(y) / (n_classes * safe)
    return per_class[y]


def _descend(
    weights: np.ndarray,
    bias: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    cfg: TrainConfig,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    sample_weights = (
        _class_weights(y, weights.shape[0]) if cfg.class_weighting else np.ones(len(y))
    )
    history: list[float] = []
    for _ in range(cfg.epochs):
        perm = rng.permutation(len(y))
        for start in range(0, len(y), cfg.batch_size):
            batch = perm[start:start + cfg.batch_size]
            _, gw, gb = loss_and_grad(
                weights, bias, x[batch], y[batch], cfg.l2, sample_weights[batch]
            )
            weights = weights - cfg.learning_rate * gw
            bias = bias - cfg.learning_rate * gb
        epoch_loss, _, _ = loss_and_grad(weights, bias, x, y, cfg.l2, sample_weights)
        history.append(epoch_loss)
    return weights, bias, history


def train(
    dataset: Sequence[tuple[np.ndarray, Stance]],
    cfg: TrainConfig,
    provenance: str = "scratch",
) -> StanceModel:
    """Fit the softmax head from a fresh seeded initialization.

    Weights start uniform in [-0.01, 0.01]; identical seeds give
    bit-identical models. A single-class dataset trains but warns.
    """
    if not dataset:
        raise ValueError("training dataset is empty")
    x, y = _as_arrays(dataset, CLASS_ORDER)
    if len(set(y.tolist())) < 2:
        warnings.warn("training data contains a single stance class", stacklevel=2)
    d = x.shape[1]
    rng = np.random.default_rng(cfg.seed)
    weights = rng.uniform(-0.01, 0.01, size=(len(CLASS_ORDER), d))
    bias = np.zeros(len(CLASS_ORDER))
    weights, bias, history = _descend(weights, bias, x, y, cfg, rng)
    return StanceModel(
        weights=weights,
        bias=bias,
        feature_dim=d,
        trained_on=f"{provenance}(n={len(y)},epochs={cfg.epochs},seed={cfg.seed})",
        loss_history=history,
    )


def fine_tune(
    model: StanceModel,
    dataset: Sequence[tuple[np.ndarray, Stance]],
    cfg: TrainConfig,
    provenance: str = "finetune",
) -> StanceModel:
    """Continue gradient descent from an existing model's weights.

    No reinitialization; provenance records both phases. Zero epochs
    returns a copy identical to the input.
    """
    if not dataset:
        raise ValueError("fine-tuning dataset is empty")
    x, y = _as_arrays(dataset, model.class_order)
    if x.shape[1] != model.feature_dim:
        raise ValueError(
            f"feature dimension mismatch: model has {model.feature_dim}, data has {x.shape[1]}"
        )
    rng = np.random.default_rng(cfg.seed)
    weights, bias, history = _descend(
        model.weights.copy(), model.bias.copy(), x, y, cfg, rng
    )
    return StanceModel(
        weights=weights,
        bias=bias,
        feature_dim=model.feature_dim,
        class_order=model.class_order,
        trained_on=f"{model.trained_on} + {provenance}(n={len(y)},epochs={cfg.epochs},seed={cfg.seed})",
        loss_history=model.loss_history + history,
    )


def predict_features(model: StanceModel, features: np.ndarray) -> tuple[Stance, np.ndarray]:
    """(label, probabilities) for a prebuilt feature vector.

    Probabilities are strictly positive and sum to 1; argmax ties break
    toward the earliest class in the model's class order.
    """
    features = np.asarray(features, dtype=np.float64)
    if features.shape[0] != model.feature_dim:
        raise ValueError(
            f"feature dimension mismatch: model has {model.feature_dim}, got {features.shape[0]}"
        )
    probs = softmax(model.weights @ features + model.bias)
    return model.class_order[int(np.argmax(probs))], probs


def predict(
    model: StanceModel,
    claim: Claim,
    article: Article,
    embedder: WordVectorEmbedder,
    m: int = 3,
    ctx: int = 1,
) -> tuple[Stance, np.ndarray]:
    """Window, featurize and classify one article-claim pair."""
    window = build_window(claim, article, embedder, m=m, ctx=ctx)
    return predict_features(model, featurize(claim, window, embedder))


# -- model persistence (versioned decimal text) -----------------------------

def save_model(model: StanceModel, path: str | Path) -> None:
    lines = [
        MODEL_FORMAT,
        f"feature_dim {model.feature_dim}",
        "classes " + " ".join(c.value for c in model.class_order),
        f"trained_on {model.trained_on}",
    ]
    for row in model.weights:
        lines.append("w " + " ".join(repr(float(v)) for v in row))
    lines.append("b " + " ".join(repr(float(v)) for v in model.bias))
    atomic_write_text(path, "\n".join(lines) + "\n")


def load_model(path: str | Path) -> StanceModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MODEL_FORMAT:
        raise ValueError(f"{path}: not a {MODEL_FORMAT!r} file")
    header: dict[str, str] = {}
    weights_rows: list[list[float]] = []
    bias: list[float] | None = None
    for line in lines[1:]:
        if not line.strip():
            continue
        key, _, rest = line.partition(" ")
        if key == "w":
            weights_rows.append([float(v) for v in rest.split()])
        elif key == "b":
            bias = [float(v) for v in rest.split()]
        else:
            header[key] = rest
    if bias is None or not weights_rows:
        raise ValueError(f"{path}: missing weights or bias")
    class_order = tuple(Stance(v) for v in header["classes"].split())
    return StanceModel(
        weights=np.asarray(weights_rows, dtype=np.float64),
        bias=np.asarray(bias, dtype=np.float64),
        feature_dim=int(header["feature_dim"]),
        class_order=class_order,
        trained_on=header.get("trained_on", "unknown"),
    )


# -- external stance corpora -------------------------------------------------

FNC_STANCE_MAP = {
    "agree": Stance.SUPPORTING,
    "disagree": Stance.CONTRADICTING,
    "discuss": Stance.NEUTRAL,
    # "unrelated" rows are dropped: no equivalent in the three-class scheme
}


def load_fnc_csv(
    stances_path: str | Path,
    bodies_path: str | Path,
) -> list[tuple[str, str, Stance]]:
    """Load an FNC-style corpus as (headline, body text, stance) triples.

    Expects the challenge layout: a stance CSV with ``Headline``,
    ``Body ID``, ``Stance`` columns and a bodies CSV with ``Body ID``,
    ``articleBody``. Unrelated pairs are dropped, the remaining labels map
    agree/disagree/discuss onto supporting/contradicting/neutral.
    """
    bodies: dict[str, str] = {}
    with open(bodies_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            bodies[row["Body ID"].strip()] = row["articleBody"]
    triples: list[tuple[str, str, Stance]] = []
    with open(stances_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            stance = FNC_STANCE_MAP.get(row["Stance"].strip().lower())
            if stance is None:
                continue
            body_id = row["Body ID"].strip()
            if body_id not in bodies:
                raise ValueError(f"stance row references unknown body id {body_id!r}")
            triples.append((row["Headline"], bodies[body_id], stance))
    return triples


def windowed_features(
    pairs: Iterable[tuple[Claim, Article, Stance]],
    embedder: WordVectorEmbedder,
    m: int = 3,
    ctx: int = 1,
) -> list[tuple[np.ndarray, Stance]]:
    """Build (features, stance) training rows from labelled pairs."""
    return [
        (featurize(claim, build_window(claim, article, embedder, m=m, ctx=ctx), embedder), stance)
        for claim, article, stance in pairs
    ]
