"""Single entry point wiring all modules into reproducible batch workflows.

Exit codes: 0 success, 1 usage error, 2 data error, 3 failed --assert
check. Every error goes to stderr with an ``error:`` prefix. A flat
key=value config file can provide defaults; flags override it. The
``FACTLINK_DATA_DIR`` environment variable supplies the default data root.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path


from . import __version__
from .annotation import AnnotationService
from .evaluation import CVPlan, cross_validate, evaluate_presence
from .ingestion import ClaimFeedProvider, IngestionEngine, Monitor, RssProvider
from .presence import (
    CorpusIndex,
    DEFAULT_PREFILTER,
    Method,
    PresenceConfig,
    PresenceScorer,
    calibrate_threshold,
    predict_labels,
    retrieve_candidates,
)
from .stance import (
    TrainConfig,
    fine_tune,
    load_model,
    predict,
    save_model,
    train,
    windowed_features,
)
from .store import (
    CorpusStore,
    LabelOrigin,
    PairLabel,
    Presence,
    RecordKind,
    Split,
    Stance,
    StoreError,
    atomic_write_text,
    encode_record,
)
from .text import Lexicon, SynonymConfig, WordVectorEmbedder
from .veracity import assign_pair_veracities, format_report, label_report

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ASSERT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; this tool reserves 2 for data errors
    def error(self, message):
        raise UsageError(message)


def load_config(path: str | Path) -> dict[str, str]:
    """Flat key=value lines; blank lines and # comments ignored."""
    config: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        config[key.strip()] = value.strip()
    return config


class Context:
    """Resolved settings: flag > config file > environment > default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict[str, str] = {}
        if getattr(args, "config", None):
            self.config = load_config(args.config)

    def get(self, key: str, default=None):
        value = getattr(self.args, key, None)
        if value is not None:
            return value
        if key in self.config:
            return self.config[key]
        return default

    @property
    def data_dir(self) -> Path:
        return Path(
            self.get("data_dir")
            or os.environ.get("FACTLINK_DATA_DIR")
            or "."
        )

    def store(self) -> CorpusStore:
        return CorpusStore.load(self.data_dir)

    def embedder(self) -> WordVectorEmbedder:
        vectors = self.get("vectors") or self.data_dir / "vectors.txt"
        return WordVectorEmbedder(Lexicon.load(vectors))

    def synonyms(self) -> SynonymConfig:
        terms = self.get("medical_terms") or self.data_dir / "medical_terms.txt"
        kwargs = {}
        if self.get("synonym_top_k") is not None:
            kwargs["top_k"] = int(self.get("synonym_top_k"))
        if self.get("synonym_min_cosine") is not None:
            kwargs["min_cosine"] = float(self.get("synonym_min_cosine"))
        if Path(terms).exists():
            return SynonymConfig.load_terms(terms, **kwargs)
        return SynonymConfig(**kwargs)

    def presence_config(self, method: str | None = None) -> PresenceConfig:
        method = Method(method or self.get("method", "irse"))
        threshold = self.get("threshold")
        prefilter = self.get("prefilter")
        top = self.get("top_sentences")
        return PresenceConfig(
            method=method,
            threshold=float(threshold) if threshold is not None else None,
            prefilter_threshold=(
                float(prefilter) if prefilter is not None else DEFAULT_PREFILTER
            ),
            top_sentences=int(top) if top is not None else 5,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            epochs=int(self.get("epochs", 200)),
            learning_rate=float(self.get("learning_rate", 0.1)),
            batch_size=int(self.get("batch_size", 16)),
            seed=int(self.get("seed", 0)),
            l2=float(self.get("l2", 0.0)),
        )


def _write_jsonl(path: str | Path, records) -> int:
    lines = [json.dumps(encode_record(r), ensure_ascii=False, sort_keys=True) for r in records]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))
    return len(lines)


def _stance_rows(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _stance_pairs(rows: list[dict], store: CorpusStore):
    pairs = []
    for row in rows:
        claim = store.claims[row["claim_id"]]
        article = store.articles[row["article_id"]]
        pairs.append((claim, article, Stance(row["stance"])))
    return pairs


# -- subcommands -------------------------------------------------------------

def cmd_import(ctx: Context) -> int:
    store = ctx.store()
    kind = RecordKind(ctx.args.kind.replace("-", "_"))
    count = store.import_records(ctx.args.path, kind)
    store.save(ctx.data_dir)
    print(f"imported {count} {kind.value} records")
    return EXIT_OK


def cmd_monitor_run(ctx: Context) -> int:
    raw = json.loads(Path(ctx.args.monitors).read_text(encoding="utf-8"))
    if isinstance(raw, dict):
        provider_defs = raw.get("providers", [])
        monitor_defs = raw.get("monitors", [])
    else:
        provider_defs, monitor_defs = [], raw
    store = ctx.store()
    engine = IngestionEngine(store)
    for p in provider_defs:
        if p["type"] == "rss":
            engine.register_provider(
                RssProvider(
                    id=p["id"],
                    source_id=p["source_id"],
                    split=Split(p.get("split", "unsplit")),
                )
            )
        elif p["type"] == "claims":
            engine.register_provider(
                ClaimFeedProvider(id=p["id"], fact_checker_id=p.get("fact_checker_id", ""))
            )
        else:
            raise ValueError(f"unknown provider type {p['type']!r}")
    state_path = ctx.data_dir / "monitor_state.json"
    state = json.loads(state_path.read_text()) if state_path.exists() else {}
    for m in monitor_defs:
        monitor = Monitor(
            id=m["id"],
            provider_id=m["provider"],
            interval_seconds=float(m["interval_seconds"]),
            params=m.get("params", {}),
            chain=list(m.get("chain", [])),
            last_run=state.get(m["id"]),
        )
        engine.register_monitor(monitor)
    try:
        now = float(ctx.args.now)
    except ValueError:
        from .store import parse_rfc3339

        now = parse_rfc3339(ctx.args.now).timestamp()
    reports = engine.run_due_monitors(now)
    store.save(ctx.data_dir)
    state = {mid: mon.last_run for mid, mon in engine.monitors.items()}
    atomic_write_text(state_path, json.dumps(state, sort_keys=True, indent=2) + "\n")
    for mid, report in sorted(reports.items()):
        print(f"{mid}: new={report.new} updated={report.updated} errors={len(report.errors)}")
        for err in report.errors:
            print(f"error: {mid}: {err}", file=sys.stderr)
    if not reports:
        print("no monitors due")
    return EXIT_OK


def cmd_index_build(ctx: Context) -> int:
    store = ctx.store()
    index = CorpusIndex(store.articles.values())
    payload = {
        "document_count": index.stats.document_count,
        "avg_doc_length": index.stats.avg_doc_length,
        "articles": sorted(index.articles),
    }
    out = ctx.args.out or (ctx.data_dir / "index.json")
    atomic_write_text(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"indexed {payload['document_count']} articles -> {out}")
    return EXIT_OK


def cmd_match(ctx: Context) -> int:
    store = ctx.store()
    cfg = ctx.presence_config(ctx.args.method)
    embedder = ctx.embedder() if cfg.method in (Method.SE, Method.IRSE) else _try_embedder(ctx)
    index = CorpusIndex(store.articles.values())
    syn = ctx.synonyms()
    jobs = int(ctx.get("jobs", 1))
    claims = sorted(store.claims.values(), key=lambda c: c.id)
    if jobs > 1:
        scorer = PresenceScorer(index.stats, embedder, syn)

        def score_claim(claim):
            out = []
            for article_id, _ in retrieve_candidates(claim, index):
                result = scorer.classify_pair(claim, index.articles[article_id], cfg)
                out.append(
                    PairLabel(
                        article_id=article_id,
                        claim_id=claim.id,
                        presence=result.decision,
                        origin=LabelOrigin.PREDICTED,
                        presence_score=result.score,
                    )
                )
            return out

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            labels = [l for claim_labels in pool.map(score_claim, claims) for l in claim_labels]
    else:
        labels = predict_labels(index, claims, cfg, embedder, syn)
    out = ctx.args.out or (ctx.data_dir / "predicted_labels.jsonl")
    count = _write_jsonl(out, labels)
    present = sum(1 for l in labels if l.presence == Presence.PRESENT)
    print(
        f"scored {count} candidate pairs with {cfg.method.value} "
        f"(threshold {cfg.effective_threshold}): {present} present -> {out}"
    )
    return EXIT_OK


def _try_embedder(ctx: Context) -> WordVectorEmbedder | None:
    try:
        return ctx.embedder()
    except (OSError, ValueError):
        return None


def cmd_stance(ctx: Context) -> int:
    store = ctx.store()
    action = ctx.args.action
    if action in ("train", "finetune"):
        embedder = ctx.embedder()
        rows = _stance_rows(ctx.args.data)
        dataset = windowed_features(_stance_pairs(rows, store), embedder)
        cfg = ctx.train_config()
        if action == "train":
            model = train(dataset, cfg, provenance="train")
        else:
            model = fine_tune(load_model(ctx.args.model), dataset, cfg)
        save_model(model, ctx.args.out)
        print(
            f"{action}: {len(dataset)} examples, {cfg.epochs} epochs, "
            f"final loss {model.loss_history[-1]:.4f}" if model.loss_history
            else f"{action}: {len(dataset)} examples (0 epochs)"
        )
        print(f"model -> {ctx.args.out}")
        return EXIT_OK
    # predict
    embedder = ctx.embedder()
    model = load_model(ctx.args.model)
    rows = _stance_rows(ctx.args.data)
    out_rows = []
    for row in rows:
        claim = store.claims[row["claim_id"]]
        article = store.articles[row["article_id"]]
        label, probs = predict(model, claim, article, embedder)
        out_rows.append(
            {
                "claim_id": claim.id,
                "article_id": article.id,
                "stance": label.value,
                "probabilities": {
                    c.value: round(float(p), 6) for c, p in zip(model.class_order, probs)
                },
            }
        )
    text = "\n".join(json.dumps(r, sort_keys=True) for r in out_rows) + "\n"
    if ctx.args.out:
        atomic_write_text(ctx.args.out, text)
        print(f"predictions -> {ctx.args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_aggregate(ctx: Context) -> int:
    store = ctx.store()
    labels_path = ctx.args.labels or (ctx.data_dir / "predicted_labels.jsonl")
    staging = CorpusStore()
    staging.articles = store.articles
    staging.claims = store.claims
    count = staging.import_records(labels_path, RecordKind.PAIR_LABELS)
    labels = assign_pair_veracities(staging.pair_labels.values(), store.claims)
    out = ctx.args.out or labels_path
    _write_jsonl(out, sorted(labels, key=lambda l: l.key))
    print(f"assigned pair veracity for {count} labels -> {out}")
    return EXIT_OK


def _accuracy_by_method(ctx: Context, store: CorpusStore, methods: list[Method]) -> dict[str, float]:
    index = CorpusIndex(store.articles.values())
    embedder = ctx.embedder()
    syn = ctx.synonyms()
    gold = [
        l for l in store.pair_labels.values() if l.origin == LabelOrigin.MANUAL
    ]
    gold.sort(key=lambda l: l.key)
    out = {}
    for method in methods:
        cfg = ctx.presence_config(method.value)
        evaluation = evaluate_presence(index, store.claims, gold, cfg, embedder, syn)
        out[method.value] = evaluation.overall.metrics["accuracy"]
    return out


def cmd_eval_presence(ctx: Context) -> int:
    store = ctx.store()
    index = CorpusIndex(store.articles.values())
    embedder = ctx.embedder()
    syn = ctx.synonyms()
    cfg = ctx.presence_config(ctx.args.method)
    gold = [l for l in store.pair_labels.values() if l.origin == LabelOrigin.MANUAL]
    gold.sort(key=lambda l: l.key)
    if not gold:
        raise ValueError("no manual gold labels in store")
    evaluation = evaluate_presence(index, store.claims, gold, cfg, embedder, syn)
    print(f"method {cfg.method.value}: overall accuracy {evaluation.overall.metrics['accuracy']:.4f}")
    for split, sm in sorted(evaluation.per_split.items()):
        print(f"  {split}: accuracy {sm.metrics['accuracy']:.4f} over {sm.matrix.total} pairs")
    if ctx.args.metrics:
        atomic_write_text(
            ctx.args.metrics, json.dumps(evaluation.to_json(), indent=2, sort_keys=True) + "\n"
        )
        print(f"metrics -> {ctx.args.metrics}")
    if ctx.args.roc:
        from .evaluation import roc_points

        scores = [s for s, _ in evaluation.overall.scores]
        gold_bits = [int(g) for _, g in evaluation.overall.scores]
        points = roc_points(scores, gold_bits)
        thresholds = ["inf"] + [repr(t) for t in sorted(set(scores), reverse=True)]
        lines = ["threshold,fpr,tpr"] + [
            f"{t},{fpr},{tpr}" for t, (fpr, tpr) in zip(thresholds, points)
        ]
        atomic_write_text(ctx.args.roc, "\n".join(lines) + "\n")
        print(f"roc -> {ctx.args.roc}")
    if ctx.args.calibrate_recall is not None:
        threshold = calibrate_threshold(evaluation.overall.scores, ctx.args.calibrate_recall)
        print(f"calibrated threshold for recall {ctx.args.calibrate_recall}: {threshold:.6f}")
    if ctx.args.assert_expr:
        metric, others = _parse_assert(ctx.args.assert_expr)
        mine = evaluation.overall.metrics["accuracy"]
        theirs = _accuracy_by_method(ctx, store, [Method(m) for m in others])
        failed = [m for m, acc in theirs.items() if mine < acc]
        detail = ", ".join(f"{m}={acc:.4f}" for m, acc in theirs.items())
        print(f"assert {metric}: {cfg.method.value}={mine:.4f} vs {detail}")
        if failed:
            print(
                f"error: assertion failed: {cfg.method.value} accuracy {mine:.4f} "
                f"below {', '.join(failed)}",
                file=sys.stderr,
            )
            return EXIT_ASSERT
    return EXIT_OK


def _parse_assert(expr: str) -> tuple[str, list[str]]:
    if ">=" not in expr:
        raise UsageError(f"bad --assert expression {expr!r}; expected metric>=m1,m2")
    metric, _, rhs = expr.partition(">=")
    metric = metric.strip()
    if metric != "overall_acc":
        raise UsageError(f"unsupported assert metric {metric!r}")
    others = [m.strip() for m in rhs.split(",") if m.strip()]
    return metric, others


def cmd_eval_stance(ctx: Context) -> int:
    store = ctx.store()
    embedder = ctx.embedder()
    model = load_model(ctx.args.model)
    rows = _stance_rows(ctx.args.data)
    correct = 0
    for row in rows:
        claim = store.claims[row["claim_id"]]
        article = store.articles[row["article_id"]]
        label, _ = predict(model, claim, article, embedder)
        correct += label == Stance(row["stance"])
    accuracy = correct / len(rows) if rows else 0.0
    print(f"stance accuracy: {accuracy:.4f} over {len(rows)} pairs")
    return EXIT_OK


def cmd_eval_cv(ctx: Context) -> int:
    store = ctx.store()
    embedder = ctx.embedder()
    rows = _stance_rows(ctx.args.data)
    dataset = windowed_features(_stance_pairs(rows, store), embedder)
    plan = CVPlan(
        k=int(ctx.get("k", 5)),
        repeats=int(ctx.get("repeats", 10)),
        seed=int(ctx.get("seed", 0)),
    )
    cfg = ctx.train_config()

    def trainer(train_rows):
        model = train(train_rows, cfg)
        from .stance import predict_features

        return lambda x: predict_features(model, x)[0]

    result = cross_validate(dataset, trainer, plan)
    print(
        f"cv: mean accuracy {result.mean_accuracy:.4f} "
        f"(std {result.std_accuracy:.4f}, {plan.repeats}x{plan.k} folds)"
    )
    return EXIT_OK


def cmd_report(ctx: Context) -> int:
    store = ctx.store()
    labels_path = ctx.args.labels
    if labels_path:
        staging = CorpusStore()
        staging.articles = store.articles
        staging.claims = store.claims
        staging.import_records(labels_path, RecordKind.PAIR_LABELS)
        labels = list(staging.pair_labels.values())
    else:
        labels = list(store.pair_labels.values())
    report = label_report(labels, store, precision=int(ctx.get("precision", 2)))
    out = ctx.args.out or (ctx.data_dir / "report.json")
    atomic_write_text(out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(format_report(report))
    print(f"report -> {out}")
    return EXIT_OK


def cmd_serve(ctx: Context) -> int:
    import uvicorn

    from .api import create_app

    store = ctx.store()
    embedder = _try_embedder(ctx)
    blocklist = [
        c.strip() for c in str(ctx.get("claim_blocklist", "")).split(",") if c.strip()
    ]
    service = AnnotationService(store, embedder, claim_blocklist=blocklist)
    pairs_path = ctx.args.pairs
    if pairs_path:
        staging = CorpusStore()
        staging.articles = store.articles
        staging.claims = store.claims
        staging.import_records(pairs_path, RecordKind.PAIR_LABELS)
        service.seed_from_labels(staging.pair_labels.values())
    else:
        service.seed_from_labels(
            l for l in store.pair_labels.values() if l.origin == LabelOrigin.PREDICTED
        )
    app = create_app(service, ui_dir=ctx.args.ui)
    port = int(ctx.get("port", 8000))
    print(f"serving annotation API on port {port} with {len(service.pairs)} pairs")
    uvicorn.run(app, host=ctx.get("host", "127.0.0.1"), port=port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="factlink", description=__doc__)
    parser.add_argument("--version", action="version", version=f"factlink {__version__}")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--data-dir", dest="data_dir", help="data root (default $FACTLINK_DATA_DIR or .)")
    parser.add_argument("--jobs", type=int, help="parallel workers (default 1, reproducible)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="import records from a JSONL file")
    p.add_argument("--kind", required=True, choices=["articles", "claims", "sources", "pair-labels"])
    p.add_argument("path")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("monitor", help="run scheduled ingestion monitors")
    monitor_sub = p.add_subparsers(dest="action", required=True)
    pr = monitor_sub.add_parser("run", help="run all due monitors")
    pr.add_argument("--now", required=True, help="current time (epoch seconds)")
    pr.add_argument("--monitors", required=True, help="monitor config file")
    pr.set_defaults(func=cmd_monitor_run)

    p = sub.add_parser("index", help="corpus index operations")
    index_sub = p.add_subparsers(dest="action", required=True)
    pb = index_sub.add_parser("build", help="build and persist corpus statistics")
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_index_build)

    p = sub.add_parser("match", help="batch claim-presence scoring")
    p.add_argument("--method", choices=[m.value for m in Method], default=None)
    p.add_argument("--threshold", type=float)
    p.add_argument("--prefilter", type=float, dest="prefilter")
    p.add_argument("--vectors")
    p.add_argument("--medical-terms", dest="medical_terms")
    p.add_argument("--out")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("stance", help="stance model training and prediction")
    p.add_argument("action", choices=["train", "finetune", "predict"])
    p.add_argument("--data", required=True, help="stance rows (claim_id, article_id, stance)")
    p.add_argument("--model", help="input model (finetune/predict)")
    p.add_argument("--out", help="output model or predictions")
    p.add_argument("--epochs", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--l2", type=float)
    p.add_argument("--vectors")
    p.set_defaults(func=cmd_stance)

    p = sub.add_parser("aggregate", help="aggregate stance with claim veracity")
    agg_sub = p.add_subparsers(dest="action", required=True)
    pv = agg_sub.add_parser("veracity", help="fill pair_veracity on labels")
    pv.add_argument("--labels")
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("eval", help="evaluation harness")
    eval_sub = p.add_subparsers(dest="target", required=True)
    pe = eval_sub.add_parser("presence", help="evaluate presence detection on gold labels")
    pe.add_argument("--method", choices=[m.value for m in Method], default=None)
    pe.add_argument("--threshold", type=float)
    pe.add_argument("--prefilter", type=float, dest="prefilter")
    pe.add_argument("--metrics", help="write metrics JSON here")
    pe.add_argument("--roc", help="write ROC CSV here")
    pe.add_argument("--vectors")
    pe.add_argument("--medical-terms", dest="medical_terms")
    pe.add_argument("--calibrate-recall", dest="calibrate_recall", type=float)
    pe.add_argument("--assert", dest="assert_expr", help='e.g. "overall_acc>=ir,se"')
    pe.set_defaults(func=cmd_eval_presence)
    ps = eval_sub.add_parser("stance", help="evaluate a stance model on labelled pairs")
    ps.add_argument("--model", required=True)
    ps.add_argument("--data", required=True)
    ps.add_argument("--vectors")
    ps.set_defaults(func=cmd_eval_stance)
    pc = eval_sub.add_parser("cv", help="repeated stratified cross-validation")
    pc.add_argument("--data", required=True)
    pc.add_argument("--k", type=int)
    pc.add_argument("--repeats", type=int)
    pc.add_argument("--seed", type=int)
    pc.add_argument("--epochs", type=int)
    pc.add_argument("--learning-rate", dest="learning_rate", type=float)
    pc.add_argument("--vectors")
    pc.set_defaults(func=cmd_eval_cv)

    p = sub.add_parser("serve", help="run the annotation REST service")
    p.add_argument("--port", type=int)
    p.add_argument("--host")
    p.add_argument("--pairs", help="pair labels file to seed the annotation pool")
    p.add_argument("--ui", help="directory of built UI assets to serve at /")
    p.add_argument("--vectors")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("report", help="label distribution report")
    p.add_argument("--labels", help="pair labels file (default: labels in the store)")
    p.add_argument("--out")
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    ctx = Context(args)
    try:
        return args.func(ctx)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StoreError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
