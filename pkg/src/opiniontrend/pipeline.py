"""End-to-end pipeline: stage orchestration, artifact store, and manifest.

Every stage writes its outputs as content-hash-named files and records them
in ``manifest.json``; completed artifacts are never rewritten in place, so a
re-run with identical inputs reproduces identical hashes and a failed run
keeps everything produced before the failing stage.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
from dataclasses import dataclass, field, fields
from datetime import date, timedelta

import numpy as np

from . import baselines as baselines_mod
from . import influence, opinion, pollfit
from .classifier import ModelParams, train
from .cooccur import (
    build_significant_graph,
    count_hashtags,
    detect_communities,
    save_stats_json as cooccur_save_stats,
)
from .propagation import (
    BatchDecisions,
    ClassAssignment,
    auto_accept_all,
    load_seeds_file,
    run_until_stable,
    PROPAGATED,
)
from .records import (
    DEFAULT_OFFICIAL_CLIENTS,
    CorpusWindow,
    FilterSpec,
    filter_official_clients,
    filter_strict_keywords,
    load_corpus,
)
from .textfeat import build_training_set, build_vocabulary, vectorize
from .series import DailySeries

log = logging.getLogger(__name__)


class ConfigError(Exception):
    pass


class PipelineStageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    corpus: str = ""
    polls: str = ""
    seeds: str = ""
    world: str = ""
    decisions: str = ""
    out: str = "out"
    curation: str = "auto"  # auto | batch
    seed: int = 1234
    p0: float = 1e-6
    r: float = 0.001
    max_tags_per_tweet: int = 20
    strict: bool = False
    fit_window: int = 13
    forecast_window: int = 9
    windows: str = "1:2:41"
    t_d_max: int = 30
    min_overlap: int = 30
    horizon: int = 7
    lam: float = 1e-4
    max_epochs: int = 100
    train_until: str = ""  # ISO date; empty means 60% of the corpus window

    def window_grid(self) -> list[int]:
        try:
            start, step, stop = (int(x) for x in self.windows.split(":"))
        except ValueError as exc:
            raise ConfigError(f"bad windows spec {self.windows!r}; expected start:step:stop") from exc
        return list(range(start, stop + 1, step))

    def t_d_range(self) -> range:
        return range(0, self.t_d_max + 1)


_BOOL_KEYS = {"strict"}
_INT_KEYS = {"seed", "max_tags_per_tweet", "fit_window", "forecast_window",
             "t_d_max", "min_overlap", "horizon", "max_epochs"}
_FLOAT_KEYS = {"p0", "r", "lam"}
_KEY_ALIASES = {"lambda": "lam"}


def parse_config(path) -> PipelineConfig:
    """Read the key = value configuration document."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return config_from_dict(values)


def config_from_dict(values: dict[str, str]) -> PipelineConfig:
    cfg = PipelineConfig()
    valid = {f.name for f in fields(PipelineConfig)}
    for key, val in values.items():
        key = _KEY_ALIASES.get(key, key)
        if key not in valid:
            raise ConfigError(f"unknown config key {key!r}")
        if key in _BOOL_KEYS:
            setattr(cfg, key, val.lower() in ("1", "true", "yes", "on"))
        elif key in _INT_KEYS:
            setattr(cfg, key, int(val))
        elif key in _FLOAT_KEYS:
            setattr(cfg, key, float(val))
        else:
            setattr(cfg, key, val)
    return cfg


def apply_overrides(cfg: PipelineConfig, overrides: dict[str, str]) -> PipelineConfig:
    merged = {**_config_as_strings(cfg), **{k: v for k, v in overrides.items() if v is not None}}
    return config_from_dict(merged)


def _config_as_strings(cfg: PipelineConfig) -> dict[str, str]:
    return {f.name: str(getattr(cfg, f.name)) for f in fields(PipelineConfig)}


@dataclass
class WorldInfo:
    """Deployment facts consumed from the world descriptor (or defaults)."""

    camps: tuple[str, ...] = ()
    official_clients: frozenset[str] = DEFAULT_OFFICIAL_CLIENTS
    excluded_accounts: frozenset[str] = frozenset()
    mention_keywords: dict[str, frozenset[str]] = field(default_factory=dict)
    category_hashtags: dict[str, dict[str, frozenset[str]]] = field(default_factory=dict)

    @classmethod
    def load(cls, path) -> "WorldInfo":
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        return cls(
            camps=tuple(obj.get("camps", ())),
            official_clients=frozenset(obj.get("official_clients", DEFAULT_OFFICIAL_CLIENTS)),
            excluded_accounts=frozenset(obj.get("excluded_accounts", ())),
            mention_keywords={
                c: frozenset(v) for c, v in obj.get("mention_keywords", {}).items()
            },
            category_hashtags={
                c: {side: frozenset(tags) for side, tags in d.items()}
                for c, d in obj.get("category_hashtags", {}).items()
            },
        )


class ArtifactStore:
    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.manifest_path = os.path.join(out_dir, "manifest.json")
        self.manifest: dict = {"stages": {}}
        if os.path.exists(self.manifest_path):
            with open(self.manifest_path, "r", encoding="utf-8") as fh:
                self.manifest = json.load(fh)

    def add(self, stage: str, name: str, tmp_path: str, ext: str) -> str:
        digest = _sha256_file(tmp_path)
        final = os.path.join(self.out_dir, f"{stage}.{name}.{digest[:8]}{ext}")
        if not os.path.exists(final):
            shutil.move(tmp_path, final)
        else:
            os.remove(tmp_path)
        entry = self.manifest["stages"].setdefault(stage, {"artifacts": {}, "params": {}})
        entry["artifacts"][name] = {"file": os.path.basename(final), "sha256": digest}
        return final

    def set_params(self, stage: str, params: dict) -> None:
        entry = self.manifest["stages"].setdefault(stage, {"artifacts": {}, "params": {}})
        entry["params"] = params

    def flush(self) -> None:
        with open(self.manifest_path, "w", encoding="utf-8") as fh:
            json.dump(self.manifest, fh, sort_keys=True, indent=1)

    def tmp(self, name: str) -> str:
        return os.path.join(self.out_dir, f".tmp.{name}")

    def artifact_path(self, stage: str, name: str) -> str:
        entry = self.manifest["stages"].get(stage, {}).get("artifacts", {}).get(name)
        if entry is None:
            raise KeyError(f"no artifact {stage}/{name}")
        return os.path.join(self.out_dir, entry["file"])


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _stage_seed(master: int, stage: str) -> int:
    digest = hashlib.sha256(f"{master}:{stage}".encode()).digest()
    return int.from_bytes(digest[:4], "big")


@dataclass
class PipelineContext:
    cfg: PipelineConfig
    world: WorldInfo
    store: ArtifactStore
    corpus: CorpusWindow | None = None
    decompositions: dict | None = None
    graph: object = None
    stats: object = None
    assignment: ClassAssignment | None = None
    train_set: object = None
    vocab: object = None
    model: ModelParams | None = None
    predictions: dict[str, str] | None = None
    classes: tuple[str, ...] = ()
    opinion_series: object = None
    ratio_series: DailySeries | None = None
    polls: object = None
    fit: object = None

    def train_until_day(self) -> date:
        if self.cfg.train_until:
            return date.fromisoformat(self.cfg.train_until)
        n = (self.corpus.end_day - self.corpus.start_day).days
        return self.corpus.start_day + timedelta(days=int(0.6 * n))


def run_all(cfg: PipelineConfig) -> ArtifactStore:
    world = WorldInfo.load(cfg.world) if cfg.world else WorldInfo()
    store = ArtifactStore(cfg.out)
    ctx = PipelineContext(cfg=cfg, world=world, store=store)
    stages = [
        ("corpus", stage_corpus),
        ("graph", stage_graph),
        ("cooccur", stage_cooccur),
        ("propagate", stage_propagate),
        ("trainset", stage_trainset),
        ("train", stage_train),
        ("opinion", stage_opinion),
        ("fit", stage_fit),
        ("benchmark", stage_benchmark),
    ]
    for name, fn in stages:
        try:
            log.info("stage %s", name)
            fn(ctx)
            store.flush()
        except Exception as exc:
            store.flush()
            raise PipelineStageError(name, exc) from exc
    return store


def stage_corpus(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    corpus = load_corpus(cfg.corpus)
    spec = FilterSpec(official_clients=ctx.world.official_clients)
    corpus = filter_official_clients(corpus, spec)
    if cfg.strict:
        corpus = filter_strict_keywords(corpus, spec)
    ctx.corpus = corpus
    tmp = ctx.store.tmp("corpus.jsonl")
    corpus.save(tmp)
    ctx.store.add("corpus", "filtered", tmp, ".jsonl")
    ctx.store.set_params("corpus", {"source": cfg.corpus, "strict": cfg.strict,
                                    "records": corpus.num_records})


def stage_graph(ctx: PipelineContext) -> None:
    ctx.decompositions = influence.daily_decompositions(
        ctx.corpus, ctx.world.excluded_accounts
    )
    series = influence.component_size_series(ctx.corpus, ctx.world.excluded_accounts)
    tmp = ctx.store.tmp("components.csv")
    series.write_csv(tmp)
    ctx.store.add("graph", "components", tmp, ".csv")
    ctx.store.set_params("graph", {"excluded_accounts": sorted(ctx.world.excluded_accounts)})


def stage_cooccur(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    ctx.stats = count_hashtags(ctx.corpus)
    ctx.graph = build_significant_graph(ctx.corpus, p0=cfg.p0,
                                        max_tags_per_tweet=cfg.max_tags_per_tweet)
    communities = None
    if ctx.graph.vertex_count:
        communities = detect_communities(ctx.graph, seed=_stage_seed(cfg.seed, "cooccur")).membership
    tmp = ctx.store.tmp("edges.csv")
    ctx.graph.write_edges_csv(tmp)
    ctx.store.add("cooccur", "edges", tmp, ".csv")
    tmp = ctx.store.tmp("vertices.csv")
    ctx.graph.write_vertices_csv(tmp, communities)
    ctx.store.add("cooccur", "vertices", tmp, ".csv")
    tmp = ctx.store.tmp("graph.json")
    ctx.graph.save_node_link(tmp, communities=communities)
    ctx.store.add("cooccur", "node_link", tmp, ".json")
    tmp = ctx.store.tmp("stats.json")
    cooccur_save_stats(ctx.stats, tmp)
    ctx.store.add("cooccur", "stats", tmp, ".json")
    ctx.store.set_params("cooccur", {
        "p0": cfg.p0, "raw_vertices": ctx.graph.raw_vertex_count,
        "raw_edges": ctx.graph.raw_edge_count,
        "vertices": ctx.graph.vertex_count, "edges": ctx.graph.edge_count,
    })


def stage_propagate(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    seeds = load_seeds_file(cfg.seeds)
    if cfg.curation == "batch":
        if not cfg.decisions:
            raise ConfigError("curation = batch needs a decisions file")
        source = BatchDecisions.from_csv(cfg.decisions)
        provenance = "curated-in"
    elif cfg.curation == "auto":
        source = auto_accept_all
        provenance = PROPAGATED
    else:
        raise ConfigError(f"unknown curation mode {cfg.curation!r}")
    result = run_until_stable(ctx.graph, seeds, ctx.stats, cfg.r, source,
                              provenance=provenance)
    ctx.assignment = result.assignment
    ctx.classes = result.assignment.classes
    tmp = ctx.store.tmp("assignment.json")
    result.assignment.save(tmp)
    ctx.store.add("propagate", "assignment", tmp, ".json")
    tmp = ctx.store.tmp("audit.jsonl")
    result.write_audit(tmp)
    ctx.store.add("propagate", "audit", tmp, ".jsonl")
    ctx.store.set_params("propagate", {
        "r": cfg.r, "curation": cfg.curation, "iterations": result.iterations,
        "stable": result.stable,
        "assigned": {cls: len(result.assignment.tags_of(cls)) for cls in ctx.classes},
    })


def stage_trainset(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    ts = build_training_set(ctx.corpus, ctx.assignment.as_label_map(),
                            seed=_stage_seed(cfg.seed, "trainset"))
    ctx.train_set = ts
    ctx.vocab = build_vocabulary(ts)
    tmp = ctx.store.tmp("trainset.jsonl")
    ts.save(tmp)
    ctx.store.add("trainset", "examples", tmp, ".jsonl")
    tmp = ctx.store.tmp("vocab.json")
    ctx.vocab.save(tmp)
    ctx.store.add("trainset", "vocab", tmp, ".json")
    ctx.store.set_params("trainset", {"size": ts.size, "features": ctx.vocab.size,
                                      "raw_counts": ts.raw_counts})


def stage_train(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    ts = ctx.train_set
    rows = [vectorize(ex.tokens, ctx.vocab) for ex in ts.examples]
    labels = [ex.cls for ex in ts.examples]
    if len(ts.classes) != 2:
        raise ConfigError("pipeline training path expects two classes")
    ctx.model = train(rows, labels, ts.classes, ctx.vocab.size, cfg.lam,
                      seed=_stage_seed(cfg.seed, "train"), max_epochs=cfg.max_epochs,
                      vocab_hash=ctx.vocab.content_hash())
    tmp = ctx.store.tmp("model.json")
    ctx.model.save(tmp)
    ctx.store.add("train", "model", tmp, ".json")
    ctx.store.set_params("train", {"lam": cfg.lam, "loss": ctx.model.final_loss,
                                   "epochs": ctx.model.epochs_run})


def stage_opinion(ctx: PipelineContext) -> None:
    ctx.predictions = opinion.classify_corpus(ctx.corpus, ctx.model, ctx.vocab)
    classes = ctx.classes
    scopes: dict[str, dict | None] = {"whole": None}
    scopes["scgc"] = {d: dec.scgc for d, dec in ctx.decompositions.items()}
    scopes["wcgc"] = {d: dec.wcgc for d, dec in ctx.decompositions.items()}
    for scope, users in scopes.items():
        series = opinion.daily_ratio_series(ctx.corpus, ctx.predictions, classes,
                                            scope=scope, scope_users=users)
        if scope == "whole":
            ctx.opinion_series = series
            ctx.ratio_series = series.ratio(classes[0])
        tmp = ctx.store.tmp(f"opinion_{scope}.csv")
        series.write_csv(tmp)
        ctx.store.add("opinion", scope, tmp, ".csv")
    cumulative = opinion.cumulative_opinion(ctx.corpus, ctx.predictions, classes)
    tmp = ctx.store.tmp("cumulative.json")
    cumulative.save(tmp)
    ctx.store.add("opinion", "cumulative", tmp, ".json")
    activity = opinion.activity_stats(ctx.corpus, ctx.predictions, classes)
    tmp = ctx.store.tmp("activity.json")
    activity.save(tmp)
    ctx.store.add("opinion", "activity", tmp, ".json")
    behavior = opinion.behavior_correlations(ctx.opinion_series)
    behavior.cumulative_shares = cumulative.shares
    tmp = ctx.store.tmp("behavior.json")
    behavior.save(tmp)
    ctx.store.add("opinion", "behavior", tmp, ".json")
    ctx.store.set_params("opinion", {"classes": list(classes)})


def stage_fit(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    polls = pollfit.load_polls_csv(cfg.polls)
    ctx.polls = polls
    tmp = ctx.store.tmp("polls_normalized.csv")
    polls.y_a.write_csv(tmp, value_name="y_a")
    ctx.store.add("fit", "polls", tmp, ".csv")

    fit = pollfit.fit_smoothed(ctx.ratio_series, polls.y_a, cfg.fit_window,
                               cfg.t_d_range(), cfg.min_overlap)
    ctx.fit = fit
    tmp = ctx.store.tmp("fit.json")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(fit.as_dict(), fh, sort_keys=True, indent=1)
    ctx.store.add("fit", "fit", tmp, ".json")

    sweep = pollfit.sweep_window(ctx.ratio_series, polls.y_a, cfg.window_grid(),
                                 cfg.t_d_range(), cfg.min_overlap)
    tmp = ctx.store.tmp("sweep.csv")
    pollfit.write_sweep_csv(tmp, sweep)
    ctx.store.add("fit", "sweep", tmp, ".csv")

    train_until = ctx.train_until_day()
    train_polls = DailySeries(
        polls.y_a.start_day,
        np.where(
            [polls.y_a.day_at(i) <= train_until for i in range(len(polls.y_a))],
            polls.y_a.values, np.nan,
        ),
    )
    # for forecasting, only delays that admit the horizon are usable
    fc_range = range(cfg.horizon, max(cfg.t_d_max, cfg.horizon) + 1)
    fc_fit = pollfit.fit_smoothed(ctx.ratio_series, train_polls, cfg.forecast_window,
                                  fc_range, cfg.min_overlap)
    report = pollfit.forecast(ctx.ratio_series, polls.y_a, fc_fit, cfg.horizon, train_until)
    tmp = ctx.store.tmp("forecast.csv")
    report.write_csv(tmp)
    ctx.store.add("fit", "forecast", tmp, ".csv")
    tmp = ctx.store.tmp("forecast.json")
    report.save_json(tmp)
    ctx.store.add("fit", "forecast_summary", tmp, ".json")
    ctx.store.set_params("fit", {
        "fit": fit.as_dict(), "forecast": report.as_dict(),
        "train_until": train_until.isoformat(),
    })


def stage_benchmark(ctx: PipelineContext) -> None:
    cfg = ctx.cfg
    kws = ctx.world.mention_keywords or None
    cats = ctx.world.category_hashtags or None
    mentions = baselines_mod.metric_mentions(ctx.corpus, kws)
    hashtags = baselines_mod.metric_hashtag_counts(ctx.corpus, cats)
    sent_model, sent_vocab = baselines_mod.train_sentiment_classifier(
        ctx.corpus, lam=cfg.lam, seed=_stage_seed(cfg.seed, "sentiment")
    )
    emotion = baselines_mod.metric_mentions_emotion(ctx.corpus, sent_model, sent_vocab, kws)

    comparison: dict[str, dict] = {}
    cand = sorted((kws or baselines_mod.DEFAULT_MENTION_KEYWORDS))[0]
    for metric in (mentions, emotion, hashtags):
        tmp = ctx.store.tmp(f"metric_{metric.name}.csv")
        metric.write_csv(tmp)
        ctx.store.add("benchmark", metric.name, tmp, ".csv")
        try:
            mfit = pollfit.fit_smoothed(metric.series(cand), ctx.polls.y_a,
                                        cfg.fit_window, cfg.t_d_range(), cfg.min_overlap)
            comparison[metric.name] = mfit.as_dict()
        except pollfit.InsufficientOverlapError as exc:
            comparison[metric.name] = {"error": str(exc)}
    comparison["opinion"] = ctx.fit.as_dict()
    tmp = ctx.store.tmp("benchmark.json")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(comparison, fh, sort_keys=True, indent=1)
    ctx.store.add("benchmark", "comparison", tmp, ".json")
    ctx.store.set_params("benchmark", {"metrics": sorted(m.name for m in (mentions, emotion, hashtags))})
