"""Command-line interface.

Subcommands cover each pipeline stage plus ``run-all`` for the end-to-end
batch run and ``serve`` for the curation/series HTTP service. Stage commands
work from explicit artifact paths so any step can be rerun in isolation.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from datetime import date

from . import pipeline as pl

log = logging.getLogger("opiniontrend")


def _ratio_series_from_opinion_csv(path):
    import csv as _csv

    from .series import DailySeries

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = _csv.reader(fh)
        header = next(reader)
        ratio_col = next(c for c in header if c.startswith("r_"))
        idx = header.index(ratio_col)
        mapping = {}
        for row in reader:
            if row:
                mapping[date.fromisoformat(row[0])] = (
                    float(row[idx]) if row[idx] != "" else math.nan
                )
    return DailySeries.from_mapping(mapping), ratio_col[2:]


def _cfg_from_args(args) -> pl.PipelineConfig:
    cfg = pl.parse_config(args.config) if args.config else pl.PipelineConfig()
    overrides = {
        key: getattr(args, attr)
        for key, attr in (
            ("corpus", "corpus"), ("polls", "polls"), ("seeds", "seeds"),
            ("world", "world"), ("decisions", "decisions"), ("out", "out"),
            ("curation", "curation"), ("seed", "seed"), ("p0", "p0"), ("r", "r"),
            ("fit_window", "window"), ("windows", "windows"),
            ("horizon", "horizon"), ("lam", "lam"), ("train_until", "train_until"),
            ("strict", "strict"),
        )
        if hasattr(args, attr) and getattr(args, attr) is not None
    }
    return pl.apply_overrides(cfg, {k: str(v) for k, v in overrides.items()})


def cmd_synth(args) -> int:
    from .synth import fixture_config, published_rates_config, write_world

    preset = fixture_config if args.preset == "fixture" else published_rates_config
    overrides = {}
    if args.users is not None:
        overrides["n_users"] = args.users
    if args.days is not None:
        overrides["n_days"] = args.days
    cfg = preset(**overrides)
    paths = write_world(args.out, cfg, args.seed)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_corpus(args) -> int:
    from .records import FilterSpec, filter_official_clients, filter_strict_keywords, load_corpus

    corpus = load_corpus(args.path)
    print(f"records: {corpus.num_records}  days: {len(corpus.day_list)}  "
          f"malformed: {corpus.malformed_count}")
    if args.action == "load":
        return 0
    spec = FilterSpec(
        official_clients=(
            frozenset(args.official_clients.split(","))
            if args.official_clients
            else pl.WorldInfo.load(args.world).official_clients
            if args.world
            else FilterSpec().official_clients
        ),
        strict_rules=tuple(
            tuple(part.split("+")) for part in args.strict_keywords.split("|")
        ) if args.strict_keywords else (),
    )
    before = corpus.num_records
    corpus = filter_official_clients(corpus, spec)
    if spec.strict_rules:
        corpus = filter_strict_keywords(corpus, spec)
    print(f"retained: {corpus.num_records}/{before}")
    if args.out:
        corpus.save(args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_graph(args) -> int:
    from .influence import component_size_series
    from .records import load_corpus

    excluded = frozenset()
    if args.world:
        excluded = pl.WorldInfo.load(args.world).excluded_accounts
    corpus = load_corpus(args.corpus)
    series = component_size_series(corpus, excluded)
    series.write_csv(args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_cooccur(args) -> int:
    import os

    from .cooccur import (
        build_significant_graph, count_hashtags, detect_communities, save_stats_json,
    )
    from .records import load_corpus

    os.makedirs(args.out, exist_ok=True)
    corpus = load_corpus(args.corpus)
    stats = count_hashtags(corpus)
    graph = build_significant_graph(corpus, p0=args.p0)
    communities = (
        detect_communities(graph, seed=args.seed).membership if graph.vertex_count else None
    )
    graph.write_edges_csv(os.path.join(args.out, "edges.csv"))
    graph.write_vertices_csv(os.path.join(args.out, "vertices.csv"), communities)
    graph.save_node_link(os.path.join(args.out, "graph.json"), communities=communities)
    save_stats_json(stats, os.path.join(args.out, "stats.json"))
    print(f"raw {graph.raw_vertex_count} vertices / {graph.raw_edge_count} edges -> "
          f"filtered {graph.vertex_count} / {graph.edge_count}")
    return 0


def cmd_propagate(args) -> int:
    import os

    from .cooccur import load_graph_csv, load_stats_json
    from .propagation import (
        BatchDecisions, auto_accept_all, load_seeds_file, run_until_stable, PROPAGATED,
    )

    graph = load_graph_csv(
        os.path.join(args.graph, "edges.csv"),
        os.path.join(args.graph, "vertices.csv"),
        args.p0,
    )
    stats = load_stats_json(os.path.join(args.graph, "stats.json"))
    seeds = load_seeds_file(args.seeds)
    if args.decisions:
        source = BatchDecisions.from_csv(args.decisions)
        provenance = "curated-in"
    else:
        source = auto_accept_all
        provenance = PROPAGATED
    result = run_until_stable(graph, seeds, stats, args.r, source, provenance=provenance)
    os.makedirs(args.out, exist_ok=True)
    result.assignment.save(os.path.join(args.out, "assignment.json"))
    result.write_audit(os.path.join(args.out, "audit.jsonl"))
    print(f"stable={result.stable} iterations={result.iterations} "
          f"assigned={ {c: len(result.assignment.tags_of(c)) for c in result.assignment.classes} }")
    return 0


def cmd_trainset(args) -> int:
    import os

    from .propagation import ClassAssignment
    from .records import load_corpus
    from .textfeat import build_training_set, build_vocabulary

    corpus = load_corpus(args.corpus)
    assignment = ClassAssignment.load(args.assignment)
    ts = build_training_set(corpus, assignment.as_label_map(), seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    ts.save(os.path.join(args.out, "trainset.jsonl"))
    vocab = build_vocabulary(ts)
    vocab.save(os.path.join(args.out, "vocab.json"))
    print(f"examples: {ts.size} (per class {ts.size // len(ts.classes)})  "
          f"features: {vocab.size}")
    return 0


def cmd_classifier(args) -> int:
    from .classifier import cross_validate, predict_tweet, train, ModelParams
    from .textfeat import TrainingSet, Vocabulary, tokenize, vectorize

    if args.action == "predict":
        model = ModelParams.load(args.model)
        vocab = Vocabulary.load(args.vocab)
        cls, p = predict_tweet(model, vectorize(tokenize(args.text), vocab))
        print(f"{cls}\t{p:.4f}")
        return 0

    ts = TrainingSet.load(args.trainset)
    vocab = Vocabulary.load(args.vocab)
    rows = [vectorize(ex.tokens, vocab) for ex in ts.examples]
    labels = [ex.cls for ex in ts.examples]
    if args.action == "train":
        model = train(rows, labels, ts.classes, vocab.size, args.lam, seed=args.seed,
                      vocab_hash=vocab.content_hash())
        model.save(args.out)
        print(f"loss: {model.final_loss:.6f}  wrote {args.out}")
        return 0
    report = cross_validate(rows, labels, ts.classes, vocab.size, k=args.k, seed=args.seed)
    print(json.dumps(report.as_dict(), indent=1, sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, indent=1, sort_keys=True)
    return 0


def cmd_opinion(args) -> int:
    import os

    from .classifier import ModelParams
    from .influence import daily_decompositions
    from .opinion import (
        activity_stats, behavior_correlations, classify_corpus, cumulative_opinion,
        daily_ratio_series,
    )
    from .records import load_corpus
    from .textfeat import Vocabulary

    corpus = load_corpus(args.corpus)
    model = ModelParams.load(args.model)
    vocab = Vocabulary.load(args.vocab)
    classes = model.classes
    predictions = classify_corpus(corpus, model, vocab)
    os.makedirs(args.out, exist_ok=True)
    excluded = pl.WorldInfo.load(args.world).excluded_accounts if args.world else frozenset()
    decs = daily_decompositions(corpus, excluded)
    scopes = {
        "whole": None,
        "scgc": {d: dec.scgc for d, dec in decs.items()},
        "wcgc": {d: dec.wcgc for d, dec in decs.items()},
    }
    whole = None
    for scope, users in scopes.items():
        series = daily_ratio_series(corpus, predictions, classes, scope=scope, scope_users=users)
        if scope == "whole":
            whole = series
        series.write_csv(os.path.join(args.out, f"opinion_{scope}.csv"))
    cumulative_opinion(corpus, predictions, classes).save(os.path.join(args.out, "cumulative.json"))
    activity_stats(corpus, predictions, classes).save(os.path.join(args.out, "activity.json"))
    behavior_correlations(whole).save(os.path.join(args.out, "behavior.json"))
    print(f"wrote opinion series to {args.out}")
    return 0


def cmd_fit(args) -> int:
    from .pollfit import fit_smoothed, load_polls_csv

    twitter, _ = _ratio_series_from_opinion_csv(args.opinion)
    polls = load_polls_csv(args.polls)
    fit = fit_smoothed(twitter, polls.y_a, args.window, range(0, args.t_d_max + 1),
                       args.min_overlap)
    print(json.dumps(fit.as_dict(), indent=1, sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(fit.as_dict(), fh, indent=1, sort_keys=True)
    return 0


def cmd_sweep(args) -> int:
    from .pollfit import load_polls_csv, sweep_window, write_sweep_csv

    twitter, _ = _ratio_series_from_opinion_csv(args.opinion)
    polls = load_polls_csv(args.polls)
    start, step, stop = (int(x) for x in args.windows.split(":"))
    fits = sweep_window(twitter, polls.y_a, range(start, stop + 1, step),
                        range(0, args.t_d_max + 1), args.min_overlap)
    for f in fits:
        r = "nan" if f.pearson_r is None else f"{f.pearson_r:.3f}"
        print(f"w={f.w:3d}  r={r}  rmse={f.rmse_pp:.3f}%  T_d={f.T_d}")
    if args.out:
        write_sweep_csv(args.out, fits)
    return 0


def cmd_forecast(args) -> int:
    from .pollfit import fit_smoothed, forecast, load_polls_csv
    from .series import DailySeries

    import numpy as np

    twitter, _ = _ratio_series_from_opinion_csv(args.opinion)
    polls = load_polls_csv(args.polls)
    train_until = date.fromisoformat(args.train_until)
    train_polls = DailySeries(
        polls.y_a.start_day,
        np.where(
            [polls.y_a.day_at(i) <= train_until for i in range(len(polls.y_a))],
            polls.y_a.values, np.nan,
        ),
    )
    # restrict the delay search to values that admit the horizon
    fit = fit_smoothed(twitter, train_polls, args.window,
                       range(args.horizon, max(args.t_d_max, args.horizon) + 1),
                       args.min_overlap)
    report = forecast(twitter, polls.y_a, fit, args.horizon, train_until)
    print(json.dumps(report.as_dict(), indent=1, sort_keys=True))
    if args.out:
        report.write_csv(args.out)
    return 0


def cmd_benchmark(args) -> int:
    import os

    from .baselines import (
        metric_hashtag_counts, metric_mentions, metric_mentions_emotion,
        train_sentiment_classifier,
    )
    from .records import load_corpus

    corpus = load_corpus(args.corpus)
    world = pl.WorldInfo.load(args.world) if args.world else pl.WorldInfo()
    kws = world.mention_keywords or None
    cats = world.category_hashtags or None
    os.makedirs(args.out, exist_ok=True)
    mentions = metric_mentions(corpus, kws)
    mentions.write_csv(os.path.join(args.out, "metric_mentions.csv"))
    hashtags = metric_hashtag_counts(corpus, cats)
    hashtags.write_csv(os.path.join(args.out, "metric_hashtags.csv"))
    model, vocab = train_sentiment_classifier(corpus, seed=args.seed)
    emotion = metric_mentions_emotion(corpus, model, vocab, kws)
    emotion.write_csv(os.path.join(args.out, "metric_mentions_emotion.csv"))
    print(f"wrote metric series to {args.out}")
    return 0


def cmd_run_all(args) -> int:
    cfg = _cfg_from_args(args)
    try:
        store = pl.run_all(cfg)
    except pl.PipelineStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"manifest: {store.manifest_path}")
    for stage, entry in sorted(store.manifest["stages"].items()):
        for name, art in sorted(entry["artifacts"].items()):
            print(f"  {stage:9s} {name:16s} {art['file']}")
    return 0


def cmd_serve(args) -> int:
    from .service import create_service

    cfg = _cfg_from_args(args)
    store = pl.ArtifactStore(cfg.out)
    handles = create_service(cfg, store, host=args.host, port=args.port,
                             static_dir=args.static, with_session=not args.no_session)
    print(f"serving on http://{args.host}:{handles.port}/")
    try:
        handles.serve_forever()
    except KeyboardInterrupt:
        handles.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opiniontrend",
                                description="Social-media opinion trend pipeline")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic planted world")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=1234)
    s.add_argument("--preset", choices=["published", "fixture"], default="fixture")
    s.add_argument("--users", type=int)
    s.add_argument("--days", type=int)
    s.set_defaults(fn=cmd_synth)

    s = sub.add_parser("corpus", help="load or filter a corpus file")
    s.add_argument("action", choices=["load", "filter"])
    s.add_argument("--path", required=True)
    s.add_argument("--out")
    s.add_argument("--official-clients", dest="official_clients",
                   help="comma-separated allowed source clients")
    s.add_argument("--strict-keywords", dest="strict_keywords",
                   help="rules like 'kw1|kw2+kw3' (| separates rules, + pairs)")
    s.add_argument("--world")
    s.set_defaults(fn=cmd_corpus)

    s = sub.add_parser("graph", help="daily component decomposition series")
    s.add_argument("action", choices=["components"])
    s.add_argument("--corpus", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--world")
    s.set_defaults(fn=cmd_graph)

    s = sub.add_parser("cooccur", help="build the significant co-occurrence graph")
    s.add_argument("action", choices=["build"])
    s.add_argument("--corpus", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--p0", type=float, default=1e-6)
    s.add_argument("--seed", type=int, default=1234)
    s.set_defaults(fn=cmd_cooccur)

    s = sub.add_parser("propagate", help="seeded class propagation with curation")
    s.add_argument("action", choices=["run"])
    s.add_argument("--graph", required=True, help="directory with cooccur outputs")
    s.add_argument("--seeds", required=True)
    s.add_argument("--decisions", help="batch decisions CSV; omit for auto-accept")
    s.add_argument("--r", type=float, default=0.001)
    s.add_argument("--p0", type=float, default=1e-6)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_propagate)

    s = sub.add_parser("trainset", help="build the distant-supervision training set")
    s.add_argument("--corpus", required=True)
    s.add_argument("--assignment", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=1234)
    s.set_defaults(fn=cmd_trainset)

    s = sub.add_parser("classifier", help="train/evaluate/apply the tweet classifier")
    s.add_argument("action", choices=["train", "cv", "predict"])
    s.add_argument("--trainset")
    s.add_argument("--vocab")
    s.add_argument("--model")
    s.add_argument("--text")
    s.add_argument("--lam", type=float, default=1e-4)
    s.add_argument("--k", type=int, default=10)
    s.add_argument("--seed", type=int, default=1234)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_classifier)

    s = sub.add_parser("opinion", help="daily opinion series and behavior analytics")
    s.add_argument("--corpus", required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--vocab", required=True)
    s.add_argument("--world")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_opinion)

    s = sub.add_parser("fit", help="delayed affine fit of opinion to polls")
    s.add_argument("--opinion", required=True, help="opinion series CSV")
    s.add_argument("--polls", required=True)
    s.add_argument("--window", type=int, default=13)
    s.add_argument("--t-d-max", dest="t_d_max", type=int, default=30)
    s.add_argument("--min-overlap", dest="min_overlap", type=int, default=30)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_fit)

    s = sub.add_parser("sweep", help="fit quality as a function of window length")
    s.add_argument("--opinion", required=True)
    s.add_argument("--polls", required=True)
    s.add_argument("--windows", default="1:2:41")
    s.add_argument("--t-d-max", dest="t_d_max", type=int, default=30)
    s.add_argument("--min-overlap", dest="min_overlap", type=int, default=30)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_sweep)

    s = sub.add_parser("forecast", help="predict polls h days ahead vs baselines")
    s.add_argument("--opinion", required=True)
    s.add_argument("--polls", required=True)
    s.add_argument("--train-until", dest="train_until", required=True)
    s.add_argument("--horizon", type=int, default=7)
    s.add_argument("--window", type=int, default=9)
    s.add_argument("--t-d-max", dest="t_d_max", type=int, default=30)
    s.add_argument("--min-overlap", dest="min_overlap", type=int, default=30)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_forecast)

    s = sub.add_parser("benchmark", help="attention baseline metric series")
    s.add_argument("--corpus", required=True)
    s.add_argument("--world")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=1234)
    s.set_defaults(fn=cmd_benchmark)

    s = sub.add_parser("run-all", help="run the full pipeline from a config file")
    _add_config_args(s)
    s.set_defaults(fn=cmd_run_all)

    s = sub.add_parser("serve", help="HTTP curation API and series endpoints")
    _add_config_args(s)
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8765)
    s.add_argument("--static", help="directory of dashboard assets to serve at /")
    s.add_argument("--no-session", dest="no_session", action="store_true",
                   help="serve series endpoints only")
    s.set_defaults(fn=cmd_serve)
    return p


def _add_config_args(s: argparse.ArgumentParser) -> None:
    s.add_argument("--config", help="key = value configuration file")
    s.add_argument("--corpus")
    s.add_argument("--polls")
    s.add_argument("--seeds")
    s.add_argument("--world")
    s.add_argument("--decisions")
    s.add_argument("--out")
    s.add_argument("--curation", choices=["auto", "batch"])
    s.add_argument("--seed", type=int)
    s.add_argument("--p0", type=float)
    s.add_argument("--r", type=float)
    s.add_argument("--window", type=int)
    s.add_argument("--windows")
    s.add_argument("--horizon", type=int)
    s.add_argument("--lam", "--lambda", dest="lam", type=float)
    s.add_argument("--train-until", dest="train_until")
    s.add_argument("--strict", action="store_const", const=True, default=None)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
