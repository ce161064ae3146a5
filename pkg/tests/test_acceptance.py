"""Acceptance suite.

One test per criterion, each printing a PASS line with the measured numbers
once its assertions hold (run with -s or -rP to see them). Tolerances are
pinned here and nowhere else.
"""

import hashlib
import math
import time
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from opiniontrend.series import DailySeries
from oracles import closure_decomposition, exact_hypergeom_sf

START = date(2024, 1, 1)


def _series(vals):
    return DailySeries(START, np.array(vals, dtype=float))


def _report(n, msg):
    print(f"ACCEPTANCE {n:02d} PASS: {msg}")


# -- 1: component decomposition vs brute-force reachability oracle -------------


def test_criterion_01_components_match_oracle():
    from opiniontrend.influence import DailyGraph, decompose_components

    rng = np.random.default_rng(20240101)
    t0 = time.time()
    for trial in range(100):
        n = int(rng.integers(2, 51))
        p = float(rng.uniform(0.01, 0.15))
        nodes = [f"n{i:02d}" for i in range(n)]
        edges = [
            (nodes[i], nodes[j])
            for i in range(n)
            for j in range(n)
            if i != j and rng.random() < p
        ]
        succ = {}
        node_set = set(nodes)
        for u, v in edges:
            succ.setdefault(u, set()).add(v)
        g = DailyGraph(day=START, nodes=frozenset(node_set),
                       edges={u: frozenset(vs) for u, vs in succ.items()})
        dec = decompose_components(g)
        scgc, wcgc, corona = closure_decomposition(nodes, edges)
        assert dec.scgc == frozenset(scgc), f"trial {trial}: SCGC mismatch"
        assert dec.wcgc == frozenset(wcgc), f"trial {trial}: WCGC mismatch"
        assert dec.corona == frozenset(corona), f"trial {trial}: corona mismatch"
    elapsed = time.time() - t0
    assert elapsed < 5.0, f"oracle comparison took {elapsed:.2f}s"
    _report(1, f"100 random digraphs match the closure oracle exactly in {elapsed:.2f}s")


# -- 2: hypergeometric significance vs exact rational enumeration --------------


def test_criterion_02_hypergeometric_exact_and_log_space():
    from opiniontrend.cooccur import log_hypergeom_sf

    t0 = time.time()
    checked = 0
    worst = 0.0
    for n in range(1, 31):
        for ci in range(0, n + 1):
            for cj in range(0, n + 1):
                hi = min(ci, cj)
                for k in range(0, hi + 1):
                    exact = float(exact_hypergeom_sf(k, ci, cj, n))
                    got = math.exp(log_hypergeom_sf(k, ci, cj, n))
                    rel = abs(got - exact) / exact
                    worst = max(worst, rel)
                    assert rel <= 1e-12, (k, ci, cj, n, got, exact)
                    checked += 1
    sweep_time = time.time() - t0

    big_n = 10**6
    combos = [(500_000, 400_000), (900_000, 800_000), (100_000, 50_000)]
    for ci, cj in combos:
        ks = sorted({1, 100, cj // 100, cj // 10, cj // 4, cj // 2,
                     (ci * cj) // big_n, (ci * cj) // big_n + 1000, cj - 1, cj})
        vals = [log_hypergeom_sf(k, ci, cj, big_n) for k in ks if 0 <= k <= cj]
        assert all(np.isfinite(v) for v in vals)
        assert all(a >= b for a, b in zip(vals, vals[1:])), (ci, cj)
        assert min(vals) < -700.0  # far below what exp() could represent
    _report(2, f"{checked} exact-enumeration cases within 1e-12 (worst {worst:.2e}, "
               f"{sweep_time:.1f}s); margins at N=1e6 finite and monotone")


# -- 3: propagation recovery on planted worlds ---------------------------------


def _propagation_world_seeds():
    from opiniontrend.propagation import SeedAssignment

    return SeedAssignment(
        classes=("blue", "red"),
        seeds={"blue": frozenset({"bluetag00", "bluetag01"}),
               "red": frozenset({"redtag00", "redtag01"})},
    )


def test_criterion_03_propagation_recovery():
    from opiniontrend.cooccur import build_significant_graph, count_hashtags
    from opiniontrend.propagation import (
        SeedAssignment, auto_accept_all, run_until_stable,
    )
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config

    total_correct = 0
    total_planted = 0
    for seed in range(20):
        cfg = published_rates_config(n_users=300, n_days=40, event_tag_rate=0.10)
        corpus, truth = generate_synthetic_corpus(cfg, seed=1000 + seed)
        graph = build_significant_graph(corpus, p0=1e-6)
        stats = count_hashtags(corpus)
        result = run_until_stable(graph, _propagation_world_seeds(), stats, 0.001,
                                  auto_accept_all, provenance="propagated")
        assert result.stable
        planted = [t for t in graph.vertices if t in truth.hashtag_class]
        correct = sum(
            1 for t in planted if result.assignment.class_of(t) == truth.hashtag_class[t]
        )
        total_correct += correct
        total_planted += len(planted)
    recovery = total_correct / total_planted
    assert recovery >= 0.95, f"2-camp recovery {recovery:.3f}"

    # K = 3 planted world (multi-candidate analogue)
    cfg3 = published_rates_config(
        n_users=700, n_days=50, camps=("blue", "green", "red"),
        camp_shares=(0.4, 0.27, 0.33), support_means=(0.38, 0.27, 0.35),
        event_response=(0.25, 0.1, 0.1), tweets_per_user=(2.6, 3.0, 3.9),
        mention_own_base=(0.4, 0.4, 0.5), mention_other_base=(0.15, 0.2, 0.3),
        word_mix=0.5,
    )
    corpus3, truth3 = generate_synthetic_corpus(cfg3, seed=77)
    graph3 = build_significant_graph(corpus3, p0=1e-6)
    stats3 = count_hashtags(corpus3)
    from opiniontrend.propagation import SeedAssignment

    seeds3 = SeedAssignment(
        classes=cfg3.camps,
        seeds={c: frozenset(cfg3.seed_tags(c)) for c in cfg3.camps},
    )
    result3 = run_until_stable(graph3, seeds3, stats3, 0.001, auto_accept_all,
                               provenance="propagated")
    per_class_correct = {}
    for camp in cfg3.camps:
        planted = [t for t in graph3.vertices if truth3.hashtag_class.get(t) == camp]
        correct = [t for t in planted if result3.assignment.class_of(t) == camp]
        assert len(correct) >= 5, f"class {camp} not recovered"
        per_class_correct[camp] = (len(correct), len(planted))
    pooled3 = sum(c for c, _ in per_class_correct.values()) / sum(
        p for _, p in per_class_correct.values()
    )
    assert pooled3 >= 0.95, f"3-camp recovery {pooled3:.3f}"
    _report(3, f"2-camp recovery {recovery:.3f} over 20 seeds; "
               f"3-camp recovery {pooled3:.3f} with all classes populated")


# -- 4: classifier gradients, solver oracle, CV score --------------------------


def test_criterion_04_classifier():
    from opiniontrend.classifier import (
        _gradient, _objective, cross_validate, rows_to_csr, train,
    )
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config
    from opiniontrend.textfeat import build_training_set, build_vocabulary, vectorize
    from oracles import solver_logistic_loss

    # gradients vs central finite differences
    rng = np.random.default_rng(404)
    d = 7
    rows = []
    labels = []
    for _ in range(30):
        k = int(rng.integers(1, d))
        rows.append(np.sort(rng.choice(d, size=k, replace=False)).astype(np.int64))
        labels.append("pos" if rng.random() < 0.5 else "neg")
    labels[0], labels[1] = "pos", "neg"
    X = rows_to_csr(rows, d)
    y_pm = np.array([1.0 if l == "pos" else -1.0 for l in labels])
    w = rng.normal(0, 0.5, d)
    b = 0.3
    lam = 0.02
    gw, gb = _gradient(X, y_pm, w, b, lam)
    eps = 1e-6
    worst_rel = 0.0
    for j in range(d):
        wp, wm = w.copy(), w.copy()
        wp[j] += eps
        wm[j] -= eps
        num = (_objective(X, y_pm, wp, b, lam) - _objective(X, y_pm, wm, b, lam)) / (2 * eps)
        worst_rel = max(worst_rel, abs(num - gw[j]) / max(abs(num), 1e-12))
    num_b = (_objective(X, y_pm, w, b + eps, lam) - _objective(X, y_pm, w, b - eps, lam)) / (2 * eps)
    worst_rel = max(worst_rel, abs(num_b - gb) / max(abs(num_b), 1e-12))
    assert worst_rel <= 1e-5

    # 200-example instances vs the high-precision convex solver
    worst_gap = 0.0
    for inst_seed in (11, 12):
        rng = np.random.default_rng(inst_seed)
        w_true = rng.normal(0, 2.0, 12)
        rows, labels = [], []
        for _ in range(200):
            k = int(rng.integers(1, 12))
            idx = np.sort(rng.choice(12, size=k, replace=False)).astype(np.int64)
            z = w_true[idx].sum()
            labels.append("pos" if rng.random() < 1 / (1 + math.exp(-z)) else "neg")
            rows.append(idx)
        if len(set(labels)) < 2:
            labels[0] = "neg" if labels[1] == "pos" else "pos"
        model = train(rows, labels, ("neg", "pos"), 12, lam=0.05, seed=1)
        reference = solver_logistic_loss(
            rows, [1.0 if l == "pos" else -1.0 for l in labels], 12, 0.05
        )
        worst_gap = max(worst_gap, abs(model.final_loss - reference))
    assert worst_gap <= 1e-6

    # 10-fold CV on the published-rates generator
    cfg = published_rates_config(n_users=400, n_days=50)
    corpus, truth = generate_synthetic_corpus(cfg, seed=55)
    ts = build_training_set(corpus, truth.hashtag_class, seed=1)
    rng = np.random.default_rng(2)
    idx = sorted(rng.choice(ts.size, size=min(3000, ts.size), replace=False).tolist())
    examples = [ts.examples[i] for i in idx]
    vocab = build_vocabulary(ts)
    rows = [vectorize(ex.tokens, vocab) for ex in examples]
    labels = [ex.cls for ex in examples]
    report = cross_validate(rows, labels, ts.classes, vocab.size,
                            lam_grid=(1e-5, 1e-4, 1e-3), k=10, seed=3)
    assert report.mean.f1 >= 0.75, f"CV F1 {report.mean.f1:.3f}"
    _report(4, f"gradient rel err {worst_rel:.1e}; solver gap {worst_gap:.1e}; "
               f"CV F1 {report.mean.f1:.3f} AUROC {report.mean.auroc:.3f}")


# -- 5: opinion series on the planted 60/40 world -------------------------------


def test_criterion_05_sixty_forty_world():
    from opiniontrend.classifier import train
    from opiniontrend.opinion import classify_corpus, daily_ratio_series
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config
    from opiniontrend.textfeat import build_training_set, build_vocabulary, vectorize

    cfg = published_rates_config(
        n_users=600, n_days=40, word_mix=0.6, words_per_tweet=9.0,
        camp_shares=(0.5, 0.5), support_means=(0.6, 0.4), event_response=(0.0, 0.0),
    )
    corpus, truth = generate_synthetic_corpus(cfg, seed=31)
    ts = build_training_set(corpus, truth.hashtag_class, seed=0)
    vocab = build_vocabulary(ts)
    rows = [vectorize(ex.tokens, vocab) for ex in ts.examples]
    model = train(rows, [e.cls for e in ts.examples], ts.classes, vocab.size,
                  lam=1e-4, seed=0, max_epochs=25)
    preds = classify_corpus(corpus, model, vocab)
    series = daily_ratio_series(corpus, preds, ("blue", "red"))
    ratios = series.ratio("blue").values
    within = 0
    days = 0
    for i in range(len(series.days)):
        n = series.counts["blue"][i] + series.counts["red"][i]
        if n == 0:
            continue
        days += 1
        if abs(ratios[i] - 0.6) <= 3 * math.sqrt(0.6 * 0.4 / n):
            within += 1
    coverage = within / days
    assert coverage >= 0.95, f"3-sigma coverage {coverage:.3f}"

    unc = np.array(series.unclassified, dtype=float)
    tot = unc + np.array(series.counts["blue"]) + np.array(series.counts["red"])
    tie_frac = float(unc.sum() / tot.sum())
    assert abs(tie_frac - cfg.tie_rate) <= 0.01, f"tie fraction {tie_frac:.4f}"
    _report(5, f"daily ratio within 3 sigma of 0.60 on {coverage:.1%} of days; "
               f"unclassified {tie_frac:.3f} vs planted {cfg.tie_rate}")


# -- 6: affine-delay fit recovery ------------------------------------------------


def test_criterion_06_fit_recovery():
    from opiniontrend.pollfit import backward_moving_average, fit_smoothed

    t0 = time.time()
    rng = np.random.default_rng(42)
    n = 170
    t = np.arange(n)
    raw = 0.5 + 0.09 * np.sin(2 * np.pi * t / 47) + 0.03 * np.sin(2 * np.pi * t / 19 + 0.7)
    results = []
    for w in (9, 13, 21):
        t_d = 10 - (w - 1) // 2
        smoothed = backward_moving_average(_series(raw), w)
        polls = np.full(n, np.nan)
        for i in range(n):
            j = i - t_d
            if j >= w - 1:
                polls[i] = 0.185 * smoothed.values[j] + 0.415 + rng.normal(0, 0.002)
        fit = fit_smoothed(_series(raw), _series(polls), w)
        assert abs(fit.A - 0.185) <= 0.01, f"w={w}: A={fit.A}"
        assert abs(fit.b - 0.415) <= 0.01, f"w={w}: b={fit.b}"
        assert fit.T_d == 10, f"w={w}: T_d={fit.T_d}"
        results.append((w, fit.A, fit.b))
    elapsed = time.time() - t0
    assert elapsed < 1.0, f"fit recovery took {elapsed:.2f}s"
    msg = "; ".join(f"w={w}: A={a:.4f} b={b:.4f} T_d=10" for w, a, b in results)
    _report(6, f"{msg} ({elapsed*1000:.0f} ms)")


# -- 7: forecast beats extrapolation baselines on trend reversals ---------------


def test_criterion_07_forecast_harness():
    from opiniontrend.pollfit import backward_moving_average, fit_smoothed, forecast

    def world(seed, n=170, reversal=110, t_d=8, w=9, noise=0.002):
        rng = np.random.default_rng(seed)
        t = np.arange(n)
        trend = np.where(
            t < reversal, 0.5 + 0.0012 * t,
            0.5 + 0.0012 * reversal - 0.0022 * (t - reversal),
        ) + 0.03 * np.sin(2 * np.pi * t / 35)
        raw = trend + rng.normal(0, 0.01, n)
        tw = _series(raw)
        sm = backward_moving_average(tw, w)
        pv = np.full(n, np.nan)
        for i in range(n):
            j = i - t_d
            if j >= w - 1:
                pv[i] = 0.185 * sm.values[j] + 0.415 + rng.normal(0, noise)
        return tw, _series(pv)

    train_until = START + timedelta(days=100)
    rmses = []
    for seed in range(10):
        tw, polls = world(seed)
        train_polls = DailySeries(
            polls.start_day,
            np.where([polls.day_at(i) <= train_until for i in range(len(polls))],
                     polls.values, np.nan),
        )
        fit = fit_smoothed(tw, train_polls, 9, t_d_range=range(0, 20))
        rep = forecast(tw, polls, fit, horizon=7, train_until=train_until)
        assert rep.rmse_twitter < rep.rmse_linear, f"seed {seed}"
        assert rep.rmse_twitter < rep.rmse_constant, f"seed {seed}"
        rmses.append((rep.rmse_twitter, rep.rmse_linear, rep.rmse_constant))
    mean = np.mean(rmses, axis=0)
    _report(7, f"10/10 seeds: twitter {mean[0]:.2f}% < constant {mean[2]:.2f}% "
               f"< linear {mean[1]:.2f}% (7-day horizon)")


# -- 8: attention baselines: fixtures exact + opinion dominates -----------------


def test_criterion_08_baselines():
    from conftest import rec, window
    from opiniontrend.baselines import (
        metric_hashtag_counts, metric_mentions, metric_mentions_emotion,
        train_sentiment_classifier,
    )
    from opiniontrend.classifier import train
    from opiniontrend.opinion import classify_corpus, daily_ratio_series
    from opiniontrend.pollfit import fit_smoothed
    from opiniontrend.synth import (
        generate_synthetic_corpus, published_rates_config, planted_polls,
    )
    from opiniontrend.textfeat import build_training_set, build_vocabulary, vectorize

    # hand-enumeration fixtures
    kws = {"blue": frozenset({"candblue"}), "red": frozenset({"candred"})}
    cats = {
        "blue": {"pro": frozenset({"bluetag00"}), "anti": frozenset({"redtag01"})},
        "red": {"pro": frozenset({"redtag00"}), "anti": frozenset({"bluetag01"})},
    }
    fixture = window([
        rec(user="a", text="candblue is fine"),
        rec(user="b", text="candblue vs candred", ts="2024-01-01T13:00:00Z"),
        rec(user="c", text="candred!", ts="2024-01-01T14:00:00Z"),
        rec(user="c", text="again candred", ts="2024-01-01T15:00:00Z"),
        rec(user="d", text="nothing here", ts="2024-01-01T16:00:00Z"),
    ])
    m = metric_mentions(fixture, kws)
    assert m.values["blue"][0] == pytest.approx(0.5)  # {a,b} vs {b,c}
    tag_fixture = window([
        rec(user="a", hashtags=["bluetag00"]),
        rec(user="b", hashtags=["redtag01"], ts="2024-01-01T13:00:00Z"),
        rec(user="c", hashtags=["redtag00"], ts="2024-01-01T14:00:00Z"),
        rec(user="d", hashtags=["bluetag01"], ts="2024-01-01T15:00:00Z"),
        rec(user="e", hashtags=["bluetag00"], ts="2024-01-01T16:00:00Z"),
        rec(user="f", hashtags=["misc00"], ts="2024-01-01T17:00:00Z"),
    ])
    mh = metric_hashtag_counts(tag_fixture, cats)
    assert mh.values["blue"][0] == pytest.approx(3 / 5)  # {a,e}+{b} over 5 users

    # divergence world: attention channels noisy, support clean
    cfg = published_rates_config(n_users=400, n_days=70, word_mix=0.5,
                             attention_noise=0.5, tag_rate_noise=0.5,
                             sentiment_noise=0.4)
    corpus, truth = generate_synthetic_corpus(cfg, seed=88)
    polls = planted_polls(truth, cfg, seed=88)
    ts = build_training_set(corpus, truth.hashtag_class, seed=1)
    vocab = build_vocabulary(ts)
    rows = [vectorize(ex.tokens, vocab) for ex in ts.examples]
    model = train(rows, [e.cls for e in ts.examples], ts.classes, vocab.size,
                  1e-4, seed=2, max_epochs=25)
    preds = classify_corpus(corpus, model, vocab)
    opinion_ratio = daily_ratio_series(corpus, preds, ("blue", "red")).ratio("blue")
    r_opinion = fit_smoothed(opinion_ratio, polls, 13, min_overlap=20).pearson_r

    wkws = cfg.mention_keywords()
    baselines = {"mentions": metric_mentions(corpus, wkws)}
    baselines["hashtags"] = metric_hashtag_counts(corpus, cfg.category_hashtags())
    smodel, svocab = train_sentiment_classifier(corpus, seed=4)
    baselines["mentions-emotion"] = metric_mentions_emotion(corpus, smodel, svocab, wkws)
    r_base = {}
    for name, metric in baselines.items():
        r_base[name] = fit_smoothed(metric.series("blue"), polls, 13,
                                    min_overlap=20).pearson_r
    for name, r in r_base.items():
        assert r_opinion > r, f"opinion r {r_opinion:.3f} not above {name} r {r:.3f}"
    _report(8, f"fixtures exact; opinion r {r_opinion:.3f} > " +
               ", ".join(f"{k} {v:.3f}" for k, v in sorted(r_base.items())))


# -- 9: behavior analytics at published rates -----------------------------------


def test_criterion_09_behavior_analytics():
    from opiniontrend.classifier import train
    from opiniontrend.opinion import (
        activity_stats, behavior_correlations, classify_corpus, daily_ratio_series,
    )
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config
    from opiniontrend.textfeat import build_training_set, build_vocabulary, vectorize

    cfg = published_rates_config(word_mix=0.5)  # 800 users, 100 days, 2.6/3.9 rates
    corpus, truth = generate_synthetic_corpus(cfg, seed=202)
    ts = build_training_set(corpus, truth.hashtag_class, seed=1)
    vocab = build_vocabulary(ts)
    rows = [vectorize(ex.tokens, vocab) for ex in ts.examples]
    model = train(rows, [e.cls for e in ts.examples], ts.classes, vocab.size,
                  1e-4, seed=2, max_epochs=25)
    preds = classify_corpus(corpus, model, vocab)
    series = daily_ratio_series(corpus, preds, ("blue", "red"))
    profile = activity_stats(corpus, preds, ("blue", "red"))
    report = behavior_correlations(series)

    mean_blue = profile.pooled_mean_tweets["blue"]
    mean_red = profile.pooled_mean_tweets["red"]
    assert abs(mean_blue - 2.6) / 2.6 <= 0.05, f"blue mean {mean_blue:.3f}"
    assert abs(mean_red - 3.9) / 3.9 <= 0.05, f"red mean {mean_red:.3f}"
    assert abs(report.sigma_ratio - 2.1) / 2.1 <= 0.15, f"sigma ratio {report.sigma_ratio:.3f}"
    # planted construction: responsive camp positive, steady camp negative
    assert report.spearman["blue"] > 0
    assert report.spearman["red"] < 0
    _report(9, f"means {mean_blue:.2f}/{mean_red:.2f} vs 2.6/3.9; "
               f"sigma ratio {report.sigma_ratio:.2f} vs 2.1; "
               f"rho blue {report.spearman['blue']:.2f} > 0 > "
               f"rho red {report.spearman['red']:.2f}")


# -- 10: robustness to hashtag-set subsampling ----------------------------------


def test_criterion_10_subsample_robustness():
    from opiniontrend.classifier import train
    from opiniontrend.cooccur import build_significant_graph, count_hashtags
    from opiniontrend.opinion import classify_corpus, daily_ratio_series
    from opiniontrend.propagation import (
        auto_accept_all, run_until_stable, subsample_assignment,
    )
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config
    from opiniontrend.textfeat import build_training_set, build_vocabulary, vectorize

    cfg = published_rates_config(n_users=300, n_days=40, event_tag_rate=0.10)
    corpus, truth = generate_synthetic_corpus(cfg, seed=301)
    graph = build_significant_graph(corpus, p0=1e-6)
    stats = count_hashtags(corpus)
    result = run_until_stable(graph, _propagation_world_seeds(), stats, 0.001,
                              auto_accept_all, provenance="propagated")

    def ratio_with(assignment, seed):
        ts = build_training_set(corpus, assignment.as_label_map(), seed=seed)
        vocab = build_vocabulary(ts)
        rows = [vectorize(ex.tokens, vocab) for ex in ts.examples]
        model = train(rows, [e.cls for e in ts.examples], ts.classes, vocab.size,
                      1e-4, seed=seed, max_epochs=25)
        preds = classify_corpus(corpus, model, vocab)
        return daily_ratio_series(corpus, preds, ("blue", "red")).ratio("blue").values

    full = ratio_with(result.assignment, 0)
    rng = np.random.default_rng(9)
    deviations = []
    for k in range(3):
        sub = subsample_assignment(result.assignment, 0.9, rng)
        vals = ratio_with(sub, k + 1)
        mask = ~(np.isnan(full) | np.isnan(vals))
        deviations.append(float(np.sqrt(np.mean((full[mask] - vals[mask]) ** 2))) * 100)
    assert max(deviations) <= 5.0, f"RMS deviations {deviations}"
    _report(10, "90% subsample RMS deviations: "
            + ", ".join(f"{d:.2f}" for d in deviations) + " points (<= 5)")


# -- 11: end-to-end determinism and speed ---------------------------------------


def test_criterion_11_determinism_and_speed(tmp_path):
    from opiniontrend import pipeline as pl
    from opiniontrend.synth import fixture_config, write_world

    paths = write_world(tmp_path / "world", fixture_config(), seed=42)
    n_tweets = sum(1 for _ in open(paths["corpus"], encoding="utf-8"))
    assert 8000 <= n_tweets <= 15000, f"fixture size {n_tweets}"

    def run(out):
        cfg = pl.PipelineConfig(
            corpus=paths["corpus"], polls=paths["polls"], seeds=paths["seeds"],
            world=paths["world"], out=str(out), curation="auto", seed=7,
        )
        t0 = time.time()
        store = pl.run_all(cfg)
        return store, time.time() - t0

    store1, dt1 = run(tmp_path / "out1")
    store2, dt2 = run(tmp_path / "out2")
    assert dt1 < 60.0, f"run-all took {dt1:.1f}s"
    hashes1 = {
        (stage, name): art["sha256"]
        for stage, e in store1.manifest["stages"].items()
        for name, art in e["artifacts"].items()
    }
    hashes2 = {
        (stage, name): art["sha256"]
        for stage, e in store2.manifest["stages"].items()
        for name, art in e["artifacts"].items()
    }
    assert hashes1 == hashes2
    for (stage, name), digest in hashes1.items():
        path = Path(store1.out_dir) / store1.manifest["stages"][stage]["artifacts"][name]["file"]
        assert hashlib.sha256(path.read_bytes()).hexdigest() == digest
    _report(11, f"{len(hashes1)} artifacts hash-identical across runs; "
                f"full run on {n_tweets}-tweet fixture in {dt1:.1f}s")
