import math
from datetime import date

import numpy as np
import pytest

from conftest import rec, window
from opiniontrend.opinion import (
    UNCLASSIFIED,
    activity_stats,
    assign_daily_user_opinion,
    behavior_correlations,
    classify_corpus,
    cumulative_opinion,
    daily_ratio_series,
    daily_user_opinions,
)

CLASSES = ("blue", "red")
DAY = date(2024, 1, 1)


def test_majority_wins():
    udo = assign_daily_user_opinion("u", DAY, {"blue": 3, "red": 1})
    assert udo.cls == "blue"


def test_tie_unclassified():
    udo = assign_daily_user_opinion("u", DAY, {"blue": 2, "red": 2})
    assert udo.cls == UNCLASSIFIED


def test_needs_at_least_one_tweet():
    with pytest.raises(ValueError):
        assign_daily_user_opinion("u", DAY, {})


def _prediction_corpus():
    recs = [
        rec(user="a", tweet_id="p1"),
        rec(user="a", tweet_id="p2", ts="2024-01-01T13:00:00Z"),
        rec(user="b", tweet_id="p3", ts="2024-01-01T14:00:00Z"),
        rec(user="b", tweet_id="p4", ts="2024-01-01T15:00:00Z"),
        rec(user="c", tweet_id="p5", ts="2024-01-02T10:00:00Z"),
    ]
    preds = {"p1": "blue", "p2": "blue", "p3": "blue", "p4": "red", "p5": "red"}
    return window(recs), preds


def test_daily_ratio_series_counts():
    corpus, preds = _prediction_corpus()
    series = daily_ratio_series(corpus, preds, CLASSES)
    assert series.counts["blue"] == [1, 0]
    assert series.counts["red"] == [0, 1]
    assert series.unclassified == [1, 0]
    r = series.ratio("blue")
    assert r.values[0] == pytest.approx(1.0)
    assert r.values[1] == pytest.approx(0.0)


def test_ratio_complementarity():
    corpus, preds = _prediction_corpus()
    series = daily_ratio_series(corpus, preds, CLASSES)
    rb = series.ratio("blue").values
    rr = series.ratio("red").values
    mask = ~np.isnan(rb)
    assert np.allclose(rb[mask] + rr[mask], 1.0)


def test_empty_day_undefined_ratio():
    recs = [rec(user="a", tweet_id="q1"), rec(user="b", tweet_id="q2", ts="2024-01-03T10:00:00Z")]
    corpus = window(recs)
    series = daily_ratio_series(corpus, {"q1": "blue", "q2": "red"}, CLASSES)
    assert math.isnan(series.ratio("blue").values[1])
    assert series.counts["blue"][1] == 0


def test_scope_restriction():
    corpus, preds = _prediction_corpus()
    scope = {DAY: frozenset({"a"}), date(2024, 1, 2): frozenset()}
    series = daily_ratio_series(corpus, preds, CLASSES, scope="scgc", scope_users=scope)
    assert series.counts["blue"] == [1, 0]
    assert series.unclassified == [0, 0]


def test_cumulative_single_user_all_one_camp():
    recs = [rec(user="a", tweet_id=f"c{i}", ts=f"2024-01-0{1+i}T10:00:00Z") for i in range(3)]
    corpus = window(recs)
    preds = {f"c{i}": "blue" for i in range(3)}
    cum = cumulative_opinion(corpus, preds, CLASSES)
    assert cum.shares["blue"] == pytest.approx(1.0)
    assert cum.shares["red"] == 0.0
    assert cum.shares[UNCLASSIFIED] == 0.0


def test_cumulative_invariant_under_day_repartition():
    # same tweets, different days: cumulative user classification unchanged
    preds = {"x1": "blue", "x2": "blue", "x3": "red"}
    one_day = window([
        rec(user="a", tweet_id="x1"),
        rec(user="a", tweet_id="x2", ts="2024-01-01T13:00:00Z"),
        rec(user="a", tweet_id="x3", ts="2024-01-01T14:00:00Z"),
    ])
    spread = window([
        rec(user="a", tweet_id="x1"),
        rec(user="a", tweet_id="x2", ts="2024-01-02T13:00:00Z"),
        rec(user="a", tweet_id="x3", ts="2024-01-03T14:00:00Z"),
    ])
    c1 = cumulative_opinion(one_day, preds, CLASSES)
    c2 = cumulative_opinion(spread, preds, CLASSES)
    assert c1.user_class == c2.user_class == {"a": "blue"}


def test_behavior_correlations_hand_fixture():
    from opiniontrend.opinion import OpinionSeries

    # five days of hand-built counts
    days = [date(2024, 1, d) for d in range(1, 6)]
    series = OpinionSeries(
        classes=CLASSES,
        days=days,
        counts={"blue": [10, 20, 30, 25, 15], "red": [10, 10, 10, 10, 10]},
        unclassified=[0] * 5,
    )
    report = behavior_correlations(series)
    # ranks of n_blue: 1,3,5,4,2 ; ratio_blue ranks identical -> rho = 1
    assert report.spearman["blue"] == pytest.approx(1.0)
    assert report.spearman["red"] is None  # constant count series
    assert report.sigma["red"] == 0.0
    assert report.sigma_ratio is None


def test_behavior_spearman_matches_scipy_hand_check():
    from opiniontrend.opinion import OpinionSeries

    days = [date(2024, 1, d) for d in range(1, 6)]
    nb = [12, 18, 25, 14, 30]
    nr = [20, 16, 15, 22, 12]
    series = OpinionSeries(
        classes=CLASSES, days=days,
        counts={"blue": nb, "red": nr}, unclassified=[0] * 5,
    )
    report = behavior_correlations(series)
    # hand ranks: nb -> 1,3,4,2,5 ; rb = nb/(nb+nr) -> 0.375,0.529,0.625,0.389,0.714
    # rb ranks -> 1,3,4,2,5 ; Spearman rho = 1
    assert report.spearman["blue"] == pytest.approx(1.0)
    assert report.sigma_ratio == pytest.approx(np.std(nb) / np.std(nr))


def test_behavior_needs_three_days():
    from opiniontrend.opinion import OpinionSeries

    series = OpinionSeries(classes=CLASSES, days=[DAY], counts={"blue": [1], "red": [1]},
                           unclassified=[0])
    with pytest.raises(ValueError):
        behavior_correlations(series)


def test_activity_all_users_once_degenerate():
    recs = [
        rec(user="a", tweet_id="a1"),
        rec(user="b", tweet_id="b1", ts="2024-01-01T13:00:00Z"),
    ]
    corpus = window(recs)
    preds = {"a1": "blue", "b1": "red"}
    prof = activity_stats(corpus, preds, CLASSES)
    assert prof.pooled_mean_tweets["blue"] == 1.0
    assert prof.pooled_mean_tweets["red"] == 1.0
    assert prof.ccdf["blue"] == [(1, 1.0)]


def test_activity_threshold_sweep_flip():
    # blue: many low-activity users; red: few high-activity users
    recs = []
    preds = {}
    for i in range(8):
        tid = f"b{i}"
        recs.append(rec(user=f"blue{i}", tweet_id=tid))
        preds[tid] = "blue"
    for i in range(3):
        for j in range(10):
            tid = f"r{i}_{j}"
            recs.append(rec(user=f"red{i}", tweet_id=tid,
                            ts=f"2024-01-01T1{j}:00:00Z"))
            preds[tid] = "red"
    corpus = window(recs)
    prof = activity_stats(corpus, preds, CLASSES, thresholds=(1, 5))
    at1 = prof.threshold_sweep[0]["shares"]
    at5 = prof.threshold_sweep[1]["shares"]
    assert at1["blue"] > at1["red"]
    assert at5["red"] > at5["blue"]


def _pipeline_on_world(corpus, truth, seed=0, classify_subsample=None):
    """Train on distant supervision and classify the whole corpus."""
    from opiniontrend.classifier import train
    from opiniontrend.textfeat import build_training_set, build_vocabulary, vectorize

    ts = build_training_set(corpus, truth.hashtag_class, seed=seed)
    vocab = build_vocabulary(ts)
    rows = [vectorize(ex.tokens, vocab) for ex in ts.examples]
    labels = [ex.cls for ex in ts.examples]
    model = train(rows, labels, ts.classes, vocab.size, lam=1e-4, seed=seed, max_epochs=25)
    return model, vocab


def test_planted_sixty_forty_world_small():
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config

    cfg = published_rates_config(
        n_users=400, n_days=25, word_mix=0.6, words_per_tweet=9.0,
        camp_shares=(0.5, 0.5), support_means=(0.6, 0.4),
        event_response=(0.0, 0.0),
    )
    corpus, truth = generate_synthetic_corpus(cfg, seed=31)
    model, vocab = _pipeline_on_world(corpus, truth)
    preds = classify_corpus(corpus, model, vocab)
    series = daily_ratio_series(corpus, preds, ("blue", "red"))
    ratios = series.ratio("blue").values
    ok = 0
    total = 0
    for i in range(len(series.days)):
        n = series.counts["blue"][i] + series.counts["red"][i]
        if n == 0:
            continue
        total += 1
        sigma = math.sqrt(0.6 * 0.4 / n)
        if abs(ratios[i] - 0.6) <= 3 * sigma:
            ok += 1
    assert total > 0
    assert ok / total >= 0.95


def test_scgc_inversion_on_generator(small_world):
    cfg, corpus, truth = small_world
    from opiniontrend.influence import daily_decompositions

    model, vocab = _pipeline_on_world(corpus, truth)
    preds = classify_corpus(corpus, model, vocab)
    decs = daily_decompositions(corpus, cfg.excluded_accounts())
    whole = daily_ratio_series(corpus, preds, ("blue", "red"))
    scgc = daily_ratio_series(
        corpus, preds, ("blue", "red"), scope="scgc",
        scope_users={d: dec.scgc for d, dec in decs.items()},
    )
    whole_blue = np.nanmean(whole.ratio("blue").values)
    scgc_blue = np.nanmean(scgc.ratio("blue").values)
    # whole population leans blue while the tightly-knit core leans red
    assert whole_blue > 0.5
    assert scgc_blue < 0.5


def test_cumulative_vs_daily_direction(small_world):
    _, corpus, truth = small_world
    model, vocab = _pipeline_on_world(corpus, truth)
    preds = classify_corpus(corpus, model, vocab)
    series = daily_ratio_series(corpus, preds, ("blue", "red"))
    cum = cumulative_opinion(corpus, preds, ("blue", "red"))
    mean_daily_blue = float(np.nanmean(series.ratio("blue").values))
    classified = cum.counts["blue"] + cum.counts["red"]
    cum_blue = cum.counts["blue"] / classified
    # blue users are individually less active, so counting each user once
    # shifts the share toward blue
    assert cum_blue > mean_daily_blue


def test_unclassified_fraction_near_tie_rate(small_world):
    cfg, corpus, truth = small_world
    model, vocab = _pipeline_on_world(corpus, truth)
    preds = classify_corpus(corpus, model, vocab)
    series = daily_ratio_series(corpus, preds, ("blue", "red"))
    unc = np.array(series.unclassified, dtype=float)
    tot = unc + np.array(series.counts["blue"]) + np.array(series.counts["red"])
    frac = float(unc.sum() / tot.sum())
    assert abs(frac - cfg.tie_rate) < 0.01
