"""Daily per-user opinion aggregation and supporter-behavior analytics.

A user's daily opinion is the strict majority class of their classified
tweets that day; equal counts leave the user unclassified. Ratios are taken
over classified users only.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np
from scipy import stats as scipy_stats

from .classifier import ModelParams
from .records import CorpusWindow
from .series import DailySeries
from .textfeat import Vocabulary, tokenize, vectorize

UNCLASSIFIED = "unclassified"


def classify_corpus(
    corpus: CorpusWindow, model: ModelParams, vocab: Vocabulary, min_prob: float | None = None
) -> dict[str, str]:
    """Per-tweet class predictions keyed by tweet id.

    ``min_prob`` enables probability abstention: predictions below the
    threshold are dropped (off by default).
    """
    out: dict[str, str] = {}
    for rec in corpus.all_records():
        row = vectorize(tokenize(rec.text), vocab)
        z = model.weights[row].sum() + model.bias if len(row) else model.bias
        p1 = 1.0 / (1.0 + math.exp(-z))
        cls, p = (model.classes[1], p1) if p1 > 0.5 else (model.classes[0], 1.0 - p1)
        if min_prob is not None and p < min_prob:
            continue
        out[rec.tweet_id] = cls
    return out


@dataclass(frozen=True)
class UserDayOpinion:
    user_id: str
    day: date
    cls: str  # camp name or UNCLASSIFIED
    counts: tuple[tuple[str, int], ...]


def assign_daily_user_opinion(user_id, day, class_counts: dict[str, int]) -> UserDayOpinion:
    """Strict majority of the user's classified tweets that day; ties are
    unclassified."""
    if not class_counts or all(v == 0 for v in class_counts.values()):
        raise ValueError("user-day needs at least one classified tweet")
    ordered = sorted(class_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    cls = ordered[0][0]
    if len(ordered) > 1 and ordered[0][1] == ordered[1][1]:
        cls = UNCLASSIFIED
    return UserDayOpinion(user_id, day, cls, tuple(sorted(class_counts.items())))


def daily_user_opinions(
    corpus: CorpusWindow, predictions: dict[str, str]
) -> dict[date, dict[str, UserDayOpinion]]:
    """Per day, per user, the majority-vote opinion."""
    out: dict[date, dict[str, UserDayOpinion]] = {}
    for day, recs in corpus.iter_days():
        counts: dict[str, dict[str, int]] = {}
        for rec in recs:
            cls = predictions.get(rec.tweet_id)
            if cls is None:
                continue
            user_counts = counts.setdefault(rec.user_id, {})
            user_counts[cls] = user_counts.get(cls, 0) + 1
        out[day] = {
            user: assign_daily_user_opinion(user, day, c) for user, c in sorted(counts.items())
        }
    return out


@dataclass
class OpinionSeries:
    classes: tuple[str, ...]
    days: list[date]
    counts: dict[str, list[int]]  # class -> per-day classified-user count
    unclassified: list[int]
    scope: str = "whole"

    def ratio(self, cls: str) -> DailySeries:
        """Per-day ratio of classified users holding ``cls``; days with no
        classified users are undefined."""
        vals = []
        for i in range(len(self.days)):
            total = sum(self.counts[c][i] for c in self.classes)
            vals.append(self.counts[cls][i] / total if total else math.nan)
        return DailySeries(self.days[0], np.array(vals)) if self.days else DailySeries(
            date.today(), np.zeros(0)
        )

    def count_series(self, cls: str) -> DailySeries:
        return DailySeries(self.days[0], np.array(self.counts[cls], dtype=float))

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            header = ["day"]
            header += [f"n_{c}" for c in self.classes]
            header += ["n_unclassified"]
            header += [f"r_{c}" for c in self.classes]
            header += ["scope"]
            w.writerow(header)
            ratios = {c: self.ratio(c) for c in self.classes}
            for i, d in enumerate(self.days):
                row = [d.isoformat()]
                row += [self.counts[c][i] for c in self.classes]
                row += [self.unclassified[i]]
                for c in self.classes:
                    v = ratios[c].values[i]
                    row.append("" if math.isnan(v) else repr(float(v)))
                row.append(self.scope)
                w.writerow(row)


def daily_ratio_series(
    corpus: CorpusWindow,
    predictions: dict[str, str],
    classes: tuple[str, ...],
    scope: str = "whole",
    scope_users: dict[date, frozenset[str]] | None = None,
) -> OpinionSeries:
    """Daily classified-user counts and ratios.

    ``scope_users`` restricts each day to a user set (e.g. that day's SCGC);
    the whole scope includes every author, interacting or not.
    """
    opinions = daily_user_opinions(corpus, predictions)
    days = corpus.day_list
    counts = {cls: [] for cls in classes}
    unclassified: list[int] = []
    for day in days:
        todays = opinions.get(day, {})
        allowed = scope_users.get(day, frozenset()) if scope_users is not None else None
        per_class = {cls: 0 for cls in classes}
        unc = 0
        for user, udo in todays.items():
            if allowed is not None and user not in allowed:
                continue
            if udo.cls == UNCLASSIFIED:
                unc += 1
            else:
                per_class[udo.cls] += 1
        for cls in classes:
            counts[cls].append(per_class[cls])
        unclassified.append(unc)
    return OpinionSeries(
        classes=classes, days=days, counts=counts, unclassified=unclassified, scope=scope
    )


@dataclass
class CumulativeOpinion:
    shares: dict[str, float]  # class -> share, plus "unclassified"
    counts: dict[str, int]
    user_class: dict[str, str]

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {"shares": self.shares, "counts": self.counts},
                fh, sort_keys=True, indent=1,
            )


def cumulative_opinion(
    corpus: CorpusWindow, predictions: dict[str, str], classes: tuple[str, ...]
) -> CumulativeOpinion:
    """Each user counted once: majority over all their tweets in the window."""
    totals: dict[str, dict[str, int]] = {}
    for rec in corpus.all_records():
        cls = predictions.get(rec.tweet_id)
        if cls is None:
            continue
        totals.setdefault(rec.user_id, {})
        totals[rec.user_id][cls] = totals[rec.user_id].get(cls, 0) + 1
    user_class = {
        user: assign_daily_user_opinion(user, corpus.start_day, c).cls
        for user, c in sorted(totals.items())
    }
    counts = {cls: 0 for cls in classes}
    counts[UNCLASSIFIED] = 0
    for cls in user_class.values():
        counts[cls] += 1
    n = sum(counts.values())
    shares = {cls: (cnt / n if n else math.nan) for cls, cnt in counts.items()}
    return CumulativeOpinion(shares=shares, counts=counts, user_class=user_class)


@dataclass
class ActivityProfile:
    classes: tuple[str, ...]
    daily_mean_tweets: dict[str, DailySeries]
    pooled_mean_tweets: dict[str, float]  # over user-days
    user_totals: dict[str, dict[str, int]]  # class -> user -> total tweets
    ccdf: dict[str, list[tuple[int, float]]]  # class -> (x, P(total >= x))
    threshold_sweep: list[dict]  # per threshold: {"threshold", "shares": {...}}

    def save(self, path) -> None:
        obj = {
            "pooled_mean_tweets": self.pooled_mean_tweets,
            "ccdf": {c: [[int(x), float(p)] for x, p in pts] for c, pts in self.ccdf.items()},
            "threshold_sweep": self.threshold_sweep,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, sort_keys=True, indent=1)


DEFAULT_ACTIVITY_THRESHOLDS = (1, 2, 5, 10, 20, 50, 67, 100, 200)


def activity_stats(
    corpus: CorpusWindow,
    predictions: dict[str, str],
    classes: tuple[str, ...],
    thresholds=DEFAULT_ACTIVITY_THRESHOLDS,
) -> ActivityProfile:
    """Per-camp activity: daily mean tweets per classified user, the CCDF of
    per-user total tweets, and a minimum-activity threshold sweep of the
    cumulative camp shares."""
    opinions = daily_user_opinions(corpus, predictions)
    tweets_per_user_day: dict[date, dict[str, int]] = {}
    for day, recs in corpus.iter_days():
        cnt: dict[str, int] = {}
        for rec in recs:
            cnt[rec.user_id] = cnt.get(rec.user_id, 0) + 1
        tweets_per_user_day[day] = cnt

    daily_mean: dict[str, dict[date, float]] = {cls: {} for cls in classes}
    pooled_sum = {cls: 0 for cls in classes}
    pooled_n = {cls: 0 for cls in classes}
    for day in corpus.day_list:
        per_class_tweets: dict[str, list[int]] = {cls: [] for cls in classes}
        for user, udo in opinions.get(day, {}).items():
            if udo.cls == UNCLASSIFIED:
                continue
            per_class_tweets[udo.cls].append(tweets_per_user_day[day][user])
        for cls in classes:
            vals = per_class_tweets[cls]
            if vals:
                daily_mean[cls][day] = sum(vals) / len(vals)
                pooled_sum[cls] += sum(vals)
                pooled_n[cls] += len(vals)

    cumulative = cumulative_opinion(corpus, predictions, classes)
    totals_all: dict[str, int] = {}
    for rec in corpus.all_records():
        totals_all[rec.user_id] = totals_all.get(rec.user_id, 0) + 1

    user_totals: dict[str, dict[str, int]] = {cls: {} for cls in classes}
    for user, cls in cumulative.user_class.items():
        if cls in user_totals:
            user_totals[cls][user] = totals_all[user]

    ccdf: dict[str, list[tuple[int, float]]] = {}
    for cls in classes:
        vals = np.array(sorted(user_totals[cls].values()))
        pts: list[tuple[int, float]] = []
        if len(vals):
            for x in np.unique(vals):
                pts.append((int(x), float(np.mean(vals >= x))))
        ccdf[cls] = pts

    sweep: list[dict] = []
    for threshold in thresholds:
        counts = {cls: 0 for cls in classes}
        for user, cls in cumulative.user_class.items():
            if cls in counts and totals_all[user] >= threshold:
                counts[cls] += 1
        total = sum(counts.values())
        sweep.append(
            {
                "threshold": int(threshold),
                "counts": counts,
                "shares": {c: (counts[c] / total if total else math.nan) for c in classes},
            }
        )

    return ActivityProfile(
        classes=classes,
        daily_mean_tweets={
            cls: DailySeries.from_mapping(m) if m else DailySeries(corpus.start_day, np.array([np.nan]))
            for cls, m in daily_mean.items()
        },
        pooled_mean_tweets={
            cls: (pooled_sum[cls] / pooled_n[cls] if pooled_n[cls] else math.nan)
            for cls in classes
        },
        user_totals=user_totals,
        ccdf=ccdf,
        threshold_sweep=sweep,
    )


@dataclass
class BehaviorReport:
    sigma: dict[str, float]  # class -> std of daily counts
    sigma_ratio: float | None  # sigma[classes[0]] / sigma[classes[1]]
    spearman: dict[str, float | None]  # class -> rho(count, ratio)
    cumulative_shares: dict[str, float] = field(default_factory=dict)
    mean_daily_shares: dict[str, float] = field(default_factory=dict)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "sigma": self.sigma,
                    "sigma_ratio": self.sigma_ratio,
                    "spearman": self.spearman,
                    "cumulative_shares": self.cumulative_shares,
                    "mean_daily_shares": self.mean_daily_shares,
                },
                fh, sort_keys=True, indent=1,
            )


def behavior_correlations(series: OpinionSeries) -> BehaviorReport:
    """Daily-count standard deviations and the Spearman rank correlation
    between each camp's absolute count and its ratio (average ranks on
    ties; None marks an undefined coefficient on constant input)."""
    if len(series.days) < 3:
        raise ValueError("need at least 3 days")
    sigma: dict[str, float] = {}
    spearman: dict[str, float | None] = {}
    mean_shares: dict[str, float] = {}
    for cls in series.classes:
        n_k = np.array(series.counts[cls], dtype=float)
        r_k = series.ratio(cls).values
        defined = ~np.isnan(r_k)
        sigma[cls] = float(np.std(n_k, ddof=0))
        mean_shares[cls] = float(np.nanmean(r_k)) if defined.any() else math.nan
        nk_d, rk_d = n_k[defined], r_k[defined]
        if len(nk_d) < 3 or np.all(nk_d == nk_d[0]) or np.all(rk_d == rk_d[0]):
            spearman[cls] = None
        else:
            rho = scipy_stats.spearmanr(nk_d, rk_d).statistic
            spearman[cls] = None if math.isnan(rho) else float(rho)
    c0, c1 = series.classes[0], series.classes[1]
    ratio = sigma[c0] / sigma[c1] if sigma[c1] > 0 else None
    return BehaviorReport(
        sigma=sigma, sigma_ratio=ratio, spearman=spearman, mean_daily_shares=mean_shares
    )
