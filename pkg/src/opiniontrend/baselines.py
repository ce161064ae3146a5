"""Benchmark attention metrics: daily user counts of candidate mentions,
mentions split by tweet sentiment, and the four category hashtags. Each
metric is normalized so the two candidates' values sum to one, making the
series directly comparable with the opinion ratio and the polls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

import numpy as np

from .classifier import ModelParams, train
from .records import CorpusWindow
from .series import DailySeries
from .textfeat import (
    EMOJI_NEGATIVE,
    EMOJI_POSITIVE,
    EMOTICON,
    EMOTICONS_NEGATIVE,
    EMOTICONS_POSITIVE,
    Vocabulary,
    tokenize,
    vectorize,
)

# Keyword sets of the 2016 US campaign deployment; synthetic worlds configure
# their own. Matching is token-level on words, hashtags and usernames.
DEFAULT_MENTION_KEYWORDS: dict[str, frozenset[str]] = {
    "trump": frozenset({"donald", "trump", "donaldtrump", "realdonaldtrump"}),
    "clinton": frozenset({"hillary", "clinton", "hillaryclinton"}),
}

# The four category hashtags, identical to the propagation seed set.
DEFAULT_CATEGORY_HASHTAGS: dict[str, dict[str, frozenset[str]]] = {
    "trump": {"pro": frozenset({"maga"}), "anti": frozenset({"nevertrump"})},
    "clinton": {"pro": frozenset({"imwithher"}), "anti": frozenset({"neverhillary"})},
}

POSITIVE = "pos"
NEGATIVE = "neg"

_POS_SET = frozenset(EMOTICONS_POSITIVE) | frozenset(EMOJI_POSITIVE)
_NEG_SET = frozenset(EMOTICONS_NEGATIVE) | frozenset(EMOJI_NEGATIVE)


@dataclass
class MetricSeries:
    name: str
    candidates: tuple[str, str]
    days: list[date]
    values: dict[str, list[float]]  # candidate -> M_k(i), NaN when undefined

    def series(self, candidate: str) -> DailySeries:
        return DailySeries(self.days[0], np.array(self.values[candidate]))

    def write_csv(self, path) -> None:
        a, b = self.candidates
        sa, sb = self.values[a], self.values[b]
        import csv

        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["day", f"m_{a}", f"m_{b}"])
            for i, d in enumerate(self.days):
                w.writerow(
                    [
                        d.isoformat(),
                        "" if math.isnan(sa[i]) else repr(sa[i]),
                        "" if math.isnan(sb[i]) else repr(sb[i]),
                    ]
                )


def _mention_targets(text: str, keyword_sets: dict[str, frozenset[str]]) -> set[str]:
    """Candidates whose keywords appear as word/hashtag/username tokens."""
    hit = set()
    for tok in tokenize(text):
        if tok.kind in ("word", "hashtag", "username"):
            for cand, kws in keyword_sets.items():
                if tok.text in kws:
                    hit.add(cand)
    return hit


def _two_term_series(
    name: str, candidates: tuple[str, str], days: list[date], num: list[float], den: list[float]
) -> MetricSeries:
    a_vals, b_vals = [], []
    for n, d in zip(num, den):
        if d > 0:
            a_vals.append(n / d)
            b_vals.append(1.0 - n / d)
        else:
            a_vals.append(math.nan)
            b_vals.append(math.nan)
    return MetricSeries(
        name=name, candidates=candidates, days=days,
        values={candidates[0]: a_vals, candidates[1]: b_vals},
    )


def metric_mentions(
    corpus: CorpusWindow, keyword_sets: dict[str, frozenset[str]] | None = None
) -> MetricSeries:
    """M_a(i) = U_a / (U_a + U_b) over distinct users mentioning each
    candidate's keywords that day; a user mentioning both counts in both."""
    kws = keyword_sets or DEFAULT_MENTION_KEYWORDS
    cands = tuple(sorted(kws))
    days = corpus.day_list
    num, den = [], []
    for day in days:
        users: dict[str, set[str]] = {c: set() for c in cands}
        for rec in corpus.days[day]:
            for cand in _mention_targets(rec.text, kws):
                users[cand].add(rec.user_id)
        n_a, n_b = len(users[cands[0]]), len(users[cands[1]])
        num.append(float(n_a))
        den.append(float(n_a + n_b))
    return _two_term_series("mentions", cands, days, num, den)


def metric_hashtag_counts(
    corpus: CorpusWindow, categories: dict[str, dict[str, frozenset[str]]] | None = None
) -> MetricSeries:
    """M_a = (U_pro_a + U_anti_b) / (U_pro_a + U_anti_a + U_pro_b + U_anti_b)
    over distinct users posting at least one hashtag of each category."""
    cats = categories or DEFAULT_CATEGORY_HASHTAGS
    cands = tuple(sorted(cats))
    days = corpus.day_list
    num, den = [], []
    for day in days:
        users = {(c, side): set() for c in cands for side in ("pro", "anti")}
        for rec in corpus.days[day]:
            tags = set(rec.hashtags)
            for c in cands:
                for side in ("pro", "anti"):
                    if tags & cats[c][side]:
                        users[(c, side)].add(rec.user_id)
        a, b = cands
        favorable = len(users[(a, "pro")]) + len(users[(b, "anti")])
        total = sum(len(v) for v in users.values())
        num.append(float(favorable))
        den.append(float(total))
    return _two_term_series("hashtags", cands, days, num, den)


# --- emoticon-distant-supervision sentiment ---------------------------------


def emoticon_sentiment_label(text: str) -> str | None:
    """pos/neg from the emoticon lexicon; None when absent or conflicting."""
    toks = [t.text for t in tokenize(text) if t.kind == EMOTICON]
    has_pos = any(t in _POS_SET for t in toks)
    has_neg = any(t in _NEG_SET for t in toks)
    if has_pos == has_neg:
        return None
    return POSITIVE if has_pos else NEGATIVE


def build_sentiment_training_set(corpus: CorpusWindow, seed: int = 0):
    """Balanced (tokens, pos/neg) examples labeled by emoticons, with all
    emoticon tokens stripped from the features to avoid label leakage."""
    per_class: dict[str, list] = {NEGATIVE: [], POSITIVE: []}
    for rec in corpus.all_records():
        if rec.is_retweet:
            continue
        label = emoticon_sentiment_label(rec.text)
        if label is None:
            continue
        tokens = tuple(t for t in tokenize(rec.text) if t.kind != EMOTICON)
        per_class[label].append(tokens)
    if not per_class[POSITIVE] or not per_class[NEGATIVE]:
        raise ValueError("need at least one example of each sentiment")
    m = min(len(per_class[POSITIVE]), len(per_class[NEGATIVE]))
    rng = np.random.default_rng(seed)
    examples = []
    for cls in (NEGATIVE, POSITIVE):
        pool = per_class[cls]
        if len(pool) > m:
            idx = sorted(rng.choice(len(pool), size=m, replace=False).tolist())
            pool = [pool[i] for i in idx]
        examples.extend((tokens, cls) for tokens in pool)
    return examples


def train_sentiment_classifier(
    corpus: CorpusWindow, lam: float = 1e-4, seed: int = 0, max_epochs: int = 30
) -> tuple[ModelParams, Vocabulary]:
    from .textfeat import stream_features

    examples = build_sentiment_training_set(corpus, seed=seed)
    feats: set[str] = set()
    for tokens, _ in examples:
        feats.update(stream_features(tokens))
    vocab = Vocabulary(feature_ids={f: i for i, f in enumerate(sorted(feats))})
    rows = [vectorize(tokens, vocab) for tokens, _ in examples]
    labels = [cls for _, cls in examples]
    model = train(
        rows, labels, (NEGATIVE, POSITIVE), vocab.size, lam,
        seed=seed, max_epochs=max_epochs, polish_max_iter=300,
        vocab_hash=vocab.content_hash(),
    )
    return model, vocab


def metric_mentions_emotion(
    corpus: CorpusWindow,
    model: ModelParams,
    vocab: Vocabulary,
    keyword_sets: dict[str, frozenset[str]] | None = None,
) -> MetricSeries:
    """M_a = (U_a_pos + U_b_neg) / (U_a_pos + U_a_neg + U_b_pos + U_b_neg)
    counting users whose mention tweets the sentiment model classifies."""
    kws = keyword_sets or DEFAULT_MENTION_KEYWORDS
    cands = tuple(sorted(kws))
    days = corpus.day_list
    num, den = [], []
    for day in days:
        users = {(c, e): set() for c in cands for e in (POSITIVE, NEGATIVE)}
        for rec in corpus.days[day]:
            targets = _mention_targets(rec.text, kws)
            if not targets:
                continue
            tokens = tuple(t for t in tokenize(rec.text) if t.kind != EMOTICON)
            row = vectorize(tokens, vocab)
            z = model.weights[row].sum() + model.bias if len(row) else model.bias
            sentiment = POSITIVE if z > 0 else NEGATIVE
            for cand in targets:
                users[(cand, sentiment)].add(rec.user_id)
        a, b = cands
        favorable = len(users[(a, POSITIVE)]) + len(users[(b, NEGATIVE)])
        total = sum(len(v) for v in users.values())
        num.append(float(favorable))
        den.append(float(total))
    return _two_term_series("mentions-emotion", cands, days, num, den)
