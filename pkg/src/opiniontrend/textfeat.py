"""Tweet tokenization, distant-supervision training sets, and sparse
presence features (unigrams plus adjacent-token bigrams).
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field

import numpy as np

from .records import CorpusWindow

WORD = "word"
HASHTAG = "hashtag"
USERNAME = "username"
EMOTICON = "emoticon"
URL = "url"

# Documented ASCII emoticon inventory. The tokenizer recognizes the union;
# the two polar subsets drive emoticon distant supervision.
EMOTICONS_POSITIVE = (
    ":)", ":-)", ":]", ":-]", ":d", ":-d", ";)", ";-)", "=)", "=d",
    ":p", ":-p", ";p", "xd", "<3", "^^", "^_^", ":')",
)
EMOTICONS_NEGATIVE = (
    ":(", ":-(", ":[", ":-[", ":'(", ";(", "=(", "d:", ":/", ":-/",
    ":\\", ">:(", "</3", "d=",
)
EMOTICONS_OTHER = (":o", ":-o", ":|", ":-|", "o_o", "-_-")

EMOJI_POSITIVE = tuple("😀😁😂🤣😃😄😅😆😉😊😋😍😘😎🤗🙂☺❤💕👍🎉")
EMOJI_NEGATIVE = tuple("😞😟😠😡😢😭😰😨🙁☹👎💔")

# Emoji codepoint blocks recognized as emoticon-kind tokens.
_EMOJI_RANGES = "\U0001F300-\U0001F6FF\U0001F900-\U0001FAFF☀-➿\U0001F1E6-\U0001F1FF"

_ASCII_EMOTICONS = tuple(
    sorted(set(EMOTICONS_POSITIVE + EMOTICONS_NEGATIVE + EMOTICONS_OTHER), key=len, reverse=True)
)


def _emoticon_alternatives() -> str:
    # case-insensitive matching happens via (?i) groups built per emoticon
    alts = []
    for emo in _ASCII_EMOTICONS:
        alts.append("".join(f"[{re.escape(c)}{re.escape(c.upper())}]" if c.isalpha() else re.escape(c) for c in emo))
    return "|".join(alts)


_TOKEN_RE = re.compile(
    rf"(?P<url>https?://\S+)"
    rf"|(?P<emoticon>{_emoticon_alternatives()}|[{_EMOJI_RANGES}])"
    rf"|(?P<hashtag>#\w+)"
    rf"|(?P<username>@\w+)"
    rf"|(?P<word>[\w']+)"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str

    def feature(self) -> str:
        """Feature-space string; hashtags and usernames keep a sigil prefix
        so they never collide with plain words."""
        if self.kind == HASHTAG:
            return "#" + self.text
        if self.kind == USERNAME:
            return "@" + self.text
        return self.text


def tokenize(text: str) -> tuple[Token, ...]:
    """Deterministic segmentation into words, hashtags, usernames, emoticons
    and urls. Words, hashtags and usernames are lowercased; urls are kept
    verbatim because their paths are case-sensitive."""
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        raw = m.group()
        if kind == URL:
            tokens.append(Token(URL, raw))
        elif kind == EMOTICON:
            tokens.append(Token(EMOTICON, raw.lower()))
        elif kind == HASHTAG:
            tokens.append(Token(HASHTAG, raw[1:].lower()))
        elif kind == USERNAME:
            tokens.append(Token(USERNAME, raw[1:].lower()))
        else:
            tokens.append(Token(WORD, raw.lower()))
    return tuple(tokens)


class TrainingSetError(Exception):
    pass


@dataclass(frozen=True)
class Example:
    tokens: tuple[Token, ...]
    cls: str
    tweet_id: str
    label_tags: tuple[str, ...]


@dataclass
class TrainingSet:
    classes: tuple[str, ...]
    examples: list[Example]
    seed: int
    raw_counts: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.examples)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for ex in self.examples:
                obj = {
                    "class": ex.cls,
                    "tokens": [[t.kind, t.text] for t in ex.tokens],
                    "tweet_id": ex.tweet_id,
                }
                fh.write(json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")

    @classmethod
    def load(cls, path) -> "TrainingSet":
        examples: list[Example] = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                obj = json.loads(line)
                tokens = tuple(Token(kind, text) for kind, text in obj["tokens"])
                examples.append(Example(tokens, obj["class"], obj["tweet_id"], ()))
        classes = tuple(sorted({ex.cls for ex in examples}))
        counts = {c: sum(1 for ex in examples if ex.cls == c) for c in classes}
        return cls(classes=classes, examples=examples, seed=-1, raw_counts=counts)


def build_training_set(
    corpus: CorpusWindow,
    label_map: dict[str, str],
    seed: int = 0,
    official_clients: frozenset[str] | None = None,
) -> TrainingSet:
    """Distant-supervision training set from hashtag labels.

    Keeps non-retweet tweets whose label hashtags fall in exactly one class,
    strips those hashtags from the token stream, and downsamples every class
    to the size of the smallest one. ``label_map`` maps hashtag -> class.
    When ``official_clients`` is given, other clients are dropped here;
    pass None for a corpus already filtered upstream.
    """
    classes = tuple(sorted(set(label_map.values())))
    if len(classes) < 2:
        raise TrainingSetError("label map must cover at least two classes")
    per_class: dict[str, list[Example]] = {cls: [] for cls in classes}
    for rec in corpus.all_records():
        if rec.is_retweet:
            continue
        if official_clients is not None and rec.source_client not in official_clients:
            continue
        label_tags = sorted({t for t in rec.hashtags if t in label_map})
        tag_classes = {label_map[t] for t in label_tags}
        if len(tag_classes) != 1:
            continue
        cls = tag_classes.pop()
        tokens = tuple(
            tok for tok in tokenize(rec.text)
            if not (tok.kind == HASHTAG and tok.text in label_map)
        )
        per_class[cls].append(Example(tokens, cls, rec.tweet_id, tuple(label_tags)))

    raw_counts = {cls: len(v) for cls, v in per_class.items()}
    empty = [cls for cls, n in raw_counts.items() if n == 0]
    if empty:
        raise TrainingSetError(f"no training examples for class(es): {empty}")
    m = min(raw_counts.values())
    rng = np.random.default_rng(seed)
    examples: list[Example] = []
    for cls in classes:
        pool = per_class[cls]
        if len(pool) > m:
            idx = sorted(rng.choice(len(pool), size=m, replace=False).tolist())
            pool = [pool[i] for i in idx]
        examples.extend(pool)
    return TrainingSet(classes=classes, examples=examples, seed=seed, raw_counts=raw_counts)


@dataclass
class Vocabulary:
    feature_ids: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.feature_ids)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for feat in self.feature_ids:
            h.update(feat.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {"features": list(self.feature_ids)},
                fh, sort_keys=True, separators=(",", ":"), ensure_ascii=False,
            )

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, "r", encoding="utf-8") as fh:
            feats = json.load(fh)["features"]
        return cls(feature_ids={f: i for i, f in enumerate(feats)})


def stream_features(tokens) -> list[str]:
    """Unigram and adjacent-bigram feature strings of a token stream."""
    unis = [t.feature() for t in tokens]
    feats = list(unis)
    feats.extend(f"{a} {b}" for a, b in zip(unis, unis[1:]))
    return feats


def build_vocabulary(training_set: TrainingSet) -> Vocabulary:
    feats: set[str] = set()
    for ex in training_set.examples:
        feats.update(stream_features(ex.tokens))
    return Vocabulary(feature_ids={f: i for i, f in enumerate(sorted(feats))})


def vectorize(tokens, vocab: Vocabulary) -> np.ndarray:
    """Sorted active feature ids (presence, not counts); features outside the
    vocabulary are ignored."""
    ids = {vocab.feature_ids[f] for f in stream_features(tokens) if f in vocab.feature_ids}
    return np.fromiter(sorted(ids), dtype=np.int64, count=len(ids))


def vectorize_all(token_streams, vocab: Vocabulary) -> list[np.ndarray]:
    return [vectorize(ts, vocab) for ts in token_streams]
