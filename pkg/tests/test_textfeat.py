import numpy as np
import pytest

from conftest import rec, window
from opiniontrend.textfeat import (
    EMOTICON,
    HASHTAG,
    Token,
    TrainingSet,
    TrainingSetError,
    URL,
    USERNAME,
    WORD,
    Vocabulary,
    build_training_set,
    build_vocabulary,
    stream_features,
    tokenize,
    vectorize,
)


def kinds_and_texts(text):
    return [(t.kind, t.text) for t in tokenize(text)]


def test_one_token_per_kind():
    assert kinds_and_texts("I'm #WithHer @someone :) https://x.co/ab") == [
        (WORD, "i'm"),
        (HASHTAG, "withher"),
        (USERNAME, "someone"),
        (EMOTICON, ":)"),
        (URL, "https://x.co/ab"),
    ]


def test_empty_stream():
    assert tokenize("") == ()


def test_urls_kept_verbatim():
    toks = tokenize("see HTTPS://Example.com/PaTh?q=1")
    # scheme matching is case-sensitive by design; lowercase https matches
    toks2 = tokenize("see https://Example.com/PaTh?q=1")
    assert toks2[-1] == Token(URL, "https://Example.com/PaTh?q=1")
    assert all(t.kind == WORD for t in toks) or toks[-1].kind != URL


# fixture of hand-tokenized samples pinning kind counts on tricky input
HAND_FIXTURE = [
    ("voting now! #maga #maga2024", {"word": 2, "hashtag": 2}),
    ("@a @b @c hi", {"username": 3, "word": 1}),
    (":) :( :-D xD <3", {"emoticon": 5}),
    ("mixed #Tag @User :/ http://t.co/x word", {"word": 2, "hashtag": 1, "username": 1,
                                               "emoticon": 1, "url": 1}),
    ("don't stop believin'", {"word": 3}),
    ("цифровой мир #сеть", {"word": 2, "hashtag": 1}),
    ("emoji 😀 and 🎉 fun", {"word": 3, "emoticon": 2}),
    ("https://a.co/b https://c.d/e", {"url": 2}),
    ("a#b", {"word": 1, "hashtag": 1}),
    ("50% of $100", {"word": 3}),
    ("end with emoticon :p", {"word": 3, "emoticon": 1}),
    ("D: that's rough", {"emoticon": 1, "word": 2}),
]


@pytest.mark.parametrize("text,expected", HAND_FIXTURE)
def test_hand_tokenized_fixture(text, expected):
    counts = {}
    for tok in tokenize(text):
        counts[tok.kind] = counts.get(tok.kind, 0) + 1
    assert counts == expected


def test_tokenize_deterministic():
    text = "Stable #Output @every :) time https://x.co/y"
    assert tokenize(text) == tokenize(text)


LABELS = {"bluetag": "blue", "redtag": "red"}


def _training_corpus():
    recs = [
        rec(user="u1", text="great blue stuff #bluetag", hashtags=["bluetag"]),
        rec(user="u2", text="more blue words #bluetag", hashtags=["bluetag"],
            ts="2024-01-01T13:00:00Z"),
        rec(user="u3", text="red words here #redtag", hashtags=["redtag"],
            ts="2024-01-01T14:00:00Z"),
        # ambiguous: both classes -> excluded
        rec(user="u4", text="#bluetag #redtag both", hashtags=["bluetag", "redtag"],
            ts="2024-01-01T15:00:00Z"),
        # retweet -> excluded
        rec(user="u5", text="rt blue #bluetag", hashtags=["bluetag"],
            retweet_of="u1", ts="2024-01-01T16:00:00Z"),
        # unofficial client, excluded when the filter is requested
        rec(user="u6", text="late red #redtag", hashtags=["redtag"], client="bot",
            ts="2024-01-01T17:00:00Z"),
    ]
    return window(recs)


def test_training_set_rules_and_balance():
    ts = build_training_set(_training_corpus(), LABELS, seed=0)
    # 2 blue candidates, 2 red candidates -> balanced at 2 per class
    assert ts.size == 4
    assert ts.raw_counts == {"blue": 2, "red": 2}
    by_class = {}
    for ex in ts.examples:
        by_class[ex.cls] = by_class.get(ex.cls, 0) + 1
    assert by_class == {"blue": 2, "red": 2}


def test_training_set_official_filter():
    ts = build_training_set(_training_corpus(), LABELS, seed=0,
                            official_clients=frozenset({"web"}))
    assert ts.raw_counts == {"blue": 2, "red": 1}
    assert ts.size == 2


def test_label_hashtags_stripped_no_leakage():
    ts = build_training_set(_training_corpus(), LABELS, seed=0)
    label_feats = {"#" + t for t in LABELS}
    for ex in ts.examples:
        feats = set(stream_features(ex.tokens))
        assert not feats & label_feats


def test_empty_class_fatal():
    recs = [rec(user="u1", text="only blue #bluetag", hashtags=["bluetag"])]
    with pytest.raises(TrainingSetError):
        build_training_set(window(recs), LABELS, seed=0)


def test_downsampling_deterministic(small_world):
    _, corpus, truth = small_world
    ts1 = build_training_set(corpus, truth.hashtag_class, seed=7)
    ts2 = build_training_set(corpus, truth.hashtag_class, seed=7)
    assert [e.tweet_id for e in ts1.examples] == [e.tweet_id for e in ts2.examples]
    counts = {}
    for ex in ts1.examples:
        counts[ex.cls] = counts.get(ex.cls, 0) + 1
    assert len(set(counts.values())) == 1  # exactly balanced


def test_smallest_bigram_case():
    vocab = Vocabulary(feature_ids={"a": 0, "b": 1, "a b": 2})
    toks = (Token(WORD, "a"), Token(WORD, "b"))
    ids = vectorize(toks, vocab)
    assert sorted(ids.tolist()) == [0, 1, 2]


def test_single_token_no_bigram():
    assert stream_features((Token(WORD, "solo"),)) == ["solo"]


def test_oov_ignored_and_pure():
    vocab = Vocabulary(feature_ids={"known": 0})
    toks = (Token(WORD, "known"), Token(WORD, "unknown"))
    ids1 = vectorize(toks, vocab)
    ids2 = vectorize(toks, vocab)
    assert ids1.tolist() == [0]
    assert ids1.tolist() == ids2.tolist()


def test_bigrams_cross_kinds():
    toks = tokenize("word #tag")
    feats = stream_features(toks)
    assert "word #tag" in feats


def test_vocabulary_round_trip(tmp_path):
    ts = build_training_set(_training_corpus(), LABELS, seed=0)
    vocab = build_vocabulary(ts)
    vocab.save(tmp_path / "v.json")
    loaded = Vocabulary.load(tmp_path / "v.json")
    assert loaded.feature_ids == vocab.feature_ids
    assert loaded.content_hash() == vocab.content_hash()


def test_training_set_file_round_trip(tmp_path):
    ts = build_training_set(_training_corpus(), LABELS, seed=0)
    ts.save(tmp_path / "ts.jsonl")
    loaded = TrainingSet.load(tmp_path / "ts.jsonl")
    assert loaded.classes == ts.classes
    assert [e.tokens for e in loaded.examples] == [e.tokens for e in ts.examples]
