import math
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rec, window
from opiniontrend.records import (
    CorpusFormatError,
    FilterSpec,
    MalformedRecord,
    filter_official_clients,
    filter_strict_keywords,
    load_corpus,
    parse_record,
)

VALID_LINE = (
    '{"tweet_id":"t1","user_id":"u1","timestamp":"2024-01-01T10:00:00Z",'
    '"text":"hi","hashtags":["a"],"source_client":"web","is_retweet":false}'
)


def test_load_three_valid_lines(tmp_path):
    p = tmp_path / "c.jsonl"
    lines = []
    for i in range(3):
        lines.append(VALID_LINE.replace('"t1"', f'"t{i}"'))
    p.write_text("\n".join(lines) + "\n")
    c = load_corpus(p)
    assert c.num_records == 3
    assert c.malformed_count == 0


def test_load_skips_and_counts_malformed(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text(VALID_LINE + "\n" + VALID_LINE.replace('"t1"', '"t2"') + "\nnot json\n")
    c = load_corpus(p)
    assert c.num_records == 2
    assert c.malformed_count == 1


def test_load_mostly_malformed_is_fatal(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text("garbage\nmore garbage\n" + VALID_LINE + "\n")
    with pytest.raises(CorpusFormatError):
        load_corpus(p)


def test_load_unreadable_is_fatal(tmp_path):
    with pytest.raises(OSError):
        load_corpus(tmp_path / "missing.jsonl")


def test_unknown_fields_ignored():
    line = VALID_LINE[:-1] + ',"extra_field":42}'
    r = parse_record(line)
    assert r.tweet_id == "t1"


@pytest.mark.parametrize(
    "mutation",
    [
        lambda s: s.replace('"2024-01-01T10:00:00Z"', '"yesterday"'),
        lambda s: s.replace('["a"]', '["#a"]'),
        lambda s: s.replace('["a"]', '["A"]'),
        lambda s: s.replace('"is_retweet":false', '"is_retweet":true'),
    ],
)
def test_malformed_variants(mutation):
    with pytest.raises(MalformedRecord):
        parse_record(mutation(VALID_LINE))


def test_save_load_round_trip_canonical(tmp_path):
    from opiniontrend.synth import fixture_config, generate_synthetic_corpus

    cfg = fixture_config(n_users=120, n_days=20)
    corpus, _ = generate_synthetic_corpus(cfg, seed=5)
    assert corpus.num_records >= 2000
    p1 = tmp_path / "a.jsonl"
    p2 = tmp_path / "b.jsonl"
    corpus.save(p1)
    load_corpus(p1).save(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_empty_days_representable():
    c = window([rec(ts="2024-01-01T08:00:00Z"), rec(ts="2024-01-03T08:00:00Z")])
    assert c.days[date(2024, 1, 2)] == []
    assert len(c.day_list) == 3


def test_official_filter_noop_and_annihilation():
    recs = [rec(client="web"), rec(client="web", ts="2024-01-02T00:00:01Z")]
    c = window(recs)
    spec = FilterSpec(official_clients=frozenset({"web"}))
    assert filter_official_clients(c, spec).num_records == 2
    spec_none = FilterSpec(official_clients=frozenset({"other"}))
    out = filter_official_clients(c, spec_none)
    assert out.num_records == 0
    assert out.start_day == c.start_day and out.end_day == c.end_day


def test_official_filter_requires_nonempty_spec():
    c = window([rec()])
    with pytest.raises(ValueError):
        filter_official_clients(c, FilterSpec(official_clients=frozenset()))


def test_official_retention_on_generator(small_world):
    cfg, corpus, _ = small_world
    from opiniontrend.synth import OFFICIAL_CLIENTS

    spec = FilterSpec(official_clients=frozenset(OFFICIAL_CLIENTS))
    kept = filter_official_clients(corpus, spec)
    retention = kept.num_records / corpus.num_records
    # planted 92% official rate plus always-official tie pairs
    assert abs(retention - 0.92) < 0.015


@pytest.mark.parametrize(
    "text,rules,kept",
    [
        ("donaldtrump wins", (("donaldtrump",),), True),
        ("trump speech", (("trump", "donald"),), False),
        ("donald j trump rally", (("trump", "donald"),), True),
    ],
)
def test_strict_keyword_rules(text, rules, kept):
    c = window([rec(text=text)])
    out = filter_strict_keywords(c, FilterSpec(strict_rules=rules))
    assert (out.num_records == 1) is kept


def test_filters_idempotent(small_world):
    _, corpus, _ = small_world
    from opiniontrend.synth import OFFICIAL_CLIENTS

    spec = FilterSpec(official_clients=frozenset(OFFICIAL_CLIENTS))
    once = filter_official_clients(corpus, spec)
    twice = filter_official_clients(once, spec)
    assert once.num_records == twice.num_records
    assert [r.tweet_id for r in once.all_records()] == [r.tweet_id for r in twice.all_records()]


def test_filter_commutes_with_day_partition(small_world):
    _, corpus, _ = small_world
    from opiniontrend.synth import OFFICIAL_CLIENTS

    spec = FilterSpec(official_clients=frozenset(OFFICIAL_CLIENTS))
    filtered = filter_official_clients(corpus, spec)
    for day in corpus.day_list[:5]:
        split_then_filter = filter_official_clients(corpus.day_window(day), spec)
        filter_then_split = filtered.day_window(day)
        assert [r.tweet_id for r in split_then_filter.all_records()] == [
            r.tweet_id for r in filter_then_split.all_records()
        ]


@given(st.lists(st.sampled_from(["web", "phone_ios", "bot"]), min_size=1, max_size=30))
@settings(max_examples=25, deadline=None)
def test_filter_idempotence_property(clients):
    recs = [
        rec(user=f"u{i}", client=c, ts="2024-01-01T00:00:01Z", tweet_id=f"x{i}")
        for i, c in enumerate(clients)
    ]
    c = window(recs)
    spec = FilterSpec(official_clients=frozenset({"web", "phone_ios"}))
    once = filter_official_clients(c, spec)
    twice = filter_official_clients(once, spec)
    assert [r.tweet_id for r in once.all_records()] == [r.tweet_id for r in twice.all_records()]
