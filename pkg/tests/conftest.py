import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from opiniontrend.records import CorpusWindow, TweetRecord

_COUNTER = [0]


def rec(
    user="u1",
    text="hello world",
    ts="2024-01-01T12:00:00Z",
    hashtags=(),
    mentions=(),
    retweet_of=None,
    reply_to=None,
    quote_of=None,
    client="web",
    tweet_id=None,
):
    if tweet_id is None:
        _COUNTER[0] += 1
        tweet_id = f"t{_COUNTER[0]:06d}"
    return TweetRecord(
        tweet_id=tweet_id,
        user_id=user,
        timestamp=datetime.strptime(ts, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc),
        text=text,
        hashtags=tuple(hashtags),
        mentions=tuple(mentions),
        retweet_of=retweet_of,
        reply_to=reply_to,
        quote_of=quote_of,
        source_client=client,
        is_retweet=retweet_of is not None,
    )


def window(records, **kwargs):
    return CorpusWindow.from_records(records, **kwargs)


@pytest.fixture(scope="session")
def small_world():
    """Shared small planted world for cross-module tests."""
    from opiniontrend.synth import generate_synthetic_corpus, published_rates_config

    cfg = published_rates_config(n_users=300, n_days=40, word_mix=0.5)
    corpus, truth = generate_synthetic_corpus(cfg, seed=101)
    return cfg, corpus, truth
