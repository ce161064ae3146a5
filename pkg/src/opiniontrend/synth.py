"""Planted-opinion synthetic corpus generator.

Builds a deterministic world with known ground truth: users split into camps
with different sizes, activation dynamics, tweet rates and interaction
habits; camp hashtag vocabularies with planted polarity; camp word
distributions with a controllable overlap; candidate keyword mentions and
emoticon sentiment; and a poll-side series derived from the planted support
ratio through the delayed affine map the alignment stage is supposed to
recover.

Camp 0 (default "blue") mirrors the published less-active/more-responsive
camp; the last camp ("red") is more active, steadier, and hosts the
reply-ring core that dominates the strongly connected component.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from datetime import date, timedelta, timezone, datetime

import numpy as np

from .records import CorpusWindow, TweetRecord
from .series import DailySeries

OFFICIAL_CLIENTS = ("web", "phone_ios", "phone_android")
UNOFFICIAL_CLIENTS = ("autopost_service", "api_script")

_POS_EMO = (":)", ":d", "<3", ";)")
_NEG_EMO = (":(", ":'(", "d:", ":/")


@dataclass(frozen=True)
class SyntheticConfig:
    n_users: int = 800
    n_days: int = 100
    start_day: date = date(2024, 1, 1)
    camps: tuple[str, ...] = ("blue", "red")
    camp_shares: tuple[float, ...] = (0.6, 0.4)
    support_means: tuple[float, ...] = (0.56, 0.44)
    activity_level: float = 0.40
    event_response: tuple[float, ...] = (0.30, 0.17)
    tweets_per_user: tuple[float, ...] = (2.6, 3.9)
    tie_rate: float = 0.045
    # text; the default camp/common word blend lands tweet classification
    # scores near the published cross-validation numbers
    words_per_camp: int = 120
    common_words: int = 300
    word_mix: float = 0.11
    words_per_tweet: float = 8.0
    url_rate: float = 0.08
    # hashtags
    tags_per_camp: int = 18
    neutral_tag_count: int = 8
    tag_zipf: float = 0.9
    tag_count_probs: tuple[float, ...] = (0.45, 0.15, 0.25, 0.15)
    cross_tag_rate: float = 0.02
    neutral_tag_rate: float = 0.10
    # shared event tags: tag-rich tweets all camps post during event bursts;
    # they bridge the camp clusters the way shared topic tags do in the data
    event_tag_count: int = 4
    event_tag_rate: float = 0.05
    # interactions
    core_frac: float = 0.30
    core_active_rate: float = 0.55
    core_chord_rate: float = 0.25
    retweet_rate: float = 0.45
    reply_rate: float = 0.10
    mention_rate: float = 0.12
    cross_mention_rate: float = 0.35
    quote_rate: float = 0.03
    popular_per_camp: int = 25
    pair_pool_frac: float = 0.05
    candidate_only_frac: float = 0.03
    # clients
    official_rate: float = 0.92
    # candidate keyword mentions (attention channel)
    mention_own_base: tuple[float, ...] = (0.45, 0.55)
    mention_other_base: tuple[float, ...] = (0.15, 0.40)
    emoticon_rate: float = 0.45
    # attention-vs-support divergence channels (0 disables)
    attention_noise: float = 0.0
    tag_rate_noise: float = 0.0
    sentiment_noise: float = 0.0
    # poll side
    poll_scale: float = 0.185
    poll_offset: float = 0.415
    poll_delay: int = 4
    poll_window: int = 13
    poll_noise: float = 0.002
    poll_share_other: float = 0.15

    def validate(self) -> None:
        k = len(self.camps)
        for name, tup in (
            ("camp_shares", self.camp_shares),
            ("support_means", self.support_means),
            ("event_response", self.event_response),
            ("tweets_per_user", self.tweets_per_user),
            ("mention_own_base", self.mention_own_base),
            ("mention_other_base", self.mention_other_base),
        ):
            if len(tup) != k:
                raise ValueError(f"{name} must have one entry per camp")
        if abs(sum(self.camp_shares) - 1.0) > 1e-9:
            raise ValueError("camp_shares must sum to 1")
        if abs(sum(self.support_means) - 1.0) > 1e-9:
            raise ValueError("support_means must sum to 1")
        if any(r < 1.0 for r in self.tweets_per_user):
            raise ValueError("tweets_per_user rates must be >= 1")
        if self.n_users <= 0 or self.n_days <= 0 or self.activity_level <= 0:
            raise ValueError("sizes and rates must be positive")
        if abs(sum(self.tag_count_probs) - 1.0) > 1e-9:
            raise ValueError("tag_count_probs must sum to 1")

    def candidate_token(self, camp: str) -> str:
        return f"cand{camp}"

    def candidate_account(self, camp: str) -> str:
        return f"cand_{camp}_official"

    def excluded_accounts(self) -> frozenset[str]:
        return frozenset(self.candidate_account(c) for c in self.camps)

    def mention_keywords(self) -> dict[str, frozenset[str]]:
        return {c: frozenset({self.candidate_token(c)}) for c in self.camps}

    def camp_tags(self, camp: str) -> list[str]:
        return [f"{camp}tag{j:02d}" for j in range(self.tags_per_camp)]

    def seed_tags(self, camp: str) -> list[str]:
        return self.camp_tags(camp)[:2]

    def category_hashtags(self) -> dict[str, dict[str, frozenset[str]]]:
        """Four-category map for the hashtag metric: each camp's top tag is
        pro-camp, its runner-up plays the anti-other role."""
        if len(self.camps) != 2:
            raise ValueError("category hashtags are defined for two camps")
        a, b = self.camps
        return {
            a: {"pro": frozenset({self.camp_tags(a)[0]}), "anti": frozenset({self.camp_tags(b)[1]})},
            b: {"pro": frozenset({self.camp_tags(b)[0]}), "anti": frozenset({self.camp_tags(a)[1]})},
        }


@dataclass
class GroundTruth:
    camps: tuple[str, ...]
    user_camp: dict[str, str]
    hashtag_class: dict[str, str]
    day_ratio: dict[date, dict[str, float]]

    def ratio_series(self, camp: str) -> DailySeries:
        return DailySeries.from_mapping({d: r[camp] for d, r in self.day_ratio.items()})

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            def dump(obj):
                fh.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")

            dump({"record": "camps", "camps": list(self.camps)})
            for u, c in sorted(self.user_camp.items()):
                dump({"record": "user_camp", "user_id": u, "camp": c})
            for t, c in sorted(self.hashtag_class.items()):
                dump({"record": "hashtag_class", "hashtag": t, "class": c})
            for d in sorted(self.day_ratio):
                for c in self.camps:
                    dump({"record": "day_ratio", "day": d.isoformat(), "camp": c,
                          "ratio": self.day_ratio[d][c]})

    @classmethod
    def load(cls, path) -> "GroundTruth":
        camps: tuple[str, ...] = ()
        user_camp: dict[str, str] = {}
        hashtag_class: dict[str, str] = {}
        day_ratio: dict[date, dict[str, float]] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                obj = json.loads(line)
                kind = obj["record"]
                if kind == "camps":
                    camps = tuple(obj["camps"])
                elif kind == "user_camp":
                    user_camp[obj["user_id"]] = obj["camp"]
                elif kind == "hashtag_class":
                    hashtag_class[obj["hashtag"]] = obj["class"]
                elif kind == "day_ratio":
                    day_ratio.setdefault(date.fromisoformat(obj["day"]), {})[obj["camp"]] = obj["ratio"]
        return cls(camps=camps, user_camp=user_camp, hashtag_class=hashtag_class,
                   day_ratio=day_ratio)


@dataclass
class _CampPools:
    members: list[int]
    core: list[int]
    popular: list[int]
    pairs: list[int]
    cand_only: list[int]
    regular: list[int]
    core_set: frozenset[int] = frozenset()
    pair_set: frozenset[int] = frozenset()
    cand_set: frozenset[int] = frozenset()

    def __post_init__(self):
        self.core_set = frozenset(self.core)
        self.pair_set = frozenset(self.pairs)
        self.cand_set = frozenset(self.cand_only)


def _event_series(rng, n_days: int) -> np.ndarray:
    t = np.arange(n_days, dtype=float)
    wave = np.sin(2 * np.pi * t / 29.0) + 0.6 * np.sin(2 * np.pi * t / 67.0 + 1.3)
    noise = rng.normal(0.0, 1.0, n_days)
    kernel = np.ones(5) / 5.0
    smooth = np.convolve(noise, kernel, mode="same")
    e = wave + 0.8 * smooth
    sd = e.std()
    return (e - e.mean()) / sd if sd > 0 else e * 0.0


def _zipf_weights(n: int, alpha: float) -> np.ndarray:
    w = 1.0 / np.power(np.arange(1, n + 1, dtype=float), alpha)
    return w / w.sum()


def generate_synthetic_corpus(
    config: SyntheticConfig, seed: int
) -> tuple[CorpusWindow, GroundTruth]:
    """Deterministic planted world for a fixed seed."""
    config.validate()
    rng = np.random.default_rng(seed)
    k = len(config.camps)

    # exact camp sizes over a shuffled user pool
    order = rng.permutation(config.n_users)
    sizes = [int(round(config.n_users * s)) for s in config.camp_shares]
    sizes[-1] = config.n_users - sum(sizes[:-1])
    pools: dict[str, _CampPools] = {}
    user_camp: dict[str, str] = {}
    pos = 0
    for ci, camp in enumerate(config.camps):
        members = sorted(int(u) for u in order[pos : pos + sizes[ci]])
        pos += sizes[ci]
        for u in members:
            user_camp[f"u{u:05d}"] = camp
        n_core = int(round(config.core_frac * len(members))) if ci == k - 1 else 0
        n_pair = int(round(config.pair_pool_frac * len(members)))
        n_cand = int(round(config.candidate_only_frac * len(members)))
        core = members[:n_core]
        rest = members[n_core:]
        popular = core[: config.popular_per_camp] if ci == k - 1 else rest[: config.popular_per_camp]
        if ci == k - 1:
            after_pop = rest
        else:
            after_pop = rest[config.popular_per_camp :]
        pairs = after_pop[:n_pair]
        cand_only = after_pop[n_pair : n_pair + n_cand]
        regular = after_pop[n_pair + n_cand :]
        if not popular:
            popular = regular[: config.popular_per_camp] or members
        pools[camp] = _CampPools(
            members=members, core=core, popular=popular, pairs=pairs,
            cand_only=cand_only, regular=regular,
        )

    # planted activation dynamics
    e = _event_series(rng, config.n_days)
    base = [
        config.activity_level * config.support_means[ci] / config.camp_shares[ci]
        for ci in range(k)
    ]
    act = np.empty((k, config.n_days))
    for ci in range(k):
        act[ci] = np.clip(base[ci] * (1.0 + config.event_response[ci] * e), 0.02, 0.95)

    day_ratio: dict[date, dict[str, float]] = {}
    for di in range(config.n_days):
        lam = [sizes[ci] * act[ci, di] for ci in range(k)]
        total = sum(lam)
        day_ratio[config.start_day + timedelta(days=di)] = {
            config.camps[ci]: lam[ci] / total for ci in range(k)
        }

    # vocabularies
    camp_words = {c: [f"{c}word{j:03d}" for j in range(config.words_per_camp)] for c in config.camps}
    common_words = [f"common{j:03d}" for j in range(config.common_words)]
    camp_tags = {c: config.camp_tags(c) for c in config.camps}
    neutral_tags = [f"misc{j:02d}" for j in range(config.neutral_tag_count)]
    event_tags = [f"event{j:02d}" for j in range(config.event_tag_count)]
    event_span = max(1, config.n_days // max(config.event_tag_count, 1))
    tag_w = _zipf_weights(config.tags_per_camp, config.tag_zipf)
    hashtag_class = {t: c for c in config.camps for t in camp_tags[c]}

    # per-day divergence noise factors
    def noise_matrix(sigma: float) -> np.ndarray:
        if sigma <= 0:
            return np.ones((k, config.n_days))
        return np.exp(rng.normal(0.0, sigma, (k, config.n_days)))

    own_noise = noise_matrix(config.attention_noise)
    other_noise = noise_matrix(config.attention_noise)
    tag_noise = noise_matrix(config.tag_rate_noise)
    flip_prob = (
        rng.uniform(0.0, config.sentiment_noise, (k, config.n_days))
        if config.sentiment_noise > 0
        else np.zeros((k, config.n_days))
    )

    tag_probs = np.array(config.tag_count_probs)
    records: list[TweetRecord] = []
    tweet_counter = 0

    def uid(u: int) -> str:
        return f"u{u:05d}"

    def draw_client() -> str:
        if rng.random() < config.official_rate:
            return OFFICIAL_CLIENTS[int(rng.integers(len(OFFICIAL_CLIENTS)))]
        return UNOFFICIAL_CLIENTS[int(rng.integers(len(UNOFFICIAL_CLIENTS)))]

    def camp_text(ci: int, di: int, *, with_tags: bool = True, forced_tag: str | None = None):
        """(text, hashtags) with camp-flavored words, tags, candidate tokens
        and sentiment emoticons."""
        camp = config.camps[ci]
        n_words = 3 + int(rng.poisson(max(config.words_per_tweet - 3.0, 0.1)))
        words = []
        specific = rng.random(n_words) < config.word_mix
        w_ids = rng.integers(0, config.words_per_camp, n_words)
        c_ids = rng.integers(0, config.common_words, n_words)
        for j in range(n_words):
            words.append(camp_words[camp][w_ids[j]] if specific[j] else common_words[c_ids[j]])

        cand_tokens: list[str] = []
        mention_own = min(config.mention_own_base[ci] * own_noise[ci, di], 0.95)
        mention_other = min(config.mention_other_base[ci] * other_noise[ci, di], 0.95)
        mentions_own = rng.random() < mention_own
        mentions_other = rng.random() < mention_other
        if mentions_own:
            cand_tokens.append(config.candidate_token(camp))
        if mentions_other:
            others = [c for c in config.camps if c != camp]
            cand_tokens.append(config.candidate_token(others[int(rng.integers(len(others)))]))

        emoticons: list[str] = []
        flip = flip_prob[ci, di]
        if mentions_own and rng.random() < config.emoticon_rate:
            good = rng.random() >= flip
            pool = _POS_EMO if good else _NEG_EMO
            emoticons.append(pool[int(rng.integers(len(pool)))])
        if mentions_other and rng.random() < config.emoticon_rate:
            bad = rng.random() >= flip
            pool = _NEG_EMO if bad else _POS_EMO
            emoticons.append(pool[int(rng.integers(len(pool)))])

        tags: list[str] = []
        if forced_tag is not None:
            tags.append(forced_tag)
        elif with_tags:
            p0 = tag_probs[0]
            eff_p0 = float(np.clip(1.0 - (1.0 - p0) * tag_noise[ci, di], 0.02, 0.98))
            rest = tag_probs[1:] / tag_probs[1:].sum() * (1.0 - eff_p0)
            n_tags = int(rng.choice(len(tag_probs), p=np.concatenate(([eff_p0], rest))))
            for _ in range(n_tags):
                u = rng.random()
                if u < config.cross_tag_rate:
                    other = [c for c in config.camps if c != camp]
                    oc = other[int(rng.integers(len(other)))]
                    tags.append(camp_tags[oc][int(rng.choice(config.tags_per_camp, p=tag_w))])
                elif u < config.cross_tag_rate + config.neutral_tag_rate and neutral_tags:
                    tags.append(neutral_tags[int(rng.integers(len(neutral_tags)))])
                else:
                    tags.append(camp_tags[camp][int(rng.choice(config.tags_per_camp, p=tag_w))])
            # tag-rich event tweets shared by every camp; always paired with
            # a camp tag, which is what makes the bridge edges significant
            if event_tags and rng.random() < config.event_tag_rate * (1.0 + max(e[di], 0.0)):
                tags.append(event_tags[min(di // event_span, len(event_tags) - 1)])
                tags.append(camp_tags[camp][int(rng.choice(config.tags_per_camp, p=tag_w))])
        tags = sorted(set(tags))

        urls: list[str] = []
        if rng.random() < config.url_rate:
            urls.append(f"https://{camp}news.example/{int(rng.integers(10000)):04d}")

        parts = words + cand_tokens + [f"#{t}" for t in tags] + urls + emoticons
        return " ".join(parts), tags

    day_seconds = 86400
    for di in range(config.n_days):
        day = config.start_day + timedelta(days=di)
        day_start = datetime(day.year, day.month, day.day, tzinfo=timezone.utc)

        active: dict[str, list[int]] = {}
        tie_users: dict[str, set[int]] = {}
        for ci, camp in enumerate(config.camps):
            members = pools[camp].members
            mask = rng.random(len(members)) < act[ci, di]
            act_list = [members[j] for j in np.nonzero(mask)[0]]
            active[camp] = act_list
            tie_mask = rng.random(len(act_list)) < config.tie_rate
            tie_users[camp] = {act_list[j] for j in np.nonzero(tie_mask)[0]}

        # core ring duty: directed reply cycle over today's active core members
        last_camp = config.camps[-1]
        core_today = [
            u for u in active[last_camp]
            if u in pools[last_camp].core_set and rng.random() < config.core_active_rate
        ]
        ring_next: dict[int, int] = {}
        if len(core_today) >= 2:
            for j, u in enumerate(core_today):
                ring_next[u] = core_today[(j + 1) % len(core_today)]

        # isolated mutual pairs from the reserved pair pool
        pair_today = [u for camp in config.camps for u in active[camp] if u in pools[camp].pair_set]
        pair_today = [pair_today[j] for j in rng.permutation(len(pair_today))]
        pair_partner: dict[int, int] = {}
        for j in range(0, len(pair_today) - 1, 2):
            pair_partner[pair_today[j]] = pair_today[j + 1]
            pair_partner[pair_today[j + 1]] = pair_today[j]

        # deterministic intra-day spacing
        planned: list[tuple[int, int, int]] = []  # (user, camp_idx, tweet_idx)
        tweet_counts: dict[int, int] = {}
        for ci, camp in enumerate(config.camps):
            rate = config.tweets_per_user[ci]
            for u in active[camp]:
                if u in tie_users[camp]:
                    cnt = 2
                else:
                    cnt = 1 + int(rng.poisson(rate - 1.0))
                tweet_counts[u] = cnt
                for ti in range(cnt):
                    planned.append((u, ci, ti))
        n_today = len(planned)

        for slot, (u, ci, ti) in enumerate(planned):
            camp = config.camps[ci]
            user = uid(u)
            ts = day_start + timedelta(seconds=(slot * day_seconds) // max(n_today, 1))
            tweet_id = f"t{tweet_counter:08d}"
            tweet_counter += 1

            retweet_of = reply_to = quote_of = None
            mentions: tuple[str, ...] = ()

            if u in tie_users[camp]:
                # balanced pair: one tweet per side, forced opposing tags
                side = ci if ti == 0 else (ci + 1) % k
                text, tags = camp_text(side, di, forced_tag=camp_tags[config.camps[side]][
                    int(rng.choice(config.tags_per_camp, p=tag_w))
                ])
                records.append(TweetRecord(
                    tweet_id=tweet_id, user_id=user, timestamp=ts, text=text,
                    hashtags=tuple(tags), source_client=OFFICIAL_CLIENTS[0],
                ))
                continue

            if u in pair_partner:
                if ti == 0:
                    reply_to = uid(pair_partner[u])
            elif u in pools[camp].cand_set:
                mentions = (config.candidate_account(camp),)
            elif u in ring_next and ti == 0:
                reply_to = uid(ring_next[u])
            else:
                roll = rng.random()
                popular = pools[camp].popular
                if u in ring_next and roll < config.core_chord_rate:
                    target = core_today[int(rng.integers(len(core_today)))]
                    if target != u:
                        reply_to = uid(target)
                elif roll < config.retweet_rate:
                    target = popular[int(rng.integers(len(popular)))]
                    if target != u:
                        retweet_of = uid(target)
                elif roll < config.retweet_rate + config.reply_rate:
                    target = popular[int(rng.integers(len(popular)))]
                    if target != u:
                        reply_to = uid(target)
                elif roll < config.retweet_rate + config.reply_rate + config.mention_rate:
                    if rng.random() < config.cross_mention_rate and k > 1:
                        other = [c for c in config.camps if c != camp]
                        oc = other[int(rng.integers(len(other)))]
                        pool = pools[oc].popular
                    else:
                        pool = popular
                    target = pool[int(rng.integers(len(pool)))]
                    if target != u:
                        mentions = (uid(target),)
                elif roll < config.retweet_rate + config.reply_rate + config.mention_rate + config.quote_rate:
                    target = popular[int(rng.integers(len(popular)))]
                    if target != u:
                        quote_of = uid(target)

            text, tags = camp_text(ci, di)
            records.append(TweetRecord(
                tweet_id=tweet_id, user_id=user, timestamp=ts, text=text,
                hashtags=tuple(tags), mentions=mentions, retweet_of=retweet_of,
                reply_to=reply_to, quote_of=quote_of, source_client=draw_client(),
                is_retweet=retweet_of is not None,
            ))

    corpus = CorpusWindow.from_records(
        records,
        start_day=config.start_day,
        end_day=config.start_day + timedelta(days=config.n_days - 1),
    )
    truth = GroundTruth(
        camps=config.camps,
        user_camp=user_camp,
        hashtag_class=hashtag_class,
        day_ratio=day_ratio,
    )
    return corpus, truth


def planted_polls(
    truth: GroundTruth, config: SyntheticConfig, seed: int
) -> DailySeries:
    """Poll-side series: the planted support ratio of camp 0, smoothed with
    the backward window, delayed, and affinely rescaled plus noise."""
    from .pollfit import backward_moving_average

    rng = np.random.default_rng(seed + 777)
    ratio = truth.ratio_series(config.camps[0])
    smoothed = backward_moving_average(ratio, config.poll_window)
    mapping: dict[date, float] = {}
    first_full = config.poll_window - 1 + config.poll_delay
    if first_full >= len(ratio) - 10:
        first_full = config.poll_delay  # tiny worlds: allow partial windows
    for i in range(first_full, len(ratio)):
        day = ratio.day_at(i)
        src = smoothed.value_on(day - timedelta(days=config.poll_delay))
        if math.isnan(src):
            continue
        mapping[day] = (
            config.poll_scale * src + config.poll_offset + rng.normal(0.0, config.poll_noise)
        )
    return DailySeries.from_mapping(mapping)


def write_world(out_dir, config: SyntheticConfig, seed: int):
    """Generate and persist a full world: corpus, ground truth, polls, seeds
    and a machine-readable world descriptor. Returns the paths."""
    import os

    from .pollfit import PollSeries, write_polls_csv
    from .propagation import SeedAssignment, write_seeds_file

    os.makedirs(out_dir, exist_ok=True)
    corpus, truth = generate_synthetic_corpus(config, seed)
    paths = {
        "corpus": os.path.join(out_dir, "corpus.jsonl"),
        "truth": os.path.join(out_dir, "truth.jsonl"),
        "polls": os.path.join(out_dir, "polls.csv"),
        "seeds": os.path.join(out_dir, "seeds.txt"),
        "world": os.path.join(out_dir, "world.json"),
    }
    corpus.save(paths["corpus"])
    truth.save(paths["truth"])
    polls = PollSeries(candidates=(config.camps[0], config.camps[1]), y_a=planted_polls(truth, config, seed))
    write_polls_csv(paths["polls"], polls, share_other=config.poll_share_other)
    seeds = SeedAssignment(
        classes=config.camps,
        seeds={c: frozenset(config.seed_tags(c)) for c in config.camps},
    )
    write_seeds_file(paths["seeds"], seeds)
    world = {
        "camps": list(config.camps),
        "official_clients": list(OFFICIAL_CLIENTS),
        "unofficial_clients": list(UNOFFICIAL_CLIENTS),
        "excluded_accounts": sorted(config.excluded_accounts()),
        "mention_keywords": {c: sorted(kws) for c, kws in config.mention_keywords().items()},
        "category_hashtags": {
            c: {side: sorted(tags) for side, tags in d.items()}
            for c, d in config.category_hashtags().items()
        },
        "poll": {
            "scale": config.poll_scale,
            "offset": config.poll_offset,
            "delay": config.poll_delay,
            "window": config.poll_window,
        },
        "seed": seed,
        "n_users": config.n_users,
        "n_days": config.n_days,
        "start_day": config.start_day.isoformat(),
    }
    with open(paths["world"], "w", encoding="utf-8") as fh:
        json.dump(world, fh, sort_keys=True, indent=1)
    return paths


def published_rates_config(**overrides) -> SyntheticConfig:
    """Generator tuned to the published per-camp rates (2.6 vs 3.9 tweets
    per user per day, responsive vs steady camps, 92% official clients,
    4.5% tie rate). Keyword arguments override individual fields."""
    return replace(SyntheticConfig(), **overrides)


def fixture_config(**overrides) -> SyntheticConfig:
    """Small world (~10k tweets) for the end-to-end pipeline fixture.

    Long enough that the training period alone covers the default fit
    overlap, with a poll delay leaving room for the 7-day forecast, event
    tweets frequent enough that the bridge edges clear the significance
    threshold at this corpus size, and activation swings strong enough
    that the planted trend stands out of the small-population sampling
    noise in the daily ratio.
    """
    base = dict(n_users=150, n_days=90, activity_level=0.30, poll_delay=8,
                event_tag_rate=0.16, event_response=(0.5, 0.14))
    base.update(overrides)
    return replace(SyntheticConfig(), **base)
