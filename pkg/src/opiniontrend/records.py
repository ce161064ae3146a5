"""Tweet corpus store: record model, line-delimited IO, and corpus filters.

A corpus is a window of calendar days, each holding zero or more tweet
records. Windows are immutable after load; filters return new windows and
never mutate their input, so any number of workers can read one corpus
concurrently.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone

log = logging.getLogger(__name__)

TIMESTAMP_FMT = "%Y-%m-%dT%H:%M:%SZ"

# Historical first-party client names. The set is configuration, not a fact
# about the data; override it per deployment.
DEFAULT_OFFICIAL_CLIENTS = frozenset(
    {
        "Twitter for iPhone",
        "Twitter for Android",
        "Twitter for iPad",
        "Twitter Web Client",
        "Twitter for Mac",
        "Twitter for Windows",
        "Twitter for Windows Phone",
        "Mobile Web",
        "Mobile Web (M2)",
        "Mobile Web (M5)",
        "TweetDeck",
    }
)


class CorpusFormatError(Exception):
    """Raised when a corpus file cannot be used at all."""


class MalformedRecord(ValueError):
    """Raised for a single record line that violates the schema."""


@dataclass(frozen=True)
class TweetRecord:
    """One post.

    ``hashtags`` are lowercase without the '#' sigil; ``mentions``,
    ``retweet_of``, ``reply_to`` and ``quote_of`` hold user ids.
    """

    tweet_id: str
    user_id: str
    timestamp: datetime
    text: str
    hashtags: tuple[str, ...] = ()
    mentions: tuple[str, ...] = ()
    retweet_of: str | None = None
    reply_to: str | None = None
    quote_of: str | None = None
    source_client: str = ""
    is_retweet: bool = False

    def __post_init__(self):
        for tag in self.hashtags:
            if tag != tag.lower() or "#" in tag:
                raise MalformedRecord(f"hashtag {tag!r} must be lowercase and '#'-free")
        if self.is_retweet != (self.retweet_of is not None):
            raise MalformedRecord("is_retweet must mirror the presence of retweet_of")

    @property
    def day(self) -> date:
        return self.timestamp.date()

    def interaction_targets(self) -> tuple[str, ...]:
        """User ids this record directs attention at, in field order."""
        targets = []
        for t in (self.retweet_of, self.reply_to, self.quote_of):
            if t is not None:
                targets.append(t)
        targets.extend(self.mentions)
        return tuple(targets)

    def to_json_obj(self) -> dict:
        obj = {
            "tweet_id": self.tweet_id,
            "user_id": self.user_id,
            "timestamp": self.timestamp.strftime(TIMESTAMP_FMT),
            "text": self.text,
            "hashtags": list(self.hashtags),
            "mentions": list(self.mentions),
            "source_client": self.source_client,
            "is_retweet": self.is_retweet,
        }
        if self.retweet_of is not None:
            obj["retweet_of"] = self.retweet_of
        if self.reply_to is not None:
            obj["reply_to"] = self.reply_to
        if self.quote_of is not None:
            obj["quote_of"] = self.quote_of
        return obj


def parse_record(line: str) -> TweetRecord:
    """Parse one corpus line; raises MalformedRecord on any schema violation.

    Unknown fields are ignored.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise MalformedRecord("record line must be a JSON object")
    try:
        ts = datetime.strptime(obj["timestamp"], TIMESTAMP_FMT).replace(tzinfo=timezone.utc)
        return TweetRecord(
            tweet_id=str(obj["tweet_id"]),
            user_id=str(obj["user_id"]),
            timestamp=ts,
            text=str(obj["text"]),
            hashtags=tuple(str(t) for t in obj.get("hashtags", [])),
            mentions=tuple(str(m) for m in obj.get("mentions", [])),
            retweet_of=obj.get("retweet_of"),
            reply_to=obj.get("reply_to"),
            quote_of=obj.get("quote_of"),
            source_client=str(obj.get("source_client", "")),
            is_retweet=bool(obj.get("is_retweet", False)),
        )
    except MalformedRecord:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecord(str(exc)) from exc


def _serialize_record(rec: TweetRecord) -> str:
    return json.dumps(rec.to_json_obj(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class CorpusWindow:
    """Day-indexed immutable store of tweet records.

    Every day in [start_day, end_day] is representable; days with zero
    records exist as empty lists and are never interpolated.
    """

    start_day: date
    end_day: date
    days: dict[date, list[TweetRecord]] = field(default_factory=dict)
    malformed_count: int = 0

    def __post_init__(self):
        if self.end_day < self.start_day:
            raise ValueError("end_day before start_day")
        d = self.start_day
        while d <= self.end_day:
            self.days.setdefault(d, [])
            d += timedelta(days=1)
        for d, recs in self.days.items():
            if not (self.start_day <= d <= self.end_day):
                raise ValueError(f"day {d} outside window")
            for rec in recs:
                if rec.day != d:
                    raise ValueError(f"record {rec.tweet_id} stored under wrong day")

    @classmethod
    def from_records(
        cls,
        records,
        start_day: date | None = None,
        end_day: date | None = None,
        malformed_count: int = 0,
    ) -> "CorpusWindow":
        records = list(records)
        if not records and (start_day is None or end_day is None):
            raise ValueError("empty record set needs explicit window bounds")
        days: dict[date, list[TweetRecord]] = {}
        for rec in records:
            days.setdefault(rec.day, []).append(rec)
        if start_day is None:
            start_day = min(days)
        if end_day is None:
            end_day = max(days)
        return cls(start_day=start_day, end_day=end_day, days=days, malformed_count=malformed_count)

    def iter_days(self):
        d = self.start_day
        while d <= self.end_day:
            yield d, self.days[d]
            d += timedelta(days=1)

    def all_records(self):
        for _, recs in self.iter_days():
            yield from recs

    @property
    def num_records(self) -> int:
        return sum(len(r) for r in self.days.values())

    @property
    def day_list(self) -> list[date]:
        return [d for d, _ in self.iter_days()]

    def day_window(self, day: date) -> "CorpusWindow":
        """Single-day sub-window (for per-day parallel work)."""
        return CorpusWindow(start_day=day, end_day=day, days={day: list(self.days[day])})

    def save(self, path) -> None:
        """Write canonical line-delimited form: records sorted by (timestamp, tweet_id)."""
        recs = sorted(self.all_records(), key=lambda r: (r.timestamp, r.tweet_id))
        with open(path, "w", encoding="utf-8") as fh:
            for rec in recs:
                fh.write(_serialize_record(rec) + "\n")


def load_corpus(path, start_day: date | None = None, end_day: date | None = None) -> CorpusWindow:
    """Load a line-delimited corpus file.

    Malformed lines are counted and skipped; more than 50% malformed lines is
    treated as a wrong-file error. An unreadable path raises immediately.
    """
    records: list[TweetRecord] = []
    malformed = 0
    total = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            total += 1
            try:
                records.append(parse_record(line))
            except MalformedRecord as exc:
                malformed += 1
                log.debug("skipping malformed line %d: %s", total, exc)
    if total and malformed * 2 > total:
        raise CorpusFormatError(
            f"{path}: {malformed}/{total} lines malformed; this does not look like a corpus file"
        )
    if malformed:
        log.warning("%s: skipped %d/%d malformed lines", path, malformed, total)
    return CorpusWindow.from_records(
        records, start_day=start_day, end_day=end_day, malformed_count=malformed
    )


@dataclass(frozen=True)
class FilterSpec:
    """Corpus filter configuration.

    ``strict_rules`` is a set of rules, each a 1- or 2-tuple of lowercase
    keywords: a record passes when its case-folded text contains the single
    keyword, or both members of a pair.
    """

    official_clients: frozenset[str] = DEFAULT_OFFICIAL_CLIENTS
    strict_rules: tuple[tuple[str, ...], ...] = ()


def filter_official_clients(corpus: CorpusWindow, spec: FilterSpec) -> CorpusWindow:
    """Keep only records posted from an allowed source client."""
    if not spec.official_clients:
        raise ValueError("official_clients must be non-empty when the filter is enabled")
    days = {
        d: [r for r in recs if r.source_client in spec.official_clients]
        for d, recs in corpus.days.items()
    }
    out = CorpusWindow(start_day=corpus.start_day, end_day=corpus.end_day, days=days)
    before = corpus.num_records
    if before:
        log.info("official-client filter retained %.1f%% of %d records",
                 100.0 * out.num_records / before, before)
    return out


def _matches_strict(text: str, rules) -> bool:
    folded = text.casefold()
    for rule in rules:
        if all(kw in folded for kw in rule):
            return True
    return False


def filter_strict_keywords(corpus: CorpusWindow, spec: FilterSpec) -> CorpusWindow:
    """Keep records whose text satisfies at least one strict keyword rule."""
    if not spec.strict_rules:
        raise ValueError("strict_rules must be non-empty when the filter is enabled")
    days = {
        d: [r for r in recs if _matches_strict(r.text, spec.strict_rules)]
        for d, recs in corpus.days.items()
    }
    return CorpusWindow(start_day=corpus.start_day, end_day=corpus.end_day, days=days)
