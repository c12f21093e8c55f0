"""Timeline-JSON ingestion, the graph update cycle, and account search.

Timeline documents mirror the Twitter REST v1.1 field names: a ``user``
object (screen_name, name, description, protected, followers_count,
friends_count, statuses_count) plus a ``statuses`` array whose entries
carry id_str, created_at (ISO-8601 UTC), retweet_count, favorite_count,
an optional ``retweeted_status`` marker, an optional
``in_reply_to_screen_name``, and an ``entities`` object with hashtags /
urls / media / user_mentions. An optional top-level ``retrieved_at``
records when the document was captured.

The update cycle runs in four phases per account: fetch, compute,
triplify, store write. The metric bundles (TwitterAccount, GeneralInfo,
QualityMetrics subjects) are overwritten on refresh; entity links
accumulate. Account search computes and logs metrics without touching
the graph. The metrics log is an append-only CSV replacing a relational
database; it keeps full float precision so rows can be recomputed
exactly.
"""

from __future__ import annotations

import csv
import json
import re
from contextlib import nullcontext
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, ContextManager, Iterable, Protocol, Sequence

from .metrics import (
    MAX_WINDOW,
    AccountSnapshot,
    GeneralInfo,
    QualityMetrics,
    Tweet,
    compute_profile,
)
from .ontology import DEFAULT_BASE, ResourceKind, mint_resource_iri, triplify
from .rdf import Iri
from .store import TripleStore


class TimelineParseError(ValueError):
    """The timeline document is malformed or missing required fields."""


class AccountNotFoundError(LookupError):
    """The source has no timeline for the requested screen name."""


class FetchError(RuntimeError):
    """The source failed while retrieving a timeline."""


_SCREEN_NAME = re.compile(r"^[A-Za-z0-9_]{1,50}$")


def parse_instant(text: str) -> datetime:
    """ISO-8601 timestamp; 'Z' accepted, naive values rejected."""
    try:
        value = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except (ValueError, TypeError) as exc:
        raise TimelineParseError(f"unparseable timestamp: {text!r}") from exc
    if value.tzinfo is None:
        raise TimelineParseError(f"timestamp must carry a timezone: {text!r}")
    return value.astimezone(timezone.utc)


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise TimelineParseError(f"{context}: missing required field {key!r}")
    return mapping[key]


def _entity_values(entities: dict, key: str, *fields: str) -> frozenset[str]:
    values = set()
    for entry in entities.get(key) or ():
        if not isinstance(entry, dict):
            continue
        for field_name in fields:
            value = entry.get(field_name)
            if value:
                values.add(str(value))
                break
    return frozenset(values)


def _parse_status(raw: object, position: int) -> Tweet:
    if not isinstance(raw, dict):
        raise TimelineParseError(f"status #{position}: expected a JSON object")
    status_id = raw.get("id_str") or str(raw.get("id") or "")
    if not status_id:
        raise TimelineParseError(f"status #{position}: missing id_str")
    context = f"status {status_id}"
    created_at = parse_instant(str(_require(raw, "created_at", context)))
    entities = raw.get("entities") or {}
    if not isinstance(entities, dict):
        raise TimelineParseError(f"{context}: entities must be an object")
    try:
        return Tweet(
            id=status_id,
            created_at=created_at,
            retweet_count=int(raw.get("retweet_count", 0)),
            favorite_count=int(raw.get("favorite_count", 0)),
            is_retweet=raw.get("retweeted_status") is not None,
            in_reply_to=raw.get("in_reply_to_screen_name") or None,
            hashtags=_entity_values(entities, "hashtags", "text"),
            urls=_entity_values(entities, "urls", "expanded_url", "url"),
            image_urls=_entity_values(entities, "media", "media_url_https", "media_url"),
            mentions=_entity_values(entities, "user_mentions", "screen_name"),
        )
    except (TypeError, ValueError) as exc:
        raise TimelineParseError(f"{context}: {exc}") from exc


def parse_timeline(data: bytes | str) -> AccountSnapshot:
    """Parse a timeline document into a snapshot of the newest 100 tweets.

    When the document has no ``retrieved_at``, the newest status
    timestamp is used, falling back to the current time for an empty
    timeline.
    """
    try:
        document = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TimelineParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise TimelineParseError("timeline document must be a JSON object")
    user = _require(document, "user", "document")
    if not isinstance(user, dict):
        raise TimelineParseError("document: 'user' must be an object")
    screen_name = str(_require(user, "screen_name", "user") or "")
    if not screen_name:
        raise TimelineParseError("user: screen_name must be nonempty")

    statuses = document.get("statuses") or []
    if not isinstance(statuses, list):
        raise TimelineParseError("document: 'statuses' must be an array")
    tweets = [_parse_status(status, index) for index, status in enumerate(statuses)]
    tweets.sort(key=lambda tweet: tweet.created_at, reverse=True)
    tweets = tweets[:MAX_WINDOW]

    if "retrieved_at" in document:
        retrieved_at = parse_instant(str(document["retrieved_at"]))
    elif tweets:
        retrieved_at = tweets[0].created_at
    else:
        retrieved_at = datetime.now(timezone.utc)

    try:
        return AccountSnapshot(
            screen_name=screen_name,
            retrieved_at=retrieved_at,
            display_name=str(user.get("name") or ""),
            description=str(user.get("description") or ""),
            protected=bool(user.get("protected", False)),
            followers=int(user.get("followers_count", 0)),
            following=int(user.get("friends_count", 0)),
            total_tweets=int(user.get("statuses_count", 0)),
            timeline=tuple(tweets),
        )
    except (TypeError, ValueError) as exc:
        raise TimelineParseError(str(exc)) from exc


class TimelineSource(Protocol):
    """Resolves screen names to raw timeline JSON documents."""

    def fetch(self, screen_name: str) -> bytes: ...


@dataclass(frozen=True)
class FixtureDirectorySource:
    """Serves ``<screen_name>.json`` documents from a local directory."""

    directory: Path

    def fetch(self, screen_name: str) -> bytes:
        if not _SCREEN_NAME.match(screen_name):
            raise AccountNotFoundError(screen_name)
        path = Path(self.directory) / f"{screen_name}.json"
        if not path.is_file():
            raise AccountNotFoundError(screen_name)
        try:
            return path.read_bytes()
        except OSError as exc:
            raise FetchError(f"cannot read {path}: {exc}") from exc

    def account_names(self) -> list[str]:
        return sorted(path.stem for path in Path(self.directory).glob("*.json"))


@dataclass(frozen=True)
class MetricsRecord:
    """One flat metrics row, as appended to the history log."""

    screen_name: str
    retrieved_at: datetime
    tweets: int
    followers: int
    following: int
    tweets_per_day: float
    rt_percent: float
    h_index_rt: float
    h_index_fav: float
    h_index_rt_daily: float
    h_index_fav_daily: float
    reply_ratio: float
    influence_metric: float

    @classmethod
    def build(
        cls,
        screen_name: str,
        retrieved_at: datetime,
        general: GeneralInfo,
        quality: QualityMetrics,
    ) -> "MetricsRecord":
        return cls(
            screen_name=screen_name,
            retrieved_at=retrieved_at,
            tweets=general.tweets,
            followers=general.followers,
            following=general.following,
            tweets_per_day=general.tweets_per_day,
            rt_percent=general.rt_percent,
            h_index_rt=quality.h_index_rt,
            h_index_fav=quality.h_index_fav,
            h_index_rt_daily=quality.h_index_rt_daily,
            h_index_fav_daily=quality.h_index_fav_daily,
            reply_ratio=quality.reply_ratio,
            influence_metric=quality.influence_metric,
        )


LOG_COLUMNS = (
    "screen_name",
    "retrieved_at",
    "tweets",
    "followers",
    "following",
    "tweets_per_day",
    "rt_percent",
    "h_index_rt",
    "h_index_fav",
    "h_index_rt_daily",
    "h_index_fav_daily",
    "reply_ratio",
    "influence_metric",
)


class MetricsLog:
    """Append-only CSV history of computed metrics, one row per run."""

    def __init__(self, path: Path | str):
        self.path = Path(path)

    def append(self, record: MetricsRecord) -> None:
        new_file = not self.path.exists() or self.path.stat().st_size == 0
        with self.path.open("a", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            if new_file:
                writer.writerow(LOG_COLUMNS)
            writer.writerow(
                [
                    record.screen_name,
                    record.retrieved_at.astimezone(timezone.utc)
                    .isoformat()
                    .replace("+00:00", "Z"),
                    record.tweets,
                    record.followers,
                    record.following,
                    repr(record.tweets_per_day),
                    repr(record.rt_percent),
                    repr(record.h_index_rt),
                    repr(record.h_index_fav),
                    repr(record.h_index_rt_daily),
                    repr(record.h_index_fav_daily),
                    repr(record.reply_ratio),
                    repr(record.influence_metric),
                ]
            )

    def records(self) -> list[MetricsRecord]:
        if not self.path.exists():
            return []
        with self.path.open(newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            return [
                MetricsRecord(
                    screen_name=row["screen_name"],
                    retrieved_at=parse_instant(row["retrieved_at"]),
                    tweets=int(row["tweets"]),
                    followers=int(row["followers"]),
                    following=int(row["following"]),
                    tweets_per_day=float(row["tweets_per_day"]),
                    rt_percent=float(row["rt_percent"]),
                    h_index_rt=float(row["h_index_rt"]),
                    h_index_fav=float(row["h_index_fav"]),
                    h_index_rt_daily=float(row["h_index_rt_daily"]),
                    h_index_fav_daily=float(row["h_index_fav_daily"]),
                    reply_ratio=float(row["reply_ratio"]),
                    influence_metric=float(row["influence_metric"]),
                )
                for row in reader
            ]


@dataclass(frozen=True)
class UpdateReport:
    accounts_processed: int
    accounts_failed: int
    triples_added: int
    triples_removed: int
    started_at: datetime
    finished_at: datetime
    failures: tuple[tuple[str, str], ...] = ()


_REFRESHED_KINDS = (
    ResourceKind.TWITTER_ACCOUNT,
    ResourceKind.GENERAL_INFO,
    ResourceKind.QUALITY_METRICS,
)


def run_update_cycle(
    accounts: Iterable[str],
    source: TimelineSource,
    store: TripleStore,
    log: MetricsLog,
    now: datetime,
    base: Iri = DEFAULT_BASE,
    write_lock: Callable[[], ContextManager] | None = None,
) -> UpdateReport:
    """Refresh the graph and metrics log for each account.

    Per-account failures are isolated: one bad account never aborts the
    cycle. ``write_lock`` (when given) guards each account's store write
    so readers are only delayed per write batch.
    """
    lock = write_lock if write_lock is not None else nullcontext
    started = datetime.now(timezone.utc)
    processed = failed = added = removed = 0
    failures: list[tuple[str, str]] = []

    for name in accounts:
        try:
            snapshot = parse_timeline(source.fetch(name))
            general, quality = compute_profile(snapshot, now)
            graph = triplify(snapshot, general, quality, base)
            record = MetricsRecord.build(snapshot.screen_name, now, general, quality)
        except Exception as exc:  # noqa: BLE001 - per-account isolation
            failed += 1
            failures.append((name, str(exc)))
            continue
        with lock():
            for kind in _REFRESHED_KINDS:
                removed += store.remove_by_subject(
                    mint_resource_iri(base, kind, snapshot.screen_name)
                )
            added += store.load(graph)
        log.append(record)
        processed += 1

    return UpdateReport(
        accounts_processed=processed,
        accounts_failed=failed,
        triples_added=added,
        triples_removed=removed,
        started_at=started,
        finished_at=datetime.now(timezone.utc),
        failures=tuple(failures),
    )


def search_account(
    screen_name: str,
    source: TimelineSource,
    log: MetricsLog,
    now: datetime,
) -> MetricsRecord:
    """Compute and log metrics for one account without any graph write."""
    snapshot = parse_timeline(source.fetch(screen_name))
    general, quality = compute_profile(snapshot, now)
    record = MetricsRecord.build(snapshot.screen_name, now, general, quality)
    log.append(record)
    return record
