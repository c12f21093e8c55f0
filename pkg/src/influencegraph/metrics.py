"""Influence metrics computed from an account's recent timeline.

Everything here derives from the newest (at most 100) tweets of one
account: h-indexes over per-tweet retweet and favorite counts, the
"adjusted tweets" compression of the squared retweet h-index, posting
rate and composition statistics, and the combined influence metric

    (tweets + adjusted_tweets) / hours_since_oldest
        * order_of_magnitude(followers)
        * log10(followers / following + 1)

All functions are pure; identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import datetime
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

MAX_WINDOW = 100


def round_reported(value: float) -> float:
    """Round half-up to three decimals; applied at reporting boundaries only."""
    return float(Decimal(repr(float(value))).quantize(Decimal("0.001"), ROUND_HALF_UP))


@dataclass(frozen=True)
class Tweet:
    """One status from an account's retrieved timeline."""

    id: str
    created_at: datetime
    retweet_count: int = 0
    favorite_count: int = 0
    is_retweet: bool = False
    in_reply_to: str | None = None
    hashtags: frozenset[str] = frozenset()
    urls: frozenset[str] = frozenset()
    image_urls: frozenset[str] = frozenset()
    mentions: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.created_at.tzinfo is None:
            raise ValueError(f"tweet {self.id}: created_at must be timezone-aware")
        if self.retweet_count < 0:
            raise ValueError(f"tweet {self.id}: negative retweet_count")
        if self.favorite_count < 0:
            raise ValueError(f"tweet {self.id}: negative favorite_count")
        for name in ("hashtags", "urls", "image_urls", "mentions"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))


@dataclass(frozen=True)
class AccountSnapshot:
    """Profile counters plus the newest (<= 100) tweets of one account.

    The timeline is ordered newest first and every tweet predates
    ``retrieved_at``.
    """

    screen_name: str
    retrieved_at: datetime
    display_name: str = ""
    description: str = ""
    protected: bool = False
    followers: int = 0
    following: int = 0
    total_tweets: int = 0
    timeline: tuple[Tweet, ...] = ()

    def __post_init__(self) -> None:
        if not self.screen_name:
            raise ValueError("screen_name must be nonempty")
        if self.retrieved_at.tzinfo is None:
            raise ValueError("retrieved_at must be timezone-aware")
        for name in ("followers", "following", "total_tweets"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        object.__setattr__(self, "timeline", tuple(self.timeline))
        if len(self.timeline) > MAX_WINDOW:
            raise ValueError(f"timeline exceeds {MAX_WINDOW} tweets")
        previous = None
        for tweet in self.timeline:
            if tweet.created_at > self.retrieved_at:
                raise ValueError(f"tweet {tweet.id} postdates retrieved_at")
            if previous is not None and tweet.created_at > previous:
                raise ValueError("timeline must be ordered newest first")
            previous = tweet.created_at


@dataclass(frozen=True)
class TimelineWindow:
    """Rate and composition statistics for one retrieved timeline."""

    tweet_count: int
    hours_since_oldest: float
    tweets_per_day: float
    retweet_percent: float
    reply_ratio: float


@dataclass(frozen=True)
class AdjustedTweets:
    """Compressed form of a squared h-index: value = mantissa/10 + 10*exponent."""

    mantissa: float
    exponent: int
    value: float


@dataclass(frozen=True)
class GeneralInfo:
    """Account-level counters reported as "General Information"."""

    tweets: int
    tweets_per_day: float
    rt_percent: float
    followers: int
    following: int


@dataclass(frozen=True)
class QualityMetrics:
    """Engagement-quality measurements reported as "Quality Metrics"."""

    h_index_rt: float
    h_index_fav: float
    h_index_rt_daily: float
    h_index_fav_daily: float
    reply_ratio: float
    influence_metric: float


def h_index(counts: Sequence[int]) -> int:
    """Largest h such that at least h of the counts are >= h.

    An empty sequence has index 0.
    """
    if any(count < 0 for count in counts):
        raise ValueError("counts must be nonnegative")
    best = 0
    for rank, count in enumerate(sorted(counts, reverse=True), start=1):
        if count >= rank:
            best = rank
        else:
            break
    return best


def _floor_log10(value: float) -> int:
    exponent = math.floor(math.log10(value))
    # guard against log10 landing a hair off at powers of ten
    if 10.0 ** (exponent + 1) <= value:
        exponent += 1
    elif value < 10.0 ** exponent:
        exponent -= 1
    return exponent


def adjusted_tweets(h: float) -> AdjustedTweets:
    """Express the squared h-index on a compressed scale.

    The square is rewritten as mantissa * 10^exponent with a two-digit
    mantissa where possible, and reported as mantissa/10 + 10*exponent.
    Indexes below one are not squared; squares below ten keep their full
    fractional mantissa.
    """
    if h < 0:
        raise ValueError("h-index must be nonnegative")
    raw = h * h if h >= 1 else h
    if raw == 0:
        return AdjustedTweets(0.0, 0, 0.0)
    if raw < 10:
        return AdjustedTweets(raw, 0, raw / 10)
    exponent = _floor_log10(raw) - 1
    mantissa = float(math.floor(raw / 10.0**exponent))
    return AdjustedTweets(mantissa, exponent, mantissa / 10 + 10 * exponent)


def order_of_magnitude(n: int) -> int:
    """floor(log10(n)) for n >= 1; zero for 0 and 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n <= 1:
        return 0
    return len(str(n)) - 1


def audience_factor(followers: int, following: int) -> float:
    """Base-10 log of the followers-to-following ratio plus one.

    The +1 keeps the factor positive when the two counts are equal; a
    following count of zero is clamped to one.
    """
    return math.log10(followers / max(following, 1) + 1)


def window_stats(timeline: Sequence[Tweet], now: datetime) -> TimelineWindow:
    """Posting rate and composition of a newest-first timeline at ``now``.

    The window span is clamped to at least one hour so burst posting
    cannot blow up the rates.
    """
    count = len(timeline)
    if count == 0:
        return TimelineWindow(0, 1.0, 0.0, 0.0, 0.0)
    oldest = min(tweet.created_at for tweet in timeline)
    newest = max(tweet.created_at for tweet in timeline)
    if newest > now:
        raise ValueError("timeline contains tweets dated after now")
    hours = max(1.0, (now - oldest).total_seconds() / 3600.0)
    retweets = sum(1 for tweet in timeline if tweet.is_retweet)
    replies = sum(1 for tweet in timeline if tweet.in_reply_to is not None)
    return TimelineWindow(
        tweet_count=count,
        hours_since_oldest=hours,
        tweets_per_day=24.0 * count / hours,
        retweet_percent=100.0 * retweets / count,
        reply_ratio=replies / count,
    )


def influence_metric(
    window: TimelineWindow, followers: int, following: int, rt_h_index: float
) -> float:
    """Combined influence score of an account over its retrieved window.

    Zero when the window is empty or the account has fewer than ten
    followers (order of magnitude zero).
    """
    if window.tweet_count == 0:
        return 0.0
    attributed = window.tweet_count + adjusted_tweets(rt_h_index).value
    return (
        attributed
        / window.hours_since_oldest
        * order_of_magnitude(followers)
        * audience_factor(followers, following)
    )


def daily_h_estimate(h: float, window: TimelineWindow) -> float:
    """h-index scaled to a per-day estimate over the window's span.

    The divisor is floored at one day.
    """
    return h / max(1.0, window.hours_since_oldest / 24.0)


def compute_profile(
    snapshot: AccountSnapshot, now: datetime
) -> tuple[GeneralInfo, QualityMetrics]:
    """All reported metrics for one account snapshot, evaluated at ``now``.

    The h-indexes skip the account's own retweets: retweeted content is
    credited to its original author, not the retweeter. The percentage
    and ratio statistics use the full window.
    """
    window = window_stats(snapshot.timeline, now)
    authored = [tweet for tweet in snapshot.timeline if not tweet.is_retweet]
    rt_h = h_index([tweet.retweet_count for tweet in authored])
    fav_h = h_index([tweet.favorite_count for tweet in authored])
    general = GeneralInfo(
        tweets=snapshot.total_tweets,
        tweets_per_day=window.tweets_per_day,
        rt_percent=window.retweet_percent,
        followers=snapshot.followers,
        following=snapshot.following,
    )
    quality = QualityMetrics(
        h_index_rt=float(rt_h),
        h_index_fav=float(fav_h),
        h_index_rt_daily=daily_h_estimate(rt_h, window),
        h_index_fav_daily=daily_h_estimate(fav_h, window),
        reply_ratio=window.reply_ratio,
        influence_metric=influence_metric(
            window, snapshot.followers, snapshot.following, rt_h
        ),
    )
    return general, quality
