"""Shared fixture builders: timeline documents, seeded stores, oracles."""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from influencegraph import (
    AccountSnapshot,
    TripleStore,
    Tweet,
    compute_profile,
    triplify,
)

FIXED_NOW = datetime(2026, 8, 3, 12, 0, 0, tzinfo=timezone.utc)

# the flagship endpoint query: accounts a given user both mentioned and
# replied to, with their full details, best metric first
MENTIONED_AND_REPLIED_QUERY = """PREFIX it: <http://www.influencetracker.com/ontology#>
PREFIX foaf: <http://xmlns.com/foaf/0.1/>
SELECT ?twitterAccount ?accountName ?influenceMetric ?h_index_RT ?h_index_Fav ?tweetsNum ?following
?followers ?TPD ?rtPerc ?h_index_RT_Daily ?h_index_Fav_Daily ?reply_ratio
WHERE {
  <http://www.influencetracker.com/resource/User/{accountName}> it:hasMentioned ?mentioned .
  ?mentioned foaf:account ?twitterAccount ;
    it:hasQualityMetrics ?quality ;
    it:hasGeneralInfo ?general .
  ?twitterAccount foaf:accountName ?accountName .
  ?quality it:influenceMetric ?influenceMetric ;
    it:hIndexRt ?h_index_RT ;
    it:hIndexFav ?h_index_Fav ;
    it:hIndexRtDaily ?h_index_RT_Daily ;
    it:hIndexFavDaily ?h_index_Fav_Daily ;
    it:replyRatio ?reply_ratio .
  ?general it:tweets ?tweetsNum ;
    it:following ?following ;
    it:followers ?followers ;
    it:tweetsPerDay ?TPD ;
    it:rtPercent ?rtPerc .
  FILTER EXISTS { <http://www.influencetracker.com/resource/User/{accountName}> it:hasRepliedTo ?mentioned}
}
ORDER BY DESC (?influenceMetric)"""


def query_for(screen_name: str) -> str:
    return MENTIONED_AND_REPLIED_QUERY.replace("{accountName}", screen_name)


def iso(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def make_status(
    status_id,
    created_at,
    retweet_count=0,
    favorite_count=0,
    retweet=False,
    reply_to=None,
    hashtags=(),
    urls=(),
    images=(),
    mentions=(),
):
    status = {
        "id_str": str(status_id),
        "created_at": iso(created_at),
        "retweet_count": retweet_count,
        "favorite_count": favorite_count,
        "entities": {
            "hashtags": [{"text": tag} for tag in hashtags],
            "urls": [{"expanded_url": url} for url in urls],
            "media": [{"media_url_https": url} for url in images],
            "user_mentions": [{"screen_name": name} for name in mentions],
        },
    }
    if retweet:
        status["retweeted_status"] = {"id_str": f"orig-{status_id}"}
    if reply_to:
        status["in_reply_to_screen_name"] = reply_to
    return status


def make_timeline_doc(
    screen_name,
    statuses,
    *,
    name=None,
    description="",
    protected=False,
    followers=100,
    following=100,
    statuses_count=None,
    retrieved_at=FIXED_NOW,
):
    return {
        "user": {
            "screen_name": screen_name,
            "name": name if name is not None else screen_name.title(),
            "description": description,
            "protected": protected,
            "followers_count": followers,
            "friends_count": following,
            "statuses_count": statuses_count if statuses_count is not None else len(statuses),
        },
        "retrieved_at": iso(retrieved_at),
        "statuses": statuses,
    }


def five_account_documents() -> dict[str, dict]:
    """Five accounts with disjoint entity sets and external-only mentions.

    Disjointness keeps the sum of per-account triple counts equal to the
    union size, which the ingest counting oracle relies on.
    """

    def hours_ago(n):
        return FIXED_NOW - timedelta(hours=n)

    return {
        "alice": make_timeline_doc(
            "alice",
            [
                make_status("a1", hours_ago(1), retweet_count=8, favorite_count=5,
                            hashtags=["semantics"], mentions=["ota"]),
                make_status("a2", hours_ago(2), retweet_count=6, favorite_count=1,
                            hashtags=["linkeddata"], urls=["https://example.org/a"]),
                make_status("a3", hours_ago(5), retweet_count=2, reply_to="ota",
                            images=["https://img.example.org/a.jpg"]),
                make_status("a4", hours_ago(9), retweet_count=1),
            ],
            description="Knowledge graphs and tea.",
            followers=1200,
            following=300,
        ),
        "bob": make_timeline_doc(
            "bob",
            [
                make_status("b1", hours_ago(1), retweet_count=4, favorite_count=4,
                            hashtags=["graphs"], mentions=["pam", "quinn"]),
                make_status("b2", hours_ago(3), retweet_count=9, favorite_count=2,
                            retweet=True, images=["https://img.example.org/b.jpg"]),
                make_status("b3", hours_ago(4), retweet_count=1, favorite_count=1,
                            reply_to="pam"),
            ],
            followers=500,
            following=500,
        ),
        "carol": make_timeline_doc(
            "carol",
            [
                make_status("c1", hours_ago(2), favorite_count=3,
                            hashtags=["metrics"], urls=["https://example.org/c1"]),
                make_status("c2", hours_ago(6), favorite_count=2,
                            urls=["https://example.org/c2"]),
            ],
            description="metrics nerd",
            protected=True,
            followers=90,
            following=200,
        ),
        "dave": make_timeline_doc(
            "dave",
            [
                make_status("d1", hours_ago(1), retweet_count=5, mentions=["zed"],
                            urls=["https://example.org/d"]),
                make_status("d2", hours_ago(2), retweet_count=5,
                            urls=["https://example.org/d"]),
                make_status("d3", hours_ago(3), retweet_count=2, reply_to="uma"),
            ],
            followers=3000,
            following=150,
        ),
        "erin": make_timeline_doc(
            "erin",
            [
                make_status("e1", hours_ago(4), retweet_count=12, favorite_count=20,
                            hashtags=["knowledge"], reply_to="vic"),
            ],
            description="One good tweet.",
            followers=15000,
            following=100,
        ),
    }


EXTERNAL_STUBS = {"ota", "pam", "quinn", "zed", "uma", "vic"}


def write_fixture_dir(directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    for name, document in five_account_documents().items():
        (directory / f"{name}.json").write_text(json.dumps(document, indent=1))
    return directory


@pytest.fixture
def fixture_dir(tmp_path) -> Path:
    return write_fixture_dir(tmp_path / "fixtures")


def expected_triple_count(snapshot: AccountSnapshot) -> int:
    """Closed-form triple count, computed from the snapshot alone."""
    base = 23 + (1 if snapshot.description else 0)
    mentions = {name for tweet in snapshot.timeline for name in tweet.mentions}
    replies = {tweet.in_reply_to for tweet in snapshot.timeline if tweet.in_reply_to}
    hashtags = {tag for tweet in snapshot.timeline for tag in tweet.hashtags}
    urls = {url for tweet in snapshot.timeline for url in tweet.urls}
    images = {url for tweet in snapshot.timeline for url in tweet.image_urls}
    return (
        base
        + len(mentions)
        + len(replies)
        + len(mentions | replies)
        + 3 * len(hashtags)
        + 3 * len(urls)
        + 3 * len(images)
    )


def worked_timeline_doc() -> dict:
    """100 tweets spanning exactly 50 hours; six of them have 10 retweets."""
    statuses = [
        make_status(
            f"w{i}",
            FIXED_NOW - timedelta(hours=50.0 * i / 99.0),
            retweet_count=10 if i < 6 else 0,
        )
        for i in range(100)
    ]
    return make_timeline_doc(
        "weyland", statuses, followers=1000, following=100, statuses_count=5000
    )


def _profile_snapshot(screen_name, tweets, followers, following, mentions=(), replies=()):
    """A fully profiled account whose timeline spans ten hours."""
    timeline = []
    for index in range(tweets):
        timeline.append(
            Tweet(
                id=f"{screen_name}-{index}",
                created_at=FIXED_NOW - timedelta(hours=10.0 * (index + 1) / tweets),
                retweet_count=5 if index < 5 else 0,
                favorite_count=3 if index < 3 else 0,
                mentions=frozenset(mentions) if index == 0 else frozenset(),
                in_reply_to=list(replies)[index - 1] if 0 < index <= len(replies) else None,
            )
        )
    return AccountSnapshot(
        screen_name=screen_name,
        retrieved_at=FIXED_NOW,
        display_name=screen_name.title(),
        description=f"{screen_name} writes here",
        followers=followers,
        following=following,
        total_tweets=tweets,
        timeline=tuple(timeline),
    )


def mention_reply_store(include_fourth: bool) -> tuple[TripleStore, dict]:
    """Store where anna mentions ben and cleo but replies only to ben.

    With ``include_fourth`` anna also mentions and replies to dmitri,
    whose influence metric is higher than ben's. Returns the store and
    the computed profiles keyed by screen name.
    """
    mentions = ["ben", "cleo"] + (["dmitri"] if include_fourth else [])
    replies = ["ben"] + (["dmitri"] if include_fourth else [])
    snapshots = [
        _profile_snapshot("anna", 10, 800, 400, mentions=mentions, replies=replies),
        _profile_snapshot("ben", 10, 1000, 100),
        _profile_snapshot("cleo", 10, 200, 400),
    ]
    if include_fourth:
        snapshots.append(_profile_snapshot("dmitri", 10, 90000, 100))
    store = TripleStore()
    profiles = {}
    for snapshot in snapshots:
        general, quality = compute_profile(snapshot, FIXED_NOW)
        profiles[snapshot.screen_name] = (general, quality)
        store.load(triplify(snapshot, general, quality))
    return store, profiles
