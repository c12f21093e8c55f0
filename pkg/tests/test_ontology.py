"""Vocabulary terms, IRI minting, schema graph, and triplification."""

from __future__ import annotations

import random
from datetime import timedelta

import pytest

from influencegraph.metrics import AccountSnapshot, Tweet, compute_profile
from influencegraph.ontology import (
    CLASSES,
    DATATYPE_PROPERTIES,
    DEFAULT_BASE,
    FOAF_AGENT,
    FOAF_DOCUMENT,
    FOAF_IMAGE,
    FOAF_ONLINE_ACCOUNT,
    IT_FOLLOWERS,
    IT_HAS_MENTIONED,
    IT_HAS_REPLIED_TO,
    IT_INFLUENCE_METRIC,
    IT_PROFILE_LOCKED,
    IT_RETRIEVED_ON,
    IT_TWEETS,
    IT_TWITTER_ACCOUNT,
    IT_USER,
    OBJECT_PROPERTIES,
    RDF_TYPE,
    RDFS_LABEL,
    RDFS_SUBCLASS_OF,
    ResourceKind,
    mint_resource_iri,
    ontology_schema_graph,
    triplify,
)
from influencegraph.rdf import (
    Iri,
    Literal,
    Triple,
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
)

from conftest import FIXED_NOW, expected_triple_count


class TestVocabulary:
    def test_term_counts(self):
        assert len(CLASSES) == 10
        assert len(OBJECT_PROPERTIES) == 9
        assert len(DATATYPE_PROPERTIES) == 18

    def test_namespace_construction(self):
        assert IT_USER.value == "http://www.influencetracker.com/ontology#User"
        assert FOAF_AGENT.value == "http://xmlns.com/foaf/0.1/Agent"
        assert IT_INFLUENCE_METRIC.value.endswith("#influenceMetric")

    def test_terms_are_distinct(self):
        terms = CLASSES + OBJECT_PROPERTIES + DATATYPE_PROPERTIES
        assert len(set(terms)) == len(terms)


class TestMinting:
    def test_user_slash_format(self):
        iri = mint_resource_iri(DEFAULT_BASE, ResourceKind.USER, "youtube")
        assert iri.value == "http://www.influencetracker.com/resource/User/youtube"

    def test_percent_encoding(self):
        iri = mint_resource_iri(DEFAULT_BASE, ResourceKind.HASHTAG, "seman tics")
        assert iri.value.endswith("/resource/Hashtag/seman%20tics")

    def test_url_hash_deterministic(self):
        url = "https://example.org/some?page=1&lang=en"
        first = mint_resource_iri(DEFAULT_BASE, ResourceKind.URL, url)
        second = mint_resource_iri(DEFAULT_BASE, ResourceKind.URL, url)
        assert first == second
        token = first.value.rsplit("/", 1)[1]
        assert len(token) == 16 and int(token, 16) >= 0

    def test_distinct_urls_distinct_iris(self):
        one = mint_resource_iri(DEFAULT_BASE, ResourceKind.URL, "https://a.example/")
        two = mint_resource_iri(DEFAULT_BASE, ResourceKind.URL, "https://b.example/")
        assert one != two

    def test_empty_local_rejected(self):
        with pytest.raises(ValueError):
            mint_resource_iri(DEFAULT_BASE, ResourceKind.USER, "")

    def test_base_without_trailing_slash(self):
        iri = mint_resource_iri(Iri("http://example.org"), ResourceKind.USER, "x")
        assert iri.value == "http://example.org/resource/User/x"


class TestSchemaGraph:
    def test_subclass_axioms(self):
        graph = ontology_schema_graph()
        assert Triple(IT_USER, RDFS_SUBCLASS_OF, FOAF_AGENT) in graph
        assert Triple(IT_TWITTER_ACCOUNT, RDFS_SUBCLASS_OF, FOAF_ONLINE_ACCOUNT) in graph
        assert Triple(FOAF_IMAGE, RDFS_SUBCLASS_OF, FOAF_DOCUMENT) in graph

    def test_triple_count(self):
        # 10 classes + 9 object props + 18 datatype props + 3 subclass axioms
        assert len(ontology_schema_graph()) == 40

    def test_every_term_declared(self):
        graph = ontology_schema_graph()
        typed = {triple.subject for triple in graph if triple.predicate == RDF_TYPE}
        assert typed == set(CLASSES + OBJECT_PROPERTIES + DATATYPE_PROPERTIES)


def snapshot_with(
    *, description="About me", mentions=(), replies=(), hashtags=(), urls=(), images=()
):
    tweets = []
    for index in range(3):
        tweets.append(
            Tweet(
                id=f"t{index}",
                created_at=FIXED_NOW - timedelta(hours=index + 1),
                retweet_count=3 - index,
                mentions=frozenset(mentions) if index == 0 else frozenset(),
                in_reply_to=(list(replies) + [None, None])[index] if index < len(replies) else None,
                hashtags=frozenset(hashtags) if index == 1 else frozenset(),
                urls=frozenset(urls) if index == 1 else frozenset(),
                image_urls=frozenset(images) if index == 2 else frozenset(),
            )
        )
    return AccountSnapshot(
        screen_name="tester",
        retrieved_at=FIXED_NOW,
        display_name="Tester",
        description=description,
        followers=1000,
        following=50,
        total_tweets=3,
        timeline=tuple(tweets),
    )


def profile_graph(snapshot):
    general, quality = compute_profile(snapshot, FIXED_NOW)
    return triplify(snapshot, general, quality)


class TestTriplify:
    def test_plain_account_is_24_triples(self):
        assert len(profile_graph(snapshot_with())) == 24

    def test_empty_description_drops_one(self):
        assert len(profile_graph(snapshot_with(description=""))) == 23

    def test_mention_and_reply_contributions(self):
        base = len(profile_graph(snapshot_with()))
        graph = profile_graph(snapshot_with(mentions=("u1", "u2"), replies=("u1",)))
        # two hasMentioned + one hasRepliedTo + two stubs (replied user's
        # stub deduplicates with its mention stub)
        assert len(graph) == base + 5

    def test_repeated_hashtag_adds_three(self):
        snapshot = snapshot_with(hashtags=("tag",))
        tweets = [
            Tweet(
                id=f"h{index}",
                created_at=FIXED_NOW - timedelta(hours=index + 1),
                hashtags=frozenset({"tag"}),
            )
            for index in range(5)
        ]
        snapshot = AccountSnapshot(
            screen_name="tagger",
            retrieved_at=FIXED_NOW,
            description="",
            followers=10,
            following=10,
            total_tweets=5,
            timeline=tuple(tweets),
        )
        graph = profile_graph(snapshot)
        hashtag_triples = {
            triple
            for triple in graph
            if "Hashtag" in triple.subject.value
            or (isinstance(triple.object, Iri) and "Hashtag" in triple.object.value)
        }
        assert len(hashtag_triples) == 3

    def test_predicates_stay_in_vocabulary(self):
        graph = profile_graph(
            snapshot_with(
                mentions=("m1",), replies=("m1",), hashtags=("h",),
                urls=("https://u.example/",), images=("https://i.example/p.jpg",),
            )
        )
        allowed = set(OBJECT_PROPERTIES + DATATYPE_PROPERTIES) | {RDF_TYPE, RDFS_LABEL}
        assert {triple.predicate for triple in graph} <= allowed

    def test_literal_datatypes_by_predicate(self):
        graph = profile_graph(snapshot_with())
        datatypes = {
            IT_TWEETS: XSD_INTEGER,
            IT_FOLLOWERS: XSD_INTEGER,
            IT_INFLUENCE_METRIC: XSD_DECIMAL,
            IT_PROFILE_LOCKED: XSD_BOOLEAN,
            IT_RETRIEVED_ON: XSD_DATETIME,
        }
        seen = set()
        for triple in graph:
            expected = datatypes.get(triple.predicate)
            if expected is not None:
                assert isinstance(triple.object, Literal)
                assert triple.object.datatype == expected
                seen.add(triple.predicate)
        assert seen == set(datatypes)

    def test_counting_oracle_random_snapshots(self):
        rng = random.Random(2024)
        pool_users = [f"user{i}" for i in range(6)]
        pool_tags = [f"tag{i}" for i in range(5)]
        pool_urls = [f"https://example.org/{i}" for i in range(5)]
        pool_images = [f"https://img.example.org/{i}.png" for i in range(4)]
        for _ in range(50):
            tweets = []
            for index in range(rng.randint(0, 12)):
                tweets.append(
                    Tweet(
                        id=f"r{index}",
                        created_at=FIXED_NOW - timedelta(hours=index + 1),
                        retweet_count=rng.randint(0, 30),
                        favorite_count=rng.randint(0, 30),
                        is_retweet=rng.random() < 0.2,
                        in_reply_to=rng.choice([None, *pool_users]),
                        mentions=frozenset(rng.sample(pool_users, rng.randint(0, 3))),
                        hashtags=frozenset(rng.sample(pool_tags, rng.randint(0, 2))),
                        urls=frozenset(rng.sample(pool_urls, rng.randint(0, 2))),
                        image_urls=frozenset(rng.sample(pool_images, rng.randint(0, 1))),
                    )
                )
            snapshot = AccountSnapshot(
                screen_name="rand",
                retrieved_at=FIXED_NOW,
                description=rng.choice(["", "words"]),
                followers=rng.randint(0, 10**5),
                following=rng.randint(0, 10**4),
                total_tweets=rng.randint(len(tweets), 10**4),
                timeline=tuple(tweets),
            )
            graph = profile_graph(snapshot)
            assert len(graph) == expected_triple_count(snapshot)

    def test_idempotent_under_union(self):
        snapshot = snapshot_with(mentions=("m1", "m2"), hashtags=("h1",))
        first = profile_graph(snapshot)
        second = profile_graph(snapshot)
        assert first == second
        assert len(first | second) == len(first)

    def test_mention_edges_present(self):
        graph = profile_graph(snapshot_with(mentions=("m1",), replies=("m2",)))
        user = mint_resource_iri(DEFAULT_BASE, ResourceKind.USER, "tester")
        m1 = mint_resource_iri(DEFAULT_BASE, ResourceKind.USER, "m1")
        m2 = mint_resource_iri(DEFAULT_BASE, ResourceKind.USER, "m2")
        assert Triple(user, IT_HAS_MENTIONED, m1) in graph
        assert Triple(user, IT_HAS_REPLIED_TO, m2) in graph
        assert Triple(m1, RDF_TYPE, IT_USER) in graph
        assert Triple(m2, RDF_TYPE, IT_USER) in graph
