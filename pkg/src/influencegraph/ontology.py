"""The InfluenceTracker vocabulary and account triplification.

Accounts are modeled with FOAF: an ``it:User`` (a ``foaf:Agent``) holds a
``it:TwitterAccount`` (a ``foaf:OnlineAccount``) and links to two metric
bundles, ``it:GeneralInfo`` and ``it:QualityMetrics``. Tweet entities
(mentions, replies, hashtags, URLs, images) hang off the user. Resource
IRIs use the slash format ``{base}resource/{Kind}/{name}`` so every
resource is dereferenceable.
"""

from __future__ import annotations

import enum
import hashlib
import urllib.parse

from .metrics import AccountSnapshot, GeneralInfo, QualityMetrics
from .rdf import (
    Graph,
    Iri,
    Triple,
    boolean_literal,
    datetime_literal,
    decimal_literal,
    integer_literal,
    string_literal,
)

IT = "http://www.influencetracker.com/ontology#"
FOAF = "http://xmlns.com/foaf/0.1/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"

DEFAULT_BASE = Iri("http://www.influencetracker.com/")
TWITTER_HOMEPAGE = Iri("https://twitter.com/")

RDF_TYPE = Iri(RDF + "type")
RDFS_LABEL = Iri(RDFS + "label")
RDFS_SUBCLASS_OF = Iri(RDFS + "subClassOf")
OWL_CLASS = Iri(OWL + "Class")
OWL_OBJECT_PROPERTY = Iri(OWL + "ObjectProperty")
OWL_DATATYPE_PROPERTY = Iri(OWL + "DatatypeProperty")

# classes
FOAF_AGENT = Iri(FOAF + "Agent")
IT_USER = Iri(IT + "User")
FOAF_ONLINE_ACCOUNT = Iri(FOAF + "OnlineAccount")
IT_TWITTER_ACCOUNT = Iri(IT + "TwitterAccount")
IT_GENERAL_INFO = Iri(IT + "GeneralInfo")
IT_QUALITY_METRICS = Iri(IT + "QualityMetrics")
FOAF_DOCUMENT = Iri(FOAF + "Document")
FOAF_IMAGE = Iri(FOAF + "Image")
IT_HASHTAG = Iri(IT + "Hashtag")
IT_URL_CLASS = Iri(IT + "URL")

# object properties
FOAF_ACCOUNT = Iri(FOAF + "account")
FOAF_ACCOUNT_SERVICE_HOMEPAGE = Iri(FOAF + "accountServiceHomepage")
IT_HAS_GENERAL_INFO = Iri(IT + "hasGeneralInfo")
IT_HAS_MENTIONED = Iri(IT + "hasMentioned")
IT_HAS_QUALITY_METRICS = Iri(IT + "hasQualityMetrics")
IT_HAS_REPLIED_TO = Iri(IT + "hasRepliedTo")
IT_INCLUDED_HASHTAG = Iri(IT + "includedHashtag")
IT_INCLUDED_IMAGE = Iri(IT + "includedImage")
IT_INCLUDED_URL = Iri(IT + "includedUrl")

# datatype properties
FOAF_ACCOUNT_NAME = Iri(FOAF + "accountName")
IT_DESCRIPTION = Iri(IT + "description")
IT_DISPLAY_NAME = Iri(IT + "displayName")
IT_FOLLOWERS = Iri(IT + "followers")
IT_FOLLOWING = Iri(IT + "following")
IT_H_INDEX_FAV = Iri(IT + "hIndexFav")
IT_H_INDEX_FAV_DAILY = Iri(IT + "hIndexFavDaily")
IT_H_INDEX_RT = Iri(IT + "hIndexRt")
IT_H_INDEX_RT_DAILY = Iri(IT + "hIndexRtDaily")
IT_IMAGE_URL = Iri(IT + "imageUrl")
IT_INFLUENCE_METRIC = Iri(IT + "influenceMetric")
IT_PROFILE_LOCKED = Iri(IT + "profileLocked")
IT_REPLY_RATIO = Iri(IT + "replyRatio")
IT_RETRIEVED_ON = Iri(IT + "retrievedOn")
IT_RT_PERCENT = Iri(IT + "rtPercent")
IT_TWEETS = Iri(IT + "tweets")
IT_TWEETS_PER_DAY = Iri(IT + "tweetsPerDay")
IT_URL = Iri(IT + "url")

CLASSES = (
    FOAF_AGENT,
    IT_USER,
    FOAF_ONLINE_ACCOUNT,
    IT_TWITTER_ACCOUNT,
    IT_GENERAL_INFO,
    IT_QUALITY_METRICS,
    FOAF_DOCUMENT,
    FOAF_IMAGE,
    IT_HASHTAG,
    IT_URL_CLASS,
)

OBJECT_PROPERTIES = (
    FOAF_ACCOUNT,
    FOAF_ACCOUNT_SERVICE_HOMEPAGE,
    IT_HAS_GENERAL_INFO,
    IT_HAS_MENTIONED,
    IT_HAS_QUALITY_METRICS,
    IT_HAS_REPLIED_TO,
    IT_INCLUDED_HASHTAG,
    IT_INCLUDED_IMAGE,
    IT_INCLUDED_URL,
)

DATATYPE_PROPERTIES = (
    FOAF_ACCOUNT_NAME,
    IT_DESCRIPTION,
    IT_DISPLAY_NAME,
    IT_FOLLOWERS,
    IT_FOLLOWING,
    IT_H_INDEX_FAV,
    IT_H_INDEX_FAV_DAILY,
    IT_H_INDEX_RT,
    IT_H_INDEX_RT_DAILY,
    IT_IMAGE_URL,
    IT_INFLUENCE_METRIC,
    IT_PROFILE_LOCKED,
    IT_REPLY_RATIO,
    IT_RETRIEVED_ON,
    IT_RT_PERCENT,
    IT_TWEETS,
    IT_TWEETS_PER_DAY,
    IT_URL,
)

PREFIXES: dict[str, Iri] = {
    "it": Iri(IT),
    "foaf": Iri(FOAF),
    "rdfs": Iri(RDFS),
    "xsd": Iri("http://www.w3.org/2001/XMLSchema#"),
}
SCHEMA_PREFIXES: dict[str, Iri] = {
    **PREFIXES,
    "rdf": Iri(RDF),
    "owl": Iri(OWL),
}


class ResourceKind(enum.Enum):
    """Resource kinds; the value is the URI path segment."""

    USER = "User"
    TWITTER_ACCOUNT = "TwitterAccount"
    GENERAL_INFO = "GeneralInfo"
    QUALITY_METRICS = "QualityMetrics"
    HASHTAG = "Hashtag"
    URL = "Url"
    IMAGE = "Image"


def url_token(url_text: str) -> str:
    """Stable 64-bit hex token for a URL; raw URLs are not IRI-safe."""
    return hashlib.blake2b(url_text.encode("utf-8"), digest_size=8).hexdigest()


def mint_resource_iri(base: Iri, kind: ResourceKind, local: str) -> Iri:
    """Slash-format resource IRI: {base}resource/{kind}/{encoded local}."""
    if not local:
        raise ValueError("resource local name must be nonempty")
    if kind in (ResourceKind.URL, ResourceKind.IMAGE):
        segment = url_token(local)
    else:
        segment = urllib.parse.quote(local, safe="")
    root = base.value if base.value.endswith("/") else base.value + "/"
    return Iri(f"{root}resource/{kind.value}/{segment}")


def ontology_schema_graph() -> Graph:
    """Class, property, and subclass declarations of the vocabulary."""
    graph: Graph = set()
    for cls in CLASSES:
        graph.add(Triple(cls, RDF_TYPE, OWL_CLASS))
    for prop in OBJECT_PROPERTIES:
        graph.add(Triple(prop, RDF_TYPE, OWL_OBJECT_PROPERTY))
    for prop in DATATYPE_PROPERTIES:
        graph.add(Triple(prop, RDF_TYPE, OWL_DATATYPE_PROPERTY))
    graph.add(Triple(IT_USER, RDFS_SUBCLASS_OF, FOAF_AGENT))
    graph.add(Triple(IT_TWITTER_ACCOUNT, RDFS_SUBCLASS_OF, FOAF_ONLINE_ACCOUNT))
    graph.add(Triple(FOAF_IMAGE, RDFS_SUBCLASS_OF, FOAF_DOCUMENT))
    return graph


def triplify(
    snapshot: AccountSnapshot,
    general: GeneralInfo,
    quality: QualityMetrics,
    base: Iri = DEFAULT_BASE,
) -> Graph:
    """RDF description of one account and the entities in its timeline.

    Mentioned and replied-to users get a type stub only; their details
    arrive when those accounts are processed themselves. Counts are
    emitted as xsd:integer, ratios and metrics as three-digit
    xsd:decimal.
    """
    user = mint_resource_iri(base, ResourceKind.USER, snapshot.screen_name)
    account = mint_resource_iri(base, ResourceKind.TWITTER_ACCOUNT, snapshot.screen_name)
    info = mint_resource_iri(base, ResourceKind.GENERAL_INFO, snapshot.screen_name)
    bundle = mint_resource_iri(base, ResourceKind.QUALITY_METRICS, snapshot.screen_name)

    graph: Graph = {
        Triple(user, RDF_TYPE, IT_USER),
        Triple(user, FOAF_ACCOUNT, account),
        Triple(account, RDF_TYPE, IT_TWITTER_ACCOUNT),
        Triple(account, FOAF_ACCOUNT_NAME, string_literal(snapshot.screen_name)),
        Triple(account, FOAF_ACCOUNT_SERVICE_HOMEPAGE, TWITTER_HOMEPAGE),
        Triple(account, IT_DISPLAY_NAME, string_literal(snapshot.display_name)),
        Triple(account, IT_PROFILE_LOCKED, boolean_literal(snapshot.protected)),
        Triple(account, IT_RETRIEVED_ON, datetime_literal(snapshot.retrieved_at)),
        Triple(user, IT_HAS_GENERAL_INFO, info),
        Triple(info, RDF_TYPE, IT_GENERAL_INFO),
        Triple(info, IT_TWEETS, integer_literal(general.tweets)),
        Triple(info, IT_FOLLOWERS, integer_literal(general.followers)),
        Triple(info, IT_FOLLOWING, integer_literal(general.following)),
        Triple(info, IT_TWEETS_PER_DAY, decimal_literal(general.tweets_per_day)),
        Triple(info, IT_RT_PERCENT, decimal_literal(general.rt_percent)),
        Triple(user, IT_HAS_QUALITY_METRICS, bundle),
        Triple(bundle, RDF_TYPE, IT_QUALITY_METRICS),
        Triple(bundle, IT_INFLUENCE_METRIC, decimal_literal(quality.influence_metric)),
        Triple(bundle, IT_H_INDEX_RT, decimal_literal(quality.h_index_rt)),
        Triple(bundle, IT_H_INDEX_FAV, decimal_literal(quality.h_index_fav)),
        Triple(bundle, IT_H_INDEX_RT_DAILY, decimal_literal(quality.h_index_rt_daily)),
        Triple(bundle, IT_H_INDEX_FAV_DAILY, decimal_literal(quality.h_index_fav_daily)),
        Triple(bundle, IT_REPLY_RATIO, decimal_literal(quality.reply_ratio)),
    }
    if snapshot.description:
        graph.add(Triple(account, IT_DESCRIPTION, string_literal(snapshot.description)))

    mentioned = {name for tweet in snapshot.timeline for name in tweet.mentions}
    replied = {tweet.in_reply_to for tweet in snapshot.timeline if tweet.in_reply_to}
    for name in mentioned:
        other = mint_resource_iri(base, ResourceKind.USER, name)
        graph.add(Triple(user, IT_HAS_MENTIONED, other))
        graph.add(Triple(other, RDF_TYPE, IT_USER))
    for name in replied:
        other = mint_resource_iri(base, ResourceKind.USER, name)
        graph.add(Triple(user, IT_HAS_REPLIED_TO, other))
        graph.add(Triple(other, RDF_TYPE, IT_USER))

    for tag in {tag for tweet in snapshot.timeline for tag in tweet.hashtags}:
        node = mint_resource_iri(base, ResourceKind.HASHTAG, tag)
        graph.add(Triple(user, IT_INCLUDED_HASHTAG, node))
        graph.add(Triple(node, RDF_TYPE, IT_HASHTAG))
        graph.add(Triple(node, RDFS_LABEL, string_literal(tag)))
    for url in {url for tweet in snapshot.timeline for url in tweet.urls}:
        node = mint_resource_iri(base, ResourceKind.URL, url)
        graph.add(Triple(user, IT_INCLUDED_URL, node))
        graph.add(Triple(node, RDF_TYPE, IT_URL_CLASS))
        graph.add(Triple(node, IT_URL, string_literal(url)))
    for url in {url for tweet in snapshot.timeline for url in tweet.image_urls}:
        node = mint_resource_iri(base, ResourceKind.IMAGE, url)
        graph.add(Triple(user, IT_INCLUDED_IMAGE, node))
        graph.add(Triple(node, RDF_TYPE, FOAF_IMAGE))
        graph.add(Triple(node, IT_IMAGE_URL, string_literal(url)))
    return graph
