"""Twitter influence metrics published as a queryable RDF graph.

The package computes h-index-based engagement metrics and a combined
influence score from account timelines, semantifies accounts and tweet
entities into RDF under a FOAF-based vocabulary, and serves the graph
through an embedded triple store, a SPARQL subset, and linked-data HTTP
endpoints.
"""

from .metrics import (
    AccountSnapshot,
    AdjustedTweets,
    GeneralInfo,
    QualityMetrics,
    TimelineWindow,
    Tweet,
    adjusted_tweets,
    audience_factor,
    compute_profile,
    daily_h_estimate,
    h_index,
    influence_metric,
    order_of_magnitude,
    window_stats,
)
from .ontology import (
    DEFAULT_BASE,
    ResourceKind,
    mint_resource_iri,
    ontology_schema_graph,
    triplify,
)
from .rdf import (
    Graph,
    Iri,
    Literal,
    Triple,
    make_iri,
    parse_ntriples,
    serialize_ntriples,
    serialize_turtle,
)
from .ingest import (
    FixtureDirectorySource,
    MetricsLog,
    MetricsRecord,
    UpdateReport,
    parse_timeline,
    run_update_cycle,
    search_account,
)
from .rankeval import RankComparison, compare_rankings, plot_comparison
from .sparql import SelectQuery, evaluate, parse_query, to_sparql_json
from .store import TriplePattern, TripleStore

__version__ = "0.1.0"

__all__ = [
    "AccountSnapshot",
    "AdjustedTweets",
    "DEFAULT_BASE",
    "FixtureDirectorySource",
    "GeneralInfo",
    "Graph",
    "Iri",
    "Literal",
    "MetricsLog",
    "MetricsRecord",
    "QualityMetrics",
    "RankComparison",
    "ResourceKind",
    "SelectQuery",
    "TimelineWindow",
    "Triple",
    "TriplePattern",
    "TripleStore",
    "Tweet",
    "UpdateReport",
    "adjusted_tweets",
    "audience_factor",
    "compare_rankings",
    "compute_profile",
    "daily_h_estimate",
    "evaluate",
    "h_index",
    "influence_metric",
    "make_iri",
    "mint_resource_iri",
    "ontology_schema_graph",
    "order_of_magnitude",
    "parse_ntriples",
    "parse_query",
    "parse_timeline",
    "plot_comparison",
    "run_update_cycle",
    "search_account",
    "serialize_ntriples",
    "serialize_turtle",
    "to_sparql_json",
    "triplify",
    "window_stats",
]
