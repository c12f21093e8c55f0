"""Command-line driver for the pipeline.

Subcommands: ingest (one update cycle), metrics (one fixture), query
(SPARQL over a saved graph), export-ontology, serve (HTTP service), and
rank-compare (two-ranking comparison with optional scatter figure).
Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from .ingest import (
    FixtureDirectorySource,
    MetricsLog,
    parse_timeline,
    run_update_cycle,
)
from .metrics import compute_profile, round_reported
from .ontology import DEFAULT_BASE, SCHEMA_PREFIXES, ontology_schema_graph
from .rankeval import compare_rankings, join_rankings, load_ranking, plot_comparison
from .rdf import Iri, parse_ntriples, serialize_ntriples, serialize_turtle
from .service import DEFAULT_PORT, GraphService, run_server
from .sparql import evaluate, parse_query, to_sparql_json
from .store import TripleStore


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: A003
        raise UsageError(f"{message}\n{self.format_usage()}")


def _parse_now(text: str) -> datetime:
    value = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc)


def _load_store(path: Path) -> TripleStore:
    store = TripleStore()
    if path.exists():
        store.load(parse_ntriples(path.read_text(encoding="utf-8")))
    return store


def _rounded(mapping: dict) -> dict:
    return {
        key: round_reported(value) if isinstance(value, float) else value
        for key, value in mapping.items()
    }


def _build_parser() -> _Parser:
    parser = _Parser(prog="influencegraph")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="run one graph update cycle")
    ingest.add_argument("--fixtures", required=True, type=Path, help="fixture directory")
    ingest.add_argument("--graph", required=True, type=Path, help="N-Triples graph file")
    ingest.add_argument("--log", required=True, type=Path, help="metrics CSV log")
    ingest.add_argument("--accounts", help="comma-separated names (default: all fixtures)")
    ingest.add_argument("--base", default=DEFAULT_BASE.value, help="resource IRI base")
    ingest.add_argument("--now", type=_parse_now, help="evaluation instant (ISO-8601)")

    metrics = commands.add_parser("metrics", help="compute metrics for one fixture")
    metrics.add_argument("--fixture", required=True, type=Path, help="timeline JSON file")
    metrics.add_argument("--now", type=_parse_now, help="evaluation instant (ISO-8601)")

    query = commands.add_parser("query", help="run a SPARQL query over a graph file")
    query.add_argument("--graph", required=True, type=Path, help="N-Triples graph file")
    query.add_argument("--query", required=True, type=Path, help="query text file")

    commands.add_parser("export-ontology", help="print the ontology schema as Turtle")

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--graph", required=True, type=Path, help="N-Triples graph file")
    serve.add_argument("--fixtures", required=True, type=Path, help="fixture directory")
    serve.add_argument("--port", type=int, default=DEFAULT_PORT)
    serve.add_argument("--log", type=Path, default=Path("metrics.csv"), help="metrics CSV log")
    serve.add_argument("--base", default=DEFAULT_BASE.value, help="resource IRI base")
    serve.add_argument(
        "--interval-hours",
        type=float,
        default=None,
        help="enable periodic update cycles every N hours (e.g. 96)",
    )

    rank = commands.add_parser("rank-compare", help="compare two account rankings")
    rank.add_argument("--a", required=True, type=Path, help="ranking CSV for system A")
    rank.add_argument("--b", required=True, type=Path, help="ranking CSV for system B")
    rank.add_argument("--plot", type=Path, help="write a scatter figure to this file")

    return parser


def _cmd_ingest(args: argparse.Namespace) -> int:
    store = _load_store(args.graph)
    source = FixtureDirectorySource(args.fixtures)
    accounts = (
        [name.strip() for name in args.accounts.split(",") if name.strip()]
        if args.accounts
        else source.account_names()
    )
    report = run_update_cycle(
        accounts,
        source,
        store,
        MetricsLog(args.log),
        args.now or datetime.now(timezone.utc),
        base=Iri(args.base),
    )
    args.graph.write_text(serialize_ntriples(store.export()), encoding="utf-8")
    print(
        json.dumps(
            {
                "accounts_processed": report.accounts_processed,
                "accounts_failed": report.accounts_failed,
                "triples_added": report.triples_added,
                "triples_removed": report.triples_removed,
                "started_at": report.started_at.isoformat(),
                "finished_at": report.finished_at.isoformat(),
                "failures": [list(item) for item in report.failures],
            },
            indent=2,
        )
    )
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    snapshot = parse_timeline(args.fixture.read_bytes())
    general, quality = compute_profile(snapshot, args.now or datetime.now(timezone.utc))
    print(
        json.dumps(
            {
                "screen_name": snapshot.screen_name,
                "general": _rounded(dataclasses.asdict(general)),
                "quality": _rounded(dataclasses.asdict(quality)),
            },
            indent=2,
        )
    )
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    store = _load_store(args.graph)
    query = parse_query(args.query.read_text(encoding="utf-8"))
    print(to_sparql_json(evaluate(query, store)))
    return 0


def _cmd_export_ontology(_args: argparse.Namespace) -> int:
    print(serialize_turtle(ontology_schema_graph(), SCHEMA_PREFIXES), end="")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    service = GraphService(
        _load_store(args.graph),
        source=FixtureDirectorySource(args.fixtures),
        metrics_log=MetricsLog(args.log),
        base=Iri(args.base),
    )
    print(f"serving on port {args.port}", file=sys.stderr)
    try:
        run_server(service, port=args.port, interval_hours=args.interval_hours)
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_rank_compare(args: argparse.Namespace) -> int:
    ranking_a = load_ranking(args.a)
    ranking_b = load_ranking(args.b)
    pairs, dropped_a, dropped_b = join_rankings(ranking_a, ranking_b)
    if dropped_a or dropped_b:
        print(
            f"warning: dropped {dropped_a} accounts only in A "
            f"and {dropped_b} only in B",
            file=sys.stderr,
        )
    comparison = compare_rankings(pairs)
    if args.plot:
        plot_comparison(comparison, args.plot)
    print(
        json.dumps(
            {
                "n": comparison.n,
                "slope": round_reported(comparison.slope),
                "intercept": round_reported(comparison.intercept),
                "mean_abs_diff": round_reported(comparison.mean_abs_diff),
                "dropped_a": dropped_a,
                "dropped_b": dropped_b,
            },
            indent=2,
        )
    )
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "metrics": _cmd_metrics,
    "query": _cmd_query,
    "export-ontology": _cmd_export_ontology,
    "serve": _cmd_serve,
    "rank-compare": _cmd_rank_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - uniform CLI error reporting
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
