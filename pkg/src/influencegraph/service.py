"""HTTP surface: SPARQL endpoint, dereferenceable resources, account search.

Routes:
  GET/POST /endpoint and /sparql  -> SPARQL-results JSON for ?query=...
  GET /resource/{Kind}/{name}     -> Turtle or HTML description (Accept)
  GET /searchAccount?name=...     -> metrics JSON; never writes the graph

Store access follows a single-writer / multi-reader contract: queries
and resource lookups take a read lease, the background update loop
takes the write lease per account batch.
"""

from __future__ import annotations

import html
import json
import logging
import threading
from contextlib import contextmanager
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Iterator
from urllib.parse import parse_qs, urlsplit

from .ingest import (
    AccountNotFoundError,
    FetchError,
    FixtureDirectorySource,
    MetricsLog,
    MetricsRecord,
    TimelineParseError,
    run_update_cycle,
    search_account,
)
from .metrics import round_reported
from .ontology import DEFAULT_BASE, PREFIXES
from .rdf import Graph, Iri, serialize_turtle, term_text
from .sparql import QuerySyntaxError, evaluate, parse_query, to_sparql_json
from .store import TriplePattern, TripleStore

log = logging.getLogger(__name__)

DEFAULT_PORT = 8890

SPARQL_JSON = "application/sparql-results+json"
TURTLE = "text/turtle"
HTML = "text/html; charset=utf-8"
JSON_TYPE = "application/json"
TEXT = "text/plain; charset=utf-8"


class ReadWriteLock:
    """Many concurrent readers or one exclusive writer."""

    def __init__(self) -> None:
        self._condition = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def read(self) -> Iterator[None]:
        with self._condition:
            while self._writing:
                self._condition.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._condition:
                self._readers -= 1
                if self._readers == 0:
                    self._condition.notify_all()

    @contextmanager
    def write(self) -> Iterator[None]:
        with self._condition:
            while self._writing or self._readers:
                self._condition.wait()
            self._writing = True
        try:
            yield
        finally:
            with self._condition:
                self._writing = False
                self._condition.notify_all()


def describe_resource(store: TripleStore, resource: Iri) -> Graph:
    """Outbound triples to depth two from the resource."""
    first_hop = store.match(TriplePattern(subject=resource))
    description: Graph = set(first_hop)
    for triple in first_hop:
        if isinstance(triple.object, Iri):
            description.update(store.match(TriplePattern(subject=triple.object)))
    return description


def _render_html(resource: Iri, description: Graph) -> str:
    by_subject: dict[str, list] = {}
    for triple in sorted(description, key=lambda t: (t.subject.value, t.predicate.value)):
        by_subject.setdefault(triple.subject.value, []).append(triple)
    parts = [
        "<!DOCTYPE html>",
        "<html><head><meta charset='utf-8'>",
        f"<title>{html.escape(resource.value)}</title></head><body>",
        f"<h1>{html.escape(resource.value)}</h1>",
    ]
    for subject, triples in by_subject.items():
        parts.append(f"<h2>{html.escape(subject)}</h2>")
        parts.append("<table border='1'><tr><th>predicate</th><th>object</th></tr>")
        for triple in triples:
            obj = triple.object
            obj_text = obj.value if isinstance(obj, Iri) else obj.lexical
            parts.append(
                "<tr><td>{}</td><td>{}</td></tr>".format(
                    html.escape(triple.predicate.value), html.escape(obj_text)
                )
            )
        parts.append("</table>")
    parts.append("</body></html>")
    return "\n".join(parts)


def _record_json(record: MetricsRecord) -> str:
    return json.dumps(
        {
            "screen_name": record.screen_name,
            "retrieved_at": record.retrieved_at.astimezone(timezone.utc)
            .isoformat()
            .replace("+00:00", "Z"),
            "tweets": record.tweets,
            "followers": record.followers,
            "following": record.following,
            "tweets_per_day": round_reported(record.tweets_per_day),
            "rt_percent": round_reported(record.rt_percent),
            "h_index_rt": round_reported(record.h_index_rt),
            "h_index_fav": round_reported(record.h_index_fav),
            "h_index_rt_daily": round_reported(record.h_index_rt_daily),
            "h_index_fav_daily": round_reported(record.h_index_fav_daily),
            "reply_ratio": round_reported(record.reply_ratio),
            "influence_metric": round_reported(record.influence_metric),
        },
        indent=2,
    )


Response = tuple[int, str, bytes]


class GraphService:
    """Request handling against a shared store, source, and metrics log."""

    def __init__(
        self,
        store: TripleStore,
        source: FixtureDirectorySource | None = None,
        metrics_log: MetricsLog | None = None,
        base: Iri = DEFAULT_BASE,
    ):
        self.store = store
        self.source = source
        self.metrics_log = metrics_log
        self.base = base
        self.lock = ReadWriteLock()

    def sparql(self, query_text: str) -> Response:
        try:
            query = parse_query(query_text)
        except QuerySyntaxError as exc:
            return 400, TEXT, f"invalid query: {exc}".encode()
        with self.lock.read():
            table = evaluate(query, self.store)
        return 200, SPARQL_JSON, to_sparql_json(table).encode()

    def resource(self, kind_segment: str, local: str, accept: str) -> Response:
        root = self.base.value if self.base.value.endswith("/") else self.base.value + "/"
        try:
            resource = Iri(f"{root}resource/{kind_segment}/{local}")
        except ValueError:
            return 404, TEXT, b"no such resource"
        with self.lock.read():
            description = describe_resource(self.store, resource)
        if not description:
            return 404, TEXT, b"no such resource"
        if "text/turtle" in accept:
            return 200, TURTLE, serialize_turtle(description, PREFIXES).encode()
        return 200, HTML, _render_html(resource, description).encode()

    def search(self, screen_name: str) -> Response:
        if self.source is None or self.metrics_log is None:
            return 404, TEXT, b"account search is not configured"
        try:
            record = search_account(
                screen_name, self.source, self.metrics_log, datetime.now(timezone.utc)
            )
        except AccountNotFoundError:
            return 404, TEXT, f"unknown account: {screen_name}".encode()
        except (FetchError, TimelineParseError, ValueError) as exc:
            return 502, TEXT, f"timeline fetch failed: {exc}".encode()
        return 200, JSON_TYPE, _record_json(record).encode()

    def update_all(self, now: datetime | None = None):
        """One update cycle over every account the source provides."""
        if self.source is None or self.metrics_log is None:
            raise RuntimeError("update cycle requires a timeline source and log")
        return run_update_cycle(
            self.source.account_names(),
            self.source,
            self.store,
            self.metrics_log,
            now or datetime.now(timezone.utc),
            base=self.base,
            write_lock=self.lock.write,
        )


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def service(self) -> GraphService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, format: str, *args) -> None:  # noqa: A002
        log.debug("%s %s", self.address_string(), format % args)

    def _send(self, response: Response) -> None:
        status, content_type, body = response
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        segments = [part for part in url.path.split("/") if part]
        params = parse_qs(url.query)
        if url.path in ("/endpoint", "/sparql"):
            query = params.get("query", [None])[0]
            if query is None:
                self._send((400, TEXT, b"missing 'query' parameter"))
            else:
                self._send(self.service.sparql(query))
        elif len(segments) == 3 and segments[0] == "resource":
            accept = self.headers.get("Accept", "")
            self._send(self.service.resource(segments[1], segments[2], accept))
        elif url.path == "/searchAccount":
            name = params.get("name", [None])[0]
            if name is None:
                self._send((400, TEXT, b"missing 'name' parameter"))
            else:
                self._send(self.service.search(name))
        else:
            self._send((404, TEXT, b"not found"))

    def do_POST(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        if url.path not in ("/endpoint", "/sparql"):
            self._send((404, TEXT, b"not found"))
            return
        content_type = self.headers.get("Content-Type", "").split(";")[0].strip().lower()
        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length) if length else b""
        if content_type == "application/x-www-form-urlencoded":
            params = parse_qs(body.decode("utf-8"))
            query = params.get("query", [None])[0]
        elif content_type == "application/sparql-query":
            query = body.decode("utf-8")
        else:
            self._send((415, TEXT, f"unsupported content type: {content_type}".encode()))
            return
        if query is None:
            self._send((400, TEXT, b"missing 'query' parameter"))
        else:
            self._send(self.service.sparql(query))


class Server(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], service: GraphService):
        super().__init__(address, _Handler)
        self.service = service


def build_server(service: GraphService, port: int = DEFAULT_PORT, host: str = "") -> Server:
    return Server((host, port), service)


def run_server(
    service: GraphService,
    port: int = DEFAULT_PORT,
    host: str = "",
    interval_hours: float | None = None,
) -> None:
    """Serve until interrupted; optionally refresh the graph periodically."""
    server = build_server(service, port, host)
    stop = threading.Event()

    def update_loop() -> None:
        while not stop.wait(interval_hours * 3600.0):
            try:
                report = service.update_all()
                log.info(
                    "update cycle: %d processed, %d failed, +%d/-%d triples",
                    report.accounts_processed,
                    report.accounts_failed,
                    report.triples_added,
                    report.triples_removed,
                )
            except Exception:  # noqa: BLE001 - keep the loop alive
                log.exception("update cycle failed")

    if interval_hours is not None:
        threading.Thread(target=update_loop, daemon=True).start()
    try:
        server.serve_forever()
    finally:
        stop.set()
        server.server_close()
