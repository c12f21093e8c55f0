"""Embedded in-memory triple store with SPO/POS/OSP indexes.

Matching picks the most selective index for the pattern's bound
positions and returns triples in canonical order, so results are
deterministic. Concurrency contract: any number of readers OR one
exclusive writer; callers (the service layer) enforce it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .rdf import Graph, Iri, Term, Triple, triple_sort_key


@dataclass(frozen=True)
class TriplePattern:
    """A triple with any position wildcarded (None)."""

    subject: Iri | None = None
    predicate: Iri | None = None
    object: Term | None = None

    def matches(self, triple: Triple) -> bool:
        return (
            (self.subject is None or self.subject == triple.subject)
            and (self.predicate is None or self.predicate == triple.predicate)
            and (self.object is None or self.object == triple.object)
        )


class TripleStore:
    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._spo: dict[Iri, dict[Iri, set[Term]]] = {}
        self._pos: dict[Iri, dict[Term, set[Iri]]] = {}
        self._osp: dict[Term, dict[Iri, set[Iri]]] = {}
        self.load(triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    @property
    def size(self) -> int:
        return len(self._triples)

    def insert(self, triple: Triple) -> bool:
        """Add a triple; returns True iff it was not already present."""
        if triple in self._triples:
            return False
        self._triples.add(triple)
        s, p, o = triple.subject, triple.predicate, triple.object
        self._spo.setdefault(s, {}).setdefault(p, set()).add(o)
        self._pos.setdefault(p, {}).setdefault(o, set()).add(s)
        self._osp.setdefault(o, {}).setdefault(s, set()).add(p)
        return True

    def _discard(self, triple: Triple) -> None:
        self._triples.discard(triple)
        s, p, o = triple.subject, triple.predicate, triple.object
        for index, first, second, third in (
            (self._spo, s, p, o),
            (self._pos, p, o, s),
            (self._osp, o, s, p),
        ):
            bucket = index[first][second]
            bucket.discard(third)
            if not bucket:
                del index[first][second]
                if not index[first]:
                    del index[first]

    def remove_by_subject(self, subject: Iri) -> int:
        """Remove every triple with the given subject; returns the count."""
        doomed = [
            Triple(subject, predicate, obj)
            for predicate, objects in self._spo.get(subject, {}).items()
            for obj in tuple(objects)
        ]
        for triple in doomed:
            self._discard(triple)
        return len(doomed)

    def load(self, graph: Iterable[Triple]) -> int:
        """Bulk union insert; returns the number of new triples."""
        return sum(1 for triple in graph if self.insert(triple))

    def export(self) -> Graph:
        """A copy of the full triple set."""
        return set(self._triples)

    def _candidates(self, pattern: TriplePattern) -> Iterator[Triple]:
        s, p, o = pattern.subject, pattern.predicate, pattern.object
        if s is not None and p is not None and o is not None:
            triple = Triple(s, p, o)
            if triple in self._triples:
                yield triple
        elif s is not None and p is not None:
            for obj in self._spo.get(s, {}).get(p, ()):
                yield Triple(s, p, obj)
        elif p is not None and o is not None:
            for subj in self._pos.get(p, {}).get(o, ()):
                yield Triple(subj, p, o)
        elif s is not None and o is not None:
            for pred in self._osp.get(o, {}).get(s, ()):
                yield Triple(s, pred, o)
        elif s is not None:
            for pred, objects in self._spo.get(s, {}).items():
                for obj in objects:
                    yield Triple(s, pred, obj)
        elif p is not None:
            for obj, subjects in self._pos.get(p, {}).items():
                for subj in subjects:
                    yield Triple(subj, p, obj)
        elif o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
        else:
            yield from self._triples

    def match(self, pattern: TriplePattern) -> list[Triple]:
        """All triples unifying with the pattern, in canonical order."""
        return sorted(self._candidates(pattern), key=triple_sort_key)
