"""Triple store semantics and index-versus-scan equivalence."""

from __future__ import annotations

import random

from influencegraph.rdf import Iri, Triple, integer_literal, string_literal, triple_sort_key
from influencegraph.store import TriplePattern, TripleStore

EX = "http://example.org/"
ACCOUNT_NAME = Iri("http://xmlns.com/foaf/0.1/accountName")


def iri(name):
    return Iri(EX + name)


def t(s, p, o):
    return Triple(iri(s), iri(p), o if not isinstance(o, str) else iri(o))


class TestInsert:
    def test_set_semantics(self):
        store = TripleStore()
        triple = t("s", "p", "o")
        assert store.insert(triple) is True
        assert store.insert(triple) is False
        assert len(store) == 1

    def test_three_distinct(self):
        store = TripleStore()
        for i in range(3):
            assert store.insert(t(f"s{i}", "p", "o"))
        assert store.size == 3

    def test_index_coherence_after_insert(self):
        store = TripleStore()
        triple = t("s", "p", "o")
        store.insert(triple)
        assert store.match(TriplePattern(subject=triple.subject)) == [triple]


class TestRemoveBySubject:
    def test_unknown_subject(self):
        assert TripleStore().remove_by_subject(iri("ghost")) == 0

    def test_removes_exactly_subject_triples(self):
        store = TripleStore()
        for i in range(6):
            store.insert(t("victim", f"p{i}", f"o{i}"))
        store.insert(t("bystander", "p0", "o0"))
        removed = store.remove_by_subject(iri("victim"))
        assert removed == 6
        assert store.size == 1

    def test_match_after_remove_is_empty(self):
        store = TripleStore()
        store.insert(t("gone", "p", "o"))
        store.remove_by_subject(iri("gone"))
        assert store.match(TriplePattern(subject=iri("gone"))) == []
        assert store.match(TriplePattern()) == []


class TestMatch:
    def seeded(self):
        store = TripleStore()
        store.insert(Triple(iri("acct1"), ACCOUNT_NAME, string_literal("one")))
        store.insert(Triple(iri("acct2"), ACCOUNT_NAME, string_literal("two")))
        store.insert(t("acct1", "follows", "acct2"))
        return store

    def test_all_wildcard_returns_everything(self):
        store = self.seeded()
        assert set(store.match(TriplePattern())) == store.export()

    def test_predicate_bound(self):
        store = self.seeded()
        rows = store.match(TriplePattern(predicate=ACCOUNT_NAME))
        assert len(rows) == 2

    def test_fully_ground(self):
        store = self.seeded()
        hit = TriplePattern(iri("acct1"), ACCOUNT_NAME, string_literal("one"))
        miss = TriplePattern(iri("acct1"), ACCOUNT_NAME, string_literal("two"))
        assert len(store.match(hit)) == 1
        assert store.match(miss) == []

    def test_results_in_canonical_order(self):
        store = self.seeded()
        rows = store.match(TriplePattern())
        assert rows == sorted(rows, key=triple_sort_key)


class TestLoadExport:
    def test_round_trip(self):
        graph = {t(f"s{i}", "p", f"o{i}") for i in range(10)}
        store = TripleStore()
        assert store.load(graph) == 10
        assert store.export() == graph

    def test_load_idempotent(self):
        graph = {t("s", "p", "o")}
        store = TripleStore(graph)
        assert store.load(graph) == 0
        assert store.size == 1

    def test_empty_store_exports_empty(self):
        assert TripleStore().export() == set()

    def test_export_is_a_copy(self):
        store = TripleStore({t("s", "p", "o")})
        exported = store.export()
        exported.clear()
        assert store.size == 1


def random_term(rng, subjects, predicates, objects, kind):
    pools = {"s": subjects, "p": predicates, "o": objects}
    return rng.choice(pools[kind])


def test_match_equals_linear_scan_randomized():
    rng = random.Random(99)
    subjects = [iri(f"s{i}") for i in range(8)]
    predicates = [iri(f"p{i}") for i in range(4)]
    objects = [iri(f"o{i}") for i in range(6)] + [
        string_literal("hello"),
        integer_literal(5),
    ]
    for _ in range(40):
        store = TripleStore()
        for _ in range(rng.randint(0, 120)):
            store.insert(
                Triple(rng.choice(subjects), rng.choice(predicates), rng.choice(objects))
            )
        # random interleaved removals keep the indexes honest
        for _ in range(rng.randint(0, 4)):
            store.remove_by_subject(rng.choice(subjects))
        snapshot = store.export()
        assert len(snapshot) == store.size
        for _ in range(30):
            pattern = TriplePattern(
                subject=rng.choice([None, *subjects]),
                predicate=rng.choice([None, *predicates]),
                object=rng.choice([None, *objects]),
            )
            expected = sorted(
                (triple for triple in snapshot if pattern.matches(triple)),
                key=triple_sort_key,
            )
            assert store.match(pattern) == expected


def test_interleaved_insert_remove_coherence():
    rng = random.Random(7)
    subjects = [iri(f"s{i}") for i in range(5)]
    predicates = [iri(f"p{i}") for i in range(3)]
    objects = [iri(f"o{i}") for i in range(4)]
    store = TripleStore()
    shadow: set[Triple] = set()
    for _ in range(400):
        if rng.random() < 0.7 or not shadow:
            triple = Triple(
                rng.choice(subjects), rng.choice(predicates), rng.choice(objects)
            )
            assert store.insert(triple) == (triple not in shadow)
            shadow.add(triple)
        else:
            subject = rng.choice(subjects)
            expected = sum(1 for triple in shadow if triple.subject == subject)
            assert store.remove_by_subject(subject) == expected
            shadow = {triple for triple in shadow if triple.subject != subject}
        assert store.size == len(shadow)
    assert store.export() == shadow
