"""Slot scoring, alignment selection, and report rendering."""

from __future__ import annotations

import pytest

from xchat import explain as ex
from xchat import graph as graph_mod
from xchat import tfidf
from xchat.errors import SnapshotMismatch
from xchat.triples import Triple


def t(s, p, o, pattern="SVO", prov="d:0"):
    return Triple(s, p, o, pattern, "auto", prov)


class TestSlotScore:
    def test_both_empty(self):
        assert ex.slot_score("", "") == 1.0

    def test_one_empty(self):
        assert ex.slot_score("dog", "") == 0.0
        assert ex.slot_score("", "dog") == 0.0

    def test_exact_lemma_overlap(self):
        assert ex.slot_score("animal shelter", "the animal shelter") == 1.0

    def test_partial_overlap_uses_larger_set(self):
        # {be} against {be, get}: 1 of max(1, 2).
        assert ex.slot_score("been", "am getting") == pytest.approx(0.5)

    def test_inflection_ignored(self):
        assert ex.slot_score("horses", "horse") == 1.0
        assert ex.slot_score("dogs", "dog") == 1.0

    def test_disjoint(self):
        assert ex.slot_score("dog", "cat") == 0.0


class TestTripleMatchScore:
    def test_weights_and_frozen_value(self):
        # subject 1.0, predicate 0.5, object 1.0 under (0.3, 0.3, 0.4).
        score, slots = ex.triple_match_score(
            t("I", "been", "dogs", pattern="SVP"),
            ("i", "am getting", "dog"))
        assert slots == (1.0, 0.5, 1.0)
        assert score == pytest.approx(0.85, abs=1e-9)

    def test_perfect_match_is_one(self):
        score, _ = ex.triple_match_score(
            t("that", "is", "awesome", pattern="SVP"),
            ("that", "is", "awesome"))
        assert score == pytest.approx(1.0, abs=1e-12)

    def test_empty_object_pair_scores_object_slot_one(self):
        score, slots = ex.triple_match_score(
            t("I", "work", "", pattern="SV"), ("i", "work", ""))
        assert slots == (1.0, 1.0, 1.0)
        assert score == pytest.approx(1.0, abs=1e-12)


def make_world():
    """Two-document index and a small graph with known provenance."""
    index = tfidf.build_index({
        "doc-a": ["i", "read", "book"],
        "doc-b": ["i", "drive", "dodge"],
    })
    graph = graph_mod.OntologyGraph()
    graph.upsert_triple(t("I", "read", "book", prov="doc-a:0"))
    graph.upsert_triple(t("I", "drive", "dodge", prov="doc-b:0"))
    graph.upsert_triple(
        Triple("I", "love", "book", "SVO", "manual", "manual:x.tsv:1"))
    return index, graph


class TestExplain:
    def test_query_text_composition(self):
        index, graph = make_world()
        report = ex.explain("I read a book.", ["first turn", "second turn"],
                            index, graph)
        assert report.query_text == "I read a book. first turn second turn"

    def test_only_last_two_context_turns(self):
        index, graph = make_world()
        report = ex.explain("I read a book.", ["one", "two", "three"],
                            index, graph)
        assert report.query_text == "I read a book. two three"

    def test_alignment_beats_threshold(self):
        index, graph = make_world()
        report = ex.explain("I read a book.", [], index, graph)
        assert len(report.alignments) == 1
        match = report.alignments[0]
        assert (match.graph_subject, match.graph_predicate,
                match.graph_object) == ("i", "read", "book")
        assert match.score == pytest.approx(1.0)
        assert match.scope == "restricted"
        assert report.unmatched == []

    def test_global_fallback_when_provenance_misses(self):
        # The query retrieves doc-a only, but the response triple matches
        # an edge whose provenance is doc-b; the match must fall back to
        # the whole graph and be labeled so.
        index = tfidf.build_index({
            "doc-a": ["i", "read", "book"],
            "doc-b": ["whale", "sing", "song"],
        })
        graph = graph_mod.OntologyGraph()
        graph.upsert_triple(t("I", "read", "book", prov="doc-a:0"))
        graph.upsert_triple(t("whales", "sing", "songs", prov="doc-b:0"))
        report = ex.explain("whales sing songs.",
                            ["i read a book i read a book"], index, graph, k=1)
        assert [h.doc_id for h in report.provenance] == ["doc-a"]
        assert len(report.alignments) == 1
        assert report.alignments[0].scope == "global"
        assert report.alignments[0].graph_predicate == "sing"
        assert report.alignments[0].score == pytest.approx(1.0)

    def test_manual_edges_always_in_restricted_scope(self):
        index, graph = make_world()
        report = ex.explain("I love a book.", [], index, graph, k=1)
        by_pred = {m.graph_predicate: m for m in report.alignments}
        assert "love" in by_pred
        assert by_pred["love"].scope == "restricted"

    def test_unmatched_below_threshold(self):
        index, graph = make_world()
        report = ex.explain("whales sing songs.", [], index, graph)
        assert report.alignments == []
        assert [tr.subject for tr in report.unmatched] == ["whales"]

    def test_alignments_sorted_by_score(self):
        index, graph = make_world()
        report = ex.explain("I read a book. I drive a dodge it is old.",
                            [], index, graph)
        scores = [m.score for m in report.alignments]
        assert scores == sorted(scores, reverse=True)

    def test_tie_breaks_to_lowest_edge_id(self):
        index = tfidf.build_index({"doc-a": ["x"]})
        graph = graph_mod.OntologyGraph()
        graph.upsert_triple(t("I", "like", "tea", prov="doc-a:0"))
        graph.upsert_triple(t("I", "like", "coffee", prov="doc-a:0"))
        report = ex.explain("I like trains.", [], index, graph)
        assert report.alignments[0].edge_id == "e0"

    def test_snapshot_mismatch(self):
        index, graph = make_world()
        index.corpus_hash = "aaaa"
        graph.corpus_hash = "bbbb"
        with pytest.raises(SnapshotMismatch):
            ex.explain("hi", [], index, graph)

    def test_generator_recorded(self):
        index, graph = make_world()
        report = ex.explain("I read a book.", [], index, graph,
                            generator="retrieval")
        assert report.generator == "retrieval"


class TestReportSerialization:
    def test_round_trip_equality(self):
        index, graph = make_world()
        report = ex.explain("I read a book.", ["earlier turn"], index, graph,
                            response_id="abc:1", generator="retrieval")
        rebuilt = ex.ExplanationReport.from_record(report.to_record())
        assert rebuilt == report

    def test_structured_render_parses(self):
        import json
        index, graph = make_world()
        report = ex.explain("I read a book.", [], index, graph)
        record = json.loads(ex.render_report(report, "structured"))
        assert record == report.to_record()

    def test_text_render_has_both_columns(self):
        index, graph = make_world()
        report = ex.explain("I read a book.", [], index, graph)
        text = ex.render_report(report, "text")
        assert "system generated" in text
        assert "training data triple" in text
        assert "(I, read, book)" in text
        assert "(i, read, book)" in text

    def test_unknown_format(self):
        index, graph = make_world()
        report = ex.explain("hi", [], index, graph)
        with pytest.raises(ValueError):
            ex.render_report(report, "yaml")
