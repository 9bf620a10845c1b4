"""JSON API behavior through the in-process test client."""
from __future__ import annotations

import threading

import pytest
from fastapi.testclient import TestClient

from graphrec.explain import color_for_type
from graphrec.recommend import RecommendationConfig
from graphrec.service import create_app


@pytest.fixture(scope="module")
def client(engine25):
    app = create_app(engine=engine25)
    with TestClient(app) as test_client:
        yield test_client


class TestRecommendRoute:
    def test_payload_matches_engine(self, client, engine25):
        response = client.get("/api/recommend", params={"doc": 3, "top": 5})
        assert response.status_code == 200
        payload = response.json()
        assert payload["seed"]["doc_id"] == 3
        assert payload["params"] == {"top": 5, "wg": 0.6, "wt": 0.4, "budget": 6}

        expected = engine25.recommend(3, RecommendationConfig(top_n=5))
        assert [c["doc_id"] for c in payload["candidates"]] == \
            [c.doc_id for c in expected]
        for got, want in zip(payload["candidates"], expected):
            assert got["fused"] == want.fused
            assert got["core_overlap_norm"] == want.core_overlap_norm
            assert got["bm25_norm"] == want.bm25_norm
            assert isinstance(got["title"], str) and got["title"]

    def test_explanations_inline_with_statuses(self, client):
        payload = client.get("/api/recommend", params={"doc": 3, "top": 5}).json()
        statuses = {entry["status"]
                    for candidate in payload["candidates"]
                    for entry in candidate["explanation"]}
        assert "Shared" in statuses
        for candidate in payload["candidates"]:
            for entry in candidate["explanation"]:
                assert set(entry) == {"subject", "subject_type", "predicate", "object",
                                      "object_type", "status", "score"}

    def test_colors_cover_every_type_in_payload(self, client):
        payload = client.get("/api/recommend", params={"doc": 3, "top": 10}).json()
        types_used = set()
        for candidate in payload["candidates"]:
            for entry in candidate["explanation"]:
                types_used.add(entry["subject_type"])
                types_used.add(entry["object_type"])
        assert types_used <= set(payload["colors"])
        for concept_type, color in payload["colors"].items():
            assert color == color_for_type(concept_type)

    def test_budget_caps_explanations(self, client):
        payload = client.get("/api/recommend",
                             params={"doc": 68, "top": 10, "budget": 1}).json()
        assert all(len(c["explanation"]) <= 2 for c in payload["candidates"])

    def test_weights_rebalance_scores(self, client):
        graph_only = client.get("/api/recommend",
                                params={"doc": 68, "top": 25, "wg": 1.0, "wt": 0.0}).json()
        for candidate in graph_only["candidates"]:
            assert candidate["fused"] == candidate["core_overlap_norm"]

    def test_unknown_document_404(self, client):
        response = client.get("/api/recommend", params={"doc": 31337})
        assert response.status_code == 404
        assert "31337" in response.json()["detail"]

    @pytest.mark.parametrize("params", [
        {"doc": 3, "top": 0},
        {"doc": 3, "budget": 0},
        {"doc": 3, "wg": -1.0},
        {"doc": 3, "wg": 0.0, "wt": 0.0},
    ])
    def test_bad_values_400(self, client, params):
        assert client.get("/api/recommend", params=params).status_code == 400

    def test_non_numeric_doc_400(self, client):
        assert client.get("/api/recommend", params={"doc": "abc"}).status_code == 400

    def test_missing_doc_param_400(self, client):
        assert client.get("/api/recommend").status_code == 400


class TestDocumentRoute:
    def test_document_payload(self, client, engine25):
        response = client.get("/api/document/3")
        assert response.status_code == 200
        payload = response.json()
        doc = engine25.document(3)
        assert payload["doc_id"] == 3
        assert payload["title"] == doc.title
        assert payload["abstract"] == doc.abstract
        assert payload["statement_count"] == len(doc.statements)
        assert len(payload["concepts"]) == len(doc.concepts)
        first = payload["concepts"][0]
        assert doc.text[first["start"]:first["end"]] == first["mention"]

    def test_unknown_404(self, client):
        assert client.get("/api/document/31337").status_code == 404


class TestGraphRoute:
    def test_graph_payload(self, client, engine25):
        response = client.get("/api/document/3/graph")
        assert response.status_code == 200
        payload = response.json()
        expected = engine25.document_graph(3)
        assert len(payload["edges"]) == len(expected)
        for got, want in zip(payload["edges"], expected):
            assert (got["subject"], got["predicate"], got["object"]) == \
                (want.subject, want.predicate, want.object)
            assert got["score"] == want.score
        edge_nodes = {n for e in payload["edges"] for n in (e["subject"], e["object"])}
        assert {n["id"] for n in payload["nodes"]} == edge_nodes
        assert payload["total_edges"] == len(engine25.core(3))
        for node in payload["nodes"]:
            assert node["label"], "every node carries a display label"

    def test_max_statements_slider(self, client):
        small = client.get("/api/document/3/graph", params={"max_statements": 2}).json()
        assert len(small["edges"]) == 2
        empty = client.get("/api/document/3/graph", params={"max_statements": 0}).json()
        assert empty["edges"] == [] and empty["nodes"] == []
        assert empty["total_edges"] > 0

    def test_type_filter_csv(self, client):
        payload = client.get("/api/document/3/graph",
                             params={"types": "Drug, Disease"}).json()
        for edge in payload["edges"]:
            assert edge["subject_type"] in {"Drug", "Disease"}
            assert edge["object_type"] in {"Drug", "Disease"}
        # available_types reports the unfiltered core
        assert set(payload["available_types"]) >= {"Drug", "Disease"}

    def test_negative_max_statements_400(self, client):
        response = client.get("/api/document/3/graph", params={"max_statements": -1})
        assert response.status_code == 400

    def test_unknown_404(self, client):
        assert client.get("/api/document/31337/graph").status_code == 404


class TestAboutRoute:
    def test_about(self, client, engine25):
        payload = client.get("/api/about").json()
        assert payload["corpus_size"] == engine25.corpus_size()
        assert "two stages" in payload["text"]


class TestStartupGate:
    def test_503_until_engine_ready_then_200(self, engine25):
        release = threading.Event()

        def factory():
            release.wait(timeout=10)
            return engine25

        app = create_app(engine_factory=factory)
        with TestClient(app) as gated:
            early = gated.get("/api/about")
            assert early.status_code == 503
            assert "loading" in early.json()["detail"]

            release.set()
            for _ in range(200):
                response = gated.get("/api/about")
                if response.status_code == 200:
                    break
                threading.Event().wait(0.05)
            assert response.status_code == 200

    def test_failed_load_keeps_503_with_reason(self):
        def factory():
            raise RuntimeError("disk on fire")

        app = create_app(engine_factory=factory)
        with TestClient(app) as gated:
            for _ in range(200):
                response = gated.get("/api/about")
                if "disk on fire" in response.json().get("detail", ""):
                    break
                threading.Event().wait(0.05)
            assert response.status_code == 503
            assert "disk on fire" in response.json()["detail"]

    def test_create_app_requires_a_source(self):
        with pytest.raises(ValueError):
            create_app()


class TestStaticUi:
    def test_ui_dir_served_at_root(self, engine25, tmp_path):
        (tmp_path / "index.html").write_text("<html><body>ui shell</body></html>")
        app = create_app(engine=engine25, ui_dir=tmp_path)
        with TestClient(app) as ui_client:
            response = ui_client.get("/")
            assert response.status_code == 200
            assert "ui shell" in response.text
            # API still reachable alongside the mount
            assert ui_client.get("/api/about").status_code == 200
