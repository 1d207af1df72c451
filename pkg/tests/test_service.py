"""HTTP API contract: response schemas, error codes, and startup checks."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from xchat.config import GeneratorConfig, ServerConfig
from xchat.errors import SnapshotMismatch, SnapshotMissing
from xchat.service import create_app
from xchat.stubgen import StubGenerator

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / name).read_text("utf-8"))


def validate(payload: dict, schema_name: str) -> None:
    """Validate against a schema file, honoring cross-file references."""
    import jsonschema

    schema = load_schema(schema_name)
    store = {}
    for path in SCHEMA_DIR.glob("*.json"):
        doc = json.loads(path.read_text("utf-8"))
        store[doc.get("$id", path.name)] = doc
        store[path.name] = doc
    try:
        from referencing import Registry, Resource

        registry = Registry().with_resources(
            (uri, Resource.from_contents(doc)) for uri, doc in store.items())
        jsonschema.Draft202012Validator(schema, registry=registry).validate(payload)
    except ImportError:
        resolver = jsonschema.RefResolver(base_uri="", referrer=schema, store=store)
        jsonschema.Draft202012Validator(schema, resolver=resolver).validate(payload)


@pytest.fixture(scope="module")
def client(built_data_dir):
    config = ServerConfig(data_dir=str(built_data_dir))
    app = create_app(config)
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


def make_session(client, **overrides) -> str:
    body = {"level": "l3"}
    body.update(overrides)
    response = client.post("/api/sessions", json=body)
    assert response.status_code == 200, response.text
    return response.json()["session_id"]


class TestSchemas:
    def test_health(self, client):
        response = client.get("/api/healthz")
        assert response.status_code == 200
        validate(response.json(), "health.json")

    def test_session_create(self, client):
        response = client.post("/api/sessions", json={"level": "l3"})
        assert response.status_code == 200
        validate(response.json(), "session.json")

    def test_message_and_explanation(self, client):
        session_id = make_session(client)
        response = client.post(f"/api/sessions/{session_id}/messages",
                               json={"text": "do you like animals?"})
        assert response.status_code == 200
        body = response.json()
        validate(body, "message_response.json")
        explanation = client.get(
            f"/api/responses/{body['response_id']}/explanation")
        assert explanation.status_code == 200
        validate(explanation.json(), "explanation_report.json")

    def test_neighborhood(self, client):
        response = client.get("/api/graph/neighborhood",
                              params={"entity": "animal shelter", "depth": 2})
        assert response.status_code == 200
        validate(response.json(), "graph_subgraph.json")

    def test_graph_export_structured(self, client):
        response = client.get("/api/graph/export")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("application/json")
        validate(response.json(), "graph_export_structured.json")

    def test_graph_export_import_script(self, client):
        response = client.get("/api/graph/export",
                              params={"format": "import-script"})
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/plain")
        assert "MERGE" in response.text

    def test_document(self, client, built_data_dir):
        manifest = json.loads(
            (built_data_dir / "corpus" / "manifest.json").read_text("utf-8"))
        doc_id = manifest["document_ids"][0]
        response = client.get(f"/api/documents/{doc_id}")
        assert response.status_code == 200
        validate(response.json(), "document.json")

    def test_error_shape(self, client):
        response = client.get("/api/documents/nope")
        assert response.status_code == 404
        validate(response.json(), "error.json")


class TestErrorCodes:
    def expect(self, response, status, code):
        assert response.status_code == status, response.text
        body = response.json()
        assert body["code"] == code
        validate(body, "error.json")

    def test_l1_reserved(self, client):
        self.expect(client.post("/api/sessions", json={"level": "l1"}),
                    400, "level_unsupported")

    def test_invalid_level(self, client):
        self.expect(client.post("/api/sessions", json={"level": "l9"}),
                    400, "invalid_level")

    def test_l2_needs_topic(self, client):
        self.expect(client.post("/api/sessions", json={"level": "l2"}),
                    400, "topic_required")

    def test_invalid_generator(self, client):
        self.expect(client.post("/api/sessions",
                                json={"level": "l3", "generator": "gpt"}),
                    400, "invalid_generator")

    def test_external_without_endpoint(self, client):
        self.expect(client.post("/api/sessions",
                                json={"level": "l3", "generator": "external"}),
                    400, "generator_not_configured")

    def test_invalid_session_id(self, client):
        self.expect(client.post("/api/sessions",
                                json={"level": "l3", "session_id": "Bad ID"}),
                    400, "invalid_session_id")

    def test_duplicate_session(self, client):
        make_session(client, session_id="taken-1")
        self.expect(client.post("/api/sessions",
                                json={"level": "l3", "session_id": "taken-1"}),
                    400, "session_exists")

    def test_empty_message(self, client):
        session_id = make_session(client)
        self.expect(client.post(f"/api/sessions/{session_id}/messages",
                                json={"text": "   "}),
                    400, "empty_message")

    def test_unknown_session(self, client):
        self.expect(client.post("/api/sessions/ghost-9/messages",
                                json={"text": "hi"}),
                    404, "unknown_session")

    def test_unknown_response(self, client):
        self.expect(client.get("/api/responses/ghost-9:1/explanation"),
                    404, "unknown_response")

    def test_unknown_entity(self, client):
        self.expect(client.get("/api/graph/neighborhood",
                               params={"entity": "zzz unseen"}),
                    404, "unknown_entity")

    def test_bad_depth(self, client):
        response = client.get("/api/graph/neighborhood",
                              params={"entity": "animal shelter", "depth": 9})
        assert response.status_code == 400
        validate(response.json(), "error.json")

    def test_bad_export_format(self, client):
        self.expect(client.get("/api/graph/export", params={"format": "xml"}),
                    400, "invalid_format")

    def test_unknown_document(self, client):
        self.expect(client.get("/api/documents/feedbeef-9999"),
                    404, "unknown_doc_id")

    def test_missing_body_field(self, client):
        self.expect(client.post("/api/sessions", json={}),
                    400, "validation_error")


class TestConversationFlow:
    def test_reply_and_report_traceable(self, client):
        session_id = make_session(client)
        first = client.post(f"/api/sessions/{session_id}/messages",
                            json={"text": "do you like animals?"}).json()
        assert first["response"] == "I work with them."
        assert first["response_id"] == f"{session_id}:1"
        second = client.post(f"/api/sessions/{session_id}/messages",
                             json={"text": "what pets do you have?"}).json()
        assert second["response_id"] == f"{session_id}:2"
        report = client.get(
            f"/api/responses/{second['response_id']}/explanation").json()
        assert report["generator"] == "retrieval"
        assert report["response_text"] == second["response"]

    def test_session_persists_across_requests(self, client, built_data_dir):
        session_id = make_session(client)
        client.post(f"/api/sessions/{session_id}/messages",
                    json={"text": "hello there"})
        stored = json.loads(
            (built_data_dir / "sessions" / f"{session_id}.json").read_text("utf-8"))
        assert [t["speaker"] for t in stored["history"]] == ["user", "bot"]

    def test_external_generator_session(self, built_data_dir):
        with StubGenerator() as stub:
            config = ServerConfig(
                data_dir=str(built_data_dir),
                generator=GeneratorConfig(endpoint=stub.url))
            app = create_app(config)
            with TestClient(app) as client:
                session_id = make_session(client, generator="external")
                body = client.post(f"/api/sessions/{session_id}/messages",
                                   json={"text": "hello"}).json()
                assert body["response"] == "ok: hello"
                report = client.get(
                    f"/api/responses/{body['response_id']}/explanation").json()
                assert report["generator"] == "external"


class TestHealth:
    def test_snapshot_ids_match_artifacts(self, client, built_data_dir):
        body = client.get("/api/healthz").json()
        meta = json.loads(
            (built_data_dir / "index" / "meta.json").read_text("utf-8"))
        graph_record = json.loads(
            (built_data_dir / "graph" / "graph.json").read_text("utf-8"))
        assert body["snapshot"]["index_id"] == meta["index_id"]
        assert body["snapshot"]["graph_id"] == graph_record["graph_id"]


class TestStartup:
    def test_unbuilt_data_dir(self, tmp_path):
        with pytest.raises(SnapshotMissing):
            create_app(ServerConfig(data_dir=str(tmp_path / "empty")))

    def test_corpus_hash_mismatch(self, built_data_dir, tmp_path):
        import shutil

        broken = tmp_path / "broken"
        shutil.copytree(built_data_dir, broken)
        meta_path = broken / "index" / "meta.json"
        meta = json.loads(meta_path.read_text("utf-8"))
        meta["corpus_hash"] = "0" * 64
        meta_path.write_text(json.dumps(meta), "utf-8")
        with pytest.raises(SnapshotMismatch):
            create_app(ServerConfig(data_dir=str(broken)))

    def test_cors_header_when_configured(self, built_data_dir):
        config = ServerConfig(data_dir=str(built_data_dir),
                              cors_allowed_origins=["http://localhost:5173"])
        app = create_app(config)
        with TestClient(app) as client:
            response = client.get(
                "/api/healthz",
                headers={"Origin": "http://localhost:5173"})
            assert response.headers.get(
                "access-control-allow-origin") == "http://localhost:5173"
