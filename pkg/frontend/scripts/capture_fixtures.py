"""Regenerate tests/fixtures/*.json from a live in-process service.

Run from the repository root (needs the Python package installed):

    python3 frontend/scripts/capture_fixtures.py

The captured bodies are what the contract suite validates against the
published schemas, so refresh them whenever the API shape changes.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from xchat.cli import main as cli_main
from xchat.config import ServerConfig
from xchat.service import create_app

REPO_ROOT = Path(__file__).resolve().parents[2]
OUT_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def build_snapshot(data_dir: Path) -> None:
    import importlib.resources as resources

    data_dir.mkdir(parents=True, exist_ok=True)
    dialogue = data_dir / "dialogue.json"
    dialogue.write_text(
        resources.files("xchat.fixtures")
        .joinpath("sample_dialogue.json").read_text("utf-8"),
        "utf-8")
    manual = REPO_ROOT / "fixtures" / "manual_triples.tsv"
    for argv in (
        ["--data-dir", str(data_dir), "ingest", "--dialogue", str(dialogue),
         "--topic", "animals"],
        ["--data-dir", str(data_dir), "index", "build"],
        ["--data-dir", str(data_dir), "graph", "build", "--manual", str(manual)],
    ):
        code = cli_main(argv)
        if code != 0:
            raise SystemExit(f"build step failed ({code}): {argv}")


def save(name: str, payload: object) -> None:
    path = OUT_DIR / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True,
                               ensure_ascii=False) + "\n", "utf-8")
    print(f"wrote {path.relative_to(REPO_ROOT)}")


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        data_dir = Path(tmp) / "data"
        build_snapshot(data_dir)
        app = create_app(ServerConfig(data_dir=str(data_dir)))
        with TestClient(app) as client:
            session = client.post(
                "/api/sessions", json={"level": "l3", "session_id": "fixture-chat"}).json()
            save("session.json", session)

            message = client.post(
                "/api/sessions/fixture-chat/messages",
                json={"text": "do you like animals?"}).json()
            save("message_response.json", message)

            report = client.get(
                f"/api/responses/{message['response_id']}/explanation").json()
            save("explanation_report.json", report)

            doc_id = report["provenance"][0]["doc_id"]
            save("document.json", client.get(f"/api/documents/{doc_id}").json())

            for depth in (1, 2):
                body = client.get(
                    "/api/graph/neighborhood",
                    params={"entity": "animal", "depth": depth}).json()
                save(f"subgraph_depth{depth}.json", body)

            save("graph_export.json",
                 client.get("/api/graph/export?format=structured").json())
            save("health.json", client.get("/api/healthz").json())

            error = client.post("/api/sessions/ghost/messages",
                                json={"text": "hi"})
            assert error.status_code == 404
            save("error.json", error.json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
