"""Command-line interface: pipelines, exit codes, and configuration."""

from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from xchat.cli import main
from xchat.config import load_config
from xchat.errors import FileUnreadable
from conftest import MANUAL_TSV


@pytest.fixture()
def text_file(tmp_path) -> Path:
    path = tmp_path / "notes.txt"
    path.write_text("i read a book. i like music.\n\nmy dog sleeps a lot.",
                    "utf-8")
    return path


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPipeline:
    def test_ingest_index_graph_roundtrip(self, tmp_path, text_file, capsys):
        data = str(tmp_path / "data")
        code, out, _ = run(capsys, "--data-dir", data,
                           "ingest", "--text", str(text_file))
        assert code == 0
        assert "ingested 2 documents" in out
        code, out, _ = run(capsys, "--data-dir", data, "index", "build")
        assert code == 0
        assert "built idx-" in out
        code, out, _ = run(capsys, "--data-dir", data,
                           "graph", "build", "--manual", str(MANUAL_TSV))
        assert code == 0
        assert "built gph-" in out
        code, out, _ = run(capsys, "--data-dir", data,
                           "graph", "stats", "--json")
        assert code == 0
        stats = json.loads(out)
        assert stats["nodes"] > 0 and stats["edges"] > 0

    def test_ingest_accumulates(self, tmp_path, text_file, capsys):
        data = str(tmp_path / "data")
        run(capsys, "--data-dir", data, "ingest", "--text", str(text_file))
        other = tmp_path / "more.txt"
        other.write_text("the sky is blue.", "utf-8")
        code, out, _ = run(capsys, "--data-dir", data,
                           "ingest", "--text", str(other))
        assert code == 0
        assert "ingested 1 documents (3 total)" in out

    def test_index_query_json(self, tmp_path, text_file, capsys):
        data = str(tmp_path / "data")
        run(capsys, "--data-dir", data, "ingest", "--text", str(text_file))
        run(capsys, "--data-dir", data, "index", "build")
        code, out, _ = run(capsys, "--data-dir", data,
                           "index", "query", "dog", "--json")
        assert code == 0
        hits = json.loads(out)
        assert hits and set(hits[0]) == {"doc_id", "score", "matched_terms"}
        assert hits[0]["matched_terms"][0][0] == "dog"

    def test_explain_command(self, tmp_path, text_file, capsys):
        data = str(tmp_path / "data")
        run(capsys, "--data-dir", data, "ingest", "--text", str(text_file))
        run(capsys, "--data-dir", data, "index", "build")
        run(capsys, "--data-dir", data, "graph", "build")
        code, out, _ = run(capsys, "--data-dir", data,
                           "explain", "i read a book.", "--json")
        assert code == 0
        report = json.loads(out)
        assert report["alignments"]
        assert report["alignments"][0]["graph_triple"]["object"] == "book"


class TestExitCodes:
    def test_ingest_nothing_is_usage_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "--data-dir", str(tmp_path), "ingest")
        assert code == 1
        assert "usage error" in err

    def test_malformed_dialogue_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('[{"persona": []}]', "utf-8")
        code, _, err = run(capsys, "--data-dir", str(tmp_path / "d"),
                           "ingest", "--dialogue", str(bad))
        assert code == 2
        assert "record 0" in err

    def test_query_before_build_is_missing_artifact(self, tmp_path, capsys):
        code, _, err = run(capsys, "--data-dir", str(tmp_path / "d"),
                           "index", "query", "hello")
        assert code == 3
        assert "index build" in err

    def test_export_before_build_is_missing_artifact(self, tmp_path, capsys):
        code, _, _ = run(capsys, "--data-dir", str(tmp_path / "d"),
                         "graph", "export")
        assert code == 3

    def test_unknown_doc_is_data_error(self, tmp_path, text_file, capsys):
        data = str(tmp_path / "data")
        run(capsys, "--data-dir", data, "ingest", "--text", str(text_file))
        code, _, err = run(capsys, "--data-dir", data,
                           "extract", "--doc", "feedbeef-0099")
        assert code == 2
        assert "feedbeef-0099" in err


class TestGoldenDiagnostic:
    def test_reference_extraction_matches(self, capsys):
        code, out, _ = run(capsys, "extract", "--golden")
        assert code == 0
        assert "matched 10/10" in out

    def test_json_shape(self, capsys):
        code, out, _ = run(capsys, "extract", "--golden", "--json")
        assert code == 0
        record = json.loads(out)
        assert record["matched"] == record["expected"] == 10
        assert record["missed"] == []


class TestChat:
    def test_in_process_turns(self, built_data_dir, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin",
                            io.StringIO("do you like animals?\n\n"))
        code, out, _ = run(capsys, "--data-dir", str(built_data_dir),
                           "chat", "--session-id", "cli-chat-1")
        assert code == 0
        assert "session cli-chat-1" in out
        assert "bot> I work with them." in out
        report_path = built_data_dir / "reports" / "cli-chat-1_1.json"
        assert report_path.is_file()

    def test_json_stream(self, built_data_dir, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("hello there\n"))
        code, out, _ = run(capsys, "--data-dir", str(built_data_dir),
                           "chat", "--session-id", "cli-chat-2", "--json")
        assert code == 0
        lines = [json.loads(line) for line in out.splitlines()]
        assert lines[0] == {"session_id": "cli-chat-2"}
        assert lines[1]["response_id"] == "cli-chat-2:1"

    def test_l1_is_rejected(self, built_data_dir, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(""))
        code, _, err = run(capsys, "--data-dir", str(built_data_dir),
                           "chat", "--level", "l1")
        assert code == 2
        assert "level_unsupported" in err

    def test_unbuilt_data_dir(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(""))
        code, _, _ = run(capsys, "--data-dir", str(tmp_path / "nope"), "chat")
        assert code == 3


class TestConfig:
    def test_file_values(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "listen": {"host": "0.0.0.0", "port": 9000},
            "data_dir": "/srv/data",
            "generator": {"mode": "external",
                          "endpoint": "http://gen:9090",
                          "timeout": 1.5,
                          "max_history_turns": 2},
            "cors_allowed_origins": ["http://localhost:5173"],
            "log_level": "debug",
        }), "utf-8")
        config = load_config(path, env={})
        assert (config.host, config.port) == ("0.0.0.0", 9000)
        assert config.data_dir == "/srv/data"
        assert config.generator.endpoint == "http://gen:9090"
        assert config.generator.timeout == 1.5
        assert config.generator.max_history_turns == 2
        assert config.cors_allowed_origins == ["http://localhost:5173"]
        assert config.log_level == "debug"

    def test_env_overrides_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"listen": {"port": 9000}}), "utf-8")
        config = load_config(path, env={
            "XCHAT_PORT": "9100",
            "XCHAT_GENERATOR_ENDPOINT": "http://alt:1234",
            "XCHAT_CORS_ORIGINS": "http://a.test, http://b.test",
        })
        assert config.port == 9100
        assert config.generator.endpoint == "http://alt:1234"
        assert config.cors_allowed_origins == ["http://a.test", "http://b.test"]

    def test_defaults_without_file(self):
        config = load_config(None, env={})
        assert config.port == 8080
        assert config.data_dir == "./data"

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(FileUnreadable):
            load_config(tmp_path / "absent.json", env={})

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json", "utf-8")
        with pytest.raises(FileUnreadable):
            load_config(path, env={})
