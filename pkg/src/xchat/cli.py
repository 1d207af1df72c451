"""Command-line interface.

The CLI builds data directories (ingest, index build, graph build) and is
otherwise a thin client of the HTTP service: `chat` talks to a running
server when --api-url is given and otherwise spins the service up
in-process over the local data directory.

Exit codes: 0 success, 1 usage error, 2 data error, 3 missing artifact.
"""

from __future__ import annotations

import json
import sys
import uuid
from importlib import resources
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import explain as explain_mod
from . import graph as graph_mod
from . import tfidf
from . import triples as triples_mod
from .config import load_config
from .errors import DataError, XchatError
from .responder import GENERATORS, LEVELS


@click.group()
@click.option("--data-dir", default="./data", show_default=True,
              help="directory holding the built corpus, index, and graph")
@click.pass_context
def cli(ctx: click.Context, data_dir: str) -> None:
    """Explainable retrieval chatbot over a small training corpus."""
    ctx.obj = {"data_dir": data_dir,
               "data_dir_set": ctx.get_parameter_source("data_dir")
               != click.core.ParameterSource.DEFAULT}


@cli.command()
@click.option("--text", "text_files", multiple=True, type=click.Path(),
              help="plain text file; paragraphs separated by blank lines")
@click.option("--dialogue", "dialogue_files", multiple=True, type=click.Path(),
              help="JSON list of {persona, utterances} dialogues")
@click.option("--topic", default=None, help="topic label for the ingested documents")
@click.pass_obj
def ingest(obj: dict, text_files: tuple[str, ...],
           dialogue_files: tuple[str, ...], topic: str | None) -> None:
    """Add documents to the corpus."""
    if not text_files and not dialogue_files:
        raise click.UsageError("nothing to ingest; pass --text or --dialogue")
    data_dir = Path(obj["data_dir"])
    if (data_dir / "corpus" / "manifest.json").is_file():
        corpus = corpus_mod.load_corpus(data_dir)
    else:
        corpus = corpus_mod.Corpus()
    added = 0
    for path in text_files:
        added += corpus_mod.ingest_text(corpus, path, topic=topic)
    for path in dialogue_files:
        added += corpus_mod.ingest_dialogue_json(corpus, path, topic=topic)
    corpus_mod.save_corpus(corpus, data_dir)
    click.echo(f"ingested {added} documents ({len(corpus.documents)} total)")


@cli.group()
def index() -> None:
    """Build and query the TF-IDF retrieval index."""


@index.command("build")
@click.pass_obj
def index_build(obj: dict) -> None:
    """Index the current corpus."""
    corpus = corpus_mod.load_corpus(obj["data_dir"])
    idx = tfidf.build_from_corpus(corpus)
    tfidf.save_index(idx, obj["data_dir"])
    click.echo(f"built {idx.index_id} over {idx.n_docs} documents "
               f"({len(idx.vocab)} terms)")


@index.command("query")
@click.argument("text")
@click.option("--k", default=3, show_default=True, help="number of hits")
@click.option("--json", "as_json", is_flag=True, help="emit JSON records")
@click.pass_obj
def index_query(obj: dict, text: str, k: int, as_json: bool) -> None:
    """Rank corpus documents against a query."""
    idx = tfidf.load_index(obj["data_dir"])
    hits = tfidf.top_k(text, k, idx)
    if as_json:
        click.echo(json.dumps([h.to_record() for h in hits], indent=2))
        return
    if not hits:
        click.echo("no matching documents")
        return
    for hit in hits:
        terms = ", ".join(f"{t}={c:.4f}" for t, c in hit.matched_terms[:5])
        click.echo(f"{hit.doc_id}\t{hit.score:.4f}\t{terms}")


def _packaged_fixture(name: str) -> str:
    return resources.files("xchat.fixtures").joinpath(name).read_text("utf-8")


@cli.command()
@click.option("--doc", "doc_id", default=None, help="limit to one document id")
@click.option("--golden", is_flag=True,
              help="extract the packaged sample and diff against its "
                   "reference triples (exit 2 under 8 of 10 matches)")
@click.option("--json", "as_json", is_flag=True, help="emit JSON records")
@click.pass_obj
def extract(obj: dict, doc_id: str | None, golden: bool, as_json: bool) -> None:
    """Extract subject-predicate-object triples."""
    if golden:
        _run_golden(as_json)
        return
    corpus = corpus_mod.load_corpus(obj["data_dir"])
    docs = [corpus.get_document(doc_id)] if doc_id else corpus.documents
    out: list[triples_mod.Triple] = []
    for doc in docs:
        for sentence in doc.sentences:
            out.extend(triples_mod.extract_triples(sentence))
    if as_json:
        click.echo(json.dumps([t.to_record() for t in out], indent=2))
        return
    for t in out:
        click.echo(f"{t.subject}\t{t.predicate}\t{t.object}"
                   f"\t{t.pattern}\t{t.provenance}")


def _run_golden(as_json: bool) -> None:
    text = _packaged_fixture("sample_paragraph.txt").strip()
    expected: list[tuple[str, str, str]] = []
    for line in _packaged_fixture("golden_triples.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        s, p, o = line.split("\t")[:3]
        expected.append((s, p, o))
    extracted: list[tuple[str, str, str]] = []
    from .textpipe import analyze_text
    for sentence in analyze_text(text, "sample"):
        for t in triples_mod.extract_triples(sentence):
            extracted.append((t.subject, t.predicate, t.object))
    got = set(extracted)
    matches = [trip for trip in expected if trip in got]
    missed = [trip for trip in expected if trip not in got]
    if as_json:
        click.echo(json.dumps({
            "matched": len(matches), "expected": len(expected),
            "missed": [list(m) for m in missed],
        }, indent=2))
    else:
        for trip in expected:
            mark = "ok  " if trip in got else "MISS"
            click.echo(f"{mark} ({trip[0]}, {trip[1]}, {trip[2]})")
        click.echo(f"matched {len(matches)}/{len(expected)}")
    if len(matches) < 8:
        raise DataError(f"only {len(matches)}/{len(expected)} reference "
                        f"triples extracted; expected at least 8")


@cli.group()
def graph() -> None:
    """Build, inspect, and export the entity graph."""


@graph.command("build")
@click.option("--manual", "manual_file", default=None, type=click.Path(),
              help="TSV of curated subject/predicate/object triples")
@click.pass_obj
def graph_build(obj: dict, manual_file: str | None) -> None:
    """Extract the corpus and assemble the graph."""
    corpus = corpus_mod.load_corpus(obj["data_dir"])
    auto = triples_mod.extract_corpus(corpus)
    manual = triples_mod.load_manual_triples(manual_file) if manual_file else []
    g = graph_mod.build_graph(auto, manual, corpus_hash=corpus.content_hash())
    graph_mod.save_graph(g, obj["data_dir"])
    click.echo(f"built {g.graph_id}: {len(g.nodes)} nodes, {len(g.edges)} edges "
               f"({len(g.skipped)} intransitive skipped)")


@graph.command("export")
@click.option("--format", "fmt", default="structured", show_default=True,
              type=click.Choice(["structured", "import-script"]))
@click.option("--out", default=None, type=click.Path(), help="output file")
@click.pass_obj
def graph_export(obj: dict, fmt: str, out: str | None) -> None:
    """Serialize the graph."""
    g = graph_mod.load_graph(obj["data_dir"])
    payload = graph_mod.export_graph(g, fmt)
    if out:
        Path(out).write_text(payload, "utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(payload, nl=False)


@graph.command("stats")
@click.option("--json", "as_json", is_flag=True, help="emit a JSON record")
@click.pass_obj
def graph_stats(obj: dict, as_json: bool) -> None:
    """Node, edge, and degree summary."""
    g = graph_mod.load_graph(obj["data_dir"])
    degrees = {g.nodes[nid].canonical: len(eids)
               for nid, eids in g.out_edges.items()}
    busiest = max(degrees.items(), key=lambda kv: (kv[1], kv[0]),
                  default=("", 0))
    record = {
        "graph_id": g.graph_id,
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "skipped_intransitive": len(g.skipped),
        "max_out_degree": {"canonical": busiest[0], "degree": busiest[1]},
    }
    if as_json:
        click.echo(json.dumps(record, indent=2))
    else:
        click.echo(f"graph {record['graph_id']}: {record['nodes']} nodes, "
                   f"{record['edges']} edges, "
                   f"{record['skipped_intransitive']} intransitive skipped")
        click.echo(f"max out-degree: {busiest[0]!r} ({busiest[1]})")


@cli.command()
@click.argument("text")
@click.option("--context", "context_file", default=None, type=click.Path(),
              help="file with one prior user turn per line")
@click.option("--k", default=3, show_default=True, help="provenance depth")
@click.option("--json", "as_json", is_flag=True, help="emit the structured report")
@click.pass_obj
def explain(obj: dict, text: str, context_file: str | None, k: int,
            as_json: bool) -> None:
    """Explain a hypothetical response against the built data."""
    from .snapshot import load_snapshot
    _, idx, g, _ = load_snapshot(obj["data_dir"])
    context: list[str] = []
    if context_file:
        context = [line.strip()
                   for line in Path(context_file).read_text("utf-8").splitlines()
                   if line.strip()]
    report = explain_mod.explain(text, context, idx, g, k=k)
    fmt = "structured" if as_json else "text"
    click.echo(explain_mod.render_report(report, fmt), nl=False)


@cli.command()
@click.option("--level", default="l3", show_default=True,
              type=click.Choice(list(LEVELS) + ["l1"]))
@click.option("--topic", default=None, help="topic restriction (required for l2)")
@click.option("--generator", default="retrieval", show_default=True,
              type=click.Choice(list(GENERATORS)))
@click.option("--session-id", default=None,
              help="session id to create (default: random)")
@click.option("--api-url", default=None,
              help="talk to a running server instead of going in-process")
@click.option("--json", "as_json", is_flag=True, help="one JSON object per turn")
@click.pass_obj
def chat(obj: dict, level: str, topic: str | None, generator: str,
         session_id: str | None, api_url: str | None, as_json: bool) -> None:
    """Chat over stdin/stdout; reads user turns line by line."""
    if api_url:
        import httpx
        client = httpx.Client(base_url=api_url, timeout=30.0)
    else:
        import os
        from fastapi.testclient import TestClient
        from .config import ServerConfig
        from .service import create_app
        config = ServerConfig(data_dir=obj["data_dir"])
        endpoint = os.environ.get("XCHAT_GENERATOR_ENDPOINT")
        if endpoint:
            config.generator.endpoint = endpoint
        client = TestClient(create_app(config))
    payload = {"level": level, "topic": topic, "generator": generator,
               "session_id": session_id or uuid.uuid4().hex[:12]}
    created = client.post("/api/sessions", json=payload)
    if created.status_code != 200:
        body = created.json()
        raise DataError(f"{body.get('code', 'error')}: {body.get('message', '')}")
    sid = created.json()["session_id"]
    if as_json:
        click.echo(json.dumps({"session_id": sid}))
    else:
        click.echo(f"session {sid}")
    for line in sys.stdin:
        text = line.strip()
        if not text:
            continue
        reply = client.post(f"/api/sessions/{sid}/messages", json={"text": text})
        if reply.status_code != 200:
            body = reply.json()
            raise DataError(f"{body.get('code', 'error')}: {body.get('message', '')}")
        body = reply.json()
        if as_json:
            click.echo(json.dumps(body))
        else:
            click.echo(f"bot> {body['response']}")


@cli.command()
@click.option("--config", "config_file", default=None, type=click.Path(),
              help="JSON config file; environment variables override it")
@click.pass_obj
def serve(obj: dict, config_file: str | None) -> None:
    """Run the HTTP service."""
    from .service import serve as run_server
    config = load_config(config_file)
    if obj.get("data_dir_set"):
        config.data_dir = obj["data_dir"]
    run_server(config)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, prog_name="xchat")
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except XchatError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
