"""Chat sessions and response generation.

Two generators are supported. The retrieval generator finds the training
utterance closest to the user's message and replies with the utterance
that follows it, which keeps every reply traceable to the corpus. The
external generator posts the conversation to a configured HTTP endpoint
and falls back to retrieval when that endpoint misbehaves. Every reply,
either way, gets an explanation report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import httpx

from .corpus import Corpus
from .errors import GeneratorUnavailable, IndexUnavailable
from .explain import ExplanationReport, explain
from .graph import OntologyGraph
from .tfidf import TfIdfIndex, build_index, top_k

FALLBACK_REPLY = "could you tell me more about that?"

LEVEL_RESTRICTED = "l2"
LEVEL_OPEN = "l3"
LEVELS = (LEVEL_RESTRICTED, LEVEL_OPEN)

GENERATOR_RETRIEVAL = "retrieval"
GENERATOR_EXTERNAL = "external"
GENERATORS = (GENERATOR_RETRIEVAL, GENERATOR_EXTERNAL)


@dataclass
class GeneratorConfig:
    endpoint: str | None = None
    timeout: float = 5.0
    max_history_turns: int = 6


@dataclass
class ChatSession:
    session_id: str
    level: str = LEVEL_OPEN
    topic: str | None = None
    generator: str = GENERATOR_RETRIEVAL
    history: list[dict] = field(default_factory=list)

    @property
    def bot_turns(self) -> int:
        return sum(1 for turn in self.history if turn["speaker"] == "bot")

    def user_texts(self) -> list[str]:
        return [turn["text"] for turn in self.history if turn["speaker"] == "user"]

    def to_record(self) -> dict:
        return {
            "session_id": self.session_id,
            "level": self.level,
            "topic": self.topic,
            "generator": self.generator,
            "history": self.history,
        }

    @classmethod
    def from_record(cls, record: dict) -> "ChatSession":
        return cls(
            session_id=record["session_id"],
            level=record.get("level", LEVEL_OPEN),
            topic=record.get("topic"),
            generator=record.get("generator", GENERATOR_RETRIEVAL),
            history=list(record.get("history", [])))


def _utterance_ref(doc_id: str, utt_idx: int) -> str:
    return f"{doc_id}#u{utt_idx:04d}"


def _parse_ref(ref: str) -> tuple[str, int]:
    doc_id, _, tail = ref.rpartition("#u")
    return doc_id, int(tail)


def build_utterance_index(corpus: Corpus) -> TfIdfIndex:
    """TF-IDF index over single utterances, for reply retrieval.

    Utterance ids embed a zero-padded position so lexicographic ties
    resolve in document order, then utterance order.
    """
    from .tfidf import terms_of_text
    term_lists: dict[str, list[str]] = {}
    topics: dict[str, tuple[str, ...]] = {}
    for doc in corpus.documents:
        for i, utterance in enumerate(doc.utterances):
            ref = _utterance_ref(doc.doc_id, i)
            term_lists[ref] = terms_of_text(utterance)
            topics[ref] = doc.topics
    return build_index(term_lists, topics=topics, corpus_hash=corpus.content_hash())


def _next_response_id(session: ChatSession) -> str:
    return f"{session.session_id}:{session.bot_turns + 1}"


def respond_retrieval(session: ChatSession, message: str,
                      utterance_index: TfIdfIndex,
                      corpus: Corpus) -> tuple[str, str]:
    """Reply with the utterance following the best match for the message.

    The fallback prompt is used when nothing matches or the best match is
    the last utterance of its dialogue. Restricted (l2) sessions only
    search utterances of documents carrying the session topic.
    """
    if utterance_index is None or utterance_index.n_docs == 0:
        raise IndexUnavailable("no utterance index; rebuild the data directory")
    topic = session.topic if session.level == LEVEL_RESTRICTED else None
    hits = top_k(message, 1, utterance_index, topic=topic)
    reply = FALLBACK_REPLY
    if hits and hits[0].score > 0.0:
        doc_id, utt_idx = _parse_ref(hits[0].doc_id)
        utterances = corpus.get_document(doc_id).utterances
        if utt_idx + 1 < len(utterances):
            reply = utterances[utt_idx + 1]
    response_id = _next_response_id(session)
    session.history.append(
        {"speaker": "bot", "text": reply, "response_id": response_id})
    return reply, response_id


def respond_external(session: ChatSession, message: str,
                     config: GeneratorConfig) -> tuple[str, str]:
    """POST the message and recent history to the configured generator.

    Anything but a 200 with a JSON object carrying a "text" string raises
    GeneratorUnavailable.
    """
    if not config.endpoint:
        raise GeneratorUnavailable("no external generator endpoint configured")
    recent = session.history[-config.max_history_turns:]
    payload = {
        "session_id": session.session_id,
        "history": [{"speaker": t["speaker"], "text": t["text"]} for t in recent],
        "message": message,
    }
    url = config.endpoint.rstrip("/") + "/generate"
    try:
        response = httpx.post(url, json=payload, timeout=config.timeout)
    except httpx.HTTPError as exc:
        raise GeneratorUnavailable(f"generator request failed: {exc}") from exc
    if response.status_code != 200:
        raise GeneratorUnavailable(
            f"generator returned status {response.status_code}")
    try:
        body = response.json()
    except json.JSONDecodeError as exc:
        raise GeneratorUnavailable("generator returned invalid JSON") from exc
    text = body.get("text") if isinstance(body, dict) else None
    if not isinstance(text, str):
        raise GeneratorUnavailable('generator reply must carry a "text" string')
    response_id = _next_response_id(session)
    session.history.append(
        {"speaker": "bot", "text": text, "response_id": response_id})
    return text, response_id


@dataclass
class ResponderDeps:
    """Everything a conversation turn needs, bundled for the service and CLI."""
    corpus: Corpus
    index: TfIdfIndex
    utterance_index: TfIdfIndex
    graph: OntologyGraph
    generator_config: GeneratorConfig = field(default_factory=GeneratorConfig)
    report_store: "ReportStore | None" = None


def converse(session: ChatSession, message: str,
             deps: ResponderDeps) -> tuple[str, str, ExplanationReport]:
    """One full turn: append the user message, generate a reply, explain
    it, persist the report, and return (reply, response_id, report).

    An external-generator failure falls back to retrieval and the report
    records the generator as "fallback".
    """
    session.history.append({"speaker": "user", "text": message})
    generator_used = session.generator
    if session.generator == GENERATOR_EXTERNAL:
        try:
            reply, response_id = respond_external(
                session, message, deps.generator_config)
        except GeneratorUnavailable:
            generator_used = "fallback"
            reply, response_id = respond_retrieval(
                session, message, deps.utterance_index, deps.corpus)
    else:
        reply, response_id = respond_retrieval(
            session, message, deps.utterance_index, deps.corpus)
    context = session.user_texts()[-2:]
    topic = session.topic if session.level == LEVEL_RESTRICTED else None
    report = explain(reply, context, deps.index, deps.graph,
                     response_id=response_id, generator=generator_used,
                     topic=topic)
    if deps.report_store is not None:
        deps.report_store.save(report)
    return reply, response_id, report


class ReportStore:
    """Explanation reports as one JSON file per response id."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, response_id: str) -> Path:
        return self.root / (response_id.replace(":", "_") + ".json")

    def save(self, report: ExplanationReport) -> Path:
        path = self._path(report.response_id)
        path.write_text(json.dumps(report.to_record(), sort_keys=True,
                                   ensure_ascii=False, indent=2) + "\n", "utf-8")
        return path

    def get(self, response_id: str) -> dict | None:
        path = self._path(response_id)
        if not path.is_file():
            return None
        return json.loads(path.read_text("utf-8"))

    def list_ids(self) -> list[str]:
        return sorted(p.stem.replace("_", ":", 1) for p in self.root.glob("*.json"))
