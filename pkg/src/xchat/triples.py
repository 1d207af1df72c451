"""Rule-based subject-predicate-object extraction.

Each sentence is split into clauses at conjunctions and internal
punctuation; each clause yields at most one triple. The clause is matched
against five shapes: plain transitive (SVO), double object (SVOO), object
plus complement (SVOC), intransitive (SV, kept for the record but never
graphed), and copular (SVP). Subjects, predicates, and objects keep their
surface spelling; normalization happens later at the graph layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import textpipe
from .errors import EmptyFile, FileUnreadable, MalformedLine
from .textpipe import (
    ADJ, ADV, AUX, CONJ, DET, LINK, NOUN, NUM, PART, PRON, PROPN, PUNCT, VERB,
    Sentence, Token,
)

SVO = "SVO"
SVOO = "SVOO"
SVOC = "SVOC"
SV = "SV"
SVP = "SVP"

PATTERNS = (SVO, SVOO, SVOC, SV, SVP)

_NOMINAL = (NOUN, PROPN)
_VERBAL = (VERB, AUX, LINK)


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str
    pattern: str
    method: str = "auto"
    provenance: str = ""

    def as_text(self) -> str:
        return f"({self.subject}, {self.predicate}, {self.object})"

    def to_record(self) -> dict:
        return {
            "subject": self.subject,
            "predicate": self.predicate,
            "object": self.object,
            "pattern": self.pattern,
            "method": self.method,
            "provenance": self.provenance,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Triple":
        return cls(
            subject=record["subject"],
            predicate=record["predicate"],
            object=record["object"],
            pattern=record["pattern"],
            method=record.get("method", "auto"),
            provenance=record.get("provenance", ""),
        )


@dataclass
class TripleSet:
    """Deduplicated triples in extraction order, indexed by document."""

    triples: list[Triple] = field(default_factory=list)
    by_doc: dict[str, list[int]] = field(default_factory=dict)
    _seen: set[tuple] = field(default_factory=set, repr=False)

    def add(self, triple: Triple) -> bool:
        key = (triple.subject, triple.predicate, triple.object, triple.provenance)
        if key in self._seen:
            return False
        self._seen.add(key)
        self.by_doc.setdefault(_doc_of(triple.provenance), []).append(len(self.triples))
        self.triples.append(triple)
        return True

    def for_doc(self, doc_id: str) -> list[Triple]:
        return [self.triples[i] for i in self.by_doc.get(doc_id, [])]

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)


def _doc_of(provenance: str) -> str:
    return provenance.split(":", 1)[0] if provenance else ""


def _clauses(tokens: tuple[Token, ...]) -> list[list[Token]]:
    """Split at conjunctions and punctuation; drop the separators."""
    out: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        if tok.pos in (CONJ, PUNCT):
            if current:
                out.append(current)
            current = []
        else:
            current.append(tok)
    if current:
        out.append(current)
    return out


def _nominal_run(tokens: list[Token], start: int) -> int:
    """Index one past the last contiguous NOUN/PROPN token from start."""
    i = start
    while i < len(tokens) and tokens[i].pos in _NOMINAL:
        i += 1
    return i


def _find_subject(tokens: list[Token]) -> tuple[list[Token], int] | None:
    """First pronoun or noun run followed (over adverbs) by a verbal token.

    Returns the subject tokens and the index of that verbal token.
    """
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.pos == PRON:
            run, after = [tok], i + 1
        elif tok.pos in _NOMINAL:
            end = _nominal_run(tokens, i)
            run, after = tokens[i:end], end
        else:
            i += 1
            continue
        k = after
        while k < len(tokens) and tokens[k].pos == ADV:
            k += 1
        if k < len(tokens) and tokens[k].pos in _VERBAL:
            return run, k
        i += 1
    return None


def _find_fronted(tokens: list[Token]) -> tuple[list[Token], int, int] | None:
    """Question-style clause: verbal token first, subject after it.

    Returns the subject tokens, the fronted verbal's index, and the index
    just past the subject, where the rest of the verb group may continue.
    """
    q = next((i for i, t in enumerate(tokens) if t.pos in (AUX, LINK)), None)
    if q is None:
        return None
    i = q + 1
    while i < len(tokens):
        tok = tokens[i]
        if tok.pos == PRON:
            return [tok], q, i + 1
        if tok.pos in _NOMINAL:
            end = _nominal_run(tokens, i)
            return tokens[i:end], q, end
        i += 1
    return None


def _verb_group(tokens: list[Token], start: int,
                fronted: Token | None = None) -> tuple[Token | None, int]:
    """Collect the verb group and return (main verb, object phase index).

    A verbal token may extend the group only after an auxiliary, a linking
    verb, or a form of "have"; adverbs and "not" are skipped inside the
    group. The main verb is the last VERB or LINK collected; a group of
    bare auxiliaries has no main verb and the clause yields nothing.
    """
    verbals: list[Token] = [fronted] if fronted is not None else []
    i = start
    while i < len(tokens):
        tok = tokens[i]
        if tok.pos == ADV or (tok.pos == PART and tok.lemma == "not"):
            i += 1
            continue
        if tok.pos in _VERBAL:
            last = verbals[-1] if verbals else None
            if last is None or last.pos in (AUX, LINK) or last.lemma == "have":
                verbals.append(tok)
                i += 1
                continue
        break
    main = next((t for t in reversed(verbals) if t.pos in (VERB, LINK)), None)
    return main, i


def _parse_np(tokens: list[Token], start: int,
              allow_of: bool = True) -> tuple[str, int] | None:
    """Noun phrase at start: a bare pronoun, or determiners/adjectives
    followed by a noun run, optionally extended once by an "of" phrase.

    Returns the surface head (without leading determiners) and the index
    past the phrase, or None when no noun phrase starts here.
    """
    if start >= len(tokens):
        return None
    if tokens[start].pos == PRON:
        return tokens[start].surface, start + 1
    i = start
    saw_det = False
    while i < len(tokens) and tokens[i].pos in (DET, ADJ, NUM):
        saw_det = True
        i += 1
    run: list[str] = []
    while i < len(tokens):
        tok = tokens[i]
        if tok.pos in _NOMINAL or (tok.pos == VERB and saw_det and not run):
            # A verb right after a determiner chain is a noun in disguise
            # (mistagged -ing/-s forms like "a morning person").
            run.append(tok.surface)
            i += 1
        else:
            break
    if not run:
        return None
    head = " ".join(run)
    if allow_of and i < len(tokens) and tokens[i].surface.lower() == "of":
        inner = _parse_np(tokens, i + 1, allow_of=False)
        if inner is not None:
            head = f"{head} of {inner[0]}"
            i = inner[1]
    return head, i


def _copular_complement(tokens: list[Token], start: int) -> str | None:
    """Complement of a linking verb: the last noun run, else the last adjective."""
    last_run: list[Token] | None = None
    i = start
    while i < len(tokens):
        if tokens[i].pos in _NOMINAL:
            end = _nominal_run(tokens, i)
            last_run = tokens[i:end]
            i = end
        else:
            i += 1
    if last_run:
        return " ".join(t.surface for t in last_run)
    last_adj = next((t for t in reversed(tokens[start:]) if t.pos == ADJ), None)
    return last_adj.surface if last_adj is not None else None


def _extract_clause(tokens: list[Token]) -> tuple[str, str, str, str] | None:
    """One (pattern, subject, predicate, object) for a clause, or None."""
    found = _find_subject(tokens)
    if found is not None:
        subject_run, group_start = found
        main, opos = _verb_group(tokens, group_start)
    else:
        fronted = _find_fronted(tokens)
        if fronted is None:
            return None
        subject_run, q, after = fronted
        main, opos = _verb_group(tokens, after, fronted=tokens[q])
    if main is None:
        return None
    subject = " ".join(t.surface for t in subject_run)

    if main.pos == LINK:
        complement = _copular_complement(tokens, opos)
        if complement is None:
            return SV, subject, main.surface, ""
        return SVP, subject, main.surface, complement

    predicate = main.surface
    if opos < len(tokens):
        tok = tokens[opos]
        if tok.pos == PART and tok.surface.lower() == "to" \
                and opos + 1 < len(tokens) and tokens[opos + 1].pos == VERB:
            infinitive = tokens[opos + 1]
            np = _parse_np(tokens, opos + 2)
            if np is not None:
                return SVO, subject, f"{predicate} to {infinitive.surface}", np[0]
            return SVO, subject, predicate, f"to {infinitive.surface}"
        if tok.pos == VERB and tok.surface.lower().endswith("ing"):
            return SVO, subject, predicate, tok.surface
    np = _parse_np(tokens, opos)
    if np is None:
        return SV, subject, predicate, ""
    obj, after_np = np
    if after_np < len(tokens):
        nxt = tokens[after_np]
        if nxt.pos == PRON or _parse_np(tokens, after_np) is not None:
            return SVOO, subject, predicate, obj
        if nxt.pos == ADJ:
            return SVOC, subject, predicate, obj
    return SVO, subject, predicate, obj


def classify_pattern(sentence: Sentence) -> str | None:
    """Pattern of the sentence's first extractable clause, if any."""
    for clause in _clauses(sentence.tokens):
        result = _extract_clause(clause)
        if result is not None:
            return result[0]
    return None


def extract_triples(sentence: Sentence) -> list[Triple]:
    """All triples of the sentence, one per extractable clause."""
    doc = sentence.doc_id if sentence.doc_id is not None else "adhoc"
    sent = sentence.sent_id if sentence.sent_id is not None else 0
    provenance = f"{doc}:{sent}"
    out: list[Triple] = []
    for clause in _clauses(sentence.tokens):
        result = _extract_clause(clause)
        if result is None:
            continue
        pattern, subject, predicate, obj = result
        out.append(Triple(subject=subject, predicate=predicate, object=obj,
                          pattern=pattern, method="auto", provenance=provenance))
    return out


def extract_corpus(corpus) -> TripleSet:
    """Extract every document's sentences into one deduplicated set."""
    triples = TripleSet()
    for doc in corpus.documents:
        for sentence in doc.sentences:
            for triple in extract_triples(sentence):
                triples.add(triple)
    return triples


def load_manual_triples(path: str | Path) -> list[Triple]:
    """Read curated triples from a TSV of subject, predicate, object[, note]."""
    p = Path(path)
    try:
        content = p.read_text("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    out: list[Triple] = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) < 3 or not all(fields[:3]):
            raise MalformedLine(
                f"{path}:{lineno}: expected subject<TAB>predicate<TAB>object")
        subject, predicate, obj = fields[0], fields[1], fields[2]
        words = predicate.split()
        linking = len(words) == 1 and textpipe.lemmatize(
            words[0], textpipe.LINK) in textpipe.LINKING_LEMMAS
        out.append(Triple(
            subject=subject, predicate=predicate, object=obj,
            pattern=SVP if linking else SVO, method="manual",
            provenance=f"manual:{p.name}:{lineno}"))
    if not out:
        raise EmptyFile(f"{path}: no triples")
    return out
