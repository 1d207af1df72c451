"""Rule-based text analysis: sentence split, tokenize, tag, lemmatize.

The pipeline is lexicon-driven and fully deterministic. Lexicons ship as
TSV files under ``xchat/data`` and are loaded once per process. There are
no statistical models anywhere in this module.
"""

from __future__ import annotations

import re
import string
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import MalformedLine, UnknownCharacterClass

PRON = "PRON"
NOUN = "NOUN"
PROPN = "PROPN"
VERB = "VERB"
AUX = "AUX"
LINK = "LINK"
ADJ = "ADJ"
ADV = "ADV"
DET = "DET"
PREP = "PREP"
PART = "PART"
CONJ = "CONJ"
NUM = "NUM"
PUNCT = "PUNCT"
OTHER = "OTHER"

POS_TAGS = frozenset({
    PRON, NOUN, PROPN, VERB, AUX, LINK, ADJ, ADV, DET, PREP, PART, CONJ,
    NUM, PUNCT, OTHER,
})

# SVP predicates must lemmatize into this set.
LINKING_LEMMAS = frozenset({
    "be", "seem", "become", "feel", "look", "sound", "get", "stay", "remain",
})

# Tags that never carry content for matching or indexing purposes.
FUNCTION_POS = frozenset({DET, PREP, PART, AUX, CONJ, PUNCT})

_ABBREVIATIONS = frozenset({
    "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "vs.",
    "etc.", "e.g.", "i.e.", "no.",
})

# Fixed contraction table; unseen apostrophe forms stay single tokens.
_CONTRACTIONS = {
    "didn't": ("did", "not"),
    "i'm": ("i", "am"),
    "that's": ("that", "is"),
    "can't": ("can", "not"),
    "'ve": ("have",),
}

_NUM_RE = re.compile(r"^\d+(?:[.,]\d+)*$")


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str
    index: int


@dataclass(frozen=True)
class Sentence:
    raw: str
    tokens: tuple[Token, ...]
    doc_id: str | None = None
    sent_id: int | None = None


@dataclass(frozen=True)
class Lexicon:
    closed_class: dict[str, str]
    verb_stems: frozenset[str]
    irregular: dict[str, str]


def _read_data_lines(name: str) -> list[str]:
    text = resources.files("xchat.data").joinpath(name).read_text("utf-8")
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


@lru_cache(maxsize=1)
def load_lexicon() -> Lexicon:
    closed: dict[str, str] = {}
    for line in _read_data_lines("closed_class.tsv"):
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in POS_TAGS:
            raise MalformedLine(f"closed_class.tsv: bad entry {line!r}")
        closed[parts[0].lower()] = parts[1]
    stems = frozenset(line.split("\t")[0].lower() for line in _read_data_lines("verbs.tsv"))
    irregular: dict[str, str] = {}
    for line in _read_data_lines("irregular_lemmas.tsv"):
        parts = line.split("\t")
        if len(parts) != 2:
            raise MalformedLine(f"irregular_lemmas.tsv: bad entry {line!r}")
        irregular[parts[0].lower()] = parts[1].lower()
    return Lexicon(closed_class=closed, verb_stems=stems, irregular=irregular)


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    return frozenset(w.lower() for w in _read_data_lines("stopwords.txt"))


def _is_punct_char(ch: str) -> bool:
    return ch in string.punctuation or unicodedata.category(ch).startswith("P")


def _ends_with_abbreviation(fragment: str) -> bool:
    words = fragment.split()
    return bool(words) and words[-1].lower() in _ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Split raw text into sentence strings.

    Boundaries sit after runs of ``.``/``?``/``!`` that are followed by
    whitespace or end of line; a short abbreviation list suppresses false
    stops. Newlines always terminate a sentence.
    """
    sentences: list[str] = []
    for line in text.split("\n"):
        line = line.strip()
        if not line:
            continue
        start = 0
        i = 0
        n = len(line)
        while i < n:
            if line[i] not in ".?!":
                i += 1
                continue
            j = i
            while j + 1 < n and line[j + 1] in ".?!":
                j += 1
            if j + 1 < n and not line[j + 1].isspace():
                i = j + 1
                continue
            candidate = line[start:j + 1].strip()
            if line[i] == "." and i == j and _ends_with_abbreviation(candidate):
                i = j + 1
                continue
            if candidate:
                sentences.append(candidate)
            start = j + 1
            i = j + 1
        tail = line[start:].strip()
        if tail:
            sentences.append(tail)
    return sentences


def _match_case(original: str, parts: tuple[str, ...]) -> list[str]:
    out = list(parts)
    if original[:1].isupper() and out[0][:1].isalpha():
        out[0] = out[0][0].upper() + out[0][1:]
    return out


def _expand_contraction(core: str) -> list[str] | None:
    low = core.lower()
    if low in _CONTRACTIONS:
        return _match_case(core, _CONTRACTIONS[low])
    if low.endswith("'ve") and len(low) > 3:
        return [core[:-3], "have"]
    return None


def tokenize(raw: str) -> list[str]:
    """Split a sentence into token surfaces.

    Whitespace splits first; leading/trailing punctuation detaches into
    its own tokens; the fixed contraction table expands known apostrophe
    forms and leaves the rest intact.
    """
    out: list[str] = []
    for chunk in raw.split():
        chunk = chunk.replace("’", "'").replace("‘", "'")
        expanded = _expand_contraction(chunk)
        if expanded is not None:
            out.extend(expanded)
            continue
        lead: list[str] = []
        trail: list[str] = []
        core = chunk
        while core and _is_punct_char(core[0]) and core[0] != "'":
            lead.append(core[0])
            core = core[1:]
        while core and _is_punct_char(core[-1]) and core[-1] != "'":
            trail.append(core[-1])
            core = core[:-1]
        expanded = _expand_contraction(core) if core else None
        out.extend(lead)
        if expanded is not None:
            out.extend(expanded)
        elif core:
            out.append(core)
        out.extend(reversed(trail))
    return out


def _verb_stem_for_s_form(low: str, lexicon: Lexicon) -> str | None:
    if low.endswith("ies") and len(low) > 4 and low[:-3] + "y" in lexicon.verb_stems:
        return low[:-3] + "y"
    if low.endswith("es") and low[:-2] in lexicon.verb_stems:
        return low[:-2]
    if low[:-1] in lexicon.verb_stems:
        return low[:-1]
    return None


def _tag_one(surface: str, index: int, lexicon: Lexicon) -> str:
    if all(_is_punct_char(c) for c in surface):
        return PUNCT
    if _NUM_RE.match(surface):
        return NUM
    if not any(c.isalnum() for c in surface):
        raise UnknownCharacterClass(f"cannot classify token {surface!r}")
    low = surface.lower()
    if low in lexicon.closed_class:
        return lexicon.closed_class[low]
    if low in lexicon.verb_stems:
        return VERB
    if "-" in low and any(c.isalpha() for c in low):
        # hyphenated compound modifiers read as adjectives ("all-time")
        return ADJ
    if "'" in low:
        # apostrophe form outside the contraction table: skip conservatively
        return OTHER
    if low.endswith("ly") and len(low) > 3:
        return ADV
    if low.endswith("ing") and len(low) > 4:
        return VERB
    if low.endswith("ed") and len(low) > 3:
        return VERB
    if low.endswith("s") and not low.endswith("ss") and len(low) > 3 \
            and _verb_stem_for_s_form(low, lexicon):
        return VERB
    if index > 0 and surface[:1].isupper():
        return PROPN
    return NOUN


def _restore_verb_stem(stem: str, lexicon: Lexicon, fallback: str) -> str:
    if stem in lexicon.verb_stems:
        return stem
    if stem + "e" in lexicon.verb_stems:
        return stem + "e"
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[:-1] in lexicon.verb_stems:
        return stem[:-1]
    return stem if len(stem) >= 3 else fallback


def _verb_lemma(low: str, lexicon: Lexicon) -> str:
    if low in lexicon.verb_stems:
        return low
    if low.endswith("ing") and len(low) >= 5:
        return _restore_verb_stem(low[:-3], lexicon, low)
    if low.endswith("ied") and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith("ed") and len(low) > 4:
        return _restore_verb_stem(low[:-2], lexicon, low)
    if low.endswith("ies") and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith("es") and low[:-2] in lexicon.verb_stems:
        return low[:-2]
    if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
        return low[:-1]
    return low


def _noun_lemma(low: str) -> str:
    if low.endswith("ies") and len(low) > 4:
        return low[:-3] + "y"
    if low.endswith("sses") and len(low) > 4:
        return low[:-2]
    if low.endswith(("ches", "shes", "xes", "zes")) and len(low) > 4:
        return low[:-2]
    if low.endswith("s") and len(low) > 3 \
            and not low.endswith(("ss", "us", "is", "'s")):
        return low[:-1]
    return low


def lemmatize(surface: str, pos: str = NOUN, lexicon: Lexicon | None = None) -> str:
    """Lowercased lemma for a surface form, guided by the bundled lexicon.

    Irregular forms resolve through the table first; the suffix rules are
    idempotent (lemmatize(lemmatize(w)) == lemmatize(w)).
    """
    lex = lexicon or load_lexicon()
    low = surface.lower()
    if low in lex.irregular:
        return lex.irregular[low]
    if pos in (VERB, LINK, AUX):
        return _verb_lemma(low, lex)
    if pos in (NOUN, PROPN):
        return _noun_lemma(low)
    return low


def pos_tag(surfaces: list[str], lexicon: Lexicon | None = None) -> list[Token]:
    """Tag token surfaces in sentence order.

    Priority: punctuation/number classes, closed-class lexicon, verb
    lexicon, suffix heuristics, capitalized non-initial proper noun,
    then the noun default.
    """
    lex = lexicon or load_lexicon()
    tokens = []
    for i, surface in enumerate(surfaces):
        pos = _tag_one(surface, i, lex)
        tokens.append(Token(surface=surface, lemma=lemmatize(surface, pos, lex), pos=pos, index=i))
    return tokens


def analyze_sentence(raw: str, doc_id: str | None = None, sent_id: int | None = None,
                     lexicon: Lexicon | None = None) -> Sentence:
    return Sentence(raw=raw, tokens=tuple(pos_tag(tokenize(raw), lexicon)),
                    doc_id=doc_id, sent_id=sent_id)


def analyze_text(text: str, doc_id: str | None = None,
                 lexicon: Lexicon | None = None) -> list[Sentence]:
    """Sentence objects for a paragraph, with contiguous sent_ids from 0."""
    return [analyze_sentence(raw, doc_id, i, lexicon)
            for i, raw in enumerate(split_sentences(text))]


def content_lemmas(text: str, lexicon: Lexicon | None = None) -> list[str]:
    """Lemmas of the content tokens of a phrase, in order.

    Function words (determiners, prepositions, particles, auxiliaries,
    conjunctions) and punctuation drop out; pronouns and linking verbs
    count as content.
    """
    return [t.lemma for t in pos_tag(tokenize(text), lexicon)
            if t.pos not in FUNCTION_POS]


def canonical_phrase(text: str, lexicon: Lexicon | None = None) -> str:
    """Canonical lemma form of an entity phrase ("at animal shelter" ->
    "animal shelter"). Falls back to all lemmas if nothing survives the
    content filter."""
    lemmas = content_lemmas(text, lexicon)
    if not lemmas:
        lemmas = [t.lemma for t in pos_tag(tokenize(text), lexicon) if t.pos != PUNCT]
    return " ".join(lemmas)
