"""Tokenization, open/closed word classes and the base text counts.

The three counts every other module works from are the number of words
``W``, the number of sentences ``S`` and the number of function (closed
class) words ``F``.  Ratios are kept as :class:`fractions.Fraction` so that
constraint checks downstream never touch floating point.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

__all__ = [
    "WordClass",
    "Token",
    "Sentence",
    "Document",
    "MetricsSummary",
    "Lexicon",
    "LexiconError",
    "EmptyDocumentError",
    "load_lexicon",
    "default_lexicon",
    "tokenize",
    "classify_words",
    "compute_metrics",
    "measure_text",
]


class LexiconError(RuntimeError):
    """The function-word lexicon could not be loaded."""


class EmptyDocumentError(ValueError):
    """A ratio was requested for a document with no sentences or words."""


class WordClass(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class Token:
    surface: str
    is_word: bool
    word_class: Optional[WordClass] = None

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if not self.is_word and self.word_class is not None:
            raise ValueError(f"punctuation token {self.surface!r} cannot carry a word class")

    @property
    def is_closed(self) -> bool:
        return self.word_class is WordClass.CLOSED


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    text: str

    @property
    def word_count(self) -> int:
        return sum(1 for t in self.tokens if t.is_word)

    @property
    def words(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]

    @property
    def closed_count(self) -> int:
        return sum(1 for t in self.tokens if t.is_closed)

    @property
    def is_classified(self) -> bool:
        return all(t.word_class is not None for t in self.tokens if t.is_word)


@dataclass(frozen=True)
class Document:
    """Sentence-segmented text.

    ``gaps`` holds the verbatim text around the sentences: ``gaps[0]`` is
    leading whitespace, ``gaps[k]`` separates sentence ``k-1`` from ``k``
    and ``gaps[-1]`` trails the last sentence, so ``render`` can rebuild the
    source exactly or with some sentences swapped out.
    """

    sentences: tuple[Sentence, ...]
    source_text: str
    gaps: tuple[str, ...] = field(default=("",))

    def __post_init__(self):
        if len(self.gaps) != len(self.sentences) + 1:
            raise ValueError("gaps must have one more entry than sentences")

    def __len__(self) -> int:
        return len(self.sentences)

    def sentence(self, index: int) -> Sentence:
        """Return sentence ``index`` counted from 1."""
        if not 1 <= index <= len(self.sentences):
            raise IndexError(f"sentence index {index} outside 1..{len(self.sentences)}")
        return self.sentences[index - 1]

    def render(self, texts: Optional[Sequence[Optional[str]]] = None) -> str:
        """Rebuild the text, optionally with replacement sentence texts.

        A ``None`` entry keeps the original sentence; an empty string drops
        the sentence together with the gap that follows it.
        """
        if texts is None:
            texts = [None] * len(self.sentences)
        if len(texts) != len(self.sentences):
            raise ValueError("one replacement slot per sentence expected")
        kept = []
        for k, (sent, new) in enumerate(zip(self.sentences, texts)):
            body = sent.text if new is None else new
            if body != "":
                kept.append([body, self.gaps[k + 1]])
        if kept:
            kept[-1][1] = self.gaps[-1]
        return self.gaps[0] + "".join(body + gap for body, gap in kept)

    def normalized(self) -> str:
        return " ".join(" ".join(s.text.split()) for s in self.sentences)

    @property
    def is_classified(self) -> bool:
        return all(s.is_classified for s in self.sentences)


@dataclass(frozen=True)
class MetricsSummary:
    W: int
    S: int
    F: int

    def __post_init__(self):
        if not 0 <= self.F <= self.W:
            raise ValueError(f"need 0 <= F <= W, got F={self.F}, W={self.W}")
        if self.W >= 1 and self.S < 1:
            raise ValueError("a text with words has at least one sentence")

    @property
    def avg_sentence_length(self) -> Fraction:
        if self.S == 0:
            raise EmptyDocumentError("average sentence length undefined for S=0")
        return Fraction(self.W, self.S)

    @property
    def lexical_density_ratio(self) -> Fraction:
        if self.W == 0:
            raise EmptyDocumentError("lexical density undefined for W=0")
        return Fraction(self.F, self.W)

    def shifted(self, w: int, s: int, f: int) -> "MetricsSummary":
        return MetricsSummary(W=self.W + w, S=self.S + s, F=self.F + f)

    def as_dict(self) -> dict:
        out = {"W": self.W, "S": self.S, "F": self.F}
        out["avg_sentence_length"] = str(self.avg_sentence_length) if self.S else None
        out["lexical_density"] = str(self.lexical_density_ratio) if self.W else None
        return out


# Irregular past participles; regular ones are caught by the "-ed" ending.
_PARTICIPLES = frozenset(
    """been done gone seen made had got gotten said known taken given come
    become begun run found thought brought bought told left kept felt heard
    held led lost met paid put read sent set sat spent stood understood won
    written eaten fallen forgotten chosen spoken broken driven ridden risen
    shown grown thrown drawn flown worn torn sworn blown hidden stolen woken
    frozen beaten bitten""".split()
)
_HAVE_FORMS = frozenset({"have", "has", "had", "having", "'ve", "'d"})
_ADVERB_SKIP = frozenset({"not", "never", "just", "already", "always", "also", "ever", "n't"})


@dataclass(frozen=True)
class Lexicon:
    """Closed-class word list plus the auxiliary-"have" rule.

    Forms of *have* that are not in ``words`` count as CLOSED when the next
    word (skipping negation and ``-ly`` adverbs) looks like a past
    participle, and OPEN otherwise.  Set ``auxiliary_have=False`` for plain
    lookup.
    """

    words: frozenset[str]
    auxiliary_have: bool = True

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def classify(self, words: Sequence[str]) -> list[WordClass]:
        lowered = [w.lower() for w in words]
        classes = []
        for k, w in enumerate(lowered):
            if w in self.words:
                classes.append(WordClass.CLOSED)
            elif self.auxiliary_have and w in _HAVE_FORMS and _participle_follows(lowered, k):
                classes.append(WordClass.CLOSED)
            else:
                classes.append(WordClass.OPEN)
        return classes


def _participle_follows(words: Sequence[str], k: int) -> bool:
    for nxt in words[k + 1:]:
        if nxt in _ADVERB_SKIP or (nxt.endswith("ly") and len(nxt) > 4):
            continue
        return nxt in _PARTICIPLES or (nxt.endswith("ed") and len(nxt) > 3)
    return False


def load_lexicon(path: Union[str, Path, None] = None, auxiliary_have: bool = True) -> Lexicon:
    """Read a lexicon file: one word per line, ``#`` starts a comment."""
    try:
        if path is None:
            text = resources.files("paraselect.data").joinpath("function_words.txt").read_text("utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc
    words = set()
    for line in text.splitlines():
        entry = line.split("#", 1)[0].strip().lower()
        if entry:
            words.add(entry)
    return Lexicon(frozenset(words), auxiliary_have=auxiliary_have)


_DEFAULT: Optional[Lexicon] = None


def default_lexicon() -> Lexicon:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_lexicon()
    return _DEFAULT


_SENTENCE_END = re.compile(r"[.!?]+[\"')\]’”]*(?=\s|$)")
_TOKEN = re.compile(r"\d+(?:[.,:]\d+)+|\w+(?:['’-]\w+)*|[^\w\s]")


def _split_tokens(text: str) -> tuple[Token, ...]:
    out = []
    for m in _TOKEN.finditer(text):
        surface = m.group()
        is_word = surface[0].isalnum() or surface[0] == "_"
        out.append(Token(surface, is_word))
    return tuple(out)


def tokenize(raw: str) -> Document:
    """Split ``raw`` into sentences and tokens (unclassified).

    A sentence ends at ``.``, ``!`` or ``?`` (optionally followed by closing
    quotes or brackets) when whitespace or the end of text comes next.
    Fragments without any word are folded into the neighbouring sentence.
    """
    chunks: list[tuple[int, int]] = []
    start = None
    pos = 0
    n = len(raw)
    while pos < n:
        if start is None:
            if raw[pos].isspace():
                pos += 1
                continue
            start = pos
        m = _SENTENCE_END.match(raw, pos)
        if m and m.end() > pos:
            chunks.append((start, m.end()))
            start = None
            pos = m.end()
        else:
            pos += 1
    if start is not None:
        end = len(raw.rstrip())
        chunks.append((start, end))

    merged: list[list[int]] = []
    pending_start = None
    for a, b in chunks:
        has_word = any(t.is_word for t in _split_tokens(raw[a:b]))
        if not has_word:
            if merged:
                merged[-1][1] = b
            elif pending_start is None:
                pending_start = a
            continue
        if pending_start is not None:
            a, pending_start = pending_start, None
        merged.append([a, b])
    if pending_start is not None and not merged:
        # punctuation only: no sentences
        return Document((), raw, (raw,))

    sentences = []
    gaps = []
    prev_end = 0
    for a, b in merged:
        gaps.append(raw[prev_end:a])
        text = raw[a:b]
        sentences.append(Sentence(_split_tokens(text), text))
        prev_end = b
    gaps.append(raw[prev_end:])
    return Document(tuple(sentences), raw, tuple(gaps))


def classify_words(doc: Document, lexicon: Optional[Lexicon] = None) -> Document:
    """Return a copy of ``doc`` with every word token marked OPEN or CLOSED."""
    lexicon = lexicon or default_lexicon()
    sentences = []
    for sent in doc.sentences:
        classes = iter(lexicon.classify([t.surface for t in sent.tokens if t.is_word]))
        tokens = tuple(
            replace(t, word_class=next(classes)) if t.is_word else t for t in sent.tokens
        )
        sentences.append(replace(sent, tokens=tokens))
    return replace(doc, sentences=tuple(sentences))


def compute_metrics(doc: Document) -> MetricsSummary:
    if not doc.is_classified:
        raise ValueError("document must be classified before computing metrics")
    W = sum(s.word_count for s in doc.sentences)
    F = sum(s.closed_count for s in doc.sentences)
    return MetricsSummary(W=W, S=len(doc.sentences), F=F)


def measure_text(raw: str, lexicon: Optional[Lexicon] = None) -> tuple[Document, MetricsSummary]:
    """Tokenize, classify and count ``raw`` in one go."""
    doc = classify_words(tokenize(raw), lexicon)
    return doc, compute_metrics(doc)


def iter_words(sentences: Iterable[Sentence]) -> Iterable[Token]:
    for s in sentences:
        yield from s.words
