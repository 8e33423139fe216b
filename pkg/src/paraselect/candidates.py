"""Paraphrase candidates, their coefficients and the candidate file format.

A candidate file is JSON::

    {"document": "...",
     "candidates": [{"sentence": 1, "replacement": "...",
                     "f": -2, "w": -2, "s": 0,          # optional
                     "meaning_class": "closed_only",    # optional
                     "discourse_effect": 0}]}           # optional

Candidates are numbered per sentence in file order.  Coefficients given in
the file are checked against the ones derived from the text; the derived
value wins.
"""

from __future__ import annotations

import json
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cost_model import MeaningClass, classify_meaning_effect, discourse_effect
from .text_metrics import (
    Document,
    Lexicon,
    MetricsSummary,
    Sentence,
    classify_words,
    compute_metrics,
    default_lexicon,
    tokenize,
)

__all__ = [
    "ParaphraseCandidate",
    "CandidateSet",
    "ValidationReport",
    "CandidateFileError",
    "NullParaphraseWarning",
    "CoefficientConflictWarning",
    "derive_coefficients",
    "make_candidate",
    "build_candidate_set",
    "validate_candidate_set",
    "load_candidates",
    "parse_candidates",
    "candidate_set_to_dict",
    "candidate_set_from_dict",
    "save_candidates",
]

Key = tuple[int, int]


class NullParaphraseWarning(UserWarning):
    pass


class CoefficientConflictWarning(UserWarning):
    pass


class CandidateFileError(ValueError):
    """Malformed candidate input; ``location`` says where."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class ParaphraseCandidate:
    sentence: int
    index: int
    replacement: str
    f: int
    w: int
    s: int
    meaning_class: MeaningClass = MeaningClass.NONE
    discourse_effect: int = 0

    @property
    def key(self) -> Key:
        return (self.sentence, self.index)

    @property
    def label(self) -> str:
        return f"p{self.sentence}{self.index}" if max(self.key) < 10 else f"p{self.sentence}_{self.index}"

    @property
    def deltas(self) -> tuple[int, int, int]:
        return (self.f, self.w, self.s)


@dataclass(frozen=True)
class CandidateSet:
    document: Document
    candidates: tuple[ParaphraseCandidate, ...]
    lexicon: Lexicon = field(default_factory=default_lexicon, compare=False)
    allow_deletion: bool = False

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self):
        return iter(self.candidates)

    @cached_property
    def base_metrics(self) -> MetricsSummary:
        return compute_metrics(self.document)

    @cached_property
    def by_key(self) -> dict[Key, ParaphraseCandidate]:
        return {c.key: c for c in self.candidates}

    def by_sentence(self) -> dict[int, list[ParaphraseCandidate]]:
        groups: dict[int, list[ParaphraseCandidate]] = defaultdict(list)
        for c in self.candidates:
            groups[c.sentence].append(c)
        return dict(sorted(groups.items()))

    @property
    def keys(self) -> list[Key]:
        return sorted(c.key for c in self.candidates)


def derive_coefficients(
    original: Sentence, replacement_text: str, lexicon: Optional[Lexicon] = None
) -> tuple[int, int, int]:
    """Return ``(f, w, s)``: change in function words, words and sentences."""
    lexicon = lexicon or default_lexicon()
    if not original.is_classified:
        original = classify_words(Document((original,), original.text, ("", "")), lexicon).sentences[0]
    repl = classify_words(tokenize(replacement_text), lexicon)
    w = sum(s.word_count for s in repl.sentences) - original.word_count
    f = sum(s.closed_count for s in repl.sentences) - original.closed_count
    s = len(repl.sentences) - 1
    if len(repl.sentences) == 1 and repl.sentences[0].tokens == original.tokens:
        warnings.warn(
            f"replacement is identical to the original: {replacement_text!r}",
            NullParaphraseWarning,
            stacklevel=2,
        )
    return f, w, s


def make_candidate(
    document: Document,
    sentence: int,
    index: int,
    replacement: str,
    lexicon: Optional[Lexicon] = None,
    meaning_class: Union[str, MeaningClass, None] = None,
    discourse: int = 0,
) -> ParaphraseCandidate:
    """Candidate with coefficients (and meaning class, if not given) derived from text."""
    lexicon = lexicon or default_lexicon()
    original = document.sentence(sentence)
    f, w, s = derive_coefficients(original, replacement, lexicon)
    if meaning_class is None:
        meaning_class = classify_meaning_effect(original, replacement, lexicon)
    return ParaphraseCandidate(
        sentence, index, replacement, f, w, s, MeaningClass.parse(meaning_class), discourse
    )


def build_candidate_set(
    text: str,
    replacements: Iterable[Union[tuple[int, str], Mapping]],
    lexicon: Optional[Lexicon] = None,
    allow_deletion: bool = False,
) -> CandidateSet:
    """Convenience constructor from raw text and ``(sentence, replacement)`` pairs."""
    data = {"document": text, "candidates": []}
    for item in replacements:
        if isinstance(item, Mapping):
            data["candidates"].append(dict(item))
        else:
            i, repl = item
            data["candidates"].append({"sentence": i, "replacement": repl})
    return candidate_set_from_dict(data, lexicon, allow_deletion, source="<memory>")


@dataclass
class ValidationReport:
    mismatches: list[tuple[Key, tuple[int, int, int], tuple[int, int, int]]] = field(default_factory=list)
    duplicates: list[Key] = field(default_factory=list)
    out_of_range: list[Key] = field(default_factory=list)
    bad_numbering: list[int] = field(default_factory=list)
    min_sentence_count: Optional[int] = None

    @property
    def sentence_count_risk(self) -> bool:
        return self.min_sentence_count is not None and self.min_sentence_count < 1

    @property
    def ok(self) -> bool:
        return not (
            self.mismatches or self.duplicates or self.out_of_range or self.bad_numbering
            or self.sentence_count_risk
        )

    def messages(self) -> list[str]:
        out = []
        for key, stored, derived in self.mismatches:
            out.append(f"candidate {key}: stored (f,w,s)={stored} but text gives {derived}")
        out += [f"candidate {k}: duplicate (sentence, index)" for k in self.duplicates]
        out += [f"candidate {k}: sentence index out of range" for k in self.out_of_range]
        out += [f"sentence {i}: candidate indices not consecutive from 1" for i in self.bad_numbering]
        if self.sentence_count_risk:
            out.append(f"some selection leaves {self.min_sentence_count} sentences")
        return out


def validate_candidate_set(cs: CandidateSet) -> ValidationReport:
    report = ValidationReport()
    n_sent = len(cs.document)
    seen = set()
    for c in cs.candidates:
        if c.key in seen:
            report.duplicates.append(c.key)
        seen.add(c.key)
        if not 1 <= c.sentence <= n_sent:
            report.out_of_range.append(c.key)
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NullParaphraseWarning)
            derived = derive_coefficients(cs.document.sentence(c.sentence), c.replacement, cs.lexicon)
        if derived != c.deltas:
            report.mismatches.append((c.key, c.deltas, derived))
    for i, group in cs.by_sentence().items():
        if sorted(c.index for c in group) != list(range(1, len(group) + 1)):
            report.bad_numbering.append(i)
    if n_sent:
        worst = sum(min(0, *(c.s for c in group)) for group in cs.by_sentence().values())
        report.min_sentence_count = n_sent + worst
    return report


def _fail(message: str, location: str):
    raise CandidateFileError(message, location)


def _int_field(obj: Mapping, name: str, location: str, minimum=None) -> Optional[int]:
    if name not in obj or obj[name] is None:
        return None
    value = obj[name]
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"'{name}' must be an integer", location)
    if minimum is not None and value < minimum:
        _fail(f"'{name}' must be >= {minimum}", location)
    return value


_CANDIDATE_KEYS = {"sentence", "replacement", "f", "w", "s", "meaning_class", "discourse_effect", "questions"}


def candidate_set_from_dict(
    data, lexicon: Optional[Lexicon] = None, allow_deletion: bool = False, source: str = "<data>"
) -> CandidateSet:
    lexicon = lexicon or default_lexicon()
    if not isinstance(data, Mapping):
        _fail("top level must be an object", source)
    if not isinstance(data.get("document"), str):
        _fail("'document' must be a string", f"{source}:document")
    raw_candidates = data.get("candidates", [])
    if not isinstance(raw_candidates, list):
        _fail("'candidates' must be an array", f"{source}:candidates")

    document = classify_words(tokenize(data["document"]), lexicon)
    next_index: dict[int, int] = defaultdict(int)
    candidates = []
    for pos, obj in enumerate(raw_candidates):
        loc = f"{source}:candidates[{pos}]"
        if not isinstance(obj, Mapping):
            _fail("candidate must be an object", loc)
        unknown = set(obj) - _CANDIDATE_KEYS
        if unknown:
            _fail(f"unknown field(s) {sorted(unknown)}", loc)
        i = _int_field(obj, "sentence", loc)
        if i is None:
            _fail("'sentence' is required", loc)
        if not 1 <= i <= len(document):
            _fail(f"sentence index {i} outside 1..{len(document)}", f"{loc}.sentence")
        repl = obj.get("replacement")
        if not isinstance(repl, str):
            _fail("'replacement' must be a string", f"{loc}.replacement")
        if not repl.strip() and not allow_deletion:
            _fail("sentence deletion (empty replacement) is disabled", f"{loc}.replacement")

        next_index[i] += 1
        j = next_index[i]
        original = document.sentence(i)
        derived = derive_coefficients(original, repl, lexicon)
        stored = tuple(_int_field(obj, name, loc) for name in ("f", "w", "s"))
        for name, have, want in zip("fws", stored, derived):
            if have is not None and have != want:
                warnings.warn(
                    f"{loc}: stored {name}={have} disagrees with text ({want}); using {want}",
                    CoefficientConflictWarning,
                    stacklevel=3,
                )
        if obj.get("meaning_class") is not None:
            try:
                mclass = MeaningClass.parse(obj["meaning_class"])
            except ValueError as exc:
                _fail(str(exc), f"{loc}.meaning_class")
        else:
            mclass = classify_meaning_effect(original, repl, lexicon)

        disc = _int_field(obj, "discourse_effect", loc, minimum=0)
        if obj.get("questions") is not None:
            q = obj["questions"]
            if not isinstance(q, Mapping) or set(q) != {"original", "replacement"}:
                _fail("'questions' needs 'original' and 'replacement' counts", f"{loc}.questions")
            try:
                from_q = discourse_effect(q["original"], q["replacement"])
            except (TypeError, ValueError) as exc:
                _fail(str(exc), f"{loc}.questions")
            if disc is not None and disc != from_q:
                _fail("'discourse_effect' contradicts 'questions'", loc)
            disc = from_q
        candidates.append(
            ParaphraseCandidate(i, j, repl, *derived, meaning_class=mclass, discourse_effect=disc or 0)
        )
    candidates.sort(key=lambda c: c.key)
    return CandidateSet(document, tuple(candidates), lexicon, allow_deletion)


def parse_candidates(
    text: str, lexicon: Optional[Lexicon] = None, allow_deletion: bool = False, source: str = "<string>"
) -> CandidateSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CandidateFileError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None
    return candidate_set_from_dict(data, lexicon, allow_deletion, source)


def load_candidates(
    path: Union[str, Path], lexicon: Optional[Lexicon] = None, allow_deletion: bool = False
) -> CandidateSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CandidateFileError(str(exc), str(path)) from None
    return parse_candidates(text, lexicon, allow_deletion, source=str(path))


def candidate_set_to_dict(cs: CandidateSet) -> dict:
    return {
        "document": cs.document.source_text,
        "candidates": [
            {
                "sentence": c.sentence,
                "replacement": c.replacement,
                "f": c.f,
                "w": c.w,
                "s": c.s,
                "meaning_class": c.meaning_class.key,
                "discourse_effect": c.discourse_effect,
            }
            for c in cs.candidates
        ],
    }


def save_candidates(cs: CandidateSet, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(candidate_set_to_dict(cs), indent=2) + "\n", encoding="utf-8")


def replacement_texts(doc: Document, chosen: Sequence[ParaphraseCandidate]) -> list[Optional[str]]:
    """Per-sentence replacement slots for :meth:`Document.render`."""
    slots: list[Optional[str]] = [None] * len(doc)
    for c in chosen:
        if slots[c.sentence - 1] is not None:
            raise ValueError(f"two paraphrases selected for sentence {c.sentence}")
        slots[c.sentence - 1] = c.replacement if c.replacement.strip() else ""
    return slots
