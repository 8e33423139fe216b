"""Cost of a paraphrase: meaning change class plus discourse change.

Meaning change is approximated from the word-class make-up of the token
difference between original and replacement.  Discourse change is the
difference in how many questions the sentence can answer; those counts are
annotations, never derived from text.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .text_metrics import Lexicon, Sentence, WordClass, classify_words, default_lexicon, tokenize

__all__ = [
    "MeaningClass",
    "CostWeights",
    "CostBreakdown",
    "RELATIVE_PRONOUNS",
    "classify_meaning_effect",
    "discourse_effect",
    "compute_cost",
    "parse_rational",
]

RELATIVE_PRONOUNS = frozenset({"which", "that", "who", "whom", "whose"})


class MeaningClass(enum.IntEnum):
    NONE = 0
    CLOSED_ONLY = 1
    SINGLE_OPEN = 2
    MULTI_OPEN = 3

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value: Union[str, "MeaningClass"]) -> "MeaningClass":
        if isinstance(value, MeaningClass):
            return value
        try:
            return cls[str(value).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown meaning class {value!r}") from None


def parse_rational(value) -> Fraction:
    """Parse an int, decimal string or ``p/q`` string exactly.

    Floats go through their shortest decimal repr, so ``0.525`` becomes
    ``21/40`` rather than the binary approximation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


_DEFAULT_WEIGHTS = {
    MeaningClass.NONE: Fraction(0),
    MeaningClass.CLOSED_ONLY: Fraction(1),
    MeaningClass.SINGLE_OPEN: Fraction(3),
    MeaningClass.MULTI_OPEN: Fraction(6),
}


@dataclass(frozen=True)
class CostWeights:
    weight_per_class: Mapping[MeaningClass, Fraction] = field(
        default_factory=lambda: dict(_DEFAULT_WEIGHTS)
    )
    discourse_lambda: Fraction = Fraction(1)

    def __post_init__(self):
        weights = {MeaningClass.parse(k): parse_rational(v) for k, v in self.weight_per_class.items()}
        if set(weights) != set(MeaningClass):
            raise ValueError("a weight is needed for every meaning class")
        if weights[MeaningClass.NONE] != 0:
            raise ValueError("weight of NONE must be 0")
        ordered = [weights[c] for c in sorted(MeaningClass)]
        if any(w < 0 for w in ordered) or ordered != sorted(ordered):
            raise ValueError(f"class weights must be non-negative and non-decreasing: {ordered}")
        lam = parse_rational(self.discourse_lambda)
        if lam < 0:
            raise ValueError("discourse_lambda must be non-negative")
        object.__setattr__(self, "weight_per_class", weights)
        object.__setattr__(self, "discourse_lambda", lam)

    @classmethod
    def from_mapping(cls, section: Optional[Mapping]) -> "CostWeights":
        """Build from a ``weights`` config section; missing keys keep defaults."""
        section = dict(section or {})
        weights = dict(_DEFAULT_WEIGHTS)
        lam = Fraction(1)
        for key, value in section.items():
            if key == "discourse_lambda":
                lam = parse_rational(value)
            else:
                weights[MeaningClass.parse(key)] = parse_rational(value)
        return cls(weights, lam)

    @property
    def epsilon(self) -> Fraction:
        """Positivity floor: smallest nonzero weight over 100."""
        nonzero = [w for w in self.weight_per_class.values() if w > 0]
        if self.discourse_lambda > 0:
            nonzero.append(self.discourse_lambda)
        return (min(nonzero) if nonzero else Fraction(1)) / 100

    def scaled(self, factor) -> "CostWeights":
        factor = parse_rational(factor)
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return CostWeights(
            {k: v * factor for k, v in self.weight_per_class.items()},
            self.discourse_lambda * factor,
        )

    def as_dict(self) -> dict:
        out = {c.key: str(self.weight_per_class[c]) for c in sorted(MeaningClass)}
        out["discourse_lambda"] = str(self.discourse_lambda)
        return out


@dataclass(frozen=True)
class CostBreakdown:
    meaning_component: Fraction
    discourse_component: Fraction
    total: Fraction
    floored: bool = False


def _classified_words(sentence_or_text, lexicon: Lexicon):
    if isinstance(sentence_or_text, Sentence):
        if sentence_or_text.is_classified:
            return sentence_or_text.words
        sentences = classify_words(tokenize(sentence_or_text.text), lexicon).sentences
    else:
        sentences = classify_words(tokenize(sentence_or_text), lexicon).sentences
    return [t for s in sentences for t in s.words]


def classify_meaning_effect(original, replacement_text: str, lexicon: Optional[Lexicon] = None) -> MeaningClass:
    """Bucket the change from ``original`` to ``replacement_text``.

    Works on the multiset symmetric difference of (lowercased word, class)
    pairs.  A change touching only relative pronouns is NONE; only closed
    words is CLOSED_ONLY; then one or several open words.
    """
    lexicon = lexicon or default_lexicon()
    before = Counter((t.surface.lower(), t.word_class) for t in _classified_words(original, lexicon))
    after = Counter((t.surface.lower(), t.word_class) for t in _classified_words(replacement_text, lexicon))
    diff = (before - after) + (after - before)
    if not diff:
        return MeaningClass.NONE
    n_open = sum(n for (_, wc), n in diff.items() if wc is WordClass.OPEN)
    if n_open >= 2:
        return MeaningClass.MULTI_OPEN
    if n_open == 1:
        return MeaningClass.SINGLE_OPEN
    if all(word in RELATIVE_PRONOUNS for word, _ in diff):
        return MeaningClass.NONE
    return MeaningClass.CLOSED_ONLY


def discourse_effect(q_orig: Optional[int] = None, q_repl: Optional[int] = None) -> int:
    """Difference in the number of questions each version can answer."""
    if q_orig is None and q_repl is None:
        return 0
    if q_orig is None or q_repl is None:
        raise ValueError("both question counts are needed")
    if q_orig < 0 or q_repl < 0:
        raise ValueError("question counts must be non-negative")
    return abs(int(q_orig) - int(q_repl))


def compute_cost(candidate, weights: Optional[CostWeights] = None) -> CostBreakdown:
    """Total cost of ``candidate`` (anything with ``meaning_class`` and
    ``discourse_effect``), floored at ``weights.epsilon``."""
    weights = weights or CostWeights()
    meaning = weights.weight_per_class[MeaningClass.parse(candidate.meaning_class)]
    disc = weights.discourse_lambda * candidate.discourse_effect
    total = meaning + disc
    if total <= 0:
        return CostBreakdown(meaning, disc, weights.epsilon, floored=True)
    return CostBreakdown(meaning, disc, total)
