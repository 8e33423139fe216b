"""Random instances for property tests, acceptance runs and demos.

``random_model`` draws bare coefficient models (no text behind them);
``random_candidate_data`` draws a small made-up document plus paraphrases
in the candidate-file layout, so the whole text pipeline can be exercised.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from .ilp_model import IlpModel, ModelConfig, assemble_model
from .text_metrics import MetricsSummary

__all__ = ["random_model", "random_candidate_data", "random_bounds"]


def _frac(x: float, denom: int) -> Fraction:
    return Fraction(round(x * denom), denom)


def random_bounds(rng: np.random.Generator, base: MetricsSummary, k1: Optional[int] = None) -> ModelConfig:
    """k-values near the base text, so instances are sometimes feasible and sometimes not."""
    if k1 is None:
        k1 = -int(rng.integers(0, 5))
    k2 = _frac(float(base.avg_sentence_length) * rng.uniform(0.75, 1.05), 10)
    k3 = _frac(float(base.lexical_density_ratio) * rng.uniform(0.9, 1.06), 1000)
    return ModelConfig(k1, max(k2, Fraction(0)), min(max(k3, Fraction(0)), Fraction(1)))


def random_model(
    rng: np.random.Generator,
    n: int,
    coef_range: int = 5,
    config: Optional[ModelConfig] = None,
    k1: Optional[int] = None,
    integer_costs: bool = True,
) -> IlpModel:
    """Model with ``n`` variables spread over random sentences.

    ``f`` and ``w`` are drawn from ``[-coef_range, coef_range]``, with ``f``
    clipped so each rewritten sentence still has ``0 <= F <= W``; ``s`` from
    ``{0, 1, 2}`` so the rewritten text always keeps its sentences.  Integer
    costs in 1..6 make cost ties common, which exercises the tie-break.
    """
    n_sent = int(rng.integers(max(1, (n + 2) // 3), n + 2)) if n else 1
    sentence_of = sorted(int(x) for x in rng.integers(1, n_sent + 1, size=n))
    lengths = [int(x) for x in rng.integers(2 * coef_range + 3, 30, size=n_sent)]
    closed = [int(round(L * rng.uniform(0.35, 0.6))) for L in lengths]
    base = MetricsSummary(W=sum(lengths), S=n_sent, F=sum(closed))

    deltas, costs = {}, {}
    counter: dict[int, int] = {}
    for i in sentence_of:
        counter[i] = counter.get(i, 0) + 1
        key = (i, counter[i])
        w = int(rng.integers(-coef_range, coef_range + 1))
        # keep the rewritten sentence sane: 0 <= closed words <= words
        L, C = lengths[i - 1], closed[i - 1]
        f = int(rng.integers(max(-coef_range, -C), min(coef_range, L + w - C) + 1))
        s = int(rng.choice([0, 0, 0, 1, 1, 2]))
        deltas[key] = (f, w, s)
        if integer_costs:
            costs[key] = Fraction(int(rng.integers(1, 7)))
        else:
            costs[key] = Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 8)))
    if config is None:
        config = random_bounds(rng, base, k1)
    return assemble_model(base, deltas, costs, config)


_OPEN = "cat dog owner engineer sat ran bank river tree house road car light green old quickly garden painter".split()
_CLOSED = "the a of in on by to with and its it was which from".split()


def _sentence(rng: np.random.Generator, length: int) -> list[str]:
    words = []
    for k in range(length):
        pool = _CLOSED if rng.random() < 0.45 else _OPEN
        words.append(str(rng.choice(pool)))
    return words


def _render(words: list[str]) -> str:
    return " ".join([words[0].capitalize(), *words[1:]]) + "."


def random_candidate_data(
    rng: np.random.Generator, n_sentences: int = 5, max_candidates: int = 3
) -> dict:
    """Candidate-file dict: a random document and paraphrases built by
    deleting spans, inserting words and splitting sentences."""
    sents = [_sentence(rng, int(rng.integers(6, 15))) for _ in range(n_sentences)]
    document = " ".join(_render(s) for s in sents)
    candidates = []
    for i, words in enumerate(sents, start=1):
        for _ in range(int(rng.integers(0, max_candidates + 1))):
            op = rng.choice(["delete", "insert", "split"])
            new = list(words)
            if op == "delete":
                span = int(rng.integers(1, 4))
                at = int(rng.integers(0, len(new) - span))
                del new[at:at + span]
                text = _render(new)
            elif op == "insert":
                at = int(rng.integers(1, len(new)))
                new[at:at] = _sentence(rng, int(rng.integers(1, 3)))
                text = _render(new)
            else:
                at = int(rng.integers(2, len(new) - 1))
                text = _render(new[:at]) + " " + _render(["it", "was", *new[at:]])
            if text == _render(words):
                continue
            candidates.append({"sentence": i, "replacement": text})
    return {"document": document, "candidates": candidates}
