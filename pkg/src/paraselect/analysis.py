"""Flexibility of a text, bound sweeps, and applying a selection to the text."""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .candidates import CandidateSet, Key, replacement_texts
from .cost_model import parse_rational
from .ilp_model import IlpModel
from .solver import Solution, solve_branch_and_bound
from .text_metrics import Document, MetricsSummary, measure_text

__all__ = [
    "Metric",
    "Direction",
    "FlexibilityReport",
    "DeltaMismatchError",
    "analyze_flexibility",
    "flexibility_table",
    "format_flexibility_table",
    "sweep_constraint",
    "apply_solution",
]

EXHAUSTIVE_LIMIT = 16


class Metric(enum.Enum):
    TOTAL_WORDS = "total_words"
    AVG_SENTENCE_LENGTH = "avg_sentence_length"
    LEXICAL_DENSITY = "lexical_density"

    def of(self, m: MetricsSummary) -> Fraction:
        if self is Metric.TOTAL_WORDS:
            return Fraction(m.W)
        if self is Metric.AVG_SENTENCE_LENGTH:
            return m.avg_sentence_length
        return m.lexical_density_ratio


class Direction(enum.Enum):
    MIN = "min"
    MAX = "max"


class DeltaMismatchError(AssertionError):
    """Recounted metrics of a rewritten text disagree with the summed deltas."""


@dataclass(frozen=True)
class FlexibilityReport:
    metric: Metric
    direction: Direction
    extreme_value: Fraction
    achieving_assignment: tuple[Key, ...]
    original_value: Fraction
    metrics: MetricsSummary
    method: str

    def as_dict(self) -> dict:
        return {
            "metric": self.metric.value,
            "direction": self.direction.value,
            "extreme_value": str(self.extreme_value),
            "original_value": str(self.original_value),
            "achieving_assignment": [list(k) for k in self.achieving_assignment],
            "metrics": self.metrics.as_dict(),
            "method": self.method,
        }


def _source(obj: Union[CandidateSet, IlpModel]):
    if isinstance(obj, IlpModel):
        return obj.base_metrics, dict(obj.deltas), obj.config.per_sentence_exclusivity
    return obj.base_metrics, {c.key: c.deltas for c in obj.candidates}, True


def _groups(deltas: Mapping[Key, tuple], exclusive: bool) -> list[list[Key]]:
    if not exclusive:
        return [[k] for k in sorted(deltas)]
    out: dict[int, list[Key]] = {}
    for k in sorted(deltas):
        out.setdefault(k[0], []).append(k)
    return list(out.values())


def _after(base: MetricsSummary, deltas, chosen: Iterable[Key]) -> MetricsSummary:
    f = w = s = 0
    for k in chosen:
        df, dw, ds = deltas[k]
        f, w, s = f + df, w + dw, s + ds
    return base.shifted(w, s, f)


def _exhaustive(base, deltas, groups, metric, direction):
    best = None
    for combo in itertools.product(*[[None, *g] for g in groups]):
        chosen = tuple(k for k in combo if k is not None)
        value = metric.of(_after(base, deltas, chosen))
        score = value if direction is Direction.MIN else -value
        cand = (score, chosen)
        if best is None or cand < best:
            best = cand
    return best[1]


def _ratio_parts(metric: Metric, base: MetricsSummary, delta):
    f, w, s = delta
    if metric is Metric.AVG_SENTENCE_LENGTH:
        return w, s
    return f, w


def _parametric(base, deltas, groups, metric, direction):
    """Exact ratio extreme by Dinkelbach iteration.

    For a trial ratio ``lam`` each sentence independently picks the option
    minimising ``num - lam * den`` (or maximising, for MAX); the iteration
    stops once no selection scores below zero, i.e. none beats ``lam``.
    """
    sign = 1 if direction is Direction.MIN else -1
    chosen: tuple[Key, ...] = ()
    while True:
        lam = metric.of(_after(base, deltas, chosen))
        num0, den0 = _ratio_parts(metric, base, (base.F, base.W, base.S))
        pick = []
        gain = sign * (num0 - lam * den0)
        for g in groups:
            best_k, best_v = None, Fraction(0)
            for k in g:
                num, den = _ratio_parts(metric, base, deltas[k])
                v = sign * (num - lam * den)
                if v < best_v:
                    best_k, best_v = k, v
            if best_k is not None:
                pick.append(best_k)
                gain += best_v
        if gain >= 0:
            return chosen
        chosen = tuple(sorted(pick))


def _separable_words(deltas, groups, direction):
    sign = 1 if direction is Direction.MIN else -1
    chosen = []
    for g in groups:
        best_k, best_v = None, 0
        for k in g:
            v = sign * deltas[k][1]
            if v < best_v:
                best_k, best_v = k, v
        if best_k is not None:
            chosen.append(best_k)
    return tuple(sorted(chosen))


def analyze_flexibility(
    source: Union[CandidateSet, IlpModel],
    metric: Union[Metric, str],
    direction: Union[Direction, str] = Direction.MIN,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> FlexibilityReport:
    """Extreme value of ``metric`` over all selections, costs and bounds ignored.

    Only the one-paraphrase-per-sentence rule is respected.
    """
    metric, direction = Metric(metric), Direction(direction)
    base, deltas, exclusive = _source(source)
    groups = _groups(deltas, exclusive)
    if len(deltas) <= exhaustive_limit:
        chosen, method = _exhaustive(base, deltas, groups, metric, direction), "exhaustive"
    elif metric is Metric.TOTAL_WORDS:
        chosen, method = _separable_words(deltas, groups, direction), "separable"
    else:
        chosen, method = _parametric(base, deltas, groups, metric, direction), "parametric"
    after = _after(base, deltas, chosen)
    return FlexibilityReport(metric, direction, metric.of(after), chosen, metric.of(base), after, method)


_TABLE_ROWS = [
    ("num. words minimised", Metric.TOTAL_WORDS, Direction.MIN),
    ("avg sent. minimised", Metric.AVG_SENTENCE_LENGTH, Direction.MIN),
    ("density maximised", Metric.LEXICAL_DENSITY, Direction.MAX),
]


def flexibility_table(source: Union[CandidateSet, IlpModel], exhaustive_limit: int = EXHAUSTIVE_LIMIT):
    """Rows of (label, MetricsSummary, report-or-None), original text first."""
    base, _, _ = _source(source)
    rows = [("original text", base, None)]
    for label, metric, direction in _TABLE_ROWS:
        rep = analyze_flexibility(source, metric, direction, exhaustive_limit)
        rows.append((label, rep.metrics, rep))
    return rows


def _fmt(q: Fraction) -> str:
    return f"{float(q):.2f}"


def format_flexibility_table(rows) -> str:
    header = f"{'':<22}{'number of words':>16}{'avg sent. length':>18}{'density':>10}"
    lines = [header, "-" * len(header)]
    for label, m, _ in rows:
        lines.append(
            f"{label:<22}{m.W:>16}{_fmt(m.avg_sentence_length):>18}{_fmt(m.lexical_density_ratio):>10}"
        )
    return "\n".join(lines)


def sweep_constraint(
    model: IlpModel, which: str, values: Sequence, threads: int = 1
) -> list[tuple[Fraction, Solution]]:
    """Re-solve ``model`` with bound ``which`` (k1, k2 or k3) set to each value."""
    points = [parse_rational(v) for v in values]
    models = [model.with_bound(which, v) for v in points]
    if threads > 1 and len(models) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            solutions = list(pool.map(solve_branch_and_bound, models))
    else:
        solutions = [solve_branch_and_bound(m) for m in models]
    return list(zip(points, solutions))


def apply_solution(
    doc: Document, cs: CandidateSet, assignment: Iterable[Key]
) -> tuple[str, MetricsSummary]:
    """Rewrite ``doc`` with the selected paraphrases and recount it.

    Raises :class:`DeltaMismatchError` if the recount is not exactly the
    base counts plus the selected deltas.
    """
    chosen = [cs.by_key[tuple(k)] for k in assignment]
    text = doc.render(replacement_texts(doc, chosen))
    _, recount = measure_text(text, cs.lexicon)
    expected = cs.base_metrics.shifted(
        sum(c.w for c in chosen), sum(c.s for c in chosen), sum(c.f for c in chosen)
    )
    if recount != expected:
        raise DeltaMismatchError(f"rewritten text counts {recount}, deltas predict {expected}")
    return text, recount
