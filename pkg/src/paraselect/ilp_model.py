"""The 0/1 integer program: variables, objective and constraint families.

Variables are ``(sentence, index)`` pairs.  Every coefficient, bound and
cost is a :class:`~fractions.Fraction`; nothing in here is floating point.

The two ratio constraints are stored in their linear forms::

    avg sentence length   sum (w - k2*s) p  <=  k2*S - W
    function-word share   sum (f - k3*w) p  >=  k3*W - F

which agree with the ratio forms whenever the rewritten text keeps at least
one sentence and one word.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .candidates import CandidateSet, Key, validate_candidate_set
from .cost_model import CostWeights, compute_cost, parse_rational
from .text_metrics import MetricsSummary

__all__ = [
    "Sense",
    "ModelConfig",
    "LinearConstraint",
    "IlpModel",
    "ModelValidationError",
    "build_length_constraint",
    "build_readability_constraint",
    "build_lexical_density_constraint",
    "build_exclusivity_constraints",
    "build_objective",
    "build_model",
    "assemble_model",
]

LENGTH = "length"
READABILITY = "readability"
DENSITY = "lexical_density"


class ModelValidationError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


class Sense(enum.Enum):
    LE = "<="
    GE = ">="


@dataclass(frozen=True)
class ModelConfig:
    k1: int = 0
    k2: Fraction = Fraction(10)
    k3: Fraction = Fraction(0)
    per_sentence_exclusivity: bool = True

    def __post_init__(self):
        k1 = parse_rational(self.k1)
        if k1.denominator != 1:
            raise ValueError(f"k1 must be an integer, got {k1}")
        if k1 > 0:
            raise ValueError("k1 must be <= 0 (text may not grow)")
        k2, k3 = parse_rational(self.k2), parse_rational(self.k3)
        if k2 < 0:
            raise ValueError("k2 must be >= 0")
        if not 0 <= k3 <= 1:
            raise ValueError("k3 must lie in [0, 1]")
        object.__setattr__(self, "k1", int(k1))
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "k3", k3)

    @classmethod
    def from_mapping(cls, section: Optional[Mapping]) -> "ModelConfig":
        section = dict(section or {})
        unknown = set(section) - {"k1", "k2", "k3", "per_sentence_exclusivity"}
        if unknown:
            raise ValueError(f"unknown constraint keys {sorted(unknown)}")
        return cls(**section)

    def with_bound(self, which: str, value) -> "ModelConfig":
        if which not in ("k1", "k2", "k3"):
            raise ValueError(f"no bound named {which!r}")
        return replace(self, **{which: value})

    def as_dict(self) -> dict:
        return {"k1": self.k1, "k2": str(self.k2), "k3": str(self.k3)}


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: Mapping[Key, Fraction]
    sense: Sense
    rhs: Fraction
    label: str

    def lhs(self, selected: Iterable[Key]) -> Fraction:
        return sum((self.coefficients.get(k, Fraction(0)) for k in selected), Fraction(0))

    def holds(self, selected: Iterable[Key]) -> bool:
        value = self.lhs(selected)
        return value <= self.rhs if self.sense is Sense.LE else value >= self.rhs

    def __str__(self) -> str:
        terms = " ".join(
            f"{'-' if c < 0 else '+'} {abs(c)}*p{i}_{j}" for (i, j), c in sorted(self.coefficients.items())
        )
        return f"{self.label}: {terms or '0'} {self.sense.value} {self.rhs}"


@dataclass(frozen=True)
class IlpModel:
    variables: tuple[Key, ...]
    objective: Mapping[Key, Fraction]
    constraints: tuple[LinearConstraint, ...]
    base_metrics: MetricsSummary
    config: ModelConfig
    deltas: Mapping[Key, tuple[int, int, int]] = field(repr=False, default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.variables)

    def constraint(self, label: str) -> LinearConstraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def exclusivity(self) -> list[LinearConstraint]:
        return [c for c in self.constraints if c.label.startswith("exclusive[")]

    def z(self, selected: Iterable[Key]) -> Fraction:
        return sum((self.objective[k] for k in selected), Fraction(0))

    def metrics_after(self, selected: Iterable[Key]) -> MetricsSummary:
        f = w = s = 0
        for k in selected:
            df, dw, ds = self.deltas[k]
            f, w, s = f + df, w + dw, s + ds
        return self.base_metrics.shifted(w, s, f)

    def with_bound(self, which: str, value) -> "IlpModel":
        """Same variables and costs, one of k1/k2/k3 changed."""
        return assemble_model(self.base_metrics, self.deltas, self.objective, self.config.with_bound(which, value))

    def with_costs(self, objective: Mapping[Key, Fraction]) -> "IlpModel":
        if set(objective) != set(self.variables):
            raise ValueError("objective must cover exactly the model variables")
        if any(parse_rational(c) <= 0 for c in objective.values()):
            raise ValueError("costs must be strictly positive")
        return replace(self, objective={k: parse_rational(objective[k]) for k in self.variables})


def _length(deltas: Mapping[Key, tuple[int, int, int]], k1: int) -> LinearConstraint:
    coeffs = {k: Fraction(w) for k, (f, w, s) in deltas.items()}
    return LinearConstraint(coeffs, Sense.LE, Fraction(k1), LENGTH)


def _readability(deltas, base: MetricsSummary, k2: Fraction) -> LinearConstraint:
    coeffs = {k: w - k2 * s for k, (f, w, s) in deltas.items()}
    return LinearConstraint(coeffs, Sense.LE, k2 * base.S - base.W, READABILITY)


def _density(deltas, base: MetricsSummary, k3: Fraction) -> LinearConstraint:
    coeffs = {k: f - k3 * w for k, (f, w, s) in deltas.items()}
    return LinearConstraint(coeffs, Sense.GE, k3 * base.W - base.F, DENSITY)


def _exclusivity(keys: Iterable[Key]) -> list[LinearConstraint]:
    groups: dict[int, list[Key]] = {}
    for k in sorted(keys):
        groups.setdefault(k[0], []).append(k)
    return [
        LinearConstraint({k: Fraction(1) for k in ks}, Sense.LE, Fraction(1), f"exclusive[{i}]")
        for i, ks in groups.items()
        if len(ks) >= 2
    ]


def _deltas(cs: CandidateSet) -> dict[Key, tuple[int, int, int]]:
    return {c.key: c.deltas for c in sorted(cs.candidates, key=lambda c: c.key)}


def build_length_constraint(cs: CandidateSet, k1: int) -> LinearConstraint:
    return _length(_deltas(cs), k1)


def build_readability_constraint(cs: CandidateSet, base: MetricsSummary, k2) -> LinearConstraint:
    if base.S < 1:
        raise ValueError("readability constraint needs at least one sentence")
    return _readability(_deltas(cs), base, parse_rational(k2))


def build_lexical_density_constraint(cs: CandidateSet, base: MetricsSummary, k3) -> LinearConstraint:
    return _density(_deltas(cs), base, parse_rational(k3))


def build_exclusivity_constraints(cs: CandidateSet) -> list[LinearConstraint]:
    return _exclusivity(c.key for c in cs.candidates)


def build_objective(cs: CandidateSet, weights: Optional[CostWeights] = None) -> dict[Key, Fraction]:
    weights = weights or CostWeights()
    objective = {}
    for c in sorted(cs.candidates, key=lambda c: c.key):
        cost = compute_cost(c, weights).total
        if cost <= 0:
            raise ValueError(f"non-positive cost for candidate {c.key}")
        objective[c.key] = cost
    return objective


def assemble_model(
    base: MetricsSummary,
    deltas: Mapping[Key, tuple[int, int, int]],
    objective: Mapping[Key, Fraction],
    config: ModelConfig,
) -> IlpModel:
    """Build a model straight from coefficients, without any text behind it."""
    keys = tuple(sorted(deltas))
    if set(objective) != set(keys):
        raise ValueError("objective and coefficient keys differ")
    objective = {k: parse_rational(objective[k]) for k in keys}
    if any(c <= 0 for c in objective.values()):
        raise ValueError("all costs must be strictly positive")
    deltas = {k: tuple(int(x) for x in deltas[k]) for k in keys}
    constraints = [
        _length(deltas, config.k1),
        _readability(deltas, base, config.k2),
        _density(deltas, base, config.k3),
    ]
    if config.per_sentence_exclusivity:
        constraints += _exclusivity(keys)
    return IlpModel(keys, objective, tuple(constraints), base, config, deltas)


def build_model(
    cs: CandidateSet, config: Optional[ModelConfig] = None, weights: Optional[CostWeights] = None
) -> IlpModel:
    config = config or ModelConfig()
    report = validate_candidate_set(cs)
    if not report.ok:
        raise ModelValidationError(report.messages())
    base = cs.base_metrics
    if base.S < 1:
        raise ModelValidationError(["document has no sentences"])
    return assemble_model(base, _deltas(cs), build_objective(cs, weights), config)
