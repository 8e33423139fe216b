"""Branch-and-bound over the 0/1 paraphrase model, plus an exhaustive oracle.

Both routes rescale every constraint row and the cost vector to integers
(multiplying by the lcm of the denominators), so comparisons stay exact
without paying for Fraction arithmetic in the inner loop.

Ties between equal-cost optima are broken towards the lexicographically
smallest sorted tuple of selected ``(sentence, index)`` keys.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .candidates import Key
from .ilp_model import IlpModel, Sense

__all__ = [
    "Status",
    "SolverStats",
    "Solution",
    "OracleLimitError",
    "check_feasibility",
    "enumerate_feasible_bruteforce",
    "solve_bruteforce",
    "solve_branch_and_bound",
    "branching_order",
]

Assignment = tuple[Key, ...]

DEFAULT_ORACLE_LIMIT = 24


class OracleLimitError(ValueError):
    pass


class Status(enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"


@dataclass
class SolverStats:
    """Search counters.

    ``nodes_explored`` counts complete candidate assignments the search
    evaluated, so it never exceeds ``full_space``; ``tree_nodes`` counts
    every search node visited, internal ones included.
    """

    nodes_explored: int = 0
    nodes_pruned_bound: int = 0
    nodes_pruned_infeasible: int = 0
    tree_nodes: int = 0
    full_space: int = 1
    warm_start: bool = False

    @property
    def reduction(self) -> float:
        """Fraction of the full assignment space never evaluated."""
        return 1.0 - self.nodes_explored / self.full_space

    def merge(self, other: "SolverStats") -> None:
        self.nodes_explored += other.nodes_explored
        self.nodes_pruned_bound += other.nodes_pruned_bound
        self.nodes_pruned_infeasible += other.nodes_pruned_infeasible
        self.tree_nodes += other.tree_nodes

    def as_dict(self) -> dict:
        return {
            "nodes_explored": self.nodes_explored,
            "nodes_pruned_bound": self.nodes_pruned_bound,
            "nodes_pruned_infeasible": self.nodes_pruned_infeasible,
            "tree_nodes": self.tree_nodes,
            "full_space": self.full_space,
            "reduction": round(self.reduction, 6),
            "warm_start": self.warm_start,
        }


@dataclass
class Solution:
    status: Status
    assignment: Assignment = ()
    z: Optional[Fraction] = None
    stats: SolverStats = field(default_factory=SolverStats)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def selected(self) -> frozenset:
        return frozenset(self.assignment)


def check_feasibility(model: IlpModel, assignment: Iterable[Key]) -> bool:
    selected = list(assignment)
    known = set(model.variables)
    for k in selected:
        if tuple(k) not in known:
            raise KeyError(f"unknown variable {k}")
    if len(set(map(tuple, selected))) != len(selected):
        raise ValueError("assignment lists a variable twice")
    selected = [tuple(k) for k in selected]
    return all(c.holds(selected) for c in model.constraints)


def _lcm_denominator(values: Iterable[Fraction]) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


class _IntegerForm:
    """Model rows as integer ``a . x <= b`` (GE rows negated)."""

    def __init__(self, model: IlpModel):
        self.keys = list(model.variables)
        self.n = len(self.keys)
        pos = {k: p for p, k in enumerate(self.keys)}
        rows, rhs = [], []
        for con in model.constraints:
            if con.label.startswith("exclusive[") and model.config.per_sentence_exclusivity:
                continue
            scale = _lcm_denominator([*con.coefficients.values(), con.rhs])
            sign = 1 if con.sense is Sense.LE else -1
            row = [0] * self.n
            for k, c in con.coefficients.items():
                row[pos[k]] = int(sign * c * scale)
            rows.append(row)
            rhs.append(int(sign * con.rhs * scale))
        self.rows = rows
        self.rhs = rhs
        self.cost_scale = _lcm_denominator(model.objective.values())
        self.costs = [int(model.objective[k] * self.cost_scale) for k in self.keys]
        if model.config.per_sentence_exclusivity:
            self.group = [k[0] for k in self.keys]
        else:
            self.group = list(range(self.n))


def _enumerate_masks(form: _IntegerForm, chunk_bits: int = 16):
    """Yield (bits, feasible_mask, z) blocks over all 2**n assignments.

    Variable ``p`` is bit ``p`` of the assignment number.
    """
    n = form.n
    A = form.rows
    b = form.rhs
    bound = max([sum(abs(x) for x in row) + abs(r) for row, r in zip(A, b)] + [sum(form.costs), 1])
    dtype = np.int64 if bound < 2**62 else object
    A_arr = np.array(A, dtype=dtype).reshape(len(A), n)
    b_arr = np.array(b, dtype=dtype)
    c_arr = np.array(form.costs, dtype=dtype)
    groups = {}
    for p, g in enumerate(form.group):
        groups.setdefault(g, []).append(p)
    multi = [ps for ps in groups.values() if len(ps) > 1]
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    step = 1 << min(n, chunk_bits)
    for start in range(0, total, step):
        idx = np.arange(start, min(total, start + step), dtype=np.int64)
        bits = ((idx[:, None] >> shifts) & 1).astype(dtype)
        ok = np.ones(len(idx), dtype=bool)
        if len(A):
            ok &= np.all(bits @ A_arr.T <= b_arr, axis=1)
        for ps in multi:
            ok &= bits[:, ps].sum(axis=1) <= 1
        yield idx, bits, ok, bits @ c_arr


def _keys_of(form: _IntegerForm, number: int) -> Assignment:
    return tuple(form.keys[p] for p in range(form.n) if number >> p & 1)


def enumerate_feasible_bruteforce(model: IlpModel, limit: int = DEFAULT_ORACLE_LIMIT) -> list[Assignment]:
    """Every feasible assignment, found by testing all ``2**n`` of them."""
    if model.n > limit:
        raise OracleLimitError(f"{model.n} variables exceeds the oracle limit of {limit}")
    form = _IntegerForm(model)
    found = []
    for idx, _, ok, _ in _enumerate_masks(form):
        found.extend(_keys_of(form, int(i)) for i in idx[ok])
    return sorted(found)


def solve_bruteforce(model: IlpModel, limit: int = DEFAULT_ORACLE_LIMIT) -> Solution:
    """Exhaustive reference solve with the same tie-break as branch-and-bound."""
    if model.n > limit:
        raise OracleLimitError(f"{model.n} variables exceeds the oracle limit of {limit}")
    form = _IntegerForm(model)
    best_z = None
    best = []
    for idx, _, ok, z in _enumerate_masks(form):
        if not ok.any():
            continue
        zf = z[ok]
        m = zf.min()
        if best_z is None or m < best_z:
            best_z, best = m, []
        if m == best_z:
            best.extend(int(i) for i in idx[ok][zf == m])
    stats = SolverStats(nodes_explored=1 << model.n, full_space=1 << model.n, tree_nodes=1 << model.n)
    if best_z is None:
        return Solution(Status.INFEASIBLE, stats=stats)
    assignment = min(_keys_of(form, i) for i in best)
    return Solution(Status.OPTIMAL, assignment, Fraction(int(best_z), form.cost_scale), stats)


def branching_order(model: IlpModel) -> list[Key]:
    """Variables by descending ``|w|``, ties by key."""
    return sorted(model.variables, key=lambda k: (-abs(model.deltas[k][1]), k))


class _Search:
    def __init__(self, model: IlpModel):
        form = _IntegerForm(model)
        self.form = form
        pos = {k: p for p, k in enumerate(form.keys)}
        self.order = [pos[k] for k in branching_order(model)]
        n = form.n
        m = len(form.rows)
        self.m = m
        # opt[d][r][g]: most helpful (most negative, capped at 0) coefficient
        # of row r among undecided variables of group g at depth d.
        self.opt = []
        self.opt_total = []
        for d in range(n + 1):
            per_row = []
            totals = []
            for r in range(m):
                best: dict = {}
                for p in self.order[d:]:
                    g = form.group[p]
                    best[g] = min(best.get(g, 0), form.rows[r][p])
                per_row.append(best)
                totals.append(sum(best.values()))
            self.opt.append(per_row)
            self.opt_total.append(totals)
        self.min_cost_after = [min((form.costs[p] for p in self.order[d:]), default=None) for d in range(n + 1)]

    def key(self, chosen: Sequence[int]) -> Assignment:
        return tuple(sorted(self.form.keys[p] for p in chosen))

    def feasible(self, lhs: Sequence[int]) -> bool:
        return all(v <= b for v, b in zip(lhs, self.form.rhs))

    def greedy(self):
        """Warm start: add the candidate that removes most violation per unit cost."""
        form = self.form
        chosen: list[int] = []
        used = set()
        lhs = [0] * self.m
        cost = 0

        def violation(vals):
            return sum(max(0, v - b) for v, b in zip(vals, form.rhs))

        while not self.feasible(lhs):
            current = violation(lhs)
            best_p, best_gain = None, Fraction(0)
            for p in range(form.n):
                if form.group[p] in used:
                    continue
                trial = [lhs[r] + form.rows[r][p] for r in range(self.m)]
                gain = Fraction(current - violation(trial), form.costs[p])
                if gain > best_gain:
                    best_p, best_gain = p, gain
            if best_p is None:
                return None
            chosen.append(best_p)
            used.add(form.group[best_p])
            lhs = [lhs[r] + form.rows[r][best_p] for r in range(self.m)]
            cost += form.costs[best_p]
        return cost, self.key(chosen)

    def run(self, d, chosen, cost, lhs, used, incumbent, stats):
        """Depth-first search below one node; returns the best (cost, key) seen."""
        form = self.form
        stats.tree_nodes += 1
        if incumbent is not None and cost > incumbent[0]:
            stats.nodes_pruned_bound += 1
            return incumbent
        if self.feasible(lhs):
            # costs are positive, so stopping here beats every extension
            stats.nodes_explored += 1
            cand = (cost, self.key(chosen))
            if incumbent is None or cand < incumbent:
                incumbent = cand
            return incumbent
        if d == len(self.order):
            stats.nodes_explored += 1
            stats.nodes_pruned_infeasible += 1
            return incumbent
        if incumbent is not None:
            nxt = self.min_cost_after[d]
            if cost >= incumbent[0] or cost + nxt > incumbent[0]:
                stats.nodes_pruned_bound += 1
                return incumbent
        for r in range(self.m):
            reach = self.opt_total[d][r] - sum(self.opt[d][r].get(g, 0) for g in used)
            if lhs[r] + reach > form.rhs[r]:
                stats.nodes_pruned_infeasible += 1
                return incumbent

        p = self.order[d]
        g = form.group[p]
        if g not in used:
            new_lhs = [lhs[r] + form.rows[r][p] for r in range(self.m)]
            incumbent = self.run(
                d + 1, chosen + [p], cost + form.costs[p], new_lhs, used | {g}, incumbent, stats
            )
        return self.run(d + 1, chosen, cost, lhs, used, incumbent, stats)

    def prefixes(self, depth: int):
        """Search-tree nodes at ``depth`` (exclusivity-respecting), in DFS order."""
        form = self.form
        nodes = [([], 0, [0] * self.m, frozenset())]
        for d in range(depth):
            p = self.order[d]
            g = form.group[p]
            nxt = []
            for chosen, cost, lhs, used in nodes:
                if g not in used:
                    nxt.append((chosen + [p], cost + form.costs[p],
                                [lhs[r] + form.rows[r][p] for r in range(self.m)], used | {g}))
                nxt.append((chosen, cost, lhs, used))
            nodes = nxt
        return nodes


def solve_branch_and_bound(model: IlpModel, threads: int = 1, warm_start: bool = True) -> Solution:
    """Minimum-cost feasible assignment.

    With ``threads > 1`` the top of the tree is split into independent
    subtrees that share only the warm-start incumbent; the returned
    status, assignment and z do not depend on ``threads``, the counters do.
    """
    search = _Search(model)
    n = search.form.n
    stats = SolverStats(full_space=1 << n)
    incumbent = search.greedy() if warm_start else None
    stats.warm_start = incumbent is not None

    split = min(n, max(0, math.ceil(math.log2(threads)))) if threads > 1 else 0
    if split == 0:
        best = search.run(0, [], 0, [0] * search.m, frozenset(), incumbent, stats)
    else:
        roots = search.prefixes(split)

        def work(root):
            local = SolverStats()
            chosen, cost, lhs, used = root
            return search.run(split, chosen, cost, lhs, used, incumbent, local), local

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, roots))
        best = incumbent
        for found, local in results:
            stats.merge(local)
            if found is not None and (best is None or found < best):
                best = found
    if best is None:
        return Solution(Status.INFEASIBLE, stats=stats)
    cost, key = best
    return Solution(Status.OPTIMAL, key, Fraction(cost, search.form.cost_scale), stats)
