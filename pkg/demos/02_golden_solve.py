"""
Picking the cheapest paraphrases
================================

Four candidate paraphrases for a three-sentence text.  The text must not
get longer (k1 = 0), average sentence length must stay at or under 10 and
at least 0.525 of the words must be function words.
"""

from paraselect import build_model, enumerate_feasible_bruteforce, solve_branch_and_bound
from paraselect import golden
from paraselect.analysis import apply_solution

cs = golden.load_candidate_set()
settings = golden.load_settings()

# each paraphrase changes (f, w, s): function words, words, sentences
for c in cs.candidates:
    print(c.label, c.deltas, c.meaning_class.name, repr(c.replacement))

model = build_model(cs, settings.constraints, settings.weights)
for row in model.constraints:
    print(row)

sol = solve_branch_and_bound(model)
print(sol.status.name, [c for c in sol.assignment], sol.z)     # OPTIMAL [(3, 2)] 6

text, after = apply_solution(cs.document, cs, sol.assignment)
print(text)
print(after.W, after.S, after.F)

# brute force sees three feasible selections, not two
for a in enumerate_feasible_bruteforce(model):
    print(a, model.z(a))

# {p32} stays optimal whatever positive costs are used
import numpy as np
from fractions import Fraction

rng = np.random.default_rng(0)
for _ in range(5):
    costs = {k: Fraction(int(rng.integers(1, 100))) for k in model.variables}
    print(solve_branch_and_bound(model.with_costs(costs)).assignment)
