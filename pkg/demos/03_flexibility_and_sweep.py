"""
How far can the text move?
==========================

Flexibility ignores costs and bounds and asks for the extreme value of one
metric over every selection.  A sweep re-solves while one bound varies.
"""

from paraselect import build_model, golden
from paraselect.analysis import flexibility_table, format_flexibility_table, sweep_constraint

cs = golden.load_candidate_set()
settings = golden.load_settings()

rows = flexibility_table(cs)
print(format_flexibility_table(rows))

# the exact values behind the table
for label, m, rep in rows[1:]:
    print(label, rep.extreme_value, rep.achieving_assignment, rep.method)

# readability bound k2: 37/5 is the floor, but only {p11,p21,p31} gets there
# and that selection adds four words, so k1 = 0 rules it out
model = build_model(cs, settings.constraints, settings.weights)
for value, sol in sweep_constraint(model, "k2", ["7", "7.4", "7.5", "8", "8.25", "10"]):
    print(f"k2={str(value):>5}  {sol.status.name:<10}  z={sol.z}  {sol.assignment}")

# function-word share: {p32} alone gives 16/30, so past that the solver has
# to pay for p21 as well; nothing feasible reaches 0.6
for value, sol in sweep_constraint(model, "k3", ["0.5", "0.525", "0.55", "0.575", "0.6"]):
    print(f"k3={str(value):>6}  {sol.status.name:<10}  z={sol.z}  {sol.assignment}")
