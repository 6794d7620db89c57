"""
Pairwise coprime coefficients
=============================

For pairwise coprime a, b, c >= 5 the planner sorts the coefficients by
their power of two and follows one of three branches.  Some prescribed
residue choices miss their own target class; the planner then searches
for a nearby choice that works and says so in the label.
"""

from floorforms import FloorForm
from floorforms.planner import plan_residues_abc, verify_plan
from floorforms.theta import obstruction_scan

for triple, n in [((6, 5, 7), 0), ((6, 5, 7), 2), ((5, 13, 21), 5), ((5, 8, 21), 2)]:
    plan = plan_residues_abc(*triple, n)
    ver = verify_plan(plan)
    print(triple, n, plan.case_label, "l mod 8 =", plan.l % 8, ver.verdict)
    for w in ver.warnings:
        print("   ", w)

# the literal residue choice, without repair
literal = plan_residues_abc(6, 5, 7, 2, repair=False)
print("literal:", literal.residues.greek, "l mod 4 =", literal.l % 4, verify_plan(literal).verdict)

# no square-class obstructions anywhere in range
rep = obstruction_scan(FloorForm(5, 13, 21), 0, 1000)
print("(5,13,21) obstruction-free on [0,1000]:", rep["all_empty"])
