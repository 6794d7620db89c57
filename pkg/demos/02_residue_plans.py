"""
Residue plans for floor(x^2/m) + floor(y^2/m) + floor(z^2/m)
=============================================================

A plan picks residues for x, y, z so that n becomes a question about
one integer l.  verify_plan then checks l locally at each relevant prime
and looks for square-class obstructions.
"""

from collections import Counter

from floorforms import FloorForm, eval_form
from floorforms.planner import plan_residues_m, verify_plan

plan = plan_residues_m(10, 4)
print(plan.case_label, "l =", plan.l, "claim:", plan.claimed_congruence)
ver = verify_plan(plan)
print("verdict:", ver.verdict, [(s.prime, s.solvable) for s in ver.local_statuses])

# when l happens to be a perfect square, a direct witness takes over
ver = verify_plan(plan_residues_m(5, 1))
print("m=5, n=1:", ver.verdict, "witness", ver.escape_witness)

# tally verdicts over a range
for m in (10, 14, 23):
    tally = Counter(verify_plan(plan_residues_m(m, n)).verdict for n in range(2000))
    print(m, dict(tally))

# every escape witness really does hit n
m = 14
for n in range(2000):
    v = verify_plan(plan_residues_m(m, n))
    if v.escape_witness is not None:
        assert eval_form(FloorForm(m, m, m), *v.escape_witness.as_tuple()) == n
print("escape witnesses for m=14 check out")
