"""
Scanning floor forms
====================

Which n can be written as floor(x^2/a) + floor(y^2/b) + floor(z^2/c)?
A scan answers it for a whole range at once.
"""

from floorforms import FloorForm, scan_range, search_representation

# (1,1,1) is the plain sum of three squares, so the misses are 4^k(8h+7)
report = scan_range(FloorForm(1, 1, 1), 0, 100)
print("(1,1,1) misses:", report.exceptions)

# dividing by 2 before flooring makes every term even: odd numbers never show up
print("(2,2,2) misses:", scan_range(FloorForm(2, 2, 2), 0, 30).exceptions)

# with m = 3 nothing is missed at all
print("(3,3,3) misses up to 5000:", scan_range(FloorForm(3, 3, 3), 0, 5000, workers=2).exceptions)

# single witnesses, smallest z first, then y, then x
for n in (2, 17, 1000):
    print(n, "=", search_representation(FloorForm(3, 3, 3), n))

# a form with square factors behaves like its squarefree reduction
print("(12,27,75) misses up to 2000:", scan_range(FloorForm(12, 27, 75), 0, 2000).exceptions)
