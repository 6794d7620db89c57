"""
Theta coefficients as lattice point counts
==========================================
"""

import numpy as np

from floorforms import FloorForm
from floorforms.coset import ResidueTriple, diagonal_coset
from floorforms.theta import coset_theta_coefficients, residue_class_theta, unary_theta_coefficients

# r_3(n) for the first few n
th = coset_theta_coefficients(diagonal_coset(1, 1, 1), 20)
print("r3:", list(th.coefficients))

# <2,3,3> skips exactly 9^k(3h+1)
th = coset_theta_coefficients(diagonal_coset(2, 3, 3), 60)
print("<2,3,3> misses:", [n for n, c in enumerate(th.coefficients) if c == 0])

# solutions of x^2+y^2+z^2 = 8 with (x,y,z) = (2,2,0) mod 3
f = FloorForm(3, 3, 3)
print(residue_class_theta(f, ResidueTriple.from_residues(f, 2, 2, 0), 8)[8])

u = np.array(unary_theta_coefficients(6, 1, 1, 50).coefficients)
print("unary theta support:", np.flatnonzero(u), u[u != 0])
