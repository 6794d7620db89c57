import random
from fractions import Fraction
from itertools import product

import pytest

from floorforms.coset import (
    ABC_FORM,
    M_FORM,
    ResidueTriple,
    build_coset,
    coset_represents_global,
    coset_value,
    delta_of,
    diagonal_coset,
    floor_to_coset,
    l_value,
    lattice_point,
    lift_residues,
    residue_square,
)
from floorforms.floorform import FloorForm, Representation, eval_form, search_representation


def res(form, a0, b0, c0, greek=(0, 0, 0)):
    return ResidueTriple(*greek, a0, b0, c0)


@pytest.mark.parametrize("form, d", [((5, 7, 9), 1), ((10, 10, 10), 0), ((6, 10, 14), 0), ((1, 1, 1), 1)])
def test_delta(form, d):
    assert delta_of(FloorForm(*form)) == d


@pytest.mark.parametrize("alpha, a, r", [(7, 10, 9), (5, 10, 5), (2, 5, 4), (-3, 5, 4)])
def test_residue_square(alpha, a, r):
    assert residue_square(alpha, a) == r


def test_residue_square_rejects_bad_modulus():
    with pytest.raises(ValueError):
        residue_square(3, 0)


def test_residue_triple_validity():
    form = FloorForm(5, 7, 9)
    r = ResidueTriple.from_residues(form, 3, 8, -2)
    assert r.reduced == (4, 1, 4) and r.is_valid_for(form)
    assert not ResidueTriple(3, 0, 0, 3, 0, 0).is_valid_for(form)


def test_l_value_examples():
    m10 = FloorForm(10, 10, 10)
    assert l_value(m10, 4, ResidueTriple.from_residues(m10, 1, 0, 0)) == 41
    assert l_value(m10, 1, ResidueTriple.from_residues(m10, 1, 0, 4)) == 17
    assert 10 + 5 + 3 + (-1) ** ((10 + 2) // 4) == 17
    f = FloorForm(6, 5, 7)
    l = l_value(f, 0, ResidueTriple.from_residues(f, 1, 1, 1))
    assert l == 35 + 42 + 30 == 107 and l % 4 == 3


def test_conventions_differ_by_m_squared():
    m = FloorForm(7, 7, 7)
    r = ResidueTriple.from_residues(m, 2, 3, 1)
    assert l_value(m, 5, r, ABC_FORM) == 49 * l_value(m, 5, r, M_FORM)
    with pytest.raises(ValueError):
        l_value(FloorForm(5, 7, 9), 1, r, M_FORM)


def test_build_coset_examples():
    f = FloorForm(5, 7, 9)
    c = build_coset(f, ResidueTriple.from_residues(f, 1, 1, 1))
    assert (c.delta, c.N, c.A_diagonal, c.h) == (1, 630, (10, 14, 18), (63, 45, 35))
    assert c.gram_diagonal == (4 * 315 * 5, 4 * 315 * 7, 4 * 315 * 9)
    assert c.shift == (Fraction(1, 10), Fraction(1, 14), Fraction(1, 18))

    m = FloorForm(10, 10, 10)
    c = build_coset(m, ResidueTriple.from_residues(m, 3, 4, 7))
    assert (c.delta, c.N, c.A_diagonal, c.h) == (0, 10, (10, 10, 10), (3, 4, 7))

    one = FloorForm(1, 1, 1)
    c = build_coset(one, ResidueTriple.from_residues(one, 0, 0, 0))
    assert c.shift_in_lattice and all(s == 0 for s in c.shift)


def test_admissibility_random():
    rng = random.Random(7)
    for _ in range(100):
        f = FloorForm(*(rng.randint(1, 30) for _ in range(3)))
        r = ResidueTriple.from_residues(f, *(rng.randint(-50, 50) for _ in range(3)))
        c = build_coset(f, r)
        assert all((A * h) % c.N == 0 for A, h in zip(c.A_diagonal, c.h))
        # Q on shift + lattice is an integer
        for X in product(range(-1, 2), repeat=3):
            v = sum(g * (x + s) ** 2 for g, x, s in zip(c.gram_diagonal, X, c.shift))
            assert v.denominator == 1


def test_floor_to_coset_examples():
    f = FloorForm(3, 3, 3)
    r, l = floor_to_coset(f, 2, Representation(2, 2, 0))
    assert (r.greek, r.reduced, l) == ((2, 2, 0), (1, 1, 0), 8)
    assert 4 + 4 + 0 == l
    one = FloorForm(1, 1, 1)
    assert floor_to_coset(one, 3, (1, 1, 1))[1] == 3
    f = FloorForm(5, 7, 9)
    r, l = floor_to_coset(f, 1, (3, 0, 0))
    assert r.alpha == 3 and r.a0 == 4 and l == 315 + 63 * 4 == 567 == 63 * 9


def test_floor_to_coset_rejects_bad_witness():
    with pytest.raises(ValueError):
        floor_to_coset(FloorForm(3, 3, 3), 3, (2, 2, 0))


@pytest.mark.parametrize("form", [(5, 7, 9), (6, 5, 7), (4, 4, 4), (10, 10, 10), (2, 3, 9)])
def test_identity_and_lattice_point(form):
    f = FloorForm(*form)
    a, b, c = f.coeffs
    rng = random.Random(form[0])
    for _ in range(200):
        x, y, z = (rng.randint(-60, 60) for _ in range(3))
        n = eval_form(f, x, y, z)
        r, l = floor_to_coset(f, n, (x, y, z))
        if f.is_diagonal_m:
            assert x * x + y * y + z * z == l
        else:
            assert b * c * x * x + c * a * y * y + a * b * z * z == l
        coset = build_coset(f, r)
        X = lattice_point(coset, x, y, z)
        assert X is not None and coset_value(coset, *X) == l


def test_global_examples():
    assert coset_represents_global(diagonal_coset(1, 1, 1), 7) is None
    assert coset_represents_global(diagonal_coset(2, 3, 3), 1) is None
    f = FloorForm(3, 3, 3)
    r, l = floor_to_coset(f, 2, (2, 2, 0))
    assert coset_represents_global(build_coset(f, r), l) is not None


def test_global_search_agrees_with_enumeration():
    f = FloorForm(5, 7, 9)
    r = ResidueTriple.from_residues(f, 2, 3, 4)
    coset = build_coset(f, r)
    hits = {
        coset_value(coset, X, Y, Z)
        for X, Y, Z in product(range(-3, 4), repeat=3)
    }
    for l in range(0, 40000, 7):
        found = coset_represents_global(coset, l)
        if l in hits:
            assert found is not None
        if found is not None:
            assert coset_value(coset, *found) == l


def test_global_rejects_bad_bound():
    with pytest.raises(ValueError):
        coset_represents_global(diagonal_coset(1, 1, 1), 3, search_bound=0)


def test_lift_keeps_l_value():
    f = FloorForm(5, 7, 9)
    r = ResidueTriple.from_residues(f, 2, 3, 4)
    for eps in product((0, 1), repeat=3):
        lifted = lift_residues(f, r, eps)
        assert lifted.is_valid_for(f)
        assert l_value(f, 11, lifted) == l_value(f, 11, r)


def test_round_trip_small():
    for form in [(3, 3, 3), (5, 7, 9)]:
        f = FloorForm(*form)
        d = delta_of(f)
        ranges = [range(2**d * k) for k in f.coeffs]
        for n in range(40):
            direct = search_representation(f, n) is not None
            via = any(
                coset_represents_global(build_coset(f, ResidueTriple.from_residues(f, *g)),
                                        l_value(f, n, ResidueTriple.from_residues(f, *g)))
                is not None
                for g in product(*ranges)
            )
            assert direct == via, (form, n)
