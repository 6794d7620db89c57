import random
from math import isqrt

import pytest

from floorforms.arith import squarefree_divisors
from floorforms.coset import ResidueTriple, build_coset, diagonal_coset, floor_to_coset, l_value
from floorforms.floorform import FloorForm, eval_form
from floorforms.planner import plan_residues_abc, plan_residues_m
from floorforms.theta import (
    coset_theta_coefficients,
    obstruction_modulus,
    obstruction_scan,
    obstruction_sets,
    residue_class_theta,
    unary_theta_coefficients,
)


def congruence_count(weights, moduli, residues, l):
    """#{v in Z^3 : v_i = r_i (mod k_i), sum w_i v_i^2 == l} by direct loops."""
    bounds = [isqrt(l // w) for w in weights]
    total = 0
    for x in range(-bounds[0], bounds[0] + 1):
        if (x - residues[0]) % moduli[0]:
            continue
        for y in range(-bounds[1], bounds[1] + 1):
            if (y - residues[1]) % moduli[1]:
                continue
            rest = l - weights[0] * x * x - weights[1] * y * y
            if rest < 0:
                continue
            for z in range(-bounds[2], bounds[2] + 1):
                if (z - residues[2]) % moduli[2] == 0 and weights[2] * z * z == rest:
                    total += 1
    return total


def test_unit_lattice():
    assert coset_theta_coefficients(diagonal_coset(1, 1, 1), 1).coefficients == (1, 6)
    assert coset_theta_coefficients(diagonal_coset(1, 1, 1), 0).coefficients == (1,)


def test_sum_of_three_squares_counts():
    th = coset_theta_coefficients(diagonal_coset(1, 1, 1), 200)
    for n in range(201):
        assert th[n] == congruence_count((1, 1, 1), (1, 1, 1), (0, 0, 0), n)


def test_m3_residue_class_example():
    f = FloorForm(3, 3, 3)
    r = ResidueTriple.from_residues(f, 2, 2, 0)
    assert residue_class_theta(f, r, 8)[8] == congruence_count((1, 1, 1), (3, 3, 3), (2, 2, 0), 8) == 1
    coset = build_coset(f, r)
    assert coset_theta_coefficients(coset, 8)[8] == congruence_count((1, 1, 1), (6, 6, 6), (2, 2, 0), 8)


def test_constant_term_detects_zero_shift():
    f = FloorForm(5, 7, 9)
    for g in [(0, 0, 0), (1, 0, 0), (0, 3, 0), (10, 14, 18)]:
        coset = build_coset(f, ResidueTriple.from_residues(f, *g))
        assert coset_theta_coefficients(coset, 0)[0] == (1 if coset.shift_in_lattice else 0)


def test_coefficients_are_counts():
    f = FloorForm(2, 3, 5)
    coset = build_coset(f, ResidueTriple.from_residues(f, 1, 2, 3))
    assert all(c >= 0 for c in coset_theta_coefficients(coset, 3000).coefficients)


def test_duality_with_congruence_count():
    rng = random.Random(2024)
    done = 0
    while done < 50:
        f = FloorForm(*(rng.randint(1, 9) for _ in range(3)))
        x, y, z = (rng.randint(-12, 12) for _ in range(3))
        n = eval_form(f, x, y, z)
        r, l = floor_to_coset(f, n, (x, y, z))
        if l > 2000:
            continue
        coset = build_coset(f, r)
        th = coset_theta_coefficients(coset, l)
        count = congruence_count(coset.weights, coset.scales, coset.offsets, l)
        assert th[l] == count >= 1
        done += 1


def test_rejects_negative_n_max():
    with pytest.raises(ValueError):
        coset_theta_coefficients(diagonal_coset(1, 1, 1), -1)


# -------------------------------------------------------------------- unary


def test_unary_examples():
    u = unary_theta_coefficients(6, 1, 1, 30)
    assert u[25] == -5 and u[1] == 1
    assert all(u[e] == 0 for e in range(31) if isqrt(e) ** 2 != e)


@pytest.mark.parametrize("N", [6, 10, 30])
def test_unary_support(N):
    for t in squarefree_divisors(N):
        for h in range(N // t):
            u = unary_theta_coefficients(N, t, h, 1000)
            for e, v in enumerate(u.coefficients):
                if v:
                    assert e % t == 0 and isqrt(e // t) ** 2 == e // t
                # independent signed sum
                if e % t == 0 and isqrt(e // t) ** 2 == e // t:
                    r = isqrt(e // t)
                    expect = sum(s for s in {r, -r} if (s - h) % (N // t) == 0)
                    assert v == expect


def test_unary_rejects_bad_parameters():
    with pytest.raises(ValueError):
        unary_theta_coefficients(6, 4, 0, 10)
    with pytest.raises(ValueError):
        unary_theta_coefficients(12, 4, 0, 10)
    with pytest.raises(ValueError):
        unary_theta_coefficients(6, 2, 3, 10)


# -------------------------------------------------------------- obstructions


def test_obstruction_examples():
    p = plan_residues_m(5, 1)
    assert p.l == 9 and obstruction_sets(p.form, 1, p.residues) == {1}
    p = plan_residues_m(10, 4)
    assert p.l == 41 and obstruction_sets(p.form, 4, p.residues) == frozenset()
    f = FloorForm(5, 13, 21)
    r = ResidueTriple.from_residues(f, 2, 2, 2)
    assert l_value(f, 5, r) == 8597 and obstruction_sets(f, 5, r) == frozenset()


def test_obstruction_modulus():
    assert obstruction_modulus(FloorForm(5, 5, 5)) == 10
    assert obstruction_modulus(FloorForm(10, 10, 10)) == 10
    assert obstruction_modulus(FloorForm(5, 7, 9)) == 630


def test_scan_m10_only_square_obstructions_resolved_by_escape():
    rep = obstruction_scan(FloorForm(10, 10, 10), 0, 500)
    # l = 10n + 1 is a square for n = 0, 8, 12, ...; the direct square escape covers them
    assert [e["n"] for e in rep["entries"]] == [n for n in range(0, 501, 2) if isqrt(10 * n + 1) ** 2 == 10 * n + 1]
    assert all(e["obstruction_ts"] == [1] and e["escape"] for e in rep["entries"])


def test_scan_m5_escapes():
    rep = obstruction_scan(FloorForm(5, 5, 5), 0, 500)
    assert rep["entries"]
    assert all(e["obstruction_ts"] == [1] and e["escape"] for e in rep["entries"])


@pytest.mark.parametrize("form", [(6, 5, 7), (5, 7, 11), (5, 13, 21)])
def test_scan_abc_empty(form):
    assert obstruction_scan(FloorForm(*form), 0, 500)["all_empty"]


def test_scan_rejects_bad_mode():
    with pytest.raises(ValueError):
        obstruction_scan(FloorForm(5, 7, 9), 0, 10, planner_mode="m_form")


def test_empty_obstruction_kills_unary_coefficients():
    for form, plan_for in [
        (FloorForm(10, 10, 10), lambda n: plan_residues_m(10, n)),
        (FloorForm(6, 5, 7), lambda n: plan_residues_abc(6, 5, 7, n)),
    ]:
        for n in range(0, 200, 9):
            plan = plan_for(n)
            if obstruction_sets(plan.form, n, plan.residues, plan.convention):
                continue
            N = obstruction_modulus(plan.form, plan.convention)
            for t in squarefree_divisors(N):
                for h in range(N // t):
                    assert unary_theta_coefficients(N, t, h, plan.l)[plan.l] == 0
