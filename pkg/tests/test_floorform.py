import json
from itertools import product
from math import isqrt

import pytest
from hypothesis import given, settings, strategies as st

from floorforms import __version__
from floorforms.floorform import (
    FloorForm,
    Representation,
    ScanReport,
    eval_form,
    max_n,
    representation_count,
    represented_mask,
    scan_range,
    search_representation,
    squarefree_reduce,
)


def brute_values(form, hi):
    """Set of F-values <= hi by direct triple loop."""
    a, b, c = form.coeffs
    bound = [isqrt(k * (hi + 1)) + 1 for k in (a, b, c)]
    out = set()
    for x in range(bound[0] + 1):
        for y in range(bound[1] + 1):
            for z in range(bound[2] + 1):
                v = x * x // a + y * y // b + z * z // c
                if v <= hi:
                    out.add(v)
    return out


def brute_count(form, n):
    a, b, c = form.coeffs
    bx, by, bz = (isqrt(k * (n + 1)) + 1 for k in (a, b, c))
    return sum(
        1
        for x in range(-bx, bx + 1)
        for y in range(-by, by + 1)
        for z in range(-bz, bz + 1)
        if eval_form(form, x, y, z) == n
    )


def test_form_validation_and_parse():
    assert FloorForm.parse("5,7,9") == FloorForm(5, 7, 9)
    assert str(FloorForm(5, 7, 9)) == "5,7,9"
    for bad in ("5,7", "0,1,1", "a,b,c", "1, -2,3"):
        with pytest.raises(ValueError):
            FloorForm.parse(bad)
    with pytest.raises(ValueError):
        FloorForm(1, 0, 3)


@pytest.mark.parametrize(
    "form, xyz, v", [((3, 3, 3), (2, 2, 0), 2), ((1, 1, 1), (1, 1, 1), 3), ((5, 7, 9), (3, 0, 0), 1)]
)
def test_eval_form(form, xyz, v):
    assert eval_form(FloorForm(*form), *xyz) == v


def test_search_examples():
    assert search_representation(FloorForm(1, 1, 1), 7) is None
    assert search_representation(FloorForm(3, 3, 3), 0) == Representation(0, 0, 0)
    assert search_representation(FloorForm(2, 2, 2), 1) is None
    assert search_representation(FloorForm(3, 3, 3), 2) == Representation(2, 2, 0)


def test_search_ordering_is_colex_minimum():
    form = FloorForm(5, 7, 3)
    for n in range(60):
        a, b, c = form.coeffs
        cands = [
            (x, y, z)
            for x, y, z in product(range(25), repeat=3)
            if eval_form(form, x, y, z) == n
        ]
        best = min(cands, key=lambda t: t[::-1]) if cands else None
        got = search_representation(form, n)
        assert (got.as_tuple() if got else None) == best


@pytest.mark.parametrize("form, n, count", [((1, 1, 1), 0, 1), ((1, 1, 1), 1, 6)])
def test_count_examples(form, n, count):
    assert representation_count(FloorForm(*form), n) == count


def test_count_matches_enumeration():
    form = FloorForm(3, 3, 3)
    assert representation_count(form, 2) == brute_count(form, 2)
    for f in [(2, 3, 5), (5, 7, 9), (1, 2, 2)]:
        form = FloorForm(*f)
        for n in range(25):
            assert representation_count(form, n) == brute_count(form, n)


def test_empty_search_means_zero_count():
    for f in [(1, 1, 1), (2, 2, 2), (1, 2, 3)]:
        form = FloorForm(*f)
        for n in range(80):
            if search_representation(form, n) is None:
                assert representation_count(form, n) == 0


@pytest.mark.parametrize(
    "form, hi, exc",
    [
        ((3, 3, 3), 1000, []),
        ((2, 2, 2), 20, [1, 3, 5, 7, 9, 11, 13, 15, 17, 19]),
        ((1, 1, 1), 30, [7, 15, 23, 28]),
    ],
)
def test_scan_examples(form, hi, exc):
    rep = scan_range(FloorForm(*form), 0, hi)
    assert rep.exceptions == exc
    assert rep.tool_version == __version__


@pytest.mark.parametrize("form", [(1, 1, 1), (2, 3, 5), (6, 5, 7), (4, 9, 10)])
def test_mask_matches_triple_loop(form):
    form = FloorForm(*form)
    hi = 300
    vals = brute_values(form, hi)
    for lo in (0, 17, 250):
        mask = represented_mask(form, lo, hi)
        assert [bool(m) for m in mask] == [n in vals for n in range(lo, hi + 1)]


def test_scan_matches_search():
    form = FloorForm(2, 5, 6)
    rep = scan_range(form, 0, 400)
    assert rep.exceptions == [n for n in range(401) if search_representation(form, n) is None]


def test_scan_worker_determinism():
    form = FloorForm(1, 2, 7)
    one = scan_range(form, 3, 4000, workers=1)
    for w in (2, 3):
        many = scan_range(form, 3, 4000, workers=w)
        assert many.exceptions == one.exceptions


def test_scan_cap_and_bad_range(monkeypatch):
    with pytest.raises(ValueError):
        scan_range(FloorForm(1, 1, 1), 10, 5)
    with pytest.raises(ValueError):
        scan_range(FloorForm(1, 1, 1), 0, 50, cap=40)
    monkeypatch.setenv("FLOORFORM_MAX_N", "99")
    assert max_n() == 99
    with pytest.raises(ValueError):
        scan_range(FloorForm(1, 1, 1), 0, 100)


def test_scan_report_roundtrip():
    rep = scan_range(FloorForm(1, 1, 1), 0, 100)
    again = ScanReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert again == rep


@pytest.mark.parametrize(
    "form, reduced, mult",
    [((12, 27, 75), (3, 3, 3), (2, 3, 5)), ((1, 1, 1), (1, 1, 1), (1, 1, 1)), ((8, 18, 50), (2, 2, 2), (2, 3, 5))],
)
def test_squarefree_reduce(form, reduced, mult):
    assert squarefree_reduce(FloorForm(*form)) == (FloorForm(*reduced), mult)


def test_floor_scaling_identity_exhaustive():
    from floorforms.arith import squarefree_part

    for a in range(1, 201):
        s, t = squarefree_part(a)
        for x in range(-50, 51):
            assert (t * x) ** 2 // a == x * x // s


@settings(max_examples=300)
@given(st.integers(1, 10**6), st.integers(-(10**6), 10**6))
def test_floor_scaling_identity_random(a, x):
    from floorforms.arith import squarefree_part

    s, t = squarefree_part(a)
    assert (t * x) ** 2 // a == x * x // s


def test_reduction_transfers_witnesses():
    form = FloorForm(12, 27, 75)
    reduced, (ta, tb, tc) = squarefree_reduce(form)
    for n in range(200):
        w = search_representation(reduced, n)
        assert w is not None
        assert eval_form(form, ta * w.x, tb * w.y, tc * w.z) == n
