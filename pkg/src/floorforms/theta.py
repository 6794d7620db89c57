"""q-expansion coefficients of shifted-lattice and unary theta series.

Coefficients are indexed on the l-value scale: entry n of a coset theta
counts lattice points X with Q(X + v) == n.  Only the square-class
obstructions that control the unary part are computed; the analytic
decomposition itself is not.
"""

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .arith import is_squarefree, square_class_test, squarefree_divisors
from .coset import M_FORM, build_coset, default_convention, delta_of, l_value, lift_residues

__all__ = [
    "ThetaSeries",
    "coset_theta_coefficients",
    "residue_class_theta",
    "unary_theta_coefficients",
    "obstruction_modulus",
    "obstruction_sets",
    "obstruction_scan",
]


@dataclass(frozen=True)
class ThetaSeries:
    n_max: int
    coefficients: tuple

    def __getitem__(self, n):
        return self.coefficients[n]

    def to_dict(self):
        return {"n_max": self.n_max, "coefficients": list(self.coefficients)}


def _coordinate_counts(w, s, o, n_max):
    """counts[k] = #{X : w (s X + o)^2 == k} for k <= n_max."""
    counts = np.zeros(n_max + 1, dtype=np.int64)
    u_max = isqrt(n_max // w) if w <= n_max else 0
    # u = s X + o ranges over the residue class of o mod s within [-u_max, u_max]
    start = -u_max + (o + u_max) % s
    u = np.arange(start, u_max + 1, s, dtype=np.int64)
    vals = w * u * u
    vals = vals[vals <= n_max]
    np.add.at(counts, vals, 1)
    return counts


def _truncated_convolve(u, v, n_max):
    out = np.zeros(n_max + 1, dtype=np.int64)
    for i in np.flatnonzero(u):
        out[i:] += u[i] * v[: n_max + 1 - i]
    return out


def coset_theta_coefficients(coset, n_max):
    """r(n) = #{X in Z^3 : Q(X + v) == n} for 0 <= n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    parts = [
        _coordinate_counts(w, s, o, n_max)
        for w, s, o in zip(coset.weights, coset.scales, coset.offsets)
    ]
    acc = _truncated_convolve(parts[0], parts[1], n_max)
    acc = _truncated_convolve(acc, parts[2], n_max)
    return ThetaSeries(n_max, tuple(int(c) for c in acc))


def residue_class_theta(form, residues, n_max, convention=None):
    """Theta of the class x = alpha (mod a), y = beta (mod b), z = gamma (mod c).

    When delta = 1 this class splits into eight cosets (alpha or alpha + a,
    and so on); their theta series are summed.
    """
    d = delta_of(form)
    total = np.zeros(n_max + 1, dtype=np.int64)
    for e1 in range(2**d):
        for e2 in range(2**d):
            for e3 in range(2**d):
                lifted = lift_residues(form, residues, (e1, e2, e3))
                total += coset_theta_coefficients(build_coset(form, lifted, convention), n_max).coefficients
    return ThetaSeries(n_max, tuple(int(c) for c in total))


def unary_theta_coefficients(N, t, h, n_max):
    """Coefficient e is the sum of r over r = h (mod N/t) with t r^2 == e."""
    if N < 1 or t < 1 or N % t or not is_squarefree(t):
        raise ValueError(f"t={t} must be a squarefree divisor of N={N}")
    step = N // t
    if not 0 <= h < step:
        raise ValueError(f"h must lie in [0, {step})")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    coeffs = [0] * (n_max + 1)
    r_max = isqrt(n_max // t)
    start = -r_max + (h + r_max) % step
    for r in range(start, r_max + 1, step):
        coeffs[t * r * r] += r
    return ThetaSeries(n_max, tuple(coeffs))


def obstruction_modulus(form, convention=None):
    """2^delta * abc, or 2^delta * m for the m-form convention."""
    convention = convention or default_convention(form)
    base = form.a if convention == M_FORM else form.a * form.b * form.c
    return 2 ** delta_of(form) * base


def obstruction_sets(form, n, residues, convention=None):
    """Squarefree t dividing the obstruction modulus with l(n) = t r^2."""
    l = l_value(form, n, residues, convention)
    return frozenset(
        t for t in squarefree_divisors(obstruction_modulus(form, convention))
        if square_class_test(l, t)
    )


def obstruction_scan(form, n_lo, n_hi, planner_mode=None):
    """Run the planner for every n in [n_lo, n_hi] and collect obstructions.

    Returns a dict listing each n with a nonempty obstruction set together
    with whether the direct-square escape resolved it.
    """
    from .planner import ESCAPE, plan_residues_abc, plan_residues_m, verify_plan

    if n_lo < 0 or n_lo > n_hi:
        raise ValueError(f"bad range [{n_lo}, {n_hi}]")
    planner_mode = planner_mode or default_convention(form)
    if planner_mode == M_FORM:
        if not form.is_diagonal_m:
            raise ValueError(f"m-form planner needs a == b == c, got {form}")
        plan_for = lambda n: plan_residues_m(form.a, n)
    else:
        plan_for = lambda n: plan_residues_abc(form.a, form.b, form.c, n)
    entries = []
    for n in range(n_lo, n_hi + 1):
        plan = plan_for(n)
        ts = obstruction_sets(plan.form, n, plan.residues, plan.convention)
        if not ts:
            continue
        ver = verify_plan(plan)
        entries.append(
            {
                "n": n,
                "l": plan.l,
                "obstruction_ts": sorted(ts),
                "escape": ver.verdict == ESCAPE,
                "verdict": ver.verdict,
            }
        )
    return {
        "form": list(form.coeffs),
        "n_lo": n_lo,
        "n_hi": n_hi,
        "planner_mode": planner_mode,
        "entries": entries,
        "all_empty": not entries,
    }
