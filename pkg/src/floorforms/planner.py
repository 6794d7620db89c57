"""Residue selection following the almost-universality case analysis.

For a form and a target n the planner picks residues (alpha, beta, gamma)
the way the case analysis does, records the congruence class the argument
asserts for l(n), and :func:`verify_plan` re-checks every claim: the
congruence, local solubility at each prime dividing 2abc, coprimality with
the odd part of abc and the square-class obstructions.

Labels follow the branch structure, e.g. ``m/ord2=1/n-odd`` or
``abc/odd/a=b=c(4)/n=6(8)/mu=0/a=1(4)``.
"""

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .arith import exact_sqrt, is_prime, p_adic_ord, prime_divisors
from .coset import ABC_FORM, M_FORM, ResidueTriple, l_value
from .floorform import FloorForm, Representation, eval_form, search_representation
from .padic import LocalProblem, LocalStatus, shifted_quadratic_solvable, ternary_anisotropic
from .theta import obstruction_sets

__all__ = [
    "ResiduePlan",
    "PlanVerification",
    "HypothesisError",
    "CLEAN",
    "ESCAPE",
    "VIOLATED",
    "COVERED",
    "plan_residues_m",
    "plan_residues_abc",
    "plan_for_form",
    "local_problem",
    "local_statuses",
    "verify_plan",
    "escape_representation",
]

CLEAN = "clean"
ESCAPE = "escape_applies"
VIOLATED = "violated"
COVERED = "covered_by_universality"

# ord_p(l) at an anisotropic prime at or above this is reported as a warning
ANISOTROPIC_ORD_WARNING = 4

# residues tried by the repair search stay below this bound
REPAIR_BOUND = 24

# l mod 8 in this set is neither a square nor twice a square; with l prime to
# the odd part of abc this already empties every obstruction set
NON_SQUARE_CLASSES = (8, frozenset({3, 5, 6, 7}))


class HypothesisError(ValueError):
    """Inputs outside the hypotheses of the case analysis."""


@dataclass
class ResiduePlan:
    form: FloorForm
    n: int
    residues: ResidueTriple
    case_label: str
    l: int
    convention: str
    claimed_congruence: tuple
    escape: bool = False
    mu: int = None
    k_aux: int = None
    original_form: FloorForm = None
    permutation: tuple = (0, 1, 2)
    multipliers: tuple = (1, 1, 1)
    covered_by_universality: bool = False
    claims_coprime: bool = True
    prescribed: ResidueTriple = None
    prescribed_claim: tuple = None

    @property
    def repaired(self):
        return self.prescribed is not None

    def to_dict(self):
        return {
            "form": list(self.form.coeffs),
            "original_form": list((self.original_form or self.form).coeffs),
            "permutation": list(self.permutation),
            "multipliers": list(self.multipliers),
            "n": self.n,
            "residues": self.residues.to_dict(),
            "case_label": self.case_label,
            "convention": self.convention,
            "l": self.l,
            "claimed_congruence": _claim_dict(self.claimed_congruence),
            "escape": self.escape,
            "mu": self.mu,
            "k_aux": self.k_aux,
            "covered_by_universality": self.covered_by_universality,
            "claims_coprime": self.claims_coprime,
            "prescribed_residues": self.prescribed.to_dict() if self.prescribed else None,
            "prescribed_claim": _claim_dict(self.prescribed_claim) if self.prescribed_claim else None,
        }


def _claim_dict(claim):
    mod, classes = claim
    return {"modulus": mod, "allowed_classes": sorted(classes)}


@dataclass
class PlanVerification:
    congruence_ok: bool
    local_statuses: list
    coprime_to_odd_divisors: bool
    obstruction_ts: frozenset
    verdict: str
    anisotropic_ords: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    escape_witness: Representation = None
    brute_force_witness: Representation = None

    @property
    def locally_solvable(self):
        return all(s.solvable for s in self.local_statuses)

    def to_dict(self):
        wit = lambda r: list(r.as_tuple()) if r else None
        return {
            "congruence_ok": self.congruence_ok,
            "local_statuses": [s.to_dict() for s in self.local_statuses],
            "coprime_to_odd_divisors": self.coprime_to_odd_divisors,
            "obstruction_ts": sorted(self.obstruction_ts),
            "verdict": self.verdict,
            "anisotropic_ords": {str(p): k for p, k in sorted(self.anisotropic_ords.items())},
            "warnings": list(self.warnings),
            "escape_witness": wit(self.escape_witness),
            "brute_force_witness": wit(self.brute_force_witness),
        }


def _odd_part(k):
    while k % 2 == 0:
        k //= 2
    return k


def _is_square(l):
    return exact_sqrt(l) is not None


# ---------------------------------------------------------------- m-form


def plan_residues_m(m, n):
    """Residues for floor(x^2/m) + floor(y^2/m) + floor(z^2/m) at n."""
    if m < 3:
        raise HypothesisError(f"m must be >= 3, got {m}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    form = FloorForm(m, m, m)
    e = p_adic_ord(2, m)
    k_aux = None
    claims_coprime = True
    if e == 1:
        covered = m < 10
        if n % 2 == 0:
            greek, label = (1, 0, 0), "m/ord2=1/n-even"
        else:
            half = (m - 2) // 4  # m = 2(2*half + 1)
            if m % 8 == 6:
                k_aux, gamma = half, m // 2
            else:
                k_aux, gamma = half - 1, m // 2 - 1
            alpha = (3 + (-1) ** ((m + 2) // 4)) // 2
            greek, label = (alpha, 0, gamma), "m/ord2=1/n-odd"
    elif e >= 2:
        covered = False
        if n % 2 == 0:
            greek, label = (1, 0, 0), "m/ord2>=2/n-even"
        else:
            if e == 2:
                k_aux, gamma = m // 4, m // 2
            else:
                k_aux, gamma = m // 4 - 1, m // 2 - 1
            c0 = gamma * gamma - k_aux * m
            greek, label = (1 - c0, 0, gamma), "m/ord2>=2/n-odd"
    else:
        covered = m < 5
        if n % 4 == 0:
            greek, label = (1, 0, 0), "m/odd/n=0(4)"
        elif n % 4 == 2:
            greek, label = (1, 1, 1), "m/odd/n=2(4)"
            claims_coprime = False  # 3 | gcd(l, m) is possible here
        elif m % 4 == n % 4:
            greek, label = (2, 0, 0), "m/odd/n-odd/m=n(4)"
        else:
            greek, label = (1, 1, 0), "m/odd/n-odd/m!=n(4)"
    residues = ResidueTriple.from_residues(form, *greek)
    l = l_value(form, n, residues, M_FORM)
    claim = (4, frozenset({1}))
    if covered:
        # the argument defers to known universality here and claims nothing
        label += "/covered"
        claim = (1, frozenset({0}))
    return ResiduePlan(
        form=form,
        n=n,
        residues=residues,
        case_label=label,
        l=l,
        convention=M_FORM,
        claimed_congruence=claim,
        escape=_is_square(l),
        k_aux=k_aux,
        original_form=form,
        covered_by_universality=covered,
        claims_coprime=claims_coprime,
    )


# -------------------------------------------------------------- abc-form

# (b0, c0) in the order (1,1), (1,4), (4,1), (4,4)
_BETA_GAMMA_ORDER = ((1, 1), (1, 2), (2, 1), (2, 2))


def _check_abc_hypotheses(a, b, c):
    for v in (a, b, c):
        if v < 5:
            raise HypothesisError(f"every coefficient must be >= 5, got {v}")
    for u, v in ((a, b), (a, c), (b, c)):
        if gcd(u, v) != 1:
            raise HypothesisError(f"coefficients must be pairwise coprime: gcd({u},{v}) > 1")


def _first_matching(form, n, alphas, target):
    """First (alpha, beta, gamma) with l(n) mod 8 in target, in the order the branch lists them."""
    candidates = [(al, be, ga) for al in alphas for be, ga in _BETA_GAMMA_ORDER]
    for greek in candidates:
        res = ResidueTriple.from_residues(form, *greek)
        if l_value(form, n, res, ABC_FORM) % 8 in target:
            return res
    return ResidueTriple.from_residues(form, *candidates[0])


def _odd_case_order(coeffs):
    """Reorder odd coefficients so that b = c mod 4, and mod 8 when possible."""
    a, b, c = coeffs
    m4 = [v % 4 for v in coeffs]
    if not (m4[0] == m4[1] == m4[2]):
        for i in range(3):
            others = [j for j in range(3) if j != i]
            if m4[others[0]] == m4[others[1]]:
                return (i, *others)
    m8 = [v % 8 for v in coeffs]
    for i in range(3):
        others = [j for j in range(3) if j != i]
        if m8[others[0]] == m8[others[1]]:
            return (i, *others)
    raise AssertionError("unreachable: two of three odd classes agree mod 8")


def _case1(form, n):
    a, b, c = form.coeffs
    claim = (4, frozenset({3}))
    if n % 4 == 0:
        gamma = 1 if b % 4 != c % 4 else 2
        return (1, 1, gamma), "abc/ord2(a)=1/n=0(4)", claim
    if n % 4 == 2:
        bg = (1, 2) if b % 4 != c % 4 else (2, 2)
        return (1, *bg), "abc/ord2(a)=1/n=2(4)", claim
    beta = 1 if b % 4 != n % 4 else 2
    gamma = beta - 1 if c % 4 != b % 4 else beta
    return (1, beta, gamma), "abc/ord2(a)=1/n-odd", claim


def _case2(form, n):
    a, b, c = form.coeffs
    claim = (8, frozenset({3, 5, 7}))
    bc1 = (b * c) % 8 == 1
    if n % 2 == 0:
        return (1, 1, 2 if bc1 else 1), "abc/ord2(a)=2/n-even", claim
    return (1, 1, 1 if bc1 else 2), "abc/ord2(a)=2/n-odd", claim


def _case3_mixed(form, n):
    a, b, c = form.coeffs
    claim = (4, frozenset({3}))
    if n % 2 == 0:
        t = 1 if n % 4 == 0 else 2
        return (1, t, t), "abc/odd/a!=b=c(4)/n-even", claim
    al, ga = (2, 1) if a % 4 == n % 4 else (1, 2)
    return (al, 1, ga), "abc/odd/a!=b=c(4)/n-odd", claim


def plan_residues_abc(a, b, c, n, repair=True):
    """Residues for floor(x^2/a) + floor(y^2/b) + floor(z^2/c) at n.

    Requires a, b, c >= 5 pairwise coprime.  The working form puts the
    coefficient with the largest 2-adic order first and strips a square power
    of 2 from it when that order is >= 2 (recorded in ``multipliers``).  With
    ``repair`` set, a prescribed choice that fails its own congruence or
    2-adic claim is replaced by the first small residue triple that meets
    them; the prescribed triple is kept in ``plan.prescribed``.
    """
    _check_abc_hypotheses(a, b, c)
    if n < 0:
        raise ValueError("n must be nonnegative")
    original = FloorForm(a, b, c)
    coeffs = original.coeffs
    perm = tuple(sorted(range(3), key=lambda i: -p_adic_ord(2, coeffs[i])))
    work = [coeffs[i] for i in perm]
    e = p_adic_ord(2, work[0])
    if e >= 2:
        drop = (e - 1) // 2 if e % 2 else (e - 2) // 2
        work[0] //= 4**drop
    mu = None
    k_aux = None
    if e >= 1:
        form = FloorForm(*work)
        greek, label, claim = (_case1 if e % 2 else _case2)(form, n)
        residues = ResidueTriple.from_residues(form, *greek)
    else:
        order = _odd_case_order(work)
        perm = tuple(perm[i] for i in order)
        form = FloorForm(*(work[i] for i in order))
        if not (form.a % 4 == form.b % 4 == form.c % 4):
            greek, label, claim = _case3_mixed(form, n)
            residues = ResidueTriple.from_residues(form, *greek)
        else:
            form, perm, residues, label, claim, mu, k_aux = _case3_uniform(form, perm, n)
    l = l_value(form, n, residues, ABC_FORM)
    # with alpha = 2k+2 and gcd(a, 2k+2) = 3 the argument checks p = 3 locally
    # instead of claiming gcd(l, 3) = 1
    claims_coprime = not (
        label.endswith("n=6(8)/mu=0/a=1(4)") and residues.alpha == 2 * k_aux + 2 and gcd(form.a, residues.alpha) == 3
    )
    plan = ResiduePlan(
        form=form,
        n=n,
        residues=residues,
        case_label=label,
        l=l,
        convention=ABC_FORM,
        claimed_congruence=claim,
        mu=mu,
        k_aux=k_aux,
        original_form=original,
        permutation=perm,
        multipliers=_working_multipliers(perm, coeffs, form),
        claims_coprime=claims_coprime,
    )
    if repair and not _plan_claims_hold(plan):
        _repair(plan)
    return plan


def _working_multipliers(perm, coeffs, form):
    # original coefficient = multiplier^2 * working coefficient
    out = []
    for i, k in zip(perm, form.coeffs):
        q = coeffs[i] // k
        r = exact_sqrt(q)
        assert r is not None and r * r * k == coeffs[i]
        out.append(r)
    return tuple(out)


def _case3_uniform(form, perm, n):
    a, b, c = form.coeffs
    mu = 1 if a % 8 != b % 8 else 0
    lab = "abc/odd/a=b=c(4)"
    r = n % 8
    k_aux = None
    if r in (0, 4):
        greek = (1, 2, 2) if r == 4 else (1, 1, 1)
        claim = (8, frozenset({5} if r == 4 else {3}))
        return form, perm, ResidueTriple.from_residues(form, *greek), f"{lab}/n={r}(8)", claim, mu, None
    full = frozenset({3, 5, 6})
    if r in (1, 3, 5, 7):
        low = a % 8 in (1, 7)
        if r in (5, 3):
            alpha = 1 if low else 2
        else:
            alpha = 2 if low else 1
        res = _first_matching(form, n, (alpha,), full)
        return form, perm, res, f"{lab}/n={r}(8)", (8, full), mu, None
    if r == 6:
        if mu == 1:
            alpha = 1 if a % 4 == 3 else 2
            target = frozenset({3, 5})
            res = _first_matching(form, n, (alpha,), target)
            return form, perm, res, f"{lab}/n=6(8)/mu=1", (8, target), mu, None
        if a % 4 == 3:
            target = frozenset({5})
            res = _first_matching(form, n, (1,), target)
            return form, perm, res, f"{lab}/n=6(8)/mu=0/a=3(4)", (8, target), mu, None
        # a = 4k+1 needs k >= 3; all three agree mod 8 here, so pick such an a
        if (a - 1) // 4 < 3:
            for j in (1, 2):
                if (form.coeffs[j] - 1) // 4 >= 3:
                    co = list(form.coeffs)
                    co[0], co[j] = co[j], co[0]
                    pe = list(perm)
                    pe[0], pe[j] = pe[j], pe[0]
                    form, perm = FloorForm(*co), tuple(pe)
                    break
        a = form.a
        k = (a - 1) // 4
        target = frozenset({3, 5}) if k % 2 == 0 else frozenset({5, 6})
        res = _first_matching(form, n, (2 * k + 1, 2 * k + 2), target)
        return form, perm, res, f"{lab}/n=6(8)/mu=0/a=1(4)", (8, target), mu, k
    # r == 2
    if mu == 1:
        alpha = 1 if a % 4 == 1 else 2
        target = frozenset({3})
        res = _first_matching(form, n, (alpha,), target)
        return form, perm, res, f"{lab}/n=2(8)/mu=1", (8, target), mu, None
    if a % 4 == 1:
        target = frozenset({3})
        res = _first_matching(form, n, (1,), target)
        return form, perm, res, f"{lab}/n=2(8)/mu=0/a=1(4)", (8, target), mu, None
    k = (a - 3) // 4
    res = _first_matching(form, n, (2 * k + 1, 2 * k), full)
    return form, perm, res, f"{lab}/n=2(8)/mu=0/a=3(4)", (8, full), mu, k


def _plan_claims_hold(plan, residues=None):
    res = residues or plan.residues
    l = l_value(plan.form, plan.n, res, plan.convention)
    mod, classes = plan.claimed_congruence
    if l % mod not in classes:
        return False
    if plan.claims_coprime and gcd(l, _odd_part(_modulus_product(plan.form, plan.convention))) != 1:
        return False
    return all(s.solvable for s in local_statuses(plan.form, plan.n, res, plan.convention))


def _search_repair(plan):
    ranges = [range(1, min(k, REPAIR_BOUND)) for k in plan.form.coeffs]
    for greek in sorted(product(*ranges), key=lambda g: (max(g), g)):
        res = ResidueTriple.from_residues(plan.form, *greek)
        if _plan_claims_hold(plan, res):
            return res
    return None


def _repair(plan):
    """Replace failing prescribed residues by the first small triple that works.

    The claimed class is kept when some triple reaches it; otherwise the claim
    is relaxed to NON_SQUARE_CLASSES, which serves the same purpose in the
    argument, and the original claim is kept in ``prescribed_claim``.
    """
    res = _search_repair(plan)
    suffix = "/repaired"
    if res is None:
        original = plan.claimed_congruence
        plan.claimed_congruence = NON_SQUARE_CLASSES
        res = _search_repair(plan)
        if res is None:
            plan.claimed_congruence = original
            return False
        plan.prescribed_claim = original
        suffix = "/repaired-class"
    plan.prescribed = plan.residues
    plan.residues = res
    plan.l = l_value(plan.form, plan.n, res, plan.convention)
    plan.case_label += suffix
    return True


def plan_for_form(form, n):
    """Dispatch to the m-form or abc-form planner."""
    if form.is_diagonal_m:
        return plan_residues_m(form.a, n)
    return plan_residues_abc(form.a, form.b, form.c, n)


# ---------------------------------------------------------- verification


def _modulus_product(form, convention):
    return form.a if convention == M_FORM else form.a * form.b * form.c


def local_problem(form, n, residues, p, convention=ABC_FORM):
    """The equation sum w_i (k_i X_i + r_i)^2 = l(n) over Z_p.

    k_i is the plain coefficient (no 2**delta factor): at odd p the factor is
    a unit, and at p = 2 this is the half-integral coset, i.e. the union of
    the cosets for all lifts alpha + eps*a.
    """
    l = l_value(form, n, residues, convention)
    if convention == M_FORM:
        weights = (1, 1, 1)
    else:
        weights = (form.b * form.c, form.c * form.a, form.a * form.b)
    terms = []
    target = l
    for w, k, r in zip(weights, form.coeffs, residues.greek):
        terms.append((w * k * k, 2 * w * k * r))
        target -= w * r * r
    return LocalProblem(p, tuple(terms), target)


def _control_primes(modulus, count=2):
    out = []
    p = 3
    while len(out) < count:
        if is_prime(p) and modulus % p:
            out.append(p)
        p += 2
    return out


def local_statuses(form, n, residues, convention=ABC_FORM, primes=None):
    modulus = _modulus_product(form, convention)
    if primes is None:
        primes = sorted(set(prime_divisors(2 * modulus)) | set(_control_primes(2 * modulus)))
    return [
        shifted_quadratic_solvable(local_problem(form, n, residues, p, convention))
        for p in primes
    ]


def escape_representation(m, n, plan):
    """(sqrt(l), 0, 0) when l is a square and a0 + b0 + c0 < m."""
    root = exact_sqrt(plan.l)
    if root is None:
        raise ValueError(f"l = {plan.l} is not a perfect square")
    if sum(plan.residues.reduced) >= m:
        return None
    if root * root // m != n:
        return None
    return Representation(root, 0, 0)


def verify_plan(plan):
    form, l = plan.form, plan.l
    mod, classes = plan.claimed_congruence
    congruence_ok = l % mod in classes
    statuses = local_statuses(form, plan.n, plan.residues, plan.convention)
    modulus = _modulus_product(form, plan.convention)
    coprime = gcd(l, _odd_part(modulus)) == 1
    ts = obstruction_sets(form, plan.n, plan.residues, plan.convention)

    weights = (1, 1, 1) if plan.convention == M_FORM else (form.b * form.c, form.c * form.a, form.a * form.b)
    aniso = {}
    warnings = []
    for p in prime_divisors(2 * modulus):
        if ternary_anisotropic(p, *weights):
            k = p_adic_ord(p, l) if l else None
            aniso[p] = k
            if k is None or k >= ANISOTROPIC_ORD_WARNING:
                warnings.append(f"ord_{p}(l) = {k} at anisotropic prime {p}")
    if plan.repaired:
        warnings.append("prescribed residues failed their claims; repaired by search")
    if plan.prescribed_claim is not None:
        warnings.append("prescribed congruence class unreachable; relaxed to l mod 8 in {3,5,6,7}")

    out = PlanVerification(
        congruence_ok=congruence_ok,
        local_statuses=statuses,
        coprime_to_odd_divisors=coprime,
        obstruction_ts=ts,
        verdict=VIOLATED,
        anisotropic_ords=aniso,
        warnings=warnings,
    )
    if plan.covered_by_universality:
        wit = search_representation(plan.original_form or form, plan.n)
        out.brute_force_witness = wit
        out.verdict = COVERED if wit is not None else VIOLATED
        return out
    if not congruence_ok or not out.locally_solvable:
        return out
    if plan.claims_coprime and not coprime:
        return out
    if not ts:
        out.verdict = CLEAN
        return out
    if ts == frozenset({1}) and plan.escape and plan.convention == M_FORM:
        wit = escape_representation(form.a, plan.n, plan)
        if wit is not None and eval_form(form, *wit.as_tuple()) == plan.n:
            out.escape_witness = wit
            out.verdict = ESCAPE
    return out
