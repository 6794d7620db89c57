"""Local solubility over the p-adic integers.

The central routine, :func:`shifted_quadratic_solvable`, decides whether

    sum_i (A_i * x_i**2 + B_i * x_i) == target

has a solution with every x_i in Z_p.  It tries two closed-form shortcuts
first and otherwise searches residues modulo p**M, accepting a residue
solution only when Hensel's lemma guarantees that it lifts.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product

import numpy as np

from .arith import is_prime, legendre_symbol, p_adic_ord

__all__ = [
    "INF",
    "Method",
    "LocalProblem",
    "LocalStatus",
    "PrecisionError",
    "unit_square_test",
    "zp_square_test",
    "lemma_local",
    "precision_floor",
    "default_precision",
    "stable_image",
    "shifted_quadratic_solvable",
    "hilbert_symbol",
    "ternary_anisotropic",
]

INF = "inf"

# Largest modulus p**M the residue search will allocate arrays for.
MAX_MODULUS = 1 << 23


class PrecisionError(ValueError):
    """Requested working precision cannot certify a Hensel lift."""


class Method(str, Enum):
    CLOSED_FORM_LEMMA = "closed_form_lemma"
    UNIMODULAR_SPLIT = "unimodular_split"
    RESIDUE_SEARCH = "residue_search"


@dataclass(frozen=True)
class LocalProblem:
    """sum_i (A_i x_i^2 + B_i x_i) == target over Z_p.

    ``precision`` is the exponent M of the working modulus p**M; ``None``
    lets the solver pick one.
    """

    p: int
    terms: tuple
    target: int
    precision: int = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple((int(A), int(B)) for A, B in self.terms))


@dataclass(frozen=True)
class LocalStatus:
    prime: int
    solvable: bool
    method: Method
    precision_used: int

    def to_dict(self):
        return {
            "prime": self.prime,
            "solvable": self.solvable,
            "method": self.method.value,
            "precision_used": self.precision_used,
        }


def _ord4p(p):
    return 3 if p == 2 else 1


def _check_prime(p):
    if not is_prime(p):
        raise ValueError(f"not a prime: {p}")


def unit_square_test(p, u):
    """Is the p-adic unit u a square in Z_p?"""
    _check_prime(p)
    if u % p == 0:
        raise ValueError(f"{u} is not a {p}-adic unit")
    if p == 2:
        return u % 8 == 1
    return legendre_symbol(u, p) == 1


def zp_square_test(p, n):
    """Is the nonzero integer n a square in Z_p?"""
    if n == 0:
        raise ValueError("zp_square_test needs n != 0")
    k = p_adic_ord(p, n)
    if k % 2:
        return False
    return unit_square_test(p, n // p**k)


def lemma_local(p, k, eps, eta, n):
    """Closed-form containment for one-variable shifted quadratics.

    Odd p: p^k*eps*x^2 + eta*x covers all of Z_p.  For p == 2 the shape is
    2^k*eps*x^2 + 2*eta*x, whose image contains 4Z_2 when k == 1 and 2Z_2
    when k >= 2.  The answer is the containment verdict, so False means
    "not covered by the lemma", not "not represented".
    """
    _check_prime(p)
    if k < 1:
        raise ValueError("k must be >= 1")
    if eps % p == 0 or eta % p == 0:
        raise ValueError("eps and eta must be p-adic units")
    if p != 2:
        return True
    if k == 1:
        return n % 4 == 0
    return n % 2 == 0


def precision_floor(p, terms):
    """Smallest working exponent M accepted for the given coefficients."""
    ords = [p_adic_ord(p, c) for A, B in terms for c in (A, B) if c]
    return _ord4p(p) + max(ords, default=0) + 2


def default_precision(p):
    return 2 * _ord4p(p) + 6


def _stability_margin(p, M):
    # derivative valuation j with j <= margin guarantees a lift from p**M
    return (M - _ord4p(p)) // 2 - 1


def _term_image_ideal(p, A, B):
    """Exponent j with p^j Z_p inside the image of A x^2 + B x, or None.

    Hensel's lemma when the linear coefficient dominates: after removing the
    common p-power e, a unit linear coefficient makes the map onto p^e Z_p
    (odd p with p | A, or p == 2 with A even) or onto p^(e+1) Z_2 (p == 2,
    A odd).
    """
    if B == 0:
        return None
    e = p_adic_ord(p, B)
    if A != 0:
        e = min(e, p_adic_ord(p, A))
    A1, B1 = A // p**e, B // p**e
    if B1 % p == 0:
        return None
    if p == 2:
        return e if A1 % 2 == 0 else e + 1
    if A1 % p == 0:
        return e
    return None


def _term_value(A, B, x):
    return A * x * x + B * x


def _try_lemma(p, terms, target):
    for i, (A, B) in enumerate(terms):
        j = _term_image_ideal(p, A, B)
        if j is None:
            continue
        others = [t for k, t in enumerate(terms) if k != i]
        for xs in product((0, 1), repeat=len(others)):
            r = target - sum(_term_value(A2, B2, x) for (A2, B2), x in zip(others, xs))
            if r == 0 or p_adic_ord(p, r) >= j:
                return True
    return False


def _try_unimodular(p, terms, target):
    if p == 2:
        return False
    units = [(A, B) for A, B in terms if A % p]
    rest = [(A, B) for A, B in terms if A % p == 0]
    if len(units) >= 3:
        # unimodular of rank >= 3 at odd p represents all of Z_p
        return True
    if len(units) != 2:
        return False
    (A1, B1), (A2, B2) = units
    if legendre_symbol(-A1 * A2, p) == 1:
        return True  # hyperbolic plane
    # binary unimodular form represents every unit; complete the squares
    shift = sum(B * B * pow(4 * A, -1, p) for A, B in units)
    for xs in product(range(p), repeat=len(rest)):
        r = target - sum(_term_value(A, B, x) for (A, B), x in zip(rest, xs))
        if (r + shift) % p:
            return True
    return False


def stable_image(p, A, B, M):
    """Residues mod p**M of A x^2 + B x: (all values, Hensel-stable values).

    Both are boolean arrays of length p**M.
    """
    q = p**M
    if q > MAX_MODULUS:
        raise PrecisionError(f"modulus {p}^{M} is too large for residue search")
    return _stable_image(p, A % q, B % q, M)


@lru_cache(maxsize=512)
def _stable_image(p, A, B, M):
    q = p**M
    x = np.arange(q, dtype=np.int64)
    vals = ((A * x) % q * x + B * x) % q
    deriv = (2 * A * x + B) % q
    margin = _stability_margin(p, M)
    if margin < 0:
        stable = np.zeros(q, dtype=bool)
    else:
        stable = deriv % p ** (margin + 1) != 0
    every = np.zeros(q, dtype=bool)
    every[vals] = True
    good = np.zeros(q, dtype=bool)
    good[vals[stable]] = True
    every.flags.writeable = False
    good.flags.writeable = False
    return every, good


def _cyclic_or(u, v):
    q = len(u)
    if q <= 64:
        out = np.zeros(q, dtype=bool)
        for s in np.flatnonzero(u):
            out |= np.roll(v, s)
        return out
    conv = np.fft.irfft(np.fft.rfft(u.astype(float)) * np.fft.rfft(v.astype(float)), n=q)
    return conv > 0.5


@lru_cache(maxsize=512)
def _sumset(p, M, terms):
    q = p**M
    acc = np.zeros(q, dtype=bool)
    acc[0] = True
    for A, B in terms:
        acc = _cyclic_or(acc, _stable_image(p, A, B, M)[0])
    acc.flags.writeable = False
    return acc


@lru_cache(maxsize=1 << 16)
def _residue_search(p, M, terms, target):
    q = p**M
    idx = (target - np.arange(q)) % q
    for i, (A, B) in enumerate(terms):
        good = _stable_image(p, A, B, M)[1]
        if not good.any():
            continue
        others = _sumset(p, M, terms[:i] + terms[i + 1 :])
        if np.any(good & others[idx]):
            return True
    return False


def _normalize(p, terms, target):
    """Drop zero terms and divide out the common p-power of the coefficients."""
    terms = [(A, B) for A, B in terms if A or B]
    ords = [p_adic_ord(p, c) for A, B in terms for c in (A, B) if c]
    e = min(ords, default=0)
    if target != 0 and p_adic_ord(p, target) < e:
        return terms, None, e
    pe = p**e
    return [(A // pe, B // pe) for A, B in terms], target // pe, e


def shifted_quadratic_solvable(problem):
    """Decide local solubility of a :class:`LocalProblem`; returns LocalStatus."""
    p = problem.p
    _check_prime(p)
    if problem.precision is not None and problem.precision < precision_floor(p, problem.terms):
        raise PrecisionError(
            f"precision {problem.precision} below floor {precision_floor(p, problem.terms)}"
        )
    if problem.target == 0:
        return LocalStatus(p, True, Method.RESIDUE_SEARCH, 0)
    terms, target, e = _normalize(p, problem.terms, problem.target)
    if not terms or target is None:
        return LocalStatus(p, False, Method.RESIDUE_SEARCH, e)

    if _try_lemma(p, terms, target):
        return LocalStatus(p, True, Method.CLOSED_FORM_LEMMA, 0)
    if _try_unimodular(p, terms, target):
        return LocalStatus(p, True, Method.UNIMODULAR_SPLIT, 0)

    o4 = _ord4p(p)
    needed = max(precision_floor(p, terms), p_adic_ord(p, target) + 2 * o4 + 2)
    if problem.precision is not None:
        M = max(problem.precision - e, needed)
    else:
        M = max(default_precision(p), needed)
        if p**M > MAX_MODULUS:
            M = needed
    if p**M > MAX_MODULUS:
        raise PrecisionError(f"residue search at p={p} would need modulus {p}^{M}")
    q = p**M
    key = tuple(sorted((A % q, B % q) for A, B in terms))
    ok = _residue_search(p, M, key, target % q)
    return LocalStatus(p, bool(ok), Method.RESIDUE_SEARCH, M + e)


def _is_inf(p):
    return p == INF or p == math.inf


def hilbert_symbol(a, b, p):
    """Hilbert symbol (a, b)_p for nonzero integers; p a prime or INF."""
    if a == 0 or b == 0:
        raise ValueError("hilbert_symbol needs nonzero arguments")
    if _is_inf(p):
        return -1 if (a < 0 and b < 0) else 1
    _check_prime(p)
    alpha, beta = p_adic_ord(p, a), p_adic_ord(p, b)
    u, v = a // p**alpha, b // p**beta
    if p == 2:
        eps = lambda w: ((w - 1) // 2) % 2
        omega = lambda w: ((w * w - 1) // 8) % 2
        exp = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exp % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * legendre_symbol(u, p) ** beta * legendre_symbol(v, p) ** alpha


def ternary_anisotropic(p, d1, d2, d3):
    """True iff d1 x^2 + d2 y^2 + d3 z^2 has no nontrivial zero over Q_p."""
    if 0 in (d1, d2, d3):
        raise ValueError("diagonal entries must be nonzero")
    # isotropic  <=>  -d1/d3 x^2 - d2/d3 y^2 = z^2 solvable  <=>  (-d1 d3, -d2 d3)_p = 1
    return hilbert_symbol(-d1 * d3, -d2 * d3, p) == -1
