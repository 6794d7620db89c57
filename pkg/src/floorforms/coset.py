"""Floor-form representations as representations by shifted lattices.

Fix residues alpha, beta, gamma.  Writing x = s_a*X + alpha with
s_a = 2**delta * a (and likewise for y, z), the equation F(x, y, z) = n turns
into

    bc*(s_a X + alpha)^2 + ca*(s_b Y + beta)^2 + ab*(s_c Z + gamma)^2 = l(n)

with l(n) = abc*n + bc*a0 + ca*b0 + ab*c0.  When a = b = c = m everything is
divided by m^2 and l(n) = m*n + a0 + b0 + c0.  A :class:`CosetDescriptor`
stores a lattice coset in this "weight * (scale * X + offset)^2" form, which
also covers plain diagonal forms (scale 1, offset 0).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import exact_sqrt, gcd3
from .floorform import FloorForm, Representation, eval_form

__all__ = [
    "ResidueTriple",
    "CosetDescriptor",
    "M_FORM",
    "ABC_FORM",
    "delta_of",
    "residue_square",
    "default_convention",
    "l_value",
    "build_coset",
    "diagonal_coset",
    "floor_to_coset",
    "lattice_point",
    "coset_value",
    "coset_represents_global",
    "lift_residues",
]

M_FORM = "m_form"
ABC_FORM = "abc_form"


@dataclass(frozen=True)
class ResidueTriple:
    alpha: int
    beta: int
    gamma: int
    a0: int
    b0: int
    c0: int

    @classmethod
    def from_residues(cls, form, alpha, beta, gamma):
        return cls(
            alpha,
            beta,
            gamma,
            residue_square(alpha, form.a),
            residue_square(beta, form.b),
            residue_square(gamma, form.c),
        )

    def is_valid_for(self, form):
        return (
            0 <= self.a0 < form.a
            and 0 <= self.b0 < form.b
            and 0 <= self.c0 < form.c
            and (self.alpha**2 - self.a0) % form.a == 0
            and (self.beta**2 - self.b0) % form.b == 0
            and (self.gamma**2 - self.c0) % form.c == 0
        )

    @property
    def greek(self):
        return (self.alpha, self.beta, self.gamma)

    @property
    def reduced(self):
        return (self.a0, self.b0, self.c0)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "a0": self.a0,
            "b0": self.b0,
            "c0": self.c0,
        }


@dataclass(frozen=True)
class CosetDescriptor:
    """Shifted lattice L + v with Q(X + v) = sum w_i (s_i X_i + o_i)^2.

    ``gram_diagonal`` and ``shift`` give the same coset in lattice terms:
    gram_i = w_i s_i^2 and shift_i = o_i / s_i.  ``N``, ``A_diagonal`` and
    ``h`` are the congruence theta parameters (A h = 0 mod N).
    """

    convention: str
    delta: int
    weights: tuple
    scales: tuple
    offsets: tuple
    N: int
    A_diagonal: tuple
    h: tuple

    @property
    def gram_diagonal(self):
        return tuple(w * s * s for w, s in zip(self.weights, self.scales))

    @property
    def shift(self):
        return tuple(Fraction(o, s) for o, s in zip(self.offsets, self.scales))

    @property
    def shift_in_lattice(self):
        return all(o % s == 0 for o, s in zip(self.offsets, self.scales))

    def to_dict(self):
        return {
            "convention": self.convention,
            "delta": self.delta,
            "gram_diagonal": list(self.gram_diagonal),
            "shift": [str(f) for f in self.shift],
            "N": self.N,
            "A_diagonal": list(self.A_diagonal),
            "h": list(self.h),
        }


def delta_of(form):
    """1 when gcd(a, b, c) is odd, else 0."""
    return 1 if gcd3(*form.coeffs) % 2 else 0


def residue_square(alpha, a):
    if a < 1:
        raise ValueError("modulus must be positive")
    return alpha * alpha % a


def default_convention(form):
    return M_FORM if form.is_diagonal_m else ABC_FORM


def _convention(form, convention):
    convention = convention or default_convention(form)
    if convention == M_FORM and not form.is_diagonal_m:
        raise ValueError(f"the m-form convention needs a == b == c, got {form}")
    if convention not in (M_FORM, ABC_FORM):
        raise ValueError(f"unknown convention {convention!r}")
    return convention


def l_value(form, n, residues, convention=None):
    convention = _convention(form, convention)
    a, b, c = form.coeffs
    a0, b0, c0 = residues.reduced
    if convention == M_FORM:
        return a * n + a0 + b0 + c0
    return a * b * c * n + b * c * a0 + c * a * b0 + a * b * c0


def _weights(form, convention):
    a, b, c = form.coeffs
    if convention == M_FORM:
        return (1, 1, 1)
    return (b * c, c * a, a * b)


def build_coset(form, residues, convention=None):
    convention = _convention(form, convention)
    d = delta_of(form)
    a, b, c = form.coeffs
    al, be, ga = residues.greek
    scales = tuple(2**d * k for k in form.coeffs)
    if convention == M_FORM:
        N = 2**d * a
        h = (al, be, ga)
    else:
        N = 2**d * a * b * c
        h = (b * c * al, c * a * be, a * b * ga)
    return CosetDescriptor(
        convention=convention,
        delta=d,
        weights=_weights(form, convention),
        scales=scales,
        offsets=(al, be, ga),
        N=N,
        A_diagonal=scales,
        h=h,
    )


def diagonal_coset(d1, d2, d3):
    """Zero-shift coset: the plain diagonal form d1 X^2 + d2 Y^2 + d3 Z^2."""
    if min(d1, d2, d3) < 1:
        raise ValueError("diagonal entries must be positive")
    N = 1
    return CosetDescriptor("diagonal", 0, (d1, d2, d3), (1, 1, 1), (0, 0, 0), N, (1, 1, 1), (0, 0, 0))


def coset_value(coset, X, Y, Z):
    return sum(
        w * (s * t + o) ** 2
        for w, s, o, t in zip(coset.weights, coset.scales, coset.offsets, (X, Y, Z))
    )


def floor_to_coset(form, n, witness, convention=None):
    """Residues and l-value attached to a witness of F(x, y, z) = n.

    Each residue is the coordinate reduced mod 2**delta times its coefficient,
    so the witness lies on the coset built from those residues.
    """
    x, y, z = witness.as_tuple() if isinstance(witness, Representation) else witness
    if eval_form(form, x, y, z) != n:
        raise ValueError(f"({x}, {y}, {z}) does not represent {n} by {form}")
    d = delta_of(form)
    res = ResidueTriple.from_residues(
        form, x % (2**d * form.a), y % (2**d * form.b), z % (2**d * form.c)
    )
    l = l_value(form, n, res, convention)
    return res, l


def lattice_point(coset, x, y, z):
    """Lattice coordinates of the floor-form point (x, y, z), or None."""
    out = []
    for t, s, o in zip((x, y, z), coset.scales, coset.offsets):
        if (t - o) % s:
            return None
        out.append((t - o) // s)
    return tuple(out)


def _coordinate_values(w, s, o, bound, limit):
    """(X, value) with |X| <= bound and value = w (s X + o)^2 <= limit."""
    out = []
    for X in range(-bound, bound + 1):
        v = w * (s * X + o) ** 2
        if v <= limit:
            out.append((X, v))
    return out


def _solve_last(w, s, o, r):
    """Smallest Z with w (s Z + o)^2 == r, or None."""
    if r < 0 or r % w:
        return None
    root = exact_sqrt(r // w)
    if root is None:
        return None
    best = None
    for u in {root, -root}:
        if (u - o) % s == 0:
            Z = (u - o) // s
            if best is None or Z < best:
                best = Z
    return best


def default_search_bound(coset, l):
    return isqrt(l // min(coset.gram_diagonal)) + 3


def coset_represents_global(coset, l, search_bound=None):
    """A lattice point X with Q(X + v) == l, or None.

    The default bound ceil(sqrt(l / min gram)) + 2 makes the search
    exhaustive since Q is positive definite.
    """
    if l < 0:
        return None
    bound = default_search_bound(coset, l) if search_bound is None else search_bound
    if bound < 1:
        raise ValueError("search_bound must be >= 1")
    (w1, w2, w3), (s1, s2, s3), (o1, o2, o3) = coset.weights, coset.scales, coset.offsets
    ys = _coordinate_values(w2, s2, o2, bound, l)
    for X, v1 in _coordinate_values(w1, s1, o1, bound, l):
        for Y, v2 in ys:
            if v1 + v2 > l:
                continue
            Z = _solve_last(w3, s3, o3, l - v1 - v2)
            if Z is not None and abs(Z) <= bound:
                return (X, Y, Z)
    return None


def lift_residues(form, residues, parities):
    """Replace alpha by alpha + eps_1 a (etc.); the l-value does not change."""
    e1, e2, e3 = parities
    return ResidueTriple(
        residues.alpha + e1 * form.a,
        residues.beta + e2 * form.b,
        residues.gamma + e3 * form.c,
        *residues.reduced,
    )
