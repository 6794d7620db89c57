"""The floor form  F(x, y, z) = x^2 // a + y^2 // b + z^2 // c."""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from . import __version__
from .arith import squarefree_part

__all__ = [
    "FloorForm",
    "Representation",
    "ScanReport",
    "DEFAULT_MAX_N",
    "max_n",
    "eval_form",
    "search_representation",
    "representation_count",
    "represented_mask",
    "scan_range",
    "squarefree_reduce",
]

DEFAULT_MAX_N = 10**7


def max_n():
    """Scan cap; the FLOORFORM_MAX_N environment variable overrides it."""
    env = os.environ.get("FLOORFORM_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


@dataclass(frozen=True)
class FloorForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @classmethod
    def parse(cls, text):
        """Build from the comma-separated ``"a,b,c"`` spelling."""
        parts = text.split(",")
        if len(parts) != 3 or any(not p.strip().isdigit() for p in parts):
            raise ValueError(f"expected a,b,c with positive integers, got {text!r}")
        return cls(*(int(p) for p in parts))

    @property
    def coeffs(self):
        return (self.a, self.b, self.c)

    @property
    def is_diagonal_m(self):
        return self.a == self.b == self.c

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"


@dataclass(frozen=True)
class Representation:
    x: int
    y: int
    z: int

    def as_tuple(self):
        return (self.x, self.y, self.z)


@dataclass
class ScanReport:
    form: FloorForm
    n_lo: int
    n_hi: int
    exceptions: list = field(default_factory=list)
    wall_time_ms: int = 0
    tool_version: str = __version__

    def to_dict(self):
        return {
            "form": list(self.form.coeffs),
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "exceptions": list(self.exceptions),
            "wall_time_ms": self.wall_time_ms,
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            form=FloorForm(*d["form"]),
            n_lo=int(d["n_lo"]),
            n_hi=int(d["n_hi"]),
            exceptions=[int(e) for e in d["exceptions"]],
            wall_time_ms=int(d["wall_time_ms"]),
            tool_version=d["tool_version"],
        )


def eval_form(form, x, y, z):
    return x * x // form.a + y * y // form.b + z * z // form.c


def _smallest_root(c, r):
    """Smallest t >= 0 with t^2 // c == r, or None."""
    z = isqrt(c * r)
    if z * z < c * r:
        z += 1
    return z if z * z < c * (r + 1) else None


def search_representation(form, n):
    """Smallest nonnegative (x, y, z) with F = n, compared from z backwards.

    z is minimized first, then y, then x; e.g. (3,3,3) at n = 2 gives
    (2, 2, 0).  Returns None when n is not represented.
    """
    if n < 0:
        return None
    a, b, c = form.coeffs
    z = 0
    while True:
        vz = z * z // c
        if vz > n:
            return None
        y = 0
        while True:
            vy = y * y // b
            if vz + vy > n:
                break
            x = _smallest_root(a, n - vz - vy)
            if x is not None:
                return Representation(x, y, z)
            y += 1
        z += 1


def _count_signed(c, r):
    """Number of integers z (both signs) with z^2 // c == r."""
    lo = isqrt(c * r)
    if lo * lo < c * r:
        lo += 1
    hi = isqrt(c * (r + 1) - 1)
    if hi < lo:
        return 0
    cnt = 2 * (hi - lo + 1)
    return cnt - 1 if lo == 0 else cnt


def representation_count(form, n):
    """Number of (x, y, z) in Z^3 (signs counted separately) with F = n."""
    if n < 0:
        return 0
    a, b, c = form.coeffs
    total = 0
    x = 0
    while x * x // a <= n:
        vx = x * x // a
        wx = 1 if x == 0 else 2
        y = 0
        while vx + y * y // b <= n:
            wy = 1 if y == 0 else 2
            total += wx * wy * _count_signed(c, n - vx - y * y // b)
            y += 1
        x += 1
    return total


def _value_mask(a, hi):
    """Boolean mask of {x^2 // a : x >= 0} on [0, hi]."""
    xmax = isqrt(a * (hi + 1))
    vals = np.arange(xmax + 1, dtype=np.int64) ** 2 // a
    mask = np.zeros(hi + 1, dtype=bool)
    mask[vals[vals <= hi]] = True
    return mask


def _sum_masks(u, v, hi):
    """Mask of {s + t : u[s], v[t]} truncated to [0, hi]."""
    su, sv = np.flatnonzero(u), np.flatnonzero(v)
    if len(su) > len(sv):
        u, v, su, sv = v, u, sv, su
    if len(su) * (hi + 1) <= 2 * 10**8:
        out = np.zeros(hi + 1, dtype=bool)
        for s in su:
            out[s:] |= v[: hi + 1 - s]
        return out
    size = 2 * (hi + 1)
    conv = np.fft.irfft(np.fft.rfft(u, size) * np.fft.rfft(v, size), size)
    return conv[: hi + 1] > 0.5


def represented_mask(form, lo, hi):
    """Boolean array over [lo, hi]: entry k is True iff lo + k is represented."""
    a, b, c = form.coeffs
    ma, mb, mc = (_value_mask(k, hi) for k in (a, b, c))
    bc = _sum_masks(mb, mc, hi)
    out = np.zeros(hi - lo + 1, dtype=bool)
    for v in np.flatnonzero(ma):
        start = max(lo, v)
        out[start - lo :] |= bc[start - v : hi - v + 1]
    return out


def _scan_chunk(args):
    form, lo, hi = args
    mask = represented_mask(form, lo, hi)
    return [lo + int(k) for k in np.flatnonzero(~mask)]


def _chunks(lo, hi, parts):
    size = max(1, -(-(hi - lo + 1) // parts))
    return [(s, min(hi, s + size - 1)) for s in range(lo, hi + 1, size)]


def scan_range(form, n_lo, n_hi, workers=1, cap=None):
    """All n in [n_lo, n_hi] that F does not represent.

    With ``workers > 1`` the range is split into disjoint chunks handled by a
    process pool; the merged result does not depend on the chunking.
    """
    if n_lo < 0 or n_lo > n_hi:
        raise ValueError(f"bad range [{n_lo}, {n_hi}]")
    cap = max_n() if cap is None else cap
    if n_hi > cap:
        raise ValueError(f"n_hi={n_hi} exceeds the scan cap {cap} (set FLOORFORM_MAX_N)")
    t0 = time.perf_counter()
    jobs = [(form, s, e) for s, e in _chunks(n_lo, n_hi, max(1, workers))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(j) for j in jobs]
    exceptions = sorted({n for part in parts for n in part})
    ms = int((time.perf_counter() - t0) * 1000)
    return ScanReport(form, n_lo, n_hi, exceptions, ms)


def squarefree_reduce(form):
    """Replace each coefficient by its squarefree part.

    Returns ``(reduced, (t_a, t_b, t_c))`` with ``a == s_a * t_a**2`` etc.;
    a representation (x, y, z) of the reduced form gives (t_a x, t_b y, t_c z)
    for the original one.
    """
    parts = [squarefree_part(k) for k in form.coeffs]
    return FloorForm(*(s for s, _ in parts)), tuple(t for _, t in parts)
