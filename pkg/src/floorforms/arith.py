"""Exact integer helpers shared by the rest of the package.

Everything here works on Python ints, so nothing overflows and no floating
point is involved.
"""

from functools import lru_cache
from math import gcd, isqrt

__all__ = [
    "primes_up_to",
    "factorize",
    "prime_divisors",
    "is_prime",
    "is_squarefree",
    "squarefree_part",
    "squarefree_divisors",
    "p_adic_ord",
    "exact_sqrt",
    "square_class_test",
    "legendre_symbol",
    "gcd3",
]

SIEVE_BOUND = 10**6


@lru_cache(maxsize=8)
def primes_up_to(bound=SIEVE_BOUND):
    """Return a tuple of all primes <= bound (sieve of Eratosthenes)."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def factorize(n):
    """Prime factorization of |n| as a dict {p: e}, by trial division."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    step = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n):
    return sorted(factorize(n))


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def is_squarefree(n):
    return n != 0 and all(e == 1 for e in factorize(n).values())


def squarefree_part(a):
    """Split a >= 1 as a = s * t**2 with s squarefree; return (s, t)."""
    a = int(a)
    if a <= 0:
        raise ValueError(f"squarefree_part needs a positive integer, got {a}")
    s = t = 1
    for p, e in factorize(a).items():
        if e % 2:
            s *= p
        t *= p ** (e // 2)
    return s, t


def squarefree_divisors(n):
    """All positive squarefree divisors of n, ascending."""
    divs = [1]
    for p in prime_divisors(n):
        divs += [d * p for d in divs]
    return sorted(divs)


def p_adic_ord(p, n):
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    if p < 2:
        raise ValueError(f"not a prime: {p}")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def exact_sqrt(n):
    """Return r with r*r == n, or None when n is not a perfect square."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def square_class_test(n, t):
    """True iff n == t * r**2 for some integer r >= 0 (t squarefree)."""
    if t <= 0 or not is_squarefree(t):
        raise ValueError(f"t must be a positive squarefree integer, got {t}")
    if n < 0 or n % t:
        return False
    return exact_sqrt(n // t) is not None


def legendre_symbol(a, p):
    """Quadratic residue symbol (a/p) for an odd prime p."""
    if p == 2:
        raise ValueError("legendre_symbol is defined for odd primes only")
    r = pow(a % p, (p - 1) // 2, p)
    if r == p - 1:
        return -1
    return r  # 0 or 1


def gcd3(a, b, c):
    return gcd(gcd(a, b), c)
