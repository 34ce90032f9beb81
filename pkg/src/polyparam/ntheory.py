"""Small integer number-theory helpers (trial division scale)."""
from __future__ import annotations

import math
from functools import reduce

from .errors import DomainError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of ``n >= 1`` as sorted ``(p, e)`` pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise DomainError otherwise."""
    if not isinstance(q, int) or q < 2:
        raise DomainError(f"{q!r} is not a prime power")
    fac = factorize(q)
    if len(fac) != 1:
        raise DomainError(f"{q} is not a prime power")
    return fac[0]


def carmichael_lambda(p: int, e: int) -> int:
    """Exponent of the unit group of Z/p^e."""
    if p == 2 and e >= 3:
        return 2 ** (e - 2)
    return p ** (e - 1) * (p - 1)


def lcm_upto(d: int) -> int:
    """lcm(1, 2, ..., d); equals 1 for d <= 1."""
    return reduce(math.lcm, range(1, d + 1), 1)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def bezout(values: list[int]) -> tuple[int, list[int]]:
    """Return ``(g, coeffs)`` with ``sum(c*v) == g == gcd(values)``."""
    if not values:
        return 0, []
    g, coeffs = values[0], [1]
    for v in values[1:]:
        g, s, t = xgcd(g, v)
        coeffs = [c * s for c in coeffs] + [t]
    if g < 0:
        g, coeffs = -g, [-c for c in coeffs]
    return g, coeffs
