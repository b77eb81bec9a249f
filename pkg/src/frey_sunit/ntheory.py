"""Small rational-integer helpers: primality, factoring, valuations, roots mod p."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

_SMALL_LIMIT = 10**4


@lru_cache(maxsize=None)
def primes_up_to(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 10**12:
        if n < 4:
            return True
        if n % 2 == 0:
            return False
        for q in range(3, isqrt(n) + 1, 2):
            if n % q == 0:
                return False
        return True
    from sympy import isprime

    return bool(isprime(n))


def factorint(n: int) -> dict[int, int]:
    """Prime factorisation of |n| (n != 0). Trial division first; sympy for the hard cofactor."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for q in primes_up_to(_SMALL_LIMIT):
        if q * q > n:
            break
        if n % q == 0:
            k = 0
            while n % q == 0:
                n //= q
                k += 1
            out[q] = k
    if n > 1:
        if n < _SMALL_LIMIT**2:
            out[n] = out.get(n, 0) + 1
        else:
            from sympy import factorint as _sympy_factorint

            for q, k in _sympy_factorint(n).items():
                out[int(q)] = out.get(int(q), 0) + int(k)
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(n))


def ord_p(x: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(k == 1 for k in factorint(n).values())


def kronecker(a: int, m: int) -> int:
    """Kronecker symbol (a/m)."""
    if m == 0:
        raise ValueError("Kronecker symbol undefined for m = 0")
    result = 1
    if m < 0:
        m = -m
        if a < 0:
            result = -result
    # factor out 2 from m using (a/2)
    while m % 2 == 0:
        m //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/m), m odd positive
    a %= m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def quadratic_roots_mod(t: int, n: int, p: int) -> list[int]:
    """Roots in [0, p) of x^2 - t*x + n modulo the prime p, sorted, without repetition."""
    if p < 64:
        return [r for r in range(p) if (r * r - t * r + n) % p == 0]
    from sympy.ntheory import sqrt_mod

    # x = (t +- sqrt(t^2 - 4n)) / 2
    disc = (t * t - 4 * n) % p
    inv2 = pow(2, -1, p)
    if disc == 0:
        return [t * inv2 % p]
    s = sqrt_mod(disc, p)
    if s is None:
        return []
    return sorted({(t + s) * inv2 % p, (t - s) * inv2 % p})


def multiplicative_order(x: int, q: int) -> int:
    """Order of x in (Z/qZ)^*, q prime, x a unit."""
    x %= q
    if x == 0:
        raise ValueError("not a unit")
    order = q - 1
    for r in factorint(q - 1):
        while order % r == 0 and pow(x, order // r, q) == 1:
            order //= r
    return order


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    return Fraction(s)
