"""Independent reference computations used to cross-check the package.

Nothing here imports frey_sunit; each routine is the slow, obvious version.
"""
from fractions import Fraction
from itertools import product
from math import gcd, isqrt


def is_squarefree_trial(n):
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return n != 0


def legendre_by_squares(a, p):
    """(a/p) for an odd prime p by listing the squares mod p."""
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


def kronecker_by_factoring(a, m):
    """Kronecker symbol (a/m) for m > 0 from its definition on prime factors."""
    out = 1
    k = m
    q = 2
    while k > 1:
        while k % q == 0:
            k //= q
            if q == 2:
                if a % 2 == 0:
                    return 0
                out *= 1 if a % 8 in (1, 7) else -1
            else:
                out *= legendre_by_squares(a, q)
        q += 1
    return out


def weierstrass(a1, a2, a3, a4, a6):
    """(b2, b4, b6, b8, c4, c6, delta, j) from the textbook formulary."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    delta = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    j = Fraction(c4 ** 3, delta) if delta else None
    return b2, b4, b6, b8, c4, c6, delta, j


def frey_model_rational(a, b):
    """a2, a4 of y^2 = x(x+A)(x-B) with A = (a+b)^2, B = (a-b)^2, expanded by hand."""
    A = (a + b) ** 2
    B = (a - b) ** 2
    # x(x+A)(x-B) = x^3 + (A-B) x^2 - AB x
    return A - B, -A * B


def j_lambda(lam):
    lam = Fraction(lam)
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def ord_p(x, p):
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _supported_on(x, primes):
    n, d = abs(x.numerator), x.denominator
    for p in primes:
        while n % p == 0:
            n //= p
        while d % p == 0:
            d //= p
    return n == 1 and d == 1


def rational_sunit_solutions(primes, bound):
    """All (lam, mu) over Q with lam + mu = 1, lam = +-prod p^e with |e| <= bound
    and mu any S-unit."""
    units = set()
    for sign in (1, -1):
        for es in product(range(-bound, bound + 1), repeat=len(primes)):
            x = Fraction(sign)
            for p, e in zip(primes, es):
                x *= Fraction(p) ** e
            units.add(x)
    return sorted((x, 1 - x) for x in units if x != 1 and _supported_on(1 - x, primes))


def smallest_pell_unit(d):
    """Fundamental unit of Q(sqrt d), d > 1 squarefree, as (u, v, half) meaning
    (u + v sqrt d)/2 if half else u + v sqrt d, found by direct search."""
    if d % 4 == 1:
        for v in range(1, 10**6):
            for s in (-4, 4):
                u2 = d * v * v + s
                u = isqrt(u2) if u2 >= 0 else -1
                if u > 0 and u * u == u2:
                    return u, v, True
    else:
        for v in range(1, 10**6):
            for s in (-1, 1):
                u2 = d * v * v + s
                u = isqrt(u2) if u2 >= 0 else -1
                if u > 0 and u * u == u2:
                    return u, v, False
    raise RuntimeError("no unit found")


def class_number_definite(D):
    """Number of reduced positive definite primitive forms of discriminant D < 0."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def fundamental_discriminant(d):
    return d if d % 4 == 1 else 4 * d


# Small-discriminant class numbers (h, h_plus) that are standard table values.
CLASS_TABLE = {
    -1: (1, 1), -2: (1, 1), -3: (1, 1), -5: (2, 2), -6: (2, 2), -10: (2, 2),
    -14: (4, 4), -15: (2, 2), -23: (3, 3), -47: (5, 5), -71: (7, 7),
    2: (1, 1), 3: (1, 2), 5: (1, 1), 6: (1, 2), 7: (1, 2), 10: (2, 2),
    13: (1, 1), 15: (2, 4), 17: (1, 1), 21: (1, 2), 29: (1, 1), 34: (2, 4),
    41: (1, 1), 79: (3, 6), 82: (4, 4),
}


def is_2_unit_quadratic(x, d):
    """x = a + b sqrt(d) (Fractions) has ideal supported above 2 only: both x and 1/x
    become algebraic integers after multiplying by a power of 2."""
    a, b = Fraction(x[0]), Fraction(x[1])
    if a == 0 and b == 0:
        return False
    nrm = a * a - d * b * b
    inv = (a / nrm, -b / nrm)

    def integral_after_2power(u, v):
        for k in range(0, 200):
            s = 2**k
            uu, vv = u * s, v * s
            # algebraic integer test: trace and norm in Z
            tr, nm = 2 * uu, uu * uu - d * vv * vv
            if tr.denominator == 1 and nm.denominator == 1:
                return True
        return False

    return integral_after_2power(a, b) and integral_after_2power(*inv)


def _max_ord(n):
    worst, q = 0, 2
    while q * q <= n:
        k = 0
        while n % q == 0:
            n //= q
            k += 1
        worst = max(worst, k)
        q += 1
    return max(worst, 1 if n > 1 else 0)


def _next_prime_above(k):
    p = max(5, k + 1)
    while any(p % q == 0 for q in range(2, isqrt(p) + 1)):
        p += 1
    return p


def sample_triples(count=500, seed=20240, box=50):
    """Deterministic (a, b, c, n, p) with a^4 - b^4 = n c^p, c = +-1, gcd(a, b) = 1,
    a != +-b. p is 5 unless n has a prime power that forces a larger prime."""
    import random

    rng = random.Random(seed)
    seen, out = set(), []
    while len(out) < count:
        a, b = rng.randint(-box, box), rng.randint(-box, box)
        if abs(a) == abs(b) or gcd(a, b) != 1 or (a, b) in seen:
            continue
        seen.add((a, b))
        n = a**4 - b**4
        c = 1 if n > 0 else -1
        n = abs(n)
        out.append((a, b, c, n, _next_prime_above(_max_ord(n))))
    return out
