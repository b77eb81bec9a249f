"""Solutions of x^4 - y^4 = n z^p, the attached Frey curve and its local data.

The curve is y^2 = x(x + A)(x - B) with A = (a+b)^2, B = (a-b)^2, i.e.
y^2 = x^3 + 4ab x^2 - (a^2-b^2)^2 x.  All invariants come from the standard
Weierstrass formulary applied to that model; the closed forms are only used
as cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from typing import NamedTuple, Optional, Sequence

from . import errors
from .ntheory import is_prime, prime_divisors
from .qfield import (
    QQ,
    AlgebraicNumber,
    FieldDescriptor,
    PrimeSlot,
    element,
    primes_above,
    valuation,
)


def _val(x: AlgebraicNumber, s: PrimeSlot) -> Optional[int]:
    """Valuation, with None standing for +infinity at x = 0."""
    return None if x.is_zero() else valuation(x, s)


def _candidate_primes(*xs: AlgebraicNumber) -> list[int]:
    ps = set()
    for x in xs:
        if x.is_zero():
            continue
        k = x.denominator()
        num = abs((x * k).norm()) * k
        if num > 1:
            ps.update(prime_divisors(int(num)))
    return sorted(ps)


def slots_dividing(*xs: AlgebraicNumber) -> list[PrimeSlot]:
    """Slots at which every nonzero x has positive valuation (zeros ignored)."""
    field = xs[0].field
    out = []
    for p in _candidate_primes(*xs):
        for s in primes_above(field, p):
            vs = [_val(x, s) for x in xs]
            if all(v is None or v > 0 for v in vs) and any(v is not None for v in vs):
                out.append(s)
    return out


def is_primitive(*xs: AlgebraicNumber) -> bool:
    """True when the ideal generated by xs is the unit ideal."""
    if all(x.is_zero() for x in xs):
        return False
    nz = [x for x in xs if not x.is_zero()]
    # a common prime divides every nonzero generator; scan the primes of the smallest norm
    first = min(nz, key=lambda x: abs(x.norm()))
    for s in slots_dividing(first):
        if all(valuation(x, s) > 0 for x in nz):
            return False
    return True


@dataclass(frozen=True)
class FreyTriple:
    field: FieldDescriptor
    a: AlgebraicNumber
    b: AlgebraicNumber
    c: AlgebraicNumber
    n: int
    p: int
    A: AlgebraicNumber
    B: AlgebraicNumber
    C: AlgebraicNumber
    trivial: bool
    primitive: bool
    b_squared_swapped: bool = False

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "field": self.field.label(),
            "a": encode(self.a), "b": encode(self.b), "c": encode(self.c),
            "n": self.n, "p": self.p,
            "A": encode(self.A), "B": encode(self.B), "C": encode(self.C),
            "trivial": self.trivial,
            "primitive": self.primitive,
            "b_squared_swapped": self.b_squared_swapped,
        }


def validate_triple(a, b, c, n: int, p: int, field: FieldDescriptor = QQ) -> FreyTriple:
    a, b, c = (element(field, x) for x in (a, b, c))
    if not isinstance(n, int) or n < 1:
        raise errors.InvalidInput(f"n must be a positive integer, got {n!r}")
    if not isinstance(p, int) or not is_prime(p):
        raise errors.InvalidInput(f"p must be prime, got {p!r}")
    if p < 5:
        raise errors.ExponentTooSmall(f"p = {p} < 5")
    for x, name in ((a, "a"), (b, "b"), (c, "c")):
        if not x.is_integral():
            raise errors.NotIntegral(f"{name} = {x} is not integral")
    if a**4 - b**4 != n * c**p:
        a_, b_, c_ = (f"({x})" if x.b else str(x) for x in (a, b, c))
        raise errors.EquationFails(f"{a_}^4 - {b_}^4 != {n}*{c_}^{p}")
    if n > 1:
        nn = element(field, n)
        for q in prime_divisors(n):
            for s in primes_above(field, q):
                if valuation(nn, s) >= p:
                    raise errors.NOrdTooLarge(f"ord at {s.label()} of n is >= p")
    A, B, C = (a + b) ** 2, (a - b) ** 2, a * a + b * b
    assert (A + B - 2 * C).is_zero()
    trivial = (a * b * c).is_zero()
    return FreyTriple(field, a, b, c, n, p, A, B, C, trivial, is_primitive(a, b, c))


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class FreyInvariants:
    delta: AlgebraicNumber
    c4: AlgebraicNumber
    c6: AlgebraicNumber
    j: AlgebraicNumber
    b2: AlgebraicNumber
    b4: AlgebraicNumber
    b6: AlgebraicNumber
    b8: AlgebraicNumber
    checks: dict = dc_field(default_factory=dict, compare=False)
    displayed_c6: Optional[AlgebraicNumber] = None
    displayed_c4_alt: Optional[AlgebraicNumber] = None
    notices: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "delta": encode(self.delta), "c4": encode(self.c4),
            "c6": encode(self.c6), "j": encode(self.j),
            "b2": encode(self.b2), "b4": encode(self.b4),
            "b6": encode(self.b6), "b8": encode(self.b8),
            "checks": dict(sorted(self.checks.items())),
            "displayed_c6": encode(self.displayed_c6),
            "displayed_c4_alt": encode(self.displayed_c4_alt),
            "notices": list(self.notices),
        }


def model_coefficients(t: FreyTriple) -> tuple[AlgebraicNumber, AlgebraicNumber]:
    """(a2, a4) of y^2 = x^3 + a2 x^2 + a4 x."""
    a, b = t.a, t.b
    return 4 * a * b, -((a * a - b * b) ** 2)


def invariants(t: FreyTriple) -> FreyInvariants:
    a, b = t.a, t.b
    a2, a4 = model_coefficients(t)
    # a1 = a3 = a6 = 0
    b2 = 4 * a2
    b4 = 2 * a4
    b6 = AlgebraicNumber(t.field, 0)
    b8 = -(a4 * a4)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    delta = -(b2 * b2) * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if delta.is_zero():
        raise errors.SingularCurve(f"discriminant vanishes for a = {a}, b = {b}")
    j = c4**3 / delta
    a2b2 = a * a - b * b
    X = (a * a + 3 * b * b) * (3 * a * a + b * b)
    A, B, C = t.A, t.B, t.C
    c6_closed = -128 * a * b * (32 * a * a * b * b + 9 * a2b2 * a2b2)
    shown_c6 = -128 * (32 * a * a * b * b + 3 * a2b2 * a2b2)
    shown_c4_alt = 16 * (A * B - 2 * A * C - 2 * B * C)
    checks = {
        "c4^3 - c6^2 = 1728 delta": c4**3 - c6 * c6 == 1728 * delta,
        "j delta = c4^3": j * delta == c4**3,
        "delta = 2^6 n^2 c^(2p) (a^2-b^2)^2": delta == 64 * t.n**2 * t.c ** (2 * t.p) * a2b2 * a2b2,
        "delta = 2^6 (ABC)^2": delta == 64 * (A * B * C) ** 2,
        "c4 = 2^4 (a^2+3b^2)(3a^2+b^2)": c4 == 16 * X,
        "c4 = 2^4 (2AC+2BC-AB)": c4 == 16 * (2 * A * C + 2 * B * C - A * B),
        "c6 = -2^7 ab (2^5 a^2 b^2 + 9 (a^2-b^2)^2)": c6 == c6_closed,
        "j = 2^6 X^3 / (n^2 c^(2p) (a^2-b^2)^2)": j == 64 * X**3 / (t.n**2 * t.c ** (2 * t.p) * a2b2 * a2b2),
        "model = x(x+A)(x-B)": (a2 == A - B) and (a4 == -(A * B)),
    }
    notices = []
    if shown_c6 != c6:
        notices.append(
            f"displayed c6 closed form -2^7(2^5a^2b^2+3(a^2-b^2)^2) gives {shown_c6}; "
            f"the model gives {c6}"
        )
    if shown_c4_alt != c4:
        notices.append(
            f"displayed alternative c4 = 2^4(AB-2AC-2BC) gives {shown_c4_alt}; the model gives {c4}"
        )
    return FreyInvariants(
        delta, c4, c6, j, b2, b4, b6, b8, checks, shown_c6, shown_c4_alt, tuple(notices)
    )


# ---------------------------------------------------------------------------
# local data at a prime above 2


@dataclass(frozen=True)
class NormalizedTriple:
    triple: FreyTriple
    slot: PrimeSlot
    swapped: bool
    ord2: int
    k: int
    ord_plus: int  # ord(a^2 + b^2) after normalization
    ord_minus: int  # ord(a^2 - b^2) after normalization
    expected_minus: int  # p k + ord(n) - ord(2)
    normalized: bool  # ord_plus == ord2 and ord_minus == expected_minus
    min_exceeds_ord2: bool  # min(ord(a^2+b^2), ord(a^2-b^2)) > ord(2)

    def to_dict(self) -> dict:
        return {
            "slot": self.slot.label(),
            "swapped": self.swapped,
            "ord2": self.ord2,
            "k": self.k,
            "ord_plus": self.ord_plus,
            "ord_minus": self.ord_minus,
            "expected_minus": self.expected_minus,
            "normalized": self.normalized,
            "min_exceeds_ord2": self.min_exceeds_ord2,
        }


def _require_remark_setting(t: FreyTriple, slot: PrimeSlot) -> tuple[int, int]:
    if slot.field != t.field:
        raise errors.FieldMismatch("slot and triple live in different fields")
    if slot.rational_prime != 2:
        raise errors.PreconditionFailed(f"{slot.label()} does not lie above 2")
    if t.c.is_zero():
        raise errors.PreconditionFailed("c = 0")
    k = valuation(t.c, slot)
    if k <= 0:
        raise errors.PreconditionFailed(f"{slot.label()} does not divide c")
    o2 = valuation(AlgebraicNumber(t.field, 2), slot)
    if t.p <= 2 * o2:
        raise errors.PreconditionFailed(f"p = {t.p} <= 2 ord(2) = {2 * o2}")
    if not t.primitive:
        raise errors.PreconditionFailed("triple is not primitive")
    return k, o2


def remark_valuations(t: FreyTriple, slot: PrimeSlot) -> NormalizedTriple:
    """Normalise so that ord(a^2+b^2) = ord(2), swapping b^2 and -b^2 when needed."""
    k, o2 = _require_remark_setting(t, slot)
    a2, b2 = t.a * t.a, t.b * t.b
    vp, vm = valuation(a2 + b2, slot), valuation(a2 - b2, slot)
    swapped = vp != o2 and vm == o2
    if swapped:
        vp, vm = vm, vp
    on = valuation(AlgebraicNumber(t.field, t.n), slot)
    expected = t.p * k + on - o2
    nt = replace(t, b_squared_swapped=swapped)
    return NormalizedTriple(
        nt, slot, swapped, o2, k, vp, vm, expected,
        vp == o2 and vm == expected, min(vp, vm) > o2,
    )


class OrdJComparison(NamedTuple):
    paper_value: int
    direct_value: int
    discrepancy: bool


def paper_ordj_comparison(t: FreyTriple, slot: PrimeSlot) -> OrdJComparison:
    """8 ord(2) - 4pk - 2 ord(n) against ord(j) computed from the exact invariants."""
    k, o2 = _require_remark_setting(t, slot)
    on = valuation(AlgebraicNumber(t.field, t.n), slot)
    closed = 8 * o2 - 4 * t.p * k - 2 * on
    direct = valuation(invariants(t).j, slot)
    return OrdJComparison(closed, direct, closed != direct)


def inertia_divisibility(ord_j: int, p: int) -> bool:
    """Potentially multiplicative reduction with p not dividing ord(j)."""
    if p < 5:
        raise errors.ExponentTooSmall(f"p = {p} < 5")
    return ord_j < 0 and ord_j % p != 0


# ---------------------------------------------------------------------------
# reduction and conductor


@dataclass(frozen=True)
class SlotProfile:
    slot: PrimeSlot
    even: bool
    ord_delta: int
    ord_c4: Optional[int]  # None when c4 = 0
    ord_j: Optional[int]
    reduction: str  # good | multiplicative | non_semistable | unresolved_even
    divides_c: bool
    divides_n: bool
    case: str  # coprime | c_only | n_only | both
    p_divides_ord_delta: bool
    exponent_bound: Optional[int]

    def to_dict(self) -> dict:
        return {
            "slot": self.slot.label(),
            "even": self.even,
            "ord_delta": self.ord_delta,
            "ord_c4": self.ord_c4,
            "ord_j": self.ord_j,
            "reduction": self.reduction,
            "divides_c": self.divides_c,
            "divides_n": self.divides_n,
            "case": self.case,
            "p_divides_ord_delta": self.p_divides_ord_delta,
            "exponent_bound": self.exponent_bound,
        }


def valuation_profile(t: FreyTriple, inv: FreyInvariants, slot: PrimeSlot) -> SlotProfile:
    od, oc4, oj = valuation(inv.delta, slot), _val(inv.c4, slot), _val(inv.j, slot)
    dc = (not t.c.is_zero()) and valuation(t.c, slot) > 0
    dn = valuation(AlgebraicNumber(t.field, t.n), slot) > 0
    case = {(False, False): "coprime", (True, False): "c_only", (False, True): "n_only", (True, True): "both"}[(dc, dn)]
    if slot.rational_prime == 2:
        o2 = slot.e
        return SlotProfile(slot, True, od, oc4, oj, "unresolved_even", dc, dn, case,
                           od % t.p == 0, 2 + 6 * o2)
    if od == 0:
        red = "good"
    elif oc4 == 0:
        red = "multiplicative"
    else:
        red = "non_semistable"
    return SlotProfile(slot, False, od, oc4, oj, red, dc, dn, case, od > 0 and od % t.p == 0, None)


def bad_slots(t: FreyTriple) -> list[PrimeSlot]:
    """Slots above 2 together with the slots dividing n c."""
    if t.c.is_zero():
        raise errors.PreconditionFailed("c = 0")
    out = list(primes_above(t.field, 2))
    for s in slots_dividing(element(t.field, t.n) * t.c):
        if s.rational_prime != 2:
            out.append(s)
    return sorted(set(out), key=PrimeSlot.sort_key)


def slot_profiles(t: FreyTriple, inv: Optional[FreyInvariants] = None) -> list[SlotProfile]:
    inv = inv or invariants(t)
    return [valuation_profile(t, inv, s) for s in bad_slots(t)]


@dataclass(frozen=True)
class ConductorReport:
    support_even: tuple[tuple[PrimeSlot, int, int], ...]
    odd_multiplicative: tuple[tuple[PrimeSlot, str, bool], ...]
    n_e_support: tuple[PrimeSlot, ...]
    n_p_support: tuple[PrimeSlot, ...]
    serre_support: tuple[PrimeSlot, ...]
    consistent: bool  # odd part of n_p support equals the odd slots dividing n

    def to_dict(self) -> dict:
        return {
            "support_even": [[s.label(), lo, hi] for s, lo, hi in self.support_even],
            "odd_multiplicative": [[s.label(), r, pd] for s, r, pd in self.odd_multiplicative],
            "n_e_support": [s.label() for s in self.n_e_support],
            "n_p_support": [s.label() for s in self.n_p_support],
            "serre_support": [s.label() for s in self.serre_support],
            "consistent": self.consistent,
        }


def conductor_support(t: FreyTriple, profiles: Sequence[SlotProfile]) -> ConductorReport:
    have = {pr.slot: pr for pr in profiles}
    need = bad_slots(t)
    missing = [s.label() for s in need if s not in have]
    if missing:
        raise errors.IncompleteProfiles(f"no profile for {', '.join(missing)}")
    even = [have[s] for s in need if s.rational_prime == 2]
    odd = [have[s] for s in need if s.rational_prime != 2 and (have[s].divides_c or have[s].divides_n)]
    support_even = tuple((pr.slot, 0, pr.exponent_bound) for pr in even)
    odd_mult = tuple((pr.slot, pr.reduction, pr.p_divides_ord_delta) for pr in odd)
    n_e = tuple(pr.slot for pr in even) + tuple(pr.slot for pr in odd)
    n_p = tuple(pr.slot for pr in even) + tuple(pr.slot for pr in odd if not pr.p_divides_ord_delta)
    serre = tuple(pr.slot for pr in even) + tuple(pr.slot for pr in odd if pr.divides_n)
    odd_np = {s for s in n_p if s.rational_prime != 2}
    odd_n = {pr.slot for pr in odd if pr.divides_n}
    return ConductorReport(support_even, odd_mult, n_e, n_p, serre, odd_np == odd_n)


# ---------------------------------------------------------------------------


def nonprimitive_family(a, b, n: int, p: int, field: FieldDescriptor = QQ,
                        allow_degenerate: bool = False):
    """Non-primitive solution (u r^k, v r^k, r^e) built from an arbitrary seed (a, b)."""
    if not isinstance(p, int) or not is_prime(p):
        raise errors.InvalidInput(f"p must be prime, got {p!r}")
    if p < 5:
        raise errors.ExponentTooSmall(f"p = {p} < 5")
    a, b = element(field, a), element(field, b)
    u, v = n * a, n * b
    r = n**3 * (a**4 - b**4)
    if r.is_zero():
        if not allow_degenerate:
            raise errors.DegenerateSeed("a^4 = b^4 gives the zero solution")
        zero = AlgebraicNumber(field, 0)
        return zero, zero, zero
    if p % 4 == 1:
        k, z = (p - 1) // 4, r
    else:
        k, z = (3 * p - 1) // 4, r**3
    x, y = u * r**k, v * r**k
    if x**4 - y**4 != n * z**p:
        raise errors.ComputationError("family member fails the equation")
    return x, y, z
