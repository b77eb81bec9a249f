"""Exact arithmetic in Q and quadratic fields Q(sqrt d).

Elements are stored by their coordinates a + b*sqrt(d) and expose the
integral-basis coordinates x + y*w, where w = sqrt(d) for d = 2, 3 mod 4 and
w = (1 + sqrt(d))/2 for d = 1 mod 4.  Prime ideals above small rational primes
are ``PrimeSlot`` objects; valuations are computed by repeated exact ideal
division, so split primes are told apart.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping, Optional, Union

from . import errors
from .ntheory import factorint, is_squarefree, kronecker, ord_p, quadratic_roots_mod

DEFAULT_DISCRIMINANT_BOUND = 10**6

Rational = Union[int, Fraction]


class SplittingType(str, enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"
    # only for abstract descriptors: neither totally split, inert nor totally ramified
    MIXED = "mixed"


class FieldKind(str, enum.Enum):
    RATIONAL = "rational"
    QUADRATIC = "quadratic"
    ABSTRACT = "abstract"


@dataclass(frozen=True)
class FieldDescriptor:
    kind: FieldKind
    d: Optional[int]
    degree: int
    discriminant: int
    signature: int
    ramification_table: tuple[tuple[int, SplittingType], ...] = ()
    z2_layer: Optional[int] = None

    @property
    def is_rational(self) -> bool:
        return self.kind is FieldKind.RATIONAL

    @property
    def is_quadratic(self) -> bool:
        return self.kind is FieldKind.QUADRATIC

    @property
    def is_real_quadratic(self) -> bool:
        return self.is_quadratic and self.d > 0

    @property
    def is_imaginary_quadratic(self) -> bool:
        return self.is_quadratic and self.d < 0

    @property
    def is_totally_real(self) -> bool:
        return self.signature == self.degree

    @property
    def has_arithmetic(self) -> bool:
        return self.kind is not FieldKind.ABSTRACT

    @property
    def omega_is_half(self) -> bool:
        """True when the integral basis is {1, (1+sqrt d)/2}."""
        return self.is_quadratic and self.d % 4 == 1

    def table(self) -> dict[int, SplittingType]:
        return dict(self.ramification_table)

    def label(self) -> str:
        if self.is_rational:
            return "Q"
        if self.is_quadratic:
            return f"Q(sqrt({self.d}))"
        if self.z2_layer is not None:
            return f"Q_{{{self.z2_layer},2}}"
        return f"abstract(degree={self.degree})"

    def __repr__(self) -> str:
        return f"FieldDescriptor({self.label()})"

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "d": self.d,
            "degree": self.degree,
            "discriminant": self.discriminant,
            "signature": self.signature,
            "label": self.label(),
        }
        if self.ramification_table:
            out["ramification_table"] = {str(p): s.value for p, s in self.ramification_table}
        if self.z2_layer is not None:
            out["z2_layer"] = self.z2_layer
        return out


QQ = FieldDescriptor(FieldKind.RATIONAL, None, 1, 1, 1)


@lru_cache(maxsize=None)
def make_field(d: int) -> FieldDescriptor:
    """Descriptor of Q(sqrt d) for squarefree d not in {0, 1}."""
    d = int(d)
    if d in (0, 1):
        raise errors.InvalidD(f"d must not be 0 or 1 (got {d})")
    if not is_squarefree(d):
        raise errors.NotSquarefree(f"d = {d} is not squarefree")
    disc = d if d % 4 == 1 else 4 * d
    return FieldDescriptor(FieldKind.QUADRATIC, d, 2, disc, 2 if d > 0 else 0)


def field_from_d(d: int) -> FieldDescriptor:
    """CLI convention: d = 0 selects Q."""
    return QQ if d == 0 else make_field(d)


def abstract_field(
    degree: int,
    table: Mapping[int, SplittingType | str],
    *,
    signature: Optional[int] = None,
    discriminant: int = 0,
    z2_layer: Optional[int] = None,
) -> FieldDescriptor:
    """Descriptor-only field of arbitrary degree; splitting data supplied by the caller.

    For these descriptors ``ramified`` means totally ramified and ``split`` totally split.
    """
    if degree < 1:
        raise errors.InvalidInput("degree must be positive")
    entries = tuple(sorted((int(p), SplittingType(s)) for p, s in table.items()))
    return FieldDescriptor(
        FieldKind.ABSTRACT,
        None,
        degree,
        discriminant,
        degree if signature is None else signature,
        entries,
        z2_layer,
    )


# ---------------------------------------------------------------------------
# elements


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class AlgebraicNumber:
    """Immutable element a + b*sqrt(d) of Q or Q(sqrt d)."""

    __slots__ = ("field", "a", "b", "_hash")

    def __init__(self, field: FieldDescriptor, a: Rational = 0, b: Rational = 0):
        if not field.has_arithmetic:
            raise errors.InvalidInput("abstract descriptors carry no element arithmetic")
        a = _as_fraction(a)
        b = _as_fraction(b)
        if field.is_rational and b:
            raise errors.InvalidInput("rational field elements have no sqrt part")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicNumber is immutable")

    # constructors
    @classmethod
    def from_coords(cls, field: FieldDescriptor, x: Rational, y: Rational = 0) -> "AlgebraicNumber":
        """Element x + y*w in the integral basis."""
        x, y = _as_fraction(x), _as_fraction(y)
        if field.omega_is_half:
            return cls(field, x + y / 2, y / 2)
        return cls(field, x, y)

    @classmethod
    def omega(cls, field: FieldDescriptor) -> "AlgebraicNumber":
        return cls.from_coords(field, 0, 1)

    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        if self.field.omega_is_half:
            return (self.a - self.b, 2 * self.b)
        return (self.a, self.b)

    @property
    def d(self) -> int:
        return self.field.d or 0

    def _coerce(self, other) -> "AlgebraicNumber":
        if isinstance(other, AlgebraicNumber):
            if other.field is not self.field and other.field != self.field:
                if other.field.is_rational and other.b == 0:
                    return AlgebraicNumber(self.field, other.a)
                if self.field.is_rational and self.b == 0:
                    raise _Promote(other.field)
                raise errors.FieldMismatch(f"{self.field.label()} vs {other.field.label()}")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, other)
        return NotImplemented

    def _binary(self, other, op):
        try:
            o = self._coerce(other)
        except _Promote as p:
            return op(AlgebraicNumber(p.field, self.a), other)
        if o is NotImplemented:
            return NotImplemented
        return op(self, o)

    def __add__(self, other):
        return self._binary(other, lambda s, o: AlgebraicNumber(s.field, s.a + o.a, s.b + o.b))

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda s, o: AlgebraicNumber(s.field, s.a - o.a, s.b - o.b))

    def __rsub__(self, other):
        return self._binary(other, lambda s, o: AlgebraicNumber(s.field, o.a - s.a, o.b - s.b))

    def __mul__(self, other):
        def mul(s, o):
            return AlgebraicNumber(
                s.field, s.a * o.a + s.d * s.b * o.b, s.a * o.b + s.b * o.a
            )

        return self._binary(other, mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda s, o: s * o.inverse())

    def __rtruediv__(self, other):
        return self._binary(other, lambda s, o: o * s.inverse())

    def __neg__(self):
        return AlgebraicNumber(self.field, -self.a, -self.b)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = AlgebraicNumber(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        if self.a != other.a or self.b != other.b:
            return False
        if self.b == 0:
            return True  # rational values compare equal across fields
        return self.field == other.field

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.a) if self.b == 0 else hash((self.field.d, self.a, self.b))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_zero(self) -> bool:
        return not self

    def conjugate(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        if self.field.is_rational:
            return self.a
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        if self.field.is_rational:
            return self.a
        return 2 * self.a

    def inverse(self) -> "AlgebraicNumber":
        n = self.norm()
        if n == 0:
            raise errors.ZeroElement("inverse of zero")
        if self.field.is_rational:
            return AlgebraicNumber(self.field, 1 / self.a)
        return AlgebraicNumber(self.field, self.a / n, -self.b / n)

    def is_rational(self) -> bool:
        return self.b == 0

    def denominator(self) -> int:
        """Least positive k with k*self integral."""
        x, y = self.coords
        return x.denominator * y.denominator // gcd(x.denominator, y.denominator)

    def is_integral(self) -> bool:
        return self.denominator() == 1

    def int_coords(self) -> tuple[int, int]:
        x, y = self.coords
        if x.denominator != 1 or y.denominator != 1:
            raise errors.NotIntegral(f"{self} is not integral")
        return int(x), int(y)

    def sign(self) -> int:
        """Sign under the real embedding sqrt(d) > 0 (real fields and Q only)."""
        if self.field.is_quadratic and self.field.d < 0:
            raise errors.InvalidInput("no real embedding")
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        lhs = self.a * self.a
        rhs = self.d * self.b * self.b
        return sa if lhs > rhs else sb

    def abs_cmp_one(self) -> int:
        """Compare |self| with 1 under the real embedding: -1, 0 or 1."""
        s = self.sign()
        v = self if s >= 0 else -self
        return (v - 1).sign()

    def __float__(self):
        return float(self.a) + float(self.b) * (self.d**0.5 if self.d > 0 else float("nan"))

    def __repr__(self):
        return f"AlgebraicNumber({self})"

    def __str__(self):
        return format_element(self)


class _Promote(Exception):
    def __init__(self, field):
        self.field = field


def format_element(x: AlgebraicNumber) -> str:
    from .ntheory import frac_str

    if x.b == 0:
        return frac_str(x.a)
    sq = f"sqrt({x.d})"
    coeff = "" if abs(x.b) == 1 else f"{frac_str(abs(x.b))}*"
    if x.a == 0:
        return f"{'-' if x.b < 0 else ''}{coeff}{sq}"
    sign = "-" if x.b < 0 else "+"
    return f"{frac_str(x.a)} {sign} {coeff}{sq}"


def element(field: FieldDescriptor, value) -> AlgebraicNumber:
    """Coerce ints, Fractions, 'p/q' strings or (x, y) integral-basis pairs into ``field``."""
    if isinstance(value, AlgebraicNumber):
        if value.field == field:
            return value
        if value.b == 0:
            return AlgebraicNumber(field, value.a)
        raise errors.FieldMismatch(f"{value} is not in {field.label()}")
    if isinstance(value, tuple):
        return AlgebraicNumber.from_coords(field, *value)
    return AlgebraicNumber(field, _as_fraction(value))


def sqrt_d(field: FieldDescriptor) -> AlgebraicNumber:
    return AlgebraicNumber(field, 0, 1)


# ---------------------------------------------------------------------------
# splitting and prime slots


def kronecker_symbol(a: int, m: int) -> int:
    if m == 0:
        raise errors.InvalidInput("Kronecker symbol needs m != 0")
    return kronecker(a, m)


def splitting_type(field: FieldDescriptor, p: int) -> SplittingType:
    if field.kind is FieldKind.ABSTRACT:
        table = field.table()
        if p not in table:
            raise errors.MissingTableEntry(f"no splitting data for p = {p}")
        return table[p]
    if field.is_rational:
        return SplittingType.SPLIT
    disc = field.discriminant
    if disc % p == 0:
        return SplittingType.RAMIFIED
    return SplittingType.SPLIT if kronecker(disc, p) == 1 else SplittingType.INERT


def is_totally_ramified(field: FieldDescriptor, p: int) -> bool:
    if field.is_rational:
        return True
    return splitting_type(field, p) is SplittingType.RAMIFIED


def is_totally_split(field: FieldDescriptor, p: int) -> bool:
    if field.is_rational:
        return True
    return splitting_type(field, p) is SplittingType.SPLIT


def ramification_data(field: FieldDescriptor, p: int) -> tuple[int, int, int]:
    """(e, f, number of primes above p)."""
    st = splitting_type(field, p)
    n = field.degree
    if st is SplittingType.SPLIT:
        return 1, 1, n
    if st is SplittingType.INERT:
        return 1, n, 1
    if st is SplittingType.RAMIFIED:
        return n, 1, 1
    raise errors.MissingTableEntry(f"mixed splitting of {p} has no (e, f) summary")


@dataclass(frozen=True)
class PrimeSlot:
    field: FieldDescriptor
    rational_prime: int
    splitting: SplittingType
    index: int
    e: int
    f: int
    generators: tuple[AlgebraicNumber, ...] = dc_field(compare=False)

    @property
    def p(self) -> int:
        return self.rational_prime

    def sort_key(self) -> tuple[int, int]:
        return (self.rational_prime, self.index)

    def label(self) -> str:
        if self.field.is_rational:
            return str(self.rational_prime)
        if self.splitting is SplittingType.SPLIT:
            return f"P{self.rational_prime}_{self.index}"
        return f"P{self.rational_prime}"

    def __repr__(self):
        return f"PrimeSlot({self.label()} in {self.field.label()})"

    def to_dict(self) -> dict:
        return {
            "label": self.label(),
            "p": self.rational_prime,
            "splitting": self.splitting.value,
            "index": self.index,
            "e": self.e,
            "f": self.f,
            "generators": [str(g) for g in self.generators],
        }

    @cached_property
    def _divisor(self) -> AlgebraicNumber:
        """beta with beta*P contained in pO_K and beta not in pO_K; v_P(beta/p) = -1."""
        if self.splitting is SplittingType.INERT:
            return AlgebraicNumber(self.field, 1)
        pi = self.generators[1]
        if self.splitting is SplittingType.RAMIFIED:
            return pi
        return pi.conjugate()

    @cached_property
    def ideal(self) -> "Ideal":
        return Ideal.from_generators(self.field, self.generators)

    @cached_property
    def residue_root(self) -> Optional[int]:
        """For degree-one slots: the image of w in F_p."""
        if self.field.is_rational:
            return 0
        if self.f != 1:
            return None
        pi = self.generators[1]
        x, y = pi.int_coords()
        # pi = x + y*w lies in the slot, so w = -x/y mod p
        return (-x * pow(y, -1, self.rational_prime)) % self.rational_prime


def _omega_minpoly(field: FieldDescriptor) -> tuple[int, int]:
    """(trace, norm) of w."""
    if field.omega_is_half:
        return 1, (1 - field.d) // 4
    return 0, -field.d


@lru_cache(maxsize=None)
def primes_above(field: FieldDescriptor, p: int) -> tuple[PrimeSlot, ...]:
    """All slots above the rational prime p, ordered by index."""
    if not field.has_arithmetic:
        raise errors.InvalidInput("abstract descriptors have no prime slots")
    if field.is_rational:
        return (PrimeSlot(field, p, SplittingType.SPLIT, 1, 1, 1, (AlgebraicNumber(field, p),)),)
    st = splitting_type(field, p)
    pp = AlgebraicNumber(field, p)
    if st is SplittingType.INERT:
        return (PrimeSlot(field, p, st, 1, 1, 2, (pp,)),)
    if st is SplittingType.RAMIFIED:
        if field.d % p == 0:
            pi = sqrt_d(field)
        else:  # p = 2, d = 3 mod 4
            pi = 1 + sqrt_d(field)
        return (PrimeSlot(field, p, st, 1, 2, 1, (pp, pi)),)
    t, n = _omega_minpoly(field)
    roots = quadratic_roots_mod(t, n, p)
    assert len(roots) == 2, (field, p, roots)
    w = AlgebraicNumber.omega(field)
    return tuple(
        PrimeSlot(field, p, st, i + 1, 1, 1, (pp, w - r)) for i, r in enumerate(roots)
    )


def slot(field: FieldDescriptor, p: int, index: int = 1) -> PrimeSlot:
    slots = primes_above(field, p)
    if not 1 <= index <= len(slots):
        raise errors.InvalidInput(f"no slot with index {index} above {p}")
    return slots[index - 1]


def _valuation_integral(alpha: AlgebraicNumber, s: PrimeSlot) -> int:
    p = s.rational_prime
    beta = s._divisor
    v = 0
    while True:
        gamma = alpha * beta
        x, y = gamma.coords
        if x.numerator % p or y.numerator % p:
            return v
        alpha = gamma / p
        v += 1


def valuation(x: AlgebraicNumber, s: PrimeSlot) -> int:
    """Exact valuation of the principal fractional ideal (x) at the slot."""
    if not isinstance(x, AlgebraicNumber):
        x = element(s.field, x)
    if x.is_zero():
        raise errors.ZeroElement("valuation of zero")
    if x.b == 0:
        return s.e * ord_p(x.a, s.rational_prime)
    if x.field != s.field:
        raise errors.FieldMismatch("slot and element live in different fields")
    k = x.denominator()
    alpha = x * k
    return _valuation_integral(alpha, s) - s.e * ord_p(k, s.rational_prime)


def rational_primes_of(x: AlgebraicNumber) -> list[int]:
    """Rational primes below every prime in the support of (x)."""
    k = x.denominator()
    n = (x * k).norm()
    primes = set(factorint(k)) if k > 1 else set()
    primes |= set(factorint(int(n))) if abs(n) > 1 else set()
    return sorted(primes)


def support(x: AlgebraicNumber) -> list[tuple[PrimeSlot, int]]:
    """(slot, valuation) for every slot where x has nonzero valuation."""
    out = []
    for p in rational_primes_of(x):
        for s in primes_above(x.field, p):
            v = valuation(x, s)
            if v:
                out.append((s, v))
    return out


# ---------------------------------------------------------------------------
# ideals (Z-lattices in O_K, Hermite normal form in the integral basis)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the full-rank lattice spanned by integer vectors:
    basis (a, 0), (b, c) with a, c > 0 and 0 <= b < a."""
    px, py = 0, 0
    zero_x = 0
    for vx, vy in vectors:
        if vy == 0:
            zero_x = gcd(zero_x, vx)
            continue
        if py == 0:
            if px:
                zero_x = gcd(zero_x, px)
            px, py = vx, vy
            continue
        g, s, t = _egcd(py, vy)
        nx, ny = s * px + t * vx, g
        # combination with vanishing y
        zx = (vy // g) * px - (py // g) * vx
        zero_x = gcd(zero_x, zx)
        px, py = nx, ny
    if py == 0 or zero_x == 0:
        raise errors.InvalidInput("generators do not span a full-rank lattice")
    if py < 0:
        px, py = -px, -py
    a = abs(zero_x)
    return a, px % a, py


class Ideal:
    """Nonzero integral ideal of a quadratic field in HNF: Z*a + Z*(b + c*w)."""

    __slots__ = ("field", "a", "b", "c")

    def __init__(self, field: FieldDescriptor, a: int, b: int, c: int):
        self.field = field
        self.a, self.b, self.c = a, b, c

    @classmethod
    def from_generators(cls, field: FieldDescriptor, gens: Iterable[AlgebraicNumber]) -> "Ideal":
        w = AlgebraicNumber.omega(field)
        vecs = []
        for g in gens:
            g = element(field, g)
            vecs.append(g.int_coords())
            vecs.append((g * w).int_coords())
        return cls(field, *_hnf(vecs))

    def basis(self) -> tuple[AlgebraicNumber, AlgebraicNumber]:
        return (
            AlgebraicNumber.from_coords(self.field, self.a, 0),
            AlgebraicNumber.from_coords(self.field, self.b, self.c),
        )

    def norm(self) -> int:
        return self.a * self.c

    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def __mul__(self, other: "Ideal") -> "Ideal":
        prods = [x * y for x in self.basis() for y in other.basis()]
        return Ideal.from_generators(self.field, prods)

    def __pow__(self, k: int) -> "Ideal":
        if k < 0:
            raise ValueError("negative ideal powers are not integral")
        result = Ideal(self.field, 1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Ideal)
            and self.field == other.field
            and (self.a, self.b, self.c) == (other.a, other.b, other.c)
        )

    def __hash__(self):
        return hash((self.field.d, self.a, self.b, self.c))

    def __repr__(self):
        return f"Ideal({self.field.label()}: {self.a}, {self.b} + {self.c}w)"

    def contains(self, x: AlgebraicNumber) -> bool:
        if not x.is_integral():
            return False
        xx, yy = x.int_coords()
        if yy % self.c:
            return False
        n = yy // self.c
        return (xx - n * self.b) % self.a == 0

    def is_unit_ideal(self) -> bool:
        return self.norm() == 1


def principal_generator(ideal: Ideal) -> Optional[AlgebraicNumber]:
    """A generator of the ideal when it is principal, else None."""
    field = ideal.field
    g = ideal.content()
    A = ideal.norm() // (g * g)
    if A == 1:
        return AlgebraicNumber(field, g)
    # primitive part: Z*A + Z*(B + w)
    B = (ideal.b // g) % A
    assert ideal.c == g, "content of an ideal equals its w-coefficient"
    D = field.discriminant
    delta = 1 if field.omega_is_half else 0
    b = 2 * B + delta
    assert (b * b - D) % (4 * A) == 0
    if D < 0:
        gen = _principal_imaginary(field, A, B, b, D)
    else:
        gen = _principal_real(field, A, b, D)
    if gen is None:
        return None
    gen = gen * g
    assert abs(gen.norm()) == ideal.norm() and ideal.contains(gen)
    return gen


def _principal_imaginary(field, A, B, b, D):
    c = (b * b - D) // (4 * A)
    ymax = isqrt(4 * A // -D) + 1
    for y in range(0, ymax + 1):
        rhs = 4 * A + D * y * y
        if rhs < 0:
            break
        s = isqrt(rhs)
        if s * s != rhs:
            continue
        for sg in (s, -s):
            num = sg - b * y
            if num % (2 * A) == 0:
                x = num // (2 * A)
                if A * x * x + b * x * y + c * y * y == 1:
                    return AlgebraicNumber.from_coords(field, x * A + y * B, y)
    return None


def _floor_quad(P: int, Q: int, s: int) -> int:
    """floor((P + sqrt D)/Q) for non-square D with isqrt(D) = s."""
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // (-Q)) - 1


def _principal_real(field, A, b, D, max_steps: int = 10**6):
    # continued fraction of (b + sqrt D)/(2A); a complete quotient with Q = +-2 is w + k
    s = isqrt(D)
    root = AlgebraicNumber(field, 0, 1 if D == field.d else 2)  # sqrt(D)
    P, Q = b, 2 * A
    prod = AlgebraicNumber(field, 1)
    seen = set()
    for _ in range(max_steps):
        a_i = _floor_quad(P, Q, s)
        P = a_i * Q - P
        Q = (D - P * P) // Q
        prod = prod * ((root + P) / Q)
        if Q in (2, -2):
            return AlgebraicNumber(field, 2 * A) / (prod * Q)
        state = (P, Q)
        if state in seen:
            return None
        seen.add(state)
    raise errors.ComputationError("continued fraction did not terminate")


def is_principal(ideal: Ideal) -> bool:
    return principal_generator(ideal) is not None


def ideal_order(ideal: Ideal, limit: int) -> int:
    """Order of the class of ``ideal`` (at most ``limit``)."""
    power = ideal
    for k in range(1, limit + 1):
        if is_principal(power):
            return k
        power = power * ideal
    raise errors.ComputationError("ideal class order exceeds the class number")


# ---------------------------------------------------------------------------
# units and class numbers


@lru_cache(maxsize=None)
def fundamental_unit(field: FieldDescriptor) -> AlgebraicNumber:
    """Fundamental unit eps > 1 of a real quadratic field, from the continued fraction of w."""
    if not field.is_real_quadratic:
        raise errors.NotRealQuadratic(f"{field.label()} is not real quadratic")
    D = field.discriminant
    s = isqrt(D)
    delta = 1 if field.omega_is_half else 0
    w = AlgebraicNumber.omega(field)
    wbar = w.conjugate()
    P, Q = delta, 2
    p_prev, p_cur = 1, None
    q_prev, q_cur = 0, None
    while True:
        a_i = _floor_quad(P, Q, s)
        if p_cur is None:
            p_cur, q_cur = a_i, 1
        else:
            p_prev, p_cur = p_cur, a_i * p_cur + p_prev
            q_prev, q_cur = q_cur, a_i * q_cur + q_prev
        P = a_i * Q - P
        Q = (D - P * P) // Q
        if Q == 2:
            eta = p_cur - q_cur * wbar
            if abs(eta.norm()) == 1:
                return _normalise_unit(eta)


def _normalise_unit(eta: AlgebraicNumber) -> AlgebraicNumber:
    if eta.sign() < 0:
        eta = -eta
    if eta.abs_cmp_one() < 0:
        eta = eta.inverse()
    return eta


def roots_of_unity(field: FieldDescriptor) -> tuple[AlgebraicNumber, int]:
    """(generator, order) of the torsion subgroup of O_K^*."""
    if field.is_quadratic and field.d == -1:
        return sqrt_d(field), 4
    if field.is_quadratic and field.d == -3:
        return AlgebraicNumber.omega(field), 6
    return AlgebraicNumber(field, -1), 2


@dataclass(frozen=True)
class ClassData:
    field: FieldDescriptor
    h: int
    fundamental_unit: Optional[AlgebraicNumber]
    unit_norm: Optional[int]
    h_plus: int

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "h": self.h,
            "h_plus": self.h_plus,
            "unit_norm": self.unit_norm,
            "fundamental_unit": encode(self.fundamental_unit),
        }


def reduced_forms_definite(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced positive definite forms of discriminant D < 0."""
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append((a, b, c))
    return out


def reduced_forms_indefinite(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced indefinite forms (0 < b < sqrt D, sqrt D - b < 2|a| < sqrt D + b)."""
    out = []
    s = isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        N = (b * b - D) // 4  # = a*c < 0
        M = -N
        for a0 in range(1, isqrt(M) + 1):
            if M % a0:
                continue
            for aa in {a0, M // a0}:
                two_a = 2 * aa
                if D >= (two_a + b) ** 2:
                    continue
                if two_a - b > 0 and (two_a - b) ** 2 >= D:
                    continue
                for a in (aa, -aa):
                    c = N // a
                    if gcd(gcd(a, b), c) == 1:
                        out.append((a, b, c))
    return sorted(set(out))


def _rho(form: tuple[int, int, int], D: int, s: int) -> tuple[int, int, int]:
    a, b, c = form
    m = 2 * abs(c)
    lo = s + 1 - m
    bp = lo + ((-b - lo) % m)
    return (c, bp, (bp * bp - D) // (4 * c))


def narrow_class_number_from_cycles(D: int) -> int:
    forms = set(reduced_forms_indefinite(D))
    s = isqrt(D)
    cycles = 0
    while forms:
        start = forms.pop()
        cycles += 1
        f = _rho(start, D, s)
        while f != start:
            forms.discard(f)
            f = _rho(f, D, s)
    return cycles


@lru_cache(maxsize=None)
def class_data(field: FieldDescriptor, bound: int = DEFAULT_DISCRIMINANT_BOUND) -> ClassData:
    if not field.is_quadratic:
        raise errors.InvalidInput("class data is computed for quadratic fields")
    D = field.discriminant
    if abs(D) > bound:
        raise errors.DiscriminantTooLarge(f"|D| = {abs(D)} exceeds {bound}")
    if D < 0:
        h = len(reduced_forms_definite(D))
        return ClassData(field, h, None, None, h)
    eps = fundamental_unit(field)
    n = int(eps.norm())
    h_plus = narrow_class_number_from_cycles(D)
    h = h_plus if n == -1 else h_plus // 2
    return ClassData(field, h, eps, n, h_plus)


def class_number(field: FieldDescriptor) -> int:
    return 1 if field.is_rational else class_data(field).h
