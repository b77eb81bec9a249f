"""Legendre lambda-line: the six-element orbit, j-invariants and S-integrality."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import errors
from .ntheory import prime_divisors
from .qfield import QQ, AlgebraicNumber, FieldDescriptor, PrimeSlot, element, primes_above, valuation


def _lift(x, field: Optional[FieldDescriptor] = None) -> AlgebraicNumber:
    if isinstance(x, AlgebraicNumber):
        return x
    return element(field or QQ, x)


def _check_lambda(lam: AlgebraicNumber) -> None:
    if lam.is_zero() or (lam - 1).is_zero():
        raise errors.DegenerateLambda(f"lambda = {lam} is 0 or 1")


def j_of_lambda(lam) -> AlgebraicNumber:
    """256 (l^2 - l + 1)^3 / (l^2 (1 - l)^2)."""
    lam = _lift(lam)
    _check_lambda(lam)
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (1 - lam) ** 2)


def orbit_values(lam, keep_order: bool = False) -> list[AlgebraicNumber]:
    """The images of lambda under the six anharmonic maps, duplicates removed.

    Order is the map order l, 1/l, 1-l, 1/(1-l), l/(l-1), (l-1)/l unless
    ``keep_order`` is false, in which case the list is sorted canonically.
    """
    lam = _lift(lam)
    _check_lambda(lam)
    vals = [lam, 1 / lam, 1 - lam, 1 / (1 - lam), lam / (lam - 1), (lam - 1) / lam]
    out = list(dict.fromkeys(vals))
    if not keep_order:
        out.sort(key=lambda v: (v.a, v.b))
    return out


@dataclass(frozen=True)
class LambdaOrbit:
    values: tuple[AlgebraicNumber, ...]
    j: AlgebraicNumber

    @property
    def size(self) -> int:
        return len(self.values)

    def __contains__(self, x) -> bool:
        return _lift(x) in self.values

    def to_dict(self) -> dict:
        from .report import encode

        return {"values": [encode(v) for v in self.values], "size": self.size, "j": encode(self.j)}


def lambda_orbit(lam) -> LambdaOrbit:
    vals = tuple(orbit_values(lam))
    return LambdaOrbit(vals, j_of_lambda(vals[0]))


def j_from_solution(lam, mu) -> AlgebraicNumber:
    """256 (1 - l m)^3 / (l m)^2 for a solution of l + m = 1."""
    field = lam.field if isinstance(lam, AlgebraicNumber) else (
        mu.field if isinstance(mu, AlgebraicNumber) else QQ)
    lam, mu = _lift(lam, field), _lift(mu, field)
    if not (lam + mu - 1).is_zero():
        raise errors.NotASolution(f"{lam} + {mu} != 1")
    p = lam * mu
    if p.is_zero():
        raise errors.DegenerateLambda("lambda * mu = 0")
    return 256 * (1 - p) ** 3 / (p * p)


def frey_lambda(t) -> AlgebraicNumber:
    """A / (2C) for a Frey triple, from the root ordering (-A, B, 0) and A + B = 2C."""
    if t.C.is_zero():
        raise errors.DegenerateTriple("C = 0")
    return t.A / (2 * t.C)


def s_integrality(j, S: Sequence[PrimeSlot], field: Optional[FieldDescriptor] = None) -> bool:
    """True when j has non-negative valuation at every prime outside S."""
    if field is None:
        field = S[0].field if S else (j.field if isinstance(j, AlgebraicNumber) else QQ)
    j = _lift(j, field)
    if j.is_zero():
        raise errors.ZeroElement("j = 0")
    inS = set(S)
    k = j.denominator()
    # j * k is integral, so negative valuations sit above primes of k
    for p in prime_divisors(k) if k > 1 else []:
        for s in primes_above(field, p):
            if s not in inS and valuation(j, s) < 0:
                return False
    return True
