"""S-unit groups of Q and quadratic fields and the equation lambda + mu = 1.

The solver scans an exponent box.  A modular pre-sieve (compiled when the
extension is available) discards exponent vectors for which 1 - lambda cannot
be an S-unit modulo auxiliary primes outside S; every survivor is then checked
with exact arithmetic.  Completeness therefore holds exactly within the box.
"""
from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _kernels, errors
from .legendre import orbit_values
from .ntheory import factorint, multiplicative_order, primes_up_to, lcm
from .qfield import (
    AlgebraicNumber,
    FieldDescriptor,
    Ideal,
    PrimeSlot,
    SplittingType,
    class_data,
    fundamental_unit,
    ideal_order,
    is_totally_split,
    kronecker,
    primes_above,
    principal_generator,
    roots_of_unity,
    valuation,
)

DEFAULT_ENUMERATION_CEILING = 10**9


class Relevance(str, enum.Enum):
    IRRELEVANT = "irrelevant"
    RELEVANT = "relevant"


IRRELEVANT_PAIRS = frozenset(
    [(Fraction(-1), Fraction(2)), (Fraction(2), Fraction(-1)), (Fraction(1, 2), Fraction(1, 2))]
)


@dataclass(frozen=True)
class SUnitGroup:
    field: FieldDescriptor
    S: tuple[PrimeSlot, ...]
    torsion: tuple[AlgebraicNumber, ...]
    free_generators: tuple[AlgebraicNumber, ...]
    valuation_matrix: tuple[tuple[int, ...], ...]
    n_units: int  # leading free generators that are units (0 or 1)

    @property
    def rank(self) -> int:
        return len(self.free_generators)

    @property
    def torsion_generator(self) -> AlgebraicNumber:
        return self.torsion[1] if len(self.torsion) > 1 else self.torsion[0]

    @property
    def torsion_order(self) -> int:
        return len(self.torsion)

    def element(self, exponents: Sequence[int]) -> AlgebraicNumber:
        t, *es = exponents
        x = self.torsion[t % self.torsion_order]
        for g, e in zip(self.free_generators, es):
            if e:
                x = x * g**e
        return x

    def rational_primes(self) -> list[int]:
        return sorted({s.rational_prime for s in self.S})

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "field": self.field.to_dict(),
            "S": [s.label() for s in self.S],
            "torsion_order": self.torsion_order,
            "torsion_generator": encode(self.torsion_generator),
            "free_generators": [encode(g) for g in self.free_generators],
            "valuation_matrix": [list(r) for r in self.valuation_matrix],
        }


@dataclass(frozen=True)
class SUnitSolution:
    lambda_: AlgebraicNumber
    mu: AlgebraicNumber
    exponents: tuple[tuple[int, ...], tuple[int, ...]]
    valuations: tuple[tuple[int, int], ...]
    m: int
    relevance: Relevance
    S: tuple[PrimeSlot, ...]
    designated: Optional[PrimeSlot]
    bound: Optional[int]

    @property
    def pair(self) -> tuple[AlgebraicNumber, AlgebraicNumber]:
        return (self.lambda_, self.mu)

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "lambda": encode(self.lambda_),
            "mu": encode(self.mu),
            "lambda_exponents": list(self.exponents[0]),
            "mu_exponents": list(self.exponents[1]),
            "valuations": {
                s.label(): [vl, vm] for s, (vl, vm) in zip(self.S, self.valuations)
            },
            "m": self.m,
            "designated_slot": self.designated.label() if self.designated else None,
            "relevance": self.relevance.value,
            "bound": self.bound,
        }


# ---------------------------------------------------------------------------
# group construction


def _int_hnf(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of a full-rank integer lattice (upper triangular)."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(ncols):
        pivot_rows = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(pivot_rows) > 1:
            pivot_rows.sort(key=lambda r: abs(r[col]))
            p = pivot_rows[0]
            new = [p]
            for r in pivot_rows[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                (new if r[col] != 0 else rest).append(r)
            pivot_rows = new
        if not pivot_rows:
            raise errors.ComputationError("slot lattice is not of full rank")
        p = pivot_rows[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = [r for r in rest if any(r)]
    for i in range(len(basis)):
        for j in range(i):
            q = basis[j][i] // basis[i][i]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return basis


def _slot_generators(field: FieldDescriptor, S: Sequence[PrimeSlot], h: int):
    if not S:
        return [], []
    t = len(S)
    ideals = [s.ideal for s in S]
    orders = [ideal_order(I, h) for I in ideals]
    rows = [[orders[i] if j == i else 0 for j in range(t)] for i in range(t)]
    if any(k > 1 for k in orders):
        for vec in itertools.product(*[range(k) for k in orders]):
            if not any(vec) or sum(1 for x in vec if x) < 2:
                continue
            I = Ideal(field, 1, 0, 1)
            for ideal, k in zip(ideals, vec):
                if k:
                    I = I * ideal**k
            if principal_generator(I) is not None:
                rows.append(list(vec))
    basis = _int_hnf(rows, t)
    gens = []
    for row in basis:
        I = Ideal(field, 1, 0, 1)
        for ideal, k in zip(ideals, row):
            if k:
                I = I * ideal**k
        g = principal_generator(I)
        assert g is not None
        gens.append(g)
    return gens, basis


def sunit_group(
    field: FieldDescriptor, S: Sequence[PrimeSlot], discriminant_bound: int = 10**6
) -> SUnitGroup:
    """Generators of the S-unit group: torsion, the fundamental unit (real fields) and a
    basis of the principal part of the S-ideal lattice."""
    S = tuple(sorted(dict.fromkeys(S), key=PrimeSlot.sort_key))
    for s in S:
        if s.field != field:
            raise errors.FieldMismatch(f"{s!r} does not belong to {field.label()}")
    if field.is_rational:
        gens = [AlgebraicNumber(field, s.rational_prime) for s in S]
        tors = (AlgebraicNumber(field, 1), AlgebraicNumber(field, -1))
        vm = tuple(tuple(1 if i == j else 0 for j in range(len(S))) for i in range(len(S)))
        return SUnitGroup(field, S, tors, tuple(gens), vm, 0)
    if not field.is_quadratic:
        raise errors.InvalidInput("S-unit groups need a rational or quadratic field")
    cd = class_data(field, discriminant_bound)
    zeta, w = roots_of_unity(field)
    tors = tuple(zeta**k for k in range(w))
    units = [fundamental_unit(field)] if field.is_real_quadratic else []
    slot_gens, _ = _slot_generators(field, S, cd.h)
    gens = tuple(units + slot_gens)
    vm = tuple(tuple(valuation(g, s) for s in S) for g in gens)
    return SUnitGroup(field, S, tors, gens, vm, len(units))


def slots_above(field: FieldDescriptor, primes: Sequence[int]) -> tuple[PrimeSlot, ...]:
    return tuple(s for p in primes for s in primes_above(field, p))


# ---------------------------------------------------------------------------
# membership and decomposition


def is_s_unit(x: AlgebraicNumber, group: SUnitGroup) -> bool:
    """Exact test that (x) is supported on S."""
    if x.is_zero():
        return False
    field = group.field
    k = x.denominator()
    n = abs((x * k).norm())
    ps = set(group.rational_primes())
    for q in ps:
        while n % q == 0:
            n //= q
    kk = k
    for q in ps:
        while kk % q == 0:
            kk //= q
    extra = set(factorint(kk)) if kk > 1 else set()
    for q in extra:
        while n % q == 0:
            n //= q
    if n != 1:
        return False
    S = set(group.S)
    for q in sorted(ps | extra):
        for s in primes_above(field, q):
            if s not in S and valuation(x, s) != 0:
                return False
    return True


def decompose(x: AlgebraicNumber, group: SUnitGroup) -> tuple[int, ...]:
    """Exponent vector (t, e_1..e_r) with x = zeta^t * prod g_i^e_i."""
    vals = [valuation(x, s) for s in group.S]
    nu = group.n_units
    slot_rows = [row for row in group.valuation_matrix[nu:]]
    coeffs = []
    for j in range(len(group.S)):
        acc = vals[j] - sum(c * slot_rows[i][j] for i, c in enumerate(coeffs))
        piv = slot_rows[j][j]
        if acc % piv:
            raise errors.ComputationError(f"{x} is not in the S-unit group")
        coeffs.append(acc // piv)
    u = x
    for g, c in zip(group.free_generators[nu:], coeffs):
        if c:
            u = u / g**c
    unit_exps = []
    if nu:
        eps = group.free_generators[0]
        s = 0
        while u.abs_cmp_one() > 0:
            u = u / eps
            s += 1
        while u.abs_cmp_one() < 0:
            u = u * eps
            s -= 1
        unit_exps.append(s)
    for t, z in enumerate(group.torsion):
        if z == u:
            return (t, *unit_exps, *coeffs)
    raise errors.ComputationError(f"{x} is not in the S-unit group")


def _m_value(lam, mu, slot: Optional[PrimeSlot]) -> int:
    if slot is None:
        return 0
    return max(abs(valuation(lam, slot)), abs(valuation(mu, slot)))


def _relevance(lam: AlgebraicNumber, mu: AlgebraicNumber) -> Relevance:
    if lam.b == 0 and mu.b == 0 and (lam.a, mu.a) in IRRELEVANT_PAIRS:
        return Relevance.IRRELEVANT
    return Relevance.RELEVANT


def make_solution(
    lam: AlgebraicNumber,
    group: SUnitGroup,
    designated: Optional[PrimeSlot] = None,
    bound: Optional[int] = None,
    lam_exps: Optional[tuple[int, ...]] = None,
) -> SUnitSolution:
    mu = 1 - lam
    if lam.is_zero() or mu.is_zero() or not (is_s_unit(lam, group) and is_s_unit(mu, group)):
        raise errors.NotASolution(f"({lam}, {mu}) is not a pair of S-units")
    if designated is None and group.S:
        designated = group.S[0]
    vals = tuple((valuation(lam, s), valuation(mu, s)) for s in group.S)
    exps = (lam_exps or decompose(lam, group), decompose(mu, group))
    return SUnitSolution(
        lam, mu, exps, vals, _m_value(lam, mu, designated), _relevance(lam, mu),
        group.S, designated, bound,
    )


# ---------------------------------------------------------------------------
# modular pre-sieve


def _residue(x: AlgebraicNumber, q: int, root: int) -> int:
    cx, cy = x.coords
    val = cx.numerator * pow(cx.denominator, -1, q) + cy.numerator * pow(cy.denominator, -1, q) * root
    return val % q


def sieve_moduli(group: SUnitGroup, count: int = 8, scan: int = 400, qmax: int = 1 << 15):
    """Auxiliary degree-one primes outside S, ranked by how small the group image is.

    Returns a list of (q, root, residues-of-(zeta, g_1..g_r), image order)."""
    field = group.field
    bad = set(group.rational_primes())
    cands = []
    seen = 0
    for q in primes_up_to(qmax):
        if q in bad or q < 5:
            continue
        if field.is_quadratic:
            if field.discriminant % q == 0 or kronecker(field.discriminant, q) != 1:
                continue
            root = primes_above(field, q)[0].residue_root
        else:
            root = 0
        try:
            res = [_residue(group.torsion_generator, q, root)] + [
                _residue(g, q, root) for g in group.free_generators
            ]
        except ValueError:  # denominator divisible by q
            continue
        if any(r == 0 for r in res):
            continue
        order = 1
        for r in res:
            order = lcm(order, multiplicative_order(r, q))
        cands.append((Fraction(order, q - 1), q, root, res, order))
        seen += 1
        if seen >= scan:
            break
    cands.sort(key=lambda c: (c[0], c[1]))
    chosen = [c for c in cands if c[0] < 1][:count] or cands[:1]
    return [(q, root, res, order) for _, q, root, res, order in chosen]


def _sieve_tables(group: SUnitGroup, bound: int, moduli):
    m = len(moduli)
    r = group.rank
    w = group.torsion_order
    width = 2 * bound + 1
    qmax = max(q for q, *_ in moduli)
    powtab = np.zeros((m, r, width), dtype=np.int64)
    torstab = np.zeros((m, w), dtype=np.int64)
    member = np.zeros((m, qmax), dtype=np.uint8)
    for j, (q, _root, res, order) in enumerate(moduli):
        z = res[0]
        for t in range(w):
            torstab[j, t] = pow(z, t, q)
        for i, g in enumerate(res[1:]):
            for e in range(-bound, bound + 1):
                powtab[j, i, e + bound] = pow(g, e, q)
        for x in range(1, q):
            if pow(x, order, q) == 1:
                member[j, x] = 1
    return powtab, torstab, member


def _run_kernel(args):
    powtab, torstab, moduli, member, bound, lo, hi = args
    return _kernels.sunit_box_sieve(powtab, torstab, moduli, member, bound, lo, hi)


def candidate_exponents(group: SUnitGroup, bound: int, workers: int = 1) -> np.ndarray:
    """Exponent vectors surviving the modular sieve, in lexicographic order."""
    moduli = sieve_moduli(group)
    if not moduli:
        width = 2 * bound + 1
        rows = [
            (t, *e)
            for t in range(group.torsion_order)
            for e in itertools.product(range(-bound, bound + 1), repeat=group.rank)
        ]
        return np.array(rows, dtype=np.int64).reshape(len(rows), group.rank + 1)
    powtab, torstab, member = _sieve_tables(group, bound, moduli)
    qs = np.array([q for q, *_ in moduli], dtype=np.int64)
    width = 2 * bound + 1
    if workers <= 1 or group.rank == 0:
        return _run_kernel((powtab, torstab, qs, member, bound, 0, width))
    step = -(-width // workers)
    chunks = [
        (powtab, torstab, qs, member, bound, lo, min(width, lo + step))
        for lo in range(0, width, step)
    ]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_run_kernel, chunks))
    merged = np.concatenate(parts) if parts else np.zeros((0, group.rank + 1), np.int64)
    order = np.lexsort(merged.T[::-1]) if len(merged) else np.arange(0)
    return merged[order]


def box_cardinality(group: SUnitGroup, bound: int) -> int:
    return group.torsion_order * (2 * bound + 1) ** group.rank


def solve_sunit(
    group: SUnitGroup,
    bound: int,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
    workers: int = 1,
    designated: Optional[PrimeSlot] = None,
) -> list[SUnitSolution]:
    """All solutions whose lambda has exponents in [-bound, bound]^rank (any torsion)."""
    if bound < 0:
        raise errors.InvalidInput("bound must be non-negative")
    size = box_cardinality(group, bound)
    if size > ceiling:
        raise errors.BoxTooLarge(f"box of {size} exponent vectors exceeds ceiling {ceiling}")
    if designated is None and group.S:
        designated = group.S[0]
    powers = [
        {e: g**e for e in range(-bound, bound + 1)} for g in group.free_generators
    ]
    out = []
    for row in candidate_exponents(group, bound, workers):
        t, *es = (int(v) for v in row)
        lam = group.torsion[t]
        for pw, e in zip(powers, es):
            if e:
                lam = lam * pw[e]
        mu = 1 - lam
        if mu.is_zero() or not is_s_unit(mu, group):
            continue
        out.append(
            SUnitSolution(
                lam,
                mu,
                ((t, *es), decompose(mu, group)),
                tuple((valuation(lam, s), valuation(mu, s)) for s in group.S),
                _m_value(lam, mu, designated),
                _relevance(lam, mu),
                group.S,
                designated,
                bound,
            )
        )
    out.sort(key=lambda s: s.exponents[0])
    return out


def classify(sol: SUnitSolution, designated_slot: Optional[PrimeSlot]) -> SUnitSolution:
    return replace(
        sol,
        designated=designated_slot,
        m=_m_value(sol.lambda_, sol.mu, designated_slot),
        relevance=_relevance(sol.lambda_, sol.mu),
    )


# ---------------------------------------------------------------------------
# orbits and filters


def orbit_partition(sols: Sequence[SUnitSolution]) -> list[list[SUnitSolution]]:
    """Solutions grouped by the orbit of lambda; groups and members in exponent order."""
    groups: dict[frozenset, list[SUnitSolution]] = {}
    for s in sols:
        key = frozenset(orbit_values(s.lambda_))
        groups.setdefault(key, []).append(s)
    parts = [sorted(g, key=lambda s: s.exponents[0]) for g in groups.values()]
    parts.sort(key=lambda g: g[0].exponents[0])
    return parts


def orbit_reduce(sols: Sequence[SUnitSolution]) -> list[SUnitSolution]:
    fields = {s.lambda_.field for s in sols if s.lambda_.b != 0}
    if len(fields) > 1:
        raise errors.FieldMismatch("solutions from different fields")
    return [g[0] for g in orbit_partition(sols)]


class Check(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class FilterReport:
    mod3: Check
    mod3_detail: str
    partner: Optional[tuple[AlgebraicNumber, AlgebraicNumber]]
    partner_check: Check
    m: Optional[int]
    m_partner: Optional[int]
    partner_norm: Optional[int]

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "mod3": self.mod3.value,
            "mod3_detail": self.mod3_detail,
            "partner": None if self.partner is None else [encode(x) for x in self.partner],
            "partner_check": self.partner_check.value,
            "m": self.m,
            "m_partner": self.m_partner,
            "partner_norm": self.partner_norm,
        }


def _congruent_minus_one_mod3(x: AlgebraicNumber, field: FieldDescriptor) -> bool:
    y = x + 1
    if y.is_zero():
        return True
    return all(valuation(y, s) >= 1 for s in primes_above(field, 3))


def _two_is_single_prime(field: FieldDescriptor) -> bool:
    if field.is_rational:
        return True
    st = primes_above(field, 2)[0].splitting
    return st in (SplittingType.INERT, SplittingType.RAMIFIED)


def congruence_filters(sol: SUnitSolution, field: FieldDescriptor) -> FilterReport:
    lam, mu = sol.lambda_, sol.mu
    # residue check at the primes above 3
    if not is_totally_split(field, 3):
        mod3, detail = Check.NOT_APPLICABLE, "3 does not split completely"
    elif any(s.rational_prime == 3 for s in sol.S):
        mod3, detail = Check.NOT_APPLICABLE, "S meets the primes above 3"
    elif not (lam.is_integral() and mu.is_integral()):
        mod3, detail = Check.NOT_APPLICABLE, "lambda or mu is not integral"
    else:
        ok = _congruent_minus_one_mod3(lam, field) and _congruent_minus_one_mod3(mu, field)
        mod3 = Check.PASS if ok else Check.FAIL
        detail = "lambda = mu = -1 mod 3" if ok else "residue mismatch mod 3"
    # normalised partner: lambda' integral, mu' a unit, same m
    twos = [s for s in sol.S if s.rational_prime == 2]
    if len(sol.S) != 1 or len(twos) != 1 or not _two_is_single_prime(field):
        return FilterReport(mod3, detail, None, Check.NOT_APPLICABLE, None, None, None)
    P = twos[0]
    m = _m_value(lam, mu, P)
    for x in orbit_values(lam, keep_order=True):
        y = 1 - x
        if valuation(x, P) >= 0 and valuation(y, P) == 0:
            m2 = _m_value(x, y, P)
            check = Check.PASS if m2 == m else Check.FAIL
            return FilterReport(mod3, detail, (x, y), check, m, m2, int(y.norm()))
    return FilterReport(mod3, detail, None, Check.FAIL, m, None, None)
