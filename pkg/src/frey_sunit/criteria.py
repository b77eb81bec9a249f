"""Verdicts for the S-unit criterion and its corollaries.

Each check lists the conditions it evaluated.  The status is derived from that
list alone (see :func:`status_from_evidence`), so a verdict can be replayed.
Conditions that decide whether a statement applies at all are *structural*;
their failure yields ``not_applicable`` rather than ``fails``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Optional, Sequence

from . import errors
from .legendre import j_from_solution
from .ntheory import is_prime, kronecker, prime_divisors
from .qfield import (
    AlgebraicNumber,
    FieldDescriptor,
    PrimeSlot,
    SplittingType,
    abstract_field,
    class_data,
    is_totally_ramified,
    is_totally_split,
    make_field,
    primes_above,
    splitting_type,
    valuation,
)
from .sunit import (
    DEFAULT_ENUMERATION_CEILING,
    Check,
    SUnitSolution,
    classify,
    congruence_filters,
    solve_sunit,
    sunit_group,
)

NO_NUMERIC_BOUND = "the exponent bound B_K exists but is not computed"
CONJECTURAL = (
    "conditional: modularity of the Frey curve and the level-lowering input are assumed, "
    "not checked"
)


class Status(str, enum.Enum):
    HOLDS = "holds"
    HOLDS_AT_BOUND = "holds_at_bound"
    FAILS = "fails"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None
    structural: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "witness": self.witness,
            "structural": self.structural,
        }


def _cond(name, passed, detail="", witness=None, structural=False) -> Condition:
    passed = bool(passed)
    if not passed and witness is None:
        witness = detail or name
    return Condition(name, passed, detail, None if passed else witness, structural)


def status_from_evidence(evidence: Sequence[Condition], solver_backed: bool) -> Status:
    if any(c.structural and not c.passed for c in evidence):
        return Status.NOT_APPLICABLE
    if any(not c.passed for c in evidence):
        return Status.FAILS
    return Status.HOLDS_AT_BOUND if solver_backed else Status.HOLDS


@dataclass(frozen=True)
class CriterionVerdict:
    statement_id: str
    field: Optional[FieldDescriptor]
    parameters: dict
    status: Status
    evidence: tuple[Condition, ...]
    search_bound: Optional[int] = None
    alpha_exclusions: tuple[int, ...] = ()
    exclusion_readings: dict = dc_field(default_factory=dict)
    caveats: tuple[str, ...] = ()

    def replay(self) -> Status:
        return status_from_evidence(self.evidence, self.search_bound is not None)

    def failed(self) -> list[Condition]:
        return [c for c in self.evidence if not c.passed]

    def to_dict(self) -> dict:
        return {
            "statement_id": self.statement_id,
            "field": None if self.field is None else self.field.to_dict(),
            "parameters": self.parameters,
            "status": self.status.value,
            "evidence": [c.to_dict() for c in self.evidence],
            "search_bound": self.search_bound,
            "alpha_exclusions": list(self.alpha_exclusions),
            "exclusion_readings": {k: list(v) for k, v in sorted(self.exclusion_readings.items())},
            "caveats": list(self.caveats),
        }


def _verdict(sid, field, params, evidence, bound=None, exclusions=(), readings=None, caveats=()):
    evidence = tuple(evidence)
    readings = dict(readings or {})
    caveats = list(caveats)
    distinct = {tuple(v) for v in readings.values()}
    if len(distinct) > 1:
        caveats.append(
            "excluded alpha differs between readings: "
            + "; ".join(f"{k} {sorted(v)}" for k, v in sorted(readings.items()))
        )
    if bound is not None:
        caveats.append(f"S-unit evidence is complete only for exponents in [-{bound}, {bound}]")
    return CriterionVerdict(
        sid, field, params, status_from_evidence(evidence, bound is not None), evidence,
        bound, tuple(sorted(set(exclusions))), readings, tuple(caveats),
    )


def _field_caveats(field: Optional[FieldDescriptor]) -> list[str]:
    out = [NO_NUMERIC_BOUND]
    if field is None or not field.is_totally_real:
        out.append(CONJECTURAL)
    return out


def _ord2(field: FieldDescriptor, slot: Optional[PrimeSlot] = None) -> int:
    if slot is not None:
        return valuation(AlgebraicNumber(field, 2), slot)
    if field.has_arithmetic:
        return primes_above(field, 2)[0].e
    st = splitting_type(field, 2)
    return field.degree if st is SplittingType.RAMIFIED else 1


def _behaviour(field: FieldDescriptor, p: int) -> str:
    if field.is_rational:
        return f"{p} trivially (degree 1)"
    return f"{p} is {splitting_type(field, p).value}"


def _alpha_condition(alpha: Optional[int], excluded: Sequence[int]) -> list[Condition]:
    if alpha is None:
        return []
    ex = sorted(set(excluded))
    return [_cond(f"alpha not in {ex}", alpha not in ex, f"alpha = {alpha}", f"alpha = {alpha} is excluded")]


def _sol_label(s: SUnitSolution) -> str:
    return f"({s.lambda_}, {s.mu})"


# ---------------------------------------------------------------------------
# the S-unit criterion


def expected_S(field: FieldDescriptor, n: int) -> tuple[PrimeSlot, ...]:
    ps = sorted({2} | set(prime_divisors(n) if n > 1 else []))
    return tuple(s for p in ps for s in primes_above(field, p))


def theoremA_check(
    field: FieldDescriptor,
    n: int,
    slot: PrimeSlot,
    solutions: Sequence[SUnitSolution],
    bound: int,
    check_S: bool = True,
) -> CriterionVerdict:
    """Every solution has m <= 4 ord(2) at the slot, and ord(n) != 4 ord(2)."""
    if slot.rational_prime != 2 or slot.field != field:
        raise errors.InvalidInput("the distinguished slot must lie above 2 in the given field")
    if check_S:
        want = set(expected_S(field, n))
        for s in solutions:
            if set(s.S) != want:
                raise errors.WrongS(
                    f"solutions use S = {[x.label() for x in s.S]}, expected {[x.label() for x in sorted(want, key=PrimeSlot.sort_key)]}"
                )
    o2 = _ord2(field, slot)
    on = valuation(AlgebraicNumber(field, n), slot)
    sols = [classify(s, slot) for s in solutions]
    worst = max(sols, key=lambda s: (s.m, s.exponents[0]), default=None)
    max_m = worst.m if worst else 0
    bad = [s for s in sols if s.m > 4 * o2]
    ev = [
        _cond(f"ord(n) != 4 ord(2) = {4 * o2}", on != 4 * o2, f"ord(n) = {on}"),
        _cond(
            f"max m <= 4 ord(2) = {4 * o2}",
            not bad,
            f"{len(sols)} solutions, max m = {max_m}",
            None if not bad else f"{_sol_label(bad[0])} has m = {bad[0].m}",
        ),
    ]
    readings = {"hypothesis": [4]}
    return _verdict(
        "theoremA", field,
        {"n": n, "slot": slot.label(), "ord2": o2, "ord_n": on, "max_m": max_m,
         "solutions": len(sols)},
        ev, bound, [4], readings, _field_caveats(field),
    )


@dataclass(frozen=True)
class TraceRecord:
    case: str  # m0 | both_negative | lambda_positive | mu_positive
    v_lambda: int
    v_mu: int
    v_lambda_mu: int
    m: int
    bound: int
    ord_j: Optional[int]  # None when j = 0
    satisfied: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def contradiction_trace(sol: SUnitSolution, slot: PrimeSlot) -> TraceRecord:
    """Valuation case of (lambda, mu) at the slot and the bound ord(j) >= 8 ord(2) - 2m."""
    lam, mu = sol.lambda_, sol.mu
    vl, vm = valuation(lam, slot), valuation(mu, slot)
    m = max(abs(vl), abs(vm))
    if m == 0:
        case = "m0"
    elif vl < 0 and vm < 0:
        case = "both_negative"
    elif vl > 0:
        case = "lambda_positive"
    else:
        case = "mu_positive"
    bound = 8 * _ord2(slot.field, slot) - 2 * m
    j = j_from_solution(lam, mu)
    oj = None if j.is_zero() else valuation(j, slot)
    return TraceRecord(case, vl, vm, vl + vm, m, bound, oj, oj is None or oj >= bound)


# ---------------------------------------------------------------------------
# quadratic corollaries


def _solver_evidence(field, S, bound, ceiling, test, name):
    group = sunit_group(field, S)
    sols = solve_sunit(group, bound, ceiling=ceiling)
    bad = [s for s in sols if not test(s)]
    return _cond(
        name, not bad, f"{len(sols)} solutions at bound {bound}",
        None if not bad else f"{_sol_label(bad[0])}",
    ), sols


def corollary_quadratic(
    d: int, ell: int, alpha: Optional[int] = None, bound: Optional[int] = None,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> CriterionVerdict:
    """Q(sqrt d) with an auxiliary prime ell: n = 2^alpha ell^beta."""
    field = make_field(d)
    if d > 0:
        ev = [
            _cond("d >= 13", d >= 13, f"d = {d}"),
            _cond("d = 5 mod 8", d % 8 == 5, f"d mod 8 = {d % 8}"),
        ]
    else:
        ev = [
            _cond("|d| >= 7", abs(d) >= 7, f"d = {d}"),
            _cond("d = 2, 3 mod 4", d % 4 in (2, 3), f"d mod 4 = {d % 4}"),
        ]
    ks = kronecker(d, ell) if ell > 0 else 0
    ev += [
        _cond("ell prime", is_prime(ell), f"ell = {ell}"),
        _cond("ell >= 29", ell >= 29, f"ell = {ell}"),
        _cond("ell = 5 mod 8", ell % 8 == 5, f"ell mod 8 = {ell % 8}"),
        _cond("(d/ell) = -1", ks == -1, f"(d/ell) = {ks}"),
    ]
    o2 = _ord2(field)
    printed = [4] if d % 8 == 5 else ([8] if d % 4 in (2, 3) else [])
    readings = {"statement": printed, "theorem_rule": [4 * o2], "hypothesis": [4]}
    ev += _alpha_condition(alpha, printed)
    if bound is not None and is_prime(ell):
        S = tuple(primes_above(field, 2)) + tuple(primes_above(field, ell))
        P = primes_above(field, 2)[0]
        c, _ = _solver_evidence(
            field, S, bound, ceiling,
            lambda s: classify(s, P).m <= 4 * o2,
            f"every solution has m <= {4 * o2} at {P.label()}",
        )
        ev.append(c)
    return _verdict(
        "corollary-quadratic", field, {"d": d, "ell": ell, "alpha": alpha},
        ev, bound, printed, readings, _field_caveats(field),
    )


def corollary_q24(
    q: int, alpha: Optional[int] = None, bound: Optional[int] = None,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> CriterionVerdict:
    """Q(sqrt q) for a prime q = 1 mod 24 beyond 73; 2 splits."""
    ev = [
        _cond("q prime", is_prime(q), f"q = {q}"),
        _cond("q > 73", q > 73, f"q = {q}"),
        _cond("q = 1 mod 24", q % 24 == 1, f"q mod 24 = {q % 24}"),
    ]
    ev += _alpha_condition(alpha, [4])
    readings = {"statement": [4], "theorem_rule": [4], "hypothesis": [4]}
    field = None
    caveats = []
    if is_prime(q) and q % 24 == 1:
        field = make_field(q)
    if bound is not None and field is not None:
        P1, P2 = primes_above(field, 2)

        def small_at_one(s):
            m1 = max(abs(valuation(s.lambda_, P1)), abs(valuation(s.mu, P1)))
            m2 = max(abs(valuation(s.lambda_, P2)), abs(valuation(s.mu, P2)))
            return min(m1, m2) <= 1

        c, _ = _solver_evidence(
            field, (P1, P2), bound, ceiling, small_at_one,
            "every solution has m <= 1 at one of the two primes above 2",
        )
        ev.append(c)
        caveats.append("m is read with absolute valuations at both primes above 2")
    return _verdict(
        "q24", field, {"q": q, "alpha": alpha}, ev, bound if field is not None else None,
        [4], readings, _field_caveats(field) + caveats,
    )


# ---------------------------------------------------------------------------
# general-degree corollaries (descriptor level)


def corollary_ramified(
    descriptor: FieldDescriptor, p: int, alpha: Optional[int] = None,
    solutions: Optional[Sequence[SUnitSolution]] = None, bound: Optional[int] = None,
) -> CriterionVerdict:
    deg = descriptor.degree
    ev = [
        _cond("p prime >= 5", is_prime(p) and p >= 5, f"p = {p}", structural=True),
        _cond("gcd(degree, p - 1) = 1", gcd(deg, p - 1) == 1, f"gcd({deg}, {p - 1}) = {gcd(deg, p - 1)}",
              structural=True),
        _cond("2 totally ramified", is_totally_ramified(descriptor, 2),
              _behaviour(descriptor, 2)),
        _cond("p totally ramified", is_totally_ramified(descriptor, p),
              _behaviour(descriptor, p)),
    ]
    o2 = _ord2(descriptor)
    ev += _alpha_condition(alpha, [4 * deg])
    readings = {"statement": [4 * deg], "theorem_rule": [4 * o2], "hypothesis": [4]}
    if solutions is not None:
        P = solutions[0].S[0] if solutions and solutions[0].S else None
        bad = [s for s in solutions if P is not None and classify(s, P).m >= 2 * o2]
        ev.append(_cond(
            f"every solution has m < 2 ord(2) = {2 * o2}", not bad,
            f"{len(solutions)} solutions", None if not bad else _sol_label(bad[0]),
        ))
    return _verdict(
        "ramified", descriptor, {"degree": deg, "p": p, "alpha": alpha}, ev,
        bound if solutions is not None else None, [4 * deg], readings, _field_caveats(descriptor),
    )


def corollary_splits3(
    descriptor: FieldDescriptor, alpha: Optional[int] = None, bound: Optional[int] = None,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> CriterionVerdict:
    deg = descriptor.degree
    ev = [
        _cond("odd degree", deg % 2 == 1, f"degree = {deg}", structural=True),
        _cond("2 totally ramified", is_totally_ramified(descriptor, 2),
              _behaviour(descriptor, 2)),
        _cond("3 totally split", is_totally_split(descriptor, 3),
              _behaviour(descriptor, 3)),
    ]
    o2 = _ord2(descriptor)
    ev += _alpha_condition(alpha, [4 * deg])
    readings = {"statement": [4 * deg], "theorem_rule": [4 * o2], "hypothesis": [4]}
    used_bound = None
    if bound is not None and descriptor.is_rational:
        used_bound = bound
        S = tuple(primes_above(descriptor, 2))
        sols = solve_sunit(sunit_group(descriptor, S), bound, ceiling=ceiling)
        large = []
        for s in sols:
            rep = congruence_filters(s, descriptor)
            if rep.m is not None and rep.m >= 2 * o2:
                large.append((s, rep))
        ev.append(_cond(
            f"no solution with m >= 2 ord(2) = {2 * o2}", not large,
            f"{len(sols)} solutions at bound {bound}",
            None if not large else f"{_sol_label(large[0][0])}, partner norm {large[0][1].partner_norm}",
        ))
        for s in sols:
            rep = congruence_filters(s, descriptor)
            if rep.mod3 is Check.FAIL:
                ev.append(_cond("integral solutions are -1 mod 3", False, rep.mod3_detail, _sol_label(s)))
                break
    return _verdict(
        "splits3", descriptor, {"degree": deg, "alpha": alpha}, ev, used_bound,
        [4 * deg], readings, _field_caveats(descriptor),
    )


# ---------------------------------------------------------------------------
# narrow class number criterion


def _listed_case(field: FieldDescriptor) -> Optional[str]:
    """The congruence case of Q(sqrt(+-q)) that claims an odd narrow class number."""
    if not field.is_quadratic:
        return None
    q = abs(field.d)
    if not is_prime(q):
        return None
    if field.d > 0 and (q % 8 == 5 or q % 4 == 3):
        return f"Q(sqrt q) with q = {q} (q = 5 mod 8 or q = 3 mod 4)"
    if field.d < 0 and (q % 8 == 3 or q % 4 == 1):
        return f"Q(sqrt -q) with q = {q} (q = 3 mod 8 or q = 1 mod 4)"
    return None


def theoremB_check(
    field: FieldDescriptor, alpha: Optional[int] = None, h_plus: Optional[int] = None,
    discriminant_bound: int = 10**6,
) -> CriterionVerdict:
    """Unique prime above 2 and odd narrow class number."""
    caveats = _field_caveats(field)
    if field.has_arithmetic:
        slots = primes_above(field, 2)
        unique = len(slots) == 1
        detail = f"2 is {slots[0].splitting.value}" if field.is_quadratic else "Q"
        hp = 1 if field.is_rational else class_data(field, discriminant_bound).h_plus
    else:
        st = splitting_type(field, 2)
        unique = st in (SplittingType.INERT, SplittingType.RAMIFIED)
        detail = f"2 is {st.value}"
        if h_plus is None:
            raise errors.MissingTableEntry("abstract descriptors need h_plus")
        hp = h_plus
    o2 = _ord2(field)
    ev = [
        _cond("unique prime above 2", unique, detail),
        _cond("h+ odd", hp % 2 == 1, f"h+ = {hp}"),
    ]
    ev += _alpha_condition(alpha, [4 * o2])
    case = _listed_case(field)
    if case and hp % 2 == 0:
        caveats.append(f"{case} is listed as having odd h+, but the computed h+ = {hp} is even")
    readings = {"statement": [4 * o2], "hypothesis": [4]}
    return _verdict(
        "theoremB", field, {"alpha": alpha, "h_plus": hp, "ord2": o2}, ev, None,
        [4 * o2], readings, caveats,
    )


def z2_layer_check(r: int, alpha: Optional[int] = None) -> CriterionVerdict:
    """r-th layer of the cyclotomic Z_2-extension of Q: degree 2^r, 2 totally ramified."""
    ev = [_cond("r >= 1", r >= 1, f"r = {r}", structural=True)]
    if r < 1:
        return _verdict("z2", None, {"r": r, "alpha": alpha}, ev, caveats=[NO_NUMERIC_BOUND])
    deg = 2**r
    desc = abstract_field(deg, {2: SplittingType.RAMIFIED}, signature=deg, z2_layer=r)
    o2 = deg
    params = {"r": r, "alpha": alpha, "degree": deg, "ord2": o2}
    if r == 1:
        params["concrete_field"] = make_field(2).label()
        hp = class_data(make_field(2)).h_plus
        ev.append(_cond("h+ odd (computed for Q(sqrt 2))", hp % 2 == 1, f"h+ = {hp}"))
    else:
        params["h_plus_parity"] = "odd (cited, not computed)"
    corollary, rule = [2**r], [4 * o2]
    ev += _alpha_condition(alpha, corollary + rule)
    readings = {"statement": corollary, "theorem_rule": rule, "hypothesis": [4]}
    return _verdict("z2", desc, params, ev, None, corollary + rule, readings, [NO_NUMERIC_BOUND])
