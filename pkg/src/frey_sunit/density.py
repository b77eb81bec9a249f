"""Squarefree sieve, residue classes mod 8, and bounded membership sampling."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Optional

import numpy as np

from . import _kernels, errors
from .ntheory import is_squarefree, primes_up_to
from .qfield import make_field
from .sunit import (
    DEFAULT_ENUMERATION_CEILING,
    Relevance,
    orbit_reduce,
    slots_above,
    solve_sunit,
    sunit_group,
)

BLOCK = 1 << 20
MAX_BITMAP = 1 << 28  # bytes held by squarefree_sieve
MAX_CUTOFF = 10**11  # streaming counts


def _prime_squares(X: int) -> np.ndarray:
    return np.array([p * p for p in primes_up_to(isqrt(X))], dtype=np.int64)


def squarefree_sieve(X: int, budget: int = MAX_BITMAP) -> np.ndarray:
    """Flags for d = 2..X (index d - 2); 1 marks squarefree d."""
    if X < 2:
        raise errors.InvalidInput("X must be at least 2")
    if X - 1 > budget:
        raise errors.CutoffTooLarge(f"bitmap of {X - 1} bytes exceeds budget {budget}")
    sq = _prime_squares(X)
    parts = [
        _kernels.squarefree_block(lo, min(X + 1, lo + BLOCK), sq)
        for lo in range(2, X + 1, BLOCK)
    ]
    return np.concatenate(parts)


def squarefree_values(X: int) -> list[int]:
    return [int(i) + 2 for i in np.flatnonzero(squarefree_sieve(X))]


@dataclass(frozen=True)
class MembershipRecord:
    d: int
    bound: int
    has_relevant_solution_at_bound: bool
    solutions: int
    relevant: int
    relevant_orbits: int
    witnesses: tuple[tuple[str, str], ...]  # one representative per orbit

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "bound": self.bound,
            "has_relevant_solution_at_bound": self.has_relevant_solution_at_bound,
            "solutions": self.solutions,
            "relevant": self.relevant,
            "relevant_orbits": self.relevant_orbits,
            "witnesses": [list(w) for w in self.witnesses],
        }


@dataclass(frozen=True)
class DensityReport:
    cutoff: int
    total: int
    counts: tuple[int, ...]  # per residue class mod 8
    fractions: tuple[Fraction, ...]
    projected: Fraction  # 1 - fraction(d = 5 mod 8)
    projected_prime: Fraction  # 1 - fraction(-d = 5 mod 8)
    sampled_membership: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        from .report import encode

        return {
            "cutoff": self.cutoff,
            "total": self.total,
            "counts": {str(r): c for r, c in enumerate(self.counts)},
            "fractions": {str(r): encode(f) for r, f in enumerate(self.fractions)},
            "projected": encode(self.projected),
            "projected_prime": encode(self.projected_prime),
            "sampled_membership": {
                str(d): rec.to_dict() for d, rec in sorted(self.sampled_membership.items())
            },
        }

    def rows(self) -> list[dict]:
        """Flat per-class table for CSV output."""
        return [
            {"cutoff": self.cutoff, "residue": r, "count": c, "fraction": str(f),
             "fraction_float": f"{float(f):.6f}"}
            for r, (c, f) in enumerate(zip(self.counts, self.fractions))
        ]


def residue_fractions(X: int, block: int = BLOCK) -> DensityReport:
    if X < 8:
        raise errors.InvalidInput("X must be at least 8")
    if X > MAX_CUTOFF:
        raise errors.CutoffTooLarge(f"cutoff {X} exceeds {MAX_CUTOFF}")
    counts = [int(c) for c in _kernels.count_squarefree_residues(X, _prime_squares(X), block)]
    total = sum(counts)
    fr = tuple(Fraction(c, total) for c in counts)
    return DensityReport(X, total, tuple(counts), fr, 1 - fr[5], 1 - fr[3])


def _membership_one(args) -> MembershipRecord:
    d, bound, ceiling, max_witnesses = args
    if not is_squarefree(d):
        raise errors.NotSquarefree(f"d = {d} is not squarefree")
    field = make_field(d)
    group = sunit_group(field, slots_above(field, [2]))
    sols = solve_sunit(group, bound, ceiling=ceiling)
    rel = [s for s in sols if s.relevance is Relevance.RELEVANT]
    reps = orbit_reduce(rel)
    wit = tuple((str(s.lambda_), str(s.mu)) for s in reps[:max_witnesses])
    return MembershipRecord(d, bound, bool(rel), len(sols), len(rel), len(reps), wit)


def membership_sample(
    d_list: Iterable[int],
    bound: int,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
    workers: int = 1,
    max_witnesses: int = 20,
) -> dict[int, MembershipRecord]:
    """Relevant solutions over Q(sqrt d) with S the primes above 2, per d, at the bound."""
    ds = sorted(set(int(d) for d in d_list))
    jobs = [(d, bound, ceiling, max_witnesses) for d in ds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            recs = list(ex.map(_membership_one, jobs))
    else:
        recs = [_membership_one(j) for j in jobs]
    return {r.d: r for r in recs}


@dataclass(frozen=True)
class PrimeReadings:
    """Membership of d under the two readings of the primed set."""

    d: int
    in_C: Optional[bool]  # no relevant solution over Q(sqrt d), at bound
    in_C_prime: Optional[bool]  # same over Q(sqrt -d)
    congruence: bool  # -d != 5 mod 8
    reading_C: Optional[bool]
    reading_C_prime: Optional[bool]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def prime_set_readings(d_list: Iterable[int], bound: int, **kw) -> list[PrimeReadings]:
    ds = sorted(set(int(d) for d in d_list if d >= 2 and is_squarefree(d)))
    pos = membership_sample(ds, bound, **kw)
    neg = membership_sample([-d for d in ds], bound, **kw)
    out = []
    for d in ds:
        c = not pos[d].has_relevant_solution_at_bound
        cp = not neg[-d].has_relevant_solution_at_bound
        cong = (-d) % 8 != 5
        out.append(PrimeReadings(d, c, cp, cong, c and cong, cp and cong))
    return out


def with_membership(report: DensityReport, sample: dict[int, MembershipRecord]) -> DensityReport:
    return DensityReport(
        report.cutoff, report.total, report.counts, report.fractions,
        report.projected, report.projected_prime, dict(sample),
    )
