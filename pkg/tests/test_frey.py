from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from frey_sunit import errors
from frey_sunit.frey import (
    bad_slots,
    conductor_support,
    inertia_divisibility,
    invariants,
    model_coefficients,
    nonprimitive_family,
    paper_ordj_comparison,
    remark_valuations,
    slot_profiles,
    valuation_profile,
    validate_triple,
)
from frey_sunit.ntheory import is_prime
from frey_sunit.qfield import QQ, AlgebraicNumber, make_field, primes_above, slot

from oracles import frey_model_rational, ord_p, sample_triples, weierstrass

TRIPLES = sample_triples()


def q(x):
    return AlgebraicNumber(QQ, x)


def labels(slots):
    return {s.label() for s in slots}


def test_validate_examples():
    t = validate_triple(5, 3, 2, 17, 5)
    assert t.primitive and not t.trivial
    t = validate_triple(1, 0, 1, 1, 5)
    assert t.trivial
    t = validate_triple(2, 1, 1, 15, 5)
    assert t.primitive and (t.A, t.B, t.C) == (q(9), q(1), q(5))


@pytest.mark.parametrize("args, exc", [
    ((2, 2, 1, 0, 5), errors.InvalidInput),
    ((5, 3, 2, 17, 4), errors.InvalidInput),
    ((1, 0, 1, 1, 3), errors.ExponentTooSmall),
    ((5, 3, 2, 16, 5), errors.EquationFails),
    ((Fraction(1, 2), 0, 1, 1, 5), errors.NotIntegral),
    ((2, 0, 2, 8, 5), errors.EquationFails),
])
def test_validate_rejects(args, exc):
    with pytest.raises(exc):
        validate_triple(*args)


def test_n_valuation_at_least_p_rejected():
    # 2^4 - 0 = 2^5 * (1/2)... use a = 2^k: 256^4 - 0 = 2^32 = 2^7 * (2^5)^5
    with pytest.raises(errors.NOrdTooLarge):
        validate_triple(256, 0, 1, 2**32, 5)


@pytest.mark.parametrize("args, delta, c4, c6, j", [
    ((1, 0, 1, 1, 5), 64, 48, 0, Fraction(1728)),
    ((2, 1, 1, 15, 5), 129600, 1456, -53504, Fraction(48228544, 2025)),
    ((5, 3, 2, 17, 5), 4848615424, 69888, -18247680, Fraction(20346417, 289)),
])
def test_invariant_vectors(args, delta, c4, c6, j):
    inv = invariants(validate_triple(*args))
    assert (inv.delta, inv.c4, inv.c6, inv.j) == (q(delta), q(c4), q(c6), q(j))
    assert all(inv.checks.values())


def test_cubic_identity_value():
    inv = invariants(validate_triple(2, 1, 1, 15, 5))
    assert inv.c4**3 - inv.c6**2 == 1728 * inv.delta == 223948800


def test_displayed_formula_flags():
    inv = invariants(validate_triple(1, 0, 1, 1, 5))
    assert inv.c6 == 0 and inv.displayed_c6 != inv.c6
    assert inv.displayed_c4_alt == -inv.c4
    assert len(inv.notices) == 2


@pytest.mark.parametrize("a, b, c, n, p", TRIPLES)
def test_weierstrass_identities(a, b, c, n, p):
    t = validate_triple(a, b, c, n, p)
    inv = invariants(t)
    a2, a4 = frey_model_rational(a, b)
    assert model_coefficients(t) == (q(4 * a * b), q(-(a * a - b * b) ** 2))
    assert (a2, a4) == (4 * a * b, -(a * a - b * b) ** 2)
    b2, b4, b6, b8, c4, c6, delta, j = weierstrass(0, a2, 0, a4, 0)
    assert (inv.c4, inv.c6, inv.delta, inv.j) == (q(c4), q(c6), q(delta), q(j))
    assert inv.c4**3 - inv.c6**2 == 1728 * inv.delta
    assert inv.j * inv.delta == inv.c4**3
    assert inv.delta == 64 * (t.A * t.B * t.C) ** 2
    assert inv.c4 == 16 * (a * a + 3 * b * b) * (3 * a * a + b * b)


@pytest.mark.parametrize("a, b, c, n, p", TRIPLES[:150])
def test_odd_slot_dichotomy(a, b, c, n, p):
    t = validate_triple(a, b, c, n, p)
    inv = invariants(t)
    for pr in slot_profiles(t, inv):
        if pr.even:
            continue
        assert (pr.ord_c4 == 0) != (pr.ord_delta == 0)
        assert pr.reduction == ("multiplicative" if pr.ord_delta else "good")


def test_remark_valuations():
    nt = remark_valuations(validate_triple(5, 3, 2, 17, 5), slot(QQ, 2))
    assert not nt.swapped and (nt.ord_plus, nt.ord_minus) == (1, 4) and nt.expected_minus == 4
    assert not nt.min_exceeds_ord2
    nt = remark_valuations(validate_triple(7, 1, 2, 75, 5), slot(QQ, 2))
    assert not nt.swapped and (nt.ord_plus, nt.ord_minus) == (1, 4)
    with pytest.raises(errors.PreconditionFailed):
        remark_valuations(validate_triple(1, 0, 1, 1, 5), slot(QQ, 2))


def test_no_swap_over_Q():
    # a, b odd gives a^2 + b^2 = 2 mod 4, so ord(a^2+b^2) = ord(2) already
    for a, b, c, n, p in [(5, 3, 2, 17, 5), (3, 5, -2, 17, 5), (7, 1, 2, 75, 5)]:
        assert not remark_valuations(validate_triple(a, b, c, n, p), slot(QQ, 2)).swapped


def test_swap_over_gaussian_field():
    K = make_field(-1)
    t = validate_triple(5, AlgebraicNumber(K, 0, 3), 2, 17, 5, field=K)
    (P,) = primes_above(K, 2)
    nt = remark_valuations(t, P)
    assert nt.swapped and nt.ord2 == 2 and nt.ord_plus == 2
    assert nt.triple.b_squared_swapped


def test_profiles():
    t = validate_triple(5, 3, 2, 17, 5)
    inv = invariants(t)
    pr = valuation_profile(t, inv, slot(QQ, 17))
    assert (pr.ord_delta, pr.ord_c4, pr.reduction, pr.p_divides_ord_delta) == (2, 0, "multiplicative", False)
    t2 = validate_triple(2, 1, 1, 15, 5)
    pr = valuation_profile(t2, invariants(t2), slot(QQ, 3))
    assert (pr.ord_delta, pr.reduction, pr.p_divides_ord_delta) == (4, "multiplicative", False)
    pr = valuation_profile(t, inv, slot(QQ, 11))
    assert (pr.ord_delta, pr.reduction) == (0, "good")


def test_conductor_support():
    t = validate_triple(5, 3, 2, 17, 5)
    rep = conductor_support(t, slot_profiles(t))
    assert labels(rep.n_p_support) == {"2", "17"}
    t = validate_triple(2, 1, 1, 15, 5)
    rep = conductor_support(t, slot_profiles(t))
    assert {"3", "5"} <= labels(rep.n_p_support)
    assert labels(s for s, *_ in rep.odd_multiplicative) == {"3", "5"}


def test_conductor_drops_q_dividing_c_only():
    # a - b = 3^5 and 3 divides neither a + b nor a^2 + b^2, so c = 3 and 3 does not divide n
    a, b = 244, 1
    n = (a**4 - b**4) // 3**5
    t = validate_triple(a, b, 3, n, 5)
    assert n % 3 != 0 and t.primitive
    rep = conductor_support(t, slot_profiles(t))
    assert "3" not in labels(rep.n_p_support)
    assert "3" in labels(rep.n_e_support)
    assert rep.consistent


def test_conductor_requires_profiles():
    t = validate_triple(5, 3, 2, 17, 5)
    with pytest.raises(errors.IncompleteProfiles):
        conductor_support(t, slot_profiles(t)[:1])


@pytest.mark.parametrize("ordj, p, want", [(-12, 5, True), (-10, 5, False), (0, 5, False), (3, 7, False)])
def test_inertia(ordj, p, want):
    assert inertia_divisibility(ordj, p) is want


def test_paper_ordj_comparison():
    c = paper_ordj_comparison(validate_triple(5, 3, 2, 17, 5), slot(QQ, 2))
    assert (c.paper_value, c.direct_value, c.discrepancy) == (-12, 0, True)
    t = validate_triple(7, 1, 2, 75, 5)
    c = paper_ordj_comparison(t, slot(QQ, 2))
    assert c.paper_value == -12
    assert c.direct_value == ord_p(invariants(t).j.a, 2)
    with pytest.raises(errors.PreconditionFailed):
        paper_ordj_comparison(validate_triple(1, 0, 1, 1, 5), slot(QQ, 2))


def test_nonprimitive_vectors():
    assert nonprimitive_family(1, 0, 2, 5) == (q(16), q(0), q(8))
    x, y, z = nonprimitive_family(1, 0, 2, 7)
    assert (x, y, z) == (q(2 * 8**5), q(0), q(8**3)) and x**4 == 2 * z**7 == 2**64
    assert nonprimitive_family(1, 2, 3, 5) == (q(-1215), q(-2430), q(-405))
    with pytest.raises(errors.DegenerateSeed):
        nonprimitive_family(1, 1, 2, 5)
    assert nonprimitive_family(1, -1, 2, 5, allow_degenerate=True) == (q(0), q(0), q(0))


def _family_params():
    out = []
    primes = [p for p in range(5, 60) if is_prime(p)]
    for i in range(50):
        a, b = (i % 7) + 1, (i * 3) % 5
        if a == b:
            b += 1
        n = (i % 6) + 1
        out.append((a, b, n, primes[i % len(primes)]))
    return out


@pytest.mark.parametrize("a, b, n, p", _family_params())
def test_nonprimitive_family_satisfies_equation(a, b, n, p):
    x, y, z = nonprimitive_family(a, b, n, p)
    assert x**4 - y**4 == n * z**p


def test_family_covers_both_residues():
    ps = {p % 4 for *_, p in _family_params()}
    assert ps == {1, 3}


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(1, 12), st.sampled_from([5, 7, 11, 13]))
def test_family_property(a, b, n, p):
    if a**4 == b**4:
        return
    x, y, z = nonprimitive_family(a, b, n, p)
    assert x**4 - y**4 == n * z**p


def test_quadratic_field_triple():
    K = make_field(5)
    eps = AlgebraicNumber(K, Fraction(1, 2), Fraction(1, 2))
    x, y, z = nonprimitive_family(eps, 1, 1, 5, field=K)
    t = validate_triple(x, y, z, 1, 5, field=K)
    inv = invariants(t)
    assert inv.c4**3 - inv.c6**2 == 1728 * inv.delta
    assert all(inv.checks.values())
    assert {s.field for s in bad_slots(t)} == {K}
