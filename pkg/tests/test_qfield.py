from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from frey_sunit import errors
from frey_sunit.ntheory import is_squarefree, kronecker, primes_up_to
from frey_sunit.qfield import (
    QQ,
    AlgebraicNumber,
    SplittingType,
    abstract_field,
    class_data,
    field_from_d,
    fundamental_unit,
    kronecker_symbol,
    make_field,
    primes_above,
    roots_of_unity,
    sqrt_d,
    splitting_type,
    valuation,
)

from oracles import (
    CLASS_TABLE,
    class_number_definite,
    fundamental_discriminant,
    kronecker_by_factoring,
    smallest_pell_unit,
)

SMALL_D = [d for d in range(-200, 201) if d not in (0, 1) and is_squarefree(d)]


def test_make_field_conventions():
    K = make_field(5)
    assert (K.discriminant, K.signature) == (5, 2)
    K = make_field(-5)
    assert (K.discriminant, K.signature) == (-20, 0)
    assert field_from_d(0) is QQ


@pytest.mark.parametrize("d, exc", [(12, errors.NotSquarefree), (1, errors.InvalidInput), (0, errors.InvalidInput)])
def test_make_field_rejects(d, exc):
    with pytest.raises(exc):
        make_field(d)


@pytest.mark.parametrize("a, m, want", [(21, 29, -1), (13, 29, 1), (58, 29, 0), (0, 7, 0)])
def test_kronecker_vectors(a, m, want):
    assert kronecker_symbol(a, m) == want


@given(st.integers(-500, 500), st.integers(1, 300))
def test_kronecker_matches_definition(a, m):
    assert kronecker(a, m) == kronecker_by_factoring(a, m)


@pytest.mark.parametrize("d, p, kind", [(5, 2, "inert"), (17, 2, "split"), (-5, 2, "ramified"),
                                         (-1, 2, "ramified"), (-7, 2, "split"), (3, 3, "ramified")])
def test_splitting_vectors(d, p, kind):
    assert splitting_type(make_field(d), p) is SplittingType(kind)


@pytest.mark.parametrize("d", SMALL_D)
def test_efg_sum_is_two(d):
    K = make_field(d)
    for p in (2, 3, 5, 7):
        assert sum(s.e * s.f for s in primes_above(K, p)) == 2


def test_valuation_vectors():
    K = make_field(-5)
    (P,) = primes_above(K, 2)
    assert valuation(AlgebraicNumber(K, 6), P) == 2
    K2 = make_field(2)
    (P2,) = primes_above(K2, 2)
    assert valuation(AlgebraicNumber(K2, 2, 1), P2) == 1
    for s in primes_above(K2, 7):
        assert valuation(AlgebraicNumber(K2, 1), s) == 0


def test_split_slots_are_distinguished():
    K = make_field(-7)
    P1, P2 = primes_above(K, 2)
    w = AlgebraicNumber.omega(K)  # (1 + sqrt(-7))/2 has norm 2
    assert sorted([valuation(w, P1), valuation(w, P2)]) == [0, 1]
    assert valuation(w, P1) + valuation(w.conjugate(), P1) == 1


@pytest.mark.parametrize("d, coords, norm", [(5, (0, 1), -1), (13, (1, 1), -1), (3, (2, 1), 1)])
def test_fundamental_unit_vectors(d, coords, norm):
    K = make_field(d)
    eps = fundamental_unit(K)
    assert eps.coords == tuple(Fraction(c) for c in coords)
    assert eps.norm() == norm


@pytest.mark.parametrize("d", [d for d in SMALL_D if 1 < d <= 120])
def test_fundamental_unit_against_search(d):
    K = make_field(d)
    u, v, half = smallest_pell_unit(d)
    want = AlgebraicNumber(K, Fraction(u, 2), Fraction(v, 2)) if half else AlgebraicNumber(K, u, v)
    eps = fundamental_unit(K)
    assert eps == want
    assert abs(eps.norm()) == 1 and float(eps) > 1


@pytest.mark.parametrize("d", sorted(CLASS_TABLE))
def test_class_table(d):
    cd = class_data(make_field(d))
    assert (cd.h, cd.h_plus) == CLASS_TABLE[d]


@pytest.mark.parametrize("d", [d for d in SMALL_D if d < 0])
def test_class_number_against_form_count(d):
    assert class_data(make_field(d)).h == class_number_definite(fundamental_discriminant(d))


@pytest.mark.parametrize("d", [d for d in SMALL_D if abs(d) <= 100])
def test_narrow_two_rank_genus_theory(d):
    """For prime discriminants t ramified primes give 2-rank t - 1; in general
    h+ is divisible by 2^(t-1)."""
    D = fundamental_discriminant(d)
    t = sum(1 for p in primes_up_to(abs(D)) if D % p == 0)
    h_plus = class_data(make_field(d)).h_plus
    assert h_plus % 2 ** (t - 1) == 0
    if t == 1:
        assert h_plus % 2 == 1


def test_class_data_examples():
    assert class_data(make_field(-5)).h == 2
    cd = class_data(make_field(5))
    assert (cd.h, cd.unit_norm, cd.h_plus) == (1, -1, 1)
    cd = class_data(make_field(3))
    assert (cd.h, cd.unit_norm, cd.h_plus) == (1, 1, 2)


def test_roots_of_unity():
    assert roots_of_unity(make_field(-1))[1] == 4
    assert roots_of_unity(make_field(-3))[1] == 6
    assert roots_of_unity(make_field(5))[1] == 2
    z, w = roots_of_unity(make_field(-3))
    assert z ** w == 1 and z ** (w // 2) == -1


def test_abstract_descriptor():
    K = abstract_field(3, {2: "ramified", 5: "ramified"})
    assert K.degree == 3 and K.table()[2] is SplittingType.RAMIFIED
    with pytest.raises(errors.InvalidInput):
        AlgebraicNumber(K, 1)
    with pytest.raises(errors.InvalidInput):
        abstract_field(0, {})


def test_elements_are_immutable_and_hashable():
    K = make_field(5)
    x = AlgebraicNumber(K, 1, 2)
    with pytest.raises(AttributeError):
        x.a = 3
    assert {x: 1}[AlgebraicNumber(K, 1, 2)] == 1
    assert sqrt_d(K) ** 2 == 5


def test_zero_has_no_valuation():
    K = make_field(5)
    with pytest.raises(errors.ZeroElement):
        valuation(AlgebraicNumber(K, 0), primes_above(K, 2)[0])


quad_fields = st.sampled_from([5, -5, 2, -1, -3, 17, -7, 13, 6])
rats = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@given(quad_fields, rats, rats, rats, rats)
def test_norm_and_valuation_are_multiplicative(d, a, b, c, e):
    K = make_field(d)
    x, y = AlgebraicNumber(K, a, b), AlgebraicNumber(K, c, e)
    if x.is_zero() or y.is_zero():
        return
    assert (x * y).norm() == x.norm() * y.norm()
    for p in (2, 3, 5):
        for s in primes_above(K, p):
            assert valuation(x * y, s) == valuation(x, s) + valuation(y, s)


@given(quad_fields, rats, rats)
def test_field_axioms(d, a, b):
    K = make_field(d)
    x = AlgebraicNumber(K, a, b)
    assert x + 0 == x and x * 1 == x and x - x == 0
    if not x.is_zero():
        assert x * x.inverse() == 1
        assert x / x == 1
    assert x.norm() == (x * x.conjugate()).a
