import pytest
from hypothesis import given
from hypothesis import strategies as st

from steenrod_charp.dual_algebra import (
    TRUNCATION_ENV,
    BmuElement,
    CoactionElement,
    DualMonomial,
    bmu_coaction,
    bockstein_from_coaction,
    default_truncation,
    dual_mul,
    pair_with_bockstein,
    pair_with_Pn,
    steenrod_from_coaction,
)
from steenrod_charp.fp_core import binom_mod_p_int
from steenrod_charp.steenrod_ops import ParseError


def test_dual_mul_examples():
    t0 = DualMonomial.tau(0, 2)
    assert dual_mul(t0, t0) is None
    sign, m = dual_mul(DualMonomial.xi_power(1, 2, 3), DualMonomial.xi_power(1, 3, 3))
    assert (sign, m) == (1, DualMonomial.xi_power(1, 5, 3))
    s01, m01 = dual_mul(DualMonomial.tau(0, 3), DualMonomial.tau(1, 3))
    s10, m10 = dual_mul(DualMonomial.tau(1, 3), DualMonomial.tau(0, 3))
    assert m01 == m10 and s01 == -s10
    # no signs at p = 2
    assert dual_mul(DualMonomial.tau(1, 2), DualMonomial.tau(0, 2))[0] == 1


def dual_monomials(p):
    return st.builds(
        lambda eps, xi: DualMonomial(frozenset(eps), tuple(xi.items()), p),
        st.sets(st.integers(0, 4), max_size=3),
        st.dictionaries(st.integers(1, 3), st.integers(0, 4), max_size=2),
    )


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(dual_monomials(p), dual_monomials(p))))
def test_dual_mul_properties(pair):
    m1, m2 = pair
    a, b = dual_mul(m1, m2), dual_mul(m2, m1)
    if a is None:
        assert b is None
        assert m1.eps & m2.eps
        return
    assert a[1] == b[1]
    assert a[1].bidegree() == tuple(x + y for x, y in zip(m1.bidegree(), m2.bidegree()))
    koszul = (-1) ** (m1.bidegree()[0] * m2.bidegree()[0]) if m1.prime.p > 2 else 1
    assert a[0] == koszul * b[0]


def test_bidegrees():
    assert DualMonomial.tau(1, 3).bidegree() == (5, 2)
    assert DualMonomial.xi_power(1, 1, 3).bidegree() == (4, 2)


def test_pairings():
    assert pair_with_Pn(DualMonomial.xi_power(1, 3, 3), 3) == 1
    assert pair_with_Pn(DualMonomial.parse("t0 x1^2", 3), 2) == 0
    assert pair_with_Pn(DualMonomial.one(3), 0) == 1
    assert pair_with_Pn(DualMonomial.xi_power(2, 1, 3), 1) == 0
    assert pair_with_bockstein(DualMonomial.tau(0, 5)) == 1
    assert pair_with_bockstein(DualMonomial.tau(1, 5)) == 0


def test_monomial_text_round_trip():
    m = DualMonomial.parse("t0 x1^3 t2", 3)
    assert m.to_text() == "t0 x1^3 t2"
    assert DualMonomial.parse(m.to_text(), 3) == m
    assert DualMonomial.from_record(m.to_record()) == m
    assert DualMonomial.one(2).to_text() == "1"
    with pytest.raises(ParseError):
        DualMonomial.parse("t0 t0", 2)


def test_coaction_examples():
    assert bmu_coaction(BmuElement.u(2, 8)).to_text() == "u + t0@v + t1@v^2 + t2@v^4 + t3@v^8"
    assert bmu_coaction(BmuElement.u(2, 10)).to_text() == "u + t0@v + t1@v^2 + t2@v^4 + t3@v^8"
    assert bmu_coaction(BmuElement.v(3, 9)).to_text() == "v + x1@v^3 + x2@v^9"
    assert bmu_coaction(BmuElement.parse("u*u", 2, 8)).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_coaction_of_u_squared(p):
    n = 64
    cu = bmu_coaction(BmuElement.u(p, n))
    square = cu * cu
    assert square.is_zero()
    # the t_i^2 slot sits at v^(2 p^i)
    for i in range(7):
        if 2 * p**i <= n:
            assert square.coefficient(0, 2 * p**i) == {}


def bmu_elements(p, n):
    return st.dictionaries(
        st.tuples(st.integers(0, 1), st.integers(0, n)), st.integers(1, p - 1), max_size=4
    ).map(lambda d: BmuElement(p, n, d))


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(bmu_elements(p, 30), bmu_elements(p, 30))))
def test_coaction_multiplicative(pair):
    x, y = pair
    assert bmu_coaction(x * y) == bmu_coaction(x) * bmu_coaction(y)


@pytest.mark.parametrize("p", [3, 5])
def test_coaction_actions_match_known_formulas(p):
    n = 60
    for k in range(n + 1):
        v = BmuElement.v(p, n, k)
        for j in range(4):
            want = binom_mod_p_int(k, j, p)
            target = k + (p - 1) * j
            expect = BmuElement(p, n, {(0, target): want} if target <= n else {})
            assert steenrod_from_coaction(v, j) == expect
        uv = BmuElement(p, n, {(1, k): 1})
        assert bockstein_from_coaction(uv) == BmuElement(p, n, {(0, k + 1): 1} if k < n else {})
        assert bockstein_from_coaction(v).is_zero()


def test_bmu_text_and_record_round_trip():
    x = BmuElement.parse("2*u*v^2 + v^5 + 1", 3, 10)
    assert BmuElement.parse(x.to_text(), 3, 10) == x
    assert BmuElement.from_record(x.to_record()) == x
    c = bmu_coaction(x)
    assert CoactionElement.parse(c.to_text(), 3, 10) == c
    assert CoactionElement.from_record(c.to_record()) == c


def test_bmu_truncation_and_u_squared():
    assert BmuElement.parse("v^11", 3, 10).is_zero()
    assert (BmuElement.u(3, 10) * BmuElement.u(3, 10)).is_zero()
    with pytest.raises(ParseError):
        BmuElement.parse("u*w", 3, 10)


def test_default_truncation(monkeypatch):
    monkeypatch.delenv(TRUNCATION_ENV, raising=False)
    assert default_truncation() == 64
    monkeypatch.setenv(TRUNCATION_ENV, "17")
    assert default_truncation() == 17
