import pytest
from hypothesis import given, settings, strategies as st

from rjw.coeffring import (
    BadExponent,
    DescriptorMismatch,
    GradedElement,
    IntegralityFailure,
    NotHomogeneous,
    ZeroElement,
    hatted_ring,
    lambda_shift,
    monomial_degree,
    to_two_local,
    unhatted_ring,
    vhat,
    vhat_n_exponent,
    vn_power,
)
from rjw.numeric import rational


H2 = hatted_ring(2)
U2 = unhatted_ring(2)


def elem(desc, terms):
    return GradedElement(desc, terms)


def test_lambda_values():
    # lambda(n) = 2(2^n-1)^2 - 1, the degree of the filtration shift
    assert lambda_shift(1) == 1
    assert lambda_shift(2) == 17
    assert lambda_shift(3) == 97


def test_unhatted_degrees():
    assert U2.generator_degrees == (-2, -6)
    assert monomial_degree(U2, (0, 2)) == -12


def test_hatted_degrees():
    # |vhat_1| = (lam-1)(2^1-1) = 16 at height 2
    assert H2.generator_degrees == (16, -6)
    assert vhat(H2, 1).degree() == 16
    assert GradedElement.one(H2).degree() == 0


def test_multiply_laurent_cancellation():
    prod = vn_power(H2, 1) * vn_power(H2, -1)
    assert prod == GradedElement.one(H2)


def test_multiply_degree_additive():
    a = vhat(H2, 1)
    assert (a * a).degree() == 2 * (lambda_shift(2) - 1)
    v2 = GradedElement.generator(U2, 1)
    assert (v2 * v2).degree() == -12


def test_degree_errors():
    with pytest.raises(ZeroElement):
        GradedElement.zero(H2).degree()
    mixed = vhat(H2, 1) + GradedElement.one(H2)
    with pytest.raises(NotHomogeneous):
        mixed.degree()


def test_descriptor_mismatch():
    with pytest.raises(DescriptorMismatch):
        GradedElement.one(H2) * GradedElement.one(U2)


def test_exponent_constraints():
    with pytest.raises(BadExponent):
        elem(H2, {(-1, 0): 1})
    with pytest.raises(BadExponent):
        elem(U2, {(0, -1): 1})
    # inverting v_n is fine in hatted coordinates
    assert vn_power(H2, -5).degree() == 30


def test_two_locality_enforced():
    with pytest.raises(IntegralityFailure):
        elem(H2, {(0, 0): rational(1, 2)})
    rat = unhatted_ring(2, rational_scalars=True)
    assert elem(rat, {(0, 0): rational(1, 2)}).coefficient((0, 0)) == rational(1, 2)


def test_involution():
    vn = vn_power(H2, 1)
    assert vn.involution_c() == -vn
    assert vhat(H2, 1).involution_c() == vhat(H2, 1)
    mixed = vhat(H2, 1) * vn_power(H2, 2)
    assert mixed.involution_c() == mixed
    v1 = GradedElement.generator(U2, 0)
    assert v1.involution_c() == -v1


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 3), st.integers(0, 3))
def test_involution_is_ring_hom_and_involutive(b1, b2, a1, a2):
    x = GradedElement.monomial(H2, (a1, b1), 3) + GradedElement.monomial(H2, (a2, b2 - 2), -1)
    y = GradedElement.monomial(H2, (a2, b2), 5)
    assert (x * y).involution_c() == x.involution_c() * y.involution_c()
    assert x.involution_c().involution_c() == x


def test_hat_examples():
    # v_1 |-> v_1 * vn^{-(2^1-1)(2^n-1)} = vhat_1
    v1 = GradedElement.generator(U2, 0)
    assert v1.hat() == vhat(H2, 1)
    two = GradedElement.scalar(U2, 2)
    assert two.hat() == GradedElement.scalar(H2, 2)
    vn = GradedElement.generator(U2, 1)
    assert vn.hat() == vn_power(H2, vhat_n_exponent(2))
    assert vn.hat() == vhat(H2, 2)


def test_hat_degree_formula():
    lam = lambda_shift(2)
    for a, expected_k in ((GradedElement.generator(U2, 0), -1),
                          (GradedElement.generator(U2, 1), -3)):
        assert a.hat().degree() == expected_k * (1 - lam)


def test_hat_multiplicative():
    a = GradedElement.generator(U2, 0)
    b = GradedElement.generator(U2, 1, 2)
    assert (a * b).hat() == a.hat() * b.hat()


def test_reduce_mod_ik():
    H3 = hatted_ring(3)
    two = GradedElement.scalar(H3, 2)
    x = two + vhat(H3, 1) + vhat(H3, 1) ** 2 * vn_power(H3, 1)
    assert x.reduce_mod_ik(2).is_zero()
    y = vhat(H3, 2).scale(3)
    assert y.reduce_mod_ik(2) == vhat(H3, 2)
    assert x.reduce_mod_ik(0) == x
    # I_{n+1} contains the invertible vhat_n, so the quotient collapses
    assert vhat(H2, 1).reduce_mod_ik(3).is_zero()


@settings(max_examples=50)
@given(st.integers(-3, 3), st.integers(0, 2), st.integers(1, 7), st.integers(1, 3))
def test_reduce_mod_ik_idempotent_ring_map(b, a, c, k):
    H3 = hatted_ring(3)
    x = GradedElement.monomial(H3, (a, 0, b), c) + GradedElement.scalar(H3, 2)
    y = GradedElement.monomial(H3, (0, a, -b), 3)
    r = lambda z: z.reduce_mod_ik(k)
    assert r(r(x)) == r(x)
    assert r(x * y) == r(r(x) * r(y))


def test_vhat_subring_membership():
    assert vhat(H2, 1).in_vhat_subring()
    assert vhat(H2, 2).in_vhat_subring()
    assert not vn_power(H2, 2).in_vhat_subring()
    assert not vn_power(H2, vhat_n_exponent(2) * -1).in_vhat_subring()
    H1 = hatted_ring(1)
    assert GradedElement.scalar(H1, 3).in_vhat_subring()
    assert not vn_power(H1, 2).in_vhat_subring()


def test_json_roundtrip_and_order():
    x = vhat(H2, 1) * vn_power(H2, -4) + GradedElement.scalar(H2, 7)
    data = x.to_json()
    assert GradedElement.from_json(H2, data) == x
    assert data[0]["exp"] == [0, 0]


def test_to_two_local_certification():
    rat = unhatted_ring(2, rational_scalars=True)
    ok = elem(rat, {(1, 0): rational(3, 5)})
    assert to_two_local(ok).coefficient((1, 0)).numerator == 3
    bad = elem(rat, {(1, 0): rational(1, 2)})
    with pytest.raises(IntegralityFailure):
        to_two_local(bad)


def test_even_odd_vn_split():
    x = vn_power(H2, 2) + vn_power(H2, 3) + vhat(H2, 1)
    assert x.even_vn_part() + x.odd_vn_part() == x
    assert x.odd_vn_part() == vn_power(H2, 3)
