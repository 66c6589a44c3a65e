import pytest

from rjw.coeffring import GradedElement, hatted_ring, unhatted_ring, vhat, vn_power
from rjw.fgl import (
    FGLData,
    araki_logarithm,
    build_fgl,
    hat_series,
    two_series_summands,
    verify_construction,
)
from rjw.numeric import rational
from rjw.series import BivariateTruncated, TruncatedSeries, fgl_sum


def test_logarithm_leading_coefficients():
    log = araki_logarithm(2, 8)
    desc = log.desc
    assert log.coefficient(1) == GradedElement.one(desc)
    # (2 - 4) l_1 = v_1  =>  l_1 = -v_1/2
    v1 = GradedElement.generator(desc, 0)
    assert log.coefficient(2) == v1.scale(rational(-1, 2))
    assert log.support() == [1, 2, 4]


def test_logarithm_support_is_powers_of_two():
    log = araki_logarithm(1, 20)
    assert log.support() == [1, 2, 4, 8, 16]


def test_fgl_low_degree(n=2):
    data = build_fgl(n, 6)
    desc = data.unhatted_desc
    one = GradedElement.one(desc)
    v1 = GradedElement.generator(desc, 0)
    assert data.fgl.coefficient(1, 0) == one
    assert data.fgl.coefficient(0, 1) == one
    assert data.fgl.coefficient(1, 1) == v1
    assert data.fgl.coefficient(2, 0).is_zero()


def test_two_and_minus_one_low_degree():
    data = build_fgl(2, 4)
    desc = data.unhatted_desc
    v1 = GradedElement.generator(desc, 0)
    assert data.two_series.coefficient(1) == GradedElement.scalar(desc, 2)
    assert data.two_series.coefficient(2) == v1
    assert data.minus_one_series.coefficient(1) == -GradedElement.one(desc)
    assert data.minus_one_series.coefficient(2) == v1


@pytest.mark.parametrize("n", [1, 2])
def test_verify_construction_passes(n):
    report = verify_construction(build_fgl(n, 10))
    assert report.passed, report.first_failure()


def test_verify_detects_corruption():
    data = build_fgl(1, 8)
    bad_coeffs = dict(data.fgl.coeffs)
    key = (1, 1)
    bad_coeffs[key] = bad_coeffs[key] + GradedElement.one(data.unhatted_desc)
    bad = FGLData(
        height=data.height, prec=data.prec, log=data.log, exp=data.exp,
        fgl=BivariateTruncated(data.fgl.desc, "u", "u", data.fgl.prec, bad_coeffs),
        two_series=data.two_series, minus_one_series=data.minus_one_series,
        hatted_fgl=data.hatted_fgl, hatted_two_series=data.hatted_two_series,
        u_star=data.u_star)
    report = verify_construction(bad)
    assert not report.passed
    names = {c.name for c in report.checks if not c.passed}
    assert "two-series-identity" in names or "associativity-via-log" in names


def test_hatted_coefficients():
    data = build_fgl(2, 6)
    H = data.hatted_desc
    assert data.hatted_fgl.coefficient(1, 0) == GradedElement.one(H)
    # a_{11} = v_1 picks up the shift (1-2)(2^n-1): vhat_1
    assert data.hatted_fgl.coefficient(1, 1) == vhat(H, 1)
    assert data.hatted_two_series.coefficient(1) == GradedElement.scalar(H, 2)


def test_hat_series_degree_bookkeeping():
    data = build_fgl(2, 6)
    hatted = hat_series(data.two_series)
    assert hatted.degree == 1 - 17
    assert hatted.var == "uhat"


def test_u_star_leading_terms():
    data = build_fgl(2, 8)
    H = data.hatted_desc
    assert data.u_star.coefficient(1) == -GradedElement.one(H)
    assert data.u_star.coefficient(2) == vhat(H, 1)


def test_u_star_lives_in_even_vn_subring():
    data = build_fgl(2, 12)
    for e, c in data.u_star.coeffs.items():
        assert c.even_vn_part() == c, f"odd v_n part at uhat^{e}"


def test_height_one_u_plus_u_star_is_minus_product():
    data = build_fgl(1, 16)
    H = data.hatted_desc
    ident = TruncatedSeries.identity(H, "uhat", data.prec)
    total = ident + data.u_star
    assert total.agrees_with(-(ident * data.u_star))


def test_two_series_fold_example():
    # height 1 truncated at degree 3: 2u +_F v_1 u^2 = 2u + v_1 u^2 + O(u^3)
    data = build_fgl(1, 3)
    folded = fgl_sum(data.fgl, two_series_summands(data))
    desc = data.unhatted_desc
    assert folded.coefficient(1) == GradedElement.scalar(desc, 2)
    assert folded.coefficient(2) == GradedElement.generator(desc, 0)
