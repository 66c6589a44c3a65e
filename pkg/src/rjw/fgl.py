"""The height-n formal group law at p = 2 and its hatted companion.

The group law is normalized so that the 2-series is the formal sum
v_0*u +_F v_1*u^2 +_F ... +_F v_n*u^{2^n} with v_0 = 2 (Araki-style
generators).  We construct it through the logarithm recursion

    (2 - 2^(2^m)) * l_m = sum_{i<m} l_i * v_{m-i}^(2^i),   l_0 = 1,

build exp as the compositional fixed point of log, and certify afterwards
that the 2-series identity and 2-integrality actually hold, rather than
assuming the normalization.  Output headers name the convention so nobody
mistakes these for Hazewinkel-style generators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeffring import (
    GradedElement,
    IntegralityFailure,
    RingDescriptor,
    hatted_ring,
    to_rational_scalars,
    to_two_local,
    unhatted_ring,
)
from .numeric import rational, two_adic_valuation
from .report import Report
from .series import BivariateTruncated, TruncatedSeries, fgl_sum

GENERATOR_CONVENTION = "araki-2series"


class CrossCheckFailure(ArithmeticError):
    """Two independent characterizations of the same series disagree."""


def araki_logarithm(n: int, prec: int) -> TruncatedSeries:
    """log(u) = sum_m l_m u^(2^m) over Q[v_1..v_n], truncated at u^prec."""
    if n < 1 or prec < 2:
        raise ValueError("need height >= 1 and precision >= 2")
    desc = unhatted_ring(n, rational_scalars=True)
    one = GradedElement.one(desc)
    ells = {0: one}
    coeffs = {1: one}
    m = 1
    while 2**m < prec:
        acc = GradedElement.zero(desc)
        for i in range(m):
            k = m - i
            if k <= n:
                acc = acc + ells[i] * GradedElement.generator(desc, k - 1, 2**i)
        ell = acc.scale(rational(1, 2 - 2 ** (2**m)))
        ells[m] = ell
        if not ell.is_zero():
            coeffs[2**m] = ell
        m += 1
    return TruncatedSeries(desc, "u", prec, coeffs, degree=2)


def formal_exponential(log: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse of the logarithm via its functional equation.

    exp solves E = u - sum_{m>=1} l_m E^(2^m); each sweep of that map gains
    one exponent of accuracy, so we sweep at growing truncation.
    """
    desc = log.desc
    prec = log.prec
    one = GradedElement.one(desc)
    tail = sorted((e, c) for e, c in log.coeffs.items() if e >= 2)
    exp = TruncatedSeries(desc, "u", min(2, prec), {1: one}, validate=False)
    p = exp.prec
    while p < prec:
        p += 1
        current = exp._assume_precision(p)
        acc = TruncatedSeries(desc, "u", p, {1: one}, validate=False)
        powers = {1: current}

        def pw(e):
            if e in powers:
                return powers[e]
            h = pw(e // 2)
            r = h * h
            if e % 2:
                r = r * powers[1]
            powers[e] = r
            return r

        for e, c in tail:
            if e >= p:
                break
            acc = acc - pw(e).scale(c)
        exp = acc
    check = log.compose(exp)
    if not check.agrees_with(TruncatedSeries.identity(desc, "u", prec)):
        raise CrossCheckFailure("exp does not invert log to precision")
    return exp._assume_precision(prec) if exp.prec < prec else exp


def _log_bivariate(log: TruncatedSeries) -> BivariateTruncated:
    desc = log.desc
    coeffs = {}
    for e, c in log.coeffs.items():
        coeffs[(e, 0)] = c
        coeffs[(0, e)] = c
    return BivariateTruncated(desc, "u", "u", log.prec, coeffs, validate=False)


def hat_series(s: TruncatedSeries) -> TruncatedSeries:
    """Hat a homogeneous series over the unhatted ring, term by term.

    Each coefficient is shifted by the v_n power matching its own degree and
    the variable is retagged from u to uhat.
    """
    out = {}
    for e, c in s.coeffs.items():
        out[e] = c.hat()
    desc = hatted_ring(s.desc.height, rational_scalars=s.desc.rational_scalars)
    degree = None
    if s.degree is not None:
        lam = desc.lam
        degree = (s.degree // 2) * (1 - lam)
    return TruncatedSeries(desc, "uhat", s.prec, out, degree=degree, validate=False)


def hat_bivariate(f: BivariateTruncated) -> BivariateTruncated:
    out = {}
    for key, c in f.coeffs.items():
        out[key] = c.hat()
    desc = hatted_ring(f.desc.height, rational_scalars=f.desc.rational_scalars)
    return BivariateTruncated(desc, "uhat", "uhat", f.prec, out, validate=False)


@dataclass
class FGLData:
    """Everything the engine knows about the group law at one height/precision."""

    height: int
    prec: int
    log: TruncatedSeries
    exp: TruncatedSeries
    fgl: BivariateTruncated
    two_series: TruncatedSeries
    minus_one_series: TruncatedSeries
    hatted_fgl: BivariateTruncated
    hatted_two_series: TruncatedSeries
    u_star: TruncatedSeries
    convention: str = GENERATOR_CONVENTION

    @property
    def hatted_desc(self) -> RingDescriptor:
        return self.u_star.desc

    @property
    def unhatted_desc(self) -> RingDescriptor:
        return self.two_series.desc


def _certify_two_local(series_or_biv, what: str):
    coeffs = series_or_biv.coeffs
    for key, c in coeffs.items():
        for exps, q in c.terms.items():
            if two_adic_valuation(q) < 0:
                raise IntegralityFailure(
                    f"{what}: coefficient {q} at {key}/{exps} has negative 2-valuation"
                )


def build_fgl(n: int, prec: int) -> FGLData:
    """Construct the group law, its 2-series, formal negation, and hats."""
    log = araki_logarithm(n, prec)
    exp = formal_exponential(log)

    lxy = _log_bivariate(log)
    fgl_rational = lxy.substitute_outer(exp)
    fgl = fgl_rational.map_coefficients(
        to_two_local, desc=unhatted_ring(n))

    two_rational = exp.compose(log.scale(2))
    minus_rational = exp.compose(log.scale(-1))
    two = two_rational.map_coefficients(to_two_local, desc=unhatted_ring(n))
    two = TruncatedSeries(two.desc, "u", two.prec, two.coeffs, degree=2, validate=False)
    minus = minus_rational.map_coefficients(to_two_local, desc=unhatted_ring(n))
    minus = TruncatedSeries(minus.desc, "u", minus.prec, minus.coeffs, degree=2, validate=False)

    _certify_two_local(fgl, "group law")
    _certify_two_local(two, "2-series")
    _certify_two_local(minus, "negation series")

    hatted_fgl = hat_bivariate(fgl)
    hatted_two = hat_series(two)
    u_star = hat_series(minus)

    data = FGLData(
        height=n,
        prec=prec,
        log=log,
        exp=exp,
        fgl=fgl,
        two_series=two,
        minus_one_series=minus,
        hatted_fgl=hatted_fgl,
        hatted_two_series=hatted_two,
        u_star=u_star,
    )
    _cross_check_conjugate(data)
    return data


def _cross_check_conjugate(data: FGLData):
    """The conjugate orientation must satisfy F^(ustar, [2](uhat)) = uhat."""
    desc = data.hatted_desc
    lhs = data.hatted_fgl.evaluate(data.u_star, data.hatted_two_series)
    if not lhs.agrees_with(TruncatedSeries.identity(desc, "uhat", data.prec)):
        diff = lhs.first_difference(TruncatedSeries.identity(desc, "uhat", data.prec))
        raise CrossCheckFailure(
            f"conjugate orientation cross-check failed at exponent {diff[0]}"
        )


def two_series_summands(data: FGLData) -> list[TruncatedSeries]:
    """The terms v_0 u, v_1 u^2, ..., v_n u^(2^n) as truncated series."""
    desc = data.unhatted_desc
    out = [TruncatedSeries(desc, "u", data.prec,
                           {1: GradedElement.scalar(desc, 2)}, validate=False)]
    for i in range(1, data.height + 1):
        coeffs = {}
        if 2**i < data.prec:
            coeffs[2**i] = GradedElement.generator(desc, i - 1)
        out.append(TruncatedSeries(desc, "u", data.prec, coeffs, validate=False))
    return out


def verify_construction(data: FGLData) -> Report:
    """Self-consistency suite: 2-series identity, axioms, involution, integrality."""
    report = Report("fgl")
    desc = data.unhatted_desc
    ident = TruncatedSeries.identity(desc, "u", data.prec)

    folded = fgl_sum(data.fgl, two_series_summands(data))
    diff = folded.first_difference(data.two_series)
    report.add(
        "two-series-identity",
        diff is None,
        "" if diff is None else f"first mismatch at u^{diff[0]}: {diff[1]} vs {diff[2]}",
    )

    unit_ok = True
    witness = ""
    for (i, j), c in data.fgl.coeffs.items():
        if j == 0 and not (i == 1 and c == GradedElement.one(desc)):
            unit_ok = False
            witness = f"coefficient at ({i},0) is {c}"
            break
    report.add("unit-axiom", unit_ok, witness)

    report.add("commutativity", data.fgl.is_symmetric())

    # Associativity certificate: log F(x,y) = log x + log y as bivariate
    # series, which pins F(F(x,y),z) = F(x,F(y,z)) because log is reversible.
    fgl_rat = data.fgl.map_coefficients(
        to_rational_scalars, desc=unhatted_ring(data.height, rational_scalars=True))
    log_of_f = fgl_rat.substitute_outer(data.log)
    lxy = _log_bivariate(data.log)
    assoc_diff = log_of_f - lxy
    report.add(
        "associativity-via-log",
        not assoc_diff.coeffs,
        "" if not assoc_diff.coeffs else f"mismatch at {sorted(assoc_diff.coeffs)[0]}",
    )

    inv = data.minus_one_series.compose(data.minus_one_series)
    diff = inv.first_difference(ident)
    report.add(
        "negation-involution",
        diff is None,
        "" if diff is None else f"first mismatch at u^{diff[0]}",
    )

    integral = True
    witness = ""
    for what, obj in (("F", data.fgl), ("[2]", data.two_series),
                      ("[-1]", data.minus_one_series)):
        for key, c in obj.coeffs.items():
            for exps, q in c.terms.items():
                if two_adic_valuation(q) < 0:
                    integral = False
                    witness = f"{what} at {key}: {q}"
                    break
    report.add("2-integrality", integral, witness)
    return report
