"""Truncated power series over graded coefficients, univariate and bivariate.

A series of precision N stores coefficients for exponents < N and is exact
modulo the N-th power of its variable.  Precision is contagious: every
operation returns the minimum precision justified by its inputs, and nothing
ever extrapolates.
"""

from __future__ import annotations

from .coeffring import (
    DescriptorMismatch,
    GradedElement,
    RingDescriptor,
    lambda_shift,
)
from .numeric import rational


class SeriesError(ValueError):
    pass


class VariableMismatch(SeriesError):
    pass


class NonzeroConstantTerm(SeriesError):
    pass


class NonUnitLinearTerm(SeriesError):
    pass


class PrecisionError(SeriesError):
    pass


VARIABLE_TAGS = ("u", "uhat", "w", "p1hat")


def variable_degree(var: str, n: int) -> int:
    lam = lambda_shift(n)
    if var == "u":
        return 2
    if var == "uhat":
        return 1 - lam
    if var in ("w", "p1hat"):
        return 2 * (1 - lam)
    raise SeriesError(f"unknown variable tag {var!r}")


class TruncatedSeries:
    """Power series in one tagged variable, truncated at an explicit precision."""

    __slots__ = ("desc", "var", "prec", "coeffs", "degree")

    def __init__(self, desc: RingDescriptor, var: str, prec: int, coeffs: dict,
                 degree: int | None = None, validate: bool = True):
        if prec < 1:
            raise PrecisionError("precision must be >= 1")
        if var not in VARIABLE_TAGS:
            raise SeriesError(f"unknown variable tag {var!r}")
        self.desc = desc
        self.var = var
        self.prec = prec
        self.degree = degree
        if validate:
            clean = {}
            for e, c in coeffs.items():
                if not isinstance(c, GradedElement):
                    raise SeriesError("coefficients must be GradedElements")
                if c.desc != desc:
                    raise DescriptorMismatch("coefficient ring mismatch")
                if e < 0:
                    raise SeriesError("negative exponents are not supported")
                if e >= prec or c.is_zero():
                    continue
                clean[e] = c
            self.coeffs = clean
        else:
            self.coeffs = coeffs
        if degree is not None and validate:
            vd = self.variable_degree
            for e, c in self.coeffs.items():
                if c.is_homogeneous() and c.degree() != degree - e * vd:
                    raise SeriesError(
                        f"coefficient of exponent {e} violates declared degree {degree}"
                    )

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, desc, var, prec, degree=None):
        return cls(desc, var, prec, {}, degree=degree, validate=False)

    @classmethod
    def identity(cls, desc, var, prec):
        """The series consisting of the bare variable."""
        return cls(desc, var, prec, {1: GradedElement.one(desc)}, validate=False)

    @classmethod
    def from_element(cls, elem: GradedElement, var, prec, exponent: int = 0):
        return cls(elem.desc, var, prec, {exponent: elem})

    # -- bookkeeping -------------------------------------------------------

    @property
    def variable_degree(self) -> int:
        return variable_degree(self.var, self.desc.height)

    def coefficient(self, e: int) -> GradedElement:
        if e >= self.prec:
            raise PrecisionError(f"exponent {e} is beyond precision {self.prec}")
        return self.coeffs.get(e, GradedElement.zero(self.desc))

    def valuation(self):
        """Smallest exponent with a nonzero coefficient; None for the zero series."""
        if not self.coeffs:
            return None
        return min(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise PrecisionError("truncation cannot increase precision")
        return TruncatedSeries(
            self.desc, self.var, prec,
            {e: c for e, c in self.coeffs.items() if e < prec},
            degree=self.degree, validate=False,
        )

    def _assume_precision(self, prec: int) -> "TruncatedSeries":
        # internal: caller certifies the higher coefficients are exact
        return TruncatedSeries(self.desc, self.var, prec, dict(self.coeffs),
                               degree=self.degree, validate=False)

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.desc != other.desc:
            raise DescriptorMismatch("series over different rings")
        if self.var != other.var:
            raise VariableMismatch(f"{self.var} vs {other.var}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        out = {e: c for e, c in self.coeffs.items() if e < prec}
        for e, c in other.coeffs.items():
            if e >= prec:
                continue
            s = out[e] + c if e in out else c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        deg = self.degree if self.degree == other.degree else None
        return TruncatedSeries(self.desc, self.var, prec, out, degree=deg, validate=False)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries(self.desc, self.var, self.prec,
                               {e: -c for e, c in self.coeffs.items()},
                               degree=self.degree, validate=False)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        out: dict = {}
        for ea, ca in self.coeffs.items():
            if ea >= prec:
                continue
            for eb, cb in other.coeffs.items():
                e = ea + eb
                if e >= prec:
                    continue
                p = ca * cb
                if e in out:
                    p = out[e] + p
                if p.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = p
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return TruncatedSeries(self.desc, self.var, prec, out, degree=deg, validate=False)

    def scale(self, factor) -> "TruncatedSeries":
        """Multiply every coefficient by a GradedElement or scalar."""
        if isinstance(factor, GradedElement):
            if factor.desc != self.desc:
                raise DescriptorMismatch("scale factor over a different ring")
            out = {e: factor * c for e, c in self.coeffs.items()}
            out = {e: c for e, c in out.items() if not c.is_zero()}
            deg = None
            if self.degree is not None and factor.is_homogeneous() and not factor.is_zero():
                deg = self.degree + factor.degree()
            return TruncatedSeries(self.desc, self.var, self.prec, out, degree=deg, validate=False)
        q = rational(factor)
        if q == 0:
            return TruncatedSeries.zero(self.desc, self.var, self.prec, degree=self.degree)
        out = {e: c.scale(q) for e, c in self.coeffs.items()}
        return TruncatedSeries(self.desc, self.var, self.prec, out, degree=self.degree, validate=False)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by var^k (k >= 0); precision grows with the shift."""
        if k < 0:
            raise SeriesError("negative shifts are not supported")
        return TruncatedSeries(self.desc, self.var, self.prec + k,
                               {e + k: c for e, c in self.coeffs.items()},
                               validate=False)

    def map_coefficients(self, fn, desc=None, var=None, degree=None) -> "TruncatedSeries":
        desc = desc or self.desc
        out = {}
        for e, c in self.coeffs.items():
            img = fn(c)
            if not img.is_zero():
                out[e] = img
        return TruncatedSeries(desc, var or self.var, self.prec, out,
                               degree=degree, validate=False)

    # -- composition -------------------------------------------------------

    def compose(self, g: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute g into self; g must have zero constant term.

        Result precision is min(prec(g), val(g) * prec(self)); for the common
        valuation-1 case this is the min rule.
        """
        if self.desc != g.desc:
            raise DescriptorMismatch("series over different rings")
        if 0 in g.coeffs:
            raise NonzeroConstantTerm("inner series has a constant term")
        val = g.valuation()
        if val is None:
            prec = g.prec
            out = {}
            if 0 in self.coeffs:
                out[0] = self.coeffs[0]
            return TruncatedSeries(self.desc, g.var, prec, out, validate=False)
        prec = min(g.prec, val * self.prec)
        acc = TruncatedSeries.zero(self.desc, g.var, prec)
        powers = {1: g.truncate(prec) if g.prec > prec else g}

        def gpow(e: int) -> "TruncatedSeries":
            if e in powers:
                return powers[e]
            half = gpow(e // 2)
            p = half * half
            if e % 2:
                p = p * powers[1]
            powers[e] = p
            return p

        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                acc = acc + TruncatedSeries.from_element(c, g.var, prec)
            else:
                if e * val >= prec:
                    break
                acc = acc + gpow(e).scale(c)
        return acc

    def derivative(self) -> "TruncatedSeries":
        out = {}
        for e, c in self.coeffs.items():
            if e == 0:
                continue
            out[e - 1] = c.scale(e)
        return TruncatedSeries(self.desc, self.var, self.prec - 1, out, validate=False)

    def reversion(self) -> "TruncatedSeries":
        """Compositional inverse of c*var + O(var^2) with invertible c."""
        if 0 in self.coeffs:
            raise NonUnitLinearTerm("series has a constant term")
        lin = self.coeffs.get(1)
        if lin is None:
            raise NonUnitLinearTerm("series has no linear term")
        try:
            cinv = lin.invert_monomial()
        except Exception as exc:
            raise NonUnitLinearTerm(str(exc)) from exc
        n = self.prec
        g = TruncatedSeries(self.desc, self.var, n, {1: cinv}, validate=False)
        for k in range(2, n):
            fg = self.compose(g._assume_precision(n).truncate(k + 1))
            delta = fg.coefficient(k)
            if delta.is_zero():
                continue
            g = g + TruncatedSeries(self.desc, self.var, n,
                                    {k: -(cinv * delta)}, validate=False)
        return g

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.coeffs.get(0)
        if c0 is None:
            raise NonUnitLinearTerm("constant term is zero")
        c0inv = c0.invert_monomial()
        prec = self.prec
        out = {0: c0inv}
        # standard recursion: b_k = -c0^{-1} * sum_{j<k} a_{k-j} b_j
        for k in range(1, prec):
            s = GradedElement.zero(self.desc)
            for j in range(k):
                if j in out and (k - j) in self.coeffs:
                    s = s + self.coeffs[k - j] * out[j]
            if not s.is_zero():
                out[k] = -(c0inv * s)
        return TruncatedSeries(self.desc, self.var, prec, out, validate=False)

    # -- comparison & serialization -----------------------------------------

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality of all coefficients up to the smaller precision."""
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        for e in set(self.coeffs) | set(other.coeffs):
            if e >= prec:
                continue
            if self.coeffs.get(e) != other.coeffs.get(e):
                a = self.coeffs.get(e, GradedElement.zero(self.desc))
                b = other.coeffs.get(e, GradedElement.zero(self.desc))
                if not (a - b).is_zero():
                    return False
        return True

    def first_difference(self, other: "TruncatedSeries"):
        prec = min(self.prec, other.prec)
        for e in range(prec):
            a = self.coeffs.get(e)
            b = other.coeffs.get(e)
            if a is None and b is None:
                continue
            a = a or GradedElement.zero(self.desc)
            b = b or GradedElement.zero(self.desc)
            if not (a - b).is_zero():
                return e, a, b
        return None

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.desc == other.desc and self.var == other.var
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.desc, self.var, self.prec, tuple(sorted(self.coeffs))))

    def to_json(self) -> dict:
        terms = []
        for e in range(self.prec):
            c = self.coeffs.get(e)
            terms.append(c.to_json() if c is not None else [])
        return {"var": self.var, "precision": self.prec, "terms": terms}

    @classmethod
    def from_json(cls, desc: RingDescriptor, obj: dict) -> "TruncatedSeries":
        coeffs = {}
        for e, data in enumerate(obj["terms"]):
            if data:
                coeffs[e] = GradedElement.from_json(desc, data)
        return cls(desc, obj["var"], obj["precision"], coeffs)

    def __str__(self):
        if not self.coeffs:
            return f"O({self.var}^{self.prec})"
        parts = []
        for e in self.support():
            c = self.coeffs[e]
            if e == 0:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{self.var}^{e}")
        parts.append(f"O({self.var}^{self.prec})")
        return " + ".join(parts)

    __repr__ = __str__


class BivariateTruncated:
    """Series in two tagged variables, truncated by total degree."""

    __slots__ = ("desc", "var1", "var2", "prec", "coeffs", "degree")

    def __init__(self, desc, var1, var2, prec, coeffs: dict,
                 degree=None, validate: bool = True):
        self.desc = desc
        self.var1 = var1
        self.var2 = var2
        self.prec = prec
        self.degree = degree
        if validate:
            clean = {}
            for (i, j), c in coeffs.items():
                if i < 0 or j < 0:
                    raise SeriesError("negative exponents are not supported")
                if i + j >= prec or c.is_zero():
                    continue
                if c.desc != desc:
                    raise DescriptorMismatch("coefficient ring mismatch")
                clean[(i, j)] = c
            self.coeffs = clean
        else:
            self.coeffs = coeffs

    @classmethod
    def zero(cls, desc, var1, var2, prec):
        return cls(desc, var1, var2, prec, {}, validate=False)

    def coefficient(self, i: int, j: int) -> GradedElement:
        if i + j >= self.prec:
            raise PrecisionError(f"({i},{j}) is beyond total precision {self.prec}")
        return self.coeffs.get((i, j), GradedElement.zero(self.desc))

    def is_symmetric(self) -> bool:
        for (i, j), c in self.coeffs.items():
            if self.coeffs.get((j, i)) != c:
                other = self.coeffs.get((j, i), GradedElement.zero(self.desc))
                if not (c - other).is_zero():
                    return False
        return True

    def __add__(self, other: "BivariateTruncated") -> "BivariateTruncated":
        if (self.desc, self.var1, self.var2) != (other.desc, other.var1, other.var2):
            raise VariableMismatch("bivariate series are incompatible")
        prec = min(self.prec, other.prec)
        out = {k: c for k, c in self.coeffs.items() if k[0] + k[1] < prec}
        for k, c in other.coeffs.items():
            if k[0] + k[1] >= prec:
                continue
            s = out[k] + c if k in out else c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return BivariateTruncated(self.desc, self.var1, self.var2, prec, out, validate=False)

    def __neg__(self):
        return BivariateTruncated(self.desc, self.var1, self.var2, self.prec,
                                  {k: -c for k, c in self.coeffs.items()}, validate=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "BivariateTruncated") -> "BivariateTruncated":
        if (self.desc, self.var1, self.var2) != (other.desc, other.var1, other.var2):
            raise VariableMismatch("bivariate series are incompatible")
        prec = min(self.prec, other.prec)
        out: dict = {}
        for (ia, ja), ca in self.coeffs.items():
            if ia + ja >= prec:
                continue
            for (ib, jb), cb in other.coeffs.items():
                i, j = ia + ib, ja + jb
                if i + j >= prec:
                    continue
                p = ca * cb
                key = (i, j)
                if key in out:
                    p = out[key] + p
                if p.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = p
        return BivariateTruncated(self.desc, self.var1, self.var2, prec, out, validate=False)

    def scale(self, factor: GradedElement) -> "BivariateTruncated":
        out = {}
        for k, c in self.coeffs.items():
            p = factor * c
            if not p.is_zero():
                out[k] = p
        return BivariateTruncated(self.desc, self.var1, self.var2, self.prec, out, validate=False)

    def map_coefficients(self, fn, desc=None, var1=None, var2=None) -> "BivariateTruncated":
        desc = desc or self.desc
        out = {}
        for k, c in self.coeffs.items():
            img = fn(c)
            if not img.is_zero():
                out[k] = img
        return BivariateTruncated(desc, var1 or self.var1, var2 or self.var2,
                                  self.prec, out, validate=False)

    def evaluate(self, s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
        """Substitute series (s, t) for the two variables.

        Both must share a variable tag and have positive valuation (or be
        zero); the result is exact to min(prec s, prec t, total-prec * min
        valuation).
        """
        s._check_compatible(t)
        if s.desc != self.desc:
            raise DescriptorMismatch("operand ring mismatch")
        if 0 in s.coeffs or 0 in t.coeffs:
            raise NonzeroConstantTerm("substituted series must vanish at 0")
        vals = [v for v in (s.valuation(), t.valuation()) if v is not None]
        minval = min(vals) if vals else 1
        prec = min(s.prec, t.prec, self.prec * minval)
        zero = TruncatedSeries.zero(self.desc, s.var, prec)
        s_pows: dict[int, TruncatedSeries] = {}
        t_pows: dict[int, TruncatedSeries] = {}

        def pow_of(base: TruncatedSeries, cache: dict, e: int) -> TruncatedSeries:
            if e == 0:
                return TruncatedSeries.from_element(
                    GradedElement.one(self.desc), s.var, prec)
            if e == 1:
                cache[1] = base.truncate(prec) if base.prec > prec else base
                return cache[1]
            if e in cache:
                return cache[e]
            half = pow_of(base, cache, e // 2)
            p = half * half
            if e % 2:
                p = p * pow_of(base, cache, 1)
            cache[e] = p
            return p

        # group by second exponent: sum_j (sum_i c_ij s^i) t^j
        by_j: dict[int, list] = {}
        for (i, j), c in self.coeffs.items():
            by_j.setdefault(j, []).append((i, c))
        acc = zero
        sval = s.valuation()
        tval = t.valuation()
        for j in sorted(by_j):
            if tval is not None and j * tval >= prec:
                continue
            if tval is None and j > 0:
                continue
            inner = zero
            for i, c in sorted(by_j[j]):
                if sval is not None and i * sval >= prec:
                    continue
                if sval is None and i > 0:
                    continue
                inner = inner + pow_of(s, s_pows, i).scale(c)
            if inner.is_zero():
                continue
            acc = acc + inner * pow_of(t, t_pows, j)
        return acc

    def substitute_outer(self, f: TruncatedSeries) -> "BivariateTruncated":
        """Compose a univariate series f with this bivariate one: f(self).

        Requires zero constant term here; powers of self are built
        incrementally, which is cheap when self is sparse.
        """
        if (0, 0) in self.coeffs:
            raise NonzeroConstantTerm("bivariate argument has a constant term")
        acc = BivariateTruncated.zero(self.desc, self.var1, self.var2, self.prec)
        if f.is_zero():
            return acc
        power = None
        top = max(f.support())
        for e in range(0, top + 1):
            if e == 1:
                power = self
            elif e >= 2:
                power = power * self
            c = f.coeffs.get(e)
            if c is None:
                continue
            if e == 0:
                acc = acc + BivariateTruncated(
                    self.desc, self.var1, self.var2, self.prec, {(0, 0): c})
            else:
                acc = acc + power.scale(c)
        return acc

    def __eq__(self, other):
        if not isinstance(other, BivariateTruncated):
            return NotImplemented
        return (self.desc == other.desc and (self.var1, self.var2) == (other.var1, other.var2)
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def to_json(self) -> dict:
        terms = []
        for (i, j) in sorted(self.coeffs):
            terms.append({"exp1": i, "exp2": j, "coeff": self.coeffs[(i, j)].to_json()})
        return {"var1": self.var1, "var2": self.var2, "precision": self.prec, "terms": terms}

    def __str__(self):
        parts = []
        for (i, j) in sorted(self.coeffs):
            parts.append(f"({self.coeffs[(i, j)]})*{self.var1}^{i}*{self.var2}^{j}")
        parts.append(f"O(deg {self.prec})")
        return " + ".join(parts)

    __repr__ = __str__


def fgl_sum(fgl: BivariateTruncated, terms: list[TruncatedSeries]) -> TruncatedSeries:
    """Left fold of the formal sum x +_F y = F(x, y) over the given terms."""
    if not terms:
        raise SeriesError("formal sum of an empty list")
    acc = terms[0]
    if 0 in acc.coeffs:
        raise NonzeroConstantTerm("formal summands must vanish at 0")
    for t in terms[1:]:
        if 0 in t.coeffs:
            raise NonzeroConstantTerm("formal summands must vanish at 0")
        acc = fgl.evaluate(acc, t)
    return acc
