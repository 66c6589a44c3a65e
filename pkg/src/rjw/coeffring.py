"""Graded coefficient rings in two coordinate systems.

Unhatted coordinates: Z_(2)[v_1, ..., v_n] with |v_k| = -2(2^k - 1), with the
option of inverting v_n.  Hatted coordinates: Z_(2)[vhat_1, ..., vhat_{n-1},
vn^{+-1}] where vhat_k = v_k * vn^{-(2^k-1)(2^n-1)} has degree
(lam - 1)(2^k - 1) for lam = 2(2^n - 1)^2 - 1.  Either ring can carry plain
rational scalars instead of 2-local ones (needed while building logarithms).

Elements are sparse maps monomial-exponent-tuple -> exact rational.  The
exponent tuple always has length n; in hatted coordinates the first n-1 slots
are the vhat exponents (>= 0) and the last slot is the v_n exponent (any
integer).
"""

from __future__ import annotations

from dataclasses import dataclass

from .numeric import TwoLocalNumber, rational

_ZERO = rational(0)
_ONE = rational(1)


class RingError(ValueError):
    pass


class DescriptorMismatch(RingError):
    pass


class NotHomogeneous(RingError):
    pass


class ZeroElement(RingError):
    pass


class OddDegree(RingError):
    pass


class BadExponent(RingError):
    pass


class NotInvertible(RingError):
    pass


class IntegralityFailure(RingError):
    """A coefficient fails to be 2-local where 2-locality is required."""


def lambda_shift(n: int) -> int:
    """The degree-shift parameter lam(n) = 2(2^n - 1)^2 - 1."""
    return 2 * (2**n - 1) ** 2 - 1


@dataclass(frozen=True)
class RingDescriptor:
    height: int
    hatted: bool
    rational_scalars: bool = False
    vn_inverted: bool = False  # meaningful for unhatted rings only

    def __post_init__(self):
        if self.height < 1:
            raise RingError("height must be >= 1")

    @property
    def ngens(self) -> int:
        return self.height

    @property
    def lam(self) -> int:
        return lambda_shift(self.height)

    @property
    def generator_names(self) -> tuple[str, ...]:
        n = self.height
        if self.hatted:
            return tuple(f"vhat{k}" for k in range(1, n)) + ("vn",)
        return tuple(f"v{k}" for k in range(1, n + 1))

    @property
    def generator_degrees(self) -> tuple[int, ...]:
        n = self.height
        if self.hatted:
            lam = self.lam
            hats = tuple((lam - 1) * (2**k - 1) for k in range(1, n))
            return hats + (-2 * (2**n - 1),)
        return tuple(-2 * (2**k - 1) for k in range(1, n + 1))

    def vn_allows_negative(self) -> bool:
        return self.hatted or self.vn_inverted

    def check_exponents(self, exps: tuple[int, ...]):
        n = self.height
        if len(exps) != n:
            raise BadExponent(f"expected {n} exponents, got {len(exps)}")
        limit = n if self.vn_allows_negative() else n + 1
        for idx in range(min(n, limit - 1)):
            if exps[idx] < 0:
                raise BadExponent(
                    f"generator {self.generator_names[idx]} is not invertible"
                )


def monomial_degree(desc: RingDescriptor, exps: tuple[int, ...]) -> int:
    degs = desc.generator_degrees
    return sum(e * d for e, d in zip(exps, degs))


def vhat_n_exponent(n: int) -> int:
    """v_n-exponent of the hatted top generator: vhat_n = vn^(1-(2^n-1)^2)."""
    return 1 - (2**n - 1) ** 2


class GradedElement:
    """Sparse Laurent polynomial with exact rational coefficients."""

    __slots__ = ("desc", "terms", "_deg")

    def __init__(self, desc: RingDescriptor, terms: dict, validate: bool = True):
        self.desc = desc
        if validate:
            clean = {}
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                desc.check_exponents(exps)
                q = rational(c.as_rational() if isinstance(c, TwoLocalNumber) else c)
                if q == 0:
                    continue
                if not desc.rational_scalars and int(q.denominator) % 2 == 0:
                    raise IntegralityFailure(
                        f"coefficient {q} is not 2-local in {desc.generator_names}"
                    )
                clean[exps] = q
            self.terms = clean
        else:
            self.terms = terms
        self._deg = False  # lazily computed; None means inhomogeneous

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, desc: RingDescriptor) -> "GradedElement":
        return cls(desc, {}, validate=False)

    @classmethod
    def one(cls, desc: RingDescriptor) -> "GradedElement":
        return cls.scalar(desc, 1)

    @classmethod
    def scalar(cls, desc: RingDescriptor, q) -> "GradedElement":
        return cls(desc, {(0,) * desc.ngens: q})

    @classmethod
    def generator(cls, desc: RingDescriptor, index: int, power: int = 1) -> "GradedElement":
        """The index-th generator (0-based, in descriptor order) to a power."""
        exps = [0] * desc.ngens
        exps[index] = power
        return cls(desc, {tuple(exps): _ONE})

    @classmethod
    def monomial(cls, desc: RingDescriptor, exps, coeff=1) -> "GradedElement":
        return cls(desc, {tuple(exps): coeff})

    # -- bookkeeping -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        return self._degree_or_none() is not None

    def _degree_or_none(self):
        if self._deg is not False:
            return self._deg
        it = iter(self.terms)
        first = monomial_degree(self.desc, next(it))
        for exps in it:
            if monomial_degree(self.desc, exps) != first:
                self._deg = None
                return None
        self._deg = first
        return first

    def degree(self) -> int:
        if not self.terms:
            raise ZeroElement("the zero element has no degree")
        d = self._degree_or_none()
        if d is None:
            raise NotHomogeneous(str(self))
        return d

    def coefficient(self, exps):
        q = self.terms.get(tuple(exps), _ZERO)
        if self.desc.rational_scalars:
            return q
        return TwoLocalNumber(q)

    def constant_coefficient(self):
        return self.coefficient((0,) * self.desc.ngens)

    # -- arithmetic --------------------------------------------------------

    def _check_same(self, other: "GradedElement"):
        if self.desc != other.desc:
            raise DescriptorMismatch(f"{self.desc} vs {other.desc}")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check_same(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, _ZERO) + c
            if s == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return GradedElement(self.desc, terms, validate=False)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __neg__(self) -> "GradedElement":
        return GradedElement(
            self.desc, {e: -c for e, c in self.terms.items()}, validate=False
        )

    def __mul__(self, other: "GradedElement") -> "GradedElement":
        self._check_same(other)
        out: dict = {}
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(key, _ZERO) + ca * cb
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return GradedElement(self.desc, out, validate=False)

    def __pow__(self, e: int) -> "GradedElement":
        if e < 0:
            return self.invert_monomial() ** (-e)
        result = GradedElement.one(self.desc)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def scale(self, q) -> "GradedElement":
        q = rational(q.as_rational() if isinstance(q, TwoLocalNumber) else q)
        if q == 0:
            return GradedElement.zero(self.desc)
        if not self.desc.rational_scalars and int(q.denominator) % 2 == 0:
            # legal only when every product stays 2-local; validate term-wise
            return GradedElement(
                self.desc, {e: c * q for e, c in self.terms.items()}, validate=True
            )
        return GradedElement(
            self.desc, {e: c * q for e, c in self.terms.items()}, validate=False
        )

    def shift_monomial(self, exps) -> "GradedElement":
        """Multiply by the monomial with the given exponent vector."""
        exps = tuple(exps)
        out = {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}
        elem = GradedElement(self.desc, out, validate=False)
        for e in out:
            self.desc.check_exponents(e)
        return elem

    def invert_monomial(self) -> "GradedElement":
        """Inverse of a single-term unit (unit scalar times invertible monomial)."""
        if len(self.terms) != 1:
            raise NotInvertible("only single-term elements can be inverted")
        ((exps, c),) = self.terms.items()
        neg = tuple(-e for e in exps)
        self.desc.check_exponents(neg)
        if not self.desc.rational_scalars and int(c.numerator) % 2 == 0:
            raise NotInvertible(f"coefficient {c} is not a unit of Z_(2)")
        return GradedElement(self.desc, {neg: 1 / rational(c)}, validate=False)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.desc == other.desc and self.terms == other.terms

    def __hash__(self):
        return hash((self.desc, tuple(sorted(self.terms.items()))))

    # -- structure maps ----------------------------------------------------

    def involution_c(self) -> "GradedElement":
        """The conjugation action: every v_i (unhatted) resp. v_n (hatted) negates."""
        n = self.desc.ngens
        out = {}
        if self.desc.hatted:
            for exps, c in self.terms.items():
                out[exps] = -c if exps[n - 1] % 2 else c
        else:
            for exps, c in self.terms.items():
                out[exps] = -c if sum(exps) % 2 else c
        return GradedElement(self.desc, out, validate=False)

    def hat(self, degree2k: int | None = None) -> "GradedElement":
        """Shift a homogeneous even-degree element into hatted coordinates.

        The element of degree 2k is multiplied by vn^{k(2^n-1)} and the result
        re-expressed in the hatted generators; see vhat_n_exponent for the top
        generator's image.
        """
        if self.desc.hatted:
            raise RingError("element is already in hatted coordinates")
        if not self.terms:
            if degree2k is None:
                degree2k = 0
            return GradedElement.zero(hatted_descriptor(self.desc))
        d = self.degree()
        if degree2k is not None and degree2k != d:
            raise NotHomogeneous(f"declared degree {degree2k} but element has {d}")
        if d % 2:
            raise OddDegree(f"degree {d} is odd")
        n = self.desc.ngens
        k = d // 2
        tail = 2**n - 1
        out = {}
        for exps, c in self.terms.items():
            # global multiplication by vn^{k(2^n-1)}, then conversion: the
            # first n-1 exponents become vhat exponents unchanged and the
            # v_n exponent absorbs the hat shifts of each v_i factor.
            f = exps[n - 1] + tail * (k + sum(exps[i] * (2 ** (i + 1) - 1) for i in range(n - 1)))
            out[exps[: n - 1] + (f,)] = c
        return GradedElement(hatted_descriptor(self.desc), out, validate=False)

    def reduce_mod_ik(self, k: int) -> "GradedElement":
        """Canonical representative modulo I_k = (2, vhat_1, ..., vhat_{k-1}).

        I_0 = (0).  For k = n+1 the ideal contains vhat_n, which is invertible
        in the Laurent ring, so the quotient is zero.
        """
        n = self.desc.ngens
        if not 0 <= k <= n + 1:
            raise RingError(f"I_{k} is not defined at height {n}")
        if k == 0:
            return self
        if not self.desc.hatted:
            raise RingError("ideal reduction requires hatted coordinates")
        if k == n + 1:
            return GradedElement.zero(self.desc)
        out = {}
        for exps, c in self.terms.items():
            if any(exps[j] > 0 for j in range(k - 1)):
                continue
            if int(c.numerator) % 2 == 0:
                continue
            out[exps] = _ONE
        return GradedElement(self.desc, out, validate=False)

    def filter_terms(self, predicate) -> "GradedElement":
        return GradedElement(
            self.desc,
            {e: c for e, c in self.terms.items() if predicate(e)},
            validate=False,
        )

    def even_vn_part(self) -> "GradedElement":
        n = self.desc.ngens
        return self.filter_terms(lambda e: e[n - 1] % 2 == 0)

    def odd_vn_part(self) -> "GradedElement":
        n = self.desc.ngens
        return self.filter_terms(lambda e: e[n - 1] % 2 == 1)

    def in_vhat_subring(self) -> bool:
        """Membership in Z_(2)[vhat_1, ..., vhat_n] inside the hatted ring."""
        if not self.desc.hatted:
            raise RingError("subring test requires hatted coordinates")
        n = self.desc.ngens
        step = vhat_n_exponent(n)
        for exps in self.terms:
            b = exps[n - 1]
            if step == 0:
                if b != 0:
                    return False
            elif b % step != 0 or b // step < 0:
                return False
        return True

    # -- serialization -----------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json(self) -> list:
        out = []
        for exps, c in self.sorted_terms():
            out.append(
                {
                    "exp": list(exps),
                    "coeff": {"num": str(c.numerator), "den": str(c.denominator)},
                }
            )
        return out

    @classmethod
    def from_json(cls, desc: RingDescriptor, data: list) -> "GradedElement":
        terms = {}
        for item in data:
            terms[tuple(item["exp"])] = rational(
                int(item["coeff"]["num"]), int(item["coeff"]["den"])
            )
        return cls(desc, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.desc.generator_names
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(exps):
                factors.append(str(c))
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e != 0:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


def hatted_descriptor(desc: RingDescriptor) -> RingDescriptor:
    return RingDescriptor(
        height=desc.height,
        hatted=True,
        rational_scalars=desc.rational_scalars,
        vn_inverted=True,
    )


def unhatted_ring(n: int, rational_scalars: bool = False, vn_inverted: bool = False) -> RingDescriptor:
    return RingDescriptor(n, hatted=False, rational_scalars=rational_scalars, vn_inverted=vn_inverted)


def hatted_ring(n: int, rational_scalars: bool = False) -> RingDescriptor:
    return RingDescriptor(n, hatted=True, rational_scalars=rational_scalars, vn_inverted=True)


def vhat(desc: RingDescriptor, k: int) -> GradedElement:
    """The permanent-cycle generator vhat_k, 1 <= k <= n, in hatted coordinates.

    For k = n this is the pure v_n power vn^{1-(2^n-1)^2}, a unit.
    """
    if not desc.hatted:
        raise RingError("vhat generators live in the hatted ring")
    n = desc.ngens
    if not 1 <= k <= n:
        raise RingError(f"vhat_{k} undefined at height {n}")
    exps = [0] * n
    if k < n:
        exps[k - 1] = 1
    else:
        exps[n - 1] = vhat_n_exponent(n)
    return GradedElement(desc, {tuple(exps): _ONE}, validate=False)


def vn_power(desc: RingDescriptor, e: int) -> GradedElement:
    if not desc.vn_allows_negative() and e < 0:
        raise BadExponent("v_n is not invertible in this ring")
    exps = [0] * desc.ngens
    exps[desc.ngens - 1] = e
    return GradedElement(desc, {tuple(exps): _ONE}, validate=False)


def to_two_local(elem: GradedElement) -> GradedElement:
    """Reinterpret a rational-scalar element over Z_(2); certifies integrality."""
    if not elem.desc.rational_scalars:
        return elem
    desc = RingDescriptor(
        elem.desc.height,
        hatted=elem.desc.hatted,
        rational_scalars=False,
        vn_inverted=elem.desc.vn_inverted,
    )
    for exps, c in elem.terms.items():
        if int(c.denominator) % 2 == 0:
            raise IntegralityFailure(
                f"coefficient {c} at exponent {exps} is not 2-integral"
            )
    return GradedElement(desc, dict(elem.terms), validate=False)


def to_rational_scalars(elem: GradedElement) -> GradedElement:
    desc = RingDescriptor(
        elem.desc.height,
        hatted=elem.desc.hatted,
        rational_scalars=True,
        vn_inverted=elem.desc.vn_inverted,
    )
    return GradedElement(desc, dict(elem.terms), validate=False)
