"""Exact coefficients: Laurent monomials in u = q^(1/2) and named variables, with
formal Gauss symbols g(c), c in (Z/n) minus 0, subject to g(c) g(n-c) = u^-2.

Also truncated power series in T = q^(-s) and exact specialization to the
rationals, used for identity testing at random sample points.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

Rational = Union[int, Fraction]
VarPart = Tuple[Tuple[str, int], ...]
GaussPart = Tuple[Tuple[int, int], ...]
Monomial = Tuple[int, VarPart, GaussPart]

ONE_MONO: Monomial = (0, (), ())


class BadSample(ValueError):
    """A specialization hit a zero where a unit was needed; draw another sample."""


def _merge(a: Iterable[Tuple], b: Iterable[Tuple]) -> Dict:
    out = dict(a)
    for k, e in b:
        out[k] = out.get(k, 0) + e
    return out


def _reduce_gauss(gauss: Dict[int, int], n: Optional[int]) -> Tuple[int, GaussPart]:
    """Cancel pairs g(c) g(n-c) into u^-2; returns (u shift, reduced gauss part)."""
    gauss = {c: e for c, e in gauss.items() if e}
    if not gauss:
        return 0, ()
    if n is None:
        raise ValueError("gauss symbols need a modulus")
    shift = 0
    for c in sorted(gauss):
        e = gauss.get(c, 0)
        if not e:
            continue
        d = n - c
        if d == c:
            pairs = e // 2
            gauss[c] = e - 2 * pairs
            shift -= 2 * pairs
        elif d in gauss and gauss[d]:
            m = min(e, gauss[d])
            gauss[c] -= m
            gauss[d] -= m
            shift -= 2 * m
    return shift, tuple(sorted((c, e) for c, e in gauss.items() if e))


@lru_cache(maxsize=1 << 16)
def _mono_mul(a: Monomial, b: Monomial, n: Optional[int]) -> Monomial:
    if b == ONE_MONO:
        return a
    if a == ONE_MONO:
        return b
    vars_ = tuple(sorted((k, e) for k, e in _merge(a[1], b[1]).items() if e))
    if a[2] and b[2]:
        shift, gauss = _reduce_gauss(_merge(a[2], b[2]), n)
    else:
        shift, gauss = 0, a[2] or b[2]
    return (a[0] + b[0] + shift, vars_, gauss)


def _common_n(x: Optional[int], y: Optional[int]) -> Optional[int]:
    if x is None:
        return y
    if y is None or x == y:
        return x
    raise ValueError(f"gauss moduli differ: {x} vs {y}")


class RingElement:
    """A finite Q-linear combination of reduced monomials.

    `n` is the Gauss-symbol modulus, or None while no symbol has been seen.
    """

    __slots__ = ("terms", "n")

    def __init__(self, terms: Optional[Mapping[Monomial, Rational]] = None, n: Optional[int] = None):
        self.terms: Dict[Monomial, Fraction] = {
            m: Fraction(c) for m, c in (terms or {}).items() if c
        }
        self.n = n

    # constructors
    @classmethod
    def const(cls, c: Rational) -> "RingElement":
        return cls({ONE_MONO: c})

    @classmethod
    def u(cls, k: int = 1) -> "RingElement":
        return cls({(k, (), ()): 1})

    @classmethod
    def var(cls, name: str, k: int = 1) -> "RingElement":
        return cls({(0, ((name, k),) if k else (), ()): 1})

    @classmethod
    def g(cls, n: int, c: int) -> "RingElement":
        c %= n
        if not c:
            raise ValueError("g(0) is not a unit symbol; use gauss_symbol")
        return cls({(0, (), ((c, 1),)): 1}, n)

    # arithmetic
    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            return other
        if isinstance(other, (int, Fraction)):
            return RingElement.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return RingElement(terms, _common_n(self.n, other.n))

    __radd__ = __add__

    def __neg__(self):
        return RingElement({m: -c for m, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = _common_n(self.n, other.n)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2, n)
                terms[m] = terms.get(m, 0) + c1 * c2
        return RingElement(terms, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        out = RingElement.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def single_term(self) -> Tuple[Monomial, Fraction]:
        if len(self.terms) != 1:
            raise ValueError("non-invertible element")
        return next(iter(self.terms.items()))

    def variables(self) -> frozenset:
        return frozenset(k for m in self.terms for k, _ in m[1])

    def __repr__(self):
        return f"RingElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            body = _mono_str(m)
            if not body:
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", text))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


def _mono_sort_key(m: Monomial):
    return (m[2], m[1], m[0])


def _mono_str(m: Monomial) -> str:
    u, vars_, gauss = m
    bits = []
    if u:
        bits.append("u" if u == 1 else f"u^{u}")
    for name, e in vars_:
        bits.append(name if e == 1 else f"{name}^{e}")
    for c, e in gauss:
        bits.append(f"g({c})" if e == 1 else f"g({c})^{e}")
    return "*".join(bits)


ZERO = RingElement()
ONE = RingElement.const(1)


def upow(k: int) -> RingElement:
    return RingElement.u(k)


def var(name: str, k: int = 1) -> RingElement:
    return RingElement.var(name, k)


def gauss_symbol(n: int, k: int) -> RingElement:
    """g(k mod n), or the scalar -u^-2 when n divides k."""
    if n < 1:
        raise ValueError("n must be positive")
    if k % n == 0:
        return RingElement({(-2, (), ()): -1})
    return RingElement.g(n, k)


def invert(x: RingElement) -> RingElement:
    (u, vars_, gauss), c = x.single_term()
    inv = RingElement({(-u, tuple((k, -e) for k, e in vars_), ()): 1 / c})
    n = x.n
    for g, e in gauss:
        # g(c)^-1 = u^2 g(n-c)
        inv = inv * (RingElement.u(2) * RingElement.g(n, n - g)) ** e
    return inv


def conjugate(x: RingElement, pairing: Mapping[str, str]) -> RingElement:
    """Complex conjugation: u and rationals fixed, g(c) -> g(n-c), variables swapped by `pairing`."""
    terms = {}
    for (u, vars_, gauss), c in x.terms.items():
        try:
            nv = tuple(sorted((pairing[k], e) for k, e in vars_))
        except KeyError as exc:
            raise ValueError(f"no conjugate declared for variable {exc.args[0]}") from None
        ng = tuple(sorted(((x.n - g) if g * 2 != x.n else g, e) for g, e in gauss))
        m = (u, nv, ng)
        terms[m] = terms.get(m, 0) + c
    return RingElement(terms, x.n)


def modulus(x: RingElement) -> RingElement:
    """Absolute value of a monomial in u and Gauss symbols, using |g(c)| = u^-1."""
    (u, vars_, gauss), c = x.single_term()
    if vars_:
        raise ValueError("modulus is only defined on the subring generated by u and g")
    return RingElement({(u - sum(e for _, e in gauss), (), ()): abs(c)})


def symmetric_pairing(names: Iterable[str]) -> Dict[str, str]:
    return {k: k for k in names}


class FormalScalars:
    """Scalar constructors producing RingElements."""

    formal = True

    def const(self, c: Rational) -> RingElement:
        return RingElement.const(c)

    def u_power(self, k: int) -> RingElement:
        return RingElement.u(k)

    def gauss(self, n: int, k: int) -> RingElement:
        return gauss_symbol(n, k)

    def var(self, name: str, k: int = 1) -> RingElement:
        return RingElement.var(name, k)

    def lift(self, x: RingElement) -> RingElement:
        return x


FORMAL = FormalScalars()


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x <= 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


class Specialization:
    """A ring homomorphism to Q.

    `q_value` is the image of u^2; odd powers of u need q_value to be a rational
    square.  Gauss symbols are given on a transversal of c <-> n-c and the
    partner is forced to 1/(q g(c)); a self-paired g(n/2) defaults to 1/u.
    """

    formal = False

    def __init__(self, q_value: Rational, variables: Optional[Mapping[str, Rational]] = None,
                 gauss: Optional[Mapping[int, Rational]] = None, n: Optional[int] = None):
        self.q_value = Fraction(q_value)
        if not self.q_value:
            raise BadSample("bad sample, resample")
        self.u_value = _rational_sqrt(self.q_value)
        self.variables = {k: Fraction(v) for k, v in (variables or {}).items()}
        if any(not v for v in self.variables.values()):
            raise BadSample("bad sample, resample")
        self.n = n
        self._gauss: Dict[int, Fraction] = {}
        for c, v in (gauss or {}).items():
            v = Fraction(v)
            if not v:
                raise BadSample("bad sample, resample")
            self._gauss[c % n] = v
            partner = (n - c) % n
            if partner != c % n:
                self._gauss[partner] = 1 / (self.q_value * v)
            elif v * v * self.q_value != 1:
                raise ValueError(f"g({c}) must square to 1/q")
        if n is not None and n % 2 == 0 and n // 2 not in self._gauss and self.u_value is not None:
            self._gauss[n // 2] = 1 / self.u_value

    # scalar constructors, mirroring FormalScalars
    def const(self, c: Rational) -> Fraction:
        return Fraction(c)

    def u_power(self, k: int) -> Fraction:
        if k % 2:
            if self.u_value is None:
                raise ValueError("needs square sample")
            return self.u_value ** k
        return self.q_value ** (k // 2)

    def gauss(self, n: int, k: int) -> Fraction:
        if k % n == 0:
            return -1 / self.q_value
        return self._gauss_value(k % n)

    def var(self, name: str, k: int = 1) -> Fraction:
        try:
            return self.variables[name] ** k
        except KeyError:
            raise ValueError(f"uncovered variable {name}") from None

    def _gauss_value(self, c: int) -> Fraction:
        try:
            return self._gauss[c]
        except KeyError:
            raise ValueError(f"uncovered symbol g({c})") from None

    def lift(self, x: RingElement) -> Fraction:
        return self.value(x)

    def value(self, x: RingElement) -> Fraction:
        if x.n is not None and self.n is not None and x.n != self.n:
            raise ValueError("gauss modulus mismatch")
        total = Fraction(0)
        for (u, vars_, gauss), c in x.terms.items():
            t = c * self.u_power(u)
            for name, e in vars_:
                t *= self.var(name, e)
            for g, e in gauss:
                t *= self._gauss_value(g) ** e
            total += t
        return total

    def series(self, s: "TruncatedSeries") -> "TruncatedSeries":
        return TruncatedSeries([self.value(c) if isinstance(c, RingElement) else Fraction(c)
                                for c in s.coeffs])


def specialize(x, s: Specialization):
    if isinstance(x, TruncatedSeries):
        return s.series(x)
    return s.value(x)


class TruncatedSeries:
    """A power series in T known up to T^order; coefficients are RingElements or rationals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, order: int, zero=ZERO) -> "TruncatedSeries":
        return cls([zero] * (order + 1))

    @classmethod
    def monomial(cls, coeff, exp: int, order: int) -> "TruncatedSeries":
        zero = coeff * 0
        return cls([coeff if k == exp else zero for k in range(order + 1)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def _check(self, other: "TruncatedSeries"):
        if other.order != self.order:
            raise ValueError("truncation orders differ")

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs])

    def scalar_mul(self, c) -> "TruncatedSeries":
        return TruncatedSeries([c * a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scalar_mul(other)
        self._check(other)
        N = self.order
        out = [self.coeffs[0] * 0] * (N + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(N + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(out)

    __rmul__ = scalar_mul

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def first_mismatch(self, other: "TruncatedSeries") -> Optional[int]:
        self._check(other)
        for k, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return k
        return None

    def support(self):
        return [k for k, c in enumerate(self.coeffs) if c]

    def __repr__(self):
        terms = [f"({c})*T^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) + f" + O(T^{self.order + 1})" if terms else f"O(T^{self.order + 1})"


def geometric(z, step: int, order: int) -> TruncatedSeries:
    """sum_{k >= 0, k*step <= order} z^k T^(k*step), the expansion of 1/(1 - z T^step)."""
    if step < 1:
        raise ValueError("step must be positive")
    if isinstance(z, (int, Fraction)) and not isinstance(z, bool):
        z = Fraction(z)
    one = z ** 0
    out = [z * 0] * (order + 1)
    power = one
    for k in range(0, order + 1, step):
        out[k] = power
        power = power * z
    return TruncatedSeries(out)


def series_product(factors: Sequence[TruncatedSeries]) -> TruncatedSeries:
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out
