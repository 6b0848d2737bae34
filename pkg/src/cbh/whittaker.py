"""Whittaker data for covers of GL_r: twisted orbits on Y/Y_{Q,n}, t-values and
theta coefficient functions, local coefficient matrices, Gindikin-Karpelevich
factors and values of Whittaker functions.

Every routine that builds scalars takes a `scalars` argument: FORMAL gives
RingElements, a Specialization gives exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from . import rootdata as rd
from .coeffring import FORMAL, BadSample, RingElement, invert
from .covering import (
    CoveringDescriptor,
    UnramifiedCharacter,
    char_eval,
    char_weyl_twist,
    coroot_character_value,
    delta_half,
)
from .lattice import sub

Coweight = Tuple[int, ...]


class PoleError(ValueError):
    pass


def _inv(x):
    return invert(x) if isinstance(x, RingElement) else 1 / x


def _is_zero(x) -> bool:
    return not x


# orbits

@dataclass(frozen=True)
class OrbitClass:
    representative: Coweight
    size: int
    free: bool
    members: Tuple[Coweight, ...] = ()


def orbit_classes(d: CoveringDescriptor) -> List[OrbitClass]:
    """Partition Y/Y_{Q,n} into orbits of the twisted Weyl action.

    Orbits are the connected components of the graph whose edges are the simple
    reflections acting on quotient representatives.
    """
    qs = d.quotient
    reps = qs.representatives
    moves = []
    for i in range(1, d.r):
        moves.append([qs.index(rd.simple_twisted(i, y)) for y in reps])
    seen = [False] * len(reps)
    out = []
    full = factorial(d.r)
    for start in range(len(reps)):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        stack = [start]
        while stack:
            k = stack.pop()
            for mv in moves:
                j = mv[k]
                if not seen[j]:
                    seen[j] = True
                    comp.append(j)
                    stack.append(j)
        comp.sort()
        members = tuple(reps[k] for k in comp)
        out.append(OrbitClass(members[0], len(members), len(members) == full, members))
    return out


def free_orbit_classes(d: CoveringDescriptor) -> List[OrbitClass]:
    return [o for o in orbit_classes(d) if o.free]


def dim_whittaker_theta(d: CoveringDescriptor) -> int:
    """dim Wh(Theta) = number of free orbit classes."""
    dim = len(free_orbit_classes(d))
    if d.is_n_alpha_lattice():
        assert dim == comb(d.n_alpha, d.r), "binomial dimension formula failed"
    return dim


def orbit_class_of(d: CoveringDescriptor, y: Sequence[int]) -> OrbitClass:
    """The orbit class through y, found by a search from y alone."""
    qs = d.quotient
    start = qs.reduce(y)
    seen = {start}
    stack = [start]
    while stack:
        z = stack.pop()
        for i in range(1, d.r):
            nxt = qs.reduce(rd.simple_twisted(i, z))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    members = tuple(sorted(seen, key=qs.index))
    return OrbitClass(members[0], len(members), len(members) == factorial(d.r), members)


# t-values and theta coefficient functions

def t_value(d: CoveringDescriptor, i: int, y: Sequence[int], scalars=FORMAL):
    """t(w_alpha_i, y) = q^{k-1} g((<y,alpha>-1) Q(alpha^vee))^{-1}, k = ceil(<y,alpha>/n_alpha)."""
    pa = rd.pairing(y, i)
    k = -((-pa) // d.n_alpha)
    return scalars.u_power(2 * (k - 1)) * _inv(scalars.gauss(d.n, (pa - 1) * d.Q_coroot))


def t_word(d: CoveringDescriptor, word: Sequence[int], y: Sequence[int], scalars=FORMAL):
    """Product of t-values along a word, its last letter acting first."""
    val = scalars.const(1)
    cur = tuple(y)
    for i in reversed(word):
        val = val * t_value(d, i, cur, scalars)
        cur = rd.twisted_act(rd.simple(i, d.r), cur)
    return val


class CoefficientFunction:
    """The theta coefficient function c_{O_y} on torus elements s_z.

    c(s_{w[y]}) = t(w, y); off these points it is extended by the character
    on Y_{Q,n}-translates and by zero off the orbit.
    """

    def __init__(self, d: CoveringDescriptor, orbit: OrbitClass, chi: UnramifiedCharacter,
                 scalars=FORMAL, base: Optional[Sequence[int]] = None):
        if not orbit.free:
            raise ValueError("orbit is not free")
        self.d = d
        self.orbit = orbit
        self.chi = chi
        self.scalars = scalars
        self.base = tuple(base) if base is not None else orbit.representative
        qs = d.quotient
        self.table: Dict[Coweight, Tuple[Coweight, object, rd.Perm]] = {}
        for w in rd.weyl_group(d.r):
            point = rd.twisted_act(w, self.base)
            rep = qs.reduce(point)
            assert rep not in self.table, "orbit is not free"
            self.table[rep] = (point, t_word(d, rd.reduced_word(w), self.base, scalars), w)

    @property
    def values(self) -> Dict[Coweight, object]:
        """Values on quotient representatives."""
        return {rep: self(rep) for rep in self.table}

    def __call__(self, z: Sequence[int]):
        hit = self.table.get(self.d.quotient.reduce(z))
        if hit is None:
            return self.scalars.const(0)
        point, val, _ = hit
        return val * char_eval(self.chi, sub(z, point))

    def at_orbit_point(self, w: rd.Perm):
        """c(s_{w[y]}) for the base point y."""
        return self(rd.twisted_act(w, self.base))

    def weyl_element(self, z: Sequence[int]) -> Optional[rd.Perm]:
        hit = self.table.get(self.d.quotient.reduce(z))
        return None if hit is None else hit[2]


def coefficient_function(d: CoveringDescriptor, orbit: OrbitClass, chi: UnramifiedCharacter,
                         scalars=FORMAL) -> CoefficientFunction:
    return CoefficientFunction(d, orbit, chi, scalars)


def theta_coefficient(d: CoveringDescriptor, chi: UnramifiedCharacter, scalars=FORMAL) -> CoefficientFunction:
    """c_{O_0}, the coefficient function of the orbit of 0."""
    return CoefficientFunction(d, orbit_class_of(d, (0,) * d.r), chi, scalars, base=(0,) * d.r)


def whittaker_theta_value(d: CoveringDescriptor, c: CoefficientFunction, y: Sequence[int], scalars=FORMAL):
    """W_c(s_y)/W_c(1) = delta^{1/2}(s_y) c(s_{w0(y)}) for dominant y, else 0."""
    if not rd.is_dominant(y):
        return scalars.const(0)
    return delta_half(y, scalars) * c(rd.hat_coweight(y))


# Gindikin-Karpelevich factors and local coefficient matrices

@dataclass(frozen=True)
class Ratio:
    """num/den kept unreduced; equality is tested by cross-multiplication."""

    num: object
    den: object

    def __add__(self, other: "Ratio") -> "Ratio":
        if self.den == other.den:
            return Ratio(self.num + other.num, self.den)
        return Ratio(self.num * other.den + other.num * self.den, self.den * other.den)

    def __mul__(self, other):
        if isinstance(other, Ratio):
            return Ratio(self.num * other.num, self.den * other.den)
        return Ratio(self.num * other, self.den)

    __rmul__ = __mul__

    def same_as(self, other: "Ratio") -> bool:
        return self.num * other.den == other.num * self.den

    def value(self):
        if _is_zero(self.den):
            raise BadSample("bad sample, resample")
        return Fraction(self.num) / Fraction(self.den)


def _check_den(den, scalars):
    if _is_zero(den):
        if getattr(scalars, "formal", True):
            raise PoleError("pole")
        raise BadSample("bad sample, resample")


def cgk_root(chi: UnramifiedCharacter, d: CoveringDescriptor, i: int, j: int, scalars=FORMAL) -> Ratio:
    """c_gk(w_alpha, chi) = (1 - q^{-1} chi_alpha)/(1 - chi_alpha) for alpha^vee = e_i - e_j."""
    ca = coroot_character_value(chi, d, i, j)
    den = scalars.const(1) - ca
    _check_den(den, scalars)
    return Ratio(scalars.const(1) - scalars.u_power(-2) * ca, den)


def inversion_set(w: rd.Perm) -> List[Tuple[int, int]]:
    """Positive roots e_i - e_j (1-based, i<j) sent negative by w."""
    r = len(w)
    return [(i + 1, j + 1) for i in range(r) for j in range(i + 1, r) if w[i] > w[j]]


def cgk(chi: UnramifiedCharacter, d: CoveringDescriptor, w: rd.Perm, scalars=FORMAL) -> Ratio:
    out = Ratio(scalars.const(1), scalars.const(1))
    for i, j in inversion_set(w):
        out = out * cgk_root(chi, d, i, j, scalars)
    return out


class SlcmMatrix:
    """Sparse matrix over quotient representatives with one shared denominator."""

    def __init__(self, entries: Dict[Tuple[Coweight, Coweight], object], den):
        self.entries = {k: v for k, v in entries.items() if not _is_zero(v)}
        self.den = den

    @classmethod
    def identity(cls, reps: Sequence[Coweight], scalars=FORMAL) -> "SlcmMatrix":
        one = scalars.const(1)
        return cls({(y, y): one for y in reps}, one)

    def __matmul__(self, other: "SlcmMatrix") -> "SlcmMatrix":
        by_row: Dict[Coweight, List[Tuple[Coweight, object]]] = {}
        for (j, k), v in other.entries.items():
            by_row.setdefault(j, []).append((k, v))
        out: Dict[Tuple[Coweight, Coweight], object] = {}
        for (i, j), a in self.entries.items():
            for k, b in by_row.get(j, ()):
                out[(i, k)] = out.get((i, k), 0) + a * b
        return SlcmMatrix(out, self.den * other.den)

    def numerator(self, row: Coweight, col: Coweight):
        return self.entries.get((row, col), 0)

    def ratio(self, row: Coweight, col: Coweight) -> Ratio:
        return Ratio(self.numerator(row, col), self.den)

    def row(self, row: Coweight) -> Dict[Coweight, object]:
        return {k[1]: v for k, v in self.entries.items() if k[0] == row}

    def column(self, col: Coweight) -> Dict[Coweight, object]:
        return {k[0]: v for k, v in self.entries.items() if k[1] == col}


def slcm_simple(d: CoveringDescriptor, chi: UnramifiedCharacter, i: int, scalars=FORMAL) -> SlcmMatrix:
    """tau(chi, w_alpha_i, s_y1, s_y) over quotient representatives (rows y1, columns y).

    chi is the character of the source principal series; rows carry the twisted
    character ^{w_alpha} chi.
    """
    qs = d.quotient
    ca = coroot_character_value(chi, d, i)
    den = scalars.const(1) - ca
    _check_den(den, scalars)
    target = char_weyl_twist(chi, rd.simple(i, d.r))
    s = rd.simple(i, d.r)
    one_minus_qinv = scalars.const(1) - scalars.u_power(-2)
    entries: Dict[Tuple[Coweight, Coweight], object] = {}
    for y in qs.representatives:
        pa = rd.pairing(y, i)
        k = -((-pa) // d.n_alpha)
        tau1 = one_minus_qinv * ca ** k
        entries[(y, y)] = entries.get((y, y), 0) + tau1
        y1 = rd.twisted_act(s, y)
        rep = qs.reduce(y1)
        shift = _inv(char_eval(target, sub(rep, y1)))
        tau2 = shift * scalars.gauss(d.n, (pa - 1) * d.Q_coroot) * den
        entries[(rep, y)] = entries.get((rep, y), 0) + tau2
    return SlcmMatrix(entries, den)


def slcm_word(d: CoveringDescriptor, chi: UnramifiedCharacter, word: Sequence[int],
              scalars=FORMAL) -> SlcmMatrix:
    """tau(chi, w) for w = s_{i1} ... s_{ik}, composed by the cocycle relation."""
    m = SlcmMatrix.identity(d.quotient.representatives, scalars)
    cur = chi
    for i in reversed(word):
        m = slcm_simple(d, cur, i, scalars) @ m
        cur = char_weyl_twist(cur, rd.simple(i, d.r))
    return m


def slcm_entry(d: CoveringDescriptor, m: SlcmMatrix, source: UnramifiedCharacter,
               target: UnramifiedCharacter, g: Sequence[int], h: Sequence[int]) -> Ratio:
    """tau(s_g, s_h) for arbitrary coweights, via equivariance in both slots."""
    qs = d.quotient
    rg, rh = qs.reduce(g), qs.reduce(h)
    num = m.numerator(rg, rh)
    if _is_zero(num):
        return Ratio(num, m.den)
    num = _inv(char_eval(target, sub(g, rg))) * num * char_eval(source, sub(h, rh))
    return Ratio(num, m.den)


class PrincipalSeriesWhittaker:
    """Values W_gamma(s_y) of the unramified principal series with character chi.

    Sums c_gk(w0 w^{-1}, chi) tau(^{w^{-1}} chi, w, gamma, s_{w0(y)}) over the Weyl group.
    """

    def __init__(self, d: CoveringDescriptor, chi: UnramifiedCharacter, scalars=FORMAL):
        self.d = d
        self.chi = chi
        self.scalars = scalars
        w0 = rd.longest(d.r)
        self.terms = []
        for w in rd.weyl_group(d.r):
            wi = rd.inverse(w)
            source = char_weyl_twist(chi, wi)
            c = cgk(chi, d, rd.compose(w0, wi), scalars)
            m = slcm_word(d, source, rd.reduced_word(w), scalars)
            self.terms.append((c, m, source, char_weyl_twist(source, w)))

    def value(self, gamma: Sequence[int], y: Sequence[int], with_delta: bool = False,
              dominant_only: bool = True) -> Ratio:
        """W_gamma(s_y); with dominant_only=False the Weyl-sum formula is evaluated as is."""
        if dominant_only and not rd.is_dominant(y):
            return Ratio(self.scalars.const(0), self.scalars.const(1))
        target_col = rd.hat_coweight(y)
        total = None
        for c, m, source, target in self.terms:
            term = c * slcm_entry(self.d, m, source, target, gamma, target_col)
            total = term if total is None else total + term
        if with_delta:
            total = total * delta_half(y, self.scalars)
        return total


def whittaker_ps_value(d: CoveringDescriptor, chi: UnramifiedCharacter, gamma: Sequence[int],
                       y: Sequence[int], scalars=FORMAL, with_delta: bool = True) -> Ratio:
    return PrincipalSeriesWhittaker(d, chi, scalars).value(gamma, y, with_delta)


def theta_row_sums(d: CoveringDescriptor, chi: UnramifiedCharacter, i: int, scalars=FORMAL) -> Dict[Coweight, object]:
    """Numerators of sum_gamma c(gamma) tau(^{w_alpha^{-1}} chi, w_alpha, gamma, gamma') per column gamma'.

    They vanish for an exceptional chi with c = c_{O_0}.
    """
    c = theta_coefficient(d, chi, scalars)
    s = rd.simple(i, d.r)
    source = char_weyl_twist(chi, rd.inverse(s))
    m = slcm_simple(d, source, i, scalars)
    out: Dict[Coweight, object] = {}
    for (row, col), v in m.entries.items():
        cv = c(row)
        if not _is_zero(cv):
            out[col] = out.get(col, 0) + cv * v
    return {col: out.get(col, 0) for col in d.quotient.representatives}
