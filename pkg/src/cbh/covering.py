"""Covering descriptors of GL_r: forms, the lattices Y_{Q,n}, fundamental pairs and
unramified characters on sublattices of the coweight lattice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence, Tuple

from . import rootdata as rd
from .coeffring import FORMAL, RingElement, conjugate
from .lattice import (
    LatticeBasis,
    QuotientStructure,
    contains,
    coordinates,
    hnf_basis,
    quotient,
    scaled_lattice,
)

Coweight = Tuple[int, ...]


def coroot_value(p: int, q: int) -> int:
    """Q(alpha^vee) = 2p - q."""
    return 2 * p - q


def n_alpha(n: int, p: int, q: int) -> int:
    return n // gcd(n, coroot_value(p, q))


def build_yqn(r: int, n: int, p: int, q: int) -> LatticeBasis:
    """Y_{Q,n}: coweights k with Q(alpha^vee) k_j + q sum(k) = 0 mod n for every j.

    Computed as a kernel lattice: row-reduce [M | I] stacked on [n I | 0] and
    keep the identity block of the rows whose congruence block vanished.
    """
    if n < 1:
        raise ValueError("n must be positive")
    qc = coroot_value(p, q)
    # M e_i has entry qc*[i==j] + q in slot j
    stacked = []
    for i in range(r):
        image = [(qc if i == j else 0) + q for j in range(r)]
        unit = [1 if i == j else 0 for j in range(r)]
        stacked.append(image + unit)
    for i in range(r):
        stacked.append([n if i == j else 0 for j in range(r)] + [0] * r)
    full = hnf_basis(stacked, 2 * r)
    kernel = [row[r:] for row in full.rows if not any(row[:r])]
    return hnf_basis(kernel, r)


def build_yqn_sc(r: int, n: int, p: int, q: int) -> LatticeBasis:
    na = n_alpha(n, p, q)
    gens = [tuple(na * ((j == i) - (j == i + 1)) for j in range(r)) for i in range(r - 1)]
    return hnf_basis(gens, r)


@dataclass(frozen=True)
class CoveringDescriptor:
    """The n-fold cover of GL_r attached to the form B(e_i,e_i) = 2p, B(e_i,e_j) = q."""

    r: int
    n: int
    p: int
    q: int
    yqn: LatticeBasis = field(init=False, repr=False, compare=False)
    yqn_sc: LatticeBasis = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r < 1 or self.n < 1:
            raise ValueError("need r >= 1 and n >= 1")
        object.__setattr__(self, "yqn", build_yqn(self.r, self.n, self.p, self.q))
        object.__setattr__(self, "yqn_sc", build_yqn_sc(self.r, self.n, self.p, self.q))

    @property
    def Q_coroot(self) -> int:
        return coroot_value(self.p, self.q)

    @property
    def n_alpha(self) -> int:
        return n_alpha(self.n, self.p, self.q)

    @property
    def quotient(self) -> QuotientStructure:
        return _quotient_cache(self)

    def with_rank(self, r: int) -> "CoveringDescriptor":
        return CoveringDescriptor(r, self.n, self.p, self.q)

    def is_n_alpha_lattice(self) -> bool:
        """Whether Y_{Q,n} = n_alpha * Y."""
        return self.yqn == scaled_lattice(self.r, self.n_alpha)


_QUOTIENTS = {}


def _quotient_cache(d: CoveringDescriptor) -> QuotientStructure:
    key = (d.r, d.n, d.p, d.q)
    if key not in _QUOTIENTS:
        _QUOTIENTS[key] = quotient(d.r, d.yqn)
    return _QUOTIENTS[key]


def q_value(d: CoveringDescriptor, y: Sequence[int]) -> int:
    """Q(y) = p sum y_i^2 + q sum_{i<j} y_i y_j."""
    s = sum(y)
    sq = sum(a * a for a in y)
    # sum_{i<j} y_i y_j = (s^2 - sq)/2
    return d.p * sq + d.q * (s * s - sq) // 2


def bilinear(d: CoveringDescriptor, y: Sequence[int], z: Sequence[int]) -> int:
    """B_Q(y, z) = Q(y+z) - Q(y) - Q(z)."""
    dot = sum(a * b for a, b in zip(y, z))
    return 2 * d.p * dot + d.q * (sum(y) * sum(z) - dot)


def bisector(d: CoveringDescriptor, y: Sequence[int], z: Sequence[int]) -> int:
    """D(y, z) with D(e_i,e_j) = 0 (i<j), p (i=j), q (i>j)."""
    total = d.p * sum(a * b for a, b in zip(y, z))
    run = 0
    # sum over i > j of y_i z_j
    for i in range(len(y)):
        total += d.q * y[i] * run
        run += z[i]
    return total


PI_PI = 1  # (pi, pi)_n under the standing hypothesis mu_{2n} in F^x


def torus_cocycle(d: CoveringDescriptor, y: Sequence[int], z: Sequence[int]) -> int:
    """The root of unity (pi, pi)_n^{D(y,z)} in s_y s_z = (pi,pi)_n^{D(y,z)} s_{y+z}.

    With mu_{2n} inside the base field, (pi, pi)_n = (pi, -1)_n = 1, so the value
    is 1 whatever the exponent.  Returned as an integer for auditing.
    """
    exponent = bisector(d, y, z)
    return PI_PI if exponent % 2 else 1


def fits_fundamental_pair(r: int, n: int, p: int, q: int) -> Optional[int]:
    """R = n_alpha when (GL_r, GL_R) is a fundamental pair, else None."""
    na = n_alpha(n, p, q)
    if na > r and (q * na) % n == 0:
        big = build_yqn(na, n, p, q)
        assert big == scaled_lattice(na, na), "fundamental-pair lattice check failed"
        return na
    return None


def fundamental_pair_oracle(r: int, n: int, p: int, q: int) -> Optional[int]:
    """Direct lattice test: n_alpha > r and Y_{Q,n} at rank n_alpha equals n_alpha Z^{n_alpha}."""
    na = n_alpha(n, p, q)
    if na <= r:
        return None
    return na if build_yqn(na, n, p, q) == scaled_lattice(na, na) else None


@dataclass(frozen=True)
class UnramifiedCharacter:
    """A multiplicative character on a sublattice, stored by its values on the basis rows."""

    domain: LatticeBasis
    values: Tuple
    conjugated: bool = False

    def __call__(self, y: Sequence[int]):
        return char_eval(self, y)

    @property
    def rank(self) -> int:
        return self.domain.dim


def char_eval(chi: UnramifiedCharacter, y: Sequence[int]):
    coords = coordinates(chi.domain, y)
    if coords is None:
        raise ValueError("not in character domain")
    out = chi.values[0] ** 0 if chi.values else RingElement.const(1)
    for v, c in zip(chi.values, coords):
        if c:
            out = out * v ** c
    return out


def exceptional_character(d: CoveringDescriptor, nu_var: str, conjugated: bool = False,
                          scalars=FORMAL) -> UnramifiedCharacter:
    """The exceptional character on n_alpha Y: n_alpha e_i -> u^{-(r+1-2i)} v, v = q^{-nu}."""
    na = d.n_alpha
    if (d.p * na) % d.n:
        raise ValueError("splitting hypothesis violated")
    tr = rd.two_rho(d.r)
    values = tuple(scalars.u_power(-t) * scalars.var(nu_var) for t in tr)
    return UnramifiedCharacter(scaled_lattice(d.r, na), values, conjugated)


def char_from_values(domain: LatticeBasis, values: Sequence, conjugated: bool = False) -> UnramifiedCharacter:
    if len(values) != domain.rank:
        raise ValueError("one value per basis row required")
    return UnramifiedCharacter(domain, tuple(values), conjugated)


def char_weyl_twist(chi: UnramifiedCharacter, w: rd.Perm) -> UnramifiedCharacter:
    """(^w chi)(s_y) = chi(s_{w^{-1}(y)})."""
    wi = rd.inverse(w)
    values = []
    for row in chi.domain.rows:
        moved = rd.act(wi, row)
        if not contains(chi.domain, moved):
            raise ValueError("character domain is not Weyl-stable")
        values.append(char_eval(chi, moved))
    return UnramifiedCharacter(chi.domain, tuple(values), chi.conjugated)


def char_conjugate(chi: UnramifiedCharacter, pairing) -> UnramifiedCharacter:
    values = tuple(conjugate(v, pairing) for v in chi.values)
    return UnramifiedCharacter(chi.domain, values, not chi.conjugated)


def char_specialize(chi: UnramifiedCharacter, s) -> UnramifiedCharacter:
    return UnramifiedCharacter(chi.domain, tuple(s.value(v) for v in chi.values), chi.conjugated)


def coroot_character_value(chi: UnramifiedCharacter, d: CoveringDescriptor, i: int, j: Optional[int] = None):
    """chi_alpha = chi(s_{n_alpha (e_i - e_j)}) for the coroot e_i - e_j (default j = i+1, 1-based)."""
    if j is None:
        j = i + 1
    y = [0] * d.r
    y[i - 1] += d.n_alpha
    y[j - 1] -= d.n_alpha
    return char_eval(chi, y)


def delta_half(y: Sequence[int], scalars=FORMAL):
    """delta_B^{1/2}(s_y) = u^{-sum y_i (r+1-2i)}."""
    r = len(y)
    tr = rd.two_rho(r)
    return scalars.u_power(-sum(a * b for a, b in zip(y, tr)))
