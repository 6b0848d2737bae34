"""Truncated Rankin-Selberg zeta series for fundamental pairs and their verifiers.

Series are in T = q^{-s}.  Formal variables:

* ``a``  = q^{-nu_r}, the exceptional character of the small group,
* ``b``  = q^{-conj(nu_R)}, appearing once the big group's character is conjugated
  (the big character itself is built on ``b~``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import rootdata as rd
from .coeffring import (
    FORMAL,
    ONE,
    BadSample,
    RingElement,
    Specialization,
    TruncatedSeries,
    conjugate,
    geometric,
    invert,
    series_product,
    upow,
    var,
)
from .covering import (
    CoveringDescriptor,
    UnramifiedCharacter,
    char_eval,
    char_from_values,
    exceptional_character,
    fits_fundamental_pair,
)
from .lattice import contains, scaled_lattice, sub
from .whittaker import PrincipalSeriesWhittaker, theta_coefficient

SMALL_VAR = "a"
BIG_VAR = "b~"
PAIRING = {"a": "a~", "a~": "a", "b": "b~", "b~": "b"}


@dataclass(frozen=True)
class Check:
    anchor: str
    status: str
    detail: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Report:
    command: str
    params: Dict[str, object]
    checks: List[Check] = field(default_factory=list)
    series: Dict[str, TruncatedSeries] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, anchor: str, ok: bool, detail: str) -> None:
        self.checks.append(Check(anchor, "pass" if ok else "fail", detail))


# fundamental pairs and supports

@dataclass(frozen=True)
class FundamentalPairInstance:
    small: CoveringDescriptor
    big: CoveringDescriptor

    @property
    def r(self) -> int:
        return self.small.r

    @property
    def R(self) -> int:
        return self.big.r

    @property
    def n_alpha(self) -> int:
        return self.small.n_alpha

    def phi(self, y: Sequence[int]) -> Tuple[int, ...]:
        return rd.pad(y, self.R)


def fundamental_pair(r: int, n: int, p: int, q: int) -> FundamentalPairInstance:
    R = fits_fundamental_pair(r, n, p, q)
    if R is None:
        raise ValueError(f"(r={r}, n={n}, p={p}, q={q}) is not part of a fundamental pair")
    small = CoveringDescriptor(r, n, p, q)
    if (p * small.n_alpha) % n:
        raise ValueError("splitting hypothesis violated")
    return FundamentalPairInstance(small, CoveringDescriptor(R, n, p, q))


def dominant_box(r: int, N: int) -> Iterator[Tuple[int, ...]]:
    """All y with y_1 >= ... >= y_r >= 0 and sum(y) <= N."""
    def rec(prefix, cap, budget, left):
        if left == 0:
            yield tuple(prefix)
            return
        for v in range(min(cap, budget), -1, -1):
            yield from rec(prefix + [v], v, budget - v, left - 1)
    yield from rec([], N, N, r)


def support_membership(inst: FundamentalPairInstance, w: rd.Perm, y: Sequence[int]) -> bool:
    """y is dominant with y_r >= 0 and hat(phi(y)) lies in hat(w)[0] + Y_{Q,n} of GL_R."""
    if not rd.is_dominant(y) or y[-1] < 0:
        return False
    z = rd.hat_coweight(inst.phi(y))
    return contains(inst.big.yqn, sub(z, rd.twisted_act(rd.hat(w), (0,) * inst.R)))


def z_w(inst: FundamentalPairInstance, w: rd.Perm) -> Tuple[int, ...]:
    out = [0] * inst.r
    for k in rd.descent_set(w):
        for i in range(k):
            out[i] += inst.n_alpha
    return tuple(out)


def y_w(inst: FundamentalPairInstance, w: rd.Perm) -> Tuple[int, ...]:
    """The minimal element -w[0] + z_w of the support attached to w."""
    base = rd.twisted_act(w, (0,) * inst.r)
    y = tuple(-a + b for a, b in zip(base, z_w(inst, w)))
    big_w = rd.embed(w, inst.R)
    assert support_membership(inst, big_w, y), "y_w outside its support set"
    for i in range(inst.r):
        lower = list(y)
        lower[i] -= inst.n_alpha
        assert not support_membership(inst, big_w, lower), "y_w is not minimal"
    return y


# exponent calculus

@dataclass(frozen=True)
class TauExponent:
    """tau = s_coeff * n_alpha s + const2/2 + nu * nu_r + nubar * conj(nu_R)."""

    n_alpha: int
    s_coeff: int
    const2: int
    nu: int
    nubar: int

    def __add__(self, other: "TauExponent") -> "TauExponent":
        return TauExponent(self.n_alpha, self.s_coeff + other.s_coeff, self.const2 + other.const2,
                           self.nu + other.nu, self.nubar + other.nubar)

    def scale(self, k: int) -> "TauExponent":
        return TauExponent(self.n_alpha, k * self.s_coeff, k * self.const2, k * self.nu, k * self.nubar)

    @property
    def t_degree(self) -> int:
        return self.n_alpha * self.s_coeff

    def coefficient(self) -> RingElement:
        """q^{-tau} with the T power stripped: u^{-const2} a^nu b^nubar."""
        return upow(-self.const2) * var(SMALL_VAR, self.nu) * var("b", self.nubar)

    def q_power(self, order: int) -> TruncatedSeries:
        return TruncatedSeries.monomial(self.coefficient(), self.t_degree, order) \
            if self.t_degree <= order else TruncatedSeries.zero(order)

    def __str__(self):
        return (f"{self.s_coeff}*n_alpha*s + {Fraction(self.const2, 2)} "
                f"+ {self.nu}*nu_r + {self.nubar}*nubar_R")


def tau(inst: FundamentalPairInstance, w: rd.Perm) -> TauExponent:
    """tau(w) = l(w) + sum_{k in I_w} k (n_alpha s - (R+r)/2 + nu_r + nubar_R + k)."""
    ks = rd.descent_set(w)
    s_coeff = sum(ks)
    const2 = 2 * rd.length(w) + sum(k * (2 * k - inst.R - inst.r) for k in ks)
    return TauExponent(inst.n_alpha, s_coeff, const2, s_coeff, s_coeff)


def tau_cycle(inst: FundamentalPairInstance, j: int) -> TauExponent:
    """tau(sigma_j) = n_alpha s - (R+r)/2 + nu_r + nubar_R + j, also used for j = 1."""
    return TauExponent(inst.n_alpha, 1, 2 * j - inst.R - inst.r, 1, 1)


# theta-theta series

class ThetaPair:
    """The two theta coefficient functions of a fundamental pair."""

    def __init__(self, inst: FundamentalPairInstance):
        self.inst = inst
        self.mu = exceptional_character(inst.small, SMALL_VAR)
        self.chi = exceptional_character(inst.big, BIG_VAR)
        self.c_small = theta_coefficient(inst.small, self.mu)
        self.c_big = theta_coefficient(inst.big, self.chi)

    def big_bar(self, y: Sequence[int]) -> RingElement:
        """conj(c^{GL_R}(s_{hat(phi(y))}))."""
        return conjugate(self.c_big(rd.hat_coweight(self.inst.phi(y))), PAIRING)

    def small_hat(self, y: Sequence[int]) -> RingElement:
        return self.c_small(rd.hat_coweight(y))

    def term(self, y: Sequence[int]) -> RingElement:
        big = self.big_bar(y)
        if not big:
            return big
        return big * self.small_hat(y)


def default_order(inst: FundamentalPairInstance) -> int:
    return 3 * inst.n_alpha


def zeta_theta_series(inst: FundamentalPairInstance, N: Optional[int] = None,
                      pair: Optional[ThetaPair] = None) -> TruncatedSeries:
    N = default_order(inst) if N is None else N
    pair = pair or ThetaPair(inst)
    coeffs = [RingElement() for _ in range(N + 1)]
    for y in dominant_box(inst.r, N):
        t = pair.term(y)
        if t:
            coeffs[sum(y)] = coeffs[sum(y)] + t
    return TruncatedSeries(coeffs)


def l_series(inst: FundamentalPairInstance, N: Optional[int] = None, tamper: bool = False) -> TruncatedSeries:
    """prod_i 1/(1 - a b u^{(R-1)-(r+1)+2i} T^{n_alpha}), truncated at T^N."""
    N = default_order(inst) if N is None else N
    factors = []
    for i in range(1, inst.r + 1):
        z = var(SMALL_VAR) * var("b") * upow(inst.R - 1 - (inst.r + 1) + 2 * i)
        if tamper and i == 1:
            z = z * upow(1)
        factors.append(geometric(z, inst.n_alpha, N))
    return series_product(factors)


def l_series_from_cycles(inst: FundamentalPairInstance, N: int) -> TruncatedSeries:
    """prod_{j=1}^r zeta(tau(sigma_j))."""
    return series_product([geometric(tau_cycle(inst, j).coefficient(), inst.n_alpha, N)
                           for j in range(1, inst.r + 1)])


def sum_w_degree(inst: FundamentalPairInstance) -> int:
    return inst.n_alpha * inst.r * (inst.r - 1) // 2


def sum_w_direct(inst: FundamentalPairInstance, pair: Optional[ThetaPair] = None) -> TruncatedSeries:
    """sum over W_r of the terms at the minimal support points y_w."""
    pair = pair or ThetaPair(inst)
    N = sum_w_degree(inst)
    total = TruncatedSeries.zero(N)
    for w in rd.weyl_group(inst.r):
        y = y_w(inst, w)
        total = total + TruncatedSeries.monomial(pair.term(y), sum(y), N)
    return total


def sum_w_tau(inst: FundamentalPairInstance) -> TruncatedSeries:
    N = sum_w_degree(inst)
    total = TruncatedSeries.zero(N)
    for w in rd.weyl_group(inst.r):
        total = total + tau(inst, w).q_power(N)
    return total


def sum_w_closed(inst: FundamentalPairInstance) -> TruncatedSeries:
    """prod_{j=2}^r zeta(tau(sigma_j)) / zeta(j tau(sigma_j)), a polynomial."""
    N = sum_w_degree(inst)
    out = TruncatedSeries.monomial(ONE, 0, N)
    for j in range(2, inst.r + 1):
        x = tau_cycle(inst, j)
        ratio = geometric(x.coefficient(), inst.n_alpha, N) * \
            (TruncatedSeries.monomial(ONE, 0, N) - x.scale(j).q_power(N))
        out = out * ratio
    return out


def sum_dagger_direct(inst: FundamentalPairInstance, N: int, pair: Optional[ThetaPair] = None) -> TruncatedSeries:
    """sum over y in n_alpha Y, dominant with y_r >= 0, of conj(chi)(hat phi y) mu(hat y) T^{sum y}."""
    pair = pair or ThetaPair(inst)
    chi_bar = lambda z: conjugate(char_eval(pair.chi, z), PAIRING)
    coeffs = [RingElement() for _ in range(N + 1)]
    na = inst.n_alpha
    for k in dominant_box(inst.r, N // na):
        y = tuple(na * x for x in k)
        val = chi_bar(rd.hat_coweight(inst.phi(y))) * char_eval(pair.mu, rd.hat_coweight(y))
        coeffs[sum(y)] = coeffs[sum(y)] + val
    return TruncatedSeries(coeffs)


def sum_dagger_closed(inst: FundamentalPairInstance, N: int) -> TruncatedSeries:
    """prod_{j=1}^r zeta(j tau(sigma_j))."""
    return series_product([geometric(tau_cycle(inst, j).scale(j).coefficient(), j * inst.n_alpha, N)
                           for j in range(1, inst.r + 1)])


def key2_factor(inst: FundamentalPairInstance, w: rd.Perm) -> RingElement:
    """prod_{k in I_w} q^{k((r+1)/2 - nu_r) - k(k+1)/2}."""
    out = ONE
    for k in rd.descent_set(w):
        out = out * upow(k * (inst.r + 1) - k * (k + 1)) * var(SMALL_VAR, k)
    return out


def _series_detail(a: TruncatedSeries, b: TruncatedSeries) -> Tuple[bool, str]:
    k = a.first_mismatch(b)
    if k is None:
        return True, f"equal through T^{a.order}"
    return False, f"first mismatch at T^{k}: {a[k]} vs {b[k]}"


def verify_theta(inst: FundamentalPairInstance, N: Optional[int] = None, tamper: bool = False) -> Report:
    """Check the theta-theta zeta series against the L-function side, coefficient by coefficient."""
    N = default_order(inst) if N is None else N
    rep = Report("verify-theta", {"r": inst.r, "R": inst.R, "n": inst.small.n,
                                  "p": inst.small.p, "q": inst.small.q, "trunc": N, "tamper": tamper})
    pair = ThetaPair(inst)
    zeta = zeta_theta_series(inst, N, pair)
    lside = l_series(inst, N, tamper)
    rep.series = {"zeta": zeta, "L": lside}
    ok, detail = _series_detail(zeta, lside)
    rep.add("theta-theta zeta integral equals L(n_alpha s - (R-1)/2, mu x conj(nu_R))", ok, detail)
    return rep


# rank two, generic principal series

def _rand_rational(rng: random.Random, bound: int = 1000) -> Fraction:
    while True:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        if num:
            return Fraction(num, den)


def draw_sample(rng: random.Random, n: int) -> Tuple[Specialization, Fraction, Fraction]:
    """A random exact specialization plus the two character values m1, m2."""
    while True:
        u = _rand_rational(rng)
        if abs(u) == 1:
            continue
        m1, m2 = _rand_rational(rng), _rand_rational(rng)
        if m1 == m2:
            continue
        gauss = {c: _rand_rational(rng) for c in range(1, (n + 1) // 2)}
        if n % 2 == 0:
            gauss[n // 2] = 1 / u
        try:
            spec = Specialization(u * u, {"b": _rand_rational(rng)}, gauss, n)
        except BadSample:
            continue
        spec.u_value = u
        return spec, m1, m2


class Rank2Sample:
    """Both sides of the rank-two identity at one exact specialization."""

    def __init__(self, inst: FundamentalPairInstance, spec: Specialization, m1: Fraction, m2: Fraction,
                 c_big=None):
        if inst.r != 2:
            raise ValueError("rank-two verifier needs r = 2")
        if not inst.small.is_n_alpha_lattice():
            raise ValueError("the generic character is parametrized on n_alpha Y = Y_{Q,n}")
        self.inst = inst
        self.spec = spec
        self.m = (m1, m2)
        self.mu = char_from_values(scaled_lattice(2, inst.n_alpha), (m1, m2))
        self.ps = PrincipalSeriesWhittaker(inst.small, self.mu, spec)
        if c_big is None:
            c_big = theta_coefficient(inst.big, exceptional_character(inst.big, BIG_VAR))
        self.c_big = c_big

    def w_value(self, gamma: Sequence[int], y: Sequence[int]) -> Fraction:
        return self.ps.value(gamma, y).value()

    def zeta(self, gamma: Sequence[int], N: int) -> TruncatedSeries:
        coeffs = [Fraction(0)] * (N + 1)
        for y in dominant_box(2, N):
            big = self.c_big(rd.hat_coweight(self.inst.phi(y)))
            if not big:
                continue
            big = self.spec.value(conjugate(big, PAIRING))
            coeffs[sum(y)] += self.w_value(gamma, y) * big
        return TruncatedSeries(coeffs)

    def l_side(self, N: int) -> TruncatedSeries:
        b = self.spec.var("b")
        shift = self.spec.u_power(self.inst.R - 1)
        return series_product([geometric(m * shift * b, self.inst.n_alpha, N) for m in self.m])

    def rhs(self, gamma: Sequence[int], N: int) -> TruncatedSeries:
        return self.l_side(N) * self.w_value(gamma, (0, 0))


GAMMAS = {"s0": (0, 0), "w1": (1, -1)}


def verify_rank2(inst: FundamentalPairInstance, gamma: str, N: Optional[int] = None,
                 samples: int = 20, seed: int = 0) -> Report:
    """Exact identity testing of the rank-two zeta identity at random rational points."""
    N = 4 * inst.n_alpha if N is None else N
    g = GAMMAS[gamma]
    rep = Report("verify-rank2", {"n": inst.small.n, "p": inst.small.p, "q": inst.small.q,
                                  "R": inst.R, "gamma": gamma, "trunc": N,
                                  "samples": samples, "seed": seed})
    rng = random.Random(f"{seed}:{gamma}:{inst.small.n}:{inst.small.p}:{inst.small.q}")
    c_big = theta_coefficient(inst.big, exceptional_character(inst.big, BIG_VAR))
    w1_expected = RingElement.g(inst.small.n, -inst.small.Q_coroot) if (-inst.small.Q_coroot) % inst.small.n \
        else RingElement({(-2, (), ()): -1})
    agreed, first_bad = 0, None
    done = 0
    while done < samples:
        spec, m1, m2 = draw_sample(rng, inst.small.n)
        try:
            smp = Rank2Sample(inst, spec, m1, m2, c_big)
            lhs, rhs = smp.zeta(g, N), smp.rhs(g, N)
            w_one = smp.w_value(g, (0, 0))
        except (BadSample, ZeroDivisionError):
            continue
        done += 1
        expected_one = Fraction(1) if gamma == "s0" else spec.value(w1_expected)
        k = lhs.first_mismatch(rhs)
        if k is None and w_one == expected_one:
            agreed += 1
        elif first_bad is None:
            first_bad = (done, k, w_one, expected_one)
    detail = f"{agreed}/{samples} exact samples agree through T^{N}"
    if first_bad is not None:
        detail += f"; sample {first_bad[0]} first mismatch at T^{first_bad[1]}"
    rep.add("rank-two zeta integral equals L-function times W(1) conj(W_theta(1))", agreed == samples, detail)
    return rep


# the rank (1, 2) cover with p = q = -1, n = 3

COUNTER_N, COUNTER_P, COUNTER_Q = 3, -1, -1


@dataclass
class CounterexampleResult:
    zeta: TruncatedSeries
    factorized: TruncatedSeries
    id_branch: TruncatedSeries
    w_branch: TruncatedSeries
    id_closed: TruncatedSeries
    w_closed: TruncatedSeries
    residual_exponent: Optional[int]
    residual_term: RingElement
    expected_residual: RingElement
    constraint_value: RingElement
    report: Report


def counterexample_character(big: CoveringDescriptor) -> UnramifiedCharacter:
    """Character on Y_{Q,n} = span{(1,1),(0,3)}: values t^2 and u t^3, with t = q^{-nu/3}.

    This parametrizes the solutions of chi(s_{3 alpha^vee}) = q^{-1}; the
    constraint is re-checked by evaluation.
    """
    t = var("t~")
    return char_from_values(big.yqn, (t ** 2, upow(1) * t ** 3))


def counterexample_series(N: int = 12, chi: Optional[UnramifiedCharacter] = None) -> CounterexampleResult:
    """Direct lattice sum for (GL_1, GL_2) covers with n = 3, p = q = -1, against the factorized form.

    The functional lambda on i(mu) is free: ell_c is its value on the basis
    vector supported on the coset c of Y/3Y, normalized as i(mu)(s_y) v0 with
    y in {0, 1, 2} and -y = c mod 3.  The character mu(s_3) is the variable m.
    """
    n, p, q = COUNTER_N, COUNTER_P, COUNTER_Q
    big = CoveringDescriptor(2, n, p, q)
    small = CoveringDescriptor(1, n, p, q)
    pairing = {"t~": "t", "t": "t~"}
    chi = chi or counterexample_character(big)
    rep = Report("counterexample", {"r": 1, "R": 2, "n": n, "p": p, "q": q, "trunc": N})

    alpha = (big.n_alpha, -big.n_alpha)
    constraint = char_eval(chi, alpha)
    rep.add("character is exceptional: chi(s_{n_alpha alpha^vee}) = q^-1", constraint == upow(-2), str(constraint))

    c_big = theta_coefficient(big, chi)
    m = var("m")
    ell = [var(f"l{j}") for j in range(n)]
    small_period = small.yqn.rows[0][0]

    def w_small(y: int) -> RingElement:
        # i(mu)(s_y) v0 is supported on the coset of -y; ell_c is lambda of the basis
        # vector on coset c, so W(s_{j + 3k}) = mu(s_{3k}) ell_{-j mod 3}
        k, j = divmod(y, small_period)
        return m ** k * ell[(-j) % small_period]

    zero = RingElement()
    id_coeffs = [zero] * (N + 1)
    w_coeffs = [zero] * (N + 1)
    w0_big = rd.longest(2)
    for y in range(N + 1):
        z = rd.hat_coweight((y, 0))
        val = c_big(z)
        if not val:
            continue
        term = conjugate(val, pairing) * w_small(y)
        if c_big.weyl_element(z) == rd.identity(2):
            id_coeffs[y] = id_coeffs[y] + term
        else:
            assert c_big.weyl_element(z) == w0_big
            w_coeffs[y] = w_coeffs[y] + term
    id_branch, w_branch = TruncatedSeries(id_coeffs), TruncatedSeries(w_coeffs)
    zeta = id_branch + w_branch

    chi_bar = lambda y: conjugate(char_eval(chi, y), pairing)
    ratio = chi_bar((0, 3)) * m
    geo = geometric(ratio, 3, N)
    id_closed = geo * ell[0]
    w_point = rd.twisted_act(w0_big, (0, 0))
    c_w_bar = conjugate(c_big(w_point), pairing)
    shifted = sub((0, 1), w_point)
    expected_residual = c_w_bar * chi_bar(shifted) * ell[2]
    w_closed = TruncatedSeries.monomial(expected_residual, 1, N) * geo
    factorized = geo * ell[0]

    ok, detail = _series_detail(id_branch, id_closed)
    rep.add("identity branch equals ell_0/(1 - conj(chi_e2) mu_e1 T^3)", ok, detail)
    ok, detail = _series_detail(w_branch, w_closed)
    rep.add("reflection branch equals T conj(c(s_{w[0]})) conj(chi)(s_{-e1+2e2}) ell_2/(1 - conj(chi_e2) mu_e1 T^3)",
            ok, detail)
    exps = w_branch.support()
    rep.add("reflection branch lives on exponents 1 mod 3", all(e % 3 == 1 for e in exps), f"exponents {exps}")

    residual = zeta - factorized
    k = next((i for i, c in enumerate(residual.coeffs) if c), None)
    term = residual[k] if k is not None else zero
    pattern = upow(-2) * invert(RingElement.g(n, big.Q_coroot)) * chi_bar(shifted)
    rep.add("zeta differs from L * W(1) * conj(W(1)) at T^1",
            k == 1 and term == expected_residual and c_w_bar == upow(-2) * invert(RingElement.g(n, big.Q_coroot)),
            f"residual at T^{k}: {term} = q^-1 g({big.Q_coroot % n})^-1 * conj(chi)(s_(-1,2)) * l2"
            f" [pattern {pattern} * l2]")
    rep.series = {"zeta": zeta, "factorized": factorized}
    return CounterexampleResult(zeta, factorized, id_branch, w_branch, id_closed, w_closed,
                                k, term, expected_residual, constraint, rep)
