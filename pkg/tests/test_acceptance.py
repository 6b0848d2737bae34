"""End-to-end acceptance checks, one test per criterion, each with its time budget."""
from __future__ import annotations

import json
import subprocess
import sys
import time
from contextlib import contextmanager
from math import comb

from cbh import rootdata as rd
from cbh import zeta as z
from cbh.coeffring import conjugate, modulus, upow
from cbh.covering import CoveringDescriptor, exceptional_character, fits_fundamental_pair, fundamental_pair_oracle
from cbh.whittaker import dim_whittaker_theta, t_word, theta_coefficient, theta_row_sums
from conftest import ACCEPTANCE_LINES
from oracles import is_fundamental

BOX = [(r, n, p, q) for p in range(-3, 4) for q in range(-3, 4) for n in range(1, 9) for r in range(1, 5)]


@contextmanager
def criterion(number: int, title: str, budget: float):
    start = time.perf_counter()
    info = {"detail": ""}
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        line = f"criterion {number} {status}: {title} ({elapsed:.2f} s, budget {budget:g} s) {info['detail']}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"criterion {number} took {elapsed:.2f} s, over {budget} s"


def test_criterion_1_fundamental_pair_characterization():
    with criterion(1, "fundamental-pair criterion agrees with the lattice oracle", 5) as info:
        mismatches = []
        for r, n, p, q in BOX:
            got = fits_fundamental_pair(r, n, p, q)
            lattice = fundamental_pair_oracle(r, n, p, q)
            counted = is_fundamental(r, n, p, q)
            if got != lattice or (got is not None) != counted:
                mismatches.append((r, n, p, q))
        info["detail"] = f"{len(BOX)} (r, n, p, q) cases, {len(mismatches)} mismatches"
        assert len(BOX) == 1568
        assert not mismatches


def test_criterion_2_whittaker_dimension():
    with criterion(2, "free-orbit count of the theta representation", 5) as info:
        binomial, larger, bad = 0, 0, []
        for r, n, p, q in BOX:
            R = fits_fundamental_pair(r, n, p, q)
            if R is None:
                continue
            d = CoveringDescriptor(r, n, p, q)
            dim = dim_whittaker_theta(d)
            if d.is_n_alpha_lattice():
                binomial += 1
                if dim != comb(R, r):
                    bad.append((r, n, p, q, dim))
            else:
                # the lattice is strictly larger than n_alpha Y, so the binomial count does not apply
                larger += 1
                if dim > comb(R, r):
                    bad.append((r, n, p, q, dim))
        savin = dim_whittaker_theta(CoveringDescriptor(2, 5, -1, 0))
        kp = dim_whittaker_theta(CoveringDescriptor(2, 3, 0, 1))
        odd_pair = dim_whittaker_theta(CoveringDescriptor(2, 3, -1, -1))
        info["detail"] = (f"binomial on {binomial} instances with Y_Qn = n_alpha Y, {larger} instances with a larger "
                          f"lattice, Savin {savin}, KP {kp}, (n,p,q)=(3,-1,-1) r=2 -> {odd_pair}")
        assert not bad
        assert (savin, kp, odd_pair) == (10, 3, 1)


THETA_INSTANCES = [(2, 3, 0, 1), (2, 5, -1, 0), (3, 5, -1, 0), (4, 5, -1, 0)]


def test_criterion_3_theta_theta_identity():
    with criterion(3, "theta-theta zeta series equals the L-series to order 3 n_alpha", 60) as info:
        parts = []
        for r, n, p, q in THETA_INSTANCES:
            inst = z.fundamental_pair(r, n, p, q)
            N = 3 * inst.n_alpha
            rep = z.verify_theta(inst, N)
            assert rep.passed, rep.checks
            bad = z.verify_theta(inst, N, tamper=True)
            assert not bad.passed
            assert bad.checks[0].detail.startswith(f"first mismatch at T^{inst.n_alpha}:")
            parts.append(f"(n={n},r={r},R={inst.R}) to T^{N}, tamper at T^{inst.n_alpha}")
        info["detail"] = "; ".join(parts)


def test_criterion_4_rank_two_identity():
    with criterion(4, "rank-two zeta identity at exact rational points", 120) as info:
        parts = []
        for n, p, q in [(5, -1, 0), (3, 0, 1)]:
            inst = z.fundamental_pair(2, n, p, q)
            for gamma in ("s0", "w1"):
                rep = z.verify_rank2(inst, gamma, N=4 * inst.n_alpha, samples=20, seed=2024)
                assert rep.passed, rep.checks
                parts.append(f"n={n} {gamma}: {rep.checks[0].detail}")
        info["detail"] = "; ".join(parts)


def test_criterion_5_counterexample():
    with criterion(5, "the (GL_1, GL_2) cover with n=3, p=q=-1 does not factor", 10) as info:
        res = z.counterexample_series(12)
        for c in res.report.checks:
            assert c.passed, c
        assert res.id_branch == res.id_closed
        assert res.w_branch == res.w_closed
        assert res.zeta != res.factorized
        assert res.residual_exponent == 1
        info["detail"] = res.report.checks[-1].detail


def test_criterion_6_property_suites():
    with criterion(6, "exhaustive property suites", 120) as info:
        counts = {}
        descs = [CoveringDescriptor(r, n, p, q) for r, n, p, q in
                 [(2, 5, -1, 0), (3, 5, -1, 0), (4, 5, -1, 0), (2, 3, 0, 1), (3, 3, 0, 1), (4, 4, -1, -1)]]
        pairing = {"a": "a~", "a~": "a", "b": "b~", "b~": "b"}

        n_words = 0
        for d in descs:
            for w in rd.weyl_group(d.r):
                vals = {t_word(d, word, (0,) * d.r) for word in rd.reduced_words(w)}
                assert len(vals) == 1
                n_words += 1
        counts["reduced-word independence"] = n_words

        n_cc = 0
        for d in descs:
            c = theta_coefficient(d, exceptional_character(d, "a"))
            for w in rd.weyl_group(d.r):
                v = c(rd.twisted_act(w, (0,) * d.r))
                assert modulus(v) == upow(-rd.length(w))
                assert v == c(rd.twisted_act(rd.hat(w), (0,) * d.r))
                n_cc += 1
        counts["modulus and hat symmetry"] = n_cc

        n_pair = 0
        for r, n, p, q in [(2, 5, -1, 0), (3, 5, -1, 0), (4, 5, -1, 0), (2, 3, 0, 1), (3, 4, -1, -1)]:
            R = fits_fundamental_pair(r, n, p, q)
            small, big = CoveringDescriptor(r, n, p, q), CoveringDescriptor(R, n, p, q)
            cs = theta_coefficient(small, exceptional_character(small, "a"))
            cb = theta_coefficient(big, exceptional_character(big, "b~"))
            for w in rd.weyl_group(r):
                hw = rd.hat(w)
                prod = conjugate(cb(rd.twisted_act(rd.embed(hw, R), (0,) * R)), pairing) * \
                    cs(rd.twisted_act(hw, (0,) * r))
                assert prod == upow(-2 * rd.length(w))
                n_pair += 1
        counts["Gauss-pair cancellation"] = n_pair

        n_rows = 0
        for d in descs:
            if d.r > 3 or not d.is_n_alpha_lattice():
                continue
            chi = exceptional_character(d, "a")
            for i in range(1, d.r):
                sums = theta_row_sums(d, chi, i)
                assert all(not v for v in sums.values())
                n_rows += len(sums)
        counts["row annihilation columns"] = n_rows

        # one instance per (r, R, n) with R <= 5
        reps = {}
        for r, n, p, q in BOX:
            R = fits_fundamental_pair(r, n, p, q)
            if R is None or R > 5 or (r, R, n) in reps:
                continue
            try:
                reps[(r, R, n)] = z.fundamental_pair(r, n, p, q)
            except ValueError:
                continue
        n_crucial = 0
        for inst in reps.values():
            small = {rd.embed(w, inst.R) for w in rd.weyl_group(inst.r)}
            pts = list(z.dominant_box(inst.r, 3 * inst.n_alpha))
            for w in rd.weyl_group(inst.R):
                if w not in small:
                    assert not any(z.support_membership(inst, w, y) for y in pts)
                    n_crucial += 1
        counts["empty supports outside W_r"] = n_crucial

        n_tau = 0
        for r in range(2, 6):
            inst = z.fundamental_pair(r, 7, 0, 1) if r > 4 else z.fundamental_pair(r, 5, -1, 0)
            for w in rd.weyl_group(r):
                total = z.TauExponent(inst.n_alpha, 0, 0, 0, 0)
                for j, i in zip(range(2, r + 1), rd.cycle_factorization(w)):
                    total = total + z.tau_cycle(inst, j).scale(i)
                assert z.tau(inst, w) == total
                n_tau += 1
        counts["tau additivity"] = n_tau

        n_closed = 0
        for inst in reps.values():
            if inst.r > 4:
                continue
            assert z.sum_w_direct(inst) == z.sum_w_closed(inst)
            N = 3 * inst.n_alpha
            assert z.sum_dagger_direct(inst, N) == z.sum_dagger_closed(inst, N)
            n_closed += 1
        counts["closed forms"] = n_closed
        info["detail"] = ", ".join(f"{k}: {v}" for k, v in counts.items())


CLI_RUNS = [
    ["pair", "--n", "5", "--p", "-1", "--q", "0", "--r", "2"],
    ["orbits", "--n", "5", "--p", "-1", "--q", "0", "--r", "2"],
    ["whittaker", "--n", "3", "--p", "0", "--q", "1", "--r", "2"],
    ["verify-theta", "--n", "3", "--p", "0", "--q", "1", "--r", "2", "--trunc", "12"],
    ["verify-rank2", "--n", "3", "--p", "0", "--q", "1", "--r", "2", "--samples", "5", "--seed", "17"],
    ["counterexample"],
]


def test_criterion_7_determinism():
    with criterion(7, "repeated CLI runs give byte-identical JSON", 120) as info:
        for args in CLI_RUNS:
            outs = []
            for _ in range(2):
                proc = subprocess.run([sys.executable, "-m", "cbh", *args, "--format", "json"],
                                      capture_output=True, check=False)
                assert proc.returncode == 0, proc.stderr
                outs.append(proc.stdout)
            assert outs[0] == outs[1]
            record = json.loads(outs[0])
            assert set(record) == {"command", "params", "checks", "elapsed_ms"}
        info["detail"] = f"{len(CLI_RUNS)} commands, 2 runs each"
