"""Brute-force reference computations, written independently of the library code."""
from __future__ import annotations

from itertools import permutations, product
from math import gcd


def box(r, lo, hi):
    return product(range(lo, hi + 1), repeat=r)


def span_in_box(gens, r, bound, coeff=6):
    """Integer combinations of gens (coefficients in [-coeff, coeff]) landing in [-bound, bound]^r."""
    pts = set()
    for cs in product(range(-coeff, coeff + 1), repeat=len(gens)):
        y = tuple(sum(c * g[i] for c, g in zip(cs, gens)) for i in range(r))
        if all(abs(v) <= bound for v in y):
            pts.add(y)
    return pts


def in_yqn(y, n, p, q):
    """Direct congruence test: Q(alpha^vee) k_j + q sum(k) = 0 mod n for each j."""
    qc = 2 * p - q
    s = sum(y)
    return all((qc * k + q * s) % n == 0 for k in y)


def n_alpha(n, p, q):
    return n // gcd(n, 2 * p - q)


def count_yqn_mod_n(R, n, p, q):
    """Number of classes y mod n (in (Z/n)^R) satisfying the Y_{Q,n} congruences.

    For a fixed residue s of sum(y) each coordinate independently solves
    Q(alpha^vee) k = -q s mod n; a dynamic program over coordinates keeps track
    of the running sum, and only tuples whose sum really is s are counted.
    """
    qc = 2 * p - q
    total = 0
    for s in range(n):
        allowed = [k for k in range(n) if (qc * k + q * s) % n == 0]
        ways = [1] + [0] * (n - 1)
        for _ in range(R):
            nxt = [0] * n
            for t, c in enumerate(ways):
                if c:
                    for k in allowed:
                        nxt[(t + k) % n] += c
            ways = nxt
        total += ways[s]
    return total


def is_fundamental(r, n, p, q):
    """n_alpha > r and Y_{Q,n} at rank n_alpha is exactly n_alpha Z^R.

    Since n Z^R lies in Y_{Q,n}, equality holds iff every n_alpha e_j is in
    Y_{Q,n} and the number of solutions mod n equals |n_alpha (Z/n)^R| = (n/n_alpha)^R.
    """
    na = n_alpha(n, p, q)
    if na <= r:
        return False
    units = all(in_yqn(tuple(na if i == j else 0 for i in range(na)), n, p, q) for j in range(na))
    return units and count_yqn_mod_n(na, n, p, q) == (n // na) ** na


def twisted(perm, y):
    """w[y] = w(y - rho) + rho with w(e_j) = e_{perm[j]}, rho_i = (r+1)/2 - i; done with halves."""
    r = len(y)
    rho2 = [r + 1 - 2 * (i + 1) for i in range(r)]
    shifted = [2 * y[j] - rho2[j] for j in range(r)]
    out = [0] * r
    for j in range(r):
        out[perm[j]] = shifted[j]
    return tuple((out[i] + rho2[i]) // 2 for i in range(r))


def orbit_counts(r, n, p, q):
    """(number of orbits, number of free orbits) of the twisted W-action on Y/Y_{Q,n}.

    Cosets are found by pairwise membership tests on a box of size (n)^r, which
    contains a full set of representatives since n Y lies in Y_{Q,n}.
    """
    pts = list(product(range(n), repeat=r))
    reps = []
    index = {}
    for y in pts:
        for k, z in enumerate(reps):
            if in_yqn(tuple(a - b for a, b in zip(y, z)), n, p, q):
                index[y] = k
                break
        else:
            index[y] = len(reps)
            reps.append(y)

    def cls(y):
        return index[tuple(v % n for v in y)]

    perms = list(permutations(range(r)))
    seen, orbits, free = set(), 0, 0
    for k, z in enumerate(reps):
        if k in seen:
            continue
        orbit = {cls(twisted(w, z)) for w in perms}
        seen |= orbit
        orbits += 1
        free += len(orbit) == len(perms)
    return orbits, free


def words_for(target, r, max_len):
    """All words of simple reflections (1-based) of length <= max_len whose product is target."""
    def simple_perm(i):
        p = list(range(r))
        p[i - 1], p[i] = p[i], p[i - 1]
        return tuple(p)
    out = []
    for k in range(max_len + 1):
        for word in product(range(1, r), repeat=k):
            w = tuple(range(r))
            for i in word:
                s = simple_perm(i)
                w = tuple(w[s[j]] for j in range(r))
            if w == target:
                out.append(word)
    return out


def inversions(perm):
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
