"""Root datum of GL_r: Weyl group as permutations, twisted action, hats and cycles.

A Weyl element is a tuple `perm` of 0-based images, perm[j] = w(j), acting on
coweights by w(e_j) = e_{w(j)}.  A word (i_1, ..., i_k) of 1-based simple
reflection indices denotes the product s_{i_1} s_{i_2} ... s_{i_k}, so its
last letter acts first.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import List, Sequence, Tuple

Perm = Tuple[int, ...]
Coweight = Tuple[int, ...]

REDUCED_WORD_BOUND = 5


def two_rho(r: int) -> Coweight:
    return tuple(r + 1 - 2 * i for i in range(1, r + 1))


def identity(r: int) -> Perm:
    return tuple(range(r))


def longest(r: int) -> Perm:
    return tuple(range(r - 1, -1, -1))


def simple(i: int, r: int) -> Perm:
    """Simple reflection s_i swapping e_i and e_{i+1} (1-based i)."""
    if not 1 <= i < r:
        raise ValueError(f"simple index {i} out of range for rank {r}")
    p = list(range(r))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def compose(w: Perm, v: Perm) -> Perm:
    """The product wv (apply v first)."""
    return tuple(w[j] for j in v)


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for j, wj in enumerate(w):
        out[wj] = j
    return tuple(out)


def act(w: Perm, y: Sequence[int]) -> Coweight:
    if len(w) != len(y):
        raise ValueError("rank mismatch")
    out = [0] * len(y)
    for j, wj in enumerate(w):
        out[wj] = y[j]
    return tuple(out)


def twisted_act(w: Perm, y: Sequence[int]) -> Coweight:
    """The dot action w[y] = w(y - rho) + rho."""
    tr = two_rho(len(y))
    moved = act(w, [2 * a - b for a, b in zip(y, tr)])
    doubled = [a + b for a, b in zip(moved, tr)]
    assert all(x % 2 == 0 for x in doubled), "twisted action left the lattice"
    return tuple(x // 2 for x in doubled)


def simple_twisted(i: int, y: Sequence[int]) -> Coweight:
    """s_i[y]: swap y_i and y_{i+1}, then shift them by +1 and -1."""
    out = list(y)
    out[i - 1], out[i] = y[i] + 1, y[i - 1] - 1
    return tuple(out)


def length(w: Perm) -> int:
    r = len(w)
    return sum(1 for i in range(r) for j in range(i + 1, r) if w[i] > w[j])


def weyl_group(r: int) -> List[Perm]:
    """All of W_r, sorted by (length, perm)."""
    return sorted(permutations(range(r)), key=lambda w: (length(w), w))


def descent_set(w: Perm) -> frozenset:
    """I_w = {k : w^{-1}(k) > w^{-1}(k+1)}, 1-based."""
    wi = inverse(w)
    return frozenset(k for k in range(1, len(w)) if wi[k - 1] > wi[k])


@lru_cache(maxsize=None)
def _reduced_words(w: Perm) -> Tuple[Tuple[int, ...], ...]:
    if length(w) == 0:
        return ((),)
    out = []
    for k in sorted(descent_set(w)):
        rest = compose(simple(k, len(w)), w)
        out.extend((k,) + word for word in _reduced_words(rest))
    return tuple(out)


def reduced_words(w: Perm, bound: int = REDUCED_WORD_BOUND) -> List[Tuple[int, ...]]:
    if len(w) > bound:
        raise ValueError(f"rank {len(w)} above reduced-word bound {bound}")
    return list(_reduced_words(tuple(w)))


def reduced_word(w: Perm) -> Tuple[int, ...]:
    """One reduced word, lexicographically first, at any rank."""
    word = []
    while length(w):
        k = min(descent_set(w))
        word.append(k)
        w = compose(simple(k, len(w)), w)
    return tuple(word)


def word_to_perm(word: Sequence[int], r: int) -> Perm:
    w = identity(r)
    for k in word:
        w = compose(w, simple(k, r))
    return w


def hat(w: Perm) -> Perm:
    w0 = longest(len(w))
    return compose(compose(w0, w), w0)


def hat_coweight(y: Sequence[int]) -> Coweight:
    return tuple(reversed(y))


def cycle(j: int, r: int) -> Perm:
    """The j-cycle (1 2 ... j) in W_r."""
    if not 2 <= j <= r:
        raise ValueError(f"cycle length {j} out of range for rank {r}")
    return tuple((k + 1) % j if k < j else k for k in range(r))


def power(w: Perm, k: int) -> Perm:
    out = identity(len(w))
    for _ in range(k):
        out = compose(out, w)
    return out


def cycle_factorization(w: Perm) -> Tuple[int, ...]:
    """Exponents (i_2, ..., i_r) with w = cycle(2)^{i_2} ... cycle(r)^{i_r}."""
    r = len(w)
    exps = []
    # peel off the rightmost factor: cycle(r)^{i_r} is forced by where w sends r
    for j in range(r, 1, -1):
        c = cycle(j, r)
        for i in range(j):
            rest = compose(w, power(inverse(c), i))
            if rest[j - 1] == j - 1:
                exps.append(i)
                w = rest
                break
        else:
            raise AssertionError("no cycle factorization")
    assert w == identity(r)
    return tuple(reversed(exps))


def from_cycle_exponents(exps: Sequence[int], r: int) -> Perm:
    w = identity(r)
    for j, i in zip(range(2, r + 1), exps):
        w = compose(w, power(cycle(j, r), i))
    return w


def embed(w: Perm, big: int) -> Perm:
    """phi: extend w in W_r to W_R by fixing r+1, ..., R."""
    return tuple(w) + tuple(range(len(w), big))


def pad(y: Sequence[int], big: int) -> Coweight:
    return tuple(y) + (0,) * (big - len(y))


def is_dominant(y: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(y, y[1:]))


def pairing(y: Sequence[int], i: int) -> int:
    """<y, alpha_i> = y_i - y_{i+1}."""
    return y[i - 1] - y[i]
