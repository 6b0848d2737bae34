"""Integer lattices: Hermite and Smith normal forms, membership and finite quotients.

Every lattice is stored by its row-style Hermite normal form, so two lattices
are equal exactly when their bases are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

Coweight = Tuple[int, ...]


@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^dim given by its Hermite normal form rows."""

    dim: int
    rows: Tuple[Coweight, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(_pivot_col(row) for row in self.rows)

    def is_full_rank(self) -> bool:
        return len(self.rows) == self.dim

    def __str__(self) -> str:
        return "{" + ", ".join(str(row) for row in self.rows) + "}"


def _pivot_col(row: Sequence[int]) -> int:
    for j, x in enumerate(row):
        if x:
            return j
    return -1


def _hnf_rows(mat: List[List[int]], dim: int) -> List[List[int]]:
    """Row-reduce `mat` in place to Hermite normal form and return the nonzero rows."""
    m = len(mat)
    i = 0
    for col in range(dim):
        if i >= m:
            break
        while True:
            nz = [k for k in range(i, m) if mat[k][col]]
            if not nz:
                break
            k = min(nz, key=lambda k: abs(mat[k][col]))
            mat[i], mat[k] = mat[k], mat[i]
            piv = mat[i][col]
            done = True
            for k in range(i + 1, m):
                if mat[k][col]:
                    f = mat[k][col] // piv
                    mat[k] = [a - f * b for a, b in zip(mat[k], mat[i])]
                    if mat[k][col]:
                        done = False
            if done:
                break
        if i < m and mat[i][col]:
            if mat[i][col] < 0:
                mat[i] = [-a for a in mat[i]]
            piv = mat[i][col]
            for k in range(i):
                f = mat[k][col] // piv
                if f:
                    mat[k] = [a - f * b for a, b in zip(mat[k], mat[i])]
            i += 1
    return mat[:i]


def hnf_basis(generators: Iterable[Sequence[int]], dim: Optional[int] = None) -> LatticeBasis:
    """Hermite normal form of the lattice spanned by `generators`.

    Raises ValueError("rank unknown") for an empty generator list without `dim`.
    """
    gens = [list(map(int, g)) for g in generators]
    if not gens:
        if dim is None:
            raise ValueError("rank unknown")
        return LatticeBasis(dim, ())
    if dim is None:
        dim = len(gens[0])
    if any(len(g) != dim for g in gens):
        raise ValueError("dimension mismatch")
    rows = _hnf_rows(gens, dim)
    return LatticeBasis(dim, tuple(tuple(r) for r in rows))


def full_lattice(dim: int) -> LatticeBasis:
    return scaled_lattice(dim, 1)


def scaled_lattice(dim: int, k: int) -> LatticeBasis:
    """The lattice k*Z^dim."""
    return LatticeBasis(dim, tuple(tuple(k if i == j else 0 for j in range(dim)) for i in range(dim)))


def coordinates(basis: LatticeBasis, y: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Integer coordinates of y in the basis rows, or None if y is not in the lattice."""
    if len(y) != basis.dim:
        raise ValueError("dimension mismatch")
    rest = list(y)
    coords = []
    for row, col in zip(basis.rows, basis.pivots):
        if any(rest[:col]):
            return None
        c, rem = divmod(rest[col], row[col])
        if rem:
            return None
        coords.append(c)
        if c:
            rest = [a - c * b for a, b in zip(rest, row)]
    if any(rest):
        return None
    return tuple(coords)


def contains(basis: LatticeBasis, y: Sequence[int]) -> bool:
    return coordinates(basis, y) is not None


def smith_invariants(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """Nonzero Smith normal form diagonal of an integer matrix, in divisibility order."""
    a = [list(r) for r in rows]
    if not a:
        return ()
    m, n = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                f = a[i][t] // piv
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    clean = False
            for j in range(t + 1, n):
                f = a[t][j] // piv
                if f:
                    for row in a:
                        row[j] -= f * row[t]
                if a[t][j]:
                    clean = False
            if clean:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv]
                if not bad:
                    break
                # fold an offending row into the pivot row so the gcd can shrink
                i, _ = bad[0]
                a[t] = [x + y for x, y in zip(a[t], a[i])]
                continue
            # move the smallest nonzero entry of the pivot cross to the corner
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return tuple(diag)


@dataclass(frozen=True)
class QuotientStructure:
    """The finite group Z^dim / sublattice with a canonical transversal.

    Representatives are the vectors x with 0 <= x_i < pivot_i, listed in
    lexicographic order.
    """

    dim: int
    sublattice: LatticeBasis
    invariant_factors: Tuple[int, ...]

    @cached_property
    def moduli(self) -> Tuple[int, ...]:
        return tuple(row[i] for i, row in enumerate(self.sublattice.rows))

    @property
    def order(self) -> int:
        out = 1
        for d in self.moduli:
            out *= d
        return out

    @property
    def representatives(self) -> List[Coweight]:
        return [tuple(x) for x in product(*(range(d) for d in self.moduli))]

    def reduce(self, y: Sequence[int]) -> Coweight:
        return reduce(self, y)

    def index(self, y: Sequence[int]) -> int:
        """Position of reduce(y) in the list of representatives."""
        x = reduce(self, y)
        k = 0
        for xi, d in zip(x, self.moduli):
            k = k * d + xi
        return k


def quotient(dim: int, sub: LatticeBasis) -> QuotientStructure:
    if sub.dim != dim:
        raise ValueError("dimension mismatch")
    if not sub.is_full_rank():
        raise ValueError("infinite quotient")
    inv = tuple(d for d in smith_invariants(sub.rows))
    return QuotientStructure(dim, sub, inv)


def reduce(q: QuotientStructure, y: Sequence[int]) -> Coweight:
    if len(y) != q.dim:
        raise ValueError("dimension mismatch")
    x = list(y)
    for i, row in enumerate(q.sublattice.rows):
        f = x[i] // row[i]
        if f:
            x = [a - f * b for a, b in zip(x, row)]
    return tuple(x)


def add(y: Sequence[int], z: Sequence[int]) -> Coweight:
    return tuple(a + b for a, b in zip(y, z))


def sub(y: Sequence[int], z: Sequence[int]) -> Coweight:
    return tuple(a - b for a, b in zip(y, z))


def scale(k: int, y: Sequence[int]) -> Coweight:
    return tuple(k * a for a in y)
