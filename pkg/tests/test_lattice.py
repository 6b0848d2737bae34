from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from cbh.lattice import (
    LatticeBasis,
    contains,
    coordinates,
    full_lattice,
    hnf_basis,
    quotient,
    scaled_lattice,
    smith_invariants,
)
from oracles import span_in_box


def test_hnf_examples():
    cases = [
        ([(1, 1), (2, -1)], ((1, 1), (0, 3))),
        ([(1, 0), (0, 1)], ((1, 0), (0, 1))),
        ([(3, 0), (0, 3), (1, 1)], ((1, 1), (0, 3))),
    ]
    for gens, rows in cases:
        assert hnf_basis(gens).rows == rows


def test_hnf_examples_against_span_oracle():
    # frozen bases above generate the same points as the generators in a box
    assert span_in_box([(1, 1), (2, -1)], 2, 6) == span_in_box([(1, 1), (0, 3)], 2, 6)
    assert span_in_box([(3, 0), (0, 3), (1, 1)], 2, 6, 4) == span_in_box([(1, 1), (0, 3)], 2, 6)


def test_hnf_errors():
    with pytest.raises(ValueError, match="rank unknown"):
        hnf_basis([])
    with pytest.raises(ValueError, match="dimension mismatch"):
        hnf_basis([(1, 2), (1, 2, 3)])
    assert hnf_basis([], dim=3).rank == 0


def test_contains_examples():
    b = hnf_basis([(1, 1), (0, 3)])
    assert contains(b, (-1, 2))
    assert not contains(b, (1, 0))
    assert coordinates(b, (-1, 2)) == (-1, 1)
    with pytest.raises(ValueError):
        contains(b, (1, 2, 3))


def test_str_rendering():
    assert str(hnf_basis([(1, 1), (0, 3)])) == "{(1, 1), (0, 3)}"


def _hnf_shape_ok(b: LatticeBasis) -> bool:
    piv = b.pivots
    if list(piv) != sorted(set(piv)):
        return False
    for k, row in enumerate(b.rows):
        if row[piv[k]] <= 0:
            return False
        for above in b.rows[:k]:
            if not 0 <= above[piv[k]] < row[piv[k]]:
                return False
    return True


vec = st.tuples(*[st.integers(-9, 9)] * 3)


@settings(max_examples=150, deadline=None)
@given(st.lists(vec, min_size=1, max_size=4))
def test_hnf_canonical_and_same_lattice(gens):
    b = hnf_basis(gens, 3)
    assert _hnf_shape_ok(b)
    for g in gens:
        assert contains(b, g)
    # canonical: shuffling and adding a redundant combination changes nothing
    extra = tuple(sum(x) for x in zip(*gens))
    shuffled = list(reversed(gens)) + [extra]
    assert hnf_basis(shuffled, 3) == b


def test_quotient_structure():
    q = quotient(2, hnf_basis([(1, 1), (0, 3)]))
    assert q.order == 3
    assert q.invariant_factors == (1, 3)
    reps = q.representatives
    assert len(reps) == 3
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            same = contains(q.sublattice, tuple(x - y for x, y in zip(a, b)))
            assert same == (i == j)
    with pytest.raises(ValueError, match="infinite quotient"):
        quotient(2, hnf_basis([(1, 1)]))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=2, max_size=3),
       st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_reduce_is_class_function(gens, y):
    b = hnf_basis(gens, 2)
    if not b.is_full_rank():
        return
    q = quotient(2, b)
    rep = q.reduce(y)
    assert rep in q.representatives
    assert contains(b, tuple(a - c for a, c in zip(y, rep)))
    # index equals |det| equals product of invariant factors
    det = abs(b.rows[0][0] * b.rows[1][1])
    assert q.order == det


def test_smith_against_sympy():
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    rng = random.Random(7)
    for _ in range(200):
        rows = [[rng.randint(-8, 8) for _ in range(3)] for _ in range(3)]
        snf = smith_normal_form(Matrix(rows), domain=ZZ)
        expected = sorted(abs(snf[i, i]) for i in range(3) if snf[i, i] != 0)
        assert sorted(smith_invariants(rows)) == expected


def test_scaled_and_full():
    assert scaled_lattice(2, 5).rows == ((5, 0), (0, 5))
    assert full_lattice(3) == scaled_lattice(3, 1)
