from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from bsomot.gf2linalg import (
    Echelon,
    F2Matrix,
    image_basis,
    kernel_basis,
    mask_kernel,
    mask_rank,
    rank,
    solve,
)
from oracles import brute_kernel_dim, brute_rank


def test_rank_examples():
    assert rank(F2Matrix.identity(4)) == 4
    assert rank(F2Matrix.zeros(3, 5)) == 0
    assert rank([[1, 1], [1, 1]]) == 1


def test_kernel_examples():
    assert kernel_basis(F2Matrix.identity(5)) == []
    assert len(kernel_basis(F2Matrix.zeros(2, 3))) == 3
    assert kernel_basis([[1, 1, 0], [0, 1, 1]]) == [(1, 1, 1)]


def test_solve_examples():
    assert solve(F2Matrix.identity(3), (1, 0, 1)) == (1, 0, 1)
    assert solve(F2Matrix.zeros(2, 2), (0, 1)) is None
    assert solve([[1, 1], [0, 1]], (0, 1)) == (1, 1)


def test_solve_rejects_bad_length():
    with pytest.raises(ValueError):
        solve(F2Matrix.identity(3), (1, 0))


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        F2Matrix([[1, 0], [1]])


def _random_matrix(rng, r, c):
    return F2Matrix([[rng.randint(0, 1) for _ in range(c)] for _ in range(r)], ncols=c)


def test_rank_nullity_500_random():
    rng = random.Random(7)
    for _ in range(500):
        r, c = rng.randint(0, 40), rng.randint(1, 40)
        m = _random_matrix(rng, r, c)
        ker = kernel_basis(m)
        assert rank(m) + len(ker) == c
        for v in ker:
            assert m @ v == (0,) * r
        assert rank(m) == rank(m.transpose())


matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=0, max_size=6)
    .map(lambda rows: (rows, c))
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_against_brute_force(data):
    rows, c = data
    m = F2Matrix(rows, ncols=c)
    assert rank(m) == brute_rank(rows)
    assert len(kernel_basis(m)) == brute_kernel_dim(rows, c)
    assert len(image_basis(m)) == rank(m)


@settings(max_examples=200, deadline=None)
@given(matrices, st.data())
def test_solve_reproduces_rhs(data, draw):
    rows, c = data
    m = F2Matrix(rows, ncols=c)
    x = draw.draw(st.lists(st.integers(0, 1), min_size=c, max_size=c))
    b = m @ x
    y = solve(m, b)
    assert y is not None and m @ y == b


def test_echelon_membership_and_order():
    e = Echelon([0b110, 0b011])
    assert 0b101 in e
    assert 0b001 not in e
    assert len(e) == 2
    assert e.pivots() == sorted(e.pivots())


def test_mask_kernel_deterministic():
    cols = [0b11, 0b01, 0b10, 0b11]
    assert mask_kernel(cols) == mask_kernel(list(cols))
    for k in mask_kernel(cols):
        acc = 0
        for j, c in enumerate(cols):
            if (k >> j) & 1:
                acc ^= c
        assert acc == 0
    assert mask_rank(cols) + len(mask_kernel(cols)) == len(cols)


def test_matmul_associative():
    rng = random.Random(3)
    for _ in range(50):
        a, b, c = _random_matrix(rng, 4, 5), _random_matrix(rng, 5, 3), _random_matrix(rng, 3, 6)
        assert (a @ b) @ c == a @ (b @ c)
