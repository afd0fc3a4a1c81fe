from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from bsomot.grammar import parse_m, parse_w
from bsomot.polyring import F2Polynomial, Partition, basis_of_degree, engine, w_monomials
from bsomot.rings import BO, BSO, coordinates
from bsomot.weightfilt import (
    odd_weight,
    q_length,
    verify_iota_strictness,
    verify_strictness,
    verify_wilson_decomposition,
    weight,
    weight_bo,
    weight_bso,
    weight_in_quotient,
    weighted_basis,
    wilson_admissible,
    wilson_basis,
)
from oracles import bo_weight, bso_weight, filtration_dims_bo, filtration_dims_bso, w_poly

# dim F^w H^d, listed for w = 0, 1, ..., d (frozen from the torus oracle)
FROZEN_BSO = {
    (3, 3): [0, 1, 1, 1],
    (3, 4): [1, 1, 1, 1, 1],
    (3, 6): [1, 1, 2, 2, 2, 2, 2],
    (3, 8): [1, 1, 2, 2, 2, 2, 2, 2, 2],
    (4, 2): [0, 0, 1],
    (4, 4): [1, 1, 2, 2, 2],
    (4, 6): [1, 1, 3, 3, 3, 3, 3],
    (4, 7): [0, 2, 2, 2, 2, 2, 2, 2],
    (4, 8): [2, 2, 4, 4, 4, 4, 4, 4, 4],
    (5, 4): [1, 1, 1, 1, 2],
    (5, 5): [0, 1, 1, 2, 2, 2],
    (5, 7): [0, 2, 2, 3, 3, 3, 3, 3],
    (5, 8): [2, 2, 4, 4, 5, 5, 5, 5, 5],
}
FROZEN_BO = {
    (2, 2): [1, 1, 2],
    (2, 4): [2, 2, 3, 3, 3],
    (2, 8): [3, 3, 5, 5, 5, 5, 5, 5, 5],
    (3, 3): [0, 2, 2, 3],
    (3, 5): [0, 4, 4, 5, 5, 5],
    (3, 6): [3, 3, 7, 7, 7, 7, 7],
    (3, 7): [0, 6, 6, 8, 8, 8, 8, 8],
    (3, 8): [4, 4, 10, 10, 10, 10, 10, 10, 10],
}


def test_weight_bo_examples():
    assert weight_bo(3, parse_m("m[1,1,1]", 3)) == 3
    assert weight_bo(3, parse_m("m[2,1,1]", 3)) == 2
    assert weight_bo(2, parse_w("w1^2", 2)) == 0
    assert weight_bo(2, parse_w("w2", 2)) == 2
    assert weight_bo(1, F2Polynomial.one(1, "w")) == 0
    with pytest.raises(ValueError):
        weight_bo(2, F2Polynomial.zero(2, "w"))
    with pytest.raises(ValueError):
        weight_bo(3, parse_w("w2", 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_q_search_matches_odd_parts(n):
    eng = engine(n)
    for d in range(0, 11):
        for lam in eng.basis(d):
            assert weight_bo(n, [lam]) == odd_weight([lam])
        for e in w_monomials(n, d):
            P = w_poly(e)
            assert weight_bo(n, P) == bo_weight(P, n)


def test_degree_cap_only_lowers():
    p = parse_m("m[1,1,1]", 3)
    assert q_length(3, p, degree_cap=3) == 0
    assert q_length(3, p, degree_cap=4) == 1
    assert q_length(3, p, degree_cap=3 + 1 + 3 + 7) == 3


def test_wilson_small_cases():
    assert [e.label() for e in wilson_basis(1, 1)] == ["m[1]"]
    r = verify_wilson_decomposition(2, 2)
    assert r["passed"] and r["dim"] == 2
    assert not wilson_admissible(Partition([3, 2]))
    assert wilson_admissible(Partition([8, 3, 1]))
    assert not wilson_admissible(Partition([1, 2]))
    assert wilson_admissible(Partition([2, 2, 1]))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_wilson_decomposition(n):
    for d in range(0, 15):
        r = verify_wilson_decomposition(n, d)
        assert r["passed"], r


def test_wilson_without_admissibility_fails():
    r = verify_wilson_decomposition(3, 6, admissible_only=False)
    assert not r["passed"]
    assert r["count"] > r["dim"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_wilson_weight_is_k_minus_j(n):
    for d in range(0, 13):
        for e in wilson_basis(n, d):
            f = e.expand()
            assert f
            assert e.weight == e.k - len(e.applied_qs)
            assert odd_weight(f) == e.weight == weight_bo(n, f)
            assert e.degree == d


@pytest.mark.parametrize("key", sorted(FROZEN_BSO))
def test_frozen_bso(key):
    n, d = key
    wb = weighted_basis(BSO(n), d)
    assert [wb.filtration_dim(w) for w in range(d + 1)] == FROZEN_BSO[key]


@pytest.mark.parametrize("key", sorted(FROZEN_BO))
def test_frozen_bo(key):
    n, d = key
    wb = weighted_basis(BO(n), d)
    assert [wb.filtration_dim(w) for w in range(d + 1)] == FROZEN_BO[key]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_against_torus_oracle(n):
    for d in range(0, 11):
        bo = weighted_basis(BO(n), d)
        so = weighted_basis(BSO(n), d)
        assert [bo.filtration_dim(w) for w in range(d + 1)] == list(filtration_dims_bo(n, d).values())
        assert [so.filtration_dim(w) for w in range(d + 1)] == list(filtration_dims_bso(n, d).values())


def _same(a, b):
    from bsomot.gf2linalg import mask_rank

    return mask_rank(a) == mask_rank(b) == mask_rank(list(a) + list(b))


@pytest.mark.parametrize("n", [3, 5, 7])
def test_routes_agree(n):
    for d in range(0, 11):
        a = weighted_basis(BSO(n), d, "torus")
        b = weighted_basis(BSO(n), d, "pi")
        for w in range(d + 1):
            assert _same(a.subspace(w), b.subspace(w))


def test_weight_bso_examples():
    assert weight_bso(6, parse_w("w6", 6)) == 4
    assert weight_bso(4, parse_w("w2", 4)) == 2
    assert weight_bso(4, parse_w("w3", 4)) == 1
    assert weight_bso(5, parse_w("w4", 5)) == 4
    assert weight_bso(5, parse_w("w5", 5)) == 3
    with pytest.raises(ValueError):
        weight_bso(4, parse_w("w4^2", 4))


def test_weight_so_matches_torus_oracle():
    for n in range(2, 6):
        for d in range(1, 10):
            for P in basis_of_degree(n, d, "w-monomial"):
                if any(m[0] for m in P.monomials):
                    continue
                assert weight(BSO(n), P) == bso_weight(P, n)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_strictness(n):
    rows = verify_strictness(n, 10)
    assert all(r["passed"] for r in rows), [r for r in rows if not r["passed"]]


def test_iota_strictness_fails():
    rows = verify_iota_strictness(2, 6)
    bad = [r["degree"] for r in rows if not r["passed"]]
    assert 4 in bad


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.data())
def test_subadditive(n, data):
    def mono():
        e = data.draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
        return w_poly(tuple(e))

    p, q = mono(), mono()
    assert weight(BO(n), p * q) <= weight(BO(n), p) + weight(BO(n), q)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3), st.data())
def test_Q_lowers_weight_by_at_most_one(n, k, data):
    lam = data.draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    f = frozenset({Partition(sorted(lam, reverse=True))})
    g = engine(n).apply_Q(k, f)
    if g:
        assert odd_weight(g) >= odd_weight(f) - 1


def test_weight_in_quotient():
    assert weight_in_quotient(BO(2, 1), parse_w("w2", 2)) == 2
    assert weight_in_quotient(BO(3, 1), parse_w("w1*w2", 3)) == 3
    with pytest.raises(ValueError):
        weight_in_quotient(BO(2), parse_w("w2", 2))
    with pytest.raises(ValueError):
        weight_in_quotient(BO(2, 1), parse_w("w1^2", 2))


def test_report_is_json():
    wb = weighted_basis(BSO(5, 5), 6)
    json.dumps(wb.to_json())
    json.dumps(verify_strictness(4, 4))
    json.dumps(verify_wilson_decomposition(3, 5))
    assert coordinates(BSO(5, 5), parse_w("w2*w4", 5), 6)
