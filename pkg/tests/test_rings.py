from __future__ import annotations

import pytest

from bsomot.gf2linalg import F2Matrix, mask_rank, rank
from bsomot.grammar import parse_w
from bsomot.polyring import F2Polynomial, basis_of_degree
from bsomot.rings import (
    BO,
    BSO,
    RingMap,
    RingPresentation,
    coordinates,
    delta_map,
    delta_top,
    epsilon_star,
    iota_star,
    kappa_star,
    map_matrix,
    parse_group,
    pi_star,
    quotient_basis,
    verify_iota_kappa_square,
    verify_localization_sequence,
)
from oracles import bso_weight


def W(text, n):
    return parse_w(text, n)


def test_presentations():
    assert [g for g, _ in BSO(4).generators()] == ["w2", "w3", "w4"]
    assert [g for g, _ in BO(3).generators()] == ["w1", "w2", "w3"]
    assert BO(3, 1).quotient_class == W("w1^2", 3)
    assert BSO(4, 4).quotient_class == W("c4", 4)
    assert BSO(3, exterior=True).generators()[-1] == ("x", 1)
    with pytest.raises(ValueError):
        BSO(4, 1)
    with pytest.raises(ValueError):
        RingPresentation("BU", 3)


def test_parse_group():
    assert parse_group("bo:3") == BO(3)
    assert parse_group("bso:6/c6") == BSO(6, 6)
    assert parse_group(" BO:4/c1 ") == BO(4, 1)
    for bad in ["bo3", "bso:x", "bo:3/x1", "su:2"]:
        with pytest.raises(ValueError):
            parse_group(bad)


def test_kappa_images():
    for n in range(3, 8):
        k = kappa_star(n, quotients=False)
        assert k(W(f"w{n}", n)) == W(f"w1*w{n - 1}", n - 1)
        assert k(W("w2", n)) == W("w2 + w1^2", n - 1)
        assert k(W(f"c{n}", n)) == W(f"c1*c{n - 1}", n - 1)
    with pytest.raises(ValueError):
        kappa_star(2)


def test_kappa_is_restriction_to_the_torus():
    # kappa* followed by BO_{n-1} -> torus equals restriction to the SO_n torus
    from bsomot.milnor import restrict_to_so_torus
    from bsomot.polyring import expand_w

    for n in range(3, 7):
        k = kappa_star(n, quotients=False)
        for d in range(0, 8):
            for P in basis_of_degree(n, d, "w-monomial"):
                if any(m[0] for m in P.monomials):
                    continue
                assert expand_w(k(P), n - 1) == restrict_to_so_torus(P, n)


def test_kappa_odd_classes_recomputed():
    # the image of w_l for odd l < n is m[2,1^(l-2)]
    from bsomot.polyring import engine
    from bsomot.polyring import Partition

    for n in range(4, 9):
        eng = engine(n - 1)
        for l in range(3, n, 2):
            img = kappa_star(n, quotients=False)(W(f"w{l}", n))
            assert eng.from_w(img) == frozenset({Partition([2] + [1] * (l - 2))})


def test_iota():
    i = iota_star(4, "O")
    assert not i(W("w4", 4))
    assert i(W("w2*w4 + w3", 4)) == W("w3", 3)
    m = map_matrix(iota_star(3, "O"), 3)
    assert (m.nrows, m.ncols) == (2, 3) and rank(m) == 2
    for n in range(2, 7):
        f = iota_star(n, "O")
        for d in range(0, 13):
            assert rank(map_matrix(f, d)) == BO(n - 1).dim(d)
    with pytest.raises(ValueError):
        iota_star(2, "SO")


def test_epsilon():
    e = epsilon_star(4)
    assert not e(W("w1", 4))
    assert e(W("w2 + w1^2", 4)) == W("w2", 4)
    for n in range(2, 6):
        for d in range(0, 11):
            m = map_matrix(epsilon_star(n), d)
            assert rank(m) == BSO(n).dim(d)
            # kernel is the degree-d part of (w1): dim H^{d-1}(BO_n)
            assert m.ncols - rank(m) == BO(n).dim(d - 1)


def test_map_matrix_identity():
    ident = RingMap("id", BO(3), BO(3), {f"w{i}": W(f"w{i}", 3) for i in range(1, 4)})
    for d in range(6):
        assert map_matrix(ident, d) == F2Matrix.identity(BO(3).dim(d))


def test_kappa_matrix_so3_degree2():
    m = map_matrix(kappa_star(3), 2)
    q = quotient_basis(BO(2, 1), 2)
    assert m == F2Matrix.from_columns([coordinates(BO(2, 1), W("w2 + w1^2", 2), 2)], q.dim)
    assert m.tolist() == [[1]]


def test_quotient_dims():
    assert BO(2, 1).dim(2) == 1
    assert BSO(4, 4).dim(4) == 2
    for R in [BO(3, 1), BSO(5, 5), BSO(4, 2)]:
        assert R.dim(0) == 1


def test_quotient_dims_oracle():
    for R in [BO(3, 1), BO(4, 1), BSO(4, 4), BSO(6, 6), BSO(5, 3)]:
        for d in range(0, 14):
            assert R.dim(d) == R.ambient.dim(d) - R.ambient.dim(d - 2 * R.quotient)


def test_ring_map_checks():
    with pytest.raises(ValueError):
        RingMap("bad", BO(2), BO(2), {"w1": W("w2", 2), "w2": W("w2", 2)})
    with pytest.raises(ValueError):
        RingMap("bad", BO(2), BO(2), {"w1": W("w1", 2)})


def test_quotient_map_must_respect_ideal():
    # c4 = w4^2 must land in the target ideal, which is zero here
    with pytest.raises(ValueError):
        RingMap("bad", BSO(4, 4), BSO(3), {"w2": W("w2", 3), "w3": W("w3", 3), "w4": W("w2^2", 3)})
    RingMap("ok", BSO(4, 4), BSO(3), {"w2": W("w2", 3), "w3": W("w3", 3),
                                      "w4": F2Polynomial.zero(3, "w")})


def test_delta_values():
    for n in range(3, 8):
        assert delta_top(n, W("w1", n - 1), 1) == F2Polynomial.one(n - 2, "w")
        assert not delta_top(n, W("w2 + w1^2", n - 1), 2)
    for n in range(5, 8):
        assert delta_top(n, W("w3*w1", n - 1), 4) == W("w3", n - 2)
        assert delta_top(n, W("w2^2*w3*w1", n - 1), 8) == W("w2^2*w3", n - 2)


@pytest.mark.parametrize("n", range(3, 7))
def test_sequence_exact(n):
    rows = verify_localization_sequence(n, 12)
    assert all(r["passed"] for r in rows), [r for r in rows if not r["passed"]]


@pytest.mark.parametrize("n", range(3, 7))
def test_kappa_injective(n):
    k = kappa_star(n)
    for d in range(0, 13):
        cols = k.columns(d)
        assert mask_rank(cols) == len(cols)


@pytest.mark.parametrize("n", range(3, 7))
def test_square_commutes(n):
    assert all(r["passed"] for r in verify_iota_kappa_square(n, 12))


def test_pi_exterior_iso():
    # H*(BSO_n){1, x} -> BO_n/c_1 is an isomorphism for odd n
    for n in (3, 5, 7):
        p = pi_star(n, exterior=True)
        for d in range(0, 12):
            cols = p.columns(d)
            assert len(cols) == BO(n, 1).dim(d) == mask_rank(cols)


def test_pi_is_determinant_twist():
    # w_k(det (x) gamma): on the torus every x_i is shifted by e_1
    from bsomot.polyring import elementary, expand_w

    for n in (3, 5):
        e1 = elementary(1, n)
        for k in range(2, n + 1):
            shifted = F2Polynomial.zero(n)
            from itertools import combinations

            for S in combinations(range(n), k):
                term = F2Polynomial.one(n)
                for i in S:
                    term = term * (F2Polynomial.variable(i + 1, n) + e1)
                shifted = shifted + term
            assert expand_w(pi_star(n)(W(f"w{k}", n)), n) == shifted
