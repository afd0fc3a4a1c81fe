"""Slow, independent reference computations used to produce frozen test values.

Nothing here touches the m-basis engine: classes are expanded to explicit
x-polynomials and inspected monomial by monomial.
"""

from __future__ import annotations

from itertools import permutations, product

from bsomot.gf2linalg import mask_kernel, mask_rank
from bsomot.milnor import restrict_to_so_torus
from bsomot.polyring import F2Polynomial, expand_w, w_monomials


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


def symmetric_dimension(n: int, d: int) -> int:
    """dim of the invariants of Sigma_n on degree-d polynomials, by linear algebra:
    kernel of v -> (s_i v - v) over all adjacent transpositions s_i."""
    mons = monomials_of_degree(n, d)
    index = {m: i for i, m in enumerate(mons)}
    # column j: image of monomial j under the stacked map, rows are (i, monomial)
    cols = []
    N = len(mons)
    for m in mons:
        col = 0
        for i in range(n - 1):
            t = list(m)
            t[i], t[i + 1] = t[i + 1], t[i]
            t = tuple(t)
            if t != m:
                col ^= (1 << (i * N + index[t])) ^ (1 << (i * N + index[m]))
        cols.append(col)
    return len(mask_kernel(cols))


def orbit_sum(exps: tuple[int, ...]) -> F2Polynomial:
    n = len(exps)
    return F2Polynomial(n, set(permutations(exps)))


def torus_weight(p: F2Polynomial) -> int:
    """Max number of odd exponents over the monomials of an x-polynomial."""
    if not p:
        raise ValueError("zero")
    return max(sum(1 for a in m if a & 1) for m in p.monomials)


def bo_weight(P: F2Polynomial, n: int) -> int:
    return torus_weight(expand_w(P, n))


def bso_weight(P: F2Polynomial, n: int) -> int:
    return torus_weight(restrict_to_so_torus(P, n))


def w_poly(exps: tuple[int, ...]) -> F2Polynomial:
    return F2Polynomial(len(exps), {tuple(exps)}, "w")


def filtration_dims_bo(n: int, d: int) -> dict[int, int]:
    """dim F^w H^d(BO_n) for each w, from x-expansions of the w-monomial basis."""
    vecs = [expand_w(w_poly(e), n) for e in w_monomials(n, d)]
    return _filtration_dims(vecs, d)


def filtration_dims_bso(n: int, d: int) -> dict[int, int]:
    vecs = [restrict_to_so_torus(w_poly(e), n) for e in w_monomials(n, d, skip_w1=True)]
    return _filtration_dims(vecs, d)


def _filtration_dims(vecs: list[F2Polynomial], d: int) -> dict[int, int]:
    mons = sorted({m for v in vecs for m in v.monomials})
    idx = {m: i for i, m in enumerate(mons)}
    out = {}
    for w in range(d + 1):
        high = [m for m in mons if sum(1 for a in m if a & 1) > w]
        hmask = sum(1 << idx[m] for m in high)
        cols = []
        for v in vecs:
            c = 0
            for m in v.monomials:
                c |= 1 << idx[m]
            cols.append(c & hmask)
        out[w] = len(mask_kernel(cols))
    return out


def brute_rank(rows: list[list[int]]) -> int:
    """Rank over GF(2) by enumerating the row space."""
    if not rows:
        return 0
    ncols = len(rows[0])
    span = {tuple([0] * ncols)}
    for r in rows:
        span |= {tuple((a + b) % 2 for a, b in zip(s, r)) for s in span}
    return len(span).bit_length() - 1


def brute_kernel_dim(rows: list[list[int]], ncols: int) -> int:
    count = 0
    for v in product((0, 1), repeat=ncols):
        if all(sum(a * b for a, b in zip(r, v)) % 2 == 0 for r in rows):
            count += 1
    return count.bit_length() - 1
