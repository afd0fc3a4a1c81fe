"""Milnor operations Q_k as derivations on F2[x_1..x_n], H*(BO_n) and H*(BSO_n).

On a variable, ``Q_k x = x^(2^(k+1))``; the derivation rule then sends
``x^a`` with ``a`` odd to ``x^(a + 2^(k+1) - 1)`` and kills even powers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .polyring import (
    F2Polynomial,
    divmod_poly,
    elementary,
    engine,
    expand_w,
    to_monomial_basis,
)

__all__ = [
    "MilnorOp",
    "apply_Q",
    "apply_Q_sequence",
    "apply_Q_w",
    "apply_Q_so",
    "restrict_to_so_torus",
    "restrict_to_so_torus_x",
    "InternalError",
    "random_polynomial",
    "check_algebra_laws",
]


class InternalError(RuntimeError):
    """A mathematical invariant the code relies on did not hold."""


@dataclass(frozen=True)
class MilnorOp:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("Milnor index must be nonnegative")

    @property
    def degree_shift(self) -> int:
        return (1 << (self.k + 1)) - 1

    @property
    def motivic_bidegree_shift(self) -> tuple[int, int]:
        return self.degree_shift, (1 << self.k) - 1

    def __call__(self, p: F2Polynomial) -> F2Polynomial:
        return apply_Q(self.k, p)


def apply_Q(k: int, p: F2Polynomial) -> F2Polynomial:
    if k < 0:
        raise ValueError("Milnor index must be nonnegative")
    if p.gen != "x":
        raise ValueError("apply_Q acts on x-polynomials; use apply_Q_w for w-polynomials")
    s = (1 << (k + 1)) - 1
    acc: set[tuple[int, ...]] = set()
    for m in p.monomials:
        for i, a in enumerate(m):
            if a & 1:
                t = m[:i] + (a + s,) + m[i + 1:]
                if t in acc:
                    acc.remove(t)
                else:
                    acc.add(t)
    return F2Polynomial._raw(p.nvars, frozenset(acc), "x")


def _check_increasing(ks: Sequence[int]) -> None:
    if any(k < 0 for k in ks):
        raise ValueError("Milnor index must be nonnegative")
    if any(a >= b for a, b in zip(ks, ks[1:])):
        raise ValueError(f"index list {list(ks)} is not strictly increasing")


def apply_Q_sequence(ks: Sequence[int], p: F2Polynomial) -> F2Polynomial:
    """``Q_{ks[0]} Q_{ks[1]} ... p`` (the operations commute)."""
    _check_increasing(ks)
    for k in ks:
        p = apply_Q(k, p)
    return p


def apply_Q_w(k: int, P: F2Polynomial, n: int) -> F2Polynomial:
    """Q_k on H*(BO_n) presented as F2[w_1..w_n]."""
    eng = engine(n)
    return eng.to_w(eng.apply_Q(k, eng.from_w(P)), nvars=P.nvars)


def restrict_to_so_torus(P: F2Polynomial, n: int) -> F2Polynomial:
    """Image of a w-polynomial in F2[x_1..x_n]/(e_1) = F2[x_1..x_{n-1}].

    This is restriction to the diagonal 2-torus of SO_n, where the last
    coordinate is the sum of the others.
    """
    return restrict_to_so_torus_x(expand_w(P, n), n)


def apply_Q_so(k: int, P: F2Polynomial, n: int) -> F2Polynomial:
    """Q_k on H*(BSO_n) = F2[w_2..w_n].

    Expands to x-variables, applies the derivation, checks that the part
    dropped by killing w_1 really is a multiple of e_1, and re-expresses the
    result in w_2..w_n.
    """
    if P.gen != "w":
        raise ValueError("apply_Q_so expects a w-polynomial")
    if any(m[0] for m in P.monomials):
        raise ValueError("BSO_n presentation has no w1")
    if k < 0:
        raise ValueError("Milnor index must be nonnegative")
    if not P:
        return P
    full = apply_Q(k, expand_w(P, n))
    eng = engine(n)
    W = eng.to_w(frozenset(to_monomial_basis(full)), nvars=P.nvars)
    kept = F2Polynomial._raw(P.nvars, frozenset(m for m in W.monomials if not m[0]), "w")
    dropped = full + expand_w(kept, n)
    if dropped:
        _, rem = divmod_poly(dropped, elementary(1, n))
        if rem:
            raise InternalError(f"Q_{k} image is not congruent to its w1-free part modulo e1")
    # the w1-free part must also be detected on the SO_n torus
    if n >= 2:
        lhs = restrict_to_so_torus(kept, n)
        rhs = restrict_to_so_torus_x(full, n)
        if lhs != rhs:
            raise InternalError("reduction modulo e1 disagrees with the torus restriction")
    return kept


def restrict_to_so_torus_x(p: F2Polynomial, n: int) -> F2Polynomial:
    """Substitute ``x_n = x_1 + ... + x_{n-1}`` in an x-polynomial."""
    m = n - 1
    if m == 0:
        # SO_1 is trivial: only constants survive
        return F2Polynomial.one(0) if (0,) in p.monomials else F2Polynomial.zero(0)
    last = F2Polynomial._raw(m, frozenset(tuple(int(j == i) for j in range(m)) for i in range(m)), "x")
    powers = [F2Polynomial.one(m)]
    out = F2Polynomial.zero(m)
    for mono in p.monomials:
        a = mono[-1]
        while len(powers) <= a:
            powers.append(powers[-1] * last)
        out = out + F2Polynomial._raw(m, frozenset({mono[:-1]}), "x") * powers[a]
    return out


def random_polynomial(rng: random.Random, n: int, maxdeg: int, terms: int = 6) -> F2Polynomial:
    """A random x-polynomial with at most ``terms`` monomials of degree <= ``maxdeg``."""
    mons = set()
    for _ in range(rng.randint(1, terms)):
        d = rng.randint(0, maxdeg)
        cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
        e = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        mons ^= {tuple(e)}
    return F2Polynomial(n, mons)


def check_algebra_laws(samples: int = 1000, seed: int = 0, max_n: int = 5,
                       max_degree: int = 20, max_index: int = 3) -> dict:
    """Derivation rule, Q_k Q_k = 0 and Q_i Q_j = Q_j Q_i on seeded random inputs."""
    rng = random.Random(seed)
    failures: list[dict] = []
    for t in range(samples):
        n = rng.randint(1, max_n)
        p = random_polynomial(rng, n, max_degree // 2)
        q = random_polynomial(rng, n, max_degree - max_degree // 2)
        i, k = rng.randint(0, max_index), rng.randint(0, max_index)
        lhs = apply_Q(k, p * q)
        rhs = apply_Q(k, p) * q + p * apply_Q(k, q)
        if lhs != rhs:
            failures.append({"sample": t, "law": "derivation", "k": k})
        if apply_Q(k, apply_Q(k, p)):
            failures.append({"sample": t, "law": "square", "k": k})
        if apply_Q(i, apply_Q(k, p)) != apply_Q(k, apply_Q(i, p)):
            failures.append({"sample": t, "law": "commute", "i": i, "k": k})
        for d in p.degrees():
            out = apply_Q(k, p.homogeneous_part(d))
            if out and out.degrees() != {d + (1 << (k + 1)) - 1}:
                failures.append({"sample": t, "law": "degree", "k": k})
    return {"samples": samples, "seed": seed, "failures": failures, "passed": not failures}
