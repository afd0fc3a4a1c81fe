"""Weight filtrations on H*(BO_n), H*(BSO_n) and their quotients.

On BO_n the weight of m[lambda] is its number of odd parts, and the
filtration piece F^w is spanned by the m[lambda] with at most ``w`` odd
parts (restriction to the diagonal 2-torus is injective in motivic
cohomology). The same number is recovered by Milnor operations: the weight
of ``x`` is the length of the longest nonzero ``Q_{i_1}...Q_{i_s} x``.

For BSO_n the filtration is pulled back along the strict embedding
``kappa*: H*(BSO_n) -> H*(BO_{n-1})``; for odd ``n`` it can also be pulled
back along ``pi*: H*(BSO_n) -> H*(BO_n)``, which is split by epsilon*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .gf2linalg import Echelon, mask_kernel, mask_rank, solve_masks
from .milnor import InternalError, _check_increasing
from .polyring import F2Polynomial, Partition, engine, partitions, to_monomial_basis
from .rings import (
    BO,
    BSO,
    RingPresentation,
    VerificationFailure,
    _kappa,
    coordinates,
    iota_star,
    pi_star,
    quotient_basis,
)

__all__ = [
    "WeightedBasis",
    "WilsonElement",
    "weight_bo",
    "q_length",
    "index_cap",
    "odd_weight",
    "wilson_basis",
    "verify_wilson_decomposition",
    "weighted_basis",
    "filtration",
    "filtration_dim",
    "weight",
    "weight_in_quotient",
    "weight_bso",
    "weight_so",
    "verify_strictness",
    "verify_iota_strictness",
]

ClassLike = Union[F2Polynomial, Iterable[Partition]]


def _m_set(n: int, p: ClassLike) -> frozenset:
    if isinstance(p, F2Polynomial):
        if p.gen == "w":
            if p.nvars != n:
                raise ValueError(f"w-polynomial in {p.nvars} variables used with n={n}")
            return engine(n).from_w(p)
        if p.nvars != n:
            raise ValueError(f"x-polynomial in {p.nvars} variables used with n={n}")
        return frozenset(to_monomial_basis(p))
    return frozenset(Partition(lam) for lam in p)


def odd_weight(f: Iterable[Partition]) -> int:
    """Largest number of odd parts over the m-basis support (the torus weight)."""
    f = list(f)
    if not f:
        raise ValueError("the zero class has no weight")
    return max(sum(1 for a in lam if a & 1) for lam in f)


def index_cap(f: Iterable[Partition]) -> int:
    """Indices above this cannot change the outcome of the Q-search.

    Past ``bit_length(max part)`` every further index moves an odd part
    beyond all existing parts, and the search never needs more fresh
    indices than the number of odd parts.
    """
    f = list(f)
    top = max((lam[0] for lam in f if lam), default=0)
    return top.bit_length() + odd_weight(f) + 1


def q_length(n: int, p: ClassLike, max_index: Optional[int] = None,
             degree_cap: Optional[int] = None) -> int:
    """Longest ``s`` with some ``Q_{i_1}...Q_{i_s} p != 0``, indices increasing.

    ``degree_cap`` bounds the total degree of every intermediate class; the
    index range is then the one whose shifts fit under the cap.
    """
    f = _m_set(n, p)
    if not f:
        raise ValueError("the zero class has no weight")
    eng = engine(n)
    if max_index is None:
        max_index = index_cap(f)
    d0 = sum(next(iter(f)))
    if degree_cap is not None:
        room = degree_cap - d0
        k = 0
        while (1 << (k + 1)) - 1 <= room:
            k += 1
        max_index = min(max_index, k - 1)
    best = 0

    def search(g: frozenset, start: int, depth: int, deg: int) -> None:
        nonlocal best
        if depth > best:
            best = depth
        if depth + odd_weight(g) <= best:
            return
        for k in range(start, max_index + 1):
            shift = (1 << (k + 1)) - 1
            if degree_cap is not None and deg + shift > degree_cap:
                break
            h = eng.apply_Q(k, g)
            if h:
                search(h, k + 1, depth + 1, deg + shift)

    search(f, 0, 0, d0)
    return best


def weight_bo(n: int, p: ClassLike, degree_cap: Optional[int] = None) -> int:
    """Weight of a nonzero class of H*(BO_n) by the Milnor-operation criterion."""
    return q_length(n, p, degree_cap=degree_cap)


# -- Wilson basis -----------------------------------------------------------


@dataclass(frozen=True)
class WilsonElement:
    """``Q_{applied_qs} m[lam]`` with ``k`` odd parts; weight ``k - len(applied_qs)``."""

    lam: Partition
    applied_qs: tuple[int, ...]
    n: int

    @property
    def k(self) -> int:
        return len(self.lam.odd_parts)

    @property
    def weight(self) -> int:
        return self.k - len(self.applied_qs)

    @property
    def degree(self) -> int:
        return self.lam.degree + sum((1 << (i + 1)) - 1 for i in self.applied_qs)

    @property
    def group_index(self) -> int:
        """Index of the summand Q(k)G_{k-1} this element lies in (``k - 1``)."""
        return self.k - 1

    def expand(self) -> frozenset:
        eng = engine(self.n)
        f = frozenset({self.lam})
        for i in self.applied_qs:
            f = eng.apply_Q(i, f)
        return f

    def label(self) -> str:
        qs = "".join(f"Q{i}" for i in self.applied_qs)
        return qs + "m[" + ",".join(map(str, self.lam)) + "]"


def wilson_admissible(lam: Partition) -> bool:
    """Each even value of odd multiplicity sits strictly inside some window
    ``(2s_v + 2^v, 2s_v + 2^(v+1))``, ``v`` counted from 1 over the odd
    parts in increasing order."""
    odd = sorted(lam.odd_parts)
    s = [(a - 1) // 2 for a in odd]
    counts: dict[int, int] = {}
    for a in lam.even_parts:
        counts[a] = counts.get(a, 0) + 1
    for val, mult in counts.items():
        if mult % 2 == 0:
            continue
        if not any(2 * s[v - 1] + (1 << v) < val < 2 * s[v - 1] + (1 << (v + 1))
                   for v in range(1, len(s) + 1)):
            return False
    return True


def wilson_basis(n: int, d: int, admissible_only: bool = True) -> list[WilsonElement]:
    out = []
    for k in range(0, n + 1):
        for j in range(0, k + 1):
            for qs in combinations(range(k), j):
                rest = d - sum((1 << (i + 1)) - 1 for i in qs)
                if rest < 0:
                    continue
                for lam in partitions(rest, max_parts=n):
                    if len(lam.odd_parts) != k:
                        continue
                    if admissible_only and not wilson_admissible(lam):
                        continue
                    out.append(WilsonElement(lam, tuple(qs), n))
    return out


def verify_wilson_decomposition(n: int, d: int, admissible_only: bool = True) -> dict:
    eng = engine(n)
    elems = wilson_basis(n, d, admissible_only)
    masks = [eng.mask(e.expand(), d) for e in elems]
    dim = len(eng.basis(d))
    rk = mask_rank(masks)
    report = {
        "n": n,
        "degree": d,
        "count": len(elems),
        "rank": rk,
        "dim": dim,
        "admissibility_filter": admissible_only,
    }
    report["passed"] = rk == len(elems) == dim
    return report


# -- weighted bases ---------------------------------------------------------


@dataclass
class WeightedBasis:
    """Adapted basis of one degree: ``F^w`` is spanned by the entries of weight <= w.

    ``vectors`` are coordinate masks over the ring's chosen basis in that
    degree (quotient representatives for quotient rings).
    """

    ring: RingPresentation
    degree: int
    vectors: list[int]
    weights: list[int]
    route: str = "torus"
    _solver: Optional[list] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def filtration_dim(self, w: int) -> int:
        return sum(1 for x in self.weights if x <= w)

    def subspace(self, w: int) -> list[int]:
        return [v for v, x in zip(self.vectors, self.weights) if x <= w]

    def histogram(self) -> dict[int, int]:
        h: dict[int, int] = {}
        for x in self.weights:
            h[x] = h.get(x, 0) + 1
        return dict(sorted(h.items()))

    def weight_of(self, v: int) -> int:
        """Weight of a nonzero coordinate vector."""
        if not v:
            raise ValueError("the zero class has no weight")
        combo = solve_masks(self.vectors, v)
        if combo is None:
            raise ValueError("vector is not in the span of the basis")
        return max(self.weights[i] for i in range(len(self.vectors)) if (combo >> i) & 1)

    def elements(self) -> list[tuple[F2Polynomial, int]]:
        amb = self.ring.ambient
        out = []
        for v, x in zip(self.vectors, self.weights):
            if self.ring.quotient is not None:
                v = quotient_basis(self.ring, self.degree).lift(v)
            out.append((amb.element(v, self.degree), x))
        return out

    def to_json(self) -> dict:
        from .grammar import format_poly

        return {
            "ring": self.ring.name,
            "degree": self.degree,
            "entries": [{"class": format_poly(p), "weight": x} for p, x in self.elements()],
        }


def _adapted(vectors: Sequence[int], weights_of: Sequence[int], levels: Sequence[int],
             high_masks: dict[int, int]) -> tuple[list[int], list[int]]:
    """Adapted basis of the domain of ``vectors`` (column ``i`` = image of
    basis vector ``i``) for the filtration ``F^w = {v : image avoids high_masks[w]}``."""
    ech = Echelon()
    out_v, out_w = [], []
    for w in levels:
        cols = [c & high_masks[w] for c in vectors]
        for combo in mask_kernel(cols):
            if ech.add(combo):
                out_v.append(combo)
                out_w.append(w)
        if len(ech) == len(vectors):
            break
    if len(ech) != len(vectors):
        raise InternalError("filtration does not exhaust the space")
    return out_v, out_w


def _torus_data(ring: RingPresentation, d: int, route: str) -> tuple[list[int], list[int]]:
    """m-basis images of the ambient basis and the odd-part count per m-index."""
    n = ring.n
    if ring.kind == "BO":
        eng = engine(n)
        images = [eng.mask(eng.from_w_monomial(m), d) for m in ring.ambient.ambient_basis(d)]
    else:
        if n == 1:
            return [0] * len(ring.ambient.ambient_basis(d)), []
        if route == "pi":
            f = pi_star(n)
            eng = engine(n)
        elif route in ("kappa", "torus"):
            f = _kappa(n, False) if n >= 3 else _kappa2()
            eng = engine(n - 1)
        else:
            raise ValueError(f"unknown route {route!r}")
        images = []
        for m in ring.ambient.ambient_basis(d):
            P = f._monomial_image(m)
            images.append(eng.mask(eng.from_w(P), d))
    wts = [len(lam.odd_parts) for lam in eng.basis(d)]
    return images, wts


def _kappa2():
    # kappa* for SO_2: w_2 -> w_1^2 in BO_1
    from .rings import RingMap, _MAPS

    got = _MAPS.get(("kappa", 2, False))
    if got is None:
        w1 = F2Polynomial.variable(1, 1, "w")
        got = RingMap("kappa*_2", BSO(2), BO(1), {"w2": w1 * w1})
        _MAPS[("kappa", 2, False)] = got
    return got


_WB: dict = {}


def weighted_basis(ring: RingPresentation, d: int, route: str = "torus") -> WeightedBasis:
    """Adapted weighted basis of ``ring`` in degree ``d``.

    ``route`` picks how BSO_n weights are detected: ``"kappa"`` (also the
    default ``"torus"``) via BO_{n-1}, ``"pi"`` via BO_n for odd ``n``.
    """
    if ring.exterior:
        return _exterior_basis(ring, d, route)
    key = (ring, d, route)
    got = _WB.get(key)
    if got is not None:
        return got
    amb = ring.ambient
    if ring.kind == "BSO" and ring.n == 1:
        vecs = [1] if d == 0 else []
        got = WeightedBasis(ring, d, vecs, [0] * len(vecs), route)
        _WB[key] = got
        return got
    images, wts = _torus_data(amb, d, route)
    top = max(wts, default=0)
    levels = list(range(0, top + 1))
    high = {w: sum(1 << i for i, x in enumerate(wts) if x > w) for w in levels}
    vecs, ws = _adapted(images, wts, levels, high)
    if ring.quotient is not None:
        q = quotient_basis(ring, d)
        ech = Echelon()
        qv, qw = [], []
        for v, w in zip(vecs, ws):
            r = q.reduce(v)
            if ech.add(r):
                qv.append(r)
                qw.append(w)
        if len(qv) != q.dim:
            raise InternalError(f"quotient filtration of {ring.name} does not exhaust degree {d}")
        vecs, ws = qv, qw
    got = WeightedBasis(ring, d, vecs, ws, route)
    _WB[key] = got
    return got


def _exterior_basis(ring: RingPresentation, d: int, route: str) -> WeightedBasis:
    """H*(BSO_n){1, x} with x of weight 1: F^w = F^w . 1 (+) F^{w-1} . x."""
    base = ring.ambient
    base = RingPresentation(base.kind, base.n)
    lo = weighted_basis(base, d, route)
    hi = weighted_basis(base, d - 1, route)
    shift = len(base.ambient_basis(d))
    vecs = list(lo.vectors) + [v << shift for v in hi.vectors]
    ws = list(lo.weights) + [w + 1 for w in hi.weights]
    order = sorted(range(len(vecs)), key=lambda i: ws[i])
    return WeightedBasis(ring, d, [vecs[i] for i in order], [ws[i] for i in order], route)


def filtration(ring: RingPresentation, d: int, w: int, route: str = "torus") -> list[int]:
    """Basis of F^w in degree ``d`` (coordinate masks)."""
    return weighted_basis(ring, d, route).subspace(w)


def filtration_dim(ring: RingPresentation, d: int, w: int, route: str = "torus") -> int:
    if d < 0 or w < 0:
        return 0
    return weighted_basis(ring, d, route).filtration_dim(w)


def _homogeneous_degree(P: F2Polynomial) -> int:
    degs = P.degrees()
    if len(degs) != 1:
        raise ValueError("class must be nonzero and homogeneous")
    return next(iter(degs))


def weight(ring: RingPresentation, P: F2Polynomial, route: str = "torus") -> int:
    """Weight of a nonzero homogeneous class of ``ring`` given by a w-polynomial."""
    d = _homogeneous_degree(P)
    v = coordinates(ring, P, d)
    if not v:
        raise ValueError(f"class is zero in {ring.name}")
    return weighted_basis(ring, d, route).weight_of(v)


def weight_in_quotient(ring: RingPresentation, P: F2Polynomial, d: Optional[int] = None) -> int:
    """Least ``w`` with ``P`` in ``F^w + (quotient class)`` in degree ``d``."""
    if ring.quotient is None:
        raise ValueError(f"{ring.name} is not a quotient ring")
    if d is None:
        d = _homogeneous_degree(P)
    v = coordinates(ring, P, d)
    if not v:
        raise ValueError(f"class is zero in {ring.name}")
    return weighted_basis(ring, d).weight_of(v)


def weight_bso(n: int, P: F2Polynomial) -> int:
    """Weight of ``P`` in H*_{SO_n}/c_n, read off from kappa*(P) in H*_{O_{n-1}}/c_1."""
    src = BSO(n, n)
    d = _homogeneous_degree(P)
    if not coordinates(src, P, d):
        raise ValueError(f"class is zero in {src.name}")
    k = _kappa(n, True) if n >= 3 else None
    if k is None:
        raise ValueError("weight_bso needs n >= 3")
    image = k(P)
    tgt = BO(n - 1, 1)
    if not coordinates(tgt, image, d):
        raise InternalError(f"kappa* killed a nonzero class of {src.name}")
    return weight_in_quotient(tgt, image, d)


def weight_so(n: int, P: F2Polynomial, route: str = "torus") -> int:
    """Weight in the unquotiented ring H*(BSO_n)."""
    return weight(BSO(n), P, route)


# -- strictness -------------------------------------------------------------


def _preimage(columns: Sequence[int], subspace: Sequence[int]) -> list[int]:
    """Basis (masks over the domain) of ``f^{-1}(subspace)``."""
    ech = Echelon(subspace)
    k = len(subspace)
    # kernel of v -> f(v) mod subspace
    reduced = [ech.reduce(c) for c in columns]
    return mask_kernel(reduced)


def _same_subspace(a: Sequence[int], b: Sequence[int]) -> bool:
    ra, rb = mask_rank(a), mask_rank(b)
    return ra == rb == mask_rank(list(a) + list(b))


def verify_strictness(n: int, maxdeg: int) -> list[dict]:
    """``F^w(BSO_n/c_n) = kappa*^{-1} F^w(BO_{n-1}/c_1)`` for all ``w``, degree by degree.

    The source filtration is detected through BO_n (``pi``) when ``n`` is odd
    and through the unquotiented kappa* otherwise.
    """
    src = BSO(n, n)
    tgt = BO(n - 1, 1)
    k = _kappa(n, True)
    route = "pi" if n % 2 else "kappa"
    rows = []
    for d in range(maxdeg + 1):
        cols = k.columns(d)
        injective = mask_rank(cols) == len(cols)
        sb = weighted_basis(src, d, route)
        tb = weighted_basis(tgt, d)
        ok = injective
        bad = []
        for w in range(0, d + 1):
            pre = _preimage(cols, tb.subspace(w))
            if not _same_subspace(sb.subspace(w), pre):
                ok = False
                bad.append(w)
        rows.append({
            "n": n,
            "degree": d,
            "dim": len(cols),
            "injective": injective,
            "histogram": {str(a): b for a, b in sb.histogram().items()},
            "failing_weights": bad,
            "passed": ok,
        })
    return rows


def verify_iota_strictness(m: int, maxdeg: int) -> list[dict]:
    """The same test for iota*: H*(BSO_{2m+1}) -> H*(BSO_{2m}); expected to fail."""
    f = iota_star(2 * m + 1, "SO")
    src, tgt = BSO(2 * m + 1), BSO(2 * m)
    rows = []
    for d in range(maxdeg + 1):
        cols = f.columns(d)
        sb = weighted_basis(src, d, "pi")
        tb = weighted_basis(tgt, d)
        bad = [w for w in range(0, d + 1)
               if not _same_subspace(sb.subspace(w), _preimage(cols, tb.subspace(w)))]
        rows.append({"m": m, "degree": d, "failing_weights": bad, "passed": not bad})
    return rows
