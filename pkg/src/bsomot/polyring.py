"""Polynomials over GF(2) and the symmetric-function bases used for H*(BO_n).

Two polynomial flavours share one class:

* ``x``-polynomials live in F2[x_1, ..., x_n], each variable in degree 1;
* ``w``-polynomials live in F2[w_1, ..., w_n] with ``w_i`` in degree ``i``.

A polynomial is a frozenset of exponent tuples; addition is symmetric
difference. :class:`SymmetricEngine` works in the monomial symmetric basis
directly (a symmetric polynomial is a set of partitions) and is what the
ring and weight code uses once ``n`` or the degree gets large.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Optional

__all__ = [
    "Partition",
    "F2Polynomial",
    "partitions",
    "add",
    "mul",
    "monomial_symmetric",
    "elementary",
    "expand_w",
    "to_monomial_basis",
    "to_w_basis",
    "is_symmetric",
    "basis_of_degree",
    "w_monomials",
    "divmod_poly",
    "SymmetricEngine",
    "engine",
]

EXPONENT_LIMIT = 1 << 16


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; zeros are dropped."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        return super().__new__(cls, sorted((p for p in parts if p), reverse=True))

    @property
    def length(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def odd_parts(self) -> tuple[int, ...]:
        return tuple(p for p in self if p & 1)

    @property
    def even_parts(self) -> tuple[int, ...]:
        return tuple(p for p in self if not p & 1)

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise ValueError(f"partition {list(self)} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > i) for i in range(self[0]))

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


def partitions(d: int, max_parts: Optional[int] = None, max_part: Optional[int] = None) -> list[Partition]:
    """Partitions of ``d``, lexicographically decreasing."""
    if d < 0:
        return []
    max_parts = d if max_parts is None else max_parts
    max_part = d if max_part is None else max_part
    return [Partition(p) for p in _partitions(d, max_parts, min(max_part, d))]


@lru_cache(maxsize=None)
def _partitions(d: int, max_parts: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if d == 0:
        return ((),)
    if max_parts == 0 or max_part == 0:
        return ()
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in _partitions(d - first, max_parts - 1, first):
            out.append((first,) + rest)
    return tuple(out)


class F2Polynomial:
    """Polynomial over GF(2) in ``nvars`` generators named ``gen``.

    ``gen`` is ``"x"`` (degree-1 variables) or ``"w"`` (Stiefel-Whitney
    generators, ``w_i`` in degree ``i``).
    """

    __slots__ = ("nvars", "gen", "monomials", "_hash")

    def __init__(self, nvars: int, monomials: Iterable[tuple[int, ...]] = (), gen: str = "x"):
        if gen not in ("x", "w"):
            raise ValueError(f"unknown generator family {gen!r}")
        terms: set[tuple[int, ...]] = set()
        for m in monomials:
            m = tuple(m)
            if len(m) != nvars:
                raise ValueError(f"exponent vector {m} does not have length {nvars}")
            if any(e < 0 or e >= EXPONENT_LIMIT for e in m):
                raise ValueError(f"exponent out of range in {m}")
            terms ^= {m}
        self.nvars = nvars
        self.gen = gen
        self.monomials = frozenset(terms)
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: frozenset, gen: str) -> "F2Polynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.gen = gen
        p.monomials = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int, gen: str = "x") -> "F2Polynomial":
        return cls._raw(nvars, frozenset(), gen)

    @classmethod
    def one(cls, nvars: int, gen: str = "x") -> "F2Polynomial":
        return cls._raw(nvars, frozenset({(0,) * nvars}), gen)

    @classmethod
    def variable(cls, i: int, nvars: int, gen: str = "x") -> "F2Polynomial":
        """The generator with 1-based index ``i``."""
        if not 1 <= i <= nvars:
            raise ValueError(f"{gen}{i} is not among {gen}1..{gen}{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls._raw(nvars, frozenset({tuple(e)}), gen)

    def monomial_degree(self, m: tuple[int, ...]) -> int:
        if self.gen == "x":
            return sum(m)
        return sum((i + 1) * e for i, e in enumerate(m))

    def degrees(self) -> set[int]:
        return {self.monomial_degree(m) for m in self.monomials}

    @property
    def degree(self) -> int:
        """Top degree; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_zero(self) -> bool:
        return not self.monomials

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def _check(self, other: "F2Polynomial") -> None:
        if not isinstance(other, F2Polynomial):
            raise TypeError(f"cannot combine polynomial with {type(other).__name__}")
        if other.nvars != self.nvars or other.gen != self.gen:
            raise ValueError(
                f"ambient mismatch: {self.gen}1..{self.gen}{self.nvars} vs "
                f"{other.gen}1..{other.gen}{other.nvars}"
            )

    def __add__(self, other: "F2Polynomial") -> "F2Polynomial":
        self._check(other)
        return F2Polynomial._raw(self.nvars, self.monomials ^ other.monomials, self.gen)

    __sub__ = __add__

    def __mul__(self, other: "F2Polynomial") -> "F2Polynomial":
        self._check(other)
        acc: set[tuple[int, ...]] = set()
        for a in self.monomials:
            for b in other.monomials:
                m = tuple(x + y for x, y in zip(a, b))
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return F2Polynomial._raw(self.nvars, frozenset(acc), self.gen)

    def __pow__(self, k: int) -> "F2Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = F2Polynomial.one(self.nvars, self.gen)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def homogeneous_part(self, d: int) -> "F2Polynomial":
        return F2Polynomial._raw(
            self.nvars,
            frozenset(m for m in self.monomials if self.monomial_degree(m) == d),
            self.gen,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Polynomial)
            and self.nvars == other.nvars
            and self.gen == other.gen
            and self.monomials == other.monomials
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.gen, self.monomials))
        return self._hash

    def sorted_monomials(self) -> list[tuple[int, ...]]:
        """Monomials by decreasing degree, then decreasing lex."""
        return sorted(self.monomials, key=lambda m: (self.monomial_degree(m), m), reverse=True)

    def __str__(self) -> str:
        from .grammar import format_poly

        return format_poly(self)

    def __repr__(self) -> str:
        return f"F2Polynomial({self.gen}, n={self.nvars}, {str(self)!r})"


def add(p: F2Polynomial, q: F2Polynomial) -> F2Polynomial:
    return p + q


def mul(p: F2Polynomial, q: F2Polynomial) -> F2Polynomial:
    return p * q


def monomial_symmetric(lam: Iterable[int], n: int) -> F2Polynomial:
    """The orbit sum m[lam] in ``n`` variables."""
    lam = Partition(lam)
    if len(lam) > n:
        raise ValueError(f"m{list(lam)} needs at least {len(lam)} variables, got {n}")
    return F2Polynomial._raw(n, frozenset(set(permutations(lam.padded(n)))), "x")


def elementary(l: int, n: int) -> F2Polynomial:
    if l < 0 or l > n:
        return F2Polynomial.zero(n)
    return monomial_symmetric([1] * l, n)


def expand_w(P: F2Polynomial, n: int) -> F2Polynomial:
    """Substitute ``w_l -> e_l(x_1..x_n)``."""
    if P.gen != "w":
        raise ValueError("expand_w expects a w-polynomial")
    for m in P.monomials:
        for i, e in enumerate(m):
            if e and i + 1 > n:
                raise ValueError(f"w{i + 1} is out of range for n={n}")
    es = [elementary(l, n) for l in range(1, n + 1)]
    result = F2Polynomial.zero(n)
    powers: dict[tuple[int, int], F2Polynomial] = {}
    for m in P.monomials:
        term = F2Polynomial.one(n)
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                if key not in powers:
                    powers[key] = es[i] ** e
                term = term * powers[key]
        result = result + term
    return result


def is_symmetric(p: F2Polynomial) -> bool:
    """Fixed by every adjacent transposition of the variables."""
    terms = p.monomials
    for i in range(p.nvars - 1):
        for m in terms:
            s = list(m)
            s[i], s[i + 1] = s[i + 1], s[i]
            if tuple(s) not in terms:
                return False
    return True


def to_monomial_basis(p: F2Polynomial) -> list[Partition]:
    """Partitions ``lam`` with ``p = sum m[lam]``, by stripping leading orbits."""
    if p.gen != "x":
        raise ValueError("to_monomial_basis expects an x-polynomial")
    if not is_symmetric(p):
        raise ValueError("polynomial is not symmetric")
    remaining = set(p.monomials)
    out = []
    while remaining:
        lead = max(remaining)
        lam = Partition(lead)
        orbit = set(permutations(lam.padded(p.nvars)))
        if not orbit <= remaining:
            raise ValueError("polynomial is not symmetric")
        remaining -= orbit
        out.append(lam)
    return out


def to_w_basis(p: F2Polynomial) -> F2Polynomial:
    """The unique polynomial in w_1..w_n expanding to the symmetric ``p``."""
    if p.gen != "x":
        raise ValueError("to_w_basis expects an x-polynomial")
    if not is_symmetric(p):
        raise ValueError("polynomial is not symmetric")
    n = p.nvars
    eng = engine(n)
    return eng.to_w(frozenset(to_monomial_basis(p)))


def w_monomials(n: int, d: int, skip_w1: bool = False) -> list[tuple[int, ...]]:
    """Exponent vectors over w_1..w_n of total degree ``d``.

    Ordered by the partition (parts <= n) they encode, lexicographically
    decreasing.
    """
    out = []
    for lam in partitions(d, max_part=n):
        e = [0] * n
        for part in lam:
            e[part - 1] += 1
        if skip_w1 and e and e[0]:
            continue
        out.append(tuple(e))
    return out


def basis_of_degree(n: int, d: int, basis: str = "monomial") -> list:
    """Index set of the degree-``d`` symmetric polynomials in ``n`` variables.

    ``"monomial"`` gives partitions with at most ``n`` parts (the m[lam]);
    ``"w-monomial"`` gives w-exponent vectors, i.e. partitions with parts <= n.
    """
    if basis == "monomial":
        return partitions(d, max_parts=n)
    if basis in ("w", "w-monomial"):
        return [F2Polynomial._raw(n, frozenset({e}), "w") for e in w_monomials(n, d)]
    raise ValueError(f"unknown basis {basis!r}")


def divmod_poly(p: F2Polynomial, q: F2Polynomial) -> tuple[F2Polynomial, F2Polynomial]:
    """Multivariate division in lex order: ``p = a*q + r``.

    ``r`` has no monomial divisible by the lex-leading monomial of ``q``.
    """
    p._check(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = max(q.monomials)
    quotient: set[tuple[int, ...]] = set()
    remainder: set[tuple[int, ...]] = set()
    work = set(p.monomials)
    while work:
        m = max(work)
        if all(a >= b for a, b in zip(m, lead)):
            t = tuple(a - b for a, b in zip(m, lead))
            quotient ^= {t}
            for qm in q.monomials:
                work ^= {tuple(a + b for a, b in zip(t, qm))}
        else:
            work.remove(m)
            remainder.add(m)
    return (
        F2Polynomial._raw(p.nvars, frozenset(quotient), p.gen),
        F2Polynomial._raw(p.nvars, frozenset(remainder), p.gen),
    )


# -- monomial symmetric basis engine ---------------------------------------

def _blocks(parts: tuple[int, ...]) -> list[tuple[int, int]]:
    """(value, multiplicity) pairs of a padded exponent pattern."""
    out: list[tuple[int, int]] = []
    for v in parts:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def _odd_binomial(a: int, b: int) -> bool:
    # Lucas: C(a, b) is odd iff the bits of b are a subset of those of a
    return 0 <= b <= a and (a & b) == b


class SymmetricEngine:
    """Arithmetic on symmetric polynomials in ``n`` variables, in the m-basis.

    Elements are frozensets of :class:`Partition` (each with at most ``n``
    parts); the coefficient of ``m[lam]`` is 1 iff ``lam`` is in the set.
    """

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("negative variable count")
        self.n = n
        self._wmono: dict[tuple[int, ...], frozenset] = {(0,) * n: frozenset({Partition()})}
        self._index: dict[int, dict[Partition, int]] = {}

    def basis(self, d: int) -> list[Partition]:
        return partitions(d, max_parts=self.n)

    def index(self, d: int) -> dict[Partition, int]:
        idx = self._index.get(d)
        if idx is None:
            idx = {lam: i for i, lam in enumerate(self.basis(d))}
            self._index[d] = idx
        return idx

    def mask(self, f: Iterable[Partition], d: int) -> int:
        idx = self.index(d)
        out = 0
        for lam in f:
            out ^= 1 << idx[lam]
        return out

    def unmask(self, v: int, d: int) -> frozenset:
        basis = self.basis(d)
        return frozenset(basis[i] for i in range(v.bit_length()) if (v >> i) & 1)

    def mul_e(self, f: Iterable[Partition], k: int) -> frozenset:
        """``f * e_k``."""
        n = self.n
        if k == 0:
            return frozenset(f)
        if k > n:
            return frozenset()
        acc: set[Partition] = set()
        for lam in f:
            blocks = _blocks(lam.padded(n))
            for choice in _compositions([b for _, b in blocks], k):
                new = []
                for (v, b), c in zip(blocks, choice):
                    new.extend([v + 1] * c)
                    new.extend([v] * (b - c))
                nu = Partition(new)
                # count the ways nu arises: choose the incremented entries
                # inside each value block of nu
                mult = {}
                for p in nu.padded(n):
                    mult[p] = mult.get(p, 0) + 1
                odd = True
                for (v, b), c in zip(blocks, choice):
                    if c and not _odd_binomial(mult[v + 1], c):
                        odd = False
                        break
                if odd:
                    acc ^= {nu}
        return frozenset(acc)

    def from_w_monomial(self, e: tuple[int, ...]) -> frozenset:
        """m-expansion of ``prod w_i^{e_i}``."""
        got = self._wmono.get(e)
        if got is not None:
            return got
        # peel one factor of the largest generator present
        i = max(j for j, a in enumerate(e) if a)
        rest = list(e)
        rest[i] -= 1
        got = self.mul_e(self.from_w_monomial(tuple(rest)), i + 1)
        self._wmono[e] = got
        return got

    def from_w(self, P: F2Polynomial) -> frozenset:
        if P.gen != "w":
            raise ValueError("expected a w-polynomial")
        if P.nvars > self.n:
            for m in P.monomials:
                if any(m[self.n:]):
                    raise ValueError(f"generator beyond w{self.n} in a {self.n}-variable engine")
        acc: set[Partition] = set()
        for m in P.monomials:
            e = tuple(m[: self.n]) + (0,) * (self.n - len(m))
            acc ^= self.from_w_monomial(e)
        return frozenset(acc)

    def to_w(self, f: Iterable[Partition], nvars: Optional[int] = None) -> F2Polynomial:
        """Leading-term elimination back to a polynomial in w_1..w_n."""
        n = self.n
        work = set(f)
        out: set[tuple[int, ...]] = set()
        while work:
            lam = max(work)
            padded = lam.padded(n) + (0,)
            e = tuple(padded[i] - padded[i + 1] for i in range(n))
            out ^= {e}
            work ^= self.from_w_monomial(e)
        nvars = n if nvars is None else nvars
        if nvars < n:
            raise ValueError("cannot shrink the generator range")
        pad = (0,) * (nvars - n)
        return F2Polynomial._raw(nvars, frozenset(m + pad for m in out), "w")

    def apply_Q(self, k: int, f: Iterable[Partition]) -> frozenset:
        """Milnor operation Q_k in the m-basis (derivation on x-variables)."""
        if k < 0:
            raise ValueError("Milnor index must be nonnegative")
        s = (1 << (k + 1)) - 1
        f = frozenset(f)
        candidates = set()
        for lam in f:
            for u in set(lam):
                if u & 1:
                    parts = list(lam)
                    parts[parts.index(u)] = u + s
                    candidates.add(Partition(parts))
        out = set()
        for nu in candidates:
            mult: dict[int, int] = {}
            for p in nu:
                mult[p] = mult.get(p, 0) + 1
            coeff = 0
            for v, c in mult.items():
                if v > s and (v - s) & 1 and c & 1:
                    parts = list(nu)
                    parts[parts.index(v)] = v - s
                    if Partition(parts) in f:
                        coeff ^= 1
            if coeff:
                out.add(nu)
        return frozenset(out)

    def to_x(self, f: Iterable[Partition]) -> F2Polynomial:
        acc: frozenset = frozenset()
        for lam in f:
            acc = acc ^ monomial_symmetric(lam, self.n).monomials
        return F2Polynomial._raw(self.n, acc, "x")


def _compositions(sizes: list[int], k: int) -> Iterator[tuple[int, ...]]:
    """Vectors ``c`` with ``0 <= c_i <= sizes[i]`` and ``sum c = k``."""
    if not sizes:
        if k == 0:
            yield ()
        return
    head, tail = sizes[0], sizes[1:]
    room = sum(tail)
    for c in range(max(0, k - room), min(head, k) + 1):
        for rest in _compositions(tail, k - c):
            yield (c,) + rest


_ENGINES: dict[int, SymmetricEngine] = {}


def engine(n: int) -> SymmetricEngine:
    """Shared engine for ``n`` variables (caches grow monotonically)."""
    eng = _ENGINES.get(n)
    if eng is None:
        eng = SymmetricEngine(n)
        _ENGINES[n] = eng
    return eng
