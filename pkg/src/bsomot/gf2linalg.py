"""Exact linear algebra over GF(2) on bit-packed rows.

A row (or vector) is a Python int: bit ``j`` holds the entry in column ``j``.
The mask-level helpers at the bottom are what the rest of the package uses
in its inner loops; :class:`F2Matrix` wraps them for callers who prefer
explicit shapes.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

__all__ = [
    "F2Matrix",
    "rank",
    "kernel_basis",
    "image_basis",
    "solve",
    "Echelon",
    "mask_rank",
    "mask_kernel",
    "bits_to_mask",
    "mask_to_bits",
]


def bits_to_mask(bits: Sequence[int]) -> int:
    mask = 0
    for j, b in enumerate(bits):
        if b & 1:
            mask |= 1 << j
    return mask


def mask_to_bits(mask: int, length: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(length))


class F2Matrix:
    """Immutable ``nrows x ncols`` matrix over GF(2)."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, rows: Iterable[Sequence[int]], ncols: Optional[int] = None):
        rows = [tuple(int(b) & 1 for b in r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError(f"row of length {len(r)} in a matrix with {ncols} columns")
        self.nrows = len(rows)
        self.ncols = ncols
        self._rows = tuple(bits_to_mask(r) for r in rows)

    @classmethod
    def from_masks(cls, masks: Iterable[int], ncols: int) -> "F2Matrix":
        m = cls.__new__(cls)
        m._rows = tuple(masks)
        m.nrows = len(m._rows)
        m.ncols = ncols
        limit = 1 << ncols
        for r in m._rows:
            if r < 0 or r >= limit:
                raise ValueError("row mask does not fit the column count")
        return m

    @classmethod
    def from_columns(cls, columns: Iterable[int], nrows: int) -> "F2Matrix":
        """Build from column masks (bit ``i`` of a column is row ``i``)."""
        columns = list(columns)
        rows = [0] * nrows
        for j, col in enumerate(columns):
            i = 0
            while col:
                if col & 1:
                    rows[i] |= 1 << j
                col >>= 1
                i += 1
        return cls.from_masks(rows, len(columns))

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls.from_masks([1 << i for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls.from_masks([0] * nrows, ncols)

    @property
    def row_masks(self) -> tuple[int, ...]:
        return self._rows

    def column_masks(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self._rows):
            j = 0
            while r:
                if r & 1:
                    cols[j] |= 1 << i
                r >>= 1
                j += 1
        return cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= j < self.ncols):
            raise IndexError(j)
        return (self._rows[i] >> j) & 1

    def tolist(self) -> list[list[int]]:
        return [list(mask_to_bits(r, self.ncols)) for r in self._rows]

    def transpose(self) -> "F2Matrix":
        return F2Matrix.from_masks(self.column_masks(), self.nrows)

    def apply(self, v: int) -> int:
        """Matrix-vector product on masks."""
        out = 0
        for i, r in enumerate(self._rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other):
        if isinstance(other, F2Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [self.apply(c) for c in other.column_masks()]
            return F2Matrix.from_columns(cols, self.nrows)
        bits = tuple(other)
        if len(bits) != self.ncols:
            raise ValueError("shape mismatch")
        return mask_to_bits(self.apply(bits_to_mask(bits)), self.nrows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.ncols == other.ncols
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.ncols, self._rows))

    def __repr__(self) -> str:
        return f"F2Matrix({self.tolist()!r})"


class Echelon:
    """Incrementally maintained reduced row echelon basis of a subspace.

    Pivots are lowest set bits. ``add`` returns True when the vector was
    independent of what was already there.
    """

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        # rows are fully reduced, so one pass over the pivots suffices
        for p, r in self.rows.items():
            if (v >> p) & 1:
                v ^= r
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        piv = (v & -v).bit_length() - 1
        for k, r in self.rows.items():
            if (r >> piv) & 1:
                self.rows[k] = r ^ v
        self.rows[piv] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[int]:
        return [self.rows[p] for p in sorted(self.rows)]


def mask_rank(masks: Iterable[int]) -> int:
    rows = [m for m in masks if m]
    rank_ = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank_ += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank_


def mask_kernel(columns: Sequence[int]) -> list[int]:
    """Kernel of the map whose ``j``-th column is ``columns[j]``.

    Returns masks over the column index set. The basis is the standard one
    attached to the free columns of the column reduction, so it depends
    only on the column order.
    """
    # track combinations: (image, combination-of-columns)
    reduced: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for j, col in enumerate(columns):
        combo = 1 << j
        v = col
        while v:
            piv = (v & -v).bit_length() - 1
            hit = reduced.get(piv)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if v:
            reduced[(v & -v).bit_length() - 1] = (v, combo)
        else:
            kernel.append(combo)
    return kernel


def _as_matrix(m) -> F2Matrix:
    return m if isinstance(m, F2Matrix) else F2Matrix(m)


def rank(m) -> int:
    m = _as_matrix(m)
    return mask_rank(m.row_masks)


def kernel_basis(m) -> list[tuple[int, ...]]:
    m = _as_matrix(m)
    return [mask_to_bits(v, m.ncols) for v in mask_kernel(m.column_masks())]


def image_basis(m) -> list[tuple[int, ...]]:
    """A basis of the column space, as vectors of length ``nrows``."""
    m = _as_matrix(m)
    ech = Echelon()
    out = []
    for c in m.column_masks():
        if ech.add(c):
            out.append(mask_to_bits(c, m.nrows))
    return out


def solve(m, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent."""
    m = _as_matrix(m)
    b = tuple(b)
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    x = solve_masks(m.column_masks(), bits_to_mask(b))
    return None if x is None else mask_to_bits(x, m.ncols)


def solve_masks(columns: Sequence[int], target: int) -> Optional[int]:
    reduced: dict[int, tuple[int, int]] = {}
    for j, col in enumerate(columns):
        combo = 1 << j
        v = col
        while v:
            piv = (v & -v).bit_length() - 1
            hit = reduced.get(piv)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        if v:
            reduced[(v & -v).bit_length() - 1] = (v, combo)
    v, combo = target, 0
    while v:
        piv = (v & -v).bit_length() - 1
        hit = reduced.get(piv)
        if hit is None:
            return None
        v ^= hit[0]
        combo ^= hit[1]
    return combo
