"""Bigraded (motivic) model: weighted bases with tau, torsion modules,
the odd localization sequence, and the induction computing the tau-torsion
Y_m = Ker t of H^{*,*}(BSO_{2m}).

A tau-free piece H^{d,j} is the filtration piece F^{2j-d} H^d; realization
is its inclusion into H^d. Torsion is described by generators and a
Hilbert function only.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .gf2linalg import Echelon, F2Matrix, mask_rank
from .polyring import engine, partitions
from .rings import (
    BO,
    BSO,
    RingPresentation,
    VerificationFailure,
    _kappa,
    coordinates,
    delta_map,
    iota_star,
    parse_group,
)
from .weightfilt import WeightedBasis, odd_weight, weighted_basis

__all__ = [
    "BigradedClass",
    "TorsionModule",
    "TorsionClass",
    "GroupModel",
    "group_model",
    "motivic_dim",
    "realization_matrix",
    "ses_odd",
    "coker_iota_odd",
    "coker_dims",
    "verify_weight_comparison",
    "compute_Y",
    "YComputation",
    "verify_main_theorem",
    "dimension_table",
    "table_to_json",
    "table_to_csv",
]


@dataclass(frozen=True)
class BigradedClass:
    """A class in H^{d, j}: a weight-``weight`` representative times tau^e.

    The twist is ``(degree + weight) / 2 + tau_exponent``.
    """

    degree: int
    weight: int
    tau_exponent: int = 0
    representative: object = None
    torsion: bool = False

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("weights are nonnegative")
        if (self.degree + self.weight) % 2:
            raise ValueError("degree and weight must have the same parity")
        if self.tau_exponent < 0:
            raise ValueError("tau exponent must be nonnegative")
        if self.torsion and self.tau_exponent:
            raise ValueError("tau kills torsion classes")

    @property
    def twist(self) -> int:
        return (self.degree + self.weight) // 2 + self.tau_exponent

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.degree, self.twist

    def times_tau(self) -> Optional["BigradedClass"]:
        """``tau * self``; ``None`` stands for zero."""
        if self.torsion:
            return None
        return BigradedClass(self.degree, self.weight, self.tau_exponent + 1, self.representative)


# -- torsion ---------------------------------------------------------------


def _chern_monomials(m: int, d: int, j: int) -> int:
    """Monomials in c_2, c_4, ..., c_{2m} (c_{2r} in bidegree (4r, 2r)) at (d, j)."""
    if d < 0 or j < 0 or d != 2 * j or d % 4:
        return 0
    # c_{2r} contributes 4r to the degree: count partitions of d/4 into parts <= m
    return len(partitions(d // 4, max_part=m))


@dataclass(frozen=True)
class TorsionModule:
    """Y_m: free over Z/2[c_2, ..., c_{2m}] on y_{i,m}, 0 <= i <= m-2, at (2m, i+m)."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")

    def generators(self) -> list[tuple[str, int, int]]:
        return [(f"y_{i},{self.m}", 2 * self.m, i + self.m) for i in range(self.m - 1)]

    def coefficient_ring(self) -> list[tuple[str, int, int]]:
        return [(f"c{2 * r}", 4 * r, 2 * r) for r in range(1, self.m + 1)]

    @property
    def relations(self) -> list[str]:
        """Declared, not derived: products of two generators vanish, as does tau."""
        rel = ["tau*y = 0"]
        rel += [f"y_{i},{self.m}*y_{k},{self.m} = 0"
                for i in range(self.m - 1) for k in range(i, self.m - 1)]
        return rel

    def hilbert(self, d: int, j: int) -> int:
        total = 0
        for _, gd, gj in self.generators():
            total += _chern_monomials(self.m, d - gd, j - gj)
        return total

    def table(self, maxdeg: int) -> dict[tuple[int, int], int]:
        out = {}
        for d in range(maxdeg + 1):
            for j in range(0, d + 1):
                v = self.hilbert(d, j)
                if v:
                    out[(d, j)] = v
        return out

    def generator(self, i: int) -> "TorsionClass":
        if not 0 <= i <= self.m - 2:
            raise ValueError(f"no generator y_{i},{self.m}")
        return TorsionClass(self, i, (0,) * self.m)


@dataclass(frozen=True)
class TorsionClass:
    """``c^exponents * y_{index, m}``; ``exponents[r-1]`` is the power of c_{2r}."""

    module: TorsionModule
    index: int
    exponents: tuple[int, ...]

    @property
    def bidegree(self) -> tuple[int, int]:
        d = 2 * self.module.m + sum(4 * (r + 1) * a for r, a in enumerate(self.exponents))
        j = self.index + self.module.m + sum(2 * (r + 1) * a for r, a in enumerate(self.exponents))
        return d, j

    @property
    def weight(self) -> int:
        d, j = self.bidegree
        return 2 * j - d

    def times_tau(self) -> None:
        return None

    def times_chern(self, exponents: Iterable[int]) -> "TorsionClass":
        exps = tuple(exponents)
        if len(exps) > self.module.m or any(a < 0 for a in exps):
            raise ValueError(f"not a monomial in c2..c{2 * self.module.m}")
        exps = exps + (0,) * (self.module.m - len(exps))
        return TorsionClass(self.module, self.index,
                            tuple(a + b for a, b in zip(self.exponents, exps)))

    def times_torsion(self, other: "TorsionClass") -> None:
        """Declared relation: y_{i,m} y_{k,m} = 0. Bidegrees are still checked to be sane."""
        if other.module != self.module:
            raise ValueError("classes from different modules")
        d1, j1 = self.bidegree
        d2, j2 = other.bidegree
        if 2 * (j1 + j2) - (d1 + d2) < 0:
            raise VerificationFailure("product would have negative weight")
        return None

    def __mul__(self, other):
        raise TypeError(
            "torsion classes multiply only by tau (times_tau) or by even Chern "
            "monomials (times_chern)"
        )

    __rmul__ = __mul__


# -- group models ----------------------------------------------------------


class GroupModel:
    """Motivic dimensions of one group: tau-free part plus optional torsion table."""

    def __init__(self, ring: RingPresentation, torsion: Optional[dict] = None,
                 torsion_cap: Optional[int] = None):
        self.ring = ring
        self.torsion = torsion or {}
        self.torsion_cap = torsion_cap

    @property
    def name(self) -> str:
        return self.ring.name

    def weighted_basis(self, d: int) -> WeightedBasis:
        return weighted_basis(self.ring, d)

    def free_dim(self, d: int, j: int) -> int:
        w = 2 * j - d
        if d < 0 or w < 0:
            return 0
        return self.weighted_basis(d).filtration_dim(w)

    def torsion_dim(self, d: int, j: int) -> int:
        if self.torsion_cap is not None and d > self.torsion_cap:
            raise ValueError(f"torsion of {self.name} only computed up to degree {self.torsion_cap}")
        return self.torsion.get((d, j), 0)

    def dim(self, d: int, j: int) -> int:
        return self.free_dim(d, j) + self.torsion_dim(d, j)


def group_model(group: Union[str, RingPresentation], maxdeg: int = 16,
                progress: Optional[Callable[[str], None]] = None) -> GroupModel:
    """Model for ``bo:N``, ``bso:N`` or their quotients.

    BSO_{2m} with m >= 2 carries the torsion Y_m computed by the induction;
    BSO_{2m}/c_{2m} carries Y_m / c_{2m}.
    """
    ring = parse_group(group) if isinstance(group, str) else group
    if ring.kind == "BSO" and ring.n % 2 == 0 and ring.n >= 4 and not ring.exterior:
        m = ring.n // 2
        comp = compute_Y(m, maxdeg, progress=progress)
        table = dict(comp.table)
        if ring.quotient == ring.n:
            table = {(d, j): v - comp.table.get((d - 4 * m, j - 2 * m), 0)
                     for (d, j), v in comp.table.items()}
            table = {k: v for k, v in table.items() if v}
        elif ring.quotient is not None:
            raise ValueError("only the top Chern class quotient of BSO_2m is modeled")
        return GroupModel(ring, table, maxdeg)
    return GroupModel(ring)


def motivic_dim(model: GroupModel, d: int, j: int) -> int:
    return model.dim(d, j)


def realization_matrix(model: GroupModel, d: int, j: int) -> F2Matrix:
    """t: H^{d,j} -> H^d. Columns: the F^{2j-d} basis, then the torsion (zero columns)."""
    w = 2 * j - d
    wb = model.weighted_basis(d)
    cols = list(wb.subspace(w)) if w >= 0 else []
    cols += [0] * model.torsion_dim(d, j)
    return F2Matrix.from_columns(cols, wb.dim)


# -- the odd sequence ------------------------------------------------------


def _image_in(cols: list[int], space: list[int]) -> bool:
    ech = Echelon(space)
    return all(ech.reduce(c) == 0 for c in cols)


def _apply(columns: list[int], v: int) -> int:
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= columns[i]
        v >>= 1
        i += 1
    return out


def ses_odd(m: int, maxdeg: int = 14) -> list[dict]:
    """0 -> H_SO_{2m+1}/c_{2m+1} -> H_O_{2m}/c_1 -> H^{*-1,*-1}_SO_{2m-1} -> 0, per bidegree."""
    if m < 1:
        raise ValueError("m must be positive")
    n = 2 * m + 1
    kappa = _kappa(n, True)
    delta = delta_map(n)
    src, mid, tgt = BSO(n, n), BO(n - 1, 1), BSO(n - 2)
    rows = []
    for d in range(maxdeg + 1):
        kcols = kappa.columns(d)
        dcols = delta.columns(d)
        sb = weighted_basis(src, d, "pi")
        mb = weighted_basis(mid, d)
        tb = weighted_basis(tgt, d - 1) if d >= 1 else None
        for j in range((d + 1) // 2, d + 1):
            w = 2 * j - d
            S = sb.subspace(w)
            M = mb.subspace(w)
            T = tb.subspace(w - 1) if tb is not None and w >= 1 else []
            kimg = [_apply(kcols, v) for v in S]
            dimg = [_apply(dcols, v) for v in M]
            rk = mask_rank(kimg)
            rd = mask_rank(dimg)
            entry = {
                "m": m, "degree": d, "twist": j,
                "source": len(S), "middle": len(M), "target": len(T),
                "rank_kappa": rk, "rank_delta": rd,
                "kappa_filtered": _image_in(kimg, M),
                "delta_filtered": _image_in(dimg, T),
            }
            entry["passed"] = (
                rk == len(S) and rd == len(T) and rk + rd == len(M)
                and entry["kappa_filtered"] and entry["delta_filtered"]
            )
            rows.append(entry)
    return rows


# -- the cokernel of iota*_{2m+1} -----------------------------------------


def coker_iota_odd(m: int, d: int, j: int) -> WeightedBasis:
    """Cokernel of iota*: F^w H^d(BSO_{2m+1}) -> F^w H^d(BSO_{2m}), w = 2j - d.

    The returned vectors are representatives in the BSO_{2m} basis, chosen
    from the adapted basis of the target.
    """
    w = 2 * j - d
    tgt = BSO(2 * m)
    if w < 0 or d < 0:
        return WeightedBasis(tgt, d, [], [], "coker")
    f = iota_star(2 * m + 1, "SO")
    src_space = weighted_basis(BSO(2 * m + 1), d, "pi").subspace(w)
    tb = weighted_basis(tgt, d)
    cols = f.columns(d)
    image = [_apply(cols, v) for v in src_space]
    if not _image_in(image, tb.subspace(w)):
        raise VerificationFailure(f"iota* does not preserve weight {w} in degree {d}")
    ech = Echelon(image)
    vecs, wts = [], []
    for v, x in zip(tb.vectors, tb.weights):
        if x <= w and ech.add(v):
            vecs.append(v)
            wts.append(x)
    return WeightedBasis(tgt, d, vecs, wts, "coker")


def _coker_via_delta(m: int, a: int, b: int) -> int:
    """dim of F^w H^a(BSO_{2m}) / t(delta)(F^{w+1}(BO_{2m+1}/c_1)_{a+1})."""
    w = 2 * b - a
    if w < 0:
        return 0
    delta = delta_map(2 * m + 2)
    tb = weighted_basis(BSO(2 * m), a)
    M = weighted_basis(BO(2 * m + 1, 1), a + 1).subspace(w + 1)
    dcols = delta.columns(a + 1)
    image = [_apply(dcols, v) for v in M]
    if not _image_in(image, tb.subspace(w)):
        raise VerificationFailure(f"delta does not lower weight by one in degree {a + 1}")
    return tb.filtration_dim(w) - mask_rank(image)


def coker_dims(m: int, maxdeg: int) -> dict[tuple[int, int], int]:
    out = {}
    for a in range(maxdeg + 1):
        for b in range((a + 1) // 2, a + 1):
            c = coker_iota_odd(m, a, b).dim
            if c:
                out[(a, b)] = c
    return out


def _w_top_generation(m: int, a: int, b: int, coker: WeightedBasis) -> bool:
    """Is the cokernel at (a, b) spanned by c^alpha * w_{2m}, alpha over even Chern monomials?"""
    n = 2 * m
    w = 2 * b - a
    expected = _chern_monomials(m, a - n, b - (n - 1))
    if expected != coker.dim:
        return False
    if not expected:
        return True
    ring = BSO(n)
    f = iota_star(n + 1, "SO")
    src_space = weighted_basis(BSO(n + 1), a, "pi").subspace(w)
    ech = Echelon(_apply(f.columns(a), v) for v in src_space)
    base = len(ech)
    from .polyring import F2Polynomial

    top = F2Polynomial.variable(n, n, "w")
    for lam in partitions((a - n) // 4, max_part=m):
        P = top
        for r in lam:
            c = F2Polynomial.variable(2 * r, n, "w")
            P = P * c * c
        if not ech.add(coordinates(ring, P, a)):
            return False
    return len(ech) - base == expected


def _naive_coker(m: int, maxdeg: int) -> dict[tuple[int, int], int]:
    """Negative control: every z * w_{2m}, z any monomial of H*(BSO_{2m}), as a generator."""
    n = 2 * m
    ring = BSO(n)
    out: dict[tuple[int, int], int] = {}
    for a in range(n, maxdeg + 1):
        wb = weighted_basis(ring, a)
        for z in ring.ambient_basis(a - n):
            e = list(z)
            e[n - 1] += 1
            from .polyring import F2Polynomial

            P = F2Polynomial._raw(n, frozenset({tuple(e)}), "w")
            x = wb.weight_of(coordinates(ring, P, a))
            key = (a, (a + x) // 2)
            out[key] = out.get(key, 0) + 1
    return out


@dataclass
class YComputation:
    m: int
    maxdeg: int
    table: dict[tuple[int, int], int]
    steps: list[dict] = field(default_factory=list)

    @property
    def module(self) -> TorsionModule:
        return TorsionModule(self.m)

    def dim(self, d: int, j: int) -> int:
        return self.table.get((d, j), 0)


def _step(k: int, prev: dict, maxdeg: int, naive: bool) -> tuple[dict, dict]:
    """Y_k -> Y_{k+1} up to degree ``maxdeg``."""
    coker_b: dict[tuple[int, int], int] = {}
    coker_a: dict[tuple[int, int], int] = {}
    generated = True
    for a in range(maxdeg - 1):
        for b in range((a + 1) // 2, a + 1):
            cb = coker_iota_odd(k, a, b)
            if cb.dim:
                coker_b[(a, b)] = cb.dim
            ca = _coker_via_delta(k, a, b)
            if ca:
                coker_a[(a, b)] = ca
            if not _w_top_generation(k, a, b, cb):
                generated = False
    if coker_a != coker_b:
        diff = sorted(set(coker_a.items()) ^ set(coker_b.items()))
        raise VerificationFailure(f"step {k}: the two cokernel computations disagree at {diff[:4]}")
    coker = _naive_coker(k, maxdeg - 2) if naive else coker_b
    ybar: dict[tuple[int, int], int] = {}
    for (a, b), v in list(prev.items()) + list(coker.items()):
        if a + 2 <= maxdeg:
            ybar[(a + 2, b + 1)] = ybar.get((a + 2, b + 1), 0) + v
    # lift through multiplication by c_{2k+2}, bidegree (4k+4, 2k+2)
    y: dict[tuple[int, int], int] = {}
    for d in range(maxdeg + 1):
        for j in range(d + 1):
            v = ybar.get((d, j), 0) + y.get((d - 4 * k - 4, j - 2 * k - 2), 0)
            if v:
                y[(d, j)] = v
    record = {
        "from": k,
        "to": k + 1,
        "coker": {f"{a},{b}": v for (a, b), v in sorted(coker_b.items())},
        "routes_agree": True,
        "generated_by_top_class": generated,
    }
    return y, record


def compute_Y(m: int, maxdeg: int, naive: bool = False,
              progress: Optional[Callable[[str], None]] = None) -> YComputation:
    """Dimensions of Y_m = Ker(t) in H^{*,*}(BSO_{2m}) for degrees <= ``maxdeg``.

    Runs the induction from Y_1 = 0. Each step computes the cokernel of
    iota*_{2k+1} twice (directly and as the cokernel of delta) and fails
    loudly if the two disagree. ``naive`` swaps in the negative control.
    """
    if m < 1:
        raise ValueError("m must be positive")
    key = (m, maxdeg, naive)
    if key in _Y_CACHE:
        return _Y_CACHE[key]
    y: dict = {}
    steps = []
    for k in range(1, m):
        if progress:
            progress(f"Y_{k} -> Y_{k + 1} (degrees <= {maxdeg})")
        y, record = _step(k, y, maxdeg, naive)
        steps.append(record)
    comp = YComputation(m, maxdeg, y, steps)
    _Y_CACHE[key] = comp
    return comp


_Y_CACHE: dict = {}


def verify_main_theorem(m: int, maxdeg: int, naive: bool = False,
                        progress: Optional[Callable[[str], None]] = None) -> dict:
    """Induction output against the closed-form Hilbert function, every bidegree."""
    comp = compute_Y(m, maxdeg, naive=naive, progress=progress)
    closed = TorsionModule(m)
    entries = []
    ok = True
    for d in range(maxdeg + 1):
        for j in range(d + 1):
            a, b = comp.dim(d, j), closed.hilbert(d, j)
            if a or b:
                entries.append({"degree": d, "twist": j, "computed": a, "closed_form": b,
                                "passed": a == b})
                ok &= a == b
    low_twist = [e for e in entries if e["twist"] >= e["degree"] - 1 and e["computed"]]
    generated = all(s["generated_by_top_class"] for s in comp.steps)
    return {
        "m": m,
        "maxdeg": maxdeg,
        "naive_control": naive,
        "entries": entries,
        "no_torsion_near_diagonal": not low_twist,
        "generated_by_top_class": generated,
        "steps": comp.steps,
        "passed": ok and not low_twist and (generated or naive),
    }


# -- the weight comparison -------------------------------------------------


def verify_weight_comparison(m: int, maxdeg: int) -> dict:
    """In H*(BO_{2m}) compare the weights of z*w_{2m} and z*w_1*w_{2m-1} over monomial-basis z.

    Sub-checks: z a square (weights exactly 2m and 2m-2); z = m[2i+1], i > 0
    (both 2m-1); z = m[2i+1, 2j+1] (2m-2 for z*w_{2m}, more than 2m-2 for
    z*w_1*w_{2m-1}); and the general inequality for every z that is not a
    square.
    """
    n = 2 * m
    eng = engine(n)
    rows = []
    checks = {"squares": True, "single_odd": True, "odd_pair": True, "general": True}
    for e in range(0, maxdeg - n + 1):
        for lam in eng.basis(e):
            z = frozenset({lam})
            a = eng.mul_e(z, n)
            b = eng.mul_e(eng.mul_e(z, n - 1), 1)
            wa = odd_weight(a) if a else None
            wb = odd_weight(b) if b else None
            if not lam.odd_parts:
                kind = "square"
                ok = wa == n and wb == n - 2
                checks["squares"] &= ok
            else:
                kind = "general"
                ok = wa is None or (wb is not None and wa <= wb)
                checks["general"] &= ok
                if len(lam) == 1 and lam[0] > 1:
                    kind = "single_odd"
                    good = wa == wb == n - 1
                    checks["single_odd"] &= good
                    ok &= good
                elif len(lam) == 2 and not lam.even_parts:
                    kind = "odd_pair"
                    good = wa == n - 2 and wb is not None and wb > n - 2
                    checks["odd_pair"] &= good
                    ok &= good
            rows.append({"z": "m[" + ",".join(map(str, lam)) + "]", "kind": kind,
                         "weight_z_w_top": wa, "weight_z_w1_wtop1": wb, "passed": ok})
    failures = [r for r in rows if not r["passed"]]
    return {"m": m, "maxdeg": maxdeg, "checked": len(rows), "checks": checks,
            "failures": failures, "rows": rows, "passed": not failures}


# -- tables ----------------------------------------------------------------


def dimension_table(model: GroupModel, maxdeg: int, twists: str = "topological") -> list[dict]:
    """Entries ordered by (degree, twist). ``twists`` is ``"topological"`` (j = d) or ``"all"``."""
    out = []
    for d in range(maxdeg + 1):
        js = [d] if twists == "topological" else range((d + 1) // 2, d + 1)
        for j in js:
            out.append({"degree": d, "twist": j, "dim": model.dim(d, j),
                        "torsion_dim": model.torsion_dim(d, j)})
    return out


def table_to_json(group: str, entries: list[dict]) -> str:
    return json.dumps({"group": group, "entries": entries}, indent=2)


def table_to_csv(group: str, entries: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["group", "degree", "twist", "dim", "torsion_dim"])
    for e in entries:
        w.writerow([group, e["degree"], e["twist"], e["dim"], e["torsion_dim"]])
    return buf.getvalue()
