"""Text grammar for cohomology classes.

::

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := 'x' INT | 'w' INT | 'c' INT | 'm[' INT (',' INT)* ']' | 'm[]' | '0' | '1'

Whitespace is ignored. ``c_i`` is read topologically as ``w_i^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .polyring import F2Polynomial, Partition, elementary, engine, monomial_symmetric, to_monomial_basis

__all__ = [
    "ClassSyntaxError",
    "ClassExpr",
    "parse",
    "parse_x",
    "parse_w",
    "parse_m",
    "format_poly",
    "format_m",
]


class ClassSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Factor:
    kind: str  # "x", "w", "c", "m", "const"
    payload: object
    exponent: int = 1


@dataclass(frozen=True)
class ClassExpr:
    terms: tuple[tuple[Factor, ...], ...]

    def kinds(self) -> set[str]:
        return {f.kind for t in self.terms for f in t}

    def max_index(self) -> int:
        top = 0
        for t in self.terms:
            for f in t:
                if f.kind in ("x", "w", "c"):
                    top = max(top, f.payload)
                elif f.kind == "m":
                    top = max(top, len(f.payload))
        return top

    def to_x(self, n: int) -> F2Polynomial:
        total = F2Polynomial.zero(n)
        for term in self.terms:
            prod = F2Polynomial.one(n)
            for f in term:
                if f.kind == "x":
                    base = F2Polynomial.variable(f.payload, n)
                elif f.kind == "w":
                    _check_index(f.payload, n, "w")
                    base = elementary(f.payload, n)
                elif f.kind == "c":
                    _check_index(f.payload, n, "c")
                    base = elementary(f.payload, n) ** 2
                elif f.kind == "m":
                    base = monomial_symmetric(f.payload, n)
                else:
                    base = F2Polynomial.one(n) if f.payload else F2Polynomial.zero(n)
                prod = prod * (base ** f.exponent)
            total = total + prod
        return total

    def to_w(self, n: int) -> F2Polynomial:
        eng = engine(n)
        total = F2Polynomial.zero(n, "w")
        for term in self.terms:
            prod = F2Polynomial.one(n, "w")
            for f in term:
                if f.kind == "x":
                    raise ValueError(f"x{f.payload} is not a class in a w-presented ring")
                if f.kind in ("w", "c"):
                    _check_index(f.payload, n, f.kind)
                    base = F2Polynomial.variable(f.payload, n, "w")
                    if f.kind == "c":
                        base = base * base
                elif f.kind == "m":
                    if len(f.payload) > n:
                        base = F2Polynomial.zero(n, "w")
                    else:
                        base = eng.to_w([f.payload])
                else:
                    base = F2Polynomial.one(n, "w") if f.payload else F2Polynomial.zero(n, "w")
                prod = prod * (base ** f.exponent)
            total = total + prod
        return total

    def to_m(self, n: int) -> frozenset:
        """m-basis coordinates (a set of partitions) in ``n`` variables."""
        if "x" in self.kinds():
            return frozenset(to_monomial_basis(self.to_x(n)))
        return engine(n).from_w(self.to_w(n))


def _check_index(i: int, n: int, kind: str) -> None:
    if not 1 <= i <= n:
        raise ValueError(f"{kind}{i} is out of range for n={n}")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ClassSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ClassSyntaxError(f"expected an integer, found {found!r}", start)
        return int(self.text[start:self.pos])

    def expr(self) -> ClassExpr:
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        if self.peek():
            raise ClassSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return ClassExpr(tuple(terms))

    def term(self) -> tuple[Factor, ...]:
        factors = [self.factor()]
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.factor())
        return tuple(factors)

    def factor(self) -> Factor:
        f = self.atom()
        if self.peek() == "^":
            self.pos += 1
            f = Factor(f.kind, f.payload, f.exponent * self.integer())
        return f

    def atom(self) -> Factor:
        ch = self.peek()
        start = self.pos
        if ch in ("x", "w", "c"):
            self.pos += 1
            i = self.integer()
            if i < 1:
                raise ClassSyntaxError(f"generator index must be positive", start)
            return Factor(ch, i)
        if ch == "m":
            self.pos += 1
            self.expect("[")
            parts = []
            if self.peek() != "]":
                parts.append(self.integer())
                while self.peek() == ",":
                    self.pos += 1
                    parts.append(self.integer())
            self.expect("]")
            return Factor("m", Partition(parts))
        if ch.isdigit():
            v = self.integer()
            if v not in (0, 1):
                raise ClassSyntaxError("only the constants 0 and 1 exist mod 2", start)
            return Factor("const", v)
        raise ClassSyntaxError(f"unexpected {ch or 'end of input'!r}", self.pos)


def parse(text: str) -> ClassExpr:
    return _Parser(text).expr()


def parse_x(text: str, n: int) -> F2Polynomial:
    return parse(text).to_x(n)


def parse_w(text: str, n: int) -> F2Polynomial:
    return parse(text).to_w(n)


def parse_m(text: str, n: int) -> frozenset:
    return parse(text).to_m(n)


def format_poly(p: F2Polynomial) -> str:
    if not p.monomials:
        return "0"
    terms = []
    for m in p.sorted_monomials():
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(f"{p.gen}{i + 1}")
            elif e:
                factors.append(f"{p.gen}{i + 1}^{e}")
        terms.append("*".join(factors) if factors else "1")
    return " + ".join(terms)


def format_m(f: Iterable[Partition]) -> str:
    parts = sorted((Partition(lam) for lam in f), key=lambda lam: (sum(lam), lam), reverse=True)
    if not parts:
        return "0"
    return " + ".join("m[" + ",".join(map(str, lam)) + "]" if lam else "1" for lam in parts)
