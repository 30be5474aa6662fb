"""Small finite monoids given by multiplication tables, and names for finite abelian groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Sequence


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FiniteMonoid:
    """Elements ``0..n-1`` with ``table[a][b] = a * b``; labels are for display only."""

    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    @classmethod
    def from_operation(cls, elements: Sequence[Hashable], op: Callable, label=str) -> "FiniteMonoid":
        index = {x: i for i, x in enumerate(elements)}
        table = tuple(tuple(index[op(a, b)] for b in elements) for a in elements)
        return cls(tuple(label(x) for x in elements), table)

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def is_associative(self) -> bool:
        r = range(self.order)
        return all(self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)) for a in r for b in r for c in r)

    def identity(self) -> int | None:
        for e in range(self.order):
            if all(self.mul(e, x) == x == self.mul(x, e) for x in range(self.order)):
                return e
        return None

    def is_commutative(self) -> bool:
        r = range(self.order)
        return all(self.mul(a, b) == self.mul(b, a) for a in r for b in r)

    def is_group(self) -> bool:
        e = self.identity()
        if e is None or not self.is_associative():
            return False
        return all(any(self.mul(a, b) == e for b in range(self.order)) for a in range(self.order))

    def power(self, a: int, k: int) -> int:
        e = self.identity()
        out = e
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def abelian_invariants(self) -> list[int]:
        """Elementary divisors, sorted, of a finite abelian group."""
        n = self.order
        out: list[int] = []
        for p in _prime_factors(n):
            # ranks r_i = number of cyclic p-factors of order >= p^i
            sizes = [1]
            i = 1
            while True:
                q = p**i
                size = sum(1 for a in range(n) if self.power(a, q) == self.identity())
                if size == sizes[-1]:
                    break
                sizes.append(size)
                i += 1
            ranks = []
            for j in range(1, len(sizes)):
                ratio, r = sizes[j] // sizes[j - 1], 0
                while ratio > 1:
                    ratio //= p
                    r += 1
                ranks.append(r)
            ranks.append(0)
            for j in range(len(ranks) - 1):
                out.extend([p ** (j + 1)] * (ranks[j] - ranks[j + 1]))
        return sorted(out)

    def name(self) -> str:
        if self.is_group() and self.is_commutative():
            inv = self.abelian_invariants()
            return " x ".join(f"Z/{d}" for d in inv) if inv else "0"
        if self.is_group():
            return f"nonabelian group of order {self.order}"
        kind = "commutative monoid" if self.is_commutative() else "monoid"
        return f"{kind} of order {self.order}"

    def describe(self) -> dict:
        e = self.identity()
        return {
            "name": self.name(),
            "order": self.order,
            "elements": list(self.labels),
            "table": [list(row) for row in self.table],
            "identity": None if e is None else self.labels[e],
            "associative": self.is_associative(),
            "commutative": self.is_commutative(),
            "group": self.is_group(),
            "abelian_group": self.is_group() and self.is_commutative(),
        }


def automorphism_group(C, a: int) -> FiniteMonoid:
    """``End(a)`` under composition, assumed to be a group when called on a groupoid."""
    ends = C.hom(a, a)
    index = {f: i for i, f in enumerate(ends)}
    table = tuple(tuple(index[C.compose(g, f)] for g in ends) for f in ends)
    return FiniteMonoid(tuple(str(i) for i in range(len(ends))), table)


def cyclic(n: int) -> FiniteMonoid:
    return FiniteMonoid.from_operation(range(n), lambda a, b: (a + b) % n)
