"""Exact ranks and Betti numbers over the rationals and prime fields.

Sparse rows are dictionaries ``{column: integer}``.  Prime fields use modular
elimination (bit-packed rows for F_2).  Rational ranks first run modulo a
large prime; that rank is a lower bound for the rational one, and when the
resulting Betti numbers all sit in degrees of one parity the Euler
characteristic pins the rational answer exactly.  Otherwise an exact
fraction-free integer elimination is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .poset_core import ArgumentError

LARGE_PRIME = 2_147_483_647

Row = Mapping[int, int]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


@dataclass(frozen=True)
class FieldDescriptor:
    """Coefficient field: characteristic 0 means the rationals."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic and not is_prime(self.characteristic):
            raise ArgumentError(f"{self.characteristic} is not prime")

    @classmethod
    def rationals(cls) -> "FieldDescriptor":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldDescriptor":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldDescriptor":
        t = text.strip().lower()
        if t in ("q", "qq", "rationals"):
            return cls(0)
        for prefix in ("fp:", "f", "gf"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls(int(t[len(prefix):]))
        raise ArgumentError(f"unknown field {text!r}; use q or fp:P")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def name(self) -> str:
        return "Q" if self.is_rational else f"F{self.characteristic}"

    @property
    def flag(self) -> str:
        return "q" if self.is_rational else f"fp:{self.characteristic}"

    def __str__(self) -> str:
        return self.name


QQ = FieldDescriptor(0)


@dataclass
class BettiTable:
    field: FieldDescriptor
    betti: dict[int, int]
    fingerprint: str = ""
    truncated_above: int | None = None

    def __post_init__(self) -> None:
        self.betti = {d: r for d, r in sorted(self.betti.items()) if r}
        if any(r < 0 for r in self.betti.values()):
            raise ArgumentError(f"negative Betti number in {self.betti}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.field == other.field and self.betti == other.betti

    def rank(self, degree: int) -> int:
        return self.betti.get(degree, 0)

    def euler(self) -> int:
        return sum((-1) ** d * r for d, r in self.betti.items())

    def shifted(self, by: int) -> "BettiTable":
        return BettiTable(self.field, {d + by: r for d, r in self.betti.items()}, self.fingerprint)

    def to_json(self) -> dict:
        return {"field": self.field.name, "betti": {str(d): r for d, r in self.betti.items()}}

    @classmethod
    def from_json(cls, data: Mapping) -> "BettiTable":
        return cls(FieldDescriptor.parse(data["field"].replace("F", "fp:") if data["field"] != "Q" else "q"),
                   {int(d): int(r) for d, r in data["betti"].items()})


# ------------------------------------------------------------------- ranks


def _rank_f2(rows: Iterable[Row]) -> int:
    pivots: dict[int, int] = {}
    for row in rows:
        r = 0
        for c, v in row.items():
            if v % 2:
                r |= 1 << c
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def _rank_mod_p(rows: Iterable[Row], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    ordered = sorted((dict(r) for r in rows), key=len)
    for row in ordered:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = max(r)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(r[c], p - 2, p)
                pivots[c] = {k: v * inv % p for k, v in r.items()}
                break
            f = r[c]
            for k, v in prow.items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return len(pivots)


def _rank_integer(rows: Iterable[Row]) -> int:
    """Exact rational rank by fraction-free elimination with content removal."""
    pivots: dict[int, dict[int, int]] = {}
    ordered = sorted((dict(r) for r in rows), key=len)
    for row in ordered:
        r = {c: v for c, v in row.items() if v}
        while r:
            c = max(r)
            prow = pivots.get(c)
            if prow is None:
                g = 0
                for v in r.values():
                    g = math.gcd(g, v)
                if r[c] < 0:
                    g = -g
                pivots[c] = {k: v // g for k, v in r.items()}
                break
            a, b = prow[c], r[c]
            new = {k: a * v for k, v in r.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            g = 0
            for v in new.values():
                g = math.gcd(g, v)
                if g == 1:
                    break
            r = {k: v // g for k, v in new.items()} if g > 1 else new
    return len(pivots)


def matrix_rank(rows: Sequence[Row], field: FieldDescriptor, exact_rational: bool = True) -> int:
    """Rank of the sparse matrix with the given rows over ``field``."""
    if field.characteristic == 2:
        return _rank_f2(rows)
    if field.characteristic:
        return _rank_mod_p(rows, field.characteristic)
    if exact_rational:
        return _rank_integer(rows)
    return _rank_mod_p(rows, LARGE_PRIME)


def dense_rank(matrix: Sequence[Sequence[int]], field: FieldDescriptor) -> int:
    rows = [{c: v for c, v in enumerate(r) if v} for r in matrix]
    return matrix_rank(rows, field)


# ---------------------------------------------------------- chain complexes


@dataclass
class ChainComplex:
    """Graded basis labels and integer boundary rows.

    ``boundary[m]`` lists, for each basis element of degree ``m``, its boundary
    as ``{index in degree m-1: coefficient}``.
    """

    field: FieldDescriptor
    basis: dict[int, list]
    boundary: dict[int, list[dict[int, int]]]
    fingerprint: str = ""
    truncated_above: int | None = None
    meta: dict = field(default_factory=dict)

    def dimensions(self) -> dict[int, int]:
        return {d: len(b) for d, b in sorted(self.basis.items()) if b}

    def euler_from_basis(self) -> int:
        return sum((-1) ** d * len(b) for d, b in self.basis.items())

    def check_square_zero(self) -> None:
        for m, rows in self.boundary.items():
            lower = self.boundary.get(m - 1)
            if not lower:
                continue
            for idx, row in enumerate(rows):
                total: dict[int, int] = {}
                for c, v in row.items():
                    for k, w in lower[c].items():
                        total[k] = total.get(k, 0) + v * w
                bad = {k: v for k, v in total.items() if v}
                if bad:
                    from .poset_core import InvariantViolation
                    raise InvariantViolation(
                        f"boundary squared is nonzero on degree {m} element {self.basis[m][idx]!r}: {bad}")

    def ranks(self, field: FieldDescriptor, exact_rational: bool = True) -> dict[int, int]:
        return {m: matrix_rank(rows, field, exact_rational) for m, rows in self.boundary.items() if rows}


def _betti_from_ranks(dims: Mapping[int, int], ranks: Mapping[int, int]) -> dict[int, int]:
    return {m: d - ranks.get(m, 0) - ranks.get(m + 1, 0) for m, d in dims.items()}


def betti_numbers(complex_: ChainComplex, field: FieldDescriptor | None = None) -> BettiTable:
    """Betti numbers b_m = dim ker ∂_m − rank ∂_{m+1}."""
    fld = complex_.field if field is None else field
    dims = complex_.dimensions()
    if fld.is_rational:
        modular = _betti_from_ranks(dims, complex_.ranks(fld, exact_rational=False))
        parities = {m % 2 for m, b in modular.items() if b}
        if len(parities) <= 1:
            betti = modular
        else:
            betti = _betti_from_ranks(dims, complex_.ranks(fld, exact_rational=True))
    else:
        betti = _betti_from_ranks(dims, complex_.ranks(fld))
    table = BettiTable(fld, betti, complex_.fingerprint, complex_.truncated_above)
    if table.euler() != complex_.euler_from_basis():
        from .poset_core import InvariantViolation
        raise InvariantViolation("Euler characteristic of Betti table disagrees with basis counts")
    return table


def kunneth(tables: Sequence[BettiTable]) -> dict[int, int]:
    """Betti numbers of a smash product from those of its factors."""
    out = {0: 1}
    for t in tables:
        nxt: dict[int, int] = {}
        for d1, r1 in out.items():
            for d2, r2 in t.betti.items():
                nxt[d1 + d2] = nxt.get(d1 + d2, 0) + r1 * r2
        out = nxt
    return {d: r for d, r in out.items() if r}
