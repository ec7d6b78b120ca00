"""Closed-form homology predictions for strict Young quotients and their atoms.

Homology bases are indexed by allowable sequences (i_1, …, i_a, e, w): a
Lyndon word w, a doubling flag e and a string of operation degrees.  Degree
bookkeeping is kept in the named constants below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from sympy import factorint

from .homology import QQ, BettiTable, FieldDescriptor, betti_numbers, is_prime
from .lyndon import Word, compositions, format_word, lyndon_words
from .poset_core import ArgumentError, partition_lattice, young_group
from .simplicial import atom_model, cache_directory, cached_orbit_chain_complex, nerve_model

# Σ|Π_n|^◇ ∧_{Σ_n} S^{ℓn}: (i_1..i_a) sits in degree Σi + ℓ + ATOM_OPERATION_SHIFT·a
ATOM_OPERATION_SHIFT = 1
# |Π_n|/Young is the double desuspension of the weight-n piece
QUOTIENT_DEGREE_SHIFT = -2
# the left EHP term Σ²|Π_{d/2}|^◇ ∧ … is one suspension of the atom Σ|Π_{d/2}|^◇ ∧ …
EHP_LEFT_SUSPENSION = 1
EHP_MIDDLE_SUSPENSION = 1
# the P map lands in Σ² C(S^{2m+1}), one suspension above the left term
EHP_P_SHIFT = 1


def _field(field: FieldDescriptor | int) -> FieldDescriptor:
    return field if isinstance(field, FieldDescriptor) else FieldDescriptor(int(field))


def _congruence_ok(i: int, p: int) -> bool:
    return i % (2 * (p - 1)) in (0, 1) if p > 2 else True


def operation_strings(p: int, length: int, top: int) -> Iterator[tuple[int, ...]]:
    """(i_1..i_a) with i_j ≡ 0,1 mod 2(p−1), 1 < i_j < p·i_{j+1}, 1 < i_a ≤ top."""
    if length == 0:
        yield ()
        return

    def extend(suffix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if len(suffix) == length:
            yield suffix
            return
        for i in range(2, p * suffix[0]):
            if _congruence_ok(i, p):
                yield from extend((i,) + suffix)

    for last in range(2, top + 1):
        if _congruence_ok(last, p):
            yield from extend((last,))


@dataclass(frozen=True)
class AllowableSequence:
    ops: tuple[int, ...]
    e: int
    word: Word
    word_degree: int
    weight: tuple[int, ...]

    @property
    def a(self) -> int:
        return len(self.ops)

    @property
    def degree(self) -> int:
        return sum(self.ops) + (1 + self.e) * self.word_degree + self.e + self.a

    def to_json(self) -> dict:
        return {"i": list(self.ops), "e": self.e, "w": format_word(self.word), "|w|": self.word_degree,
                "degree": self.degree, "weight": list(self.weight)}


def word_degree(word_counts: Sequence[int], ells: Sequence[int]) -> int:
    return sum((1 + l) * m for l, m in zip(ells, word_counts)) - 1


def epsilon(p: int, wdeg: int) -> int:
    """ε = 1 iff (p odd and |w| even) or |w| = 0."""
    return 1 if (p % 2 == 1 and wdeg % 2 == 0) or wdeg == 0 else 0


def allowable_sequences(field: FieldDescriptor | int, ells: Sequence[int], weight: Sequence[int]
                        ) -> list[AllowableSequence]:
    """All allowable sequences of the given multi-weight, in (a, i, e, w) order."""
    fld = _field(field)
    ells = [int(l) for l in ells]
    weight = tuple(int(n) for n in weight)
    if len(ells) != len(weight):
        raise ArgumentError("need one sphere dimension per weight entry")
    if any(l < 0 for l in ells) or any(n < 0 for n in weight) or sum(weight) < 1:
        raise ArgumentError("dimensions and weights must be nonnegative with positive total weight")
    p = fld.characteristic
    out: list[AllowableSequence] = []
    g = math.gcd(*weight)
    scales = [(0, 1)] if p == 0 else [(a, p**a) for a in range(int(math.log(g, p)) + 2 if g > 1 else 1) if g % p**a == 0]
    for a, pa in scales:
        for e in (0, 1):
            div = pa * (1 + e)
            if g % div:
                continue
            counts = [n // div for n in weight]
            wdeg = word_degree(counts, ells)
            if p == 0:
                if e == 1 and wdeg % 2:
                    continue
                ops_iter = [()]
            else:
                eps = epsilon(p, wdeg)
                if e > eps:
                    continue
                ops_iter = list(operation_strings(p, a, (p - 1) * (1 + e) * wdeg + eps))
            if not ops_iter:
                continue
            for w in lyndon_words(counts):
                for ops in ops_iter:
                    out.append(AllowableSequence(ops, e, w, wdeg, weight))
    out.sort(key=lambda s: (s.a, s.ops, s.e, s.word))
    return out


def _table(field: FieldDescriptor, degrees: Sequence[int]) -> BettiTable:
    betti: dict[int, int] = {}
    for d in degrees:
        betti[d] = betti.get(d, 0) + 1
    return BettiTable(field, betti)


def predicted_quotient_betti(composition: Sequence[int], field: FieldDescriptor | int = QQ) -> BettiTable:
    """Reduced Betti numbers of |Π_n| / (Σ_{n_1} × … × Σ_{n_k})."""
    fld = _field(field)
    comp = [int(c) for c in composition]
    if any(c < 1 for c in comp) or sum(comp) < 3:
        raise ArgumentError("need positive parts with total at least 3")
    seqs = allowable_sequences(fld, [0] * len(comp), comp)
    return _table(fld, [s.degree + QUOTIENT_DEGREE_SHIFT for s in seqs])


def _prime_power_exponent(n: int, p: int) -> int | None:
    if n == 1:
        return 0
    f = factorint(n)
    return f[p] if list(f) == [p] else None


def atom_sequences(p: int, ell: int, n: int) -> list[tuple[int, ...]]:
    """Bases (i_1..i_a) for Σ|Π_n|^◇ ∧_{Σ_n} S^{ℓn} over F_p (empty unless n = p^a)."""
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")
    if ell < 1:
        raise ArgumentError("need ell >= 1")
    if p % 2 and ell % 2 == 0:
        raise ArgumentError("for odd p the atom formula needs odd ell; use predicted_lie_betti (EHP route)")
    a = _prime_power_exponent(n, p)
    if a is None:
        return []
    return sorted(operation_strings(p, a, (p - 1) * ell))


def predicted_atom_betti(p: int | FieldDescriptor, ell: int, n: int) -> BettiTable:
    """Reduced Betti numbers of Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}; p = 0 means the rationals."""
    fld = _field(p)
    if fld.is_rational:
        return predicted_lie_betti(fld, ell, n)
    seqs = atom_sequences(fld.characteristic, ell, n)
    return _table(fld, [sum(s) + ell + ATOM_OPERATION_SHIFT * len(s) for s in seqs])


def predicted_lie_betti(field: FieldDescriptor | int, ell: int, n: int) -> BettiTable:
    """Weight-n piece for one sphere S^ℓ via allowable sequences (any parity of ℓ)."""
    fld = _field(field)
    return _table(fld, [s.degree for s in allowable_sequences(fld, [ell], [n])])


# ----------------------------------------------------------- F_k functors


def fk_sequences(p: int, k: int, gen_degree: int) -> list[tuple[int, ...]]:
    """Symbols (i_1..i_k; v) of F_k for one generator v of the given degree."""
    if k == 0:
        return [()]
    bound = (p - 1) * gen_degree * p ** (k - 1) + 1
    out = []

    def grow(prefix: tuple[int, ...]) -> None:
        if len(prefix) == k:
            total = gen_degree + sum(prefix)
            lhs, rhs = p * prefix[0], (p - 1) * total
            if (lhs <= rhs) if p == 2 else (lhs < rhs):
                out.append(prefix)
            return
        top = bound if not prefix else prefix[-1] // p
        for i in range(2, top + 1):
            if _congruence_ok(i, p):
                grow(prefix + (i,))

    grow(())
    return sorted(out)


def fk_apply(p: int, k: int, graded: dict[int, int]) -> dict[int, int]:
    """Dimensions of F_k(V) for V with the given degree → dimension map."""
    out: dict[int, int] = {}
    for d, dim in graded.items():
        for s in fk_sequences(p, k, d):
            t = d + sum(s)
            out[t] = out.get(t, 0) + dim
    return out


def fk_dimension(p: int, k: int, ell: int) -> dict[int, int]:
    return fk_apply(p, k, {ell: 1})


def symmetric_power(p: int, count: int, graded: dict[int, int]) -> dict[int, int]:
    """S_count(V): exterior for p = 2; graded-commutative symmetric for odd p."""
    # poly[c][t] = dimension in word length c and degree t
    poly: dict[tuple[int, int], int] = {(0, 0): 1}
    for d, dim in sorted(graded.items()):
        for _ in range(dim):
            top = 1 if (p == 2 or d % 2) else count
            nxt: dict[tuple[int, int], int] = {}
            for (c, t), v in poly.items():
                for r in range(0, top + 1):
                    if c + r > count:
                        break
                    key = (c + r, t + r * d)
                    nxt[key] = nxt.get(key, 0) + v
            poly = nxt
    return {t: v for (c, t), v in poly.items() if c == count and v}


def p_partitions(n: int, p: int) -> list[tuple[int, ...]]:
    """(a_0, a_1, …) with Σ a_k p^k = n."""
    powers = []
    q = 1
    while q <= n:
        powers.append(q)
        q *= p
    out = []

    def grow(k: int, left: int, acc: tuple[int, ...]) -> None:
        if k < 0:
            if left == 0:
                out.append(tuple(reversed(acc)))
            return
        for c in range(left // powers[k], -1, -1):
            grow(k - 1, left - c * powers[k], acc + (c,))

    grow(len(powers) - 1, n, ())
    return out


def _tensor(x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for a, u in x.items():
        for b, v in y.items():
            out[a + b] = out.get(a + b, 0) + u * v
    return out


def symmetric_smash_dimensions(p: int, n: int, ell: int) -> dict[int, int]:
    """dim H̃_*((S^ℓ)^{∧n}/Σ_n; F_p) assembled from S_{a_k}(F_k) over p-partitions of n."""
    total: dict[int, int] = {}
    for parts in p_partitions(n, p):
        piece = {0: 1}
        for k, a in enumerate(parts):
            if a:
                piece = _tensor(piece, symmetric_power(p, a, fk_dimension(p, k, ell)))
        for t, v in piece.items():
            total[t] = total.get(t, 0) + v
    return {t: v for t, v in sorted(total.items()) if v}


def ordered_partitions(k: int) -> list[tuple[int, ...]]:
    return list(compositions(k))


@dataclass
class EulerCheck:
    euler: dict[int, int]
    expected: dict[int, int]

    @property
    def match(self) -> bool:
        return self.euler == self.expected


def bredon_euler_check(p: int, ell: int, k: int) -> EulerCheck:
    """Σ_{(k_1..k_r)} (−1)^{r−1} dim F_{k_1}…F_{k_r}(S^ℓ) against ± the atom basis count."""
    euler: dict[int, int] = {}
    for parts in ordered_partitions(k):
        graded = {ell: 1}
        for kk in reversed(parts):
            graded = fk_apply(p, kk, graded)
        sign = (-1) ** (len(parts) - 1)
        for t, v in graded.items():
            euler[t] = euler.get(t, 0) + sign * v
    expected: dict[int, int] = {}
    for s in atom_sequences(p, ell, p**k):
        t = sum(s) + ell
        expected[t] = expected.get(t, 0) + (-1) ** (k - 1)
    clean = lambda m: {t: v for t, v in sorted(m.items()) if v}
    return EulerCheck(clean(euler), clean(expected))


# -------------------------------------------------------------------- EHP


@dataclass
class EhpTerms:
    field: FieldDescriptor
    left: BettiTable
    middle: BettiTable
    right: BettiTable

    def identity(self) -> tuple[bool, str]:
        """Per-degree additivity in the split form that holds for the field."""
        degrees = set(self.left.betti) | set(self.middle.betti) | set(self.right.betti)
        degrees |= {d + EHP_P_SHIFT for d in self.left.betti}
        if self.field.characteristic == 2:
            ok = all(self.right.rank(t) == self.middle.rank(t) + self.left.rank(t - EHP_P_SHIFT) for t in degrees)
            return ok, "E-P split: H(right) = H(middle) + H(left shifted once)"
        ok = all(self.middle.rank(t) == self.left.rank(t) + self.right.rank(t) for t in degrees)
        return ok, "H-E split: H(middle) = H(left) + H(right)"


def ehp_terms_predicted(field: FieldDescriptor | int, d: int, m: int) -> EhpTerms:
    """The three EHP terms at weight d for the even sphere S^m, from allowable sequences."""
    fld = _field(field)
    if d % 2:
        left = BettiTable(fld, {})
    else:
        left = predicted_lie_betti(fld, 2 * m + 1, d // 2).shifted(EHP_LEFT_SUSPENSION)
    middle = predicted_lie_betti(fld, m, d).shifted(EHP_MIDDLE_SUSPENSION)
    right = predicted_lie_betti(fld, m + 1, d)
    return EhpTerms(fld, left, middle, right)


def computed_atom_betti(field: FieldDescriptor | int, ell: int, n: int, cache: str | None = None) -> BettiTable:
    """H̃(Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}) from the orbit chain complex."""
    fld = _field(field)
    return betti_numbers(cached_orbit_chain_complex(atom_model(n, ell), fld, directory=cache_directory(cache)))


def ehp_terms_computed(field: FieldDescriptor | int, d: int, m: int, cache: str | None = None) -> EhpTerms:
    """The three EHP terms at weight d for S^m, each computed simplicially."""
    fld = _field(field)
    if d % 2:
        left = BettiTable(fld, {})
    else:
        left = computed_atom_betti(fld, 2 * m + 1, d // 2, cache).shifted(EHP_LEFT_SUSPENSION)
    middle = computed_atom_betti(fld, m, d, cache).shifted(EHP_MIDDLE_SUSPENSION)
    right = computed_atom_betti(fld, m + 1, d, cache)
    return EhpTerms(fld, left, middle, right)


def ehp_rank_identity(field: FieldDescriptor | int, d: int, m: int, cache: str | None = None
                      ) -> tuple[EhpTerms, bool, str]:
    if m < 1 or d < 1:
        raise ArgumentError("need d >= 1 and m >= 1")
    terms = ehp_terms_computed(field, d, m, cache)
    ok, form = terms.identity()
    return terms, ok, form


# ------------------------------------------------- wedges and torsion


@dataclass
class WedgeVerdict:
    wedge: bool
    reason: str
    witness: dict | None = None

    @property
    def consistent(self) -> bool | None:
        """Does the predicted homology agree with the verdict (None if unchecked)?"""
        if self.witness is None:
            return None
        return self.wedge == (self.witness["torsion_prime"] is None)

    def to_json(self) -> dict:
        return {"wedge_of_spheres": self.wedge, "reason": self.reason, "witness": self.witness,
                "homology_consistent": self.consistent}


def wedge_rule(composition: Sequence[int]) -> tuple[bool, str]:
    """The gcd rule: gcd 1, or gcd a prime p with n = 2p or 3p."""
    comp = [int(c) for c in composition]
    n, g = sum(comp), math.gcd(*comp)
    if len(comp) == 1:
        return True, "single block: the full symmetric quotient is contractible"
    if g == 1:
        return True, "gcd is 1"
    if is_prime(g) and n in (2 * g, 3 * g):
        return True, f"n = {n // g}p with p = gcd = {g}"
    return False, f"gcd {g} outside both clauses"


def torsion_witness(composition: Sequence[int]) -> dict:
    """First prime p ≤ gcd whose predicted F_p table differs from the rational one."""
    comp = [int(c) for c in composition]
    rational = predicted_quotient_betti(comp, QQ).betti
    for p in range(2, math.gcd(*comp) + 1):
        if is_prime(p):
            modp = predicted_quotient_betti(comp, FieldDescriptor(p)).betti
            if modp != rational:
                return {"torsion_prime": p, "Fp": modp, "Q": rational}
    return {"torsion_prime": None, "Q": rational}


def wedge_of_spheres_classifier(composition: Sequence[int], confirm: bool = True) -> WedgeVerdict:
    comp = [int(c) for c in composition]
    if any(c < 1 for c in comp) or sum(comp) < 3:
        raise ArgumentError("need positive parts with total at least 3")
    wedge, reason = wedge_rule(comp)
    return WedgeVerdict(wedge, reason, torsion_witness(comp) if confirm else None)


def computed_quotient_betti(composition: Sequence[int], field: FieldDescriptor | int = QQ,
                            cache: str | None = None) -> BettiTable:
    """H̃(|Π_n| / Young) from the orbit chain complex of the open nerve."""
    comp = [int(c) for c in composition]
    model = nerve_model(partition_lattice(sum(comp)), group=young_group(comp))
    return betti_numbers(cached_orbit_chain_complex(model, _field(field), directory=cache_directory(cache)))


@dataclass
class TorsionReport:
    composition: tuple[int, ...]
    rational: dict[int, int]
    per_prime: dict[int, dict[int, int]]

    @property
    def gcd(self) -> int:
        return math.gcd(*self.composition)

    def flags(self) -> dict[int, bool]:
        return {p: t == self.rational for p, t in self.per_prime.items()}

    @property
    def ok(self) -> bool:
        return all(same for p, same in self.flags().items() if p > self.gcd)

    def to_json(self) -> dict:
        return {"composition": list(self.composition), "gcd": self.gcd, "Q": self.rational,
                "Fp": {str(p): t for p, t in self.per_prime.items()},
                "agree": {str(p): f for p, f in self.flags().items()}, "ok": self.ok}


def torsion_bound_check(composition: Sequence[int], primes: Sequence[int], cache: str | None = None) -> TorsionReport:
    """Computed F_p against rational Betti numbers; primes above the gcd must agree."""
    comp = tuple(int(c) for c in composition)
    for p in primes:
        if not is_prime(p):
            raise ArgumentError(f"{p} is not prime")
    rational = computed_quotient_betti(comp, QQ, cache).betti
    per_prime = {p: computed_quotient_betti(comp, FieldDescriptor(p), cache).betti for p in primes}
    return TorsionReport(comp, rational, per_prime)
