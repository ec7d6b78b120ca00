"""Lyndon words, Witt counts, labelled weak Lyndon words and their chains.

Letters are tuples of colours (1-based), so the base letter c_i is ``(i,)``
and a composite letter c_{12} is ``(1, 2)``.  Python's tuple order is the
lexicographic order with prefixes smaller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .poset_core import ArgumentError, Partition, Permutation, ResourceError, young_group

Letter = tuple[int, ...]
Word = tuple[Letter, ...]

LABELLED_WORD_BOUND = 10**6


def word_from_colours(colours: Sequence[int]) -> Word:
    return tuple((c,) for c in colours)


def format_word(word: Word) -> str:
    sep = "" if all(c < 10 for letter in word for c in letter) else "."
    return " ".join(sep.join(str(c) for c in letter) for letter in word)


def parse_word(text: str) -> Word:
    letters = []
    for token in text.split():
        parts = token.split(".") if "." in token else list(token)
        letters.append(tuple(int(p) for p in parts))
    if not letters:
        raise ArgumentError("empty word")
    return tuple(letters)


def rotations(word: Sequence) -> Iterator[tuple]:
    w = tuple(word)
    for i in range(1, len(w)):
        yield w[i:] + w[:i]


def is_lyndon(word: Sequence) -> bool:
    w = tuple(word)
    return bool(w) and all(w < r for r in rotations(w))


def is_weak_lyndon(word: Sequence) -> bool:
    w = tuple(word)
    return bool(w) and all(w <= r for r in rotations(w))


def primitive_root(word: Sequence) -> tuple[tuple, int]:
    """(u, d) with word = u^d and d maximal."""
    w = tuple(word)
    m = len(w)
    for p in range(1, m + 1):
        if m % p == 0 and w[:p] * (m // p) == w:
            return w[:p], m // p
    raise AssertionError("unreachable")


def _fixed_content_lyndon(counts: list[int]) -> list[tuple[int, ...]]:
    """Lyndon words with fixed letter content, prenecklace recursion (FKM)."""
    n = sum(counts)
    k = len(counts)
    first = next(c for c, m in enumerate(counts) if m)
    a = [0] * (n + 1)
    a[1] = first
    counts[first] -= 1
    out: list[tuple[int, ...]] = []

    def gen(t: int, p: int) -> None:
        if t > n:
            if p == n:
                out.append(tuple(a[1:]))
            return
        back = a[t - p]
        for j in range(back, k):
            if counts[j]:
                a[t] = j
                counts[j] -= 1
                gen(t + 1, p if j == back else t)
                counts[j] += 1

    gen(2, 1)
    counts[first] += 1
    return out


def _check_composition(mults: Sequence[int]) -> list[int]:
    m = [int(x) for x in mults]
    if any(x < 0 for x in m) or sum(m) < 1:
        raise ArgumentError(f"multiplicities must be nonnegative with positive sum: {mults}")
    return m


def lyndon_words(mults: Sequence[int]) -> list[Word]:
    """All Lyndon words with exactly mults[i] copies of c_{i+1}, sorted."""
    counts = _check_composition(mults)
    found = _fixed_content_lyndon(list(counts))
    return sorted(word_from_colours([c + 1 for c in w]) for w in found)


def count_lyndon_words(mults: Sequence[int]) -> int:
    """len(lyndon_words(mults)) without building or sorting the words."""
    return len(_fixed_content_lyndon(_check_composition(mults)))


def multinomial(parts: Sequence[int]) -> int:
    out = math.factorial(sum(parts))
    for p in parts:
        out //= math.factorial(p)
    return out


def witt_count(mults: Sequence[int]) -> int:
    """Number of Lyndon words with the given letter multiplicities."""
    counts = _check_composition(mults)
    m = sum(counts)
    g = math.gcd(*counts)
    total = sum(int(mobius(d)) * multinomial([c // d for c in counts]) for d in divisors(g))
    if total % m:
        raise AssertionError(f"Witt sum {total} not divisible by {m}")
    return total // m


# --------------------------------------------------------------- reduction


def reduce_word(word: Word) -> Word:
    """One application of the reduction: glue each minimal letter to a larger successor.

    The scan runs left to right and consumes non-overlapping pairs.
    """
    if not word:
        return word
    low = min(word)
    out = []
    i = 0
    while i < len(word):
        if word[i] == low and i + 1 < len(word) and word[i + 1] > low:
            out.append(low + word[i + 1])
            i += 2
        else:
            out.append(word[i])
            i += 1
    return tuple(out)


def reduction_sequence(word: Word) -> list[Word]:
    """w_0 = w', w_1 = w_0', … up to and including the first repeated word."""
    seq = [reduce_word(word)]
    while True:
        nxt = reduce_word(seq[-1])
        if nxt == seq[-1]:
            return seq
        seq.append(nxt)


# --------------------------------------------------------- labelled words


@dataclass(frozen=True, order=True)
class LabelledWord:
    """A weak Lyndon word u^d with a 0-based point label on every letter."""

    word: Word
    labels: tuple[int, ...]
    period: int

    def __post_init__(self) -> None:
        if len(self.word) != len(self.labels) or sorted(self.labels) != list(range(len(self.labels))):
            raise ArgumentError("labels must be a bijection onto the letter positions")

    @property
    def root(self) -> Word:
        return self.word[: len(self.word) // self.period]

    def copies(self) -> list[tuple[int, ...]]:
        size = len(self.word) // self.period
        return [self.labels[j * size:(j + 1) * size] for j in range(self.period)]

    def canonical(self) -> "LabelledWord":
        """Identify labellings that differ by permuting copies of the root."""
        blocks = sorted(self.copies())
        return LabelledWord(self.word, tuple(x for b in blocks for x in b), self.period)

    def act(self, perm: Permutation) -> "LabelledWord":
        return LabelledWord(self.word, tuple(perm(x) for x in self.labels), self.period).canonical()

    def copy_partition(self) -> Partition:
        n = len(self.labels)
        return Partition.from_blocks(n, [list(b) for b in self.copies()])

    def __str__(self) -> str:
        return " ".join(f"{format_word((letter,))}:{lab + 1}" for letter, lab in zip(self.word, self.labels))


def standard_labelling(root: Word, period: int, composition: Sequence[int]) -> LabelledWord:
    """Copy j of the root takes the labels ≡ j mod d, increasing along each colour."""
    offsets = [sum(composition[:i]) for i in range(len(composition))]
    labels = []
    for j in range(period):
        seen = [0] * len(composition)
        for (colour,) in root:
            c = colour - 1
            labels.append(offsets[c] + j + seen[c] * period)
            seen[c] += 1
    return LabelledWord(root * period, tuple(labels), period).canonical()


def _composition_ok(composition: Sequence[int]) -> list[int]:
    comp = [int(x) for x in composition]
    if any(x < 1 for x in comp):
        raise ArgumentError(f"composition parts must be positive: {composition}")
    return comp


def standard_labelled_words(composition: Sequence[int]) -> list[LabelledWord]:
    """One standard labelled weak Lyndon word per Young orbit."""
    comp = _composition_ok(composition)
    out = []
    for d in divisors(math.gcd(*comp)):
        for u in lyndon_words([c // d for c in comp]):
            out.append(standard_labelling(u, d, comp))
    return out


def labelled_weak_lyndon_words(composition: Sequence[int]) -> list[LabelledWord]:
    """Every labelled weak Lyndon word, closed under the Young group."""
    comp = _composition_ok(composition)
    group = young_group(comp)
    expected = sum(witt_count([c // d for c in comp]) * math.prod(math.factorial(c) for c in comp)
                   // math.factorial(d) for d in divisors(math.gcd(*comp)))
    if expected > LABELLED_WORD_BOUND:
        raise ResourceError(f"{expected} labelled words exceed the bound {LABELLED_WORD_BOUND}")
    found: set[LabelledWord] = set()
    for rep in standard_labelled_words(comp):
        for g in group.elements:
            found.add(rep.act(g))
    return sorted(found)


def chain_from_word(lw: LabelledWord) -> list[Partition]:
    """Binary chain of partitions attached to a labelled weak Lyndon word.

    Points are grouped by the letter of w_i they have been glued into; the
    chain lists the distinct groupings strictly between 0̂ and 1̂.
    """
    n = len(lw.labels)
    groups: list[list[int]] = [[x] for x in lw.labels]
    word = lw.word
    chain: list[Partition] = []
    while True:
        low = min(word)
        new_word, new_groups = [], []
        i = 0
        while i < len(word):
            if word[i] == low and i + 1 < len(word) and word[i + 1] > low:
                new_word.append(low + word[i + 1])
                new_groups.append(groups[i] + groups[i + 1])
                i += 2
            else:
                new_word.append(word[i])
                new_groups.append(groups[i])
                i += 1
        if tuple(new_word) == word:
            break
        word, groups = tuple(new_word), new_groups
        if not is_weak_lyndon(word):
            raise AssertionError(f"reduction left the weak Lyndon words: {format_word(word)}")
        x = Partition.from_blocks(n, groups)
        if len(x.blocks) > 1:
            chain.append(x)
    return chain


def orthogonal_chain_count_formula(composition: Sequence[int]) -> int:
    """Σ_{d | gcd} |B(n_i/d)| · n_1!…n_k!/d!, the number of labelled weak Lyndon words."""
    comp = _composition_ok(composition)
    order = math.prod(math.factorial(c) for c in comp)
    return sum(witt_count([c // d for c in comp]) * order // math.factorial(d)
               for d in divisors(math.gcd(*comp)))


def branching_dimension_identity(composition: Sequence[int]) -> tuple[int, int, bool]:
    """(n−1)! against Σ_d |B(n_i/d)| · [Young : Σ_d] · (d−1)!."""
    comp = _composition_ok(composition)
    n = sum(comp)
    if n < 2:
        raise ArgumentError("need n >= 2")
    order = math.prod(math.factorial(c) for c in comp)
    lhs = math.factorial(n - 1)
    rhs = sum(witt_count([c // d for c in comp]) * (order // math.factorial(d)) * math.factorial(d - 1)
              for d in divisors(math.gcd(*comp)))
    return lhs, rhs, lhs == rhs


def compositions(n: int, max_parts: int | None = None) -> Iterator[tuple[int, ...]]:
    """All compositions of n into positive parts."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            if max_parts is None or 1 + len(rest) <= max_parts:
                yield (first,) + rest
