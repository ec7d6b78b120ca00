"""Slow, independent reference computations used to freeze and cross-check values.

Nothing here imports the package: partitions are frozensets of frozensets,
groups are closed by brute force and ranks use Fractions or plain mod-p
elimination.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from sympy.utilities.iterables import multiset_permutations


# ----------------------------------------------------------------- algebra


def rank(rows: list[dict[int, int]], p: int) -> int:
    """Rank of a sparse integer matrix over Q (p = 0) or F_p."""
    pivots: dict[int, dict[int, object]] = {}
    count = 0
    for row in rows:
        if p:
            vec = {c: v % p for c, v in row.items() if v % p}
        else:
            vec = {c: Fraction(v) for c, v in row.items() if v}
        while vec:
            col = min(vec)
            if col not in pivots:
                pivots[col] = vec
                count += 1
                break
            piv = pivots[col]
            factor = vec[col] * pow(piv[col], -1, p) % p if p else vec[col] / piv[col]
            for c, v in piv.items():
                nv = vec.get(c, 0) - factor * v
                if p:
                    nv %= p
                if nv:
                    vec[c] = nv
                else:
                    vec.pop(c, None)
    return count


def betti_from_complex(basis: dict[int, list], boundary: dict[int, list[dict[int, int]]], p: int) -> dict[int, int]:
    ranks = {d: rank(rows, p) for d, rows in boundary.items()}
    out = {}
    for d, b in basis.items():
        r = len(b) - ranks.get(d, 0) - ranks.get(d + 1, 0)
        if r:
            out[d] = r
    return dict(sorted(out.items()))


# -------------------------------------------------------------- partitions


def set_partitions(n: int) -> list[frozenset]:
    def grow(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in grow(rest):
            yield [[first]] + part
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]

    return [frozenset(frozenset(b) for b in part) for part in grow(list(range(n)))]


def refines(a: frozenset, b: frozenset) -> bool:
    return all(any(x <= y for y in b) for x in a)


def act_partition(perm: tuple[int, ...], part: frozenset) -> frozenset:
    return frozenset(frozenset(perm[x] for x in b) for b in part)


def close_group(gens: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    ident = tuple(range(n))
    found = {ident}
    frontier = [ident]
    while frontier:
        g = frontier.pop()
        for s in gens:
            h = tuple(s[g[i]] for i in range(n))
            if h not in found:
                found.add(h)
                frontier.append(h)
    return sorted(found)


def young_generators(composition) -> list[tuple[int, ...]]:
    n = sum(composition)
    gens = []
    start = 0
    for c in composition:
        for i in range(start, start + c - 1):
            perm = list(range(n))
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            gens.append(tuple(perm))
        start += c
    return gens


def cycles_to_perm(n: int, cycles) -> tuple[int, ...]:
    perm = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


# ------------------------------------------------------- orbit complexes


def _chains(elements, less, must_start=None, must_end=None):
    succ = {a: [b for b in elements if less(a, b)] for a in elements}
    starts = [must_start] if must_start is not None else list(elements)
    out = []

    def grow(chain):
        out.append(tuple(chain))
        for b in succ[chain[-1]]:
            chain.append(b)
            grow(chain)
            chain.pop()

    for s in starts:
        grow([s])
    if must_end is not None:
        out = [c for c in out if c[-1] == must_end]
    return out


def quotient_betti(elements, less, act, group, p: int) -> dict[int, int]:
    """Reduced homology of the strict quotient of the order complex."""
    chains = _chains(elements, less)
    canon = lambda c: min(tuple(act(g, x) for x in c) for g in group)
    basis: dict[int, list] = {-1: [()]}
    seen = set()
    for c in chains:
        k = canon(c)
        if k not in seen:
            seen.add(k)
            basis.setdefault(len(k) - 1, []).append(k)
    keys = {d: {c: i for i, c in enumerate(b)} for d, b in basis.items()}
    boundary = {}
    for d, b in basis.items():
        if d < 0:
            continue
        rows = []
        for c in b:
            row: dict[int, int] = {}
            for i in range(len(c)):
                face = canon(c[:i] + c[i + 1:]) if len(c) > 1 else ()
                col = keys[d - 1][face]
                row[col] = row.get(col, 0) + (-1) ** i
            rows.append(row)
        boundary[d] = rows
    return betti_from_complex(basis, boundary, p)


def pointed_quotient_betti(elements, less, act, group, bottom, top, p: int, step_ok=None) -> dict[int, int]:
    """Reduced homology of chains from bottom to top.

    Faces that drop an endpoint, or create a step rejected by ``step_ok``,
    lie in the collapsed subcomplex and count as zero.
    """
    step_ok = step_ok or (lambda a, b: True)
    chains = [c for c in _chains(elements, less, bottom, top) if all(step_ok(a, b) for a, b in zip(c, c[1:]))]
    canon = lambda c: min(tuple(act(g, x) for x in c) for g in group)
    basis: dict[int, list] = {}
    seen = set()
    for c in chains:
        k = canon(c)
        if k not in seen:
            seen.add(k)
            basis.setdefault(len(k) - 1, []).append(k)
    keys = {d: {c: i for i, c in enumerate(b)} for d, b in basis.items()}
    boundary = {}
    for d, b in basis.items():
        rows = []
        for c in b:
            row: dict[int, int] = {}
            for i in range(1, len(c) - 1):
                if not step_ok(c[i - 1], c[i + 1]):
                    continue
                col = keys[d - 1][canon(c[:i] + c[i + 1:])]
                row[col] = row.get(col, 0) + (-1) ** i
            rows.append(row)
        boundary[d] = rows
    return betti_from_complex(basis, boundary, p)


def partition_quotient_betti(n: int, gens: list[tuple[int, ...]], p: int = 0) -> dict[int, int]:
    """H̃(|Π_n| / G) for the group generated by gens."""
    group = close_group(gens, n)
    parts = [q for q in set_partitions(n) if 1 < len(q) < n]
    less = lambda a, b: a != b and refines(a, b)
    index = {q: i for i, q in enumerate(sorted(parts, key=lambda q: sorted(map(sorted, q))))}
    elems = list(index.values())
    inverse = {i: q for q, i in index.items()}
    return quotient_betti(elems, lambda a, b: less(inverse[a], inverse[b]),
                          lambda g, x: index[act_partition(g, inverse[x])], group, p)


def fixed_point_betti(n: int, gens: list[tuple[int, ...]], p: int = 0) -> dict[int, int]:
    parts = [q for q in set_partitions(n) if 1 < len(q) < n and all(act_partition(g, q) == q for g in gens)]
    elems = list(range(len(parts)))
    return quotient_betti(elems, lambda a, b: a != b and refines(parts[a], parts[b]),
                          lambda g, x: x, [None], p)


def atom_betti(n: int, ell: int, p: int) -> dict[int, int]:
    """H̃(Σ|Π_n|^◇ ∧_{Σ_n} (S^ℓ)^{∧n}) as chains in P_n × [ℓ]^n from bottom to top."""
    parts = sorted(set_partitions(n), key=lambda q: (-len(q), sorted(map(sorted, q))))
    cube = list(itertools.product(range(ell + 1), repeat=n))
    elems = [(a, v) for a in range(len(parts)) for v in cube]
    pindex = {q: i for i, q in enumerate(parts)}

    def less(x, y):
        (a, v), (b, w) = x, y
        return x != y and refines(parts[a], parts[b]) and all(s <= t for s, t in zip(v, w))

    def act(g, x):
        a, v = x
        w = [0] * n
        for i, s in enumerate(v):
            w[g[i]] = s
        return pindex[act_partition(g, parts[a])], tuple(w)

    group = list(itertools.permutations(range(n)))
    unit = lambda x, y: all(t - s <= 1 for s, t in zip(x[1], y[1]))
    return pointed_quotient_betti(elems, less, act, group, (0, (0,) * n), (len(parts) - 1, (ell,) * n), p, unit)


def symmetric_smash_betti(n: int, ell: int, p: int) -> dict[int, int]:
    """H̃((S^ℓ)^{∧n}/Σ_n) as chains in [ℓ]^n from bottom to top."""
    cube = list(itertools.product(range(ell + 1), repeat=n))
    less = lambda v, w: v != w and all(s <= t for s, t in zip(v, w))

    def act(g, v):
        w = [0] * n
        for i, s in enumerate(v):
            w[g[i]] = s
        return tuple(w)

    unit = lambda v, w: all(t - s <= 1 for s, t in zip(v, w))
    return pointed_quotient_betti(cube, less, act, list(itertools.permutations(range(n))),
                                  (0,) * n, (ell,) * n, p, unit)


def subspace_poset_betti(q: int, n: int, p: int = 0) -> dict[int, int]:
    vectors = list(itertools.product(range(q), repeat=n))
    spaces = set()
    for k in range(1, n):
        for gens in itertools.combinations(vectors, k):
            span = {tuple([0] * n)}
            for g in gens:
                span = {tuple((a + c * b) % q for a, b in zip(s, g)) for s in span for c in range(q)}
            if 1 < len(span) < q**n:
                spaces.add(frozenset(span))
    elems = sorted(spaces, key=lambda s: (len(s), sorted(s)))
    return quotient_betti(elems, lambda a, b: a != b and a <= b, lambda g, x: x, [None], p)


# ------------------------------------------------------------------ words


def lyndon_words(counts) -> list[tuple[int, ...]]:
    letters = [c for c, m in enumerate(counts) for _ in range(m)]
    words = set(itertools.permutations(letters))
    return sorted(w for w in words if all(w < w[i:] + w[:i] for i in range(1, len(w))))


def lyndon_count(counts) -> int:
    """Brute-force count of Lyndon words with the given letter multiplicities.

    The count does not depend on how the letters are ordered, so the rarest letter
    is made smallest; every Lyndon word then starts with it.
    """
    counts = sorted(c for c in counts if c)
    if not counts:
        return 0
    rest = [c for c, m in enumerate(counts) for _ in range(m)][1:]
    n = len(rest) + 1
    found = 0
    for tail in multiset_permutations(rest):
        w = [0] + tail
        if all(w < w[i:] + w[:i] for i in range(1, n)):
            found += 1
    return found


def witt_by_mobius(counts) -> int:
    def mobius(d):
        res, k, m = 1, 2, d
        while k * k <= m:
            if m % k == 0:
                m //= k
                if m % k == 0:
                    return 0
                res = -res
            k += 1
        return -res if m > 1 else res

    m = sum(counts)
    g = math.gcd(*counts)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            multi = math.factorial(m // d)
            for c in counts:
                multi //= math.factorial(c // d)
            total += mobius(d) * multi
    return total // m
