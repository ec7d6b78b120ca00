"""Finite lattices, set partitions, subspace lattices and permutation actions.

Elements of a :class:`FiniteLattice` are addressed by integer indices.  The
indices always form a linear extension of the order, which lets meets and
joins be read off from bitsets of lower and upper sets: the meet of ``a`` and
``b`` is the largest index below both, the join the smallest index above both.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence, TypeVar

T = TypeVar("T", bound=Hashable)

GROUP_ORDER_BOUND = 10**6
LATTICE_SIZE_BOUND = 10**5


class ArgumentError(ValueError):
    """Invalid input supplied by the caller."""


class ResourceError(RuntimeError):
    """A configured size bound would be exceeded."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed."""


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True, order=True)
class Partition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(self.n)) or any(not b for b in self.blocks):
            raise ArgumentError(f"not a partition of {self.n} points: {self.blocks}")

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        canon = sorted(tuple(sorted(b)) for b in blocks if b)
        return cls(n, tuple(canon))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return cls.from_blocks(len(labels), groups.values())

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "Partition":
        return cls(n, (tuple(range(n)),) if n else ())

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "Partition":
        n = sum(len(b) for b in data)
        return cls.from_blocks(n, [[x - 1 for x in b] for b in data])

    def to_json(self) -> list[list[int]]:
        return [[x + 1 for x in b] for b in self.blocks]

    @cached_property
    def labels(self) -> tuple[int, ...]:
        lab = [0] * self.n
        for k, b in enumerate(self.blocks):
            for x in b:
                lab[x] = k
        return tuple(lab)

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self.labels[x]]

    def refines(self, other: "Partition") -> bool:
        lab = other.labels
        return all(len({lab[x] for x in b}) == 1 for b in self.blocks)

    def act(self, perm: "Permutation") -> "Partition":
        return Partition.from_blocks(self.n, [[perm.image[x] for x in b] for b in self.blocks])

    def __str__(self) -> str:
        return "|".join("".join(str(x + 1) for x in b) for b in self.blocks)


def _check_same_size(p: Partition, q: Partition) -> None:
    if p.n != q.n:
        raise ArgumentError(f"partitions of different sets: {p.n} vs {q.n}")


def partition_meet(p: Partition, q: Partition) -> Partition:
    """Common refinement: the nonempty pairwise intersections of blocks."""
    _check_same_size(p, q)
    return Partition.from_labels(list(zip(p.labels, q.labels)))


def partition_join(p: Partition, q: Partition) -> Partition:
    """Finest partition coarser than both (transitive closure of the union)."""
    _check_same_size(p, q)
    parent = list(range(p.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in itertools.chain(p.blocks, q.blocks):
        root = find(b[0])
        for x in b[1:]:
            parent[find(x)] = root
    return Partition.from_labels([find(x) for x in range(p.n)])


def set_partitions(n: int) -> list[Partition]:
    """All set partitions of range(n), via restricted growth strings."""
    out: list[Partition] = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            out.append(Partition.from_labels(prefix))
            return
        for lab in range(top + 2):
            prefix.append(lab)
            grow(prefix, max(top, lab))
            prefix.pop()

    if n == 0:
        return [Partition(0, ())]
    grow([0], 0)
    return out


# -------------------------------------------------------------- permutations


@dataclass(frozen=True, order=True)
class Permutation:
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.image) != list(range(len(self.image))):
            raise ArgumentError(f"not a permutation: {self.image}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from 0-based cycles."""
        image = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if not 0 <= a < n:
                    raise ArgumentError(f"point {a + 1} outside 1..{n}")
                image[a] = b
        return cls(tuple(image))

    @classmethod
    def parse(cls, n: int, text: str) -> "Permutation":
        """Parse 1-based cycle notation "(1 2)(3 4)" or a one-line list "2 1 4 3"."""
        text = text.strip()
        if not re.fullmatch(r"[\d\s,()\[\]]*", text) or (text.startswith("(") and not re.fullmatch(
                r"(\(\s*[\d\s,]*\))*", text.replace(" ", ""))):
            raise ArgumentError(f"cannot parse permutation {text!r}")
        if text.startswith("("):
            cycles = []
            for body in re.findall(r"\(([^)]*)\)", text):
                pts = [int(t) - 1 for t in re.split(r"[\s,]+", body.strip()) if t]
                if pts:
                    cycles.append(pts)
            return cls.from_cycles(n, cycles)
        pts = [int(t) - 1 for t in re.split(r"[\s,\[\]]+", text) if t]
        if len(pts) != n:
            raise ArgumentError(f"one-line permutation needs {n} entries: {text!r}")
        return cls(tuple(pts))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        return Permutation(tuple(self.image[j] for j in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(len(self.image)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.image[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.image[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


@dataclass(frozen=True)
class GroupAction:
    """A permutation group on range(degree), given by generators."""

    degree: int
    generators: tuple[Permutation, ...]
    label: str = ""

    def __post_init__(self) -> None:
        for g in self.generators:
            if g.degree != self.degree:
                raise ArgumentError(f"generator {g} has degree {g.degree}, expected {self.degree}")

    @cached_property
    def elements(self) -> tuple[Permutation, ...]:
        ident = Permutation.identity(self.degree)
        found = {ident}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = s.compose(g)
                if h not in found:
                    found.add(h)
                    if len(found) > GROUP_ORDER_BOUND:
                        raise ResourceError(f"group order exceeds {GROUP_ORDER_BOUND}")
                    queue.append(h)
        return tuple(sorted(found))

    @property
    def order(self) -> int:
        return len(self.elements)

    def point_orbits(self) -> list[tuple[int, ...]]:
        orbits = orbits_of(self, list(range(self.degree)), lambda g, x: g(x))
        return [tuple(sorted(o.members)) for o in orbits]

    @classmethod
    def trivial(cls, n: int) -> "GroupAction":
        return cls(n, (), "trivial")

    @classmethod
    def symmetric(cls, n: int) -> "GroupAction":
        return young_group([n])

    @classmethod
    def from_cycle_strings(cls, n: int, gens: Iterable[str], label: str = "") -> "GroupAction":
        return cls(n, tuple(Permutation.parse(n, s) for s in gens), label)


def young_coloring(composition: Sequence[int]) -> tuple[int, ...]:
    """Colour of each point: the first n_1 points get colour 0, and so on."""
    return tuple(c for c, m in enumerate(composition) for _ in range(m))


def young_group(composition: Sequence[int]) -> GroupAction:
    """Σ_{n_1} × … × Σ_{n_k} acting on consecutive blocks of points."""
    if any(m < 0 for m in composition):
        raise ArgumentError(f"negative part in composition {composition}")
    n = sum(composition)
    gens = []
    start = 0
    for m in composition:
        if m >= 2:
            gens.append(Permutation.from_cycles(n, [(start, start + 1)]))
        if m >= 3:
            gens.append(Permutation.from_cycles(n, [tuple(range(start, start + m))]))
        start += m
    label = "Young(" + ",".join(str(m) for m in composition) + ")"
    return GroupAction(n, tuple(gens), label)


@dataclass
class Orbit:
    representative: object
    members: list
    stabilizer_generators: list[Permutation]


def orbits_of(action: GroupAction, items: Sequence[T], act: Callable[[Permutation, T], T]) -> list[Orbit]:
    """Orbits of ``items`` with Schreier generators of each stabilizer.

    Orbits are ordered by their smallest member (items must be sortable);
    that smallest member is the representative.
    """
    item_set = set(items)
    remaining = sorted(item_set)
    done: set = set()
    result = []
    ident = Permutation.identity(action.degree)
    for start in remaining:
        if start in done:
            continue
        transversal = {start: ident}
        queue = deque([start])
        while queue:
            y = queue.popleft()
            for s in action.generators:
                z = act(s, y)
                if z not in item_set:
                    raise InvariantViolation(f"action leaves item set: {s} maps {y!r} to {z!r}")
                if z not in transversal:
                    transversal[z] = s.compose(transversal[y])
                    queue.append(z)
        stab: set[Permutation] = set()
        for y, t in transversal.items():
            for s in action.generators:
                z = act(s, y)
                h = transversal[z].inverse().compose(s.compose(t))
                if not h.is_identity():
                    stab.add(h)
        members = sorted(transversal)
        done.update(members)
        result.append(Orbit(members[0], members, sorted(stab)))
    return result


def generated_order(degree: int, gens: Iterable[Permutation]) -> int:
    return GroupAction(degree, tuple(gens)).order


# ------------------------------------------------------------------ lattices


def _top_bit(x: int) -> int:
    return x.bit_length() - 1


def _low_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass
class FiniteLattice:
    """A finite lattice on indices 0..N-1 listed in a linear extension.

    ``down[i]`` / ``up[i]`` are bitsets of the elements below / above ``i``
    (both inclusive).  ``values`` holds the underlying objects.
    """

    values: list
    down: list[int]
    up: list[int]
    name: str = ""
    index: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {v: i for i, v in enumerate(self.values)}
        if len(self.values) > LATTICE_SIZE_BOUND:
            raise ResourceError(f"lattice with {len(self.values)} elements exceeds bound")

    @classmethod
    def from_order(cls, values: Sequence, leq: Callable[[object, object], bool], name: str = "") -> "FiniteLattice":
        """Build from an arbitrary order predicate (quadratic; for small lattices)."""
        vals = list(values)
        size = len(vals)
        below = [sum(1 for w in vals if leq(w, v)) for v in vals]
        order = sorted(range(size), key=lambda i: below[i])
        vals = [vals[i] for i in order]
        down = [0] * size
        up = [0] * size
        for i, v in enumerate(vals):
            for j, w in enumerate(vals):
                if leq(w, v):
                    down[i] |= 1 << j
                    up[j] |= 1 << i
        lat = cls(vals, down, up, name)
        lat._check_bounds()
        return lat

    def _check_bounds(self) -> None:
        full = (1 << len(self.values)) - 1
        if self.up[self.bottom] != full or self.down[self.top] != full:
            raise ArgumentError("poset lacks a bottom or top element")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.values) - 1

    def leq(self, a: int, b: int) -> bool:
        return bool(self.down[b] >> a & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.down[b] >> a & 1)

    def meet(self, a: int, b: int) -> int:
        return _top_bit(self.down[a] & self.down[b])

    def join(self, a: int, b: int) -> int:
        return _low_bit(self.up[a] & self.up[b])

    def strictly_above(self, a: int) -> list[int]:
        return [j for j in _bits(self.up[a]) if j != a]

    def strictly_below(self, a: int) -> list[int]:
        return [j for j in _bits(self.down[a]) if j != a]

    def between(self, a: int, b: int) -> list[int]:
        """Elements z with a < z < b."""
        mask = self.up[a] & self.down[b] & ~(1 << a) & ~(1 << b)
        return list(_bits(mask))

    def proper(self) -> list[int]:
        return self.between(self.bottom, self.top)

    def is_chain(self, chain: Sequence[int]) -> bool:
        return all(self.lt(a, b) for a, b in zip(chain, chain[1:]))

    def height(self) -> int:
        """Number of elements in a longest chain minus one."""
        longest = [0] * len(self)
        for i in range(len(self)):
            for j in self.strictly_below(i):
                longest[i] = max(longest[i], longest[j] + 1)
        return longest[self.top]

    def element_table(self, fn: Callable[[object], object]) -> tuple[int, ...]:
        """Permutation of indices induced by a map on values."""
        return tuple(self.index[fn(v)] for v in self.values)

    def interval(self, a: int, b: int) -> "FiniteLattice":
        """The closed interval [a, b] as a lattice of its own."""
        if not self.leq(a, b):
            raise ArgumentError(f"interval endpoints not ordered: {a} !<= {b}")
        members = list(_bits(self.up[a] & self.down[b]))
        pos = {m: k for k, m in enumerate(members)}
        down = []
        up = []
        for m in members:
            down.append(sum(1 << pos[j] for j in _bits(self.down[m] & self.up[a])))
            up.append(sum(1 << pos[j] for j in _bits(self.up[m] & self.down[b])))
        sub = FiniteLattice([self.values[m] for m in members], down, up, f"{self.name}[{a},{b}]")
        sub.parent_indices = members
        return sub


def complement_set(lattice: FiniteLattice, x: int) -> set[int]:
    """{y proper : x ∧ y = 0̂ and x ∨ y = 1̂}."""
    bot, top = lattice.bottom, lattice.top
    return {y for y in lattice.proper() if lattice.meet(x, y) == bot and lattice.join(x, y) == top}


_PARTITION_LATTICES: dict[int, FiniteLattice] = {}
# Bell(10) = 115975; anything larger does not fit the bitset representation comfortably
PARTITION_LATTICE_MAX_N = 10


def partition_lattice(n: int) -> FiniteLattice:
    """The lattice of set partitions of range(n), finer partitions first."""
    if n in _PARTITION_LATTICES:
        return _PARTITION_LATTICES[n]
    if n < 1:
        raise ArgumentError("n must be positive")
    if n > PARTITION_LATTICE_MAX_N:
        raise ResourceError(f"P{n} has too many elements (limit n <= {PARTITION_LATTICE_MAX_N})")
    parts = set_partitions(n)
    parts.sort(key=lambda p: (-len(p.blocks), p.blocks))
    index = {p: i for i, p in enumerate(parts)}
    size = len(parts)
    down = [1 << i for i in range(size)]
    # lower covers split one block in two; finer elements come first
    for i, p in enumerate(parts):
        for k, b in enumerate(p.blocks):
            if len(b) < 2:
                continue
            rest = [c for j, c in enumerate(p.blocks) if j != k]
            first, others = b[0], b[1:]
            for mask in range(1 << len(others)):
                if mask == (1 << len(others)) - 1:
                    continue
                left = [first] + [x for t, x in enumerate(others) if mask >> t & 1]
                right = [x for t, x in enumerate(others) if not mask >> t & 1]
                child = index[Partition.from_blocks(n, rest + [left, right])]
                down[i] |= down[child]
    # upper covers merge two blocks; coarser elements come later
    up = [1 << i for i in range(size)]
    for i in range(size - 1, -1, -1):
        blocks = parts[i].blocks
        for a in range(len(blocks)):
            for b in range(a + 1, len(blocks)):
                rest = [c for j, c in enumerate(blocks) if j not in (a, b)]
                parent = index[Partition.from_blocks(n, rest + [blocks[a] + blocks[b]])]
                up[i] |= up[parent]
    lat = FiniteLattice(parts, down, up, f"P{n}", index)
    _PARTITION_LATTICES[n] = lat
    return lat


def action_tables(lattice: FiniteLattice, group: GroupAction) -> list[tuple[int, ...]]:
    """Every group element as a permutation of lattice indices (partition lattices)."""
    return [lattice.element_table(lambda p, g=g: p.act(g)) for g in group.elements]


def generator_tables(lattice: FiniteLattice, group: GroupAction) -> list[tuple[int, ...]]:
    return [lattice.element_table(lambda p, g=g: p.act(g)) for g in group.generators]


# ------------------------------------------------------------ linear algebra


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_q^n stored as the bitset of its vectors (base-q codes)."""

    q: int
    n: int
    mask: int

    @property
    def dimension(self) -> int:
        size = bin(self.mask).count("1")
        d = 0
        while self.q**d < size:
            d += 1
        return d

    def vectors(self) -> list[int]:
        return list(_bits(self.mask))

    def __str__(self) -> str:
        return "<" + ",".join(_vec_str(v, self.q, self.n) for v in self.vectors()) + ">"


def _vec_digits(code: int, q: int, n: int) -> list[int]:
    return [(code // q**i) % q for i in range(n)]


def _vec_code(digits: Sequence[int], q: int) -> int:
    return sum(d * q**i for i, d in enumerate(digits))


def _vec_str(code: int, q: int, n: int) -> str:
    return "".join(str(d) for d in _vec_digits(code, q, n))


def _span(q: int, n: int, gens: Iterable[int]) -> int:
    vecs = {0}
    for g in gens:
        gd = _vec_digits(g, q, n)
        new = set()
        for v in vecs:
            vd = _vec_digits(v, q, n)
            for c in range(q):
                new.add(_vec_code([(a + c * b) % q for a, b in zip(vd, gd)], q))
        vecs = new
    return sum(1 << v for v in vecs)


def subspace_lattice(q: int, n: int, bound: int = 10**4) -> FiniteLattice:
    """All subspaces of F_q^n ordered by inclusion (prime q only)."""
    if not _is_prime(q):
        raise ArgumentError(f"only prime fields are supported, got q={q}")
    if n < 1:
        raise ArgumentError("dimension must be at least 1")
    # number of subspaces grows like q^(n^2/4); estimate by enumeration with a guard
    found = {1}  # the zero subspace {0}
    frontier = [1]
    total_vectors = q**n
    while frontier:
        nxt = []
        for mask in frontier:
            for v in range(1, total_vectors):
                if mask >> v & 1:
                    continue
                gens = [u for u in _bits(mask) if u] + [v]
                bigger = _span(q, n, gens)
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
                    if len(found) > bound:
                        raise ResourceError(f"subspace lattice of F_{q}^{n} exceeds {bound} elements")
        frontier = nxt
    values = [Subspace(q, n, m) for m in found]
    return FiniteLattice.from_order(values, lambda a, b: a.mask & b.mask == a.mask, f"Sub(F{q}^{n})")


def matrix_action_table(lattice: FiniteLattice, matrix: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Permutation of subspaces induced by an invertible matrix over F_q."""
    sample: Subspace = lattice.values[0]
    q, n = sample.q, sample.n

    def apply(code: int) -> int:
        d = _vec_digits(code, q, n)
        return _vec_code([sum(matrix[r][c] * d[c] for c in range(n)) % q for r in range(n)], q)

    def image(s: Subspace) -> Subspace:
        return Subspace(q, n, sum(1 << apply(v) for v in s.vectors()))

    return lattice.element_table(image)


def coordinate_subspace(q: int, n: int, coords: Iterable[int]) -> Subspace:
    gens = [q**c for c in coords]
    return Subspace(q, n, _span(q, n, gens))
