"""Fixed-point posets of partition lattices under permutation groups."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .homology import QQ, BettiTable, FieldDescriptor, betti_numbers, kunneth
from .poset_core import (
    ArgumentError,
    FiniteLattice,
    GroupAction,
    InvariantViolation,
    Partition,
    Permutation,
    ResourceError,
    partition_lattice,
)
from .simplicial import orbit_chain_complex, subposet_nerve_model

SUBGROUP_SEARCH_BOUND = 512


def invariant_partitions(n: int, group: GroupAction) -> list[int]:
    """Indices in P_n of the partitions fixed by every generator (0̂ and 1̂ included)."""
    return list(_invariant_indices(n, group.generators))


@lru_cache(maxsize=128)
def _invariant_indices(n: int, generators: tuple[Permutation, ...]) -> tuple[int, ...]:
    lat = partition_lattice(n)
    return tuple(i for i, p in enumerate(lat.values) if all(p.act(g) == p for g in generators))


def fixed_subposet(n: int, group: GroupAction) -> FiniteLattice:
    """The lattice P_n^G of invariant partitions."""
    if group.degree != n:
        raise ArgumentError(f"group acts on {group.degree} points, expected {n}")
    lat = partition_lattice(n)
    values = [lat.values[i] for i in invariant_partitions(n, group)]
    return FiniteLattice.from_order(values, lambda a, b: a.refines(b), f"P{n}^{group.label or 'G'}")


def fixed_point_betti(n: int, group: GroupAction, field: FieldDescriptor = QQ) -> BettiTable:
    """Reduced Betti numbers of |Π_n^G|."""
    lat = partition_lattice(n)
    members = [i for i in invariant_partitions(n, group) if i not in (lat.bottom, lat.top)]
    model = subposet_nerve_model(lat, members, name=f"fixed({n},{group.label})")
    return betti_numbers(orbit_chain_complex(model, field))


# ----------------------------------------------------------- classification


def _stabilizer(group: GroupAction, point: int) -> frozenset[Permutation]:
    return frozenset(g for g in group.elements if g(point) == point)


def orbit_isomorphism(group: GroupAction, source: tuple[int, ...], target: tuple[int, ...]) -> dict[int, int] | None:
    """A G-equivariant bijection between two orbits, or None."""
    if len(source) != len(target):
        return None
    a = source[0]
    stab = _stabilizer(group, a)
    for b in target:
        if _stabilizer(group, b) == stab:
            return {g(a): g(b) for g in group.elements}
    return None


@dataclass
class ActionClassification:
    kind: str                      # "transitive", "isotypical" or "non-isotypical"
    orbit_partition: Partition
    orbit_size: int | None = None
    multiplicity: int | None = None
    relabelling: Permutation | None = None
    complement_count: int | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "orbits": self.orbit_partition.to_json(),
            "d": self.orbit_size,
            "m": self.multiplicity,
            "relabelling": str(self.relabelling) if self.relabelling is not None else None,
            "complements": self.complement_count,
        }


def invariant_complements(n: int, group: GroupAction, x: int) -> list[int]:
    lat = partition_lattice(n)
    return [y for y in invariant_partitions(n, group)
            if y not in (lat.bottom, lat.top) and lat.meet(x, y) == lat.bottom and lat.join(x, y) == lat.top]


def _diagonal_relabelling(group: GroupAction, orbits: list[tuple[int, ...]]) -> Permutation:
    d = len(orbits[0])
    base = orbits[0]
    images = [0] * group.degree
    for j, orbit in enumerate(orbits):
        iso = orbit_isomorphism(group, base, orbit)
        for t, a in enumerate(base):
            images[iso[a]] = j * d + t
    perm = Permutation(tuple(images))
    inverse = perm.inverse()
    for g in group.generators:
        conj = perm.compose(g).compose(inverse)
        for j in range(len(orbits)):
            for t in range(d):
                if conj(j * d + t) != j * d + conj(t):
                    raise InvariantViolation("relabelled group is not diagonal")
    return perm


def classify_action(n: int, group: GroupAction) -> ActionClassification:
    """Orbit-type classification, cross-checked against complements of the orbit partition."""
    if group.degree != n:
        raise ArgumentError(f"group acts on {group.degree} points, expected {n}")
    orbits = group.point_orbits()
    x = Partition.from_blocks(n, orbits)
    if len(orbits) == 1:
        return ActionClassification("transitive", x, n, 1)
    base = orbits[0]
    iso = all(orbit_isomorphism(group, base, o) is not None for o in orbits[1:])
    lat = partition_lattice(n)
    xi = lat.index[x]
    complements = None
    if xi != lat.bottom:
        complements = len(invariant_complements(n, group, xi))
        if iso != (complements > 0):
            raise InvariantViolation(f"orbit test ({iso}) and complement test ({complements}) disagree")
    if not iso:
        return ActionClassification("non-isotypical", x, complement_count=complements)
    d = len(base)
    return ActionClassification("isotypical", x, d, n // d, _diagonal_relabelling(group, orbits), complements)


# ------------------------------------------------- transitive actions


def _closure(gens: list[Permutation], degree: int) -> frozenset[Permutation]:
    found = {Permutation.identity(degree)}
    frontier = list(found)
    while frontier:
        g = frontier.pop()
        for s in gens:
            h = s.compose(g)
            if h not in found:
                found.add(h)
                frontier.append(h)
    return frozenset(found)


def intermediate_subgroups(group: GroupAction, inner: frozenset[Permutation]) -> list[frozenset[Permutation]]:
    """All subgroups K with inner ⊆ K ⊆ G, by closure under adjoining elements."""
    if group.order > SUBGROUP_SEARCH_BOUND:
        raise ResourceError(f"group order {group.order} exceeds {SUBGROUP_SEARCH_BOUND}")
    found = {inner}
    frontier = [inner]
    while frontier:
        k = frontier.pop()
        for g in group.elements:
            if g in k:
                continue
            bigger = _closure(list(k) + [g], group.degree)
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass
class SubgroupCorrespondence:
    subgroups: list[frozenset[Permutation]]
    partitions: list[Partition]
    bijective: bool
    order_preserving: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.order_preserving


def invariant_partitions_as_subgroups(group: GroupAction) -> SubgroupCorrespondence:
    """Match subgroups Stab(0) ⊆ K ⊆ G with invariant partitions via K ↦ {g·(K·0)}."""
    n = group.degree
    if len(group.point_orbits()) != 1:
        raise ArgumentError("group must act transitively")
    stab = _stabilizer(group, 0)
    subgroups = intermediate_subgroups(group, stab)
    parts = []
    for k in subgroups:
        block = {g(0) for g in k}
        blocks = {frozenset(g(b) for b in block) for g in group.elements}
        parts.append(Partition.from_blocks(n, blocks))
    lat = partition_lattice(n)
    expected = {lat.values[i] for i in invariant_partitions(n, group)}
    bijective = len(set(parts)) == len(parts) and set(parts) == expected
    order_ok = all((k1 <= k2) == p1.refines(p2)
                   for k1, p1 in zip(subgroups, parts) for k2, p2 in zip(subgroups, parts))
    return SubgroupCorrespondence(subgroups, parts, bijective, order_ok)


# ------------------------------------------------------------ predictions


def predicted_fixed_point_betti(p: int, k: int, m: int, field: FieldDescriptor = QQ) -> BettiTable:
    """(m−1)!·p^{k(m−1)+C(k,2)} spheres of dimension m+k−3."""
    if k < 1 or m < 1:
        raise ArgumentError("need k >= 1 and m >= 1")
    rank = math.factorial(m - 1) * p ** (k * (m - 1) + math.comb(k, 2))
    return BettiTable(field, {m + k - 3: rank})


def decomposition_prediction(n: int, group: GroupAction, field: FieldDescriptor = QQ) -> BettiTable | None:
    """Ranks of |Π_n^G| from (#complements) × H̃((|Π_d^G|)^◇ ∧ |Π_m|^◇); None unless x is proper."""
    info = classify_action(n, group)
    if info.kind == "non-isotypical":
        return BettiTable(field, {})
    if info.kind == "transitive" or info.orbit_size == 1:
        return None
    d, m = info.orbit_size, info.multiplicity
    perm = info.relabelling
    inverse = perm.inverse()
    restricted = []
    for g in group.generators:
        conj = perm.compose(g).compose(inverse)
        restricted.append(Permutation(tuple(conj(t) for t in range(d))))
    orbit_group = GroupAction(d, tuple(restricted), f"{group.label}|orbit")
    inner = fixed_point_betti(d, orbit_group, field) if d > 1 else BettiTable(field, {-1: 1})
    outer = fixed_point_betti(m, GroupAction.trivial(m), field) if m > 1 else BettiTable(field, {-1: 1})
    smash = kunneth([inner.shifted(1), outer.shifted(1)])
    return BettiTable(field, {t: info.complement_count * r for t, r in smash.items()})


# --------------------------------------------------------------- fixtures


def elementary_abelian_action(p: int, k: int, m: int) -> GroupAction:
    """F_p^k acting freely on m copies of itself by translation."""
    size = p**k
    vectors = list(product(range(p), repeat=k))
    code = {v: i for i, v in enumerate(vectors)}
    gens = []
    for axis in range(k):
        images = []
        for copy in range(m):
            for v in vectors:
                w = list(v)
                w[axis] = (w[axis] + 1) % p
                images.append(copy * size + code[tuple(w)])
        gens.append(Permutation(tuple(images)))
    return GroupAction(m * size, tuple(gens), f"F{p}^{k}x{m}")


def iterated_wreath(levels: int) -> GroupAction:
    """Σ_2 ≀ … ≀ Σ_2 (levels factors) on 2^levels points."""
    n = 2**levels
    gens = []
    for level in range(levels):
        width = 2**level
        for start in range(0, n, 2 * width):
            gens.append(Permutation.from_cycles(n, [(start + t, start + width + t) for t in range(width)]))
    return GroupAction(n, tuple(gens), "wreath" + "2" * levels)


def cyclic_subgroups_by_type(n: int) -> list[GroupAction]:
    """One cyclic subgroup ⟨g⟩ per cycle type of g in Σ_n."""
    out = []

    def parts(total: int, largest: int):
        if total == 0:
            yield ()
            return
        for first in range(min(total, largest), 0, -1):
            for rest in parts(total - first, first):
                yield (first,) + rest

    for shape in parts(n, n):
        cycles, start = [], 0
        for length in shape:
            cycles.append(tuple(range(start, start + length)))
            start += length
        g = Permutation.from_cycles(n, [c for c in cycles if len(c) > 1])
        out.append(GroupAction(n, (g,), "C" + ".".join(map(str, shape))))
    return out
