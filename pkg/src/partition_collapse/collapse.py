"""Complementary collapse: fans, invisible and orthogonal chains, Morse matchings.

Chains are tuples of lattice indices in increasing order.  Fan functions
take a nonempty chain and return a lattice index.  Restricted fans on an
interval [lo, hi] are built by wrapping the functions of the parent fan:

* down-restriction to [lo, y]:   σ ↦ F(σ) ∧ y
* up-restriction to [y, hi]:     σ ↦ F([lo < σ]) ∨ y

so every call of a base function sees a chain starting at the global 0̂.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Sequence

from .homology import FieldDescriptor, QQ, betti_numbers, kunneth
from .homology import BettiTable
from .poset_core import (
    ArgumentError,
    FiniteLattice,
    GroupAction,
    InvariantViolation,
    Partition,
    ResourceError,
    Subspace,
    _bits,
    generator_tables,
    partition_lattice,
    young_coloring,
    young_group,
)
from .simplicial import orbit_chain_complex, subposet_nerve_model

Chain = tuple[int, ...]
FanFunction = Callable[[Chain], int]
Table = tuple[int, ...]

CHAIN_ENUMERATION_BOUND = 2_000_000


def memoized(fn: FanFunction) -> FanFunction:
    memo: dict[Chain, int] = {}

    def wrapped(chain: Chain) -> int:
        hit = memo.get(chain)
        if hit is None:
            hit = fn(chain)
            memo[chain] = hit
        return hit

    return wrapped


@dataclass
class Fan:
    """An ordered list of chain functions on a lattice, with the symmetry group."""

    lattice: FiniteLattice
    functions: list[FanFunction]
    generators: list[Table] = field(default_factory=list)
    group_order: int = 1
    name: str = ""

    def __len__(self) -> int:
        return len(self.functions)

    def first_value(self) -> int:
        return self.functions[0]((self.lattice.bottom,))

    def collapse_point(self) -> int | None:
        """First F_i([0̂]) different from 0̂; the root passes to F_{i+1} while F_i([0̂]) = 0̂."""
        bottom = self.lattice.bottom
        for fn in self.functions:
            x = fn((bottom,))
            if x != bottom:
                return x
        return None


def restrict_down(lattice: FiniteLattice, fn: FanFunction, y: int) -> FanFunction:
    return lambda chain: lattice.meet(fn(chain), y)


def restrict_up(lattice: FiniteLattice, fn: FanFunction, y: int, lo: int) -> FanFunction:
    return lambda chain: lattice.join(fn((lo,) + chain), y)


def _orthogonal_in(lattice: FiniteLattice, x: int, y: int, lo: int, hi: int) -> bool:
    """y complements x inside [lo, hi]; hi itself only counts when x = lo."""
    if y == hi:
        return x == lo
    return lattice.meet(x, y) == lo and lattice.join(x, y) == hi


# ------------------------------------------------------------- fan families


def _word_classes(chain: Chain, lattice: FiniteLattice, colouring: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(word, class) for each class of the top partition, words attached recursively."""
    parts: list[Partition] = [lattice.values[i] for i in chain]
    words = {b: tuple(sorted(colouring[x] for x in b)) for b in parts[0].blocks}
    for p in parts[1:]:
        new = {}
        for b in p.blocks:
            members = set(b)
            inner = sorted(w for c, w in words.items() if c[0] in members)
            new[b] = tuple(letter for w in inner for letter in w)
        words = new
    return [(w, b) for b, w in words.items()]


def _merge(lattice: FiniteLattice, top: Partition, merged: list[tuple[int, ...]]) -> int:
    if len(merged) <= 1:
        return lattice.index[top]
    keep = [list(b) for b in top.blocks if b not in merged]
    glued = sorted(x for b in merged for x in b)
    return lattice.index[Partition.from_blocks(top.n, keep + [glued])]


def young_fan_functions(lattice: FiniteLattice, colouring: Sequence[int]) -> tuple[FanFunction, FanFunction]:
    def split(chain: Chain) -> tuple[Partition, list, list]:
        classes = _word_classes(chain, lattice, colouring)
        low = min(w for w, _ in classes)
        a = [b for w, b in classes if w == low]
        rest = [b for w, b in classes if w != low]
        return lattice.values[chain[-1]], a, rest

    def first(chain: Chain) -> int:
        top, _, rest = split(chain)
        return _merge(lattice, top, rest)

    def second(chain: Chain) -> int:
        top, a, _ = split(chain)
        return _merge(lattice, top, a)

    return memoized(first), memoized(second)


def young_fan(composition: Sequence[int]) -> Fan:
    """The word-attachment fan (F_1, F_2) on P_n for the Young subgroup of the composition."""
    comp = [int(c) for c in composition]
    if any(c < 1 for c in comp):
        raise ArgumentError(f"composition parts must be positive: {composition}")
    n = sum(comp)
    lattice = partition_lattice(n)
    group = young_group(comp)
    f1, f2 = young_fan_functions(lattice, [c + 1 for c in young_coloring(comp)])
    return Fan(lattice, [f1, f2], generator_tables(lattice, group), group.order, group.label)


def point_fan(lattice: FiniteLattice, x: int, generators: Sequence[Table] = (), group_order: int = 1) -> Fan:
    """F([0̂]) = x and F(σ) = 1̂ for every other chain."""
    for t in generators:
        if t[x] != x:
            raise ArgumentError(f"element {lattice.values[x]} is not fixed by the group")
    bottom, top = lattice.bottom, lattice.top
    fn = lambda chain: x if chain == (bottom,) else top
    return Fan(lattice, [fn], list(generators), group_order, f"point({lattice.values[x]})")


def symmetry_breaking_fan(a_size: int, b_sizes: Sequence[int]) -> Fan:
    """(F_1', F_2') on P_n for S = A ⊔ B_1 ⊔ … ⊔ B_k with A the first points."""
    sizes = [int(a_size)] + [int(b) for b in b_sizes]
    if any(s < 1 for s in sizes):
        raise ArgumentError("all parts must be nonempty")
    n = sum(sizes)
    lattice = partition_lattice(n)
    b_points = list(range(a_size, n))
    x = lattice.index[Partition.from_blocks(n, [[i] for i in range(a_size)] + [b_points])]
    bottom, top = lattice.bottom, lattice.top
    first = lambda chain: x if chain == (bottom,) else top
    _, second = young_fan_functions(lattice, [c + 1 for c in young_coloring(sizes)])
    group = young_group(sizes)
    return Fan(lattice, [first, second], generator_tables(lattice, group), group.order,
               f"symmetry-breaking({a_size};{','.join(map(str, b_sizes))})")


def parabolic_fan(lattice: FiniteLattice, flag: Sequence[int], generators: Sequence[Table] = (),
                  group_order: int = 1) -> Fan:
    """F([B_0 < … < B_i]) = A_{r−i} ∨ B_i (and 1̂ once the flag is used up)."""
    flag = list(flag)
    if not flag or any(not lattice.lt(a, b) for a, b in zip(flag, flag[1:])):
        raise ArgumentError("flag must be a nonempty strictly increasing chain")
    if any(a in (lattice.bottom, lattice.top) for a in flag):
        raise ArgumentError("flag members must be proper")
    r = len(flag) - 1
    top = lattice.top

    def fn(chain: Chain) -> int:
        i = len(chain) - 1
        if i > r:
            return top
        return lattice.join(flag[r - i], chain[-1])

    return Fan(lattice, [memoized(fn)], list(generators), group_order, "parabolic")


# ------------------------------------------------------------- invisibility


@dataclass
class Certificate:
    """Witness tree: the complement chosen on each interval."""

    lo: int
    hi: int
    value: int
    witness: int | None = None
    left: "Certificate | None" = None
    right: "Certificate | None" = None

    def to_json(self, lattice: FiniteLattice) -> dict:
        out = {"interval": [str(lattice.values[self.lo]), str(lattice.values[self.hi])],
               "F1": str(lattice.values[self.value])}
        if self.witness is not None:
            out["witness"] = str(lattice.values[self.witness])
        if self.left:
            out["left"] = self.left.to_json(lattice)
        if self.right:
            out["right"] = self.right.to_json(lattice)
        return out


def _invisible(lattice: FiniteLattice, chain: Chain, fns: list[FanFunction], lo: int, hi: int
               ) -> tuple[bool, Certificate | None]:
    if not fns:
        return True, None
    x = fns[0]((lo,))
    node = Certificate(lo, hi, x)
    if x == hi:
        return True, node
    for pos, y in enumerate(chain + (hi,)):
        if not _orthogonal_in(lattice, x, y, lo, hi):
            continue
        ok_left, left = _invisible(lattice, chain[:pos], [restrict_down(lattice, f, y) for f in fns[1:]], lo, y)
        if not ok_left:
            continue
        ok_right, right = _invisible(lattice, chain[pos + 1:], [restrict_up(lattice, f, y, lo) for f in fns], y, hi)
        if ok_right:
            node.witness, node.left, node.right = y, left, right
            return True, node
    return False, None


def is_invisible(chain: Sequence[int], fan: Fan) -> tuple[bool, Certificate | None]:
    """Invisibility of a chain of proper elements, with the witness tree when invisible."""
    lat = fan.lattice
    c = tuple(chain)
    if not lat.is_chain(c) or any(v in (lat.bottom, lat.top) for v in c):
        raise ArgumentError("expected a chain of proper elements")
    return _invisible(lat, c, list(fan.functions), lat.bottom, lat.top)


def _orthogonal(lattice: FiniteLattice, fns: list[FanFunction], lo: int, hi: int) -> list[Chain]:
    if not fns:
        return [()]
    x = fns[0]((lo,))
    if x == hi:
        return [()]
    out: list[Chain] = []
    candidates = [y for y in _bits(lattice.up[lo] & lattice.down[hi])
                  if y != lo and _orthogonal_in(lattice, x, y, lo, hi)]
    for y in candidates:
        lefts = _orthogonal(lattice, [restrict_down(lattice, f, y) for f in fns[1:]], lo, y)
        if not lefts:
            continue
        rights = _orthogonal(lattice, [restrict_up(lattice, f, y, lo) for f in fns], y, hi)
        middle = (y,) if y != hi else ()
        out.extend(left + middle + right for left in lefts for right in rights)
    return out


@dataclass
class OrthogonalChain:
    chain: Chain
    intervals: list[tuple[int, int]]
    orbit: int = -1
    orbit_size: int = 1
    stabilizer_order: int = 1


def _chain_orbits(chains: list[Chain], generators: Sequence[Table], group_order: int
                  ) -> list[tuple[Chain, list[Chain]]]:
    chain_set = set(chains)
    seen: set[Chain] = set()
    out = []
    for c in sorted(chains):
        if c in seen:
            continue
        orbit = {c}
        frontier = [c]
        while frontier:
            cur = frontier.pop()
            for t in generators:
                img = tuple(t[v] for v in cur)
                if img not in chain_set:
                    raise InvariantViolation(f"orthogonal chains are not closed under the group: {cur} -> {img}")
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        seen |= orbit
        members = sorted(orbit)
        if group_order % len(members):
            raise InvariantViolation("orbit size does not divide the group order")
        out.append((members[0], members))
    return out


def orthogonal_chains(fan: Fan, check_hypothesis: bool = False) -> list[OrthogonalChain]:
    """All fan-orthogonal chains, sorted, with intervals and orbit data."""
    lat = fan.lattice
    if check_hypothesis and fan.first_value() in (lat.bottom, lat.top):
        raise ArgumentError("F_1([0̂]) must differ from 0̂ and 1̂")
    chains = sorted(_orthogonal(lat, list(fan.functions), lat.bottom, lat.top))
    if len(set(chains)) != len(chains):
        raise InvariantViolation("an orthogonal chain was produced twice")
    result = {c: OrthogonalChain(c, list(zip((lat.bottom,) + c, c + (lat.top,)))) for c in chains}
    for k, (rep, members) in enumerate(_chain_orbits(chains, fan.generators, fan.group_order)):
        for m in members:
            oc = result[m]
            oc.orbit, oc.orbit_size = k, len(members)
            oc.stabilizer_order = fan.group_order // len(members)
    return [result[c] for c in chains]


def all_chains(lattice: FiniteLattice, members: Iterable[int] | None = None,
               bound: int = CHAIN_ENUMERATION_BOUND) -> list[Chain]:
    """Every nonempty chain of the given elements (default: the proper part)."""
    verts = sorted(lattice.proper() if members is None else members)
    mask = sum(1 << v for v in verts)
    out: list[Chain] = []
    stack = [(v,) for v in reversed(verts)]
    while stack:
        c = stack.pop()
        out.append(c)
        if len(out) > bound:
            raise ResourceError(f"more than {bound} chains")
        for w in reversed(list(_bits(lattice.up[c[-1]] & mask & ~(1 << c[-1])))):
            stack.append(c + (w,))
    return out


def brute_force_orthogonal(fan: Fan) -> list[Chain]:
    """Minimally invisible chains by exhaustive search (oracle)."""
    lat = fan.lattice
    invisible = {c for c in [()] + all_chains(lat) if is_invisible(c, fan)[0]}
    out = []
    for c in invisible:
        if all(c[:i] + c[i + 1:] not in invisible for i in range(len(c))):
            out.append(c)
    return sorted(out)


# ----------------------------------------------------------------- matching


@dataclass
class TreeNode:
    value: int
    alpha: int
    omega: int
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    def leaves(self) -> list["TreeNode"]:
        if self.left is None and self.right is None:
            return [self]
        out = []
        if self.left is not None:
            out += self.left.leaves()
        if self.right is not None:
            out += self.right.leaves()
        return out

    def shape(self, ext: Sequence[int]) -> tuple:
        return (self.value, ext[self.alpha], ext[self.omega],
                self.left.shape(ext) if self.left else None,
                self.right.shape(ext) if self.right else None)


def orthogonality_tree(chain: Chain, fan: Fan) -> tuple[TreeNode | None, list[int]]:
    """The tree of a chain; positions refer to ext = [0̂] + chain + [1̂]."""
    lat = fan.lattice
    ext = [lat.bottom, *chain, lat.top]

    def build(fns: list[FanFunction], a: int, w: int) -> TreeNode | None:
        if not fns:
            return None
        lo, hi = ext[a], ext[w]
        x = fns[0]((lo,))
        node = TreeNode(x, a, w)
        if x == hi:
            return node
        for p in range(a + 1, w + 1):
            if _orthogonal_in(lat, x, ext[p], lo, hi):
                y = ext[p]
                node.left = build([restrict_down(lat, f, y) for f in fns[1:]], a, p)
                node.right = build([restrict_up(lat, f, y, lo) for f in fns], p, w)
                break
        return node

    return build(list(fan.functions), 0, len(ext) - 1), ext


def match_chain(chain: Chain, fan: Fan) -> Chain | None:
    """Partner of a visible chain under the structure-triple rule (None if invisible)."""
    lat = fan.lattice
    root, ext = orthogonality_tree(chain, fan)
    if root is None:
        return None
    target = None
    for leaf in root.leaves():
        if leaf.value != ext[leaf.omega]:
            target = leaf
            break
    if target is None:
        return None
    z, alpha, omega = target.value, target.alpha, target.omega
    if not (lat.lt(ext[alpha], z) and lat.lt(z, ext[omega])):
        raise InvariantViolation(f"leaf value not strictly inside its interval for chain {chain}")
    i = max(p for p in range(alpha, omega) if lat.meet(ext[p], z) == ext[alpha])
    hull = lat.join(ext[i], z)
    j = max(p for p in range(i, omega) if lat.leq(ext[p], hull))
    m = lat.meet(hull, ext[j + 1])
    # ext position p is chain position p - 1
    if lat.lt(ext[j], m):
        return chain[:j] + (m,) + chain[j:]
    return chain[:j - 1] + chain[j:]


@dataclass
class MatchingReport:
    visible: list[Chain]
    pairs: dict[Chain, Chain]
    fixed: Chain | None
    perfect: bool
    fixed_ok: bool
    equivariant: bool
    acyclic: bool
    witness: str = ""

    @property
    def ok(self) -> bool:
        return self.perfect and self.fixed_ok and self.equivariant and self.acyclic

    def to_json(self, lattice: FiniteLattice) -> dict:
        fmt = lambda c: [str(lattice.values[v]) for v in c]
        upper = sorted((a, b) for a, b in self.pairs.items() if len(a) < len(b))
        return {
            "visible_count": len(self.visible),
            "matching": {"pairs": [[fmt(a), fmt(b)] for a, b in upper],
                         "fixed": fmt(self.fixed) if self.fixed is not None else None},
            "checks": {"perfect": self.perfect, "fixed": self.fixed_ok, "equivariant": self.equivariant,
                       "acyclic": self.acyclic},
            "witness": self.witness,
        }


def build_matching(fan: Fan, raise_on_failure: bool = True) -> MatchingReport:
    """Match all visible chains; verify perfection, fixed point, equivariance, acyclicity."""
    lat = fan.lattice
    x = fan.collapse_point()
    if x is None or x == lat.top:
        raise ArgumentError("the fan has no proper collapse point")
    chains = all_chains(lat)
    visible = [c for c in chains if not is_invisible(c, fan)[0]]
    visible_set = set(visible)
    partner: dict[Chain, Chain] = {}
    fixed: Chain | None = None
    perfect, witness = True, ""
    for c in visible:
        m = match_chain(c, fan)
        if m is None:
            perfect, witness = False, witness or f"visible chain {c} has no unmatched leaf"
            continue
        if m == ():
            if fixed is not None:
                perfect, witness = False, witness or f"two chains match the empty chain: {fixed}, {c}"
            fixed = c
            continue
        partner[c] = m
    for c, m in partner.items():
        if m not in visible_set:
            perfect, witness = False, witness or f"partner {m} of {c} is invisible"
        elif partner.get(m) != c:
            perfect, witness = False, witness or f"matching is not an involution at {c}"
        elif abs(len(m) - len(c)) != 1 or not (set(m) <= set(c) or set(c) <= set(m)):
            perfect, witness = False, witness or f"{c} and {m} do not differ by one element"
    fixed_ok = fixed == (x,)
    if not fixed_ok:
        witness = witness or f"fixed simplex {fixed} differs from [F1(0)] = {(x,)}"
    equivariant = True
    for t in fan.generators:
        for c, m in partner.items():
            if partner.get(tuple(t[v] for v in c)) != tuple(t[v] for v in m):
                equivariant, witness = False, witness or f"matching not equivariant at {c}"
                break
        if not equivariant:
            break
    acyclic = True
    if perfect:
        graph: dict[Chain, set[Chain]] = {c: set() for c in visible}
        for c in visible:
            for i in range(len(c)):
                face = c[:i] + c[i + 1:]
                if face not in visible_set:
                    continue
                if partner.get(face) == c:
                    graph[c].add(face)      # matched edge points up: face before coface
                else:
                    graph[face].add(c)
        try:
            tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            acyclic, witness = False, witness or f"alternating cycle through {exc.args[1][:4]}"
    report = MatchingReport(visible, partner, fixed, perfect, fixed_ok, equivariant, acyclic, witness)
    if raise_on_failure and not report.ok:
        raise InvariantViolation(f"matching check failed: {witness}")
    return report


# ----------------------------------------------------- orthogonality check


def verify_orthogonality_function(fn: FanFunction, lattice: FiniteLattice,
                                  chains: Iterable[Chain] | None = None) -> tuple[bool, tuple | None]:
    """Check that {y_m < t < z : t ∧ F(σ) = y_m, (t ∨ F(σ)) ∧ z = z} is an antichain."""
    if chains is None:
        chains = all_chains(lattice, range(len(lattice)))
    for sigma in chains:
        ym = sigma[-1]
        f = fn(tuple(sigma))
        if not lattice.leq(ym, f):
            return False, (sigma, None, "not increasing")
        for z in lattice.strictly_above(ym):
            ts = [t for t in lattice.between(ym, z)
                  if lattice.meet(t, f) == ym and lattice.meet(lattice.join(t, f), z) == z]
            for a in ts:
                for b in ts:
                    if a != b and lattice.lt(a, b):
                        return False, (sigma, z, (a, b))
    return True, None


def check_fan_equivariance(fan: Fan, chains: Iterable[Chain]) -> tuple[bool, tuple | None]:
    for fn in fan.functions:
        for c in chains:
            v = fn(c)
            for t in fan.generators:
                if fn(tuple(t[x] for x in c)) != t[v]:
                    return False, (c, t)
    return True, None


# ---------------------------------------------------- wedge decomposition


def partition_interval_type(lattice: FiniteLattice, a: int, b: int) -> tuple[int, ...]:
    """Block counts of a inside each block of b: [a, b] ≅ ∏ P_k."""
    pa, pb = lattice.values[a], lattice.values[b]
    counts = []
    for blk in pb.blocks:
        members = set(blk)
        counts.append(sum(1 for c in pa.blocks if c[0] in members))
    return tuple(sorted(counts))


class IntervalHomology:
    """Reduced Betti numbers of open intervals, memoized by isomorphism key."""

    def __init__(self, lattice: FiniteLattice, field: FieldDescriptor = QQ,
                 key: Callable[[int, int], object] | None = None):
        self.lattice = lattice
        self.field = field
        self.key = key
        self.memo: dict[object, dict[int, int]] = {}

    def __call__(self, a: int, b: int) -> dict[int, int]:
        k = self.key(a, b) if self.key else (a, b)
        hit = self.memo.get(k)
        if hit is None:
            members = self.lattice.between(a, b)
            if not members:
                hit = {-1: 1}
            else:
                model = subposet_nerve_model(self.lattice, members)
                hit = betti_numbers(orbit_chain_complex(model, self.field)).betti
            self.memo[k] = hit
        return hit


def _shift(table: dict[int, int], by: int) -> BettiTable:
    return BettiTable(QQ, {d + by: r for d, r in table.items()})


def wedge_summand(chain: Chain, lattice: FiniteLattice, homology: IntervalHomology) -> dict[int, int]:
    """H̃ of |(0̂,y_0)|^◇ ∧ Σ|(y_0,y_1)|^◇ ∧ … ∧ |(y_r,1̂)|^◇."""
    if not chain:
        return dict(homology(lattice.bottom, lattice.top))
    ext = (lattice.bottom,) + tuple(chain) + (lattice.top,)
    factors = []
    for k, (a, b) in enumerate(zip(ext, ext[1:])):
        inner = k not in (0, len(ext) - 2)
        factors.append(_shift(homology(a, b), 2 if inner else 1))
    return kunneth(factors)


def wedge_prediction(fan: Fan, field: FieldDescriptor = QQ) -> dict[int, int]:
    """Reduced Betti numbers of the proper part predicted by the orthogonal chains."""
    lat = fan.lattice
    key = None
    if lat.values and isinstance(lat.values[0], Partition):
        key = lambda a, b: partition_interval_type(lat, a, b)
    homology = IntervalHomology(lat, field, key)
    total: dict[int, int] = {}
    for oc in orthogonal_chains(fan):
        for d, r in wedge_summand(oc.chain, lat, homology).items():
            total[d] = total.get(d, 0) + r
    return {d: r for d, r in sorted(total.items()) if r}


def symmetry_breaking_count(a_size: int, b_size: int) -> int:
    """Number of (A = A_1 ⊔ … ⊔ A_r, f_i: A_i ↪ B) with nested images."""
    def perm(n: int, k: int) -> int:
        return math.perm(n, k) if 0 <= k <= n else 0

    memo: dict[tuple[int, int], int] = {}

    def count(remaining: int, room: int) -> int:
        # ordered splittings of `remaining` labelled points with injections into a set of size `room`
        if remaining == 0:
            return 1
        key = (remaining, room)
        if key not in memo:
            memo[key] = sum(math.comb(remaining, k) * perm(room, k) * count(remaining - k, k)
                            for k in range(1, remaining + 1))
        return memo[key]

    return count(a_size, b_size)
