"""Collapsed nerve models and the chain complexes of their strict quotients.

A model is a finite poset on vertex indices ``0..N-1`` together with a
"step" relation ``succ`` (which comparable pairs may be adjacent in a
non-collapsed chain) and optional required endpoints.  A strict chain is
non-collapsed exactly when consecutive vertices are steps and, if
endpoints are set, it runs from ``start`` to ``end``.  This covers

* nerves of posets (every comparable pair is a step, no endpoints),
* the suspension model of Π_n (chains in P_n from 0̂ to 1̂),
* smash powers of simplicial spheres Δ^ℓ/∂Δ^ℓ (chains in [ℓ]^n from the
  bottom vector to the top vector in which every coordinate grows by at
  most one per step, i.e. every coordinate is surjective onto [ℓ]),
* products of the above.

The quotient by a finite group acting on vertices is handled through
orbit representatives: the representative of a chain is its
lexicographically least image, found greedily through stabilizer chains.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

from .homology import ChainComplex, FieldDescriptor, QQ
from .poset_core import (
    ArgumentError,
    FiniteLattice,
    GroupAction,
    InvariantViolation,
    Permutation,
    ResourceError,
    _bits,
    partition_lattice,
)

CODE_VERSION = "pc-simplicial-3"
CHAIN_COUNT_BOUND = 3_000_000

Table = tuple[int, ...]


# ------------------------------------------------------------------ models


@dataclass
class CollapsedNerveModel:
    name: str
    size: int
    succ: list[int]
    tables: list[Table]
    start: int | None = None
    end: int | None = None
    augmented: bool = False
    degree_cap: int | None = None
    params: dict = field(default_factory=dict)
    labeller: Callable[[int], str] | None = None
    factors: tuple["CollapsedNerveModel", ...] = ()

    def __post_init__(self) -> None:
        if not self.tables:
            self.tables = [tuple(range(self.size))]
        if (self.start is None) != (self.end is None):
            raise ArgumentError("start and end must be given together")
        for t in self.tables:
            if self.start is not None and (t[self.start] != self.start or t[self.end] != self.end):
                raise ArgumentError("group action moves a required endpoint")
        if self.degree_cap is None:
            self.degree_cap = self.height()

    @property
    def group_order(self) -> int:
        return len(self.tables)

    @property
    def pointed(self) -> bool:
        return self.start is not None

    def is_step(self, a: int, b: int) -> bool:
        return bool(self.succ[a] >> b & 1)

    def is_collapsed(self, chain: Sequence[int]) -> bool:
        """True when the chain lies in the collapsed subcomplex (the basepoint)."""
        if not chain:
            return self.pointed
        if any(not self.is_step(a, b) for a, b in zip(chain, chain[1:])):
            return True
        if self.pointed:
            return chain[0] != self.start or chain[-1] != self.end
        return False

    def height(self) -> int:
        """Largest degree of a non-collapsed chain."""
        longest = [0] * self.size
        for v in reversed(self._topological()):
            best = 0
            for w in _bits(self.succ[v]):
                if self.pointed and not self._reaches_end(w):
                    continue
                best = max(best, longest[w] + 1)
            longest[v] = best
        if self.pointed:
            return longest[self.start]
        return max(longest, default=-1)

    def _topological(self) -> list[int]:
        # succ only points to later vertices in every model built here
        order = list(range(self.size))
        for v in order:
            if self.succ[v] & ((1 << (v + 1)) - 1):
                raise ArgumentError(f"{self.name}: vertices are not listed in a linear extension")
        return order

    def _reaches_end(self, v: int) -> bool:
        if not hasattr(self, "_reach"):
            reach = [False] * self.size
            if self.pointed:
                reach[self.end] = True
                for u in reversed(range(self.size)):
                    if not reach[u]:
                        reach[u] = any(reach[w] for w in _bits(self.succ[u]))
            self._reach = reach
        return self._reach[v]

    def count_chains(self) -> int:
        """Exact number of non-collapsed chains (before taking orbits)."""
        paths = [0] * self.size
        for v in reversed(range(self.size)):
            here = 1 if (not self.pointed or v == self.end) else 0
            paths[v] = here + sum(paths[w] for w in _bits(self.succ[v]))
        if self.pointed:
            return paths[self.start]
        return sum(paths) + (1 if self.augmented else 0)

    def label(self, chain: Sequence[int]) -> str:
        fmt = self.labeller or str
        return "[" + " < ".join(fmt(v) for v in chain) + "]"

    def fingerprint(self) -> str:
        payload = json.dumps({"version": CODE_VERSION, "name": self.name, "params": self.params,
                              "cap": self.degree_cap}, sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:24]


def _tables_for(group: GroupAction | None, apply: Callable[[Permutation], Table], size: int) -> list[Table]:
    if group is None or not group.generators:
        return [tuple(range(size))]
    return [apply(g) for g in group.elements]


def _group_params(group: GroupAction | None) -> dict:
    if group is None:
        return {"group": "trivial"}
    return {"group": group.label, "generators": [str(g) for g in group.generators], "degree": group.degree}


def subposet_nerve_model(lattice: FiniteLattice, members: Sequence[int], tables: Sequence[Table] | None = None,
                         name: str = "", params: dict | None = None) -> CollapsedNerveModel:
    """Nerve of the induced subposet on ``members`` (augmented: reduced homology).

    ``tables`` are permutations of lattice indices preserving ``members``.
    """
    members = sorted(members)
    pos = {m: k for k, m in enumerate(members)}
    mask = sum(1 << m for m in members)
    succ = []
    for m in members:
        above = lattice.up[m] & mask & ~(1 << m)
        succ.append(sum(1 << pos[j] for j in _bits(above)))
    vt: list[Table] = []
    for t in tables or []:
        try:
            vt.append(tuple(pos[t[m]] for m in members))
        except KeyError as exc:
            raise ArgumentError("group action does not preserve the vertex set") from exc
    values = lattice.values
    return CollapsedNerveModel(
        name or f"nerve({lattice.name})", len(members), succ, vt, augmented=True,
        params=dict(params or {}, lattice=lattice.name, members=len(members),
                    member_digest=hashlib.sha256(repr(members).encode()).hexdigest()[:16]),
        labeller=lambda v: str(values[members[v]]))


def nerve_model(lattice: FiniteLattice, keep: str = "open", group: GroupAction | None = None,
                tables: Sequence[Table] | None = None) -> CollapsedNerveModel:
    """Nerve of the lattice with endpoints dropped ("open") or kept ("closed").

    The group is either a permutation group acting on partitions (for
    partition lattices) or explicit ``tables`` of lattice index permutations.
    """
    if keep not in ("open", "closed"):
        raise ArgumentError(f"keep must be open or closed, not {keep!r}")
    members = lattice.proper() if keep == "open" else list(range(len(lattice)))
    if tables is None:
        tables = _tables_for(group, lambda g: lattice.element_table(lambda p: p.act(g)), len(lattice))
    params = {"keep": keep, **_group_params(group)}
    if group is None and tables and len(tables) > 1:
        params["tables"] = hashlib.sha256(repr(sorted(tables)).encode()).hexdigest()[:16]
    return subposet_nerve_model(lattice, members, tables, f"nerve({lattice.name},{keep})", params)


def suspension_model(n: int, group: GroupAction | None = None) -> CollapsedNerveModel:
    """Σ|Π_n|^◇: chains of P_n from 0̂ to 1̂ (for n = 1 a single vertex, S^0)."""
    if n < 1:
        raise ArgumentError("n must be positive")
    lat = partition_lattice(n)
    size = len(lat)
    succ = [lat.up[i] & ~(1 << i) for i in range(size)]
    tables = _tables_for(group, lambda g: lat.element_table(lambda p: p.act(g)), size)
    return CollapsedNerveModel(f"susp(P{n})", size, succ, tables, start=lat.bottom, end=lat.top,
                               params={"n": n, **_group_params(group)}, labeller=lambda v: str(lat.values[v]))


def _vector(code: int, base: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        code, d = divmod(code, base)
        out.append(d)
    return out


def _code(vec: Sequence[int], base: int) -> int:
    c = 0
    for d in reversed(vec):
        c = c * base + d
    return c


def _cube_order(n: int, ell: int) -> list[tuple[int, ...]]:
    vecs = [tuple(_vector(c, ell + 1, n)) for c in range((ell + 1) ** n)]
    vecs.sort(key=lambda v: (sum(v), v))
    return vecs


def sphere_power_model(n: int, ell: int, group: GroupAction | None = None) -> CollapsedNerveModel:
    """(S^ℓ)^{∧n} with S^ℓ = Δ^ℓ/∂Δ^ℓ: chains in [ℓ]^n from bottom to top."""
    if n < 1 or ell < 1:
        raise ArgumentError("need n >= 1 and ell >= 1")
    vecs = _cube_order(n, ell)
    index = {v: i for i, v in enumerate(vecs)}
    succ = []
    for v in vecs:
        s = 0
        for mask in range(1, 1 << n):
            w = tuple(x + (mask >> i & 1) for i, x in enumerate(v))
            if max(w) <= ell:
                s |= 1 << index[w]
        succ.append(s)

    def act(g: Permutation) -> Table:
        out = []
        for v in vecs:
            w = [0] * n
            for i, x in enumerate(v):
                w[g(i)] = x
            out.append(index[tuple(w)])
        return tuple(out)

    tables = _tables_for(group, act, len(vecs))
    return CollapsedNerveModel(f"spheres({n},{ell})", len(vecs), succ, tables, start=0, end=len(vecs) - 1,
                               params={"n": n, "ell": ell, **_group_params(group)},
                               labeller=lambda v: "".join(str(x) for x in vecs[v]))


def product_model(first: CollapsedNerveModel, second: CollapsedNerveModel, name: str = "",
                  params: dict | None = None) -> CollapsedNerveModel:
    """Smash product of two pointed models as chains in the product poset.

    A pair of vertices steps to another when each coordinate either stays
    put or takes a step.  Both models must carry tables of the same group
    listed in the same order; the product gets the diagonal action.
    """
    if not (first.pointed and second.pointed):
        raise ArgumentError("product_model needs pointed factors")
    if len(first.tables) != len(second.tables):
        raise ArgumentError("factors carry different groups")
    n1, n2 = first.size, second.size
    order = sorted(((a, b) for a in range(n1) for b in range(n2)), key=lambda ab: (ab[0] + ab[1], ab))
    # any linear extension works; sort by position sum of both linear extensions
    index = {ab: i for i, ab in enumerate(order)}
    stay1 = [first.succ[a] | (1 << a) for a in range(n1)]
    stay2 = [second.succ[b] | (1 << b) for b in range(n2)]
    succ = []
    for a, b in order:
        s = 0
        for a2 in _bits(stay1[a]):
            for b2 in _bits(stay2[b]):
                if (a2, b2) != (a, b):
                    s |= 1 << index[(a2, b2)]
        succ.append(s)
    tables = [tuple(index[(t1[a], t2[b])] for a, b in order) for t1, t2 in zip(first.tables, second.tables)]
    f1 = first.labeller or str
    f2 = second.labeller or str
    model = CollapsedNerveModel(
        name or f"{first.name}^{second.name}", len(order), succ, tables,
        start=index[(first.start, second.start)], end=index[(first.end, second.end)],
        params=params or {"first": first.params, "second": second.params},
        labeller=lambda v: f"({f1(order[v][0])},{f2(order[v][1])})",
        factors=(first, second))
    return model


def atom_model(n: int, ell: int, group: GroupAction | None = None) -> CollapsedNerveModel:
    """Σ|Π_n|^◇ ∧ (S^ℓ)^{∧n} as chains in P_n × [ℓ]^n, with Σ_n acting diagonally.

    For n = 1 this is S^ℓ: the suspension factor is the one-vertex model S^0.
    """
    if n < 1 or ell < 1:
        raise ArgumentError("need n >= 1 and ell >= 1")
    if group is None:
        group = GroupAction.symmetric(n)
    first = suspension_model(n, group)
    second = sphere_power_model(n, ell, group)
    return product_model(first, second, f"atom({n},{ell})", {"n": n, "ell": ell, **_group_params(group)})


# ------------------------------------------------------------ orbit engine


class OrbitEngine:
    """Greedy lexicographically-least representatives of vertex sequences."""

    def __init__(self, tables: Sequence[Table]):
        self.tables = list(tables)
        self.trivial = len(self.tables) == 1
        self._groups: list[tuple[int, ...]] = [tuple(range(len(self.tables)))]
        self._group_ids = {self._groups[0]: 0}
        self._orbit_min: dict[tuple[int, int], tuple[int, int]] = {}
        self._stab: dict[tuple[int, int], int] = {}
        ident = tuple(range(len(self.tables[0])))
        self.identity = self.tables.index(ident) if ident in self.tables else None
        if self.identity is None:
            raise ArgumentError("group tables must contain the identity")

    def orbit_min(self, gid: int, y: int) -> tuple[int, int]:
        key = (gid, y)
        hit = self._orbit_min.get(key)
        if hit is None:
            best, arg = y, self.identity
            for g in self._groups[gid]:
                z = self.tables[g][y]
                if z < best:
                    best, arg = z, g
            hit = (best, arg)
            self._orbit_min[key] = hit
        return hit

    def stabilizer(self, gid: int, y: int) -> int:
        key = (gid, y)
        hit = self._stab.get(key)
        if hit is None:
            members = tuple(g for g in self._groups[gid] if self.tables[g][y] == y)
            hit = self._group_ids.get(members)
            if hit is None:
                hit = len(self._groups)
                self._groups.append(members)
                self._group_ids[members] = hit
            self._stab[key] = hit
        return hit

    def group_size(self, gid: int) -> int:
        return len(self._groups[gid])

    def canonical(self, seq: Sequence[int], gid: int = 0) -> tuple[int, ...]:
        if self.trivial:
            return tuple(seq)
        out = []
        applied: list[int] = []
        tables = self.tables
        ident = self.identity
        for x in seq:
            y = x
            for g in applied:
                y = tables[g][y]
            rep, g = self.orbit_min(gid, y)
            out.append(rep)
            if g != ident:
                applied.append(g)
            gid = self.stabilizer(gid, rep)
        return tuple(out)

    def stabilizer_of(self, seq: Sequence[int], gid: int = 0) -> int:
        for x in seq:
            gid = self.stabilizer(gid, x)
        return gid


def _walk(model: CollapsedNerveModel, engine: OrbitEngine, gid: int, max_len: int,
          offset: int = 0) -> Iterator[tuple[tuple[int, ...], int]]:
    """Orbit representatives of non-collapsed chains, with their stabilizer ids.

    ``offset`` shifts vertex numbers (used when the engine acts on a disjoint
    union of vertex sets).
    """
    succ = model.succ
    trivial = engine.trivial

    def reps(candidates: int, h: int) -> list[int]:
        out = []
        for y in _bits(candidates):
            if trivial or engine.orbit_min(h, y + offset)[0] == y + offset:
                out.append(y)
        return out

    if model.pointed:
        start, end = model.start, model.end
        if start == end:
            yield (start + offset,), (gid if trivial else engine.stabilizer(gid, start + offset))
            return
        reach = [model._reaches_end(v) for v in range(model.size)]
        h0 = gid if trivial else engine.stabilizer(gid, start + offset)
        stack = [((start,), h0)]
        while stack:
            prefix, h = stack.pop()
            last = prefix[-1]
            if model.is_step(last, end) and len(prefix) + 1 <= max_len:
                full = prefix + (end,)
                yield tuple(v + offset for v in full), (h if trivial else engine.stabilizer(h, end + offset))
            if len(prefix) + 2 > max_len:
                continue
            cands = succ[last] & ~(1 << end)
            cands = sum(1 << y for y in _bits(cands) if reach[y])
            for y in reversed(reps(cands, h)):
                stack.append((prefix + (y,), h if trivial else engine.stabilizer(h, y + offset)))
    else:
        stack = [((y,), gid if trivial else engine.stabilizer(gid, y + offset))
                 for y in reversed(reps((1 << model.size) - 1, gid))]
        while stack:
            prefix, h = stack.pop()
            yield tuple(v + offset for v in prefix), h
            if len(prefix) + 1 > max_len:
                continue
            for y in reversed(reps(succ[prefix[-1]], h)):
                stack.append((prefix + (y,), h if trivial else engine.stabilizer(h, y + offset)))


def enumerate_strict_chains(model: CollapsedNerveModel) -> dict[int, list[tuple[int, ...]]]:
    """All non-collapsed strict chains up to the degree cap, by degree (no empty chain)."""
    trivial = OrbitEngine([tuple(range(model.size))])
    if model.count_chains() > CHAIN_COUNT_BOUND:
        raise ResourceError(f"{model.name}: {model.count_chains()} chains exceed the bound {CHAIN_COUNT_BOUND}")
    out: dict[int, list[tuple[int, ...]]] = {}
    for chain, _ in _walk(model, trivial, 0, model.degree_cap + 1):
        out.setdefault(len(chain) - 1, []).append(chain)
    for d in out:
        out[d].sort()
    return dict(sorted(out.items()))


def _face_ok(model: CollapsedNerveModel, chain: Sequence[int], i: int) -> bool:
    """Is the i-th face of a non-collapsed chain still non-collapsed?"""
    k = len(chain)
    if model.pointed:
        if i == 0 or i == k - 1:
            return False
        return model.is_step(chain[i - 1], chain[i + 1])
    if 0 < i < k - 1:
        return model.is_step(chain[i - 1], chain[i + 1])
    return k > 1 or model.augmented


def _check_budget(model: CollapsedNerveModel, bound: int) -> None:
    estimate = model.count_chains() // max(1, model.group_order)
    if estimate > bound:
        raise ResourceError(f"{model.name}: about {estimate} orbits of chains exceed the bound {bound}")


def _finish(basis: dict[int, list], keys: dict[int, dict], rows: dict[int, list], fld: FieldDescriptor,
            fingerprint: str, cap: int, full_height: int, meta: dict) -> ChainComplex:
    cx = ChainComplex(fld, {d: basis[d] for d in sorted(basis)}, {d: rows[d] for d in sorted(rows)},
                      fingerprint, cap - 1 if cap < full_height else None, meta)
    cx.check_square_zero()
    return cx


def orbit_chain_complex(model: CollapsedNerveModel, field: FieldDescriptor = QQ, route: str = "auto",
                        bound: int = CHAIN_COUNT_BOUND) -> ChainComplex:
    """Normalized chains of the strict quotient of the model by its group.

    ``route`` is "direct" (orbits of chains in the model poset) or "tensor"
    (for product models: orbits of pairs of factor chains, an
    Eilenberg–Zilber equivalent complex that is far smaller).  "auto"
    picks tensor for product models.
    """
    if route == "auto":
        route = "tensor" if model.factors else "direct"
    if route == "tensor":
        if not model.factors:
            raise ArgumentError("tensor route needs a product model")
        return _tensor_complex(model, field, bound)
    if route != "direct":
        raise ArgumentError(f"unknown route {route!r}")
    _check_budget(model, bound)
    engine = OrbitEngine(model.tables)
    cap = model.degree_cap
    basis: dict[int, list] = {}
    for chain, _ in _walk(model, engine, 0, cap + 1):
        basis.setdefault(len(chain) - 1, []).append(chain)
    if model.augmented:
        basis[-1] = [()]
    for d in basis:
        basis[d].sort()
    keys = {d: {c: i for i, c in enumerate(b)} for d, b in basis.items()}
    rows: dict[int, list[dict[int, int]]] = {}
    for d, chains in basis.items():
        if d < 0 or (d == 0 and not model.augmented and not model.pointed):
            continue
        lower = keys.get(d - 1, {})
        out = []
        for chain in chains:
            row: dict[int, int] = {}
            for i in range(len(chain)):
                if not _face_ok(model, chain, i):
                    continue
                face = engine.canonical(chain[:i] + chain[i + 1:])
                col = lower[face]
                row[col] = row.get(col, 0) + (-1 if i % 2 else 1)
            out.append({c: v for c, v in row.items() if v})
        rows[d] = out
    meta = {"model": model.name, "route": "direct", "group_order": model.group_order}
    return _finish(basis, keys, rows, field, model.fingerprint() + ":direct", cap, model.height(), meta)


def _tensor_complex(model: CollapsedNerveModel, field: FieldDescriptor, bound: int) -> ChainComplex:
    first, second = model.factors
    if model.degree_cap != model.height():
        raise ArgumentError("tensor route does not support a lowered degree cap")
    offset = first.size
    tables = [t1 + tuple(offset + x for x in t2) for t1, t2 in zip(first.tables, second.tables)]
    engine = OrbitEngine(tables)
    estimate = first.count_chains() * second.count_chains() // max(1, len(tables))
    if estimate > bound:
        raise ResourceError(f"{model.name}: about {estimate} orbits of chain pairs exceed the bound {bound}")
    basis: dict[int, list] = {}
    for a, ha in _walk(first, engine, 0, first.degree_cap + 1):
        for b, _ in _walk(second, engine, ha, second.degree_cap + 1, offset):
            basis.setdefault(len(a) + len(b) - 2, []).append(a + b)
    for d in basis:
        basis[d].sort()
    keys = {d: {c: i for i, c in enumerate(b)} for d, b in basis.items()}
    rows: dict[int, list[dict[int, int]]] = {}
    for d, cells in basis.items():
        lower = keys.get(d - 1, {})
        out = []
        for cell in cells:
            split = sum(1 for v in cell if v < offset)
            a, b = cell[:split], tuple(v - offset for v in cell[split:])
            row: dict[int, int] = {}
            for i in range(len(a)):
                if _face_ok(first, a, i):
                    face = engine.canonical(a[:i] + a[i + 1:] + cell[split:])
                    col = lower[face]
                    row[col] = row.get(col, 0) + (-1 if i % 2 else 1)
            sign_a = -1 if (len(a) - 1) % 2 else 1
            for j in range(len(b)):
                if _face_ok(second, b, j):
                    face = engine.canonical(a + cell[split:split + j] + cell[split + j + 1:])
                    col = lower[face]
                    row[col] = row.get(col, 0) + sign_a * (-1 if j % 2 else 1)
            out.append({c: v for c, v in row.items() if v})
        rows[d] = out
    meta = {"model": model.name, "route": "tensor", "group_order": len(tables)}
    return _finish(basis, keys, rows, field, model.fingerprint() + ":tensor", model.degree_cap,
                   model.height(), meta)


# ------------------------------------------------------------------- cache


def cache_directory(explicit: str | os.PathLike | None = None) -> Path | None:
    path = explicit or os.environ.get("PARTITION_COLLAPSE_CACHE")
    return Path(path) if path else None


def _cache_path(directory: Path, fingerprint: str, fld: FieldDescriptor) -> Path:
    safe = fingerprint.replace(":", "_")
    return directory / f"{safe}_{fld.name}.json"


def _digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def save_complex(cx: ChainComplex, directory: Path) -> Path:
    directory.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": CODE_VERSION,
        "fingerprint": cx.fingerprint,
        "field": cx.field.name,
        "truncated_above": cx.truncated_above,
        "meta": cx.meta,
        "basis": {str(d): [list(c) for c in b] for d, b in cx.basis.items()},
        "boundary": {str(d): [[r, c, v] for r, row in enumerate(rows) for c, v in sorted(row.items())]
                     for d, rows in cx.boundary.items()},
    }
    payload["checksum"] = _digest(payload)
    path = _cache_path(directory, cx.fingerprint, cx.field)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)
    return path


def load_complex(directory: Path, fingerprint: str, fld: FieldDescriptor) -> ChainComplex | None:
    """Cached complex, or None when missing, stale or tampered with."""
    path = _cache_path(directory, fingerprint, fld)
    try:
        payload = json.loads(path.read_text())
        checksum = payload.pop("checksum")
        if checksum != _digest(payload) or payload["version"] != CODE_VERSION:
            return None
        if payload["fingerprint"] != fingerprint or payload["field"] != fld.name:
            return None
        basis = {int(d): [tuple(c) for c in b] for d, b in payload["basis"].items()}
        rows: dict[int, list[dict[int, int]]] = {d: [{} for _ in basis[d]] for d in map(int, payload["boundary"])}
        for d, triples in payload["boundary"].items():
            for r, c, v in triples:
                rows[int(d)][r][c] = v
        cx = ChainComplex(fld, basis, rows, fingerprint, payload["truncated_above"], payload["meta"])
        cx.check_square_zero()
        return cx
    except (OSError, ValueError, KeyError, TypeError, IndexError, InvariantViolation):
        return None


def cached_orbit_chain_complex(model: CollapsedNerveModel, field: FieldDescriptor = QQ, route: str = "auto",
                               directory: Path | None = None) -> ChainComplex:
    if route == "auto":
        route = "tensor" if model.factors else "direct"
    fingerprint = model.fingerprint() + ":" + route
    if directory is not None:
        hit = load_complex(directory, fingerprint, field)
        if hit is not None:
            hit.meta["cache"] = "hit"
            return hit
    cx = orbit_chain_complex(model, field, route)
    if directory is not None:
        save_complex(cx, directory)
    return cx
