import json

import pytest

import oracles
from partition_collapse.homology import QQ, FieldDescriptor, betti_numbers
from partition_collapse.poset_core import GroupAction, partition_lattice, subspace_lattice, young_group
from partition_collapse.simplicial import (
    atom_model,
    cached_orbit_chain_complex,
    load_complex,
    nerve_model,
    orbit_chain_complex,
    save_complex,
    sphere_power_model,
    subposet_nerve_model,
    suspension_model,
)

F2, F3 = FieldDescriptor(2), FieldDescriptor(3)

# frozen from oracles.partition_quotient_betti; identical over Q, F2 and F3
YOUNG_QUOTIENTS = {
    (2, 1): {0: 1}, (3, 1): {1: 1}, (2, 2): {1: 1}, (2, 1, 1): {1: 3}, (4, 1): {2: 1},
    (3, 2): {2: 2}, (2, 2, 1): {2: 6}, (3, 3): {3: 3}, (4, 2): {3: 3}, (2, 2, 2): {3: 16},
}

# frozen from oracles.atom_betti, keyed (characteristic, n, ell)
ATOMS = {
    (2, 1, 3): {3: 1}, (2, 2, 1): {}, (2, 2, 2): {5: 1}, (2, 2, 3): {6: 1, 7: 1},
    (2, 2, 4): {7: 1, 8: 1, 9: 1}, (3, 2, 2): {5: 1}, (3, 2, 3): {}, (2, 3, 1): {}, (3, 3, 1): {},
    (0, 2, 1): {}, (0, 2, 2): {5: 1}, (0, 2, 3): {}, (3, 3, 2): {7: 1, 8: 1}, (0, 3, 2): {},
}

# frozen from oracles.symmetric_smash_betti, keyed (characteristic, n, ell)
SYMMETRIC_SMASH = {
    (2, 2, 1): {}, (2, 2, 2): {4: 1}, (2, 2, 3): {5: 1, 6: 1}, (2, 2, 4): {6: 1, 7: 1, 8: 1},
    (2, 3, 1): {}, (2, 3, 2): {6: 1}, (3, 2, 1): {}, (3, 3, 1): {},
}


def _betti(model, fld=QQ, route="auto"):
    return betti_numbers(orbit_chain_complex(model, fld, route)).betti


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_partition_complex_is_a_wedge_of_spheres(n):
    import math
    assert _betti(nerve_model(partition_lattice(n))) == {n - 3: math.factorial(n - 1)}


@pytest.mark.parametrize("comp", sorted(YOUNG_QUOTIENTS))
@pytest.mark.parametrize("fld", [QQ, F2, F3], ids=str)
def test_young_quotients_match_frozen_oracle(comp, fld):
    model = nerve_model(partition_lattice(sum(comp)), group=young_group(comp))
    assert _betti(model, fld) == YOUNG_QUOTIENTS[comp]


@pytest.mark.parametrize("comp", [(2, 1), (2, 2), (2, 1, 1), (3, 2)])
def test_young_quotients_match_live_oracle(comp):
    live = oracles.partition_quotient_betti(sum(comp), oracles.young_generators(comp), 2)
    model = nerve_model(partition_lattice(sum(comp)), group=young_group(comp))
    assert _betti(model, F2) == live


def test_cyclic_quotient_matches_live_oracle():
    gens = ["(1 2 3 4)"]
    group = GroupAction.from_cycle_strings(4, gens)
    live = oracles.partition_quotient_betti(4, [oracles.cycles_to_perm(4, [[0, 1, 2, 3]])], 0)
    assert _betti(nerve_model(partition_lattice(4), group=group)) == live


@pytest.mark.parametrize("key", sorted(ATOMS))
def test_atoms_match_frozen_oracle(key):
    p, n, ell = key
    assert _betti(atom_model(n, ell), FieldDescriptor(p)) == ATOMS[key]


def test_atom_matches_live_oracle():
    assert _betti(atom_model(2, 3), F2) == oracles.atom_betti(2, 3, 2)


@pytest.mark.parametrize("key", sorted(SYMMETRIC_SMASH))
def test_symmetric_smash_powers_match_frozen_oracle(key):
    p, n, ell = key
    model = sphere_power_model(n, ell, GroupAction.symmetric(n))
    assert _betti(model, FieldDescriptor(p)) == SYMMETRIC_SMASH[key]


@pytest.mark.parametrize("n,ell", [(1, 2), (2, 1), (2, 2), (3, 1)])
def test_sphere_power_without_group_is_a_sphere(n, ell):
    assert _betti(sphere_power_model(n, ell)) == {n * ell: 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_suspension_model(n):
    import math
    # Σ|Π_n|^◇ has the homology of |Π_n| shifted up by two; n = 1 is S^0
    expected = {0: 1} if n == 1 else {n - 1: math.factorial(n - 1)}
    assert _betti(suspension_model(n)) == expected


@pytest.mark.parametrize("n,ell,p", [(2, 3, 2), (3, 1, 3), (2, 2, 0), (3, 2, 3)])
def test_tensor_and_direct_routes_agree(n, ell, p):
    model = atom_model(n, ell)
    fld = FieldDescriptor(p)
    assert _betti(model, fld, "direct") == _betti(model, fld, "tensor")


@pytest.mark.parametrize("q,n,expected", [(2, 2, {0: 2}), (2, 3, {1: 8}), (3, 2, {0: 3})])
def test_subspace_posets_match_oracle(q, n, expected):
    assert oracles.subspace_poset_betti(q, n) == expected
    assert _betti(nerve_model(subspace_lattice(q, n))) == expected


def test_subposet_fingerprints_distinguish_members():
    lat = partition_lattice(4)
    proper = lat.proper()
    a = subposet_nerve_model(lat, proper[:5])
    b = subposet_nerve_model(lat, proper[5:10])
    assert a.fingerprint() != b.fingerprint()


def test_cache_round_trip_and_tamper(tmp_path):
    model = nerve_model(partition_lattice(4), group=young_group((2, 2)))
    cx = cached_orbit_chain_complex(model, F2, directory=tmp_path)
    assert cx.meta.get("cache") != "hit"
    again = cached_orbit_chain_complex(model, F2, directory=tmp_path)
    assert again.meta.get("cache") == "hit"
    assert betti_numbers(again).betti == betti_numbers(cx).betti

    path = next(tmp_path.glob("*.json"))
    payload = json.loads(path.read_text())
    payload["boundary"]["1"][0][2] += 5
    path.write_text(json.dumps(payload))
    assert load_complex(tmp_path, again.fingerprint, F2) is None
    fresh = cached_orbit_chain_complex(model, F2, directory=tmp_path)
    assert fresh.meta.get("cache") != "hit"
    assert betti_numbers(fresh).betti == {1: 1}


def test_cache_rejects_other_field(tmp_path):
    model = nerve_model(partition_lattice(4))
    cx = orbit_chain_complex(model, QQ)
    save_complex(cx, tmp_path)
    assert load_complex(tmp_path, cx.fingerprint, F2) is None
    assert load_complex(tmp_path, cx.fingerprint, QQ) is not None
