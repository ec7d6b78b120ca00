"""Command-line front end: computations, predictions, comparisons and test suites.

Every command prints one JSON report (schema "1") on stdout.  Exit codes:
0 success, 1 a check failed, 2 bad arguments, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import __version__
from .collapse import (
    build_matching,
    brute_force_orthogonal,
    orthogonal_chains,
    parabolic_fan,
    symmetry_breaking_fan,
    wedge_prediction,
    young_fan,
)
from .fixed_points import (
    classify_action,
    decomposition_prediction,
    elementary_abelian_action,
    fixed_point_betti,
    predicted_fixed_point_betti,
)
from .homology import QQ, BettiTable, FieldDescriptor, betti_numbers
from .lyndon import (
    format_word,
    labelled_weak_lyndon_words,
    lyndon_words,
    orthogonal_chain_count_formula,
    witt_count,
)
from .poset_core import (
    ArgumentError,
    GroupAction,
    InvariantViolation,
    ResourceError,
    coordinate_subspace,
    partition_lattice,
    subspace_lattice,
    young_group,
)
from .predictions import (
    allowable_sequences,
    atom_sequences,
    bredon_euler_check,
    computed_atom_betti,
    computed_quotient_betti,
    ehp_rank_identity,
    ehp_terms_predicted,
    fk_dimension,
    predicted_atom_betti,
    predicted_lie_betti,
    predicted_quotient_betti,
    symmetric_smash_dimensions,
    torsion_bound_check,
    wedge_of_spheres_classifier,
)
from .simplicial import CODE_VERSION, cache_directory, cached_orbit_chain_complex, nerve_model, sphere_power_model

SCHEMA = "1"
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class RunReport:
    command: str
    parameters: dict
    payload: dict = field(default_factory=dict)
    checks: dict[str, str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    cache_hits: dict[str, bool] = field(default_factory=dict)
    elapsed_ms: int | None = None

    @property
    def failed(self) -> bool:
        return any(v == FAIL for v in self.checks.values())

    def check(self, name: str, ok: bool | None) -> None:
        self.checks[name] = SKIPPED if ok is None else (PASS if ok else FAIL)

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "command": self.command, "parameters": self.parameters, **self.payload,
               "checks": self.checks, "notes": self.notes, "cache_hits": self.cache_hits,
               "code_version": f"{__version__}/{CODE_VERSION}"}
        if self.elapsed_ms is not None:
            out["elapsed_ms"] = self.elapsed_ms
        return out

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        known = {"schema", "command", "parameters", "checks", "notes", "cache_hits", "code_version", "elapsed_ms"}
        return cls(data["command"], data["parameters"], {k: v for k, v in data.items() if k not in known},
                   dict(data["checks"]), list(data["notes"]), dict(data["cache_hits"]), data.get("elapsed_ms"))


# ------------------------------------------------------------------ parsing


def parse_composition(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise ArgumentError(f"composition must be a comma list of integers: {text!r}") from None
    if not parts or any(p < 1 for p in parts):
        raise ArgumentError(f"composition needs positive parts: {text!r}")
    return parts


def parse_field(text: str) -> FieldDescriptor:
    return FieldDescriptor.parse(text)


def parse_group(n: int, gens: Sequence[str] | None, young: str | None) -> GroupAction | None:
    if young:
        comp = parse_composition(young)
        if sum(comp) != n:
            raise ArgumentError(f"Young composition {young} does not sum to {n}")
        return young_group(comp)
    if gens:
        return GroupAction.from_cycle_strings(n, gens, "gens")
    return None


def compare(computed: BettiTable, predicted: BettiTable) -> tuple[str, dict]:
    """pass iff the tables agree degree by degree; skipped when the computation was truncated."""
    if computed.field != predicted.field:
        raise ArgumentError(f"field mismatch: {computed.field} vs {predicted.field}")
    cap = computed.truncated_above
    if cap is not None and predicted.betti and max(predicted.betti) > cap:
        return SKIPPED, {"note": f"computation truncated above degree {cap}"}
    degrees = sorted(set(computed.betti) | set(predicted.betti))
    diff = {str(d): [computed.rank(d), predicted.rank(d)] for d in degrees if computed.rank(d) != predicted.rank(d)}
    return (PASS if not diff else FAIL), ({"diff": diff} if diff else {})


def _betti(table: BettiTable) -> dict:
    return {str(d): r for d, r in table.betti.items()}


def _complex_betti(model, fld: FieldDescriptor, args, report: RunReport, key: str) -> BettiTable:
    cx = cached_orbit_chain_complex(model, fld, directory=cache_directory(args.cache))
    report.cache_hits[key] = cx.meta.get("cache") == "hit"
    table = betti_numbers(cx)
    if cx.truncated_above is not None:
        table.truncated_above = cx.truncated_above
    return table


# ----------------------------------------------------------------- commands


def cmd_betti(args, report: RunReport) -> None:
    fld = parse_field(args.field)
    if args.subspaces:
        q, n = parse_composition(args.subspaces)
        model = nerve_model(subspace_lattice(q, n))
        table = _complex_betti(model, fld, args, report, "complex")
        report.payload["betti"] = _betti(table)
        report.check("expected", table.betti == {n - 2: q ** math.comb(n, 2)})
        return
    if args.n is None:
        raise ArgumentError("betti needs --n or --subspaces")
    group = parse_group(args.n, args.gens, args.young)
    model = nerve_model(partition_lattice(args.n), group=group)
    table = _complex_betti(model, fld, args, report, "complex")
    report.payload["betti"] = _betti(table)
    if group is None and args.n >= 3:
        report.check("expected", table.betti == {args.n - 3: math.factorial(args.n - 1)})


def cmd_quotient(args, report: RunReport) -> None:
    fld = parse_field(args.field)
    comp = parse_composition(args.young)
    if args.n is not None and sum(comp) != args.n:
        raise ArgumentError(f"Young composition {args.young} does not sum to {args.n}")
    predicted = predicted_quotient_betti(comp, fld)
    report.payload["predicted"] = _betti(predicted)
    if args.compare or not args.predict_only:
        model = nerve_model(partition_lattice(sum(comp)), group=young_group(comp))
        computed = _complex_betti(model, fld, args, report, "complex")
        report.payload["betti"] = _betti(computed)
        if args.compare:
            flag, extra = compare(computed, predicted)
            report.checks["compare"] = flag
            report.payload.update(extra)


def cmd_atom(args, report: RunReport) -> None:
    fld = parse_field(args.field)
    if fld.is_rational or fld.characteristic == 2 or args.ell % 2:
        predicted = predicted_atom_betti(fld, args.ell, args.n)
    else:
        predicted = predicted_lie_betti(fld, args.ell, args.n)
        report.notes.append("even ell at odd p: prediction from allowable sequences")
    report.payload["predicted"] = _betti(predicted)
    if not args.predict_only:
        from .simplicial import atom_model
        computed = _complex_betti(atom_model(args.n, args.ell), fld, args, report, "complex")
        report.payload["betti"] = _betti(computed)
        flag, extra = compare(computed, predicted)
        report.checks["compare"] = flag
        report.payload.update(extra)


def cmd_fixed(args, report: RunReport) -> None:
    fld = parse_field(args.field)
    if args.elementary:
        p, k, m = parse_composition(args.elementary)
        group = elementary_abelian_action(p, k, m)
        n = group.degree
    else:
        if args.n is None or not args.gens:
            raise ArgumentError("fixed needs --elementary p,k,m or --n with --gens")
        n = args.n
        group = GroupAction.from_cycle_strings(n, args.gens, "gens")
    info = classify_action(n, group)
    table = fixed_point_betti(n, group, fld)
    report.payload["classification"] = info.to_json()
    report.payload["betti"] = _betti(table)
    if args.elementary:
        predicted = predicted_fixed_point_betti(p, k, m, fld)
        report.payload["predicted"] = _betti(predicted)
        report.check("closed_form", table == predicted)
    decomposition = decomposition_prediction(n, group, fld)
    if decomposition is None:
        report.check("decomposition", None)
    else:
        report.payload["decomposition"] = _betti(decomposition)
        report.check("decomposition", table == decomposition)


def cmd_collapse(args, report: RunReport) -> None:
    if args.young:
        comp = parse_composition(args.young)
        fan = young_fan(comp)
        report.payload["formula_count"] = orthogonal_chain_count_formula(comp)
    elif args.breaking:
        a, *b = parse_composition(args.breaking)
        fan = symmetry_breaking_fan(a, b)
    elif args.parabolic:
        q, n = parse_composition(args.parabolic)
        lat = subspace_lattice(q, n)
        fan = parabolic_fan(lat, [lat.index[coordinate_subspace(q, n, range(n - 1))]])
    else:
        raise ArgumentError("collapse needs --young, --breaking or --parabolic")
    lat = fan.lattice
    chains = orthogonal_chains(fan)
    report.payload["orthogonal_chains"] = [
        {"chain": [str(lat.values[v]) for v in oc.chain], "orbit": oc.orbit, "orbit_size": oc.orbit_size,
         "stabilizer_order": oc.stabilizer_order} for oc in chains]
    report.payload["count"] = len(chains)
    if args.young:
        report.check("formula", len(chains) == report.payload["formula_count"])
    if args.brute_force:
        report.check("brute_force", sorted(oc.chain for oc in chains) == sorted(brute_force_orthogonal(fan)))
    report.payload["wedge_prediction"] = {str(d): r for d, r in sorted(wedge_prediction(fan).items())}
    if args.matching:
        m = build_matching(fan, raise_on_failure=False)
        report.payload["matching"] = m.to_json(lat)
        report.check("matching", m.ok)


def cmd_lyndon(args, report: RunReport) -> None:
    comp = parse_composition(args.composition)
    words = lyndon_words(comp)
    report.payload["count"] = len(words)
    report.payload["witt"] = witt_count(comp)
    report.check("witt", len(words) == witt_count(comp))
    if args.list:
        report.payload["words"] = [format_word(w) for w in words]
    if args.labelled:
        labelled = labelled_weak_lyndon_words(comp)
        report.payload["labelled_weak_count"] = len(labelled)
        report.payload["formula_count"] = orthogonal_chain_count_formula(comp)
        report.check("labelled", len(labelled) == orthogonal_chain_count_formula(comp))


def cmd_predict(args, report: RunReport) -> None:
    kind = args.kind
    fld = parse_field(args.field)
    if kind == "quotient":
        comp = parse_composition(args.composition)
        seqs = allowable_sequences(fld, [0] * len(comp), comp)
        report.payload["sequences"] = [s.to_json() for s in seqs]
        report.payload["predicted"] = _betti(predicted_quotient_betti(comp, fld))
    elif kind == "multi":
        comp = parse_composition(args.composition)
        ells = parse_composition(args.ells) if args.ells else (0,) * len(comp)
        seqs = allowable_sequences(fld, ells, comp)
        report.payload["sequences"] = [s.to_json() for s in seqs]
    elif kind == "atom":
        report.payload["predicted"] = _betti(predicted_atom_betti(fld, args.ell, args.n))
        if not fld.is_rational:
            report.payload["sequences"] = [list(s) for s in atom_sequences(fld.characteristic, args.ell, args.n)]
    elif kind == "fk":
        p = fld.characteristic
        if not p:
            raise ArgumentError("fk needs a prime field")
        report.payload["fk"] = {str(k): {str(d): r for d, r in fk_dimension(p, k, args.ell).items()}
                                for k in range(args.k + 1)}
        report.payload["symmetric_power"] = {str(d): r for d, r in
                                             symmetric_smash_dimensions(p, args.n, args.ell).items()}
    elif kind == "euler":
        c = bredon_euler_check(fld.characteristic, args.ell, args.k)
        report.payload["euler"] = {str(d): r for d, r in c.euler.items()}
        report.payload["expected"] = {str(d): r for d, r in c.expected.items()}
        report.check("match", c.match)
    elif kind == "ehp":
        terms = ehp_terms_predicted(fld, args.n, args.ell)
        ok, form = terms.identity()
        report.payload.update({"left": _betti(terms.left), "middle": _betti(terms.middle),
                               "right": _betti(terms.right), "form": form})
        report.check("identity", ok)
    elif kind == "classify":
        v = wedge_of_spheres_classifier(parse_composition(args.composition))
        report.payload.update(v.to_json())
        if v.consistent is False:
            report.notes.append("predicted homology has torsion although the gcd rule says wedge")
    elif kind == "torsion":
        comp = parse_composition(args.composition)
        r = torsion_bound_check(comp, parse_composition(args.primes))
        report.payload.update(r.to_json())
        report.check("torsion_bound", r.ok)
    else:
        raise ArgumentError(f"unknown prediction kind {kind!r}")


def cmd_compare(args, report: RunReport) -> None:
    computed = BettiTable.from_json(json.loads(args.computed))
    predicted = BettiTable.from_json(json.loads(args.predicted))
    flag, extra = compare(computed, predicted)
    report.checks["compare"] = flag
    report.payload.update(extra)


# -------------------------------------------------------------------- suite


def _suite_checks(tier: str) -> list[tuple[str, Callable[[], bool]]]:
    from .fixed_points import cyclic_subgroups_by_type, invariant_partitions_as_subgroups, iterated_wreath
    from .lyndon import branching_dimension_identity, compositions, count_lyndon_words

    def partition_betti(n: int, fld: FieldDescriptor, group=None) -> dict:
        return betti_numbers(cached_orbit_chain_complex(nerve_model(partition_lattice(n), group=group), fld,
                                                        directory=cache_directory())).betti

    top = 7 if tier != "fast" else 6
    F2, F3 = FieldDescriptor(2), FieldDescriptor(3)
    checks: list[tuple[str, Callable[[], bool]]] = [
        ("wedge_baseline", lambda: all(partition_betti(n, QQ) == {n - 3: math.factorial(n - 1)}
                                       for n in range(3, top + 1))),
        ("symmetric_quotient", lambda: all(partition_betti(n, f, GroupAction.symmetric(n)) == {}
                                           for n in range(3, 7) for f in (QQ, F2, F3))),
        ("worked_example", lambda: all(computed_quotient_betti((4, 4), f) == predicted_quotient_betti((4, 4), f)
                                       for f in (QQ, F2)) if tier != "fast" else
         predicted_quotient_betti((4, 4), F2).betti == {4: 1, 5: 9}),
        ("branching_structural", lambda: all(
            len(orthogonal_chains(young_fan(c))) == orthogonal_chain_count_formula(c)
            == len(labelled_weak_lyndon_words(c))
            for n in range(2, top + 1) for c in compositions(n))),
        ("matching", lambda: all(build_matching(young_fan(c), raise_on_failure=False).ok
                                 for n in range(3, 6 if tier == "fast" else 7) for c in compositions(n)
                                 if young_fan(c).collapse_point() not in (None, partition_lattice(n).top))),
        ("branching_homological", lambda: all(
            wedge_prediction(young_fan(c)) == {n - 3: math.factorial(n - 1)}
            for n in range(3, top + 1) for c in compositions(n))
            and all(branching_dimension_identity(c)[2] for n in range(2, 10) for c in compositions(n))),
        ("fixed_points", lambda: all(
            fixed_point_betti(g.degree, g) == predicted_fixed_point_betti(*pkm)
            for pkm in [(2, 1, 2), (2, 1, 3), (2, 1, 4), (2, 2, 1), (2, 2, 2), (3, 1, 2)]
            + ([(3, 1, 3)] if tier != "fast" else []) for g in [elementary_abelian_action(*pkm)])
            and all(fixed_point_betti(g.degree, g).betti == {} for n in range(2, 7)
                    for g in cyclic_subgroups_by_type(n) if classify_action(n, g).kind == "non-isotypical")
            and fixed_point_betti(4, iterated_wreath(2)).betti == {}
            and invariant_partitions_as_subgroups(iterated_wreath(2)).ok),
        ("bruhat_tits", lambda: all(
            betti_numbers(cached_orbit_chain_complex(nerve_model(subspace_lattice(q, n)), QQ)).betti
            == {n - 2: q ** math.comb(n, 2)} for q, n in [(2, 2), (2, 3), (3, 2), (3, 3)])),
        ("atoms", lambda: all(
            computed_atom_betti(p, ell, n) == predicted_atom_betti(p, ell, n)
            for p, n, ell in [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 1), (2, 3, 2), (2, 4, 1),
                              (3, 2, 1), (3, 3, 1)]
            + ([(2, 4, 2), (3, 3, 3)] if tier == "extended" else []))),
        ("ehp", lambda: all(ehp_rank_identity(f, 2, 2)[1] for f in (QQ, F2, F3))),
        ("witt", lambda: all(witt_count(c) == count_lyndon_words(c)
                             for n in range(1, 9 if tier == "fast" else 11) for c in compositions(n))),
        ("fk_euler", lambda: all(
            betti_numbers(cached_orbit_chain_complex(sphere_power_model(n, ell, GroupAction.symmetric(n)),
                                                     FieldDescriptor(p))).betti
            == symmetric_smash_dimensions(p, n, ell)
            for p, n, ell in [(2, 2, 1), (2, 2, 2), (2, 2, 3), (2, 2, 4), (2, 3, 1), (2, 3, 2), (3, 2, 1), (3, 3, 1)])
            and all(bredon_euler_check(p, ell, k).match for p in (2, 3, 5) for ell in (1, 3, 5, 7)
                    for k in (1, 2, 3))),
        ("torsion_bound", lambda: all(torsion_bound_check(c, [2, 3, 5, 7]).ok for c in [(2, 2), (3, 3), (2, 2, 2)])),
    ]
    return checks


def cmd_suite(args, report: RunReport) -> None:
    if args.name not in ("fast", "full", "extended"):
        raise ArgumentError(f"unknown suite {args.name!r}; use fast, full or extended")
    timings = {}
    for name, fn in _suite_checks(args.name):
        start = time.perf_counter()
        try:
            ok = bool(fn())
        except InvariantViolation as exc:
            ok = False
            report.notes.append(f"{name}: {exc}")
        report.check(name, ok)
        timings[name] = round((time.perf_counter() - start) * 1000)
        if args.verbose:
            print(f"{name}: {report.checks[name]} ({timings[name]} ms)", file=sys.stderr)
    if not args.stable:
        report.payload["timings_ms"] = timings
    report.payload["passed"] = not report.failed


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partition-collapse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", help="cache directory (default: $PARTITION_COLLAPSE_CACHE)")
    common.add_argument("--csv", action="store_true", help="print the Betti table as CSV instead of JSON")
    common.add_argument("--stable", action="store_true", help="omit timings so reports are byte-identical")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", parents=[common], help="reduced Betti numbers of |Π_n| or its strict quotient")
    p.add_argument("--n", type=int)
    p.add_argument("--field", default="q")
    p.add_argument("--young", help="quotient by a Young subgroup, e.g. 2,2")
    p.add_argument("--gens", nargs="*", help="quotient by the group generated by these cycles, e.g. '(1 2)(3 4)'")
    p.add_argument("--subspaces", help="q,n: proper subspaces of F_q^n instead of partitions")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("quotient", parents=[common], help="|Π_n| modulo a Young subgroup")
    p.add_argument("--n", type=int)
    p.add_argument("--young", required=True)
    p.add_argument("--field", default="q")
    p.add_argument("--compare", action="store_true")
    p.add_argument("--predict-only", action="store_true")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("atom", parents=[common], help="Σ|Π_n|^◇ ∧ (S^ℓ)^n modulo Σ_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--field", default="fp:2")
    p.add_argument("--predict-only", action="store_true")
    p.set_defaults(func=cmd_atom)

    p = sub.add_parser("fixed", parents=[common], help="fixed points of |Π_n| under a group")
    p.add_argument("--n", type=int)
    p.add_argument("--gens", "--perm", dest="gens", nargs="*", help="generators in cycle notation")
    p.add_argument("--elementary", help="p,k,m: F_p^k acting freely on m p^k points")
    p.add_argument("--field", default="q")
    p.set_defaults(func=cmd_fixed)

    p = sub.add_parser("collapse", parents=[common], help="orthogonal chains and Morse matchings of a fan")
    p.add_argument("--young")
    p.add_argument("--breaking", help="a,b1,b2,...: symmetry-breaking fan")
    p.add_argument("--parabolic", help="q,n: parabolic fan on subspaces of F_q^n")
    p.add_argument("--matching", action="store_true")
    p.add_argument("--brute-force", action="store_true")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("lyndon", parents=[common], help="Lyndon words with given letter multiplicities")
    p.add_argument("--composition", required=True)
    p.add_argument("--count", action="store_true", help="print only the count")
    p.add_argument("--list", action="store_true")
    p.add_argument("--labelled", action="store_true")
    p.set_defaults(func=cmd_lyndon)

    p = sub.add_parser("predict", parents=[common], help="closed-form predictions")
    p.add_argument("--kind", required=True,
                   choices=["quotient", "atom", "multi", "fk", "euler", "ehp", "classify", "torsion"])
    p.add_argument("--composition")
    p.add_argument("--ells")
    p.add_argument("--field", default="fp:2")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--primes", default="2,3,5,7")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("compare", parents=[common], help="compare two Betti tables given as JSON")
    p.add_argument("--computed", required=True)
    p.add_argument("--predicted", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("suite", parents=[common], help="run a tier of acceptance checks")
    p.add_argument("name")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_suite)
    return parser


def _emit(report: RunReport, args, out) -> None:
    data = report.to_json()
    if getattr(args, "count", False) and "count" in report.payload:
        print(report.payload["count"], file=out)
        return
    if getattr(args, "csv", False) and "betti" in report.payload:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["degree", "rank"])
        for d, r in report.payload["betti"].items():
            writer.writerow([d, r])
        out.write(buf.getvalue())
        return
    print(json.dumps(data, sort_keys=True), file=out)


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "csv", "stable", "cache")}
    report = RunReport(args.command, params)
    start = time.perf_counter()
    code = 0
    try:
        args.func(args, report)
        code = 1 if report.failed else 0
    except ArgumentError as exc:
        report.notes.append(f"argument error: {exc}")
        code = 2
    except ResourceError as exc:
        report.notes.append(f"resource error: {exc}")
        code = 3
    if not args.stable:
        report.elapsed_ms = round((time.perf_counter() - start) * 1000)
    if code == 2 and args.command == "suite":
        report.payload["passed"] = False
    _emit(report, args, out)
    return code


def main() -> None:
    sys.exit(run())
