"""Acceptance criteria 1-9, each at its stated tolerance.

Every criterion records a result and the terminal summary prints one
PASS/FAIL line per criterion.  Where the literal wording of a criterion cannot
hold for the model as implemented, the literal check runs as a strict xfail
and the line reports it as FAIL next to the checks that do hold; the
analysis lives in the decisions ledger.
"""

import random
import time
from collections import deque

import pytest

from robotsys.compilers import (check_opt2, compile_complete, compile_min_size,
                                compile_oriented_path, compile_oriented_ring, compile_unoriented)
from robotsys.dynamics import (build_configuration_graph, candidate_destinations, has_cycle_geq,
                               has_grid, path_components)
from robotsys.errors import PreconditionError
from robotsys.functions import FunctionSpec, all_functions
from robotsys.graph import build_family, complete_with_danglers, function_network
from robotsys.simulation import (CompiledSystem, lift_k_to_many, lift_one_to_k, lift_path_ring,
                                 unrolled_compliance, verify_function_computation,
                                 verify_simulation)
from robotsys.space import ConfigSpace, closed_form_count

from oracles import base_system, chebyshev_edges, distance_line_edges, lambda3_search

RESULTS: dict = {}


def record(criterion: int, part: str, ok: bool, detail: str) -> None:
    RESULTS.setdefault(criterion, []).append((part, ok, detail))
    print(f"criterion {criterion} [{part}]: {'PASS' if ok else 'FAIL'} ({detail})")


def summary_lines() -> list:
    out = []
    for crit in sorted(RESULTS):
        parts = RESULTS[crit]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        body = "; ".join(f"{p} {'PASS' if ok else 'FAIL'}: {d}" for p, ok, d in parts)
        out.append(f"criterion {crit}: {verdict} | {body}")
    return out


def cgraph(fam, n, k):
    return build_configuration_graph(ConfigSpace(build_family(fam, n), k))


# -- 1 ---------------------------------------------------------------------------------

def test_criterion_1_counting_oracle():
    start = time.perf_counter()
    bad = []
    checked = 0
    for fam in ("OP", "UP", "OR", "UR"):
        for k in (1, 2, 3):
            for n in range(3, 13):
                got = len(ConfigSpace(build_family(fam, n), k).enumerate())
                want = closed_form_count(fam, n, k)
                checked += 1
                if got != want:
                    bad.append((fam, n, k, got, want))
    secs = time.perf_counter() - start
    ok = not bad and secs < 60
    record(1, "counts", ok, f"{checked} instances, {len(bad)} mismatches, {secs:.1f}s < 60s")
    assert ok, bad


# -- 2 ---------------------------------------------------------------------------------

def test_criterion_2_configuration_graph_structure():
    start = time.perf_counter()
    op = cgraph("OP", 5, 2)
    diagonal = {(a, a) for a in range(5)}
    op_ok = (len(op.nodes) == 15 and op.non_loop() == chebyshev_edges(5)
             and all(b in diagonal for a, b in op.edges if a in diagonal))
    up = cgraph("UP", 5, 2)
    up_ok = up.successors((2, 2), deterministic=True) == {(2, 2)}
    ur15 = path_components(cgraph("UR", 15, 2)) == [8]
    ur16 = path_components(cgraph("UR", 16, 2)) == [5, 4]
    ur14 = path_components(cgraph("UR", 14, 2)) == [4, 4]
    or_ok = all(cgraph("OR", m, 2).non_loop() == distance_line_edges(m) for m in (14, 15))
    secs = time.perf_counter() - start
    ok = op_ok and up_ok and ur15 and ur16 and ur14 and or_ok and secs < 10
    record(2, "structure", ok,
           f"OP(5,2) chebyshev {op_ok}, UP(5,2) sink {up_ok}, UR(15,2)=[8] {ur15}, "
           f"UR(14,2)=[4,4] {ur14}, UR(16,2)=[5,4] {ur16}, OR d-lines {or_ok}, {secs:.1f}s < 10s")
    assert ok


@pytest.mark.xfail(strict=True, reason="UR(14,2) has 8 configurations, split 4+4")
def test_criterion_2_literal_ur14_five_plus_four():
    got = path_components(cgraph("UR", 14, 2))
    record(2, "literal UR(14,2)=5+4", got == [5, 4], f"got {got}")
    assert got == [5, 4]


# -- 3 ---------------------------------------------------------------------------------

# equally spaced robots on an oriented ring share one destination class
# with both of each robot's neighbours
COUNTEREXAMPLES = {("OR", 4, 2), ("OR", 6, 3)}


def determinism_instances():
    for k in (1, 2, 3):
        for n in range(2, 11):
            yield "OP", n, k
        for n in range(2, 11, 2):
            yield "UP", n, k
        for n in range(3, 11):
            yield "OR", n, k
    for fam in ("UP", "UR"):
        for n in range(3 if fam == "UR" else 2, 11):
            yield fam, n, 1


def test_criterion_3_determinism():
    start = time.perf_counter()
    failures, count = [], 0
    for fam, n, k in determinism_instances():
        count += 1
        if not cgraph(fam, n, k).is_deterministic:
            failures.append((fam, n, k))
    singles = [complete_with_danglers(m) for m in range(2, 5)]
    singles += [function_network(f.table) for f in all_functions(3)]
    for g in singles:
        count += 1
        if not build_configuration_graph(ConfigSpace(g, 1)).is_deterministic:
            failures.append(("single", g.n, 1))
    secs = time.perf_counter() - start
    unexpected = [x for x in failures if x not in COUNTEREXAMPLES]
    ok = not unexpected and secs < 60
    record(3, "all but equally spaced OR", ok,
           f"{count} systems, nondeterministic only {sorted(failures)}, {secs:.1f}s < 60s")
    assert ok, unexpected


@pytest.mark.xfail(strict=True, reason="OR(4,2) and OR(6,3) are nondeterministic")
def test_criterion_3_literal_oriented_rings():
    bad = [(n, k) for n in range(3, 11) for k in (1, 2, 3) if not cgraph("OR", n, k).is_deterministic]
    record(3, "literal every OR(n,k)", not bad, f"nondeterministic {bad}")
    assert not bad


# -- 4 ---------------------------------------------------------------------------------

def test_criterion_4_grid():
    start = time.perf_counter()
    found = {n: has_grid(cgraph("OP", 2 * n, 2), n) for n in (2, 3, 4, 5)}
    secs = time.perf_counter() - start
    ok = all(found.values()) and secs < 10
    record(4, "grid", ok, f"has_grid {found}, {secs:.1f}s < 10s")
    assert ok


# -- 5 ---------------------------------------------------------------------------------

TARGETS = {
    "complete": compile_complete,
    "OP": compile_oriented_path,
    "OR": compile_oriented_ring,
    "UP": lambda f: compile_unoriented(f, "UP"),
    "UR": lambda f: compile_unoriented(f, "UR"),
}


def universality_functions():
    fs = list(all_functions(3))
    for n in (4, 5, 6):
        rng = random.Random(n)
        fs += [FunctionSpec.random(n, rng) for _ in range(25)]
    return fs


def test_criterion_5_universality():
    start = time.perf_counter()
    fs = universality_functions()
    failures = []
    for f in fs:
        for name, compiler in TARGETS.items():
            sim = compiler(f)
            if name == "UR":
                assert sim.k == 3
            if not (verify_function_computation(sim, f) and check_opt2(sim.graph.n, f.n)):
                failures.append((name, str(f)))
    secs = time.perf_counter() - start
    ok = not failures and secs < 300
    record(5, "universality", ok,
           f"{len(fs)} functions x {len(TARGETS)} targets, {len(failures)} failures, {secs:.1f}s < 300s")
    assert ok, failures[:5]


# -- 6 ---------------------------------------------------------------------------------

def test_criterion_6_minimum_size():
    start = time.perf_counter()
    cases = [(FunctionSpec.cycle(3), (6, 6)), (FunctionSpec.cycle(12), (8, 12)),
             (FunctionSpec.random(12, random.Random(12)), (8, 12))]
    seen = []
    ok = True
    for f, shape in cases:
        sim = compile_min_size(f)
        good = ((sim.graph.n, sim.k) == shape and bool(verify_function_computation(sim, f))
                and check_opt2(sim.graph.n, f.n))
        seen.append(f"n={f.n} OP({sim.graph.n},{sim.k}) {'PASS' if good else 'FAIL'}")
        ok = ok and good
    secs = time.perf_counter() - start
    ok = ok and secs < 300
    record(6, "min size", ok, f"{', '.join(seen)}, opt2 on all, {secs:.1f}s < 300s")
    assert ok


# -- 7 ---------------------------------------------------------------------------------

def non_universality_graphs():
    for n in range(2, 10):
        yield f"OP({n},1)", cgraph("OP", n, 1)
        yield f"UP({n},1)", cgraph("UP", n, 1)
    for n in range(3, 10):
        yield f"UR({n},2)", cgraph("UR", n, 2)


def test_criterion_7_non_universality():
    start = time.perf_counter()
    long_cycles = [name for name, cg in non_universality_graphs() if has_cycle_geq(cg, 3)]
    searches = {n: lambda3_search(n) for n in (3, 4)}
    secs = time.perf_counter() - start
    ok = not long_cycles and not any(searches.values()) and secs < 120
    record(7, "no cycle of length >= 3, lambda_3 search", ok,
           f"graphs with such cycles {long_cycles}, passing (algorithm, phi) pairs on "
           f"UP(3,1)/UP(4,1) {searches[3]}/{searches[4]}, {secs:.1f}s < 120s")
    assert ok


@pytest.mark.xfail(strict=True, reason="bidirectional edges are directed 2-cycles")
def test_criterion_7_literal_no_two_cycles():
    with_two = [name for name, cg in non_universality_graphs() if has_cycle_geq(cg, 2)]
    record(7, "literal no cycle of length >= 2", not with_two,
           f"{len(with_two)} graphs contain 2-cycles, e.g. {with_two[:2]}")
    assert not with_two


# -- 8 ---------------------------------------------------------------------------------

def lift_cases():
    for seed in range(2):
        for fam in ("OP", "UP", "OR", "UR"):
            for n in range(3, 6):
                yield "one_to_k", base_system(build_family(fam, n), 1, seed), 2
        for fam, n, k in (("OP", 4, 1), ("OR", 5, 1), ("UP", 4, 1), ("OP", 3, 2), ("UP", 4, 2)):
            yield "k_to_many", base_system(build_family(fam, n), k, seed), 2 * k
        for n in (3, 4, 5):
            for k in (1, 2):
                yield "op_to_up", base_system(build_family("OP", n), k, seed), None
            yield "op_to_or", base_system(build_family("OP", n), 2, seed), None
            yield "up_to_ur", base_system(build_family("UP", n), 2, seed), None


def test_criterion_8_lifts():
    start = time.perf_counter()
    failures, count = [], 0
    for kind, base, k in lift_cases():
        if kind == "one_to_k":
            lifted = lift_one_to_k(base, k)
        elif kind == "k_to_many":
            lifted = lift_k_to_many(base, k)
        else:
            lifted = lift_path_ring(kind, base)
        count += 1
        if not verify_simulation(lifted):
            failures.append((kind, base.graph.n, base.k))
    rejected = 0
    for n in (3, 5):
        try:
            lift_k_to_many(base_system(build_family("UP", n), 1), 2)
        except PreconditionError:
            rejected += 1
    secs = time.perf_counter() - start
    ok = not failures and rejected == 2 and secs < 60
    record(8, "lifts", ok, f"{count} lifts, {len(failures)} failures, odd UP rejected "
                           f"{rejected}/2, {secs:.1f}s < 60s")
    assert ok, failures


# -- 9 ---------------------------------------------------------------------------------

def behaviour(sim: CompiledSystem):
    """Reachable labelled transition graph: outcome sets and phi values."""
    seen, queue, edges = set(sim.phi), deque(sim.phi), {}
    while queue:
        c = queue.popleft()
        edges[c] = sim.algorithm.step(c)
        for d in edges[c]:
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return edges, {c: sim.phi.get(c) for c in seen}


def mutate(sim: CompiledSystem, f: FunctionSpec, rng: random.Random) -> tuple:
    """One changed entry: a class destination or a phi value."""
    alg, phi = sim.algorithm.copy(), dict(sim.phi)
    c = rng.choice(sorted(phi))
    if rng.random() < 0.5:
        occupied = sim.space.occupied_classes(c)
        cls = rng.choice(sorted(occupied, key=sorted))
        current = alg.choice(c).get(cls, cls)
        options = [d for d in candidate_destinations(sim.space, c, cls) if d != current]
        entry = {k: alg.choice(c).get(k, k) for k in occupied}
        entry[cls] = rng.choice(sorted(options, key=sorted))
        alg.table[c] = entry
        kind = "algorithm"
    else:
        phi[c] = rng.choice([v for v in range(f.n) if v != phi[c]])
        kind = "phi"
    return kind, CompiledSystem(sim.space, alg, phi, f)


def mutation_outcomes():
    f = FunctionSpec.cycle(5)
    sim = compile_oriented_path(f)
    assert verify_function_computation(sim, f)
    original = behaviour(sim)
    out = []
    for seed in range(20):
        kind, mutant = mutate(sim, f, random.Random(seed))
        verdict = bool(verify_function_computation(mutant, f))
        oracle = unrolled_compliance(mutant.space, mutant.algorithm, mutant.phi, f, range(f.n))
        out.append((seed, kind, verdict, oracle, behaviour(mutant) == original))
    return out


def test_criterion_9_mutations_agree_with_oracle():
    start = time.perf_counter()
    outcomes = mutation_outcomes()
    disagree = [o for o in outcomes if o[2] != o[3]]
    fails = sum(1 for o in outcomes if not o[2])
    still_correct = [o[0] for o in outcomes if o[2] and not o[4]]
    secs = time.perf_counter() - start
    ok = not disagree and secs < 120
    record(9, "verdicts match unrolling oracle", ok,
           f"20 mutations, {fails} FAIL, PASS still computing f at seeds {still_correct}, "
           f"{len(disagree)} disagreements, {secs:.1f}s < 120s")
    assert ok, disagree


@pytest.mark.xfail(strict=True, reason="some mutations change behaviour yet still compute f")
def test_criterion_9_literal_fail_or_identical():
    silent = [o[0] for o in mutation_outcomes() if o[2] and not o[4]]
    record(9, "literal FAIL or identical", not silent, f"PASS with changed behaviour at seeds {silent}")
    assert not silent
