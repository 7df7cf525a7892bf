"""Independent oracles and small fixtures shared by several test modules."""

import itertools
import random

from robotsys.dynamics import Algorithm, all_choices, step
from robotsys.functions import FunctionSpec
from robotsys.graph import unoriented_path
from robotsys.simulation import check_compliance, function_algorithm, native
from robotsys.space import ConfigSpace


def chebyshev_edges(n):
    """Expected non-loop edges of G(OP(n,2)): two robots on different vertices
    move independently by at most one; robots sharing a vertex move together."""
    out = set()
    for a in range(n):
        for b in range(a, n):
            if a == b:
                for d in (-1, 1):
                    if 0 <= a + d < n:
                        out.add(((a, b), (a + d, a + d)))
                continue
            for da in (-1, 0, 1):
                for db in (-1, 0, 1):
                    x, y = a + da, b + db
                    if 0 <= x < n and 0 <= y < n and (da, db) != (0, 0):
                        out.add(((a, b), tuple(sorted((x, y)))))
    return {e for e in out if e[0] != e[1]}


def distance_line_edges(m):
    """Expected non-loop edges of G(OR(m,2)) on canonical distances: inside
    the line both robots move independently (reach +-2); at d=0 and d=m/2
    both robots share a class and keep their distance."""
    out = set()
    for d in range(m // 2 + 1):
        if d == 0 or 2 * d == m:
            continue
        for delta in (-2, -1, 1, 2):
            e = (d + delta) % m
            e = min(e, m - e)
            if e != d:
                out.add(((0, d), (0, e)))
    return out


def lambda3_search(n):
    """Every algorithm table on UP(n,1) and every surjective partial phi onto
    range(3); returns the number of PASSing pairs."""
    f = FunctionSpec.cycle(3)
    space = ConfigSpace(unoriented_path(n), 1)
    configs = space.enumerate()
    succ = function_algorithm(f).successor
    per_config = [list(all_choices(space, c)) for c in configs]
    passes = 0
    for choices in itertools.product(*per_config):
        alg = Algorithm(space, dict(zip(configs, choices)))
        for values in itertools.product([None, 0, 1, 2], repeat=len(configs)):
            if {0, 1, 2} - set(values):
                continue
            phi = {c: v for c, v in zip(configs, values) if v is not None}
            if check_compliance(space, alg, phi, lambda x: succ((x,))[0], range(3)):
                passes += 1
    return passes


def random_deterministic(space, rng):
    table = {}
    for c in space.enumerate():
        opts = [ch for ch in all_choices(space, c) if len(step(space, c, ch)) == 1]
        table[c] = rng.choice(opts)
    return Algorithm(space, table)


def base_system(graph, k, seed=0):
    space = ConfigSpace(graph, k)
    return native(space, random_deterministic(space, random.Random(seed)))
