"""Compilers targeting oriented paths, including the minimum-size pipeline."""

from __future__ import annotations

import itertools
import math

from ..dynamics import Algorithm, choice_from_moves, materialize
from ..errors import EmbeddingError, PreconditionError, ResourceLimitError, budget
from ..functions import as_function
from ..graph import complete_with_danglers, oriented_path
from ..simulation import CompiledSystem, compose
from ..space import ConfigSpace
from .drawing import grid_embed, reduce_degree

MAX_SJT = budget("max_sjt", 40_320)


def compile_complete(f) -> CompiledSystem:
    """One robot on K_n with i danglers on core vertex i walks i -> f(i)."""
    f = as_function(f)
    space = ConfigSpace(complete_with_danglers(f.n), 1)
    table = {(i,): choice_from_moves(space, (i,), {i: f(i)}) for i in range(f.n) if f(i) != i}
    phi = {space.canonicalize((i,)): i for i in range(f.n)}
    return CompiledSystem(space, Algorithm(space, table), phi, f, {"compiler": "complete"})


def grid_config(w: int, p) -> tuple:
    """Grid point (x, y) as the configuration (x, w+y) of two robots on a
    2w-vertex oriented path."""
    return (p[0], w + p[1])


def compile_oriented_path(f, width: int | None = None) -> CompiledSystem:
    """Walk the grid drawing of the degree-reduced functional graph.

    Interior points of a drawn edge a -> b belong to a, so a robot pair
    stopped halfway still reads as the owner of a.  With ``width`` the grid
    block is padded to that width.
    """
    f = as_function(f)
    reduced = reduce_degree(f)
    drawing = grid_embed(reduced)
    w = drawing.width
    if width is not None:
        if width < w:
            raise EmbeddingError(f"drawing needs width {w}, only {width} available")
        w = width
    space = ConfigSpace(oriented_path(2 * w), 2)
    nxt = {}
    for a, b in enumerate(reduced.succ):
        if a == b:
            continue
        walk = [drawing.placement[a]] + list(drawing.routes.get(a, [])) + [drawing.placement[b]]
        for p, q in zip(walk, walk[1:]):
            nxt[p] = q
    phi, table = {}, {}
    for p, v in drawing.points().items():
        c = grid_config(w, p)
        phi[c] = reduced.owner[v]
        if p in nxt:
            q = nxt[p]
            src, dst = grid_config(w, p), grid_config(w, q)
            moves = {s: t for s, t in zip(src, dst) if s != t}
            table[c] = choice_from_moves(space, c, moves)
    info = {"compiler": "oriented_path", "width": w, "drawing_width": drawing.width,
            "within_bound": drawing.within_bound(), "reduced_size": reduced.size}
    return CompiledSystem(space, Algorithm(space, table), phi, f, info)


def is_sequential(sim: CompiledSystem) -> bool:
    """At most one robot leaves its vertex in every tabulated step."""
    for c, ch in sim.algorithm.table.items():
        movers = [cls for cls, d in ch.items() if d != cls]
        robots = sum(c.count(v) for cls in movers for v in cls if v in c)
        if robots > 1:
            return False
    return True


# --------------------------------------------------------------------------
# permutations

def sjt_sequence(n: int) -> list[tuple]:
    """All permutations of range(n) in Steinhaus-Johnson-Trotter order,
    starting at the identity; neighbours differ by one adjacent swap."""
    if n < 1:
        raise PreconditionError("n must be positive")
    if math.factorial(n) > MAX_SJT:
        raise ResourceLimitError(f"{n}! permutations exceed the budget {MAX_SJT}")
    perm = list(range(n))
    direction = [-1] * n          # indexed by value
    out = [tuple(perm)]
    while True:
        mobile, pos = -1, -1
        for i, v in enumerate(perm):
            j = i + direction[v]
            if 0 <= j < n and perm[j] < v and v > mobile:
                mobile, pos = v, i
        if mobile < 0:
            return out
        j = pos + direction[mobile]
        perm[pos], perm[j] = perm[j], perm[pos]
        for v in range(mobile + 1, n):
            direction[v] = -direction[v]
        out.append(tuple(perm))


def compile_factorial_path(base: CompiledSystem, m: int | None = None,
                           domain: str = "space") -> CompiledSystem:
    """Encode each base robot by a permutation-shaped pile profile.

    Sub-path i (vertices i*m .. i*m+m-1) holds sigma[j] robots on vertex j,
    where sigma is the permutation whose SJT rank is robot i's position.  A
    base step of one vertex is one swap of two neighbouring piles.  With
    ``domain="phi"`` only the base configurations in ``base.phi`` are encoded.
    """
    k = base.k
    size = base.graph.n
    if m is None:
        m = 1
        while math.factorial(m) < size:
            m += 1
    if math.factorial(m) != size or base.graph != oriented_path(size):
        raise PreconditionError("base must be an oriented path with m! vertices")
    seq = sjt_sequence(m)
    rank = {p: i for i, p in enumerate(seq)}
    robots = k * m * (m - 1) // 2
    space = ConfigSpace(oriented_path(k * m), robots)

    def encode(b):
        arr = []
        for i, pos in enumerate(b):
            for j, cnt in enumerate(seq[pos]):
                arr += [i * m + j] * cnt
        return tuple(sorted(arr))

    def decode(c):
        counts = [0] * (k * m)
        for v in c:
            counts[v] += 1
        out = []
        for i in range(k):
            r = rank.get(tuple(counts[i * m:(i + 1) * m]))
            if r is None:
                return None
            out.append(r)
        return out

    source = base.space.enumerate() if domain == "space" else sorted(base.phi)
    # base robots are indistinguishable, so every sub-path assignment counts
    phi = {encode(order): b for b in source for order in set(itertools.permutations(b))}

    def rule(c):
        pos = decode(c)
        if pos is None:
            return None
        b = tuple(sorted(pos))
        ch = base.algorithm.choice(b)
        moves = {}
        for i, p in enumerate(pos):
            dest = ch.get(frozenset((p,)), frozenset((p,)))
            (q,) = dest
            if q == p:
                continue
            before, after = seq[p], seq[q]
            diff = [j for j in range(m) if before[j] != after[j]]
            j1, j2 = diff
            moves[i * m + j1] = i * m + j2
            moves[i * m + j2] = i * m + j1
        return choice_from_moves(space, c, {u: t for u, t in moves.items() if u in c})

    alg = materialize(space, rule, phi)
    return CompiledSystem(space, alg, phi, base, {"compiler": "factorial_path", "m": m})


def min_size_parameter(n: int) -> int:
    m = 1
    while math.factorial(m) < 2 * n:
        m += 1
    return m


def compile_min_size(f) -> CompiledSystem:
    """Two robots on OP(m!, 2) re-encoded as m(m-1) robots on OP(2m)."""
    f = as_function(f)
    m = min_size_parameter(f.n)
    if math.factorial(m) > MAX_SJT:
        raise ResourceLimitError(f"m={m} exceeds the permutation budget")
    inner = compile_oriented_path(f, width=math.factorial(m) // 2)
    outer = compile_factorial_path(inner, m, domain="phi")
    sim = compose(outer, inner)
    sim.info.update({"compiler": "min_size", "m": m})
    return sim


def check_opt2(system_vertices: int, n: int) -> bool:
    """Necessary condition |V|! >= n for computing a function on range(n)."""
    if system_vertices < 1 or n < 1:
        raise PreconditionError("sizes must be positive")
    if system_vertices >= n:
        return True
    return math.factorial(system_vertices) >= n
