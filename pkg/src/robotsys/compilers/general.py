"""Compilers for arbitrary graphs with a long quotient path or large girth."""

from __future__ import annotations

import math
from collections import deque

from ..dynamics import choice_from_moves, materialize, step
from ..errors import ContractError, PreconditionError
from ..functions import as_function
from ..graph import LabeledGraph, girth, longest_quotient_path, quotient_graph
from ..simulation import CompiledSystem
from ..space import ConfigSpace, fmt_config
from .paths import compile_oriented_path


def _realize_path(g: LabeledGraph, classes: list[tuple]) -> list[int]:
    """Concrete vertices v_i in classes[i] with v_i adjacent to v_{i+1}."""
    def extend(path):
        i = len(path)
        if i == len(classes):
            return path
        options = classes[i] if i == 0 else [v for v in classes[i] if v in g.neighbors(path[-1])]
        for v in sorted(options):
            out = extend(path + [v])
            if out:
                return out
        return None

    found = extend([])
    if found is None:
        raise ContractError("quotient path has no concrete realization")
    return found


def compile_long_quotient_path(f, g: LabeledGraph) -> CompiledSystem:
    """Two robots run the oriented-path algorithm on a path of pairwise
    inequivalent vertices of ``g``."""
    f = as_function(f)
    op = compile_oriented_path(f)
    length = 2 * op.info["width"]
    q = quotient_graph(g)
    qpath = longest_quotient_path(g, length - 1)
    if len(qpath) < length:
        raise PreconditionError(
            f"need a quotient path on {length} classes, the longest has {len(qpath)}")
    verts = _realize_path(g, [q.classes[i] for i in qpath])
    pos_of_class = {cls: i for i, cls in enumerate(qpath)}
    space = ConfigSpace(g, 2)
    phi = {}
    for oc, x in op.phi.items():
        c = space.canonicalize([verts[p] for p in oc])
        if c in phi and phi[c] != x:
            raise ContractError(f"two path configurations collapse onto {fmt_config(c)}")
        phi[c] = x

    def rule(c):
        try:
            pos = [pos_of_class[q.class_of[u]] for u in c]
        except KeyError:
            return None
        oc = tuple(sorted(pos))
        ch = op.algorithm.choice(oc)
        moves = {}
        for u, p in zip(c, pos):
            (p2,) = ch.get(frozenset((p,)), frozenset((p,)))
            if p2 != p:
                cand = sorted(v for v in g.neighbors(u) if q.class_of[v] == qpath[p2])
                if not cand:
                    raise ContractError(f"vertex {u} has no neighbour in the next path class")
                moves[u] = cand[0]
        return choice_from_moves(space, c, moves)

    alg = materialize(space, rule, phi)
    info = dict(op.info, compiler="long_quotient_path", path=tuple(verts))
    return CompiledSystem(space, alg, phi, f, info)


def shortest_cycle(g: LabeledGraph) -> list[int] | None:
    """Vertices of a shortest cycle in order, or None for forests."""
    best = None
    for u, v in sorted(g.edges):
        prev = {u: None}
        dq = deque([u])
        while dq and v not in prev:
            x = dq.popleft()
            for y in sorted(g.neighbors(x)):
                if (x, y) in ((u, v), (v, u)) or y in prev:
                    continue
                prev[y] = x
                dq.append(y)
        if v in prev:
            path, x = [], v
            while x is not None:
                path.append(x)
                x = prev[x]
            if best is None or len(path) < len(best):
                best = path[::-1]
    return best


def compile_large_girth(f, g: LabeledGraph) -> CompiledSystem:
    """Three robots on a shortest cycle: one anchor stays put, the other two
    sit 2w + p vertices away from it and replay the oriented-path walk."""
    f = as_function(f)
    op = compile_oriented_path(f)
    w = op.info["width"]
    gi = girth(g)
    if gi == math.inf or gi < 8 * w:
        raise PreconditionError(f"girth {gi} is below the required {8 * w}")
    cyc = shortest_cycle(g)
    space = ConfigSpace(g, 3)
    arrangement, phi = {}, {}

    def place(oc):
        return [cyc[0]] + [cyc[2 * w + p] for p in oc]

    for oc, x in op.phi.items():
        c = space.canonicalize(place(oc))
        if c in arrangement and arrangement[c] != oc:
            raise ContractError(f"two layouts collapse onto {fmt_config(c)}")
        arrangement[c] = oc
        phi[c] = x

    def rule(c):
        oc = arrangement.get(c)
        if oc is None:
            return None
        alpha = space.transporter(place(oc))
        ch = op.algorithm.choice(oc)
        moves, after = {}, []
        for p in oc:
            (p2,) = ch.get(frozenset((p,)), frozenset((p,)))
            after.append(p2)
            if p2 != p:
                moves[alpha[cyc[2 * w + p]]] = alpha[cyc[2 * w + p2]]
        choice = choice_from_moves(space, c, moves)
        goal = space.canonicalize(place(sorted(after)))
        if step(space, c, choice) != {goal}:
            raise ContractError(f"move at {fmt_config(c)} is not forced along the cycle")
        return choice

    alg = materialize(space, rule, phi)
    info = dict(op.info, compiler="large_girth", cycle=len(cyc))
    return CompiledSystem(space, alg, phi, f, info)
