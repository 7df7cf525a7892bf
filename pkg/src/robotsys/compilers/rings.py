"""Compilers targeting rings and unoriented paths."""

from __future__ import annotations

from ..dynamics import Algorithm, deterministic_choice
from ..errors import ContractError
from ..functions import as_function, components
from ..graph import oriented_ring
from ..simulation import CompiledSystem, compose, lift_path_ring
from ..space import ConfigSpace
from .paths import compile_oriented_path


def zigzag(cycle: list) -> list[int]:
    """Offsets laying a cycle on a line with steps of size at most two:
    even positions going up, odd positions coming back down."""
    m = len(cycle)
    up = list(range(0, m, 2))
    down = [i for i in range(m - 1, 0, -1) if i % 2]
    order = up + down           # order[j] = offset of the j-th cycle vertex
    return order


def _rho_layouts(f) -> list[tuple[list, list]]:
    """(tail, cycle) pieces: one per leaf (tail runs leaf -> cycle entry) and
    one bare piece for each component without trees.  The cycle is rotated to
    start at the tail's entry point."""
    pieces = []
    has_pre = [False] * f.n
    for x in range(f.n):
        if f(x) != x:
            has_pre[f(x)] = True
    for cyc, members in components(f):
        on_cycle = set(cyc)
        leaves = sorted(x for x in members if x not in on_cycle and not has_pre[x])
        if not leaves:
            pieces.append(([], list(cyc)))
        for leaf in leaves:
            tail, x = [], leaf
            while x not in on_cycle:
                tail.append(x)
                x = f(x)
            i = cyc.index(x)
            pieces.append((tail, cyc[i:] + cyc[:i]))
    return pieces


def compile_oriented_ring(f) -> CompiledSystem:
    """Two robots on an oriented ring; the distance d between them walks the
    laid-out copies of each tail+cycle piece of the functional graph."""
    f = as_function(f)
    pieces = _rho_layouts(f)
    need = sum(len(t) + len(c) for t, c in pieces)
    m = 4 * f.n + 2
    while m // 2 - 2 < need:
        m *= 2
    space = ConfigSpace(oriented_ring(m), 2)
    value, nxt = {}, {}
    d = 1
    for tail, cyc in pieces:
        for j, x in enumerate(tail):
            value[d + j] = x
            nxt[d + j] = d + j + 1
        base = d + len(tail)
        offs = zigzag(cyc)
        for j, x in enumerate(cyc):
            value[base + offs[j]] = x
        for j in range(len(cyc)):
            here, there = base + offs[j], base + offs[(j + 1) % len(cyc)]
            if here != there:
                nxt[here] = there
        d = base + len(cyc)
    table, phi = {}, {}
    for pos, x in value.items():
        c = (0, pos)
        phi[c] = x
        if pos in nxt:
            ch = deterministic_choice(space, c, (0, nxt[pos]))
            if ch is None:
                raise ContractError(f"no deterministic move from distance {pos} to {nxt[pos]}")
            table[c] = ch
    info = {"compiler": "oriented_ring", "m": m, "pieces": len(pieces), "used": need}
    return CompiledSystem(space, Algorithm(space, table), phi, f, info)


def compile_unoriented(f, target: str = "UP") -> CompiledSystem:
    """Oriented-path compilation lifted to UP(4w, 2), and further to
    UR(12w-1, 3) for ``target="UR"``."""
    f = as_function(f)
    op = compile_oriented_path(f)
    up = lift_path_ring("op_to_up", op)
    if target == "UP":
        sim = compose(up, op)
    elif target == "UR":
        ur = lift_path_ring("up_to_ur", up)
        sim = compose(compose(ur, up), op)
    else:
        raise ValueError(f"target must be UP or UR, got {target!r}")
    sim.info.update({"compiler": f"unoriented_{target}", "width": op.info["width"]})
    return sim
