"""Simulation between robot systems and the function-computation verifier.

A :class:`CompiledSystem` is a robot system (space + algorithm) together with
an explicit partial map ``phi`` from its configurations to the configurations
of the system it simulates, or to ``range(n)`` when it computes a function.

Compliance is checked on the finite step relation reachable from the
configurations where ``phi`` is defined:

(a) ``phi`` is defined on everything reachable;
(b) every step keeps the projection or moves it to its unique simulated
    successor;
(c) no cycle consists only of projection-preserving steps, unless the
    projected value is a fixed point of the simulated dynamics.

Together these are equivalent to every execution admitting a weakly
increasing surjective reindexing onto the simulated execution.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Hashable, Iterable

from .dynamics import (Algorithm, build_configuration_graph, choice_from_moves,
                       deterministic_choice, materialize, step, targets)
from .errors import ContractError, NondeterministicStepError, PreconditionError
from .functions import FunctionSpec, as_function
from .graph import function_network, oriented_path, unoriented_path, oriented_ring, unoriented_ring
from .space import ConfigSpace, fmt_config


@dataclass
class CompiledSystem:
    """A robot system plus its interpretation map.

    ``target`` is a :class:`FunctionSpec`, another CompiledSystem whose
    configurations ``phi`` maps into, or None for a bare system (``phi`` is the
    identity).
    """
    space: ConfigSpace
    algorithm: Algorithm
    phi: dict
    target: object = None
    info: dict = field(default_factory=dict)

    @property
    def graph(self):
        return self.space.graph

    @property
    def k(self) -> int:
        return self.space.k

    def describe(self) -> str:
        if isinstance(self.target, FunctionSpec):
            return f"function {self.target}"
        if isinstance(self.target, CompiledSystem):
            return f"system n={self.target.graph.n} k={self.target.k}"
        return "self"


def native(space: ConfigSpace, algorithm: Algorithm) -> CompiledSystem:
    """A system simulating itself through the identity map."""
    return CompiledSystem(space, algorithm, {c: c for c in space.enumerate()}, None)


def compose(outer: CompiledSystem, inner: CompiledSystem) -> CompiledSystem:
    """``outer`` simulates ``inner``; the result maps straight to ``inner``'s target."""
    if outer.target is not inner:
        raise PreconditionError("outer system does not simulate the given inner system")
    phi = {c: inner.phi[x] for c, x in outer.phi.items() if x in inner.phi}
    info = dict(inner.info)
    info.update(outer.info)
    return CompiledSystem(outer.space, outer.algorithm, phi, inner.target, info)


def flatten(sim: CompiledSystem) -> CompiledSystem:
    while isinstance(sim.target, CompiledSystem) and sim.target.target is not None:
        sim = compose(sim, sim.target)
    return sim


# --------------------------------------------------------------------------
# verification

@dataclass
class Certificate:
    verdict: bool
    condition: str | None = None          # 'a', 'b', 'c', 'surjective' or 'precondition'
    detail: str = ""
    counterexample: list = field(default_factory=list)
    starts: int = 0
    reachable: int = 0
    advancing: int = 0
    holding: int = 0
    per_start: list = field(default_factory=list)   # (start, reachable count, max holds before advance)
    warnings: list = field(default_factory=list)
    step_kind: dict = field(default_factory=dict)   # (c, d) -> 'hold' | 'advance'

    def __bool__(self):
        return self.verdict

    def report(self) -> str:
        lines = [f"verdict: {'PASS' if self.verdict else 'FAIL'}"]
        if not self.verdict:
            lines.append(f"failed_condition: {self.condition}")
            lines.append(f"detail: {self.detail}")
            if self.counterexample:
                lines.append("counterexample: " + " -> ".join(_fmt(x) for x in self.counterexample))
        lines += [f"starts: {self.starts}", f"reachable: {self.reachable}",
                  f"advancing_steps: {self.advancing}", f"holding_steps: {self.holding}"]
        for s, r, h in self.per_start:
            lines.append(f"start {_fmt(s)}: reachable={r} max_holds={h}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def _fmt(x) -> str:
    return fmt_config(x) if isinstance(x, tuple) else str(x)


def check_compliance(space: ConfigSpace, algorithm: Algorithm, phi: dict,
                     succ: Callable[[Hashable], Hashable], domain: Iterable,
                     per_start_limit: int = 2000) -> Certificate:
    """Core verifier; ``succ`` is the deterministic simulated step."""
    domain = list(domain)
    image = set(phi.values())
    missing = [x for x in domain if x not in image]
    if missing:
        return Certificate(False, "surjective", f"no preimage for {_fmt(missing[0])}",
                           [missing[0]])
    starts = sorted(phi)
    rel: dict = {}
    parent: dict = {s: None for s in starts}
    queue = deque(starts)
    succ_cache: dict = {}

    def simulated_next(x):
        if x not in succ_cache:
            succ_cache[x] = succ(x)
        return succ_cache[x]

    def trail(c):
        out = []
        while c is not None:
            out.append(c)
            c = parent[c]
        return out[::-1]

    cert = Certificate(True, starts=len(starts))
    try:
        while queue:
            c = queue.popleft()
            outs = algorithm.step(c)
            rel[c] = outs
            x = phi[c]
            nx = simulated_next(x)
            for d in sorted(outs):
                if d not in phi:
                    return Certificate(False, "a", f"phi undefined on {fmt_config(d)} reached from {fmt_config(c)}",
                                       trail(c) + [d], starts=len(starts))
                y = phi[d]
                if y == nx and y != x:
                    cert.advancing += 1
                    cert.step_kind[(c, d)] = "advance"
                elif y == x:
                    cert.holding += 1
                    cert.step_kind[(c, d)] = "hold"
                else:
                    return Certificate(
                        False, "b",
                        f"step {fmt_config(c)} -> {fmt_config(d)} projects {_fmt(x)} -> {_fmt(y)}, "
                        f"expected {_fmt(x)} or {_fmt(nx)}", trail(c) + [d], starts=len(starts))
                if d not in parent:
                    parent[d] = c
                    queue.append(d)
    except NondeterministicStepError as exc:
        return Certificate(False, "precondition", f"simulated system is not deterministic: {exc}",
                           starts=len(starts))
    cert.reachable = len(rel)

    # (c): cycles of holding steps at non-fixed projected values
    hold = {c: [d for d in outs if phi[d] == phi[c] and simulated_next(phi[c]) != phi[c]]
            for c, outs in rel.items()}
    cyc = _find_cycle(hold)
    if cyc:
        return Certificate(False, "c",
                           f"execution can hold at {_fmt(phi[cyc[0]])} forever without advancing",
                           cyc + [cyc[0]], starts=len(starts), reachable=len(rel),
                           advancing=cert.advancing, holding=cert.holding)

    # longest run of holds before an advance, per start (acyclic now)
    depth: dict = {}

    def longest(c):
        stack = [(c, iter(hold[c]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                depth[node] = 1 + max((depth[d] for d in hold[node]), default=-1) if hold[node] else 0
                stack.pop()
                continue
            if nxt not in depth:
                stack.append((nxt, iter(hold[nxt])))
        return depth[c]

    for s in starts[:per_start_limit]:
        seen = {s}
        q = deque([s])
        while q:
            c = q.popleft()
            for d in rel[c]:
                if d not in seen:
                    seen.add(d)
                    q.append(d)
        cert.per_start.append((s, len(seen), longest(s)))
    unused = [c for c in algorithm.table if c not in rel]
    if unused:
        cert.warnings.append(f"{len(unused)} algorithm entries are unreachable from phi-defined starts")
    return cert


def _find_cycle(succs: dict) -> list | None:
    color: dict = {}
    for root in succs:
        if root in color:
            continue
        color[root] = 1
        stack = [(root, iter(succs[root]))]
        path = [root]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                path.pop()
                continue
            if color.get(nxt) == 1:
                return path[path.index(nxt):]
            if nxt not in color:
                color[nxt] = 1
                stack.append((nxt, iter(succs[nxt])))
                path.append(nxt)
    return None


def verify_simulation(sim: CompiledSystem, simulated: Algorithm | CompiledSystem | None = None) -> Certificate:
    """Check that ``sim`` simulates a deterministic algorithm through ``sim.phi``."""
    if simulated is None:
        simulated = sim.target
    if isinstance(simulated, CompiledSystem):
        simulated = simulated.algorithm
    if isinstance(simulated, FunctionSpec):
        return verify_function_computation(sim, simulated)
    domain = simulated.space.enumerate()
    return check_compliance(sim.space, sim.algorithm, sim.phi, simulated.successor, domain)


def function_algorithm(f) -> Algorithm:
    """The one-robot algorithm moving x to f(x) on the induced network."""
    f = as_function(f)
    space = ConfigSpace(function_network(f.table), 1)
    return Algorithm(space, {(x,): choice_from_moves(space, (x,), {x: f(x)}) for x in range(f.n)})


def verify_function_computation(sim: CompiledSystem, f) -> Certificate:
    """Check that ``sim`` simulates the induced single-robot algorithm of ``f``;
    ``phi`` values are elements of range(n)."""
    f = as_function(f)
    if any(not isinstance(x, int) or not 0 <= x < f.n for x in sim.phi.values()):
        return Certificate(False, "precondition", "phi must map into range(n)")
    a_f = function_algorithm(f)
    return check_compliance(sim.space, sim.algorithm, sim.phi,
                            lambda x: a_f.successor((x,))[0], range(f.n))


def unrolled_compliance(space: ConfigSpace, algorithm: Algorithm, phi: dict, succ, domain) -> bool:
    """Independent check by walking executions: every path from a phi-defined
    start must project onto hold/advance steps, and no path may hold at a
    non-fixed value for more steps than there are reachable configurations."""
    if set(domain) - set(phi.values()):
        return False
    reach = set()
    q = deque(phi)
    reach.update(phi)
    while q:
        c = q.popleft()
        for d in algorithm.step(c):
            if d not in reach:
                reach.add(d)
                q.append(d)
    limit = len(reach)
    seen = set()
    stack = [(s, 0) for s in phi]
    while stack:
        c, held = stack.pop()
        if (c, held) in seen:
            continue
        seen.add((c, held))
        x = phi[c]
        nx = succ(x)
        for d in algorithm.step(c):
            if d not in phi:
                return False
            y = phi[d]
            if y == x and nx != x:
                if held + 1 > limit:
                    return False
                stack.append((d, held + 1))
            elif y == nx:
                stack.append((d, 0))
            else:
                return False
    return True


# --------------------------------------------------------------------------
# lifts

def _pick_target(space: ConfigSpace, u: int, dest: frozenset) -> int:
    return targets(space, u, dest)[0]


def lift_one_to_k(base: CompiledSystem, k: int) -> CompiledSystem:
    """Every robot plays the single base robot; used configurations put all
    robots on pairwise equivalent vertices."""
    if base.k != 1:
        raise PreconditionError("base must be a one-robot system")
    if k < 1:
        raise PreconditionError("k must be positive")
    if k == 1:
        return CompiledSystem(base.space, base.algorithm, {c: c for c in base.space.enumerate()}, base)
    g = base.graph
    space = ConfigSpace(g, k)
    orbit_of = {}
    for orb in space.vertex_orbits:
        for v in orb:
            orbit_of[v] = orb
    phi = {}
    for (v,) in base.space.enumerate():
        for arr in combinations_with_replacement(orbit_of[v], k):
            phi[space.canonicalize(arr)] = (v,)

    def rule(c):
        if c not in phi:
            return None
        (v0,) = phi[c]
        ch = base.algorithm.choice((v0,))
        cls0 = base.space.class_of((v0,), v0)
        t0 = _pick_target(base.space, v0, ch.get(cls0, cls0))
        moves = {}
        for u in set(c):
            alpha = next(p for p in space.group if p[v0] == u)
            moves[u] = alpha[t0]
        return choice_from_moves(space, c, moves)

    alg = materialize(space, rule, phi)
    return CompiledSystem(space, alg, phi, base, {"lift": "one_to_k"})


def is_deterministic_system(space: ConfigSpace) -> bool:
    return build_configuration_graph(space).is_deterministic


def lift_k_to_many(base: CompiledSystem, k2: int) -> CompiledSystem:
    """A heavy pile of at least k2-k+1 robots carries one base robot; removing
    k2-k robots from it recovers the base configuration."""
    k = base.k
    if k2 < 2 * k:
        raise PreconditionError(f"need k' >= 2k, got k'={k2}, k={k}")
    space = ConfigSpace(base.graph, k2)
    if not is_deterministic_system(space):
        raise PreconditionError(f"target system with {k2} robots is not deterministic")
    extra = k2 - k
    phi = {}
    for b in base.space.enumerate():
        for v in set(b):
            phi[space.canonicalize(b + (v,) * extra)] = b

    def rule(c):
        if c not in phi:
            return None
        counts = {v: c.count(v) for v in set(c)}
        heavy = [v for v, m in counts.items() if m >= extra + 1]
        if len(heavy) != 1:
            raise ContractError(f"{fmt_config(c)} has no unique heavy vertex")
        v = heavy[0]
        b_arr = list(c)
        for _ in range(extra):
            b_arr.remove(v)
        alpha = base.space.transporter(b_arr)
        inv = {alpha[x]: x for x in range(base.graph.n)}
        b = base.space.canonicalize(b_arr)
        ch = base.algorithm.choice(b)
        moves = {}
        for u in set(b_arr):
            x = alpha[u]
            cls = base.space.class_of(b, x)
            moves[u] = inv[_pick_target(base.space, x, ch.get(cls, cls))]
        goal = space.canonicalize([moves[u] for u in c])
        choice = choice_from_moves(space, c, moves)
        if step(space, c, choice) != {goal}:
            choice = deterministic_choice(space, c, goal)
            if choice is None:
                raise ContractError(f"no deterministic move {fmt_config(c)} -> {fmt_config(goal)}")
        return choice

    alg = materialize(space, rule, phi)
    return CompiledSystem(space, alg, phi, base, {"lift": "k_to_many"})


def _segment_lift(base: CompiledSystem, space: ConfigSpace, encode, decode, name: str) -> CompiledSystem:
    """Shared machinery for path/ring lifts: ``decode(c)`` returns a map from
    the working segment's vertices to base vertices plus the anchor set."""
    phi = {}
    for b in base.space.enumerate():
        phi[space.canonicalize(encode(b))] = b
    for c, b in list(phi.items()):
        dec = decode(c)
        if dec is None:
            raise ContractError(f"{name}: encoding of {fmt_config(b)} does not decode")

    def rule(c):
        dec = decode(c)
        if dec is None:
            return None
        seg, anchors = dec
        inv_seg = {p: u for u, p in seg.items()}
        b_arr = [seg[u] for u in c if u not in anchors]
        alpha = base.space.transporter(b_arr)
        alpha_inv = {alpha[x]: x for x in range(base.graph.n)}
        b = base.space.canonicalize(b_arr)
        ch = base.algorithm.choice(b)
        choice = {}
        for cls in space.occupied_classes(c):
            if cls <= anchors:
                choice[cls] = cls
                continue
            x = alpha[seg[min(cls & set(c))]]
            xcls = base.space.class_of(b, x)
            dest = ch.get(xcls, xcls)
            y = min(dest)
            choice[cls] = space.class_of(c, inv_seg[alpha_inv[y]])
        return choice

    alg = materialize(space, rule, phi)
    return CompiledSystem(space, alg, phi, base, {"lift": name})


def _base_path(base: CompiledSystem, oriented: bool) -> int:
    n = base.graph.n
    expected = oriented_path(n) if oriented else unoriented_path(n)
    if base.graph != expected:
        raise PreconditionError(f"base must be an {'oriented' if oriented else 'unoriented'} path")
    return n


def lift_path_ring(kind: str, base: CompiledSystem) -> CompiledSystem:
    """op_to_up: OP(n,k) -> UP(2n,k); op_to_or: OP(n,k) -> OR(2n,k+1);
    up_to_ur: UP(n,k) -> UR(3n-1,k+1)."""
    k = base.k
    if kind == "op_to_up":
        n = _base_path(base, True)
        space = ConfigSpace(unoriented_path(2 * n), k)
        seg = {p: p for p in range(n)}
        return _segment_lift(base, space, lambda b: list(b),
                             lambda c: (seg, frozenset()) if max(c) < n else None, kind)
    if kind not in ("op_to_or", "up_to_ur"):
        raise PreconditionError(f"unknown lift {kind!r}")
    if k < 2:
        raise PreconditionError(f"{kind} needs at least two simulated robots")
    if kind == "op_to_or":
        n = _base_path(base, True)
        size = 2 * n
        space = ConfigSpace(oriented_ring(size), k + 1)
        gaps = [(j,) for j in range(1, n)]
    else:
        n = _base_path(base, False)
        size = 3 * n - 1
        space = ConfigSpace(unoriented_ring(size), k + 1)
        gaps = [(j, -j) for j in range(1, n)]

    def encode(b):
        return [0] + [n + p for p in b]

    def decode(c):
        counts = {}
        for v in c:
            counts[v] = counts.get(v, 0) + 1
        found = []
        for r, m in counts.items():
            if m != 1:
                continue
            if all((r + d) % size not in counts for g in gaps for d in g):
                found.append(r)
        if len(found) != 1:
            return None
        r = found[0]
        seg = {(r + n + p) % size: p for p in range(n)}
        if any(v != r and v not in seg for v in c):
            return None
        return seg, frozenset((r,))

    return _segment_lift(base, space, encode, decode, kind)
