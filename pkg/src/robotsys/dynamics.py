"""Algorithms, the fully synchronous step relation and configuration graphs.

A *choice* at a configuration maps each occupied vertex class to a destination
class.  Under FSYNC every robot moves at once; when the destination class
offers several vertices within one hop the scheduler picks one per robot,
independently.  If the destination class contains the robot's own vertex the
robot stays (``resolution="nearest"``, the default); ``resolution="any"`` lets
the scheduler pick any class vertex within one hop, including a move.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations, product
from typing import Iterable, Mapping

from .errors import InadmissibleChoiceError, NondeterministicStepError, PreconditionError
from .graph import oriented_path
from .space import Config, ConfigSpace, fmt_config

Choice = Mapping  # frozenset (occupied class) -> frozenset (destination class)


def targets(space: ConfigSpace, u: int, dest: frozenset, resolution: str = "nearest") -> list[int]:
    """Vertices of ``dest`` the scheduler may send a robot on ``u`` to."""
    if resolution == "nearest" and u in dest:
        return [u]
    return sorted(space.graph.reach(u) & dest)


def stay_choice(space: ConfigSpace, c: Config) -> dict:
    return {cls: cls for cls in space.occupied_classes(c)}


def check_admissible(space: ConfigSpace, c: Config, choice: Choice) -> None:
    classes = set(space.vertex_classes(c))
    for src, dst in choice.items():
        if src not in classes or dst not in classes:
            raise InadmissibleChoiceError(f"{fmt_config(c)}: {sorted(src)}->{sorted(dst)} is not a class map")
        for u in src:
            if not (space.graph.reach(u) & dst):
                raise InadmissibleChoiceError(
                    f"{fmt_config(c)}: vertex {u} cannot reach class {sorted(dst)} in one hop")


def step(space: ConfigSpace, c: Config, choice: Choice | None = None,
         resolution: str = "nearest", check: bool = True) -> frozenset:
    """All configurations yielded from ``c`` when robots follow ``choice``.

    Classes missing from ``choice`` stay.  The outcome set is exhaustive over
    scheduler resolutions; robots sharing a vertex are enumerated as a
    multiset of targets.
    """
    if choice is None:
        choice = {}
    if check:
        check_admissible(space, c, choice)
    per_vertex = []
    counts: dict = {}
    for v in c:
        counts[v] = counts.get(v, 0) + 1
    for u, m in counts.items():
        cls = space.class_of(c, u)
        dest = choice.get(cls, cls)
        opts = targets(space, u, dest, resolution)
        if not opts:
            raise InadmissibleChoiceError(f"{fmt_config(c)}: robot on {u} has no target")
        if len(opts) == 1:
            per_vertex.append([(opts[0],) * m])
        else:
            per_vertex.append(list(combinations_with_replacement(opts, m)))
    out = set()
    for parts in product(*per_vertex):
        out.add(space.canonicalize([v for part in parts for v in part]))
    return frozenset(out)


def candidate_destinations(space: ConfigSpace, c: Config, cls: frozenset) -> list[frozenset]:
    out = []
    for dst in space.vertex_classes(c):
        if all(space.graph.reach(u) & dst for u in cls):
            out.append(dst)
    return out


def all_choices(space: ConfigSpace, c: Config) -> Iterable[dict]:
    occ = space.occupied_classes(c)
    cands = [candidate_destinations(space, c, cls) for cls in occ]
    for combo in product(*cands):
        yield dict(zip(occ, combo))


def choice_from_moves(space: ConfigSpace, c: Config, moves: Mapping[int, int]) -> dict:
    """Build a choice sending the class of each occupied vertex ``u`` to the
    class containing ``moves[u]`` (unlisted vertices stay).  The class of the
    first listed vertex of each class wins."""
    choice = {}
    for u in sorted(set(c)):
        cls = space.class_of(c, u)
        if cls in choice:
            continue
        t = moves.get(u, u)
        if t != u and t not in space.graph.reach(u):
            raise InadmissibleChoiceError(f"{fmt_config(c)}: {u}->{t} is not a one-hop move")
        choice[cls] = space.class_of(c, t)
    return choice


def deterministic_choice(space: ConfigSpace, c: Config, goal: Config) -> dict | None:
    """Some choice at ``c`` whose only outcome is ``goal``, or None."""
    for ch in all_choices(space, c):
        if step(space, c, ch, check=False) == {goal}:
            return ch
    return None


# --------------------------------------------------------------------------
# algorithms and executions

class Algorithm:
    """Extensional choice table; configurations without an entry stay put."""

    def __init__(self, space: ConfigSpace, table: Mapping | None = None):
        self.space = space
        self.table: dict = {c: dict(ch) for c, ch in (table or {}).items()}

    def choice(self, c: Config) -> dict:
        ch = self.table.get(c)
        return stay_choice(self.space, c) if ch is None else ch

    def step(self, c: Config, resolution: str = "nearest") -> frozenset:
        return step(self.space, c, self.choice(c), resolution)

    def successor(self, c: Config) -> Config:
        outs = self.step(c)
        if len(outs) != 1:
            raise NondeterministicStepError(
                f"{fmt_config(c)} has {len(outs)} possible successors")
        return next(iter(outs))

    def copy(self) -> "Algorithm":
        return Algorithm(self.space, self.table)

    def __len__(self):
        return len(self.table)


def materialize(space: ConfigSpace, rule, starts: Iterable[Config]) -> Algorithm:
    """Tabulate ``rule(c) -> choice | None`` on everything reachable from ``starts``."""
    alg = Algorithm(space)
    seen = set()
    queue = deque()
    for s in starts:
        if s not in seen:
            seen.add(s)
            queue.append(s)
    while queue:
        c = queue.popleft()
        ch = rule(c)
        if ch is not None:
            alg.table[c] = ch
        for d in alg.step(c):
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return alg


@dataclass
class Execution:
    prefix: list
    cycle: list

    def at(self, i: int) -> Config:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]


def run(algorithm: Algorithm, start: Config) -> Execution:
    """Iterate a deterministic algorithm until a configuration repeats."""
    seq, index = [], {}
    c = start
    while c not in index:
        index[c] = len(seq)
        seq.append(c)
        c = algorithm.successor(c)
    i = index[c]
    return Execution(seq[:i], seq[i:])


def execution_tree(algorithm: Algorithm, start: Config, depth: int) -> dict:
    """Reachable part of the step relation within ``depth`` steps of ``start``:
    a map from each expanded configuration to its outcome set."""
    rel = {}
    frontier = [start]
    seen = {start}
    for _ in range(depth):
        nxt = []
        for c in frontier:
            outs = algorithm.step(c)
            rel[c] = outs
            for d in outs:
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
        frontier = nxt
        if not frontier:
            break
    return rel


# --------------------------------------------------------------------------
# configuration graphs

@dataclass
class ConfigurationGraph:
    space: ConfigSpace
    nodes: list
    edges: set
    det_edges: set
    witness: dict = field(default_factory=dict)   # edge -> choice producing it

    def successors(self, c: Config, deterministic: bool = False) -> set:
        es = self.det_edges if deterministic else self.edges
        return {b for a, b in es if a == c}

    def non_loop(self, deterministic: bool = False) -> set:
        es = self.det_edges if deterministic else self.edges
        return {(a, b) for a, b in es if a != b}

    @property
    def is_deterministic(self) -> bool:
        return self.edges == self.det_edges


def build_configuration_graph(space: ConfigSpace, resolution: str = "nearest",
                              oracle: bool = False) -> ConfigurationGraph:
    """G(FS(G,k)) and its deterministic subgraph, by trying every choice at
    every configuration.  ``oracle=True`` evaluates each step with the
    all-arrangements yield check instead of the canonical arrangement."""
    nodes = space.enumerate()
    edges, det, witness = set(), set(), {}
    for c in nodes:
        for ch in all_choices(space, c):
            outs = yield_oracle(space, c, ch, resolution) if oracle else \
                step(space, c, ch, resolution, check=False)
            for d in outs:
                if (c, d) not in witness:
                    witness[(c, d)] = ch
                edges.add((c, d))
            if len(outs) == 1:
                det.add((c, next(iter(outs))))
    return ConfigurationGraph(space, nodes, edges, det, witness)


def yield_oracle(space: ConfigSpace, c: Config, choice: Choice,
                 resolution: str = "nearest") -> frozenset:
    """Configurations yielding from ``c``, checked against every arrangement
    in ``c`` rather than the canonical one.

    For each ordered arrangement ``a`` equivalent to ``c`` (via automorphism
    ``alpha``), the choice is transported along ``alpha`` and every per-robot
    resolution is enumerated; a configuration yields iff it is produced for
    every ``a``.  Exponential; meant for small spaces.
    """
    result = None
    seen = set()
    for alpha in space.group:
        image = [alpha[v] for v in c]
        moved = {frozenset(alpha[v] for v in s): frozenset(alpha[v] for v in choice.get(s, s))
                 for s in space.vertex_classes(c)}
        for a in set(permutations(image)):
            if a in seen:
                continue
            seen.add(a)
            opts = []
            for u in a:
                src = next(s for s in moved if u in s)
                opts.append(targets(space, u, moved[src], resolution))
            outs = {space.canonicalize(t) for t in product(*opts)}
            result = outs if result is None else result & outs
    return frozenset(result or ())


# --------------------------------------------------------------------------
# structural checks

def has_grid(cg: ConfigurationGraph, n: int) -> bool:
    """The block {(a1, a2): 0 <= a1 < n <= a2 < 2n} of G(OP(2n,2)) carries all
    grid moves as bidirectional deterministic edges, plus self-loops."""
    sp = cg.space
    if sp.k != 2 or sp.graph != oriented_path(2 * n):
        raise PreconditionError("has_grid is defined on OP(2n,2) only")
    block = {(a, b) for a in range(n) for b in range(n, 2 * n)}
    nodes = set(cg.nodes)
    for p in block:
        if p not in nodes or (p, p) not in cg.det_edges:
            return False
        a, b = p
        for q in ((a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)):
            if q in block and ((p, q) not in cg.det_edges or (q, p) not in cg.det_edges):
                return False
    return True


def path_components(cg: ConfigurationGraph) -> list[int] | None:
    """Sizes (descending) of the components if the non-loop edges form
    disjoint bidirectional paths, else None."""
    und: dict = {c: set() for c in cg.nodes}
    for a, b in cg.non_loop():
        if (b, a) not in cg.edges:
            return None
        und[a].add(b)
        und[b].add(a)
    sizes, seen = [], set()
    for s in cg.nodes:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in und[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        n_edges = sum(len(und[x]) for x in comp) // 2
        if n_edges != len(comp) - 1 or any(len(und[x]) > 2 for x in comp):
            return None
        sizes.append(len(comp))
    return sorted(sizes, reverse=True)


def is_path_union(cg: ConfigurationGraph) -> bool:
    sizes = path_components(cg)
    return sizes is not None and len(sizes) <= 2


def has_cycle_geq(cg: ConfigurationGraph, m: int, budget: int = 1_000_000) -> bool:
    """Whether some simple directed cycle of length >= m uses only non-loop edges.

    Exhaustive DFS over simple paths rooted at each cycle's least node.
    """
    succ: dict = {c: [] for c in cg.nodes}
    for a, b in cg.non_loop():
        succ[a].append(b)
    order = {c: i for i, c in enumerate(cg.nodes)}
    steps = 0
    for root in cg.nodes:
        r = order[root]
        stack = [(root, iter(succ[root]))]
        on_path = {root}
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                on_path.discard(node)
                continue
            steps += 1
            if steps > budget:
                raise PreconditionError("cycle search budget exhausted")
            if nxt == root:
                if len(stack) >= m:
                    return True
                continue
            if nxt in on_path or order[nxt] < r:
                continue
            on_path.add(nxt)
            stack.append((nxt, iter(succ[nxt])))
    return False


def structure_checks(cg: ConfigurationGraph, grid_n: int | None = None, cycle_m: int = 3) -> dict:
    report = {"is_path_union": is_path_union(cg),
              "path_components": path_components(cg),
              f"has_cycle_geq({cycle_m})": has_cycle_geq(cg, cycle_m),
              "deterministic": cg.is_deterministic}
    if grid_n is not None:
        report[f"has_grid({grid_n})"] = has_grid(cg, grid_n)
    return report


def to_dot(cg: ConfigurationGraph, deterministic: bool = False, self_loops: bool = False) -> str:
    """DOT text: solid arrows for deterministic edges, dashed for the rest."""
    lines = ["digraph G {", "  node [shape=circle];"]
    for c in cg.nodes:
        lines.append(f'  "{fmt_config(c)}";')
    edges = cg.det_edges if deterministic else cg.edges
    for a, b in sorted(edges):
        if a == b and not self_loops:
            continue
        style = "solid" if (a, b) in cg.det_edges else "dashed"
        lines.append(f'  "{fmt_config(a)}" -> "{fmt_config(b)}" [style={style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
