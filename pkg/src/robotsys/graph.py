"""Labeled graphs, automorphism groups, quotients and the network families.

Vertices are ``0..n-1``.  A graph stores its undirected base edges as sorted
pairs and one non-negative label per ordered pair over an edge.  Graphs built
from a function (``function_network``) carry *directed semantics*: a robot on
``x`` may only stay or move to ``f(x)``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError, ResourceLimitError, budget

Perm = tuple  # vertex permutation as a tuple: perm[v] is the image of v

MAX_AUT_VERTICES = budget("max_aut_vertices", 256)
MAX_GROUP_SIZE = budget("max_group_size", 200_000)
MAX_PATH_SEARCH = budget("max_path_search", 2_000_000)


class LabeledGraph:
    """Immutable port-labeled graph."""

    __slots__ = ("n", "edges", "labels", "succ", "_adj", "_aut", "_key")

    def __init__(self, n: int, labels: Mapping[tuple[int, int], int],
                 succ: Sequence[int] | None = None):
        if n < 0:
            raise PreconditionError("vertex count must be non-negative")
        edges = set()
        lab = {}
        for (u, v), x in labels.items():
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u},{v}) out of range")
            if int(x) < 0:
                raise PreconditionError(f"negative label on ({u},{v})")
            edges.add((min(u, v), max(u, v)))
            lab[(u, v)] = int(x)
        for u, v in edges:
            if (u, v) not in lab or (v, u) not in lab:
                raise PreconditionError(f"edge {{{u},{v}}} needs a label in both directions")
        adj = [set() for _ in range(n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "labels", dict(lab))
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))
        if succ is not None:
            succ = tuple(int(s) for s in succ)
            if len(succ) != n or any(not 0 <= s < n for s in succ):
                raise PreconditionError("successor table must be total on the vertices")
            for x, y in enumerate(succ):
                if x != y and (min(x, y), max(x, y)) not in edges:
                    raise PreconditionError(f"successor edge ({x},{y}) missing from base graph")
        object.__setattr__(self, "succ", succ)
        object.__setattr__(self, "_aut", None)
        object.__setattr__(self, "_key", (n, tuple(sorted(lab.items())), succ))

    def __setattr__(self, name, value):
        raise AttributeError("LabeledGraph is immutable")

    def __eq__(self, other):
        return isinstance(other, LabeledGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        kind = " directed-semantics" if self.directed else ""
        return f"LabeledGraph(n={self.n}, edges={len(self.edges)}{kind})"

    @property
    def directed(self) -> bool:
        return self.succ is not None

    def neighbors(self, u: int) -> frozenset:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def label(self, u: int, v: int) -> int:
        return self.labels[(u, v)]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def reach(self, u: int) -> frozenset:
        """Vertices a robot on ``u`` can occupy after one move (``u`` included)."""
        if self.succ is not None:
            return frozenset((u, self.succ[u]))
        return self._adj[u] | {u}


def reindex(g: LabeledGraph, perm: Sequence[int]) -> LabeledGraph:
    """Rename vertex ``v`` to ``perm[v]``."""
    labels = {(perm[u], perm[v]): x for (u, v), x in g.labels.items()}
    succ = None
    if g.succ is not None:
        succ = [0] * g.n
        for x, y in enumerate(g.succ):
            succ[perm[x]] = perm[y]
    return LabeledGraph(g.n, labels, succ)


# --------------------------------------------------------------------------
# automorphisms

def _refined_colors(g: LabeledGraph) -> list[int]:
    """Colour refinement using degrees and port labels; equal colours are
    necessary for two vertices to be exchanged by an automorphism."""
    colors = [0] * g.n
    while True:
        sigs = []
        for u in range(g.n):
            nb = sorted((g.label(u, v), g.label(v, u), colors[v]) for v in g.neighbors(u))
            sigs.append((colors[u], tuple(nb)))
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _search_order(g: LabeledGraph) -> list[int]:
    order, seen = [], [False] * g.n
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        q = deque([root])
        while q:
            u = q.popleft()
            order.append(u)
            for v in sorted(g.neighbors(u)):
                if not seen[v]:
                    seen[v] = True
                    q.append(v)
    return order


_AUT_CACHE: dict = {}


def automorphism_group(g: LabeledGraph) -> list[Perm]:
    """All label- and adjacency-preserving vertex permutations.

    Exhaustive backtracking, pruned by refined colours and by checking each new
    assignment against every earlier one.  The identity comes first; the result
    is cached on the graph.  Directed-semantics networks are treated as having
    only the identity, since their labels name every vertex.

    Raises ResourceLimitError past ``ROBOTSYS_MAX_AUT_VERTICES`` vertices (256)
    or ``ROBOTSYS_MAX_GROUP_SIZE`` elements (200000), unless colour refinement
    already separates every vertex.
    """
    if g._aut is not None:
        return g._aut
    hit = _AUT_CACHE.get(g._key)
    if hit is not None:
        object.__setattr__(g, "_aut", hit)
        return hit
    n = g.n
    colors = None if g.directed or n <= 1 else _refined_colors(g)
    if colors is None or len(set(colors)) == n:
        group = [tuple(range(n))]
        object.__setattr__(g, "_aut", group)
        return group
    if n > MAX_AUT_VERTICES:
        raise ResourceLimitError(f"automorphism search limited to {MAX_AUT_VERTICES} vertices, got {n}")
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    order = _search_order(g)
    image = [-1] * n
    used = [False] * n
    found: list[Perm] = []

    def consistent(v, w, depth):
        for x in order[:depth]:
            ax = image[x]
            if g.adjacent(v, x):
                if not g.adjacent(w, ax):
                    return False
                if g.label(v, x) != g.label(w, ax) or g.label(x, v) != g.label(ax, w):
                    return False
            elif g.adjacent(w, ax):
                return False
        return True

    def extend(depth):
        if depth == n:
            found.append(tuple(image))
            if len(found) > MAX_GROUP_SIZE:
                raise ResourceLimitError(f"automorphism group exceeds {MAX_GROUP_SIZE} elements")
            return
        v = order[depth]
        for w in by_color[colors[v]]:
            if used[w] or not consistent(v, w, depth):
                continue
            image[v] = w
            used[w] = True
            extend(depth + 1)
            used[w] = False
        image[v] = -1

    extend(0)
    found.sort(key=lambda p: p != tuple(range(n)))
    object.__setattr__(g, "_aut", found)
    if len(_AUT_CACHE) >= 64:
        _AUT_CACHE.pop(next(iter(_AUT_CACHE)))
    _AUT_CACHE[g._key] = found
    return found


def is_automorphism(g: LabeledGraph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(g.n)):
        return False
    for (u, v), x in g.labels.items():
        if (perm[u], perm[v]) not in g.labels or g.labels[(perm[u], perm[v])] != x:
            return False
    return True


def orbits(n: int, group: Iterable[Perm]) -> list[tuple[int, ...]]:
    """Orbits of a permutation group on ``range(n)``, each sorted, listed by least element.

    ``group`` must be the whole group (closed under composition), so the orbit
    of ``v`` is just its set of images.
    """
    group = list(group)
    seen = [False] * n
    out = []
    for v in range(n):
        if seen[v]:
            continue
        orb = sorted({p[v] for p in group})
        for x in orb:
            seen[x] = True
        out.append(tuple(orb))
    return out


@dataclass(frozen=True)
class QuotientGraph:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    edges: frozenset            # pairs (i, j), i <= j, of class indices
    labels: dict                # (i, j) -> frozenset of labels seen on that class pair

    def neighbors(self, i: int) -> list[int]:
        out = set()
        for a, b in self.edges:
            if a == i and b != i:
                out.add(b)
            elif b == i and a != i:
                out.add(a)
        return sorted(out)


def quotient_graph(g: LabeledGraph) -> QuotientGraph:
    classes = orbits(g.n, automorphism_group(g))
    class_of = [0] * g.n
    for i, c in enumerate(classes):
        for v in c:
            class_of[v] = i
    edges = set()
    labels: dict = {}
    for (u, v), x in g.labels.items():
        a, b = class_of[u], class_of[v]
        edges.add((min(a, b), max(a, b)))
        labels.setdefault((a, b), set()).add(x)
    return QuotientGraph(tuple(classes), tuple(class_of), frozenset(edges),
                         {k: frozenset(s) for k, s in labels.items()})


def girth(g: LabeledGraph) -> float:
    """Shortest cycle length of the base graph, ``math.inf`` for forests."""
    best = math.inf
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in g.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    q.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def longest_quotient_path(g: LabeledGraph, bound: int) -> list[int]:
    """A longest simple path (as quotient class indices) in the quotient base
    graph, stopping early once it has ``bound`` edges.

    Exhaustive DFS; raises ResourceLimitError after ``ROBOTSYS_MAX_PATH_SEARCH``
    expansions.
    """
    q = quotient_graph(g)
    m = len(q.classes)
    nbrs = [q.neighbors(i) for i in range(m)]
    best: list[int] = [0] if m else []
    steps = 0
    path: list[int] = []
    on_path = [False] * m

    class Done(Exception):
        pass

    def dfs(i):
        nonlocal best, steps
        steps += 1
        if steps > MAX_PATH_SEARCH:
            raise ResourceLimitError("quotient path search exceeded its budget")
        path.append(i)
        on_path[i] = True
        if len(path) > len(best):
            best = list(path)
            if len(best) - 1 >= bound:
                raise Done
        for j in nbrs[i]:
            if not on_path[j]:
                dfs(j)
        path.pop()
        on_path[i] = False

    try:
        for start in range(m):
            dfs(start)
    except Done:
        pass
    return best[: bound + 1]


def longest_quotient_subpath(g: LabeledGraph, bound: int) -> int:
    """Edge length of the longest simple path in the quotient graph, capped at ``bound``."""
    path = longest_quotient_path(g, bound)
    return max(0, len(path) - 1)


# --------------------------------------------------------------------------
# families

def oriented_path(n: int) -> LabeledGraph:
    _need(n >= 1, "path needs n >= 1")
    labels = {}
    for i in range(n - 1):
        labels[(i, i + 1)] = 1  # right
        labels[(i + 1, i)] = 0  # left
    return LabeledGraph(n, labels)


def unoriented_path(n: int) -> LabeledGraph:
    _need(n >= 1, "path needs n >= 1")
    labels = {}
    for i in range(n - 1):
        labels[(i, i + 1)] = labels[(i + 1, i)] = 0
    return LabeledGraph(n, labels)


def oriented_ring(n: int) -> LabeledGraph:
    _need(n >= 1, "ring needs n >= 1")
    labels = {}
    if n == 2:
        labels[(0, 1)] = labels[(1, 0)] = 1
    elif n >= 3:
        for i in range(n):
            labels[(i, (i + 1) % n)] = 1  # clockwise
            labels[((i + 1) % n, i)] = 0
    return LabeledGraph(n, labels)


def unoriented_ring(n: int) -> LabeledGraph:
    _need(n >= 1, "ring needs n >= 1")
    labels = {}
    if n >= 2:
        for i in range(n):
            j = (i + 1) % n
            if i != j:
                labels[(i, j)] = labels[(j, i)] = 0
    return LabeledGraph(n, labels)


def complete_with_danglers(n: int) -> LabeledGraph:
    """Unlabeled K_n whose core vertex ``i`` carries ``i`` pendant vertices.

    Core vertices are ``0..n-1``; pendants follow in order of their core vertex.
    """
    _need(n >= 1, "complete_with_danglers needs n >= 1")
    labels = {}
    for i in range(n):
        for j in range(i + 1, n):
            labels[(i, j)] = labels[(j, i)] = 0
    nxt = n
    for i in range(n):
        for _ in range(i):
            labels[(i, nxt)] = labels[(nxt, i)] = 0
            nxt += 1
    return LabeledGraph(nxt, labels)


def function_network(f: Sequence[int]) -> LabeledGraph:
    """The network induced by ``f``: base edges ``{x, f(x)}`` labeled by their
    endpoint, with directed movement semantics ``x -> f(x)``."""
    n = len(f)
    _need(n >= 1 and all(0 <= y < n for y in f), "function must be total on range(n)")
    labels = {}
    for x, y in enumerate(f):
        if x != y:
            labels[(x, y)] = y
            labels[(y, x)] = x
    return LabeledGraph(n, labels, succ=f)


FAMILIES = {
    "oriented_path": oriented_path,
    "unoriented_path": unoriented_path,
    "oriented_ring": oriented_ring,
    "unoriented_ring": unoriented_ring,
    "complete_with_danglers": complete_with_danglers,
    "function_network": function_network,
}

SHORT_NAMES = {"OP": "oriented_path", "UP": "unoriented_path",
               "OR": "oriented_ring", "UR": "unoriented_ring"}


def build_family(kind: str, *args, **kwargs) -> LabeledGraph:
    kind = SHORT_NAMES.get(kind, kind)
    if kind not in FAMILIES:
        raise PreconditionError(f"unknown family {kind!r}")
    return FAMILIES[kind](*args, **kwargs)


def _need(cond, msg):
    if not cond:
        raise PreconditionError(msg)
