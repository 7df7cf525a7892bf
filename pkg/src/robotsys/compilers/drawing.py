"""Degree reduction of functional graphs and orthogonal grid drawings.

A reduced graph is again a functional graph ``succ`` on a larger vertex set
together with an ``owner`` map back to the original vertices.  Contracting
every vertex into its owner gives back the original function.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..errors import EmbeddingError, budget
from ..functions import FunctionSpec, as_function

MAX_DRAW_SEARCH = budget("max_draw_search", 200_000)
SEARCH_VERTICES = 8

Point = tuple  # (x, y)


def _neighbors(succ) -> list[set]:
    nb = [set() for _ in succ]
    for a, b in enumerate(succ):
        if a != b:
            nb[a].add(b)
            nb[b].add(a)
    return nb


@dataclass(frozen=True)
class DegreeReducedGraph:
    succ: tuple
    owner: tuple
    n: int
    ops: tuple = ()          # (kind, v, u, new vertex)

    @property
    def size(self) -> int:
        return len(self.succ)

    def degree(self, v: int) -> int:
        return len(_neighbors(self.succ)[v])

    def max_degree(self) -> int:
        return max((len(s) for s in _neighbors(self.succ)), default=0)

    def contract(self) -> tuple:
        """The function obtained by contracting every vertex into its owner."""
        out = []
        for x in range(self.n):
            seen, v = set(), x
            while self.owner[v] == x and v not in seen:
                seen.add(v)
                v = self.succ[v]
            out.append(self.owner[v] if self.owner[v] != x else x)
        return tuple(out)


def reduce_degree(f) -> DegreeReducedGraph:
    """Split vertices of degree above 3.

    A non-fixed vertex ``v`` with preimage ``u`` and image ``w`` is split by
    replacing u->v, v->w with u->v_u, v->v_u, v_u->w.  A fixed vertex has no
    outgoing edge to reroute, so two of its preimages u1, u2 are merged
    through a new vertex x: u1->x, u2->x, x->v.  Preimages are consumed in
    ascending order.
    """
    f = as_function(f)
    succ = list(f.table)
    owner = list(range(f.n))
    ops = []
    for v in range(f.n):
        while True:
            pre = sorted(a for a in range(len(succ)) if succ[a] == v and a != v)
            deg = len(pre) + (succ[v] != v)
            if deg <= 3:
                break
            new = len(succ)
            owner.append(v)
            if succ[v] != v:
                u = pre[0]
                succ.append(succ[v])
                succ[u] = new
                succ[v] = new
                ops.append(("split", v, u, new))
            else:
                u1, u2 = pre[0], pre[1]
                succ.append(v)
                succ[u1] = new
                succ[u2] = new
                ops.append(("merge", v, u1, new))
    return DegreeReducedGraph(tuple(succ), tuple(owner), f.n, tuple(ops))


# --------------------------------------------------------------------------
# drawings

@dataclass
class GridDrawing:
    """Vertices of ``graph`` placed on a width x width grid; ``routes[a]`` lists
    the interior grid points of the edge a -> succ[a] in walking order."""
    graph: DegreeReducedGraph
    width: int
    placement: dict
    routes: dict = field(default_factory=dict)

    def within_bound(self) -> bool:
        return self.width <= self.graph.n

    def points(self) -> dict:
        """Every drawn point with the vertex whose outgoing edge it carries."""
        out = {p: v for v, p in self.placement.items()}
        for a, pts in self.routes.items():
            for p in pts:
                out[p] = a
        return out

    def validate(self) -> None:
        g, w = self.graph, self.width
        if set(self.placement) != set(range(g.size)):
            raise EmbeddingError("not every vertex is placed")
        used = {}
        for v, p in self.placement.items():
            if not (0 <= p[0] < w and 0 <= p[1] < w):
                raise EmbeddingError(f"vertex {v} lies outside the grid")
            if p in used:
                raise EmbeddingError(f"vertices {used[p]} and {v} share a point")
            used[p] = v
        for a, b in enumerate(g.succ):
            if a == b:
                continue
            two_cycle = g.succ[b] == a
            pts = self.routes.get(a, [])
            if two_cycle and pts:
                raise EmbeddingError(f"edge {a}-{b} of a 2-cycle must have length 1")
            walk = [self.placement[a]] + list(pts) + [self.placement[b]]
            for p, q in zip(walk, walk[1:]):
                if abs(p[0] - q[0]) + abs(p[1] - q[1]) != 1:
                    raise EmbeddingError(f"route of edge {a}->{b} is not a grid path")
            for p in pts:
                if not (0 <= p[0] < w and 0 <= p[1] < w):
                    raise EmbeddingError(f"route of edge {a}->{b} leaves the grid")
                if p in used:
                    raise EmbeddingError(f"route of edge {a}->{b} crosses {used[p]}")
                used[p] = ("route", a)


def _search_drawing(g: DegreeReducedGraph, width: int) -> GridDrawing | None:
    """Backtracking over placements where every edge has length one."""
    nb = _neighbors(g.succ)
    order, seen = [], set()
    for s in range(g.size):
        if s in seen:
            continue
        seen.add(s)
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            for u in sorted(nb[v]):
                if u not in seen:
                    seen.add(u)
                    q.append(u)
    cells = [(x, y) for y in range(width) for x in range(width)]
    place: dict = {}
    taken: set = set()
    steps = 0

    def fits(v, p):
        for u in nb[v]:
            if u in place:
                q = place[u]
                if abs(p[0] - q[0]) + abs(p[1] - q[1]) != 1:
                    return False
        return True

    def go(i):
        nonlocal steps
        if i == len(order):
            return True
        steps += 1
        if steps > MAX_DRAW_SEARCH:
            return False
        v = order[i]
        anchors = [place[u] for u in nb[v] if u in place]
        if anchors:
            x, y = anchors[0]
            options = [(x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)]
            options = [p for p in options if 0 <= p[0] < width and 0 <= p[1] < width]
        else:
            options = cells
        for p in options:
            if p not in taken and fits(v, p):
                place[v] = p
                taken.add(p)
                if go(i + 1):
                    return True
                del place[v]
                taken.discard(p)
        return False

    if go(0):
        return GridDrawing(g, width, dict(place), {})
    return None


class _Block:
    """A drawn piece: ``cells`` maps points to vertices, ``routes`` edge
    interiors, ``root`` the point of the piece's top vertex."""

    def __init__(self):
        self.place: dict = {}
        self.routes: dict = {}
        self.width = 0
        self.height = 0
        self.root = (0, 0)

    def paste(self, other: "_Block", dx: int, dy: int) -> None:
        for v, (x, y) in other.place.items():
            self.place[v] = (x + dx, y + dy)
        for a, pts in other.routes.items():
            self.routes[a] = [(x + dx, y + dy) for x, y in pts]
        self.width = max(self.width, other.width + dx)
        self.height = max(self.height, other.height + dy)

    def mirrored(self) -> "_Block":
        out = _Block()
        w = self.width
        out.place = {v: (w - 1 - x, y) for v, (x, y) in self.place.items()}
        out.routes = {a: [(w - 1 - x, y) for x, y in pts] for a, pts in self.routes.items()}
        out.width, out.height = self.width, self.height
        out.root = (w - 1 - self.root[0], self.root[1])
        return out


def _tree_block(v: int, children: dict) -> _Block:
    """Root at the top-left corner; first child hangs straight below, the
    second sits to the right on the root's row."""
    blk = _Block()
    blk.place[v] = (0, 0)
    blk.width, blk.height = 1, 1
    kids = children.get(v, [])
    if len(kids) > 2:
        raise EmbeddingError(f"vertex {v} has too many children for a tree block")
    if kids:
        a = _tree_block(kids[0], children)
        blk.paste(a, 0, 1)
    if len(kids) > 1:
        b = _tree_block(kids[1], children)
        off = max(1, blk.width)
        blk.paste(b, off, 0)
        blk.routes[kids[1]] = [(x, 0) for x in range(off - 1, 0, -1)]
    return blk


def _hub_block(v: int, kids: list, children: dict, first_below: int | None = None) -> _Block:
    """A vertex with up to three hanging subtrees: below, right and left."""
    below = [first_below] if first_below is not None else []
    rest = [c for c in kids if c != first_below]
    below += rest[:1] if first_below is None else []
    rest = rest[1:] if first_below is None else rest
    if len(rest) > 2:
        raise EmbeddingError(f"vertex {v} has degree above 3")
    left = _tree_block(rest[1], children).mirrored() if len(rest) > 1 else None
    blk = _Block()
    x0 = left.width if left else 0
    if left:
        blk.paste(left, 0, 0)
    blk.place[v] = (x0, 0)
    blk.width, blk.height = max(blk.width, x0 + 1), max(blk.height, 1)
    if below:
        blk.paste(_tree_block(below[0], children), x0, 1)
    if rest:
        off = max(x0 + 1, blk.width)
        blk.paste(_tree_block(rest[0], children), off, 0)
        blk.routes[rest[0]] = [(x, 0) for x in range(off - 1, x0, -1)]
    blk.root = (x0, 0)
    return blk


def _component_blocks(g: DegreeReducedGraph) -> list[_Block]:
    succ = g.succ
    fs = FunctionSpec(succ)
    from ..functions import components
    children: dict = {}
    for a, b in enumerate(succ):
        if a != b:
            children.setdefault(b, []).append(a)
    for k in children:
        children[k].sort()
    blocks = []
    for cyc, _members in components(fs):
        on_cycle = set(cyc)
        tree_kids = {v: [c for c in children.get(v, []) if c not in on_cycle] for v in cyc}
        if len(cyc) == 1:
            blocks.append(_hub_block(cyc[0], tree_kids[cyc[0]], children))
        elif len(cyc) == 2:
            c0, c1 = cyc
            sub = dict(children)
            sub[c1] = tree_kids[c1]
            blocks.append(_hub_block(c0, [c1] + tree_kids[c0], sub, first_below=c1))
        else:
            blk = _Block()
            x = 0
            xs = []
            for v in cyc:
                if len(tree_kids[v]) > 1:
                    raise EmbeddingError(f"cycle vertex {v} has degree above 3")
                xs.append(x)
                blk.place[v] = (x, 1)
                blk.width, blk.height = max(blk.width, x + 1), max(blk.height, 2)
                if tree_kids[v]:
                    sub = _tree_block(tree_kids[v][0], children)
                    blk.paste(sub, x, 2)
                    x += sub.width
                else:
                    x += 1
            for i, v in enumerate(cyc[:-1]):
                blk.routes[v] = [(p, 1) for p in range(xs[i] + 1, xs[i + 1])]
            last = cyc[-1]
            blk.routes[last] = [(p, 0) for p in range(xs[-1], xs[0] - 1, -1)]
            blocks.append(blk)
    return blocks


def _constructive_drawing(g: DegreeReducedGraph) -> GridDrawing:
    whole = _Block()
    x = 0
    for blk in _component_blocks(g):
        whole.paste(blk, x, 0)
        x += blk.width
    width = max(whole.width, whole.height, 1)
    return GridDrawing(g, width, whole.place, whole.routes)


def grid_embed(g: DegreeReducedGraph, max_width: int | None = None) -> GridDrawing:
    """A valid drawing, searching for a small grid when the graph is tiny and
    falling back to a layered layout otherwise."""
    if g.max_degree() > 3:
        raise EmbeddingError("maximum degree must be at most 3")
    drawing = _constructive_drawing(g)
    if g.size <= SEARCH_VERTICES:
        lo = 1
        while lo * lo < g.size:
            lo += 1
        for w in range(lo, drawing.width):
            found = _search_drawing(g, w)
            if found is not None:
                drawing = found
                break
    drawing.validate()
    if max_width is not None and drawing.width > max_width:
        raise EmbeddingError(f"drawing needs width {drawing.width} > {max_width}")
    return drawing
