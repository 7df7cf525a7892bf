"""Configuration spaces of k indistinguishable robots on a labeled graph.

A configuration is represented by its canonical arrangement: the sorted tuple
of robot positions that is lexicographically least among all images under
graph automorphisms.  Robot permutations only reorder positions, so sorting
absorbs them.  Equality of configurations is therefore tuple equality, and a
:class:`ConfigSpace` plays the role of the graph/k reference.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .errors import PreconditionError, ResourceLimitError, budget
from .graph import LabeledGraph, automorphism_group, build_family, orbits

Config = tuple  # sorted tuple of vertex indices, length k

MAX_ROBOTS = budget("max_robots", 64)
MAX_ARRANGEMENTS = budget("max_arrangements", 3_000_000)


def fmt_config(c: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in c) + ")"


def parse_config(text: str) -> Config:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"not a configuration: {text!r}")
    body = text[1:-1].strip()
    return tuple(sorted(int(x) for x in body.split(","))) if body else ()


class ConfigSpace:
    """The configuration space C(G, k) with cached canonical forms and classes."""

    def __init__(self, graph: LabeledGraph, k: int):
        if k < 1:
            raise PreconditionError("need at least one robot")
        if k > MAX_ROBOTS:
            raise ResourceLimitError(f"at most {MAX_ROBOTS} robots supported")
        self.graph = graph
        self.k = k
        self.group = automorphism_group(graph)
        self.trivial = len(self.group) == 1
        self.vertex_orbits = orbits(graph.n, self.group)
        self._orbit_min = [0] * graph.n
        for orb in self.vertex_orbits:
            for v in orb:
                self._orbit_min[v] = orb[0]
        self._canon: dict = {}
        self._classes: dict = {}

    def __repr__(self):
        return f"ConfigSpace({self.graph!r}, k={self.k})"

    def __eq__(self, other):
        return isinstance(other, ConfigSpace) and self.graph == other.graph and self.k == other.k

    def __hash__(self):
        return hash((self.graph, self.k))

    # -- canonical forms -------------------------------------------------

    def canonicalize(self, arrangement: Iterable[int]) -> Config:
        a = tuple(sorted(arrangement))
        if len(a) != self.k:
            raise PreconditionError(f"arrangement has {len(a)} robots, space has {self.k}")
        if self.trivial:
            return a
        hit = self._canon.get(a)
        if hit is not None:
            return hit
        if self.k == 1:
            best = (self._orbit_min[a[0]],)
        else:
            best = min(tuple(sorted(p[v] for v in a)) for p in self.group)
        self._canon[a] = best
        return best

    def transporter(self, arrangement: Iterable[int]) -> tuple:
        """An automorphism mapping ``arrangement`` onto its canonical form."""
        a = tuple(sorted(arrangement))
        c = self.canonicalize(a)
        for p in self.group:
            if tuple(sorted(p[v] for v in a)) == c:
                return p
        raise AssertionError("canonical form not attained")

    def stabilizer(self, c: Config) -> list:
        if self.trivial:
            return [self.group[0]]
        return [p for p in self.group if tuple(sorted(p[v] for v in c)) == c]

    # -- classes ---------------------------------------------------------

    def vertex_classes(self, c: Config) -> tuple[frozenset, ...]:
        """Orbits of the stabilizer of ``c`` on the vertices."""
        hit = self._classes.get(c)
        if hit is None:
            if self.trivial:
                hit = tuple(frozenset((v,)) for v in range(self.graph.n))
            else:
                hit = tuple(frozenset(o) for o in orbits(self.graph.n, self.stabilizer(c)))
            self._classes[c] = hit
        return hit

    def class_of(self, c: Config, v: int) -> frozenset:
        if self.trivial:
            return frozenset((v,))
        for cls in self.vertex_classes(c):
            if v in cls:
                return cls
        raise KeyError(v)

    def occupied_classes(self, c: Config) -> list[frozenset]:
        occ = set(c)
        return [cls for cls in self.vertex_classes(c) if cls & occ] if not self.trivial \
            else [frozenset((v,)) for v in sorted(occ)]

    def robot_classes(self, c: Config) -> list[tuple[int, ...]]:
        """Robots are indexed by position in the canonical tuple."""
        groups: dict = {}
        for r, v in enumerate(c):
            groups.setdefault(min(self.class_of(c, v)), []).append(r)
        return [tuple(g) for _, g in sorted(groups.items())]

    # -- enumeration -----------------------------------------------------

    def enumerate(self) -> list[Config]:
        total = math.comb(self.graph.n + self.k - 1, self.k)
        if total > MAX_ARRANGEMENTS:
            raise ResourceLimitError(
                f"{total} multisets exceed the enumeration budget {MAX_ARRANGEMENTS}")
        out = []
        for a in combinations_with_replacement(range(self.graph.n), self.k):
            if self.canonicalize(a) == a:
                out.append(a)
        return out

    def __iter__(self):
        return iter(self.enumerate())


def canonicalize(g: LabeledGraph, arrangement: Sequence[int]) -> Config:
    return ConfigSpace(g, len(arrangement)).canonicalize(arrangement)


def enumerate_space(g: LabeledGraph, k: int) -> list[Config]:
    return ConfigSpace(g, k).enumerate()


def family_space(family: str, n: int, k: int) -> ConfigSpace:
    return ConfigSpace(build_family(family, n), k)


# --------------------------------------------------------------------------
# closed-form counts

def totient(m: int) -> int:
    result, p, x = m, 2, m
    while p * p <= x:
        if x % p == 0:
            while x % p == 0:
                x //= p
            result -= result // p
        p += 1
    if x > 1:
        result -= result // x
    return result


def _multisets_fixed(cycle_lengths: Sequence[int], k: int) -> int:
    """Number of size-k multisets fixed by a permutation with these cycle
    lengths: the x^k coefficient of prod 1/(1 - x^len)."""
    coef = [1] + [0] * k
    for length in cycle_lengths:
        for i in range(length, k + 1):
            coef[i] += coef[i - length]
    return coef[k]


def _reflection_cycles(n: int, fixed: int) -> list[int]:
    return [1] * fixed + [2] * ((n - fixed) // 2)


def closed_form_count(family: str, n: int, k: int) -> int:
    """|C(G, k)| for the path and ring families without enumeration.

    OP is the binomial count, OR the necklace formula with Euler's totient,
    and UP/UR the exact Burnside averages over the reflection and dihedral
    groups.
    """
    if n < 1 or k < 1:
        raise PreconditionError("n and k must be positive")
    if family == "OP":
        return math.comb(n + k - 1, k)
    if family == "OR":
        total = sum(totient(d) * math.comb((n + k) // d, k // d)
                    for d in range(1, math.gcd(k, n) + 1) if math.gcd(k, n) % d == 0)
        value = Fraction(total, n + k)
        assert value.denominator == 1
        return int(value)
    if family == "UP":
        if n == 1:
            return 1
        fix = _multisets_fixed(_reflection_cycles(n, n % 2), k)
        return int(Fraction(math.comb(n + k - 1, k) + fix, 2))
    if family == "UR":
        if n <= 2:
            return math.comb(n + k - 1, k) if n == 1 else closed_form_count("UP", 2, k)
        total = 0
        for r in range(n):
            g = math.gcd(r, n)
            total += _multisets_fixed([n // g] * g, k)
        if n % 2:
            total += n * _multisets_fixed(_reflection_cycles(n, 1), k)
        else:
            total += (n // 2) * _multisets_fixed(_reflection_cycles(n, 2), k)
            total += (n // 2) * _multisets_fixed(_reflection_cycles(n, 0), k)
        value = Fraction(total, 2 * n)
        assert value.denominator == 1
        return int(value)
    raise PreconditionError(f"no closed form for family {family!r}")
