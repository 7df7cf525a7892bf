"""Finite functions on range(n) and the single-robot systems they induce."""

from __future__ import annotations

from random import Random
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

from .errors import PreconditionError


@dataclass(frozen=True)
class FunctionSpec:
    table: tuple

    def __post_init__(self):
        table = tuple(int(y) for y in self.table)
        n = len(table)
        if n < 1 or any(not 0 <= y < n for y in table):
            raise PreconditionError("a function must map range(n) into range(n), n >= 1")
        object.__setattr__(self, "table", table)

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __iter__(self):
        return iter(self.table)

    def __len__(self):
        return len(self.table)

    def __str__(self):
        return "[" + ",".join(map(str, self.table)) + "]"

    @classmethod
    def identity(cls, n: int) -> "FunctionSpec":
        return cls(tuple(range(n)))

    @classmethod
    def cycle(cls, m: int) -> "FunctionSpec":
        """The cyclic successor i -> i+1 (mod m)."""
        return cls(tuple((i + 1) % m for i in range(m)))

    @classmethod
    def constant(cls, n: int, value: int = 0) -> "FunctionSpec":
        return cls((value,) * n)

    @classmethod
    def random(cls, n: int, rng: Random) -> "FunctionSpec":
        return cls(tuple(rng.randrange(n) for _ in range(n)))

    def preimages(self, y: int) -> list[int]:
        return [x for x, fx in enumerate(self.table) if fx == y and x != y]

    def is_fixed(self, x: int) -> bool:
        return self.table[x] == x


def as_function(f) -> FunctionSpec:
    return f if isinstance(f, FunctionSpec) else FunctionSpec(tuple(f))


def all_functions(n: int) -> Iterator[FunctionSpec]:
    for t in product(range(n), repeat=n):
        yield FunctionSpec(t)


def components(f: FunctionSpec) -> list[tuple[list[int], set[int]]]:
    """Connected components of the functional graph as (cycle, members).

    The cycle is listed in iteration order starting from its least vertex.
    """
    n = f.n
    comp_of = [-1] * n
    comps = []
    for s in range(n):
        if comp_of[s] != -1:
            continue
        path, x = [], s
        while comp_of[x] == -1 and x not in path:
            path.append(x)
            x = f(x)
        if comp_of[x] == -1:
            cyc = path[path.index(x):]
            i = cyc.index(min(cyc))
            cyc = cyc[i:] + cyc[:i]
            comps.append((cyc, set(cyc)))
            cid = len(comps) - 1
        else:
            cid = comp_of[x]
        for y in path:
            comp_of[y] = cid
            comps[cid][1].add(y)
    return comps


def parse_table(values: Sequence[int]) -> FunctionSpec:
    return FunctionSpec(tuple(values))
