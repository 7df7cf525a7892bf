"""Text formats for graphs, functions and compiled systems.

Graph file::

    graph <n>
    e <u> <v> <label u->v> <label v->u>
    directed-semantics          (optional, followed by one line per vertex)
    s <x> <f(x)>

Function file::

    function <n>
    <x> <f(x)>                  (one line per x)

Algorithm table (one line per class of a tabulated configuration)::

    (<v0>,<v1>,...) {<class>} -> {<class>}

Phi table::

    (<v0>,...) -> <value>       value is an integer or a configuration

System meta file ``system.txt`` holds ``k <robots>`` and ``target <kind>``.
Blank lines and lines starting with ``#`` are ignored everywhere.
"""

from __future__ import annotations

import hashlib
import re
from pathlib import Path

from .dynamics import Algorithm
from .errors import FormatError
from .functions import FunctionSpec
from .graph import LabeledGraph
from .simulation import CompiledSystem
from .space import ConfigSpace, fmt_config, parse_config


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(parts, no):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(parts)!r}", no) from None


# -- graphs ------------------------------------------------------------------

def dump_graph(g: LabeledGraph) -> str:
    out = [f"graph {g.n}"]
    for u, v in sorted(g.edges):
        out.append(f"e {u} {v} {g.label(u, v)} {g.label(v, u)}")
    if g.succ is not None:
        out.append("directed-semantics")
        out += [f"s {x} {y}" for x, y in enumerate(g.succ)]
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> LabeledGraph:
    n = None
    labels, succ, directed = {}, {}, False
    for no, line in _lines(text):
        parts = line.split()
        head = parts[0]
        if head == "graph":
            if n is not None or len(parts) != 2:
                raise FormatError("expected a single 'graph <n>' header", no)
            (n,) = _ints(parts[1:], no)
        elif n is None:
            raise FormatError("file must start with 'graph <n>'", no)
        elif head == "e":
            if len(parts) != 5:
                raise FormatError("edge lines are 'e u v label_uv label_vu'", no)
            u, v, a, b = _ints(parts[1:], no)
            if (u, v) in labels:
                raise FormatError(f"duplicate edge {u} {v}", no)
            labels[(u, v)] = a
            labels[(v, u)] = b
        elif head == "directed-semantics" and len(parts) == 1:
            directed = True
        elif head == "s" and directed:
            if len(parts) != 3:
                raise FormatError("successor lines are 's x f(x)'", no)
            x, y = _ints(parts[1:], no)
            succ[x] = y
        else:
            raise FormatError(f"unrecognized line {line!r}", no)
    if n is None:
        raise FormatError("empty graph file", 1)
    table = None
    if directed:
        if sorted(succ) != list(range(n)):
            raise FormatError("directed semantics need one 's' line per vertex", 1)
        table = [succ[x] for x in range(n)]
    try:
        return LabeledGraph(n, labels, table)
    except Exception as exc:
        raise FormatError(str(exc), 1) from None


# -- functions ---------------------------------------------------------------

def dump_function(f: FunctionSpec) -> str:
    return f"function {f.n}\n" + "".join(f"{x} {y}\n" for x, y in enumerate(f.table))


def parse_function(text: str) -> FunctionSpec:
    n, table = None, {}
    for no, line in _lines(text):
        parts = line.split()
        if parts[0] == "function":
            if n is not None or len(parts) != 2:
                raise FormatError("expected a single 'function <n>' header", no)
            (n,) = _ints(parts[1:], no)
            continue
        if n is None:
            raise FormatError("file must start with 'function <n>'", no)
        if len(parts) != 2:
            raise FormatError("function lines are 'x f(x)'", no)
        x, y = _ints(parts, no)
        if x in table:
            raise FormatError(f"duplicate entry for {x}", no)
        if not (0 <= x < n and 0 <= y < n):
            raise FormatError(f"entry {x} {y} outside range({n})", no)
        table[x] = y
    if n is None or sorted(table) != list(range(n)):
        raise FormatError("function must list every element exactly once", 1)
    return FunctionSpec(tuple(table[x] for x in range(n)))


# -- algorithms and phi ---------------------------------------------------------

def _fmt_class(cls) -> str:
    return "{" + ",".join(str(v) for v in sorted(cls)) + "}"


def _parse_class(text: str, no: int) -> frozenset:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise FormatError(f"not a class: {text!r}", no)
    body = text[1:-1].strip()
    return frozenset(_ints(body.split(","), no)) if body else frozenset()


def _parse_cfg(text: str, no: int) -> tuple:
    try:
        return parse_config(text)
    except ValueError as exc:
        raise FormatError(str(exc), no) from None


_ALG_LINE = re.compile(r"^(\([^)]*\))\s+(\{[^}]*\})\s*->\s*(\{[^}]*\})$")
_PHI_LINE = re.compile(r"^(\([^)]*\))\s*->\s*(.+)$")


def dump_algorithm(alg: Algorithm) -> str:
    out = []
    for c in sorted(alg.table):
        ch = alg.table[c]
        for cls in sorted(ch, key=sorted):
            out.append(f"{fmt_config(c)} {_fmt_class(cls)} -> {_fmt_class(ch[cls])}")
    return "\n".join(out) + ("\n" if out else "")


def parse_algorithm(text: str, space: ConfigSpace) -> Algorithm:
    table: dict = {}
    for no, line in _lines(text):
        m = _ALG_LINE.match(line)
        if not m:
            raise FormatError(f"algorithm lines are '(config) {{class}} -> {{class}}', got {line!r}", no)
        c = _parse_cfg(m.group(1), no)
        if len(c) != space.k:
            raise FormatError(f"configuration {m.group(1)} does not have {space.k} robots", no)
        src, dst = _parse_class(m.group(2), no), _parse_class(m.group(3), no)
        table.setdefault(c, {})[src] = dst
    return Algorithm(space, table)


def dump_phi(phi: dict) -> str:
    out = []
    for c in sorted(phi):
        x = phi[c]
        out.append(f"{fmt_config(c)} -> {fmt_config(x) if isinstance(x, tuple) else x}")
    return "\n".join(out) + ("\n" if out else "")


def parse_phi(text: str) -> dict:
    phi = {}
    for no, line in _lines(text):
        m = _PHI_LINE.match(line)
        if not m:
            raise FormatError(f"phi lines are '(config) -> value', got {line!r}", no)
        c = _parse_cfg(m.group(1), no)
        rhs = m.group(2).strip()
        value = _parse_cfg(rhs, no) if rhs.startswith("(") else _ints([rhs], no)[0]
        if c in phi:
            raise FormatError(f"duplicate phi entry for {m.group(1)}", no)
        phi[c] = value
    return phi


# -- compiled systems --------------------------------------------------------

def save_system(sim: CompiledSystem, directory: str | Path) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    files = {
        "graph.txt": dump_graph(sim.graph),
        "algorithm.txt": dump_algorithm(sim.algorithm),
        "phi.txt": dump_phi(sim.phi),
    }
    meta = [f"k {sim.k}"]
    if isinstance(sim.target, FunctionSpec):
        meta.append("target function")
        files["function.txt"] = dump_function(sim.target)
    else:
        meta.append("target system")
    for key in sorted(sim.info):
        value = sim.info[key]
        if isinstance(value, (int, str, bool)):
            meta.append(f"info {key} {value}")
    files["system.txt"] = "\n".join(meta) + "\n"
    out = []
    for name, text in files.items():
        (d / name).write_text(text)
        out.append(d / name)
    return out


def load_system(directory: str | Path) -> CompiledSystem:
    d = Path(directory)
    k, target = None, None
    info = {}
    for no, line in _lines(_read(d / "system.txt")):
        parts = line.split(None, 2)
        if parts[0] == "k" and len(parts) == 2:
            (k,) = _ints(parts[1:], no)
        elif parts[0] == "target" and len(parts) == 2:
            target = parts[1]
        elif parts[0] == "info" and len(parts) == 3:
            info[parts[1]] = parts[2]
        else:
            raise FormatError(f"unrecognized line {line!r}", no)
    if k is None:
        raise FormatError("system.txt needs a 'k <robots>' line", 1)
    graph = parse_graph(_read(d / "graph.txt"))
    space = ConfigSpace(graph, k)
    alg = parse_algorithm(_read(d / "algorithm.txt"), space)
    phi = parse_phi(_read(d / "phi.txt"))
    f = parse_function(_read(d / "function.txt")) if target == "function" else None
    return CompiledSystem(space, alg, phi, f, info)


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except FileNotFoundError:
        raise FormatError(f"missing file {path}", 0) from None


def digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
