"""Command-line front end.

Exit codes: 0 success or PASS, 1 FAIL, 2 usage or parse error, 3 resource limit.
Reports are ``key: value`` lines and are byte-identical for identical inputs
unless ``--timing`` is given.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import __version__
from .compilers import (check_opt2, compile_complete, compile_large_girth,
                        compile_long_quotient_path, compile_min_size, compile_oriented_path,
                        compile_oriented_ring, compile_unoriented)
from .dynamics import build_configuration_graph, path_components, structure_checks, to_dot
from .errors import (FormatError, PreconditionError, ResourceLimitError, RobotSysError)
from .functions import FunctionSpec
from .graph import build_family
from .io import digest, load_system, parse_function, parse_graph, save_system
from .simulation import verify_function_computation, verify_simulation
from .space import ConfigSpace, closed_form_count

FORMATS = __doc__ + """
Input formats (blank lines and '#' comments ignored):

  graph file      graph <n>
                  e <u> <v> <label u->v> <label v->u>     one line per edge
                  directed-semantics                      optional, then
                  s <x> <f(x)>                            one line per vertex

  function file   function <n>
                  <x> <f(x)>                              one line per x

  system dir      graph.txt, algorithm.txt, phi.txt, system.txt[, function.txt]
                  algorithm.txt: (<config>) {<class>} -> {<class>}
                  phi.txt:       (<config>) -> <integer or (<config>)>
                  system.txt:    k <robots> / target function|system / info <key> <value>

Families for --family: OP, UP, OR, UR.
"""


class Report:
    def __init__(self, command: str):
        self.lines = [f"command: {command}", f"version: {__version__}"]

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _graph_from(args):
    if getattr(args, "family", None):
        if args.n is None:
            raise PreconditionError("--family needs --n")
        return build_family(args.family, args.n)
    if not getattr(args, "graph", None):
        raise PreconditionError("give a graph file or --family with --n")
    return parse_graph(Path(args.graph).read_text())


def _inputs(report: Report, *paths) -> None:
    for p in paths:
        if p:
            report.add(f"input_sha256 {Path(p).name}", digest(p))


def cmd_space(args, report: Report) -> int:
    _inputs(report, args.graph)
    g = _graph_from(args)
    size = len(ConfigSpace(g, args.k).enumerate())
    report.add("vertices", g.n)
    report.add("robots", args.k)
    report.add("configurations", size)
    if args.family:
        closed = closed_form_count(args.family, args.n, args.k)
        report.add("closed_form", closed)
        report.add("agreement", "MATCH" if closed == size else "MISMATCH")
        return 0 if closed == size else 1
    return 0


def cmd_count(args, report: Report) -> int:
    report.add("closed_form", closed_form_count(args.family, args.n, args.k))
    return 0


def _cgraph(args):
    g = _graph_from(args)
    return build_configuration_graph(ConfigSpace(g, args.k))


def cmd_cgraph(args, report: Report) -> int:
    _inputs(report, args.graph)
    cg = _cgraph(args)
    report.add("nodes", len(cg.nodes))
    report.add("edges", len(cg.non_loop()))
    report.add("deterministic_edges", len(cg.non_loop(deterministic=True)))
    report.add("deterministic", cg.is_deterministic)
    comps = path_components(cg)
    report.add("path_components", "none" if comps is None else ",".join(map(str, comps)))
    if args.dot:
        Path(args.dot).write_text(to_dot(cg, args.deterministic, args.self_loops))
        report.add("dot", args.dot)
        report.add("dot_sha256", digest(args.dot))
    return 0


def cmd_check(args, report: Report) -> int:
    _inputs(report, args.graph)
    cg = _cgraph(args)
    for key, value in sorted(structure_checks(cg, args.grid, args.cycle).items()):
        report.add(key, value)
    return 0


def _function_from(args) -> FunctionSpec:
    if args.random is not None:
        return FunctionSpec.random(args.random, random.Random(args.seed))
    if not args.function:
        raise PreconditionError("give a function file or --random <n>")
    return parse_function(Path(args.function).read_text())


def cmd_compile(args, report: Report) -> int:
    _inputs(report, args.function, args.graph)
    f = _function_from(args)
    target = args.target
    if target == "complete":
        sim = compile_complete(f)
    elif target == "op":
        sim = compile_oriented_path(f)
    elif target == "or":
        sim = compile_oriented_ring(f)
    elif target in ("up", "ur"):
        sim = compile_unoriented(f, target.upper())
    elif target == "minsize":
        sim = compile_min_size(f)
    else:
        if not args.graph:
            raise PreconditionError("--target graph needs --graph <file>")
        g = parse_graph(Path(args.graph).read_text())
        sim = compile_long_quotient_path(f, g) if args.robots == 2 else compile_large_girth(f, g)
    report.add("function", f)
    report.add("target", target)
    report.add("vertices", sim.graph.n)
    report.add("robots", sim.k)
    for key in ("width", "m"):
        if key in sim.info:
            report.add(key, sim.info[key])
    report.add("phi_entries", len(sim.phi))
    report.add("algorithm_entries", len(sim.algorithm))
    report.add("opt2", check_opt2(sim.graph.n, f.n))
    if args.out:
        for path in save_system(sim, args.out):
            report.add(f"wrote {path.name}", digest(path))
    return 0


def cmd_verify(args, report: Report) -> int:
    files = [Path(args.system) / n for n in ("graph.txt", "algorithm.txt", "phi.txt")]
    _inputs(report, *[p for p in files if p.exists()], args.function)
    sim = load_system(args.system)
    if args.simulated:
        base = load_system(args.simulated)
        cert = verify_simulation(sim, base.algorithm)
    else:
        f = parse_function(Path(args.function).read_text()) if args.function else sim.target
        if f is None:
            raise PreconditionError("no function given and the system has none")
        cert = verify_function_computation(sim, f)
    if cert.condition == "precondition":
        report.add("precondition", cert.detail)
        return 2
    for line in cert.report().splitlines():
        key, _, value = line.partition(": ")
        report.add(key, value)
    return 0 if cert.verdict else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robotsys", description="Oblivious robots on labeled graphs.",
                                epilog=FORMATS, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--timing", action="store_true", help="append wall-clock time to the report")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def graph_args(sp):
        sp.add_argument("graph", nargs="?", help="graph file")
        sp.add_argument("--family", choices=["OP", "UP", "OR", "UR"])
        sp.add_argument("--n", type=int)
        sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("space", help="size of the configuration space")
    graph_args(sp)
    sp.set_defaults(run=cmd_space)

    sp = sub.add_parser("count", help="closed-form configuration count")
    sp.add_argument("--family", choices=["OP", "UP", "OR", "UR"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(run=cmd_count)

    sp = sub.add_parser("cgraph", help="configuration graph statistics and DOT export")
    graph_args(sp)
    sp.add_argument("--dot", help="write DOT here")
    sp.add_argument("--deterministic", action="store_true", help="export only deterministic edges")
    sp.add_argument("--self-loops", action="store_true", help="keep self-loops in the DOT")
    sp.set_defaults(run=cmd_cgraph)

    sp = sub.add_parser("check", help="structural checks of the configuration graph")
    graph_args(sp)
    sp.add_argument("--grid", type=int, help="look for an n x n grid")
    sp.add_argument("--cycle", type=int, default=3, help="look for cycles at least this long")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("compile", help="compile a function into a robot system")
    sp.add_argument("function", nargs="?", help="function file")
    sp.add_argument("--random", type=int, metavar="N", help="use a random function on range(N)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--target", required=True,
                    choices=["complete", "op", "or", "up", "ur", "minsize", "graph"])
    sp.add_argument("--graph", help="host graph for --target graph")
    sp.add_argument("--robots", type=int, choices=[2, 3], default=2)
    sp.add_argument("--out", help="directory for the serialized system")
    sp.set_defaults(run=cmd_compile)

    sp = sub.add_parser("verify", help="verify a serialized system")
    sp.add_argument("system", help="system directory")
    sp.add_argument("--function", help="function file (defaults to the system's own)")
    sp.add_argument("--simulated", help="directory of a simulated system instead of a function")
    sp.set_defaults(run=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    argv_echo = " ".join(sys.argv[1:] if argv is None else argv)
    report = Report(argv_echo)
    start = time.perf_counter()
    try:
        code = args.run(args, report)
    except FormatError as exc:
        print(f"error: parse error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"error: resource limit: {exc}", file=sys.stderr)
        return 3
    except (RobotSysError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        report.add("seconds", f"{time.perf_counter() - start:.3f}")
    sys.stdout.write(report.text())
    return code


if __name__ == "__main__":
    sys.exit(main())
