import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from robotsys.cli import main
from robotsys.compilers import compile_oriented_path, compile_oriented_ring
from robotsys.dynamics import Algorithm
from robotsys.errors import FormatError
from robotsys.functions import FunctionSpec
from robotsys.graph import build_family, complete_with_danglers, function_network
from robotsys.io import (dump_algorithm, dump_function, dump_graph, dump_phi, load_system,
                         parse_algorithm, parse_function, parse_graph, parse_phi, save_system)
from robotsys.simulation import lift_one_to_k, native, verify_function_computation, verify_simulation
from robotsys.space import ConfigSpace


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fields(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


# -- formats --------------------------------------------------------------------

@pytest.mark.parametrize("g", [build_family("UR", 7), build_family("OP", 4),
                               complete_with_danglers(3), function_network([1, 2, 0, 0])])
def test_graph_round_trip(g):
    assert parse_graph(dump_graph(g)) == g


def test_graph_format_exact():
    text = dump_graph(build_family("OP", 3))
    assert text.splitlines()[0] == "graph 3"
    assert all(line.startswith("e ") for line in text.splitlines()[1:])
    assert "directed-semantics" in dump_graph(function_network([1, 0]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=8))
def test_function_round_trip(values):
    f = FunctionSpec(tuple(v % len(values) for v in values))
    assert parse_function(dump_function(f)) == f


@pytest.mark.parametrize("text,line", [
    ("graph 3\ne 0 1 0\n", 2),
    ("e 0 1 0 0\n", 1),
    ("graph 3\n\ne 0 x 0 0\n", 3),
    ("graph 2\ne 0 1 0 0\ne 0 1 0 0\n", 3),
    ("graph 2\nfoo\n", 2),
])
def test_graph_parse_errors_carry_line(text, line):
    with pytest.raises(FormatError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


@pytest.mark.parametrize("text", ["function 2\n0 1\n", "function 2\n0 1\n1 5\n",
                                  "0 1\n", "function 2\n0 1\n0 1\n1 0\n"])
def test_function_parse_errors(text):
    with pytest.raises(FormatError):
        parse_function(text)


def test_system_round_trip(tmp_path):
    f = FunctionSpec.cycle(4)
    sim = compile_oriented_ring(f)
    save_system(sim, tmp_path)
    back = load_system(tmp_path)
    assert back.graph == sim.graph and back.k == sim.k
    assert back.algorithm.table == sim.algorithm.table
    assert back.phi == sim.phi and back.target == f
    assert verify_function_computation(back, f).report() == verify_function_computation(sim, f).report()


def test_system_with_configuration_phi(tmp_path):
    space = ConfigSpace(build_family("UP", 4), 1)
    rng = random.Random(3)
    table = {c: {frozenset(c): frozenset({rng.choice(sorted(space.graph.neighbors(c[0])))})}
             for c in space.enumerate()}
    base = native(space, Algorithm(space, table))
    lifted = lift_one_to_k(base, 2)
    save_system(lifted, tmp_path / "lift")
    save_system(base, tmp_path / "base")
    again = load_system(tmp_path / "lift")
    assert again.phi == lifted.phi
    assert verify_simulation(again, load_system(tmp_path / "base").algorithm)


def test_algorithm_and_phi_text():
    sim = compile_oriented_path(FunctionSpec.cycle(3))
    assert parse_algorithm(dump_algorithm(sim.algorithm), sim.space).table == sim.algorithm.table
    assert parse_phi(dump_phi(sim.phi)) == sim.phi
    with pytest.raises(FormatError):
        parse_phi("(0,1) -> 1\n(0,1) -> 2\n")
    with pytest.raises(FormatError):
        parse_algorithm("(0) {0} => {1}\n", sim.space)


# -- command line -------------------------------------------------------------

def test_space_family(capsys):
    code, out, _ = run(capsys, "space", "--family", "OR", "--n", 14, "--k", 2)
    got = fields(out)
    assert code == 0
    assert (got["configurations"], got["closed_form"], got["agreement"]) == ("8", "8", "MATCH")
    code, out, _ = run(capsys, "space", "--family", "OP", "--n", 5, "--k", 2)
    assert fields(out)["configurations"] == "15" and code == 0


def test_space_graph_file(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text(dump_graph(function_network(FunctionSpec.cycle(3).table)))
    code, out, _ = run(capsys, "space", path, "--k", 1)
    assert code == 0 and fields(out)["configurations"] == "3"
    assert "input_sha256 g.txt" in fields(out)


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--family", "UR", "--n", 15, "--k", 2)
    assert code == 0 and fields(out)["closed_form"] == "8"


def test_cgraph_and_dot(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "cgraph", "--family", "UR", "--n", 15, "--k", 2, "--dot", dot)
    got = fields(out)
    assert code == 0 and got["nodes"] == "8" and got["path_components"] == "8"
    assert dot.read_text().startswith("digraph")
    code, out, _ = run(capsys, "cgraph", "--family", "UP", "--n", 5, "--k", 2, "--deterministic",
                       "--dot", dot)
    assert code == 0 and "dashed" not in dot.read_text()


def test_check(capsys):
    code, out, _ = run(capsys, "check", "--family", "OP", "--n", 6, "--k", 2, "--grid", 3)
    got = fields(out)
    assert code == 0 and got["has_grid(3)"] == "True" and got["deterministic"] == "True"


def test_compile_and_verify(tmp_path, capsys):
    fpath = tmp_path / "f.txt"
    fpath.write_text(dump_function(FunctionSpec.cycle(3)))
    code, out, _ = run(capsys, "compile", fpath, "--target", "minsize", "--out", tmp_path / "sys")
    got = fields(out)
    assert code == 0 and (got["vertices"], got["robots"], got["opt2"]) == ("6", "6", "True")
    code, out, _ = run(capsys, "verify", tmp_path / "sys")
    assert code == 0 and fields(out)["verdict"] == "PASS"


def test_compile_identity_op_then_pass(tmp_path, capsys):
    fpath = tmp_path / "id.txt"
    fpath.write_text(dump_function(FunctionSpec.identity(4)))
    assert run(capsys, "compile", fpath, "--target", "op", "--out", tmp_path / "s")[0] == 0
    assert run(capsys, "verify", tmp_path / "s", "--function", fpath)[0] == 0


def test_compile_or_reports_m(capsys):
    code, out, _ = run(capsys, "compile", "--random", 5, "--seed", 2, "--target", "or")
    assert code == 0 and int(fields(out)["m"]) >= 22


def test_compile_on_host_graph(tmp_path, capsys):
    g = tmp_path / "host.txt"
    g.write_text(dump_graph(build_family("UR", 17)))
    fpath = tmp_path / "f.txt"
    fpath.write_text(dump_function(FunctionSpec([1, 0])))
    code, out, _ = run(capsys, "compile", fpath, "--target", "graph", "--graph", g,
                       "--robots", 3, "--out", tmp_path / "s")
    assert code == 0 and fields(out)["robots"] == "3"
    assert run(capsys, "verify", tmp_path / "s")[0] == 0
    code, _, err = run(capsys, "compile", fpath, "--target", "graph", "--graph", g, "--robots", 2)
    assert code == 2 and "error" in err


def test_reports_are_byte_identical(tmp_path, capsys):
    outs = []
    for d in ("a", "b"):
        run(capsys, "compile", "--random", 4, "--seed", 7, "--target", "ur", "--out", tmp_path / d)
        outs.append(run(capsys, "verify", tmp_path / d)[1])
    first = outs[0].replace(str(tmp_path / "a"), "")
    second = outs[1].replace(str(tmp_path / "b"), "")
    assert first == second
    again = run(capsys, "verify", tmp_path / "a")[1]
    assert again == outs[0]


def test_corrupted_phi_is_pinpointed(tmp_path, capsys):
    f = FunctionSpec.cycle(3)
    sim = compile_oriented_path(f)
    save_system(sim, tmp_path)
    # (2,3) lies on the route of the edge 2 -> 0; mapping it to 1 skips a value
    assert sim.phi[(2, 3)] == 2
    lines = (tmp_path / "phi.txt").read_text().splitlines()
    i = lines.index("(2,3) -> 2")
    lines[i] = "(2,3) -> 1"
    (tmp_path / "phi.txt").write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", tmp_path)
    got = fields(out)
    assert code == 1 and got["verdict"] == "FAIL"
    assert got["failed_condition"] == "b" and "(2,3)" in got["detail"]


def test_stay_put_fails_condition_c(tmp_path, capsys):
    f = FunctionSpec.cycle(3)
    sim = compile_oriented_path(f)
    sim.algorithm = Algorithm(sim.space, {})
    save_system(sim, tmp_path)
    code, out, _ = run(capsys, "verify", tmp_path)
    got = fields(out)
    assert code == 1 and got["failed_condition"] == "c"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("graph 3\ne 0 1\n")
    code, _, err = run(capsys, "space", bad, "--k", 1)
    assert code == 2 and "line 2" in err


def test_usage_and_missing_files(tmp_path, capsys):
    assert run(capsys, "space")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "verify", tmp_path / "missing")[0] == 2
    assert run(capsys, "compile", "--target", "op")[0] == 2


def test_resource_limit_exit_code(capsys, monkeypatch):
    import robotsys.space as space_mod
    monkeypatch.setattr(space_mod, "MAX_ARRANGEMENTS", 10, raising=False)
    code, _, err = run(capsys, "space", "--family", "OP", "--n", 12, "--k", 3)
    assert code == 3 and "resource limit" in err


def test_help_documents_formats(capsys):
    assert run(capsys, "--help")[0] == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "robotsys", "count", "--family", "OP",
                          "--n", "5", "--k", "2"], capture_output=True, text=True)
    assert out.returncode == 0 and "closed_form: 15" in out.stdout
