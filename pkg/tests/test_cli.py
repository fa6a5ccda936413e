import io
import json

import pytest

from prefixflip.cli import run
from prefixflip.formats import loads, parse_instance


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_solve_burnt_line(data_path):
    code, out, _ = call("solve", data_path("burnt_1x5.txt"), "--exact", "bfs", "--deterministic")
    assert code == 0
    assert "length: 3" in out and "moves: H5 H2 H3" in out


@pytest.mark.parametrize("method", ["bfs", "bibfs", "ida"])
def test_solve_methods_machine(data_path, method):
    code, out, _ = call("solve", data_path("signed_2x3.txt"), "--exact", method, "--format", "machine")
    doc = loads(out)
    assert code == 0 and doc["length"] == 6 and doc["optimal"] is True
    assert doc["dims"] == [2, 3] and doc["mode"] == "signed"


def test_solve_greedy_is_marked(data_path):
    code, out, _ = call("solve", data_path("burnt_1x5.txt"), "--greedy", "--format", "machine")
    doc = loads(out)
    assert code == 0 and doc["optimal"] is False and doc["method"] == "greedy"


def test_solve_greedy_needs_line(data_path):
    code, _, err = call("solve", data_path("signed_2x3.txt"), "--greedy")
    assert code == 1 and "rank-1" in err


def test_solve_unreachable_and_budget(tmp_path, data_path):
    cube = tmp_path / "cube.txt"
    cube.write_text("unsigned\n2 2 2\n2 1\n3 4\n\n5 6\n7 8\n")
    code, out, _ = call("solve", str(cube))
    assert code == 2 and "unreachable" in out
    code, out, _ = call("solve", data_path("signed_2x3.txt"), "--max-nodes", "5", "--format", "machine")
    assert code == 3 and loads(out)["status"] == "budget-exhausted"


def test_solve_deterministic_across_threads(tmp_path):
    inst = tmp_path / "line.txt"
    code, out, _ = call("random", "--dims", "8", "--mode", "unsigned", "--seed", "4")
    inst.write_text(out)
    outputs = set()
    for threads in ("1", "2", "4"):
        for fmt in ("text", "machine"):
            code, out, _ = call("solve", str(inst), "--deterministic", "--threads", threads, "--format", fmt)
            assert code == 0
            outputs.add((fmt, out))
    assert len(outputs) == 2


def test_verify(data_path):
    code, out, _ = call("verify", data_path("signed_2x3.txt"), "--moves", "H1 V2 H2 H1 H2 V1")
    assert code == 0 and "solved: true" in out
    code, out, _ = call("verify", data_path("signed_2x3.txt"), "--moves", "H1 V2")
    assert code == 2
    code, out, _ = call("verify", data_path("signed_2x3.txt"), "--moves", "V4", "--format", "machine")
    doc = loads(out)
    assert code == 2 and doc["valid"] is False and doc["invalid_index"] == 0
    code, _, err = call("verify", data_path("signed_2x3.txt"), "--moves", "Q1")
    assert code == 1 and "token 0" in err


def test_decide(data_path):
    code, out, _ = call("decide", data_path("odd_4x4.txt"))
    assert code == 2 and "UnreachableOddParity" in out
    code, out, _ = call("decide", "--dims", "2 3")
    assert code == 0 and "AlwaysReachable" in out
    code, out, _ = call("decide", "--dims", "4 4")
    assert code == 0 and "Constrained" in out


def test_decide_even_caveat(tmp_path):
    f = tmp_path / "std.txt"
    f.write_text("unsigned\n4 4\n1 2 3 4\n5 6 7 8\n9 10 11 12\n13 14 15 16\n")
    code, out, _ = call("decide", str(f), "--format", "machine")
    doc = loads(out)
    assert code == 0 and doc["verdict"] == "EvenParityUndetermined"
    assert "not sufficient" in doc["reason"]


def test_orbit_and_random():
    code, out, _ = call("orbit", "--dims", "2 2", "--mode", "unsigned", "--format", "machine")
    assert code == 0 and loads(out)["orbit_size"] == 24
    code, out, _ = call("orbit", "--dims", "7", "--mode", "unsigned", "--max-nodes", "10")
    assert code == 3 and "complete: false" in out
    a = call("random", "--dims", "2 3", "--mode", "signed", "--seed", "9")[1]
    b = call("random", "--dims", "2 3", "--mode", "signed", "--seed", "9")[1]
    assert a == b and parse_instance(a).dims == (2, 3)
    code, out, _ = call("random", "--dims", "3", "--mode", "unsigned", "--seed", "1", "--policy", "walk:0",
                        "--format", "machine")
    assert loads(out)["instance"] == "unsigned\n3\n1 2 3\n"


def test_theorem_check():
    code, out, _ = call("theorem-check", "--max-cells", "4", "--format", "machine")
    doc = loads(out)
    assert code == 0 and doc["status"] == "PASS"
    assert any(r["dims"] == [2, 4] and r["orbit_size"] == 40320 for r in doc["rows"])


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["solve"],
        ["random", "--dims", "3", "--mode", "unsigned"],  # seed is mandatory
        ["orbit", "--dims", "2 2 2 2", "--mode", "signed"],
        ["decide"],
        ["solve", "x.txt", "--exact", "astar"],
    ],
)
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err


def test_missing_file():
    code, _, err = call("solve", "/nonexistent/instance.txt")
    assert code == 1 and err


def test_every_subcommand_has_machine_format(data_path):
    cmds = [
        ["solve", data_path("burnt_1x5.txt")],
        ["verify", data_path("burnt_1x5.txt"), "--moves", "H5 H2 H3"],
        ["decide", "--dims", "3 4"],
        ["orbit", "--dims", "3", "--mode", "signed"],
        ["random", "--dims", "3", "--mode", "signed", "--seed", "0"],
        ["theorem-check", "--max-cells", "2"],
    ]
    for argv in cmds:
        code, out, _ = call(*argv, "--format", "machine")
        assert code == 0, argv
        json.loads(out)
        loads(out)
