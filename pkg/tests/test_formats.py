import json
import random

import pytest
from conftest import arrays
from hypothesis import given
from hypothesis import strategies as st

from prefixflip.analysis import decide_dims, orbit_stats, random_instance
from prefixflip.formats import (
    RESULT_FIELDS,
    FormatError,
    emit_result,
    loads,
    parse_instance,
    parse_moves,
    write_instance,
    write_moves,
)
from prefixflip.model import Move, MultiArray, standard
from prefixflip.solvers import bfs_solve, verify


def test_parse_grid_letters():
    ma = parse_instance("signed\n2 3\nc f e\nb D A\n")
    assert ma == MultiArray.from_values([2, 3], [-3, -6, -5, -2, 4, 1], "signed")


def test_parse_line_letters():
    ma = parse_instance("signed\n1 5\ne d A c b\n")
    assert ma.values() == (-5, -4, 1, -3, -2)
    assert ma.dims == (1, 5)


def test_parse_single_cell():
    assert parse_instance("unsigned\n1\n1\n") == standard([1])


def test_parse_comments_and_rank3():
    text = "# a cube\nunsigned\n2 2 2\n1 2\n3 4\n\n5 6\n7 8\n"
    assert parse_instance(text) == standard([2, 2, 2])


def test_letter_and_number_spellings_agree():
    a = parse_instance("signed\n2 3\nc f e\nb D A\n")
    b = parse_instance("signed\n2 3\n-3 -6 -5\n-2 4 1\n")
    assert a == b


@pytest.mark.parametrize(
    "text, where",
    [
        ("signed\n2 2\n1 1\n3 4\n", "line 3, column 3"),       # duplicate
        ("signed\n2 2\n1 2\n3\n", "line 4"),                   # count
        ("signed\n2 2\n1 0\n3 4\n", "line 3, column 3"),       # zero
        ("signed\n2 2\nA 2\n3 4\n", "line 3, column 3"),       # mixed
        ("sideways\n2 2\n1 2\n3 4\n", "line 1"),               # mode
        ("unsigned\n2 2\n1 -2\n3 4\n", "line 3, column 3"),    # Down in unsigned
        ("unsigned\n2 x\n1 2\n3 4\n", "line 2, column 3"),     # dims
        ("unsigned\n2 2\n1 2\n", "line 3"),                    # missing row
        ("unsigned\n2 2\n1 2\n3 5\n", "line 4, column 3"),     # id out of range
        ("unsigned\n2 2 2\n1 2\n3 4\n5 6\n7 8\n", "line"),     # missing block separator
    ],
)
def test_parse_errors_carry_location(text, where):
    with pytest.raises(FormatError) as exc:
        parse_instance(text)
    assert where in str(exc.value)


def test_write_instance_examples():
    assert write_instance(standard([2, 2])) == "unsigned\n2 2\n1 2\n3 4\n"
    assert write_instance(MultiArray.from_values([1], [-1], "signed")) == "signed\n1\n-1\n"
    assert write_instance(standard([2, 1, 2])) == "unsigned\n2 1 2\n1 2\n\n3 4\n"


@given(arrays())
def test_instance_round_trip(ma):
    assert parse_instance(write_instance(ma)) == ma


def test_instance_round_trip_1000_seeded():
    rng = random.Random(42)
    for _ in range(1000):
        dims = rng.choice([(1,), (7,), (2, 3), (3, 4), (2, 2, 2), (2, 3, 4)])
        mode = rng.choice(["unsigned", "signed"])
        ma = random_instance(dims, mode, rng.randrange(10 ** 9))
        assert parse_instance(write_instance(ma)) == ma


def test_parse_moves():
    assert parse_moves("H5 H2 H3") == (Move(0, 5), Move(0, 2), Move(0, 3))
    assert parse_moves("F3") == parse_moves("H3")
    assert parse_moves("H1 V2 H2 H1 H2 V1") == (
        Move(0, 1), Move(1, 2), Move(0, 2), Move(0, 1), Move(0, 2), Move(1, 1)
    )
    assert parse_moves("D12") == (Move(2, 12),)
    assert parse_moves("") == ()


@pytest.mark.parametrize("text, index", [("H1 X2", 1), ("H0", 0), ("h1", 0), ("H1 V2 V", 2), ("H01", 0)])
def test_parse_moves_errors(text, index):
    with pytest.raises(FormatError) as exc:
        parse_moves(text)
    assert exc.value.token == index
    assert f"token {index}" in str(exc.value)


@given(st.lists(st.builds(Move, st.integers(0, 2), st.integers(1, 30))))
def test_moves_round_trip(moves):
    assert parse_moves(write_moves(moves)) == tuple(moves)


def test_machine_solution_document():
    line = parse_instance("signed\n5\ne d A c b\n")
    doc = json.loads(emit_result(bfs_solve(line), "machine", dims=[5], mode="signed"))
    assert list(doc) == list(RESULT_FIELDS)
    assert doc["solved"] is True and doc["length"] == 3 and doc["moves"] == "H5 H2 H3"
    assert doc["format_version"] == 1
    assert loads(json.dumps(doc)) == doc


def test_machine_orbit_document():
    doc = loads(emit_result(orbit_stats([2, 2], "unsigned"), "machine"))
    assert doc["orbit_size"] == 24
    assert sum(c for _, c in doc["histogram"]) == 24


def test_machine_verification_failure_document():
    doc = loads(emit_result(verify(standard([2, 3]), (Move(1, 4),)), "machine"))
    assert doc["valid"] is False and doc["invalid_index"] == 0


def test_machine_reachability_document():
    doc = loads(emit_result(decide_dims([2, 3]), "machine"))
    assert doc["verdict"] == "AlwaysReachable"


def test_loads_rejects_unknown_fields():
    doc = loads(emit_result(decide_dims([2, 3]), "machine"))
    doc["extra"] = 1
    with pytest.raises(FormatError):
        loads(json.dumps(doc))


def test_deterministic_documents_have_no_timing():
    sol = bfs_solve(standard([3]))
    a = emit_result(sol, "machine", deterministic=True)
    assert json.loads(a)["elapsed_ms"] is None
    assert "elapsed" not in emit_result(sol, "text", deterministic=True)
