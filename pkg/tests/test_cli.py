import json
import re

import pytest

from neron.cli import jsonable, main, parse_curve_file, parse_data_file, parse_lattice_file, to_json
from neron.errors import IncompleteTower, ParseError, UnsupportedField
from neron.series import WildEllipticData


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, (json.loads(out) if out else None), err


def test_parse_curve_file():
    m = parse_curve_file("field = Q\na1 = 0\na2 = 0\na3 = 0\na4 = 0\na6 = t^4\n")
    assert str(m) == "[0, 0, 0, 0, t^4] over Q((t))"
    m = parse_curve_file("# comment\nfield = F5\na1 = 1\na6 = t\n")
    assert m.field.name == "F5"


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_curve_file("field = Q\na6 = t^^2\n")
    assert (info.value.line, info.value.column) == (2, 8)
    with pytest.raises(ParseError):
        parse_curve_file("field = Q\na5 = t\n")
    with pytest.raises(ParseError):
        parse_curve_file("field = Q\nnonsense\n")
    with pytest.raises(UnsupportedField):
        parse_curve_file("field = F6\na6 = t\n")


def test_parse_data_file():
    data = parse_data_file("p = 2\ne_prime = 3\nregime = wild_elliptic\ntower = 1 1\ntower = 3 4\n")
    assert data == WildEllipticData(2, 3, {1: 1, 3: 4})
    data = parse_data_file("p = 1\ne = 3\npotential_good = yes\ntower = 1 3 0\ntower = 3 1 0\n")
    assert data.tower == {1: (3, 0), 3: (1, 0)} and data.potential_good
    with pytest.raises(IncompleteTower):
        parse_data_file("p = 1\ne = 3\ntower = 1 3 0\n")
    with pytest.raises(ParseError):
        parse_data_file("p = 1\ne = x\n")


def test_parse_lattice_file():
    action = parse_lattice_file("rank 2\norder 3\n0 -1\n1 -1\n")
    assert action.rank == 2 and action.order == 3


def test_tate_command(write, capsys):
    code, rep, _ = run_json(capsys, "tate", write("c", "field = Q\na6 = t^2\n"))
    assert code == 0
    assert (rep["type"], rep["phi"], rep["m"], rep["e"]) == ("IV", 3, 3, 3)
    assert set(rep) >= {"type", "v_delta_min", "phi", "phi_structure", "m", "t", "e", "e_prime", "tower"}


def test_tate_command_wild_curve(write, capsys):
    code, rep, _ = run_json(capsys, "tate", write("c", "field = F2\na3 = t\na6 = t\n"))
    assert code == 0 and rep["wild"] is True and rep["e_prime"] == 3
    assert [x["type"] for x in rep["tower"]] == ["II", "I0*"]


def test_series_curve(write, capsys):
    code, rep, _ = run_json(capsys, "series", write("c", "field = Q\na6 = t^4\n"), "--terms", "10")
    assert code == 0
    assert rep["closed_form"]["text"] == "(3*T + 3*T^2 + T^3)/(1 - T^3)"
    assert rep["coefficients"] == [0, 3, 3, 1, 3, 3, 1, 3, 3, 1]
    assert rep["pole_order"] == 1 and rep["degree"] == 0 and rep["residue"] == "-7/3"


def test_series_data_files(write, capsys):
    wild = write("w", "p = 2\ne_prime = 3\nregime = wild_elliptic\ntower = 1 1\ntower = 3 4\n")
    code, rep, _ = run_json(capsys, "series", wild, "--terms", "12")
    assert code == 0
    assert rep["closed_form"]["text"] == "(T + 4*T^3 + T^5)/(1 - T^6)"
    assert rep["coefficients"] == [0, 1, 0, 4, 0, 1, 0, 1, 0, 4, 0, 1]
    code, rep, _ = run_json(capsys, "series", write("d", "p = 1\ne = 1\ntower = 1 2 1\n"))
    assert rep["closed_form"]["num"] == [0, 2] and rep["closed_form"]["den"] == [1, -2, 1]
    assert rep["pole_order"] == 2 and len(rep["coefficients"]) == 60


def test_series_wild_curve_needs_flag(write, capsys):
    path = write("c", "field = F2\na3 = t\na6 = t\n")
    code, out, err = run(capsys, "series", path)
    assert code == 3 and "wild" in err and not out
    code, rep, _ = run_json(capsys, "series", path, "--wild")
    assert code == 0 and rep["closed_form"]["text"] == "(T + 4*T^3 + T^5)/(1 - T^6)"


def test_verify_examples(write, capsys):
    code, rep, _ = run_json(capsys, "verify", write("c", "field = Q\na6 = t^4\n"), "--dmax", "12")
    assert code == 0 and rep["passed"]
    assert [r["tate"] for r in rep["comparison"]] == [3, 3, 1] * 4
    code, rep, _ = run_json(capsys, "verify", write("c", "field = Q\na1 = 1\na6 = t\n"), "--dmax", "8")
    assert code == 0 and [r["tate"] for r in rep["comparison"]] == list(range(1, 9))


def test_verify_skips_excluded_degrees(write, capsys):
    code, rep, _ = run_json(capsys, "verify", write("c", "field = F5\na6 = t\n"), "--dmax", "10")
    assert code == 0
    assert rep["comparison"][4] == {"d": 5, "closed_form": 0, "tate": None, "match": True}


def test_verify_detects_corrupted_tower(write, capsys):
    curve = write("c", "field = Q\na6 = t^4\n")
    bad = write("d", "p = 1\ne = 3\ntower = 1 3 0\ntower = 3 2 0\n")
    code, rep, _ = run_json(capsys, "verify", curve, "--dmax", "12", "--data", bad)
    assert code == 4 and not rep["passed"] and rep["first_mismatch"] == 3


def test_torus_and_psi(write, capsys):
    code, rep, _ = run_json(capsys, "torus", write("l", "rank 1\norder 2\n-1\n"))
    assert code == 0 and rep["phi"] == 2 and rep["h1"] == [2]
    code, rep, _ = run_json(capsys, "psi", "2")
    assert rep["closed_form"]["text"] == "(T + T^2)/(1 - 3*T + 3*T^2 - T^3)"
    assert rep["pole_order"] == 3 and rep["residue"] == -2
    assert rep["coefficients"] == [d * d for d in range(20)]


def test_exit_codes(write, capsys):
    assert run(capsys, "tate", "/nonexistent/curve")[0] == 1
    assert run(capsys, "tate", write("c", "field = Q\na6 = t^^2\n"))[0] == 1
    assert run(capsys, "tate", write("c", "field = F6\na6 = t\n"))[0] == 3
    assert run(capsys, "series", write("d", "p = 1\ne = 2\ntower = 1 1 0\n"))[0] == 1
    assert run(capsys, "torus", write("l", "rank 1\norder 2\n1\n"))[0] == 1
    assert run(capsys, "tate", write("c", "field = Q\na2 = 0\n"))[0] == 1


NUMBER = re.compile(r"-?\d+(?:/\d+)?")


@pytest.mark.parametrize(
    "argv",
    [
        ("psi", "3"),
        ("series", "@curve"),
        ("verify", "@curve", "--dmax", "6"),
        ("tate", "@curve"),
        ("torus", "@lattice"),
    ],
)
def test_json_round_trip_and_text_agree(argv, write, capsys):
    files = {
        "@curve": write("c", "field = F7\na2 = t\na6 = t^4\n"),
        "@lattice": write("l", "rank 2\norder 3\n0 -1\n1 -1\n"),
    }
    argv = [files.get(a, a) for a in argv]
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    assert to_json(json.loads(out)) + "\n" == out
    _, text, _ = run(capsys, *argv)
    assert sorted(NUMBER.findall(text)) == sorted(NUMBER.findall(out))


def test_big_integers_become_strings():
    assert jsonable(2 ** 53) == 2 ** 53
    assert jsonable(2 ** 60) == str(2 ** 60)
    with pytest.raises(TypeError):
        jsonable(0.5)
