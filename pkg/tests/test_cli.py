import json
from fractions import Fraction

import pytest

from csitdof import cli
from csitdof.errors import ScenarioError
from csitdof.formats import fmt, fmt_decimal
from csitdof.scenario import load_scenario, parse_scenario
from csitdof.sim.builders import build_mat2_schedule
from csitdof.sim.schedule import dump_schedule

F = Fraction


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, obj, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


# scenario parsing


def test_parse_pattern_and_joint():
    sc = parse_scenario({"kind": "miso", "K": 3, "pattern": ["PNN", "NPN", "NNP"]})
    assert sc.joint.prob("PNN") == F(1, 3) and sc.tx_antennas == 3
    sc = parse_scenario(
        {"kind": "mimo2", "K": 2, "antennas": [3, 2], "joint": [{"state": "PP", "prob": "1"}]}
    )
    assert sc.tx_antennas == 5 and sc.antennas == (3, 2)


@pytest.mark.parametrize(
    "data, field",
    [
        ({"kind": "siso", "K": 1, "pattern": ["P"]}, "kind"),
        ({"kind": "miso", "K": 0, "pattern": ["P"]}, "K"),
        ({"kind": "miso", "K": 2}, "pattern/joint"),
        ({"kind": "miso", "K": 2, "pattern": ["PP"], "joint": []}, "pattern/joint"),
        ({"kind": "miso", "K": 2, "pattern": ["PPP"]}, "pattern[0]"),
        ({"kind": "miso", "K": 2, "pattern": ["PX"]}, "pattern"),
        ({"kind": "miso", "K": 2, "joint": [{"state": "PP", "prob": 0.5}, {"state": "NN", "prob": "1/2"}]}, "joint[0].prob"),
        ({"kind": "miso", "K": 2, "joint": [{"state": "PP", "prob": "1/3"}]}, "joint"),
        ({"kind": "miso", "K": 2, "joint": [{"state": "P", "prob": "1"}]}, "joint[0].state"),
        ({"kind": "mimo2", "K": 2, "antennas": [2], "joint": [{"state": "PP", "prob": "1"}]}, "antennas"),
        ({"kind": "mimo2", "K": 3, "antennas": [2, 1], "pattern": ["PPP"]}, "K"),
        ({"kind": "mimo2", "K": 2, "antennas": [2, 1], "pattern": ["DP"]}, "pattern"),
    ],
)
def test_parse_errors_name_field(data, field):
    with pytest.raises(ScenarioError) as err:
        parse_scenario(data)
    assert err.value.field == field


def test_load_missing_file(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "nope.json")


def test_golden_scenarios_load(scenario_path):
    for name in ["mixed_dpp", "aligned_pdd", "cyclic_pnn", "cyclic_pnnn", "mimo_3x2", "ppp_nnn", "k2_delayed"]:
        load_scenario(scenario_path(name))


def test_formatting():
    assert fmt(F(4, 2)) == "2" and fmt(F(-5, 3)) == "-5/3"
    assert fmt_decimal(F(8, 5), 6) == "1.600000"
    assert fmt_decimal(F(5, 3), 6) == "1.666667"
    assert fmt_decimal(F(-1, 3), 2) == "-0.33"
    assert fmt_decimal(F(7, 2), 0) == "4"


# commands


def test_bounds_cyclic_theorem2(capsys, scenario_path):
    code, out, _ = run(capsys, "bounds", "--scenario", str(scenario_path("cyclic_pnn")), "--theorem", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "tag,c_1,c_2,c_3,rhs"
    assert sorted(l.split(",", 1)[1] for l in lines[1:]) == ["1,2,2,8/3", "2,1,2,8/3", "2,2,1,8/3"]


def test_bounds_mimo(capsys, scenario_path):
    code, out, _ = run(capsys, "bounds", "--scenario", str(scenario_path("mimo_3x2")), "--theorem", "3")
    assert code == 0
    assert "T3:ant,1/3,1/2,3/2" in out and "T3:sum,1,1,11/3" in out and "cap:d1,1,0,3" in out


@pytest.mark.parametrize(
    "name, theorem",
    [("cyclic_pnn", "3"), ("mimo_3x2", "1"), ("mimo_3x2", "2")],
)
def test_bounds_kind_mismatch(capsys, scenario_path, name, theorem):
    code, out, err = run(capsys, "bounds", "--scenario", str(scenario_path(name)), "--theorem", theorem)
    assert code == 2 and out == "" and "error" in err


@pytest.mark.parametrize(
    "name, value",
    [("cyclic_pnn", "8/5"), ("ppp_nnn", "5/3"), ("k2_delayed", "4/3")],
)
def test_sumdof(capsys, scenario_path, name, value):
    code, out, _ = run(capsys, "sumdof", "--scenario", str(scenario_path(name)))
    assert code == 0
    assert out.splitlines()[0] == value


def test_sumdof_weights(capsys, scenario_path):
    code, out, _ = run(capsys, "sumdof", "--scenario", str(scenario_path("k2_delayed")), "--weights", "1,0")
    assert code == 0 and out.splitlines() == ["1", "1.000000"]
    code, _, _ = run(capsys, "sumdof", "--scenario", str(scenario_path("k2_delayed")), "--weights", "1")
    assert code == 2


def test_vertices(capsys, scenario_path):
    code, out, _ = run(capsys, "vertices", "--scenario", str(scenario_path("k2_delayed")))
    assert code == 0
    assert "2/3,2/3" in out.splitlines()


def test_corners_and_tightness(capsys, scenario_path):
    code, out, _ = run(capsys, "corners", "--scenario", str(scenario_path("ppp_nnn")))
    assert code == 0 and len(out.strip().splitlines()) == 4
    code, out, _ = run(capsys, "tightness", "--scenario", str(scenario_path("aligned_pdd")))
    assert code == 0
    assert "caseB:1+2+3,23/33,23/33,23/33" in out
    assert out.strip().endswith("verdict: tight")
    code, out, _ = run(capsys, "tightness", "--scenario", str(scenario_path("mimo_3x2")))
    assert code == 0 and out.strip().endswith("verdict: tight")


def test_corners_unsupported(capsys, scenario_path):
    code, out, err = run(capsys, "corners", "--scenario", str(scenario_path("cyclic_pnn")))
    assert code == 2 and out == "" and "aligned" in err


def test_simulate_variants(capsys, scenario_path):
    code, out, _ = run(capsys, "simulate", "--scenario", str(scenario_path("mimo_3x2")), "--scheme", "mimo:B3", "--n", "12")
    assert code == 0
    assert out.splitlines()[1:] == ["1,24,24,2", "2,20,20,5/3"]
    code, out, _ = run(capsys, "simulate", "--scenario", str(scenario_path("k2_delayed")), "--scheme", "mat2")
    assert out.splitlines()[1:] == ["1,2,2,2/3", "2,2,2,2/3"]
    code, out, _ = run(capsys, "simulate", "--scenario", str(scenario_path("ppp_nnn")), "--scheme", "zf:1")
    assert [l.split(",")[3] for l in out.splitlines()[1:]] == ["1", "1/3", "1/3"]


def test_simulate_repeats_and_bad_n(capsys, scenario_path):
    code, _, _ = run(
        capsys, "simulate", "--scenario", str(scenario_path("mimo_3x2")), "--scheme", "mimo:B3", "--repeats", "4"
    )
    assert code == 0
    code, _, err = run(capsys, "simulate", "--scenario", str(scenario_path("mimo_3x2")), "--scheme", "mimo:B3", "--n", "7")
    assert code == 2 and "12" in err


def test_simulate_schedule_file(capsys, tmp_path, scenario_path):
    path = tmp_path / "mat.json"
    dump_schedule(build_mat2_schedule(), path)
    code, out, _ = run(capsys, "simulate", "--scenario", str(scenario_path("k2_delayed")), "--scheme", str(path))
    assert code == 0 and "2/3" in out


def test_simulate_invalid_schedule(capsys, tmp_path, scenario_path):
    bad = {"M": 2, "slots": [{"csit": "NN", "streams": [{"owner": 1, "fresh": 1, "precode": {"orthogonal_to": [2]}}]}]}
    path = write(tmp_path, bad, "bad.json")
    code, _, err = run(capsys, "simulate", "--scenario", str(scenario_path("k2_delayed")), "--scheme", path)
    assert code == 2 and "slot 1" in err


def test_scenario_error_exit_1(capsys, tmp_path):
    path = write(tmp_path, {"kind": "miso", "K": 2, "joint": [{"state": "PP", "prob": 1.0}]})
    code, out, err = run(capsys, "sumdof", "--scenario", path)
    assert code == 1 and out == "" and "joint[0].prob" in err
    code, _, _ = run(capsys, "sumdof", "--scenario", write(tmp_path, "{not json", "x.json"))
    assert code == 1


def test_internal_error_exit_3(capsys, monkeypatch, scenario_path):
    def boom(sc, args):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.COMMANDS, "sumdof", boom)
    code, out, err = run(capsys, "sumdof", "--scenario", str(scenario_path("cyclic_pnn")))
    assert code == 3 and out == "" and "boom" in err


def test_out_file_and_determinism(capsys, tmp_path, scenario_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(capsys, "vertices", "--scenario", str(scenario_path("mixed_dpp")), "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes() and a.read_bytes().startswith(b"v_1,v_2,v_3\n")


def test_decimals_column(capsys, scenario_path):
    code, out, _ = run(capsys, "corners", "--scenario", str(scenario_path("aligned_pdd")), "--decimals", "3")
    assert out.splitlines()[0] == "label,d_1,d_2,d_3,d_1_dec,d_2_dec,d_3_dec"
    assert out.splitlines()[-1].endswith("0.697,0.697,0.697")
