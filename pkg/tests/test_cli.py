import json
import subprocess
import sys

import pytest

from artifact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_cone_a1(capsys):
    code, out = run(capsys, "cone", "--group", "A1", "--word", "-1")
    assert code == 0
    data = json.loads(out)
    assert sorted(map(tuple, data["inequalities"])) == [(0, 1), (2, -1)]
    assert data["describe"] == ["t1 >= 0", "2x1 - t1 >= 0"]


def test_compare_b2(capsys):
    code, out = run(capsys, "compare", "--group", "B2", "--word", "-1,-2,-1,-2", "--point", "1,1,0,0,0,0")
    assert code == 0
    assert json.loads(out)["image"] == [2, 3, 0, 0, 0, 0]


def test_invalid_word_exits_2(capsys):
    assert main(["cone", "--group", "B2", "--word", "-1,-1,-2"]) == 2
    assert "not a double reduced word" in capsys.readouterr().err


def test_unknown_group_exits_2(capsys):
    assert main(["rootdata", "--group", "G2"]) == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["cone"])
    assert exc.value.code == 2


def test_verify_all_a1(capsys):
    code, out = run(capsys, "verify", "all", "--group", "A1", "--samples", "200")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "pass" and data["seed"] == 0


def test_output_is_deterministic(capsys):
    _, first = run(capsys, "verify", "all", "--group", "A1", "--samples", "100", "--seed", "5")
    _, second = run(capsys, "verify", "all", "--group", "A1", "--samples", "100", "--seed", "5")
    assert first == second


def test_poisson_subcommands(capsys):
    code, out = run(capsys, "poisson", "bracket", "--group", "B2", "--word", "-1,-2,-1,-2")
    assert code == 0 and json.loads(out)["D"] == [1, "1/2", 1, "1/2"]
    code, out = run(capsys, "poisson", "bs", "--group", "SL2", "--word", "-1", "--lambda", "2")
    data = json.loads(out)
    assert code == 0 and data["x_chart"] == [[1, 0], [1, 1], [1, 2]]
    code, out = run(capsys, "poisson", "volume", "--group", "SL2", "--word", "-1", "--lambda-vee", "2", "--N", "3")
    assert json.loads(out)["rows"][0]["count"] == 7
    code, out = run(capsys, "poisson", "leaves", "--group", "B2", "--lambda-vee", "1,1")
    assert json.loads(out)["leaf_dimension"] == 8


def test_other_subcommands(capsys):
    assert json.loads(run(capsys, "rootdata", "--group", "B2")[1])["dual"]["type"] == "C"
    assert json.loads(run(capsys, "seed", "--group", "B2")[1])["exchangeable"] == [1, 2]
    assert json.loads(run(capsys, "mutate", "--group", "A2", "--word", "-1,-2,-1", "--at", "1")[1])["directions"] == [1]
    minor = json.loads(run(capsys, "minor", "--group", "SL2", "--word", "-1", "--u", "1", "--i", "1")[1])
    assert minor["minor"] == "h1^-1"
    assert "p1" in json.loads(run(capsys, "potential", "--group", "C2")[1])["terms"]
    assert json.loads(run(capsys, "crystal", "--group", "B2", "--fiber", "1,0")[1])["size"] == 4
    code, out = run(capsys, "crystal", "--group", "A1", "--fiber", "2", "--dot")
    assert out.startswith("digraph")


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "artifact.cli", "compare", "--group", "SL2", "--word", "-1",
                           "--point", "1,1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["image"] == [2, 1]
