"""CLI tests, through a subprocess and in-process."""

import json

import pytest

from ccc_order import cli
from ccc_order.jacobian import CurvePairSpec

LEMMA_GENERATORS = ["--gen=0,1,-1,0", "--gen=1,0,1,1"]
CM_2_1_GENERATORS = ["--gen=0,1,-2,0", "--gen=-1,0,0,-2"]


def test_order_non_isogenous(run_cli):
    completed = run_cli("order", "--n", "7")
    assert completed.returncode == 0, completed.stderr
    payload = json.loads(completed.stdout)
    assert payload["order"] == 7
    assert payload["method"] == "generic-formula"
    assert payload["d_of_n"] == 7
    assert payload["pair"] == {"kind": "non-isogenous"}


def test_order_cm_pair(run_cli):
    completed = run_cli("order", "--pair", "cm", "--m", "2", "--d=-1", "--n", "4")
    assert completed.returncode == 0, completed.stderr
    payload = json.loads(completed.stdout)
    assert payload["order"] == 1
    assert payload["method"] == "congruence-solver"
    assert payload["certificate"] == [{"divisor": 1, "modulus": 2, "solvable": True, "solution": [1, 0, 0, 1]}]


def test_order_rational_fibre(run_cli):
    payload = json.loads(run_cli("order", "--n", "1").stdout)
    assert payload["order"] == 1
    assert payload["method"] == "rational-fiber"


def test_order_with_torsion_point(run_cli):
    payload = json.loads(run_cli("order", "--n", "6", "--t", "1/6,1/3").stdout)
    assert payload["order"] == 3


def test_order_tsv(run_cli):
    completed = run_cli("order", "--n", "7", "--format", "tsv")
    assert completed.returncode == 0, completed.stderr
    assert completed.stdout.splitlines() == [
        "pair\tm\td\tn\torder\tmethod\td_of_n",
        "non-isogenous\t-\t-\t7\t7\tgeneric-formula\t7",
    ]


def test_sweep_cm_grid(run_cli):
    completed = run_cli("sweep", "--pair", "cm", "--m-range", "1:4", "--d-range=-2:-1", "--n", "4")
    assert completed.returncode == 0, completed.stderr
    rows = json.loads(completed.stdout)
    cells = [(row["pair"]["m"], row["pair"]["d"], row["order"]) for row in rows]
    assert cells == [
        (1, -2, 2),
        (1, -1, 2),
        (2, -2, 2),
        (2, -1, 1),
        (3, -2, 2),
        (3, -1, 2),
        (4, -2, 2),
        (4, -1, 1),
    ]


def test_sweep_n_range(run_cli):
    completed = run_cli("sweep", "--n-range", "3:8", "--format", "tsv")
    assert completed.returncode == 0, completed.stderr
    lines = completed.stdout.splitlines()
    assert lines[0] == "pair\tm\td\tn\torder\tmethod\td_of_n"
    assert [int(line.split("\t")[4]) for line in lines[1:]] == [3, 2, 5, 3, 7, 4]


def test_sweep_is_deterministic(run_cli):
    args = ("sweep", "--pair", "cm", "--m-range", "1:6", "--d-range=-3:-1", "--n-range", "3:8")
    single = run_cli(*args, env={"CCC_THREADS": "1"})
    several = run_cli(*args, env={"CCC_THREADS": "4"})
    assert single.returncode == several.returncode == 0
    assert single.stdout == several.stdout == run_cli(*args).stdout


def test_solve_congruence(run_cli):
    completed = run_cli("solve-congruence", "--gamma", "1,0", *CM_2_1_GENERATORS, "--modulus", "2")
    assert completed.returncode == 0, completed.stderr
    payload = json.loads(completed.stdout)
    assert payload["solvable"] is True
    assert payload["solution"] == [1, 0, 0, 1]
    assert payload["target"] == [0, 1, -1, 0]
    assert payload["generators"] == [[0, 1, -2, 0], [-1, 0, 0, -2]]


@pytest.mark.parametrize("gamma", ["1,0", "0,1", "1,1"])
def test_solve_congruence_unsolvable(run_cli, gamma):
    completed = run_cli("solve-congruence", "--gamma", gamma, *LEMMA_GENERATORS, "--modulus", "2")
    assert completed.returncode == 0, completed.stderr
    payload = json.loads(completed.stdout)
    assert payload["solvable"] is False
    assert payload["solution"] is None


def test_solve_congruence_modulus_one(run_cli):
    completed = run_cli("solve-congruence", *LEMMA_GENERATORS, "--modulus", "1", "--format", "tsv")
    assert completed.stdout.splitlines() == ["modulus\tsolvable\tsolution", "1\ttrue\t0,0,0,0"]


def test_verify_lattice(run_cli):
    completed = run_cli("verify-lattice")
    assert completed.returncode == 0, completed.stderr
    assert json.loads(completed.stdout) == {
        "rank": 16,
        "discriminant": 64,
        "pullback_index": 2048,
        "glue_index": 32,
        "weight_enumerator": "1 + 30z^8 + z^16",
        "ok": True,
    }


def test_realize(run_cli):
    payload = json.loads(run_cli("realize", "--order", "6").stdout)
    assert payload["k"] == 6
    assert payload["n"] == 12
    assert payload["result"]["order"] == 6


def test_out_file(run_cli, tmp_path):
    out = tmp_path / "report.json"
    completed = run_cli("realize", "--order", "1", "--out", str(out))
    assert completed.returncode == 0, completed.stderr
    assert completed.stdout == ""
    assert json.loads(out.read_text(encoding="utf-8"))["result"]["order"] == 1


def test_out_file_in_missing_directory(run_cli, tmp_path):
    out = tmp_path / "missing" / "report.json"
    completed = run_cli("order", "--n", "7", "--out", str(out))
    assert completed.returncode == 2
    assert "Cannot write the report to" in completed.stderr
    assert "Traceback" not in completed.stderr
    assert not out.exists()


def test_thread_count_only_matters_for_sweep(run_cli):
    completed = run_cli("order", "--n", "7", env={"CCC_THREADS": "0"})
    assert completed.returncode == 0, completed.stderr
    assert json.loads(completed.stdout)["order"] == 7
    assert run_cli("sweep", "--n", "7", env={"CCC_THREADS": "0"}).returncode == 2


def test_verbose_logs_go_to_stderr(run_cli):
    completed = run_cli("order", "--n", "7", "-v")
    assert "ccc_order.cli [INFO] Order 7 for n=7" in completed.stderr
    assert json.loads(completed.stdout)["order"] == 7


@pytest.mark.parametrize(
    "args, env",
    [
        (("order", "--n", "0"), None),
        (("order", "--pair", "cm", "--n", "4"), None),
        (("order", "--n", "8", "--t", "1/4,0"), None),
        (("order", "--n", "4", "--t", "1/4"), None),
        (("order", "--n", "4", "--t", "1/0,0"), None),
        (("order", "--pair", "no-cm", "--n", "4"), None),
        (("sweep", "--n-range", "5:3"), None),
        (("sweep", "--n", "4"), {"CCC_THREADS": "0"}),
        (("solve-congruence", "--modulus", "0"), None),
        (("realize", "--order", "0"), None),
        (("order", "--n", "4", "--unknown"), None),
        (("frobnicate",), None),
    ],
)
def test_invalid_input_exits_with_two(run_cli, args, env):
    completed = run_cli(*args, env=env)
    assert completed.returncode == 2
    assert completed.stdout == ""


def test_main_in_process(capsys):
    assert cli.main(["order", "--n", "9"]) == 0
    assert json.loads(capsys.readouterr().out)["order"] == 9


def test_main_reports_inconsistency(capsys, monkeypatch):
    monkeypatch.setattr(cli, "realize_order", lambda k: (CurvePairSpec.non_isogenous(), 5))
    assert cli.main(["realize", "--order", "3"]) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "Realized order 5 instead of 3" in captured.err


def test_lattice_mismatch_exits_with_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "EXPECTED_KUMMER", {**cli.EXPECTED_KUMMER, "glue_index": 16})
    assert cli.main(["verify-lattice"]) == 1
    assert json.loads(capsys.readouterr().out)["ok"] is False


def test_argparse_errors_exit_with_two():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["order"])
    assert excinfo.value.code == 2


@pytest.mark.parametrize(
    "text, expected",
    [("3", (3,)), ("1:4", (1, 2, 3, 4)), ("-2:-1", (-2, -1))],
)
def test_parse_range(text, expected):
    assert cli.parse_range(text) == expected


@pytest.mark.parametrize("text", ["a:b", "1:2:3", "4:1"])
def test_parse_range_invalid(text):
    with pytest.raises(ValueError):
        cli.parse_range(text)


def test_worker_count():
    assert cli.worker_count({"CCC_THREADS": "3"}) == 3
    assert cli.worker_count({}) >= 5
    with pytest.raises(ValueError, match="CCC_THREADS must be a positive integer"):
        cli.worker_count({"CCC_THREADS": "many"})
