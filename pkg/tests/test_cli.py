import csv
import io
import json

import pytest
from click.testing import CliRunner

from qmastermind.cli import CSV_COLUMNS, _parse_grid, main


@pytest.fixture
def runner():
    return CliRunner()


def test_run_json(runner):
    result = runner.invoke(main, ["run", "--alg", "nonadaptive-k1", "--n", "4", "--k", "6", "--secret", "0123"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["recovered"] == "0123"
    assert payload["queries"] == payload["bound"] == 5
    assert payload["exact"] is True
    assert payload["ledger"]["black_peg"] == 5


def test_run_bad_secret_digit(runner):
    result = runner.invoke(main, ["run", "--alg", "adaptive-grover", "--n", "2", "--k", "3", "--secret", "03"])
    assert result.exit_code != 0
    assert "Error" in result.output


def test_run_binary_rejects_k3(runner):
    result = runner.invoke(main, ["run", "--alg", "one-query-binary", "--n", "2", "--k", "3"])
    assert result.exit_code != 0
    assert "requires k=2" in result.output


def test_run_unknown_algorithm(runner):
    result = runner.invoke(main, ["run", "--alg", "nope", "--n", "2", "--k", "3"])
    assert result.exit_code != 0


def test_run_dimension_cap(runner):
    result = runner.invoke(main, ["run", "--alg", "adaptive-grover", "--n", "3", "--k", "6", "--max-dim", "100"])
    assert result.exit_code != 0
    assert "cap" in result.output


def test_run_csv_and_text(runner):
    result = runner.invoke(main, ["run", "--alg", "inner-product", "--n", "2", "--k", "3", "--secret", "12", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(result.output)))
    assert list(rows[0]) == CSV_COLUMNS
    assert rows[0]["queries"] == "6" and rows[0]["exact"] == "True"
    result = runner.invoke(main, ["run", "--alg", "inner-product", "--n", "2", "--k", "3", "--secret", "12", "--format", "text"])
    assert result.output.startswith("inner-product: secret=12 recovered=12")


def test_run_padded(runner):
    result = runner.invoke(main, ["run", "--alg", "padded", "--n", "1", "--k", "3", "--secret", "2", "--pad-to", "2"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["recovered"] == "21"
    result = runner.invoke(main, ["run", "--alg", "padded", "--n", "1", "--k", "3", "--secret", "2"])
    assert result.exit_code != 0


def test_run_env_override(runner):
    result = runner.invoke(main, ["run", "--n", "2", "--k", "3", "--secret", "21"], env={"QMM_ALG": "adaptive-grover"})
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["algorithm"] == "adaptive-grover"


def test_run_is_byte_identical_for_same_seed(runner):
    args = ["run", "--alg", "adaptive-bw", "--n", "3", "--k", "6", "--seed", "42"]
    first = runner.invoke(main, args).output
    assert first == runner.invoke(main, args).output
    args = ["table", "--alg", "adaptive-grover", "--n", "2", "--k", "3..4", "--format", "csv", "--seed", "5"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output


def test_run_writes_out_file(runner, tmp_path):
    out = tmp_path / "r.json"
    result = runner.invoke(main, ["run", "--alg", "adaptive-grover", "--n", "1", "--k", "4", "--out", str(out)])
    assert result.exit_code == 0
    assert json.loads(out.read_text())["exact"] is True


def test_verify_pass(runner):
    result = runner.invoke(main, ["verify", "--alg", "adaptive-grover", "--n", "2", "--k", "5"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["runs"] == 25


def test_verify_hunziker_meyer_uses_bound_only(runner):
    result = runner.invoke(main, ["verify", "--alg", "hunziker-meyer", "--n", "1", "--k", "6", "--format", "text"])
    assert result.exit_code == 0, result.output
    assert result.output.startswith("PASS")


def test_verify_sampled_flag(runner):
    result = runner.invoke(
        main, ["verify", "--alg", "inner-product", "--n", "3", "--k", "4", "--budget", "10", "--sample", "5", "--format", "text"]
    )
    assert result.exit_code == 0, result.output
    assert "(sampled)" in result.output


def test_verify_failure_exits_nonzero(runner):
    result = runner.invoke(
        main, ["verify", "--alg", "adaptive-grover", "--n", "1", "--k", "5", "--tolerance", "-1", "--format", "text"]
    )
    assert result.exit_code == 1
    assert result.output.startswith("FAIL")


def test_table_rows(runner):
    result = runner.invoke(main, ["table", "--alg", "nonadaptive-k1", "--n", "2,3", "--k", "3..6", "--format", "csv"])
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.output)))
    assert len(rows) == 8
    assert all(int(r["queries"]) == int(r["k"]) - 1 == int(r["bound"]) for r in rows)


def test_table_empty_grid_is_header_only(runner):
    result = runner.invoke(main, ["table", "--n", "", "--format", "csv"])
    assert result.output == ",".join(CSV_COLUMNS) + "\n"


def test_table_skips_unsupported_pairs(runner):
    result = runner.invoke(main, ["table", "--alg", "one-query-binary", "--n", "2", "--k", "2..3", "--format", "json"])
    rows = json.loads(result.output)
    assert [r["k"] for r in rows] == [2]


@pytest.mark.parametrize("text, values", [("2,3", [2, 3]), ("3..6", [3, 4, 5, 6]), ("1,4..5", [1, 4, 5]), ("", [])])
def test_parse_grid(text, values):
    assert _parse_grid(text) == values
