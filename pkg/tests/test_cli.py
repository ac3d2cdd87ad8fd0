import json
import subprocess
import sys

import pytest
from gmpy2 import mpq

from turanpoly.cli import UsageError, parse_grid, run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_grid():
    assert parse_grid("0:1:0.25") == [0, mpq(1, 4), mpq(1, 2), mpq(3, 4), 1]
    assert parse_grid("3,1,2") == [1, 2, 3]
    assert len(parse_grid("0:1:0.01")) == 101
    assert parse_grid("0:1:0.1")[-1] == 1


@pytest.mark.parametrize("text", ["0:1", "1:0:0.1", "0:1:0", "a,b", "", "0:1:x"])
def test_parse_grid_rejects(text):
    with pytest.raises(UsageError):
        parse_grid(text)


def test_parse_grid_bounds():
    with pytest.raises(UsageError):
        parse_grid("-1:1:1", lower=0)


def test_gen_example(capsys):
    code, out, _ = invoke(capsys, "gen", "--h", "id", "--n", "3")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    p3 = {int(k): c for n, k, c in rows if n == "3"}
    assert p3 == {0: "0", 1: "1", 2: "1", 3: "1/6"}
    assert {int(k): c for n, k, c in rows if n == "2"} == {0: "0", 1: "1", 2: "1/2"}


def test_gen_json_embeds_config(capsys):
    code, out, _ = invoke(capsys, "gen", "--h", "one", "--n", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["config"]["subcommand"] == "gen"
    assert doc["config"]["h"] == ["one"]
    assert doc["families"][0]["polynomials"][2] == ["0", "2", "1"]


def test_gen_check_generators(capsys):
    code, out, _ = invoke(capsys, "gen", "--h", "one", "--h", "power:1/2", "--n", "12", "--check-generators",
                          "--format", "json")
    assert code == 0
    assert all(c["agree"] for c in json.loads(out)["generator_comparison"])


def test_unknown_spec_is_usage_error(capsys):
    code, _, err = invoke(capsys, "gen", "--h", "cosine", "--n", "3")
    assert code == 2
    assert "cosine" in err


def test_malformed_grid_is_usage_error(capsys):
    code, _, _ = invoke(capsys, "turan", "--n-max", "5", "--s-grid", "1:0:0.1")
    assert code == 2


def test_missing_required_flag(capsys):
    assert invoke(capsys, "favard")[0] == 2
    assert invoke(capsys, "nonsense")[0] == 2


def test_precision_floor(capsys):
    assert invoke(capsys, "gen", "--n", "2", "--precision", "20")[0] == 2


def test_failed_check_exit_code(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text("1\n1\n1/10\n1/10\n")
    code, out, err = invoke(capsys, "turan", "--h", f"table:{path}", "--n-max", "2", "--x-grid", "0,1,2")
    assert code == 1
    assert json.loads(out)["passed"] is False
    assert json.loads(err)["passed"] is False


def test_library_error_exit_code(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text("1\n1\n5\n5\n")
    code, _, err = invoke(capsys, "bounds", "--h", f"table:{path}", "--n-max", "2", "--x-grid", "0", "--checks", "monotone")
    assert code == 1
    assert json.loads(err)["error"] == "NegativeDiscriminantError"


def test_output_file_and_summary(tmp_path, capsys):
    target = tmp_path / "moments.csv"
    code, out, _ = invoke(capsys, "moments", "--h", "one", "--n", "2", "--output", str(target))
    assert code == 0
    assert target.read_text() == "h,k,mu\none,0,1\none,1,-2\none,2,5\n"
    assert json.loads(out)["config"]["output"] == str(target)


def test_moments_affine(capsys):
    code, out, _ = invoke(capsys, "moments", "--h", "one", "--n", "2", "--affine", "1,-2")
    assert out.splitlines()[1:] == ["one,0,1", "one,1,0", "one,2,1"]


def test_favard_verdicts(capsys):
    code, out, _ = invoke(capsys, "favard", "--h", "one", "--h", "altsign", "--n", "4")
    doc = json.loads(out)
    assert code == 0
    assert [r["verdict"] for r in doc["reports"]] == ["positive-definite", "quasi-definite"]


def test_verify_records_variant(capsys):
    code, out, _ = invoke(capsys, "verify", "--n-max", "6")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["sign_variant_identities"]["p_h1_laguerre"]["resolved_variant"] == "-x"


def test_bounds_lemma(capsys):
    code, out, _ = invoke(capsys, "bounds", "--h", "id", "--n-max", "10", "--checks", "lemma")
    assert code == 0
    assert json.loads(out)["reports"][0]["lemma_side_conditions"]["all_hold"]


def test_bounds_unknown_check(capsys):
    assert invoke(capsys, "bounds", "--n-max", "3", "--checks", "lemma,magic")[0] == 2


def test_zeros_single_degree(capsys):
    code, out, _ = invoke(capsys, "zeros", "--h", "one", "--n", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "h,n,index,zero"
    assert out.splitlines()[-1] == "one,4,3,0"


def test_precision_env_override(tmp_path):
    cmd = [sys.executable, "-m", "turanpoly", "gen", "--h", "power:1/2", "--n", "2", "--format", "json"]
    doc = json.loads(subprocess.run(cmd, capture_output=True, text=True, check=True,
                                    env={"TURANPOLY_PRECISION": "200", "PATH": ""}).stdout)
    assert doc["config"]["precision"] == 200


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--h", "power:1/3", "--n", "6"],
        ["turan", "--s-grid", "0:1:0.5", "--n-max", "6"],
        ["trajectory", "--n", "4", "--s-grid", "0:1:0.25"],
    ],
)
def test_byte_determinism(argv):
    cmd = [sys.executable, "-m", "turanpoly", *argv]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
