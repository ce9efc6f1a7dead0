from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from flagcremona import tables
from flagcremona.cli import main

GOLDEN = Path(__file__).resolve().parent.parent / "golden" / "v1"


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "E7", "--format", "tsv")
    assert code == 0
    assert "positive roots\t63" in out
    assert "w0 is -id\tyes" in out
    code, out, _ = run(capsys, "roots", "A2", "--format", "json")
    doc = json.loads(out)
    rows = {r["item"]: r["value"] for r in doc["rows"]}
    assert rows["lambda_1"] == "2/3 1/3"


def test_fixed_points_e7(capsys):
    code, out, _ = run(capsys, "fixed-points", "E7(7)", "--cochar", "7", "--format", "tsv")
    assert code == 0
    body = [line for line in out.splitlines() if line and not line.startswith("#")]
    assert len(body) == 1 + 4
    assert [line.split("\t")[0] for line in body[1:]] == ["0", "1", "2", "3"]


def test_fixed_points_warns_when_not_short(capsys):
    code, out, _ = run(capsys, "fixed-points", "E7(1)", "--format", "tsv")
    assert code == 0
    assert "not equalized" in out


def test_table3(capsys):
    code, out, _ = run(capsys, "table", "3", "--max-rank", "8", "--format", "tsv")
    assert code == 0
    fams = {line.split("\t")[0] for line in out.splitlines()[1:] if not line.startswith("#")}
    assert fams == {"A_{2n-1}(n)", "C_n(n)", "B_n(1)", "D_n(1)", "D_n(n)", "E_7(7)"}


def test_verify_inversion(capsys):
    code, out, _ = run(capsys, "verify-inversion", "--n", "4", "--count", "100", "--seed", "7", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 100 and all(r["pass"] for r in doc["rows"])
    assert doc["notes"] == ["100/100 pass"]
    assert all(isinstance(r["c"], str) for r in doc["rows"])


def test_verify_inversion_kinds(capsys):
    assert run(capsys, "verify-inversion", "--n", "3", "--count", "5", "--symmetric")[0] == 0
    assert run(capsys, "verify-inversion", "--n", "4", "--count", "5", "--skew")[0] == 0
    code, _, err = run(capsys, "verify-inversion", "--n", "3", "--skew")
    assert code == 1 and "even" in err


def test_verify_quadric(capsys):
    code, out, _ = run(capsys, "verify-quadric", "--dim", "5", "--seed", "1", "--format", "tsv")
    assert code == 0 and "20/20 pass" in out


def test_xbar_and_exc(capsys):
    code, out, _ = run(capsys, "xbar", "E7", "--node", "7", "--format", "tsv")
    assert code == 0 and "E6(1)" in out
    code, out, _ = run(capsys, "exc", "C4", "--node", "4", "--format", "tsv")
    assert code == 0 and "isomorphism\tyes" in out
    code, _, err = run(capsys, "exc", "E7", "--node", "1")
    assert code == 1 and "short grading" in err


def test_short_gradings(capsys):
    code, out, _ = run(capsys, "short-gradings", "D6", "--format", "tsv")
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()[1:] if not line.startswith("#")] == ["1", "5", "6"]


@pytest.mark.parametrize(
    "argv,fragment",
    [
        (["roots", "E9"], "position"),
        (["roots", "A3+"], "position"),
        (["fixed-points", "A3(2"], "position"),
        (["fixed-points", "A3(2)", "--cochar", "x"], "--cochar"),
        (["fixed-points", "A3(2)", "--cochar", "7"], "outside"),
        (["verify-inversion", "--n", "0"], "positive"),
        (["frobnicate"], "invalid choice"),
        (["table", "9"], "invalid choice"),
        (["roots", "E8", "--format", "xml"], "invalid choice"),
    ],
)
def test_input_errors_exit_1(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert fragment in err


def test_usage_errors_use_status_1():
    proc = subprocess.run([sys.executable, "-m", "flagcremona", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "invalid choice" in proc.stderr


def test_coset_cap_is_an_input_error(capsys, monkeypatch):
    import flagcremona.cli as cli
    from flagcremona.weyl import CosetCapExceeded

    def boom(*args, **kwargs):
        raise CosetCapExceeded(10**6, 1000)

    monkeypatch.setattr(cli, "fixed_components", boom)
    code, _, err = run(capsys, "fixed-points", "E7(7)")
    assert code == 1 and "1000" in err


# -- golden files ------------------------------------------------------------------------


@pytest.mark.parametrize("ident", ["1", "3", "4", "5", "6"])
def test_golden_tables_match(capsys, ident):
    code, _, err = run(capsys, "table", ident, "--format", "tsv", "--diff-golden", str(GOLDEN))
    assert code == 0, err


def test_table4_perturbed_j_is_named(capsys, tmp_path):
    shutil.copy(GOLDEN / "table4.tsv", tmp_path / "table4.tsv")
    path = tmp_path / "table4.tsv"
    lines = path.read_text().splitlines()
    k = next(i for i, line in enumerate(lines) if line.startswith("E7(7)\t"))
    lines[k] = lines[k].rsplit("\t", 1)[0] + "\t2"
    path.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "table", "4", "--format", "tsv", "--diff-golden", str(tmp_path))
    assert code == 2
    assert f"line {k + 1}" in err and "E7(7)" in err


def test_footer_only_difference_is_ignored(capsys, tmp_path):
    text = (GOLDEN / "table4.tsv").read_text().replace("version=0.1.0", "version=9.9.9")
    (tmp_path / "table4.tsv").write_text(text)
    code, _, _ = run(capsys, "table", "4", "--format", "tsv", "--diff-golden", str(tmp_path))
    assert code == 0
    doc = json.loads((GOLDEN / "table4.json").read_text())
    doc["provenance"]["version"] = "0.0.0"
    (tmp_path / "table4.json").write_text(json.dumps(doc))
    code, _, _ = run(capsys, "table", "4", "--format", "json", "--diff-golden", str(tmp_path))
    assert code == 0


def test_missing_golden_explains_bootstrap(capsys, tmp_path):
    code, _, err = run(capsys, "table", "1", "--format", "tsv", "--diff-golden", str(tmp_path))
    assert code == 1
    assert "--write-golden" in err


def test_write_then_diff(capsys, tmp_path):
    assert run(capsys, "table", "1", "--format", "markdown", "--write-golden", str(tmp_path))[0] == 0
    assert (tmp_path / "table1.md").exists()
    assert run(capsys, "table", "1", "--format", "markdown", "--diff-golden", str(tmp_path))[0] == 0


@pytest.mark.parametrize("fmt", tables.FORMATS)
def test_idempotent_output(capsys, fmt):
    first = run(capsys, "table", "4", "--format", fmt)[1]
    second = run(capsys, "table", "4", "--format", fmt)[1]
    assert first == second


def test_diff_golden_function():
    t = tables.build("1", 4)
    text = tables.render(t, "tsv")
    assert tables.diff_golden(text, text, "tsv").equal
    other = text.replace("A3", "A9", 1)
    d = tables.diff_golden(text, other, "tsv")
    assert not d.equal and d.line is not None and "A9" in d.describe()


def test_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FLAGCREMONA_CACHE", str(tmp_path))
    assert run(capsys, "fixed-points", "D5(5)", "--format", "tsv")[0] == 0
    assert any(p.name.startswith("v1_D5") for p in tmp_path.iterdir())
