import os
import subprocess
import sys
from pathlib import Path

import pytest

from pseudochord.cli import main
from pseudochord.matching import parse_matching

REPO = Path(__file__).resolve().parent.parent


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("family,want", [("(1)x5", "62"), ("(1)x7", "24698"), ("(2,2,1)", None)])
def test_count(capsys, family, want):
    code, out, err = run(capsys, "count", family)
    assert code == 0 and "elapsed" in err
    if want:
        assert out.strip() == want


def test_count_nested2_file(capsys):
    assert run(capsys, "count", str(REPO / "data" / "nested2.match"))[1].strip() == "1"


def test_count_options_agree(capsys):
    outs = {run(capsys, "count", "(1)x6", *extra)[1].strip() for extra in (
        [], ["--independence"], ["--order", "5,4,3,2,1,0"], ["--threads", "2"], ["--seed", "9"],
    )}
    assert outs == {"908"}


def test_tsv_output(capsys):
    assert run(capsys, "count", "(1)x4", "--format", "tsv")[1] == "(1)x4\t4\t8\n"
    assert run(capsys, "bn", "5", "--format", "tsv")[1] == "5\t62\n"
    assert run(capsys, "lgv", "--size", "2", "--format", "tsv")[1] == "2\t4\t20\n"
    out = run(capsys, "bound", "--table", "matousek", "--r", "3", "--format", "tsv")[1]
    assert out.splitlines()[-1] == "FINAL\tr=3\t\t0.125000000000"


def test_bn(capsys):
    assert run(capsys, "bn", "1")[1].strip() == "1"
    assert run(capsys, "bn", "6")[1].strip() == "908"
    assert run(capsys, "bn", "0")[0] == 2


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "count", "(1)x7", "--budget", "100")[0] == 3
    monkeypatch.setenv("BUDGET", "100")
    assert run(capsys, "bn", "7")[0] == 3
    monkeypatch.delenv("BUDGET")
    assert run(capsys, "count", "(0)")[0] == 2
    assert run(capsys, "count", "/nonexistent.match")[0] == 2
    assert run(capsys, "count", "(1)x3", "--order", "0,1")[0] == 2
    assert run(capsys, "bound", "--table", "nosuchtable")[0] == 2
    assert run(capsys, "count", "(1)x3", "--threads", "-1")[0] == 2


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("THREADS", "2")
    monkeypatch.setenv("SEED", "11")
    assert run(capsys, "bn", "6")[1].strip() == "908"
    monkeypatch.setenv("SEED", "eleven")
    assert run(capsys, "bn", "3")[0] == 2


def test_lgv(capsys):
    assert run(capsys, "lgv", "--size", "3")[1].strip() == "1320"
    assert run(capsys, "lgv", "--size", "30", "--log2-only")[1].startswith("log2 >= ")


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--r", "12")
    assert code == 0
    assert "clears published 34.374" in out and "clears published 0.2604" in out
    out = run(capsys, "bound", "--table", "warmup", "--r", "3")[1]
    assert "0.135060252965" in out


def test_bound_recompute_region(capsys, tmp_path):
    table = tmp_path / "t.tsv"
    table.write_text("X 1 1/2\n")
    code, out, _ = run(capsys, "bound", "--table", str(table), "--r", "3",
                       "--recompute-region", "X", "(1)x3", "--recompute-region", "X", "(1)x4")
    assert code == 0
    # 2 * 8 arrangements: log2 16 = 4, times 1/2
    assert "matching constant c >= 2.000000000000" in out
    assert run(capsys, "bound", "--table", str(table), "--recompute-region", "Y", "(1)x3")[0] == 2


def test_regions(capsys):
    out = run(capsys, "regions", "--areas")[1].splitlines()
    assert out[0] == "signature\tarea\tregion"
    assert len(out) == 20
    assert "{0,1/3,1/2}\t1\tR_R" in out
    assert "19 regions" in run(capsys, "regions")[1]


def test_extract(capsys, tmp_path):
    target = tmp_path / "w.match"
    code, _, err = run(capsys, "extract", "--pattern", "matousek", "--center", "5/8", "5/8",
                       "--side", "3/2", "-o", str(target))
    assert code == 0 and "written" in err
    m = parse_matching(target.read_text())
    assert m.k == 7
    assert run(capsys, "count", str(target))[1].strip() == "20"
    assert run(capsys, "extract", "--pattern", "matousek", "--center", "0", "0", "--side", "1")[0] == 2
    code, out, err = run(capsys, "extract", "--pattern", "matousek", "--center", "0", "0",
                         "--side", "1", "--epsilon-shift")
    assert code == 0 and "shifted" in err and out.startswith("4\n")
    assert run(capsys, "extract", "--pattern", "rect12", "--center", "1/7", "1/9", "--side", "1",
               "--shear", "1", "1", "0", "1")[0] == 0


def test_verify_fast(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "FAIL" not in out and "checks passed" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pseudochord", "count", "(1)x4"],
                         capture_output=True, text=True, env={**os.environ, "THREADS": "1"})
    assert res.returncode == 0 and res.stdout == "8\n"
