import io
import subprocess
import sys

import pytest

from selfnest import cli
from selfnest.tree import parse_tree, serialize_canonical


def run(argv, stdin="", monkeypatch=None, capsys=None):
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sh(monkeypatch, capsys):
    return lambda argv, stdin="": run(argv, stdin, monkeypatch, capsys)


def test_nest(sh):
    code, out, _ = sh(["nest"], "((())(()()))\n")
    assert code == 0
    assert out.splitlines() == ["((()())(()()))", "n_in=6 n_out=7 dist=1 delta=5/6"]


def test_nest_self_nested(sh):
    code, out, _ = sh(["nest"], "(()(()()))")
    assert out.splitlines() == ["(()(()()))", "n_in=5 n_out=5 dist=0 delta=1/1"]


def test_nest_embedded_spellings(sh):
    a = sh(["nest", "--embedded"], "((())(()()))")
    b = sh(["nest-embedded"], "((())(()()))")
    assert a == b
    assert a[1].splitlines() == ["((())(()))", "n_in=6 n_out=5 dist=1 delta=5/6"]


def test_check_selfnested(sh):
    code, out, _ = sh(["check-selfnested"], "((()())(()()))\n\n# comment\n((())(()()))\n")
    assert (code, out) == (0, "true\nfalse\n")


def test_profile_leaf(sh):
    assert sh(["profile"], "()") == (0, "dim 0\n", "")


def test_dag(sh):
    code, out, _ = sh(["dag"], "(()())")
    assert out.splitlines()[0] == "classes=2 height=1 linear=true nodes=3"
    code, out, _ = sh(["dag", "--dot"], "(()())")
    assert out.startswith("digraph") and "[label=\"2\"]" in out


def test_parse_error_exit_1(sh):
    code, out, err = sh(["nest"], "(()\n")
    assert code == 1 and out == ""
    assert "line 1" in err


def test_missing_file_exit_1(sh, tmp_path):
    code, _, err = sh(["profile", str(tmp_path / "nope.txt")])
    assert code == 1 and err


def test_internal_assertion_exit_2(sh, monkeypatch):
    from selfnest import approx

    def boom(*a, **k):
        raise approx.NegativeRowError("probe")

    monkeypatch.setattr(approx, "nest", boom)
    code, _, err = sh(["nest"], "(())")
    assert code == 2 and "probe" in err


def test_oracle(sh):
    code, out, err = sh(["oracle", "nest"], "((())(()()))")
    assert code == 0 and out.splitlines()[0] == "((()())(()()))"
    code, out, err = sh(["nest", "--embedded", "--oracle"], "((())(()()))")
    assert code == 0 and "2 non-isomorphic optima" in err
    assert out.splitlines()[:2] == ["((())(()))", "(()(()()))"]


def test_oracle_refuses_big(sh):
    code, _, err = sh(["oracle", "nest"], "(" + "()" * 12 + ")")
    assert code == 1 and "12" in err


def test_random(sh):
    code, out, _ = sh(["random", "--nodes", "10", "--seed", "42"])
    assert out.strip() == "(()()()(())(()(())))"
    code, out, _ = sh(["random", "--nodes", "6", "--count", "3"])
    assert len(out.splitlines()) == 3 and all(len(parse_tree(x)) == 6 for x in out.splitlines())
    assert sh(["random", "--nodes", "0"])[0] == 1


def test_jobs_keep_order(sh):
    trees = "\n".join(["(()(()()))", "((())(()()))", "(((()))((())(())))", "()"])
    assert sh(["nest", "--jobs", "2"], trees) == sh(["nest"], trees)


def test_bench(sh, tmp_path):
    csv, svg, viol = tmp_path / "b.csv", tmp_path / "b.svg", tmp_path / "v.txt"
    code, out, _ = sh(["bench", "--sizes", "10,20", "--trials", "3", "--csv", str(csv), "--svg", str(svg), "--violations", str(viol)])
    assert code == 0 and "violations" in out
    assert len(csv.read_text().splitlines()) == 7
    assert svg.exists()


def test_pipe_idempotent():
    tree = "(((()))((())(())))\n((())(()()))\n"
    once = subprocess.run(["selfnest", "nest"], input=tree, capture_output=True, text=True, check=True).stdout
    twice = subprocess.run(["selfnest", "nest"], input=once, capture_output=True, text=True, check=True).stdout
    trees_once = [x for x in once.splitlines() if not x.startswith("n_in=")]
    trees_twice = [x for x in twice.splitlines() if not x.startswith("n_in=")]
    assert trees_once == trees_twice
    assert all(x == serialize_canonical(parse_tree(x)) for x in trees_twice)


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "selfnest.cli", "check-selfnested"], input="()", capture_output=True, text=True)
    assert (r.returncode, r.stdout) == (0, "true\n")
