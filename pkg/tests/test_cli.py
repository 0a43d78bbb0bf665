import os

import pytest

from cli_manifest import GOLDEN_COMMANDS
from veq import cli
from veq.errors import InvariantError

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")


@pytest.fixture(autouse=True)
def _at_repo_root(monkeypatch):
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("VEQ_BUDGET", raising=False)


@pytest.mark.parametrize(
    "name,argv,want_exit",
    GOLDEN_COMMANDS,
    ids=[name for name, _, _ in GOLDEN_COMMANDS],
)
def test_golden(name, argv, want_exit, capsys):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    with open(os.path.join(GOLDEN_DIR, name + ".txt")) as fh:
        want = fh.read()
    assert out == want
    assert code == want_exit


def test_unknown_verb(capsys):
    code = cli.main(["frobnicate", "--json"])
    captured = capsys.readouterr()
    assert code == 2
    assert captured.out == ""
    assert "unknown verb" in captured.err


def test_undefined_name(capsys):
    code = cli.main(["solve", "Nope", "--json", "-f", "corpus/finset.veq"])
    captured = capsys.readouterr()
    assert code == 2
    assert captured.out == ""
    assert "undefined system 'Nope'" in captured.err


def test_missing_workspace(capsys):
    code = cli.main(["solve", "E", "--json"])
    captured = capsys.readouterr()
    assert code == 2
    assert "undefined system 'E'" in captured.err


def test_parse_error_in_file(tmp_path, capsys):
    bad = tmp_path / "bad.veq"
    bad.write_text("set A = {\n")
    code = cli.main(["solve", "E", "--json", "-f", str(bad)])
    captured = capsys.readouterr()
    assert code == 2
    assert captured.out == ""
    assert captured.err.startswith("veq: ")


def test_load_invariant_error_in_file(tmp_path, capsys):
    bad = tmp_path / "bad.veq"
    bad.write_text(
        "set A = {a}\n"
        "set B = {x}\n"
        "fun p : A -> B = {a -> x}\n"
        "fun q : B -> A = {x -> a}\n"
        "system E on A { p ~ q }\n"
    )
    code = cli.main(["solve", "E", "--json", "-f", str(bad)])
    captured = capsys.readouterr()
    assert code == 2
    assert "system E" in captured.err


def test_usage_error(capsys):
    code = cli.main(["recurrence", "fib", "2", "--json",
                     "-f", "corpus/series.veq"])
    captured = capsys.readouterr()
    assert code == 2
    assert "usage:" in captured.err


def test_negative_order_is_usage_error(capsys):
    code = cli.main(["recurrence", "fib", "order", "-1", "--json",
                     "-f", "corpus/series.veq"])
    captured = capsys.readouterr()
    assert code == 2
    assert "non-negative" in captured.err


def test_precision_exhausted_is_argument_error(capsys):
    code = cli.main(["recurrence", "fib", "order", "2", "--prec", "3",
                     "--json", "-f", "corpus/series.veq"])
    captured = capsys.readouterr()
    assert code == 2
    assert "PrecisionExhausted" in captured.err


def test_internal_violation_exits_3(monkeypatch, capsys):
    def boom(ws, args, opts):
        raise InvariantError("synthetic breakage")

    monkeypatch.setitem(cli.HANDLERS, "solve", boom)
    code = cli.main(["solve", "E", "--json", "-f", "corpus/finset.veq"])
    captured = capsys.readouterr()
    assert code == 3
    assert captured.out == ""
    assert "internal invariant violated" in captured.err


def test_budget_env_default(monkeypatch, capsys):
    monkeypatch.setenv("VEQ_BUDGET", "5")
    code = cli.main(["decide", "Mon", "m(x,y)", "m(y,x)", "--json",
                     "-f", "corpus/theories.veq"])
    out = capsys.readouterr().out
    assert code == 1
    assert '"expansions": 5' in out


def test_budget_flag_overrides_env(monkeypatch, capsys):
    monkeypatch.setenv("VEQ_BUDGET", "5")
    code = cli.main(["decide", "Mon", "m(x,y)", "m(y,x)", "--budget", "7",
                     "--json", "-f", "corpus/theories.veq"])
    out = capsys.readouterr().out
    assert code == 1
    assert '"expansions": 7' in out


def test_json_record_is_single_line(capsys):
    cli.main(["solve", "E", "--json", "-f", "corpus/finset.veq"])
    out = capsys.readouterr().out
    assert out.count("\n") == 1
    assert out.endswith("\n")


def test_multiple_workspace_files(capsys):
    code = cli.main(["recurrence", "fib", "order", "2", "--json",
                     "-f", "corpus/finset.veq", "-f", "corpus/series.veq"])
    out = capsys.readouterr().out
    assert code == 0
    assert '"status": "zero-within-precision"' in out
