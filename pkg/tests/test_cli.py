import json
import subprocess
import sys

import pytest

from monofree.cli import EXIT_EXHAUSTED, EXIT_INPUT, EXIT_OK, EXIT_UNSTABLE, EXIT_VERIFY, main, parse_mixed_word

TP = "two_point(-1,1,1/2)"
SC = "semicircle(1)"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_convolve_both_table(capsys):
    code, out, _ = run(capsys, "convolve", "--a", TP, "--b", TP, "--order", "6")
    assert code == EXIT_OK
    last = out.strip().splitlines()[-1].split()
    assert last[:4] == ["6", "20", "20", "yes"]
    assert "seed=0" in out


def test_convolve_representation_json(capsys):
    code, out, _ = run(capsys, "convolve", "--a", "point(1)", "--b", "point(2)", "--order", "3",
                       "--method", "representation", "--format", "json")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["moments"][0]["representation"] == "3"
    assert report["moments"][0]["certificate"]["stable"] is True
    assert report["seed"] == 0


def test_convolve_oracle(capsys):
    code, out, _ = run(capsys, "convolve", "--a", SC, "--b", SC, "--order", "4", "--method", "oracle",
                       "--format", "json")
    assert json.loads(out)["moments"][3]["oracle"] == "8"


def test_rationals_printed_exactly(capsys):
    code, out, _ = run(capsys, "convolve", "--a", "two_point(0,1,1/3)", "--b", SC, "--order", "3",
                       "--format", "json")
    report = json.loads(out)
    assert report["moments"][0]["oracle"] == "2/3"
    assert report["all_equal"] is True


def test_embedding_path(capsys):
    code, out, _ = run(capsys, "convolve", "--a", TP, "--b", SC, "--order", "4", "--path", "embedding")
    assert code == EXIT_OK and out.strip().splitlines()[-1].split()[1] == "7"


def test_output_is_reproducible(capsys):
    first = run(capsys, "verify", "confluence", "--seed", "13", "--size", "40", "--format", "json")
    second = run(capsys, "verify", "confluence", "--seed", "13", "--size", "40", "--format", "json")
    assert first == second
    assert json.loads(first[1])["seed"] == 13


@pytest.mark.parametrize("suite", ["hierarchy", "confluence"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", suite, "--format", "json")
    report = json.loads(out)
    assert code == EXIT_OK and report["passed"]
    assert all(p["instances"] > 0 for p in report["properties"])


def test_reduce_examples(capsys):
    assert run(capsys, "reduce", "--algebra", "F0", "q1 X''(3)")[1].strip() == "q1 X'(3)"
    assert run(capsys, "reduce", "--algebra", "H0", "q0 X(1)")[1].strip() == "0"
    # the adjoint of the absorption rule also removes q2 on the right
    assert run(capsys, "reduce", "--algebra", "F0", "q3 X'(1) q2")[1].strip() == "X'(1)"


def test_mixed(capsys):
    code, out, _ = run(capsys, "mixed", "--spec", TP, "--spec", SC, "--word", "1:X | 2:X | 1:X | 2:X",
                       "--center", "--format", "json")
    report = json.loads(out)
    assert code == EXIT_OK
    assert report["representation"] == report["oracle"] == "0"
    code, out, _ = run(capsys, "mixed", "--spec", "two_point(0,2,1/3)", "--spec", "point(5)",
                       "--word", "1:X | 2:X | 1:X", "--m", "1", "--format", "json")
    assert json.loads(out)["representation"] == "80/9"


def test_parse_mixed_word():
    word = parse_mixed_word("1:X | 2:X X - 1")
    assert [leg for leg, _ in word] == [1, 2]
    assert word[1][1].format() == "-1 + X X"


@pytest.mark.parametrize("argv", [
    ["reduce", "q1 X''("],
    ["convolve", "--a", "bogus(1)", "--b", SC],
    ["convolve", "--a", TP, "--b", SC, "--order", "11"],
    ["mixed", "--spec", TP, "--word", "3:X"],
    ["mixed", "--spec", TP, "--word", "X"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and err.startswith("error:")


def test_non_stabilized_exit_code(capsys):
    code, _, err = run(capsys, "convolve", "--a", TP, "--b", TP, "--order", "4", "--truncation", "1",
                       "--method", "representation")
    assert code == EXIT_UNSTABLE
    assert "K=1" in err and "K=2" in err


def test_spec_exhausted_exit_code(capsys):
    code, _, err = run(capsys, "convolve", "--a", "custom(0,1)", "--b", SC, "--order", "4")
    assert code == EXIT_EXHAUSTED


def test_verification_failure_exit_code(capsys, monkeypatch):
    import monofree.cli as cli

    monkeypatch.setattr(cli, "free_convolve_oracle", lambda a, b, n: [99] * n)
    code, out, _ = run(capsys, "convolve", "--a", TP, "--b", TP, "--order", "2")
    assert code == EXIT_VERIFY and "NO" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "monofree", "reduce", "--algebra", "H0", "q2 q5 X(1) q7"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "X(1)"
