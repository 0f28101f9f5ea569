import io
import json
import subprocess
import sys

import pytest

from nottingham import cli
from nottingham.commutator import CommutatorResult
from nottingham.series import GroupSeries


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_compose_example():
    code, out, _ = run("compose", "--p", "3", "--prec", "16", "t + t^4", "t + t^4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# nottingham version=0.1.0 p=3 q=3 N=16 seed=0"
    assert lines[1] == "result: t + 2*t^4 + t^7 + t^13 + t^16"


def test_verify_example_prints_tsv_rows():
    code, out, _ = run("verify", "--lemma", "5.2", "--p", "3", "--prec", "64", "--seed", "7", "--format", "tsv")
    assert code == 0
    assert "lemma\tparams\tstatus\twitness" in out
    assert "5.2\tp=3 draws=20\tpass\t" in out


def test_lambda_check_tsv_schema():
    code, out, _ = run("lambda", "check", "--family", "explicit", "--elements", "1", "--p", "2", "--horizon", "10", "--format", "tsv")
    assert code == 1
    lines = out.splitlines()
    assert lines[1] == "lambda_family\tp\thorizon\tpassed\tn_witnesses"
    assert lines[2] == "{1}\t2\t10\tfalse\t1"
    assert lines[4] == "1\t1\t2"


def test_json_mirrors_tsv():
    code, out, _ = run("lambda", "check", "--family", "B", "--p", "3", "--horizon", "50", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["header"]["p"] == 3
    assert data["criterion"] == [{"lambda_family": "B", "p": 3, "horizon": 50, "passed": "true", "n_witnesses": 0}]


def test_corrupted_recurrence_is_caught(monkeypatch):
    def broken(v, u):
        p, n = v.context
        return CommutatorResult.of(GroupSeries.from_terms(p, n, {n: 1}), "recurrence")

    monkeypatch.setattr(cli, "commutator_recurrence", broken)
    code, out, _ = run("commutator", "--p", "3", "--prec", "20", "t + t^4", "t + t^7")
    assert code == 1 and "verdict: mismatch" in out


EXIT_MATRIX = [
    (["binom", "7", "2", "--p", "3"], 0),
    (["binom", "7", "2", "--p", "4"], 2),
    (["compose", "--p", "3", "t + t^4", "t"], 0),
    (["compose", "--p", "3", "t + + t^4", "t"], 2),
    (["compose", "--p", "3", "--prec", "4", "t + t^5", "t"], 3),
    (["compose", "--p", "3", "--prec", "4", "--truncate", "t + t^5", "t"], 0),
    (["compose", "--p", "3", "2*t + t^4", "t"], 2),
    (["invert", "--p", "5", "t + t^2"], 0),
    (["power", "--p", "3", "t + t^2", "3"], 0),
    (["power", "--p", "3", "--formal", "t + t^2", "3"], 0),
    (["commutator", "--p", "3", "t + t^4", "t + t^7"], 0),
    (["commutator", "--method", "direct", "--p", "3", "t + t^4", "t + t^7"], 0),
    (["depth", "--kind", "S", "--p", "3", "t + t^6"], 0),
    (["depth", "--kind", "S", "--p", "3", "t + t^5"], 2),
    (["depth", "--kind", "T", "--q", "9", "--p", "3", "--prec", "40", "t + t^28"], 0),
    (["lambda", "check", "--family", "B", "--p", "3"], 0),
    (["lambda", "check", "--family", "A", "--param", "2", "--p", "3", "--horizon", "300"], 0),
    (["lambda", "check", "--family", "Z"], 2),
    (["lambda", "member", "--family", "qN", "--p", "3", "t + t^10"], 0),
    (["lambda", "probe", "--family", "B", "--p", "3", "--trials", "5"], 0),
    (["verify", "--lemma", "5.5", "--p", "3"], 0),
    (["verify", "--lemma", "4.1"], 1),
    (["verify", "--lemma", "4.1", "--z-rule", "strict"], 0),
    (["verify", "--lemma", "4.2", "--prec", "20"], 3),
    (["verify"], 2),
    (["explore", "--p", "3", "--prec", "24", "t + t^3"], 0),
    (["explore", "--p", "3", "t"], 2),
    (["torsion", "--p", "3", "t + t^4"], 0),
    (["torsion", "--p", "3", "--prec", "64", "--promote", "t + t^6"], 0),
    (["frobnicate"], 2),
    ([], 2),
    (["compose", "--p", "3", "--q", "6", "t", "t"], 2),
]


@pytest.mark.parametrize("argv,code", EXIT_MATRIX, ids=[" ".join(a) or "<none>" for a, _ in EXIT_MATRIX])
def test_exit_code_matrix(argv, code):
    assert run(*argv)[0] == code


@pytest.mark.parametrize(
    "argv",
    [
        ["lambda", "probe", "--family", "B", "--p", "5", "--trials", "20", "--seed", "9", "--prec", "40"],
        ["explore", "--p", "3", "--prec", "30", "--seed", "4", "--json", "t + t^3"],
        ["verify", "--lemma", "5.1", "--seed", "3", "--format", "json"],
    ],
)
def test_reruns_are_byte_identical(argv):
    assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nottingham", "binom", "10", "3", "--p", "5"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "binom: 0"
