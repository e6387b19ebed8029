import json

import pytest

from ap_equivalence.cli.main import EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, run
from ap_equivalence.data_access.corpus import CORPUS_FILE
from ap_equivalence.domain.exceptions import VerdictMismatch

CORPUS = str(CORPUS_FILE)


def _report(capsys):
    return json.loads(capsys.readouterr().out)


def test_equivalent_pair_exits_zero(capsys):
    assert run(["equiv", CORPUS, "P", "H"]) == EXIT_OK
    report = _report(capsys)
    assert report["schema_version"] == "1"
    assert report["status"] == "ok"
    assert report["result"]["witness"]["turns"] == ["1/2"]


def test_negative_verdict_exits_one(capsys):
    assert run(["equiv", CORPUS, "P", "Q"]) == EXIT_NEGATIVE
    assert _report(capsys)["result"]["certificate"]["relation"] == [2, -1]


def test_closing_remark_pair(capsys):
    assert run(["equiv", CORPUS, "C1", "C2"]) == EXIT_NEGATIVE
    assert _report(capsys)["result"]["modulus_mismatch"] == 0


def test_trace_and_bohr_options(capsys):
    assert run(["equiv", CORPUS, "A1", "A2", "--trace", "10"]) == EXIT_OK
    report = _report(capsys)
    assert report["inputs"]["trace"] == 10
    assert report["result"]["equivalent"] is True
    assert run(["equiv", CORPUS, "D", "Dbad", "--definition", "bohr"]) == EXIT_NEGATIVE


def test_basis_commands(capsys):
    assert run(["basis", CORPUS, "D"]) == EXIT_OK
    assert len(_report(capsys)["result"]["basis_indices"]) == 4
    assert run(["integral-basis", CORPUS, "A1", "--trace", "3"]) == EXIT_OK
    assert _report(capsys)["result"]["trace"][2]["denominator"] == 30


def test_numeric_commands(capsys):
    assert run(["bf", CORPUS, "P", "--orders", "4"]) == EXIT_OK
    assert _report(capsys)["result"]["weights"] == ["3/4", "1/2"]
    assert run(["mean", CORPUS, "P", "--sigma", "0", "--lambda", "1", "--T", "100"]) == EXIT_OK
    assert abs(_report(capsys)["result"]["value"][0] - 1) < 0.05
    assert run(["almost-periods", CORPUS, "M1", "--eps", "0.05", "--sigma-lo", "-1", "--sigma-hi", "0", "--tmax", "5"]) == EXIT_NEGATIVE
    assert _report(capsys)["result"]["periods"] == []


def test_values_command(capsys):
    argv = ["values", CORPUS, "M1", "M2", "--sigma-lo", "0.9", "--sigma-hi", "1.1", "--samples", "2", "--seed", "4"]
    assert run(argv) == EXIT_NEGATIVE
    report = _report(capsys)
    assert report["inputs"]["seed"] == 4
    assert report["result"]["fraction_f2_attains_f1"] == 0.0


def test_corpus_commands(capsys):
    assert run(["corpus", "list"]) == EXIT_OK
    assert len(_report(capsys)["result"]["scenarios"]) >= 7
    assert run(["corpus", "run", "quarter-turn"]) == EXIT_NEGATIVE
    assert run(["corpus", "run", "nope"]) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["equiv", CORPUS, "P"],
        ["bf", CORPUS, "P", "--orders", "0"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "argv, error",
    [
        (["equiv", CORPUS, "P", "nope"], "UnknownName"),
        (["equiv", "/no/such/file.apeq", "P", "H"], "FileNotFoundError"),
        (["equiv", CORPUS, "P", "H", "--trace", "3"], "TruncationOutOfRange"),
    ],
)
def test_precondition_errors_report_on_stdout(argv, error, capsys):
    assert run(argv) == EXIT_USAGE
    report = _report(capsys)
    assert report["status"] == "error"
    assert report["command"] == "equiv"
    assert report["result"]["error"]["type"] == error


def test_parse_errors_exit_two(tmp_path, capsys):
    broken = tmp_path / "broken.apeq"
    broken.write_text("sum f = (1,0)*exp(1*s) +;\n")
    assert run(["equiv", str(broken), "f", "f"]) == EXIT_USAGE
    captured = capsys.readouterr()
    assert "broken.apeq:1:" in captured.err
    error = json.loads(captured.out)["result"]["error"]
    assert error["type"] == "DslSyntaxError"
    assert error["line"] == 1


def test_zero_denominator_is_a_parse_error(tmp_path, capsys):
    source = tmp_path / "zero.apeq"
    for text in ("sum f = (1,0)*exp(3/0*s);\n", "sum f = (1,1/0)*exp(1*s);\n"):
        source.write_text(text)
        assert run(["equiv", str(source), "f", "f"]) == EXIT_USAGE
        assert _report(capsys)["result"]["error"]["type"] == "DslSyntaxError"


def test_numeric_input_with_equal_moduli_exits_two(tmp_path, capsys):
    source = tmp_path / "numeric.apeq"
    source.write_text("sum g1 = <1.0,0.0>*exp(1*s);\nsum g2 = <0.0,1.0>*exp(1*s);\n")
    assert run(["equiv", str(source), "g1", "g2"]) == EXIT_USAGE
    assert "exact" in capsys.readouterr().err.lower()


def test_verification_failure_exits_three(monkeypatch, capsys):
    def reject(verdict, f1, f2):
        raise VerdictMismatch("tampered")

    monkeypatch.setattr("ap_equivalence.services.analysis_service.verify_verdict", reject)
    assert run(["equiv", CORPUS, "P", "H"]) == EXIT_INTERNAL
    report = _report(capsys)
    assert report["status"] == "error"
    assert report["result"]["error"]["type"] == "VerdictMismatch"


def test_version_exits_zero(capsys):
    assert run(["--version"]) == EXIT_OK
    assert "apeq" in capsys.readouterr().out
