import json
from pathlib import Path

import pytest

from idealistic.__main__ import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main

_SCRIPT = """\
ring Q [x, y, z];
pair E = (x^3 - y^3*z^2 : 2);
order E expect 3/2;
order E at [x, z] expect 1;
"""


def _write(tmp_path: Path, text: str = _SCRIPT) -> Path:
    path = tmp_path / "session.idl"
    path.write_text(text, encoding="utf-8")
    return path


def test_order_emits_json(tmp_path, capsys) -> None:
    script = _write(tmp_path)

    exit_code = main(["--emit", "json", "order", str(script), "--at", "x,z"])
    payload = json.loads(capsys.readouterr().out)

    assert exit_code == EXIT_OK
    assert payload == {
        "command": "order",
        "success": True,
        "result": {"order": "1", "at": "<x, z>"},
        "message": "",
    }


def test_blowup_emits_text(tmp_path, capsys) -> None:
    script = _write(tmp_path)

    exit_code = main(["blowup", str(script), "--center", "x,y", "--chart", "y"])
    out = capsys.readouterr().out
    rows = {key.strip(): value for key, value in (line.split(": ", 1) for line in out.splitlines())}

    assert exit_code == EXIT_OK
    assert rows == {
        "pair": "(x^3*y - y*z^2 : 2)",
        "boundary": '["V(y) new"]',
        "substitution": "x -> x*y",
        "total": '[["x^3*y^3 - y^3*z^2"]]',
        "strict": "[null]",
        "regenerates_total": "True",
    }


def test_run_reports_every_line(tmp_path, capsys) -> None:
    script = _write(tmp_path, _SCRIPT + "order E expect 2;\n")

    exit_code = main(["--emit", "json", "run", str(script)])
    payload = json.loads(capsys.readouterr().out)

    assert exit_code == EXIT_MISMATCH
    assert [entry["success"] for entry in payload["results"]] == [True, True, False]
    assert payload["results"][2]["line"] == 5
    assert payload["results"][2]["message"] == "expected 2, got 3/2"


def test_resolve_det_summary(capsys) -> None:
    exit_code = main(["--emit", "json", "resolve-det", "2", "2", "2"])
    payload = json.loads(capsys.readouterr().out)

    assert exit_code == EXIT_OK
    assert payload["result"]["leaves"] == "4"
    assert payload["result"]["verified"] == "true"


@pytest.mark.parametrize(
    "argv",
    [
        # above the cap
        ["resolve-det", "5", "5", "2"],
        # unknown field
        ["resolve-det", "2", "2", "2", "--field", "Fp(4)"],
        # unknown corpus id
        ["corpus", "no-such-entry"],
    ],
)
def test_usage_errors(argv, capsys) -> None:
    assert main(argv) == EXIT_USAGE
    assert "error:" in capsys.readouterr().out


def test_missing_script_is_usage_error(tmp_path, capsys) -> None:
    exit_code = main(["--emit", "json", "sing", str(tmp_path / "absent.idl")])
    payload = json.loads(capsys.readouterr().out)

    assert exit_code == EXIT_USAGE
    assert payload["success"] is False
    assert payload["result"] is None
    assert "Cannot read script" in payload["message"]


def test_ambiguous_pair_needs_choice(tmp_path, capsys) -> None:
    script = _write(tmp_path, "ring Q [x]; pair A = (x : 1); pair B = (x^2 : 2);")

    assert main(["order", str(script)]) == EXIT_USAGE
    assert main(["order", str(script), "--pair", "B"]) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-2] == "order: 1"


def test_corpus_text_output(capsys) -> None:
    exit_code = main(["corpus", "gb-small"])

    assert exit_code == EXIT_OK
    assert capsys.readouterr().out == "gb-small: ok\n"


def test_corpus_override_mismatch(tmp_path, monkeypatch, capsys) -> None:
    (tmp_path / "wrong.idl").write_text("ring Q [x]; pair E = (x^2 : 2); order E expect 2;")
    monkeypatch.setenv("IDEALISTIC_CORPUS", str(tmp_path))

    assert main(["corpus"]) == EXIT_MISMATCH
    assert capsys.readouterr().out == "wrong: FAILED line 1: expected 2, got 1\n"


def test_parser_rejects_missing_arguments() -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["resolve-det", "2"])
    assert excinfo.value.code == 2
