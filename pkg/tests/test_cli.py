from __future__ import annotations

import json

import pytest

from qlorder import cli, hnn, suite
from qlorder.cli import main
from qlorder.groups import UnsupportedError

BS = ["--preset", "BS(2,3)"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def write_config(tmp_path, presentation, **extra):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"version": 1, "presentation": presentation, **extra}))
    return str(path)


@pytest.mark.parametrize("text, expected", [
    ("x^3 t", "t . x^2"),
    ("x^4 t", "x . t . x^2"),
    ("t t^-1", "e"),
    ("t^-1 x^3 t", "x^2"),
    ("x t x^2 t^-1", "x^4"),
])
def test_normalize(capsys, text, expected):
    assert run(capsys, "normalize", *BS, text) == (0, expected, "")


def test_normalize_keeps_general_elements(capsys):
    code, out, _ = run(capsys, "normalize", *BS, "t^-1 x")
    assert code == 0
    assert "t^-1" in out


def test_order_queries(capsys):
    assert run(capsys, "order", "join", *BS, "x", "t")[:2] == (0, "t . x^2")
    assert run(capsys, "order", "le", *BS, "x", "x t")[:2] == (0, "true")
    assert run(capsys, "order", "le", *BS, "x", "t")[:2] == (0, "false")
    assert run(capsys, "order", "minpair", *BS, "x^3 t", "t")[:2] == (0, "(x^3, e)")
    assert run(capsys, "order", "stems", *BS, "--height", "1", "--bound", "3")[:2] == (0, "t, x t, x^2 t")
    assert run(capsys, "order", "join", "--preset", "F2(1,1,b)", "a", "b")[:2] == (0, "infinity")


def test_presets(capsys):
    code, out, _ = run(capsys, "presets")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == list(cli.PRESET_CONFIGS)


@pytest.mark.parametrize("argv", [
    ["normalize", *BS, "x y"],
    ["order", "le", *BS, "x^-1", "t"],
    ["normalize", "--preset", "nope", "x"],
    ["toeplitz", "export", *BS, "--truncation", "1"],
])
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", *BS, "--only", "no_such_check"])
    assert info.value.code == 2


def test_missing_presentation(capsys, monkeypatch):
    monkeypatch.delenv(cli.CONFIG_ENV, raising=False)
    code, _, err = run(capsys, "normalize", "x")
    assert code == 2 and cli.CONFIG_ENV in err


def test_config_from_environment(capsys, monkeypatch, tmp_path):
    path = write_config(tmp_path, {"kind": "free", "rank": 2, "s": 2, "u": 3, "target": "b"})
    monkeypatch.setenv(cli.CONFIG_ENV, path)
    assert run(capsys, "normalize", "b a^5 t")[:2] == (0, "b a . t . b^6")


def test_config_file(capsys, tmp_path):
    path = write_config(tmp_path, {"kind": "int_lattice", "n": 2, "A_moduli": [2, 3], "B_moduli": [3, 2]},
                        bounds={"enum_bound": 3})
    assert run(capsys, "order", "join", "--config", path, "(1,0)", "t")[:2] == (0, "t . (3,0)")


@pytest.mark.parametrize("doc", [
    {"version": 2, "presentation": {"kind": "baumslag_solitar", "c": 2, "d": 3}},
    {"version": 1, "presentation": {"kind": "baumslag_solitar", "c": 2, "d": 3, "e": 1}},
    {"version": 1, "presentation": {"kind": "baumslag_solitar", "c": 0, "d": 3}},
    {"version": 1, "presentation": {"kind": "int_lattice", "n": 2, "A_moduli": [2], "B_moduli": [3, 2]}},
    {"version": 1, "presentation": {"kind": "int_lattice", "n": 2, "A_basis": [[1, 0]], "B_basis": [[1, 0]]}},
    {"version": 1, "presentation": {"kind": "free", "rank": 2, "s": 1, "u": 1, "target": "c"}},
    {"version": 1, "presentation": {"kind": "baumslag_solitar", "c": 2, "d": 3}, "bounds": {"radius": 3}},
    {"presentation": {"kind": "baumslag_solitar", "c": 2, "d": 3}},
])
def test_invalid_configs(capsys, tmp_path, doc):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "normalize", "--config", str(path), "e")
    assert code == 2
    assert "invalid config" in err


def test_unreadable_configs(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run(capsys, "normalize", "--config", str(path), "e")[0] == 2
    assert run(capsys, "normalize", "--config", str(tmp_path / "missing.json"), "e")[0] == 2


def test_failing_hypotheses_exit_1(capsys):
    code, _, err = run(capsys, "order", "join", "--preset", "Z2-negative", "(1,0)", "(0,1)")
    assert code == 1
    assert "minimal_coset_representatives" in err


def test_verify_passes(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", *BS, "--json", str(out_path))
    assert code == 0
    assert out.splitlines()[-1] == "verdict: PASS"
    doc = json.loads(out_path.read_text())
    assert set(doc) == {"canonical", "meta"}
    canonical = doc["canonical"]
    assert canonical["command"] == "verify"
    assert canonical["bounds"] == {"validate_bound": 12, "enum_bound": 5, "truncation": 6}
    assert [c["name"] for c in canonical["result"]["checks"]] == list(suite.CHECK_NAMES)
    assert all(c["status"] == "pass" for c in canonical["result"]["checks"])


def test_verify_negative_example(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--preset", "Z2-negative", "--json", str(out_path))
    assert code == 1
    assert "FAIL         minimal_coset_representatives" in out
    assert "reproduce: qlorder verify --preset 'Z2-negative' --only minimal_coset_representatives" in out
    checks = {c["name"]: c for c in json.loads(out_path.read_text())["canonical"]["result"]["checks"]}
    assert checks["minimal_coset_representatives"]["witness"]["coset"] == "(1,0)+A"
    assert checks["leq_star_vs_oracle"]["status"] == "skipped"


def test_verify_only(capsys):
    code, out, _ = run(capsys, "verify", *BS, "--only", "stem_lemma", "--only", "kernel_qlo")
    assert code == 0
    names = [line.split()[1] for line in out.splitlines() if line.startswith("PASS")]
    assert names == ["stem_lemma", "kernel_qlo"]


def test_verify_is_deterministic(capsys, tmp_path):
    docs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        run(capsys, "verify", "--preset", "Z2-negative", "--json", str(path))
        docs.append(cli.canonical_json(json.loads(path.read_text())["canonical"]))
    assert docs[0] == docs[1]


def test_unsupported_exits_3(capsys, monkeypatch):
    def refuse(*args, **kwargs):
        raise UnsupportedError("no A-ceiling")

    monkeypatch.setattr(hnn, "join_star", refuse)
    code, _, err = run(capsys, "order", "join", *BS, "x", "t")
    assert code == 3 and "unsupported" in err
    monkeypatch.setattr(suite, "OrderSweep", refuse)
    code, out, _ = run(capsys, "verify", *BS, "--only", "stem_lemma")
    assert code == 3
    assert "UNSUPPORTED  stem_lemma" in out


def test_toeplitz_checks(capsys):
    for check in ("isometry", "covariance", "matrix-units", "hk"):
        code, out, _ = run(capsys, "toeplitz", check, *BS, "--truncation", "4")
        assert code == 0, out
        assert out.splitlines()[-1] == "verdict: PASS"


def test_toeplitz_insufficient_exits_4(capsys):
    code, out, _ = run(capsys, "toeplitz", "covariance", *BS, "--truncation", "0")
    assert code == 4
    assert "INSUFFICIENT" in out
    assert "reproduce: qlorder toeplitz covariance --preset 'BS(2,3)' --truncation 0" in out


def test_toeplitz_export(capsys, tmp_path):
    code, out, _ = run(capsys, "toeplitz", "export", *BS, "--truncation", "2", "--word", "x")
    assert code == 0
    assert out.splitlines() == ["# dimension 7", "# safe_columns 3", "2 0 1", "5 1 1", "6 2 1"]
    matrix, basis = tmp_path / "t.txt", tmp_path / "basis.txt"
    code, out, _ = run(capsys, "toeplitz", "export", *BS, "--truncation", "2", "--word", "t", "--adjoint",
                       "--out", str(matrix), "--basis-out", str(basis))
    assert code == 0 and out.startswith("wrote")
    # T_t* sends ε_t, ε_{t t}, ε_{t x} to ε_e, ε_t, ε_x
    assert matrix.read_text().splitlines()[2:] == ["0 1 1", "1 3 1", "2 4 1"]
    assert basis.read_text().splitlines()[0] == "0 e"
