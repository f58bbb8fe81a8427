"""End-to-end command tests: reports, determinism, exit discipline."""

import hashlib
import json

import pytest

from arcurves import cli

TWO_BRANCH = """\
field = Q
p = 3
q = 4
b = 1
f = 1*x^0*y^1
m = 1
n = 2
"""

CUSP = TWO_BRANCH.replace("f = 1*x^0*y^1", "f = 1*x^0*y^0")


@pytest.fixture
def cfg(tmp_path):
    def write(text, name="ring.cfg"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def _run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_ring_info_cusp(cfg, capsys):
    code, out, err = _run(capsys, ["ring-info", cfg(CUSP)])
    assert code == 0 and err == ""
    doc = json.loads(out)
    br = doc["branches"][0]
    assert br["semigroup_generators"] == [3, 4]
    assert br["frobenius"] == 5
    assert doc["gamma_datum"]["gamma"] == "(1*x^0*y^3)/(1*x^1*y^0)"
    assert doc["config_sha256"] == hashlib.sha256(
        CUSP.encode()).hexdigest()


def test_ring_info_two_branches(cfg, capsys):
    code, out, _ = _run(capsys, ["ring-info", cfg(TWO_BRANCH)])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["branches"]) == 2
    assert doc["gamma_datum"]["z"] == "1*x^0*y^1"
    assert doc["gamma_datum"]["gamma"] == "(1*x^0*y^4)/(1*x^1*y^0)"


def test_bad_weights_error(cfg, capsys):
    code, out, err = _run(capsys, ["ring-info", cfg(TWO_BRANCH.replace(
        "p = 3", "p = 2"))])
    assert code == 2
    assert "at least 3" in err


def test_config_errors_carry_line_numbers(cfg, capsys):
    code, _, err = _run(capsys, ["ring-info", cfg(
        "field = Q\np = oops\nq = 4\nb = 1\nf = 1*x^0*y^0\n")])
    assert code == 2
    assert "line 2" in err

    code, _, err = _run(capsys, ["ring-info", cfg("p = 3\np = 4\n")])
    assert code == 2
    assert "line 2" in err and "duplicate" in err

    code, _, err = _run(capsys, ["ring-info", cfg("p 3\n")])
    assert code == 2
    assert "line 1" in err


def test_unknown_key_rejected(cfg, capsys):
    code, _, err = _run(capsys, ["ring-info", cfg(CUSP + "extra = 1\n")])
    assert code == 2
    assert "unknown key" in err


def test_missing_file_is_input_error(capsys):
    code, _, err = _run(capsys, ["ring-info", "/nonexistent/ring.cfg"])
    assert code == 2


def test_verify_main_theorem(cfg, capsys):
    code, out, _ = _run(capsys, ["verify", "main-theorem", cfg(CUSP)])
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_syz_gamma_passes_on_domain(cfg, capsys):
    code, out, _ = _run(capsys, ["verify", "syz-gamma", cfg(CUSP)])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert [m["ranks"] for m in doc["modules"]] == [[1, 1], [2, 2]]


def test_verify_syz_gamma_rejects_nondomain(cfg, capsys):
    code, _, err = _run(capsys, ["verify", "syz-gamma", cfg(TWO_BRANCH)])
    assert code == 2
    assert "not a domain" in err


def test_verify_section7(cfg, capsys):
    code, out, _ = _run(capsys, ["verify", "section7", cfg(TWO_BRANCH)])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["column_degrees"]["normalized_tail"] == [-7, -12, -10, -8,
                                                        -6, -11]


def test_verify_trace_oracle_window(cfg, capsys):
    code, out, _ = _run(capsys, ["verify", "trace-oracle", cfg(CUSP),
                                 "--window", "2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["pass"] is True
    assert doc["windows"]["endomorphism_degree"] == [-2, 2]
    assert doc["disagreements"] == []


def test_explore_depth_zero_dot(cfg, capsys):
    code, out, _ = _run(capsys, ["explore", cfg(TWO_BRANCH), "--depth", "0",
                                 "--format", "dot"])
    assert code == 0
    assert out.startswith("digraph")
    assert out.count("label=") == 1


def test_explore_requires_ideal_exponents(cfg, capsys):
    text = CUSP.replace("m = 1\n", "").replace("n = 2\n", "")
    code, _, err = _run(capsys, ["explore", cfg(text)])
    assert code == 2
    assert "'m' or 'n'" in err


def test_explore_reports_classification(cfg, capsys):
    code, out, _ = _run(capsys, ["explore", cfg(TWO_BRANCH), "--depth", "3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["classification"] == "tube(2)"
    assert doc["subadditive"]["status"] == "additive"
    assert len(doc["quiver"]["vertices"]) == 7


def test_byte_identical_reruns(cfg, tmp_path, capsys):
    path = cfg(TWO_BRANCH)
    outs = []
    for name in ("a.json", "b.json"):
        target = tmp_path / name
        code, _, _ = _run(capsys, ["explore", path, "--depth", "2",
                                   "--out", str(target)])
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_seed_resolution(cfg, capsys, monkeypatch):
    path = cfg(CUSP)
    monkeypatch.setenv("AR_CURVE_SEED", "11")
    code, out, _ = _run(capsys, ["push", path])
    assert json.loads(out)["seed"] == 11
    code, out, _ = _run(capsys, ["push", path, "--seed", "5"])
    assert json.loads(out)["seed"] == 5
    monkeypatch.delenv("AR_CURVE_SEED")
    code, out, _ = _run(capsys, ["push", path])
    assert json.loads(out)["seed"] == 0


def test_push_report(cfg, capsys):
    code, out, _ = _run(capsys, ["push", cfg(CUSP)])
    assert code == 0
    doc = json.loads(out)
    assert doc["ranks"] == {"left": [1], "middle": [2], "right": [1]}
    assert doc["middle_summands"] == [[4, 6, 5, 3]]
    assert doc["sequence"]["middle"]["generator_degrees"] == [4, 6, 5, 3]


def test_decompose_report(cfg, capsys):
    code, out, _ = _run(capsys, ["decompose", cfg(TWO_BRANCH)])
    assert code == 0
    doc = json.loads(out)
    assert doc["free_summands"] == []
    assert [p["generator_degrees"] for p in doc["parts"]] == [[4, 6, 8, 3]]
