import json

import pytest

from gfasym import PolyParseError, loads_gf, dumps_gf, gf_new, poly_parse
from gfasym.cli import main, parse_structured_report

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGfFile:
    def test_roundtrip(self, delannoy):
        text = dumps_gf(delannoy)
        back = loads_gf(text)
        assert back.numerator == delannoy.numerator
        assert back.denominator == delannoy.denominator

    def test_fixture_files_load(self):
        for name in ("delannoy", "cuberoot", "chebyshev", "multinomial3"):
            gf = loads_gf((DATA / f"{name}.gf").read_text())
            assert gf.dim in (2, 3)

    def test_negative_exponent_rejected(self):
        doc = {
            "vars": ["z", "w"],
            "numerator": [{"coeff": "1", "exps": [0, 0]}],
            "denominator": [{"coeff": "1", "exps": [-1, 0]}],
        }
        with pytest.raises(PolyParseError, match="clears every negative power"):
            loads_gf(json.dumps(doc))

    def test_malformed_coeff(self):
        doc = {
            "vars": ["z"],
            "numerator": [{"coeff": "1.5", "exps": [0]}],
            "denominator": [{"coeff": "1", "exps": [0]}],
        }
        with pytest.raises(PolyParseError):
            loads_gf(json.dumps(doc))

    def test_missing_field(self):
        with pytest.raises(PolyParseError, match="missing"):
            loads_gf('{"vars": ["z"]}')


class TestCoeff:
    def test_delannoy(self, capsys):
        code, out, _ = run(capsys, "coeff", "--gf", str(DATA / "delannoy.gf"), "--index", "5,5")
        assert code == 0 and out.strip() == "1683"

    def test_origin_is_ratio(self, capsys):
        code, out, _ = run(capsys, "coeff", "--gf", str(DATA / "cuberoot.gf"), "--index", "0,0")
        assert code == 0 and out.strip() == "1/3"

    def test_parity_zero(self, capsys):
        code, out, _ = run(capsys, "coeff", "--gf", str(DATA / "chebyshev.gf"), "--index", "1,2")
        assert code == 0 and out.strip() == "0"

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run(capsys, "coeff", "--gf", "/no/such/file.gf", "--index", "1,1")
        assert code == 2 and "cannot read" in err

    def test_cap_exit_2(self, capsys):
        code, _, err = run(
            capsys, "coeff", "--gf", str(DATA / "delannoy.gf"), "--index", "1000001,1"
        )
        assert code == 2 and "cap" in err


class TestCritical:
    def test_delannoy_text(self, capsys):
        code, out, _ = run(
            capsys, "critical", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1"
        )
        assert code == 0
        assert "minimality: strict" in out
        assert "0.41421356" in out
        assert "k = 2" in out

    def test_chebyshev_siblings(self, capsys):
        code, out, _ = run(
            capsys, "critical", "--gf", str(DATA / "chebyshev.gf"), "--dir", "1,2"
        )
        assert code == 0
        assert out.count("finitely_minimal") == 2
        assert "torus companion" in out

    def test_cuberoot_reports_k3(self, capsys):
        code, out, _ = run(
            capsys, "critical", "--gf", str(DATA / "cuberoot.gf"), "--dir", "1,1"
        )
        assert code == 0 and "k = 3" in out and "strict" in out


class TestAsymp:
    def test_delannoy(self, capsys):
        code, out, _ = run(
            capsys, "asymp", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1"
        )
        assert code == 0
        assert "C_0 = 0.57268163" in out
        assert "k = 2" in out

    def test_cuberoot(self, capsys):
        # the oracle-certified constant (the printed closed form upstream
        # simplifies incorrectly; see README)
        code, out, _ = run(
            capsys, "asymp", "--gf", str(DATA / "cuberoot.gf"), "--dir", "1,1"
        )
        assert code == 0
        assert "k = 3" in out
        assert "C_0 = 0.24616270" in out

    def test_repeated_factor_exit_3(self, capsys):
        code, _, err = run(
            capsys, "asymp", "--gf", str(DATA / "squared.gf"), "--dir", "1,1"
        )
        assert code == 3
        assert "pole not simple: out of scope (see companion-paper taxonomy)" in err

    def test_toral_exit_3(self, capsys):
        code, _, err = run(
            capsys, "asymp", "--gf", str(DATA / "toral.gf"), "--dir", "1,1"
        )
        assert code == 3

    def test_structured_is_json(self, capsys):
        code, out, _ = run(
            capsys, "asymp", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--format", "structured",
        )
        rec = json.loads(out)
        assert rec["k"] == 2
        assert rec["terms"][0][0] == 0


class TestCompare:
    def test_delannoy_sweep(self, capsys):
        code, out, _ = run(
            capsys, "compare", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--upto", "80",
        )
        assert code == 0
        assert "convergence verdict: yes" in out
        assert "80,80" in out

    def test_chebyshev_parity_rows(self, capsys):
        code, out, _ = run(
            capsys, "compare", "--gf", str(DATA / "chebyshev.gf"), "--dir", "1,2",
            "--upto", "60",
        )
        assert code == 0
        assert "zero/zero" in out
        assert "convergence verdict: yes" in out

    def test_upto_zero_trivial(self, capsys):
        code, out, _ = run(
            capsys, "compare", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--upto", "0",
        )
        assert code == 0 and "verdict: yes" in out

    def test_structured_roundtrip(self, capsys):
        code, out, _ = run(
            capsys, "compare", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--upto", "8", "--format", "structured",
        )
        assert code == 0
        rec = parse_structured_report(out)
        assert rec == json.loads(json.dumps(rec))
        assert rec["verdict"] == "yes"
        assert [r["index"] for r in rec["rows"]] == [[1, 1], [2, 2], [4, 4], [8, 8]]

    def test_deterministic(self, capsys):
        argv = (
            "compare", "--gf", str(DATA / "chebyshev.gf"), "--dir", "1,2",
            "--upto", "16", "--format", "structured",
        )
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert out1 == out2

    def test_with_quadrature_column(self, capsys):
        code, out, _ = run(
            capsys, "compare", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--upto", "8", "--with-quadrature",
        )
        assert code == 0 and "quad rel err" in out
        # the reduced integral is far closer to exact than the 1-term estimate
        rec_code, rec_out, _ = run(
            capsys, "compare", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--upto", "8", "--with-quadrature", "--format", "structured",
        )
        rec = parse_structured_report(rec_out)
        last = rec["rows"][-1]
        assert float(last["quad_rel_error"]) < float(last["rel_error"]) / 100

    def test_cap_guard(self, capsys):
        code, _, err = run(
            capsys, "compare", "--gf", str(DATA / "delannoy.gf"), "--dir", "1,1",
            "--upto", "2000000",
        )
        assert code == 2 and "cap" in err
