import io
import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frh import cli
from frh.config import DEFAULTS, Defaults, override, parse_override
from frh.io import format_csv_value, read_csv, render, table_schema, to_json, write_table


def run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), stdout=buf)
    return code, buf.getvalue()


class TestFormatting:
    def test_csv_digits(self):
        assert format_csv_value(math.pi) == "3.14159265359"
        assert format_csv_value(np.float64(1e-300)) == "1e-300"
        assert format_csv_value([1.0, 2.5]) == "1;2.5"
        assert format_csv_value(True) == "true"
        assert format_csv_value(None) == ""
        assert format_csv_value(float("inf")) == "inf"

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_json_round_trip(self, v):
        doc = json.loads(to_json([{"v": v}], {"command": "x", "config": {}}))
        assert doc["rows"][0]["v"] == v

    def test_non_finite_json(self):
        doc = json.loads(to_json([{"v": float("nan"), "w": [float("-inf")]}], {"command": "x", "config": {}}))
        assert doc["rows"][0] == {"v": "nan", "w": ["-inf"]}

    def test_csv_layout(self):
        text = render([{"a": 1, "b": 0.5}, {"a": 2, "b": None}], {"command": "x", "config": {}})
        assert "\r" not in text
        meta, header, rows = read_csv(text)
        assert meta["command"] == "x"
        assert header == ["a", "b"]
        assert rows == [["1", "0.5"], ["2", ""]]

    def test_write_to_path(self, tmp_path):
        p = tmp_path / "t.json"
        text = write_table([{"a": 1}], {"command": "x", "config": {}}, "json", p)
        assert p.read_bytes() == text.encode()

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render([], {}, "xml")


class TestConfig:
    def test_override_restores(self):
        with override(root_tol=1e-6) as d:
            assert d.root_tol == 1e-6
        assert DEFAULTS.root_tol == Defaults().root_tol

    def test_override_unknown(self):
        with pytest.raises(ValueError):
            with override(nope=1):
                pass

    def test_parse(self):
        assert parse_override("k33_n_max=200") == ("k33_n_max", 200)
        assert parse_override("root_tol=1e-8") == ("root_tol", 1e-8)
        with pytest.raises(ValueError):
            parse_override("root_tol")


class TestCLI:
    def test_ml_shorthand(self):
        code, out = run("ml", "--a", "1", "--b", "1", "--x", "-1")
        assert code == 0
        _, header, rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0][header.index("value")] == "0.367879441171"

    def test_t_beta(self):
        code, out = run("k22", "t-beta", "--beta", "0.9", "--format", "json")
        assert code == 0
        assert json.loads(out)["rows"][0]["t_beta"] == pytest.approx(40.71, rel=0.02)

    def test_k33_radius_columns(self):
        code, out = run("k33", "radius", "--beta", "0.3", "--n-max", "201", "--method", "root", "--index", "201", "--format", "json")
        assert code == 0
        row = json.loads(out)["rows"][0]
        assert row["gamma_est"] == pytest.approx(1.833, abs=1e-3)
        assert row["R"] == pytest.approx(5.1655, rel=1e-3)

    def test_table1_long_format(self):
        code, out = run("fkdv", "ratios", "--beta", "0.4", "--t", "0.21", "--pairs", "6/5", "7/6")
        assert code == 0
        _, header, rows = read_csv(out)
        assert header == ["beta", "t", "pair", "ratio"]
        assert [r[2] for r in rows] == ["6/5", "7/6"]

    def test_usage_error(self, capsys):
        assert run("k22", "nope")[0] == cli.EXIT_USAGE
        assert "k33 coeffs|radius|field" in capsys.readouterr().err
        assert run("ml", "eval", "--a", "1", "--x", "0", "--format", "xml")[0] == cli.EXIT_USAGE

    def test_domain_error(self, capsys):
        assert run("k33", "field", "--beta", "0.5", "--t", "50")[0] == cli.EXIT_DOMAIN
        assert "OutsideRadius" in capsys.readouterr().err
        assert run("fkdv", "field", "--beta", "1.5")[0] == cli.EXIT_DOMAIN

    def test_help(self):
        assert run("--help")[0] == 0

    def test_determinism(self, tmp_path):
        argv = ("k22", "amp-phase", "--beta", "0.6", "--t-max", "5", "--t-samples", "21")
        outs = []
        for i, fmt in enumerate(("csv", "csv", "json", "json")):
            p = tmp_path / f"o{i}"
            assert run(*argv, "--format", fmt, "--out", str(p)) == (0, "")
            outs.append(p.read_bytes())
        assert outs[0] == outs[1] and outs[2] == outs[3]

    def test_config_echo(self):
        _, out = run("k33", "coeffs", "--beta", "0.5", "--n-max", "30", "--set", "k33_tail_fraction=0.3", "--format", "json")
        meta = json.loads(out)["meta"]
        assert meta["command"] == "k33 coeffs"
        assert meta["config"]["n_max"] == 30 and meta["config"]["beta"] == [0.5]
        assert meta["defaults"]["k33_tail_fraction"] == 0.3
        assert DEFAULTS.k33_tail_fraction == 0.2

    def test_defaults_shadow_module(self):
        ap = cli.build_parser()
        a = ap.parse_args(["k33", "coeffs"])
        assert a.n_max == DEFAULTS.k33_n_max
        assert a.alpha == 2.0 and a.c == 1.0

    @pytest.mark.parametrize(
        "argv",
        [
            ("ml", "zeros", "--a", "1.5", "--x-max", "20"),
            ("k22", "solution", "--x-samples", "9"),
            ("k22", "amp-phase", "--t-max", "3", "--t-samples", "7"),
            ("k22", "branch"),
            ("k22", "phase-crit", "--beta", "0.6", "--t-max", "20"),
            ("k22", "asymp", "--regime", "long", "--t", "10", "100"),
            ("k33", "coeffs", "--n-max", "20"),
            ("k33", "field", "--t", "0.5", "--x-samples", "5"),
            ("fkdv", "field", "--n-terms", "3", "--x-samples", "5"),
            ("fkdv", "resum", "--n-terms", "10"),
        ],
    )
    def test_json_validates(self, argv):
        code, out = run(*argv, "--format", "json")
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, table_schema())
        assert doc["rows"]


class TestReport:
    def test_specfun_suite(self, capsys):
        code, out = run("report", "--suite", "specfun", "--format", "json")
        doc = json.loads(out)
        jsonschema.validate(doc, table_schema())
        rows = doc["rows"]
        assert code == (1 if any(not r["passed"] for r in rows) else 0)
        assert "seconds" not in rows[0]
        err = capsys.readouterr().err
        assert err.count("PASS") + err.count("FAIL") == len(rows)

    def test_timings_column(self):
        _, out = run("report", "--suite", "specfun", "--timings", "--format", "json")
        assert all("seconds" in r for r in json.loads(out)["rows"])

    def test_failure_exit(self):
        # richardson radii for 0.1, 0.3, 0.9 miss the 2 % band
        assert run("report", "--suite", "k33", "--fast")[0] == cli.EXIT_FAIL
