"""
Test suite for the command-line interface
"""

import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from main import cli
from src.fock.operators import Truncation, build_ladder
from src.kernel.params import DeformationParams
from src.utils.grids import complex_grid, parse_complex, parse_range
from src.utils.reports import CheckResult, render_table, write_output
from src.utils.verify_suite import SuiteConfig, run_suite


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, tmp_path, args, name="out.csv"):
    """Run a subcommand writing to a file; logs stay on stderr"""
    target = tmp_path / name
    result = runner.invoke(cli, ["--log-level", "WARNING", *args, "--output", str(target)])
    return result, target


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


class TestGrids:
    """Test cases for grid parsing"""

    def test_inclusive_range(self):
        assert parse_range("-2:2:0.5") == pytest.approx([-2 + 0.5 * k for k in range(9)])

    def test_single_point(self):
        assert parse_range("0.25") == [0.25]

    @pytest.mark.parametrize("text", ["1:0:0.1", "0:1:0", "0:1", "a:b:c"])
    def test_bad_range(self, text):
        with pytest.raises(ValueError):
            parse_range(text)

    @pytest.mark.parametrize(
        "text,expected", [("0.3", 0.3), ("0.3+0.2i", 0.3 + 0.2j), ("-0.4i", -0.4j), ("1-2e-3j", 1 - 2e-3j)]
    )
    def test_complex(self, text, expected):
        assert parse_complex(text) == expected

    def test_complex_grid_order(self):
        assert complex_grid([0.0, 1.0], [0.0, 2.0]) == [0j, 2j, 1 + 0j, 1 + 2j]


class TestReports:
    """Test cases for table and report emission"""

    def test_complex_columns(self):
        text = render_table([{"z": 1 + 2j, "n": 3}])
        header, row = text.strip().split("\n")
        assert header == "z_re,z_im,n"
        assert row == "1,2,3"

    def test_seventeen_digits(self):
        text = render_table([{"x": 0.1}])
        assert text.strip().split("\n")[1] == "0.10000000000000001"

    def test_check_result_pass(self):
        ok = CheckResult.evaluate("c", "ref", 1e-12, 1e-10)
        bad = CheckResult.evaluate("c", "ref", float("nan"), 1e-10)
        reported = CheckResult.evaluate("c", "ref", 1.0, 1e-10, asserted=False)
        assert ok.passed and not ok.failed
        assert bad.failed
        assert not reported.passed and not reported.failed
        assert ok.to_record()["pass"] is True

    def test_stdout_without_path(self, capsys):
        """No --output sends the table to stdout unchanged"""
        write_output("a,b\n1,2\n", None)
        assert capsys.readouterr().out == "a,b\n1,2\n"


class TestSuite:
    """Test cases for the invariant suite runner"""

    def test_selected_group_only(self):
        config = SuiteConfig(grid=[DeformationParams(q=2.0, lsq=1.0, lam=1.0)], dim=16, groups=("commutator",))
        results = run_suite(config)
        assert [r.check for r in results] == ["fock.commutator.plain", "fock.commutator.deformed"]
        assert not any(r.failed for r in results)
        assert results[0].params["q"] == 2.0

    def test_series_group(self):
        """Tail bounds and φ monotonicity hold on the default grid"""
        results = run_suite(SuiteConfig(dim=16, groups=("series",)))
        names = {r.check for r in results}
        assert {"kernel.tail_bound.norm", "kernel.tail_bound.1phi1", "kernel.tail_bound.qbessel"} <= names
        assert {"kernel.phi_monotone", "kernel.phi_strict"} <= names
        assert len(results) == 5 * 4
        assert not any(r.failed for r in results)

    def test_unknown_group(self):
        with pytest.raises(ValueError):
            run_suite(SuiteConfig(groups=("nonsense",)))

    def test_dimension_floor(self):
        with pytest.raises(ValueError):
            SuiteConfig(dim=8)


class TestCommands:
    """Test cases for the subcommands"""

    def test_help_lists_subcommands(self, runner):
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        for name in ("hermite-table", "cs-overlap", "kernel-grid", "density", "traces", "quantize", "evolve",
                     "hopf-verify", "verify"):
            assert name in result.output

    @pytest.mark.parametrize(
        "name",
        ["hermite-table", "cs-overlap", "kernel-grid", "density", "traces", "quantize", "evolve", "hopf-verify",
         "verify"],
    )
    def test_subcommand_help_names_identities(self, runner, name):
        """Each subcommand's help says which identities it exercises"""
        result = runner.invoke(cli, [name, "--help"])
        assert result.exit_code == 0
        assert "Exercises:" in result.output

    def test_hermite_table(self, runner, tmp_path):
        """P_0 = 1 across the grid"""
        result, target = _invoke(runner, tmp_path, ["hermite-table", "--family", "pos-sub", "--nmax", "10",
                                                    "--grid=-2:2:0.5"])
        assert result.exit_code == 0, result.output
        rows = _read_csv(target)
        assert len(rows) == 9
        assert all(float(row["values[0]"]) == 1.0 for row in rows)
        assert "values[10]" in rows[0]

    def test_hermite_regime_mismatch(self, runner, tmp_path):
        result, _ = _invoke(runner, tmp_path, ["hermite-table", "--family", "pos-super", "--q", "0.5"])
        assert result.exit_code == 2

    def test_quantize_monomial_is_ladder(self, runner, tmp_path):
        """quantize --f monomial --mu 1 --nu 0 reproduces a"""
        result, target = _invoke(runner, tmp_path, ["quantize", "--f", "monomial", "--mu", "1", "--nu", "0",
                                                    "--dim", "12"])
        assert result.exit_code == 0, result.output
        matrix = np.zeros((12, 12), dtype=complex)
        for row in _read_csv(target):
            matrix[int(row["row"]), int(row["col"])] = float(row["A_re"]) + 1j * float(row["A_im"])
        a, _, _ = build_ladder(DeformationParams(q=0.5, lsq=1.0), Truncation(dim=12))
        np.testing.assert_allclose(matrix, a.matrix, rtol=1e-12, atol=0)

    def test_cs_overlap_json(self, runner, tmp_path):
        result, target = _invoke(runner, tmp_path, ["cs-overlap", "--z", "0.3", "--z", "0.3", "--out", "json"],
                                 name="out.json")
        assert result.exit_code == 0, result.output
        rows = json.loads(target.read_text())
        assert len(rows) == 4
        assert rows[0]["overlap_re"] == pytest.approx(1.0, abs=1e-13)

    def test_outside_disk_is_usage_error(self, runner, tmp_path):
        """|z|² ≥ R is rejected with exit status 2"""
        result, _ = _invoke(runner, tmp_path, ["cs-overlap", "--q", "2", "--z", "1.5"])
        assert result.exit_code == 2

    def test_invalid_q(self, runner, tmp_path):
        result, _ = _invoke(runner, tmp_path, ["traces", "--q", "1"])
        assert result.exit_code == 2

    def test_traces(self, runner, tmp_path):
        result, target = _invoke(runner, tmp_path, ["traces", "--q", "2", "--lambda", "1"])
        assert result.exit_code == 0, result.output
        values = {row["quantity"]: float(row["value"]) for row in _read_csv(target)}
        assert values["number"] == pytest.approx(2.0 ** -2, rel=1e-12)
        assert "antinormal_displayed" in values

    def test_evolve_starts_at_z0(self, runner, tmp_path):
        result, target = _invoke(runner, tmp_path, ["evolve", "--z0", "0.3", "--times", "0:1:0.5"])
        assert result.exit_code == 0, result.output
        rows = _read_csv(target)
        assert len(rows) == 3
        assert float(rows[0]["z_re"]) == pytest.approx(0.3, rel=1e-13)

    def test_kernel_grid(self, runner, tmp_path):
        result, target = _invoke(runner, tmp_path, ["kernel-grid", "--re", "0:0.2:0.1", "--im", "0"])
        assert result.exit_code == 0, result.output
        assert len(_read_csv(target)) == 3

    def test_density(self, runner, tmp_path):
        result, target = _invoke(runner, tmp_path, ["density", "--dim", "16", "--normalize"])
        assert result.exit_code == 0, result.output
        rows = _read_csv(target)
        trace = sum(float(row["rho_re"]) for row in rows if row["row"] == row["col"])
        assert trace == pytest.approx(1.0, rel=1e-10)

    def test_hopf_verify(self, runner, tmp_path):
        result, target = _invoke(runner, tmp_path, ["hopf-verify", "--q", "2", "--dim", "8"], name="hopf.json")
        assert result.exit_code == 0, result.output
        report = json.loads(target.read_text())
        assert all(entry["pass"] for entry in report if entry["asserted"])
        assert {"check", "reference", "params", "residual", "tolerance", "pass"} <= set(report[0])

    def test_hopf_verify_small_dim(self, runner, tmp_path):
        result, _ = _invoke(runner, tmp_path, ["hopf-verify", "--dim", "4"])
        assert result.exit_code == 2

    def test_verify_subset(self, runner, tmp_path):
        args = ["verify", "--q", "2", "--dim", "16", "--group", "commutator", "--group", "lemma"]
        result, target = _invoke(runner, tmp_path, args, name="verify.json")
        assert result.exit_code == 0, result.output
        report = json.loads(target.read_text())
        assert {entry["check"] for entry in report} == {
            "fock.commutator.plain",
            "fock.commutator.deformed",
            "fock.lemma.normal",
            "fock.lemma.antinormal",
        }

    def test_verify_is_deterministic(self, runner, tmp_path):
        args = ["verify", "--q", "0.5", "--dim", "16", "--group", "kernel", "--seed", "7"]
        first, target_a = _invoke(runner, tmp_path, args, name="a.json")
        second, target_b = _invoke(runner, tmp_path, args, name="b.json")
        assert first.exit_code == second.exit_code
        assert target_a.read_bytes() == target_b.read_bytes()


if __name__ == "__main__":
    pytest.main([__file__])
