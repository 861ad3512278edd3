"""CLI subcommands and exit codes (0 ok, 1 input, 2 numerical, 3 violations)."""

import numpy as np
import pytest

from trifun import gen_builtin_matrix, read_matrix, write_matrix
from trifun.cli import main
from trifun.experiments import read_records


@pytest.fixture
def eq4_file(tmp_path):
    path = tmp_path / "eq4.txt"
    write_matrix(gen_builtin_matrix("eq4"), path)
    return str(path)


class TestScale:
    def test_forward_and_inverse(self, tmp_path, eq4_file):
        out = str(tmp_path / "scaled.txt")
        back = str(tmp_path / "back.txt")
        assert main(["scale", "--input", eq4_file, "--alpha", "2.0", "--output", out]) == 0
        T = gen_builtin_matrix("eq4")
        scaled = read_matrix(out)
        assert scaled[0, 3] == T[0, 3] / 8
        assert main(["scale", "--input", out, "--alpha", "2.0", "--inverse", "--output", back]) == 0
        np.testing.assert_array_equal(read_matrix(back), T)

    def test_block_flag(self, tmp_path, eq4_file):
        out = str(tmp_path / "scaled.txt")
        assert main(["scale", "--input", eq4_file, "--alpha", "2.0", "--m", "2", "--output", out]) == 0
        T = gen_builtin_matrix("eq4")
        scaled = read_matrix(out)
        assert scaled[0, 1] == T[0, 1]       # same block
        assert scaled[0, 2] == T[0, 2] / 2   # one block apart

    def test_missing_file_is_input_error(self, tmp_path):
        out = str(tmp_path / "o.txt")
        assert main(["scale", "--input", "nope.txt", "--alpha", "2", "--output", out]) == 1


class TestPlan:
    def test_prints_parameters(self, eq4_file, capsys):
        assert main(["plan", "--input", eq4_file]) == 0
        out = capsys.readouterr().out
        assert "alpha = 30000.0" in out
        assert "m = 4" in out
        assert "block sizes = 1 1 1 1" in out


class TestFn:
    def test_both_modes_print_counts(self, eq4_file, capsys):
        assert main(["fn", "log", "--input", eq4_file]) == 0
        out = capsys.readouterr().out
        assert "direct: count_s=" in out
        assert "scaled: count_s=" in out
        assert "agreement:" in out

    def test_output_file_written(self, tmp_path, eq4_file):
        out = str(tmp_path / "log.txt")
        assert main(["fn", "log", "--input", eq4_file, "--mode", "scaled", "--output", out]) == 0
        assert read_matrix(out).shape == (4, 4)

    def test_theta_flag(self, eq4_file, capsys):
        assert main(["fn", "log", "--input", eq4_file, "--mode", "scaled", "--theta", "0.1"]) == 0
        assert "count_s=" in capsys.readouterr().out

    def test_branch_failure_is_exit_two(self, tmp_path):
        path = str(tmp_path / "neg.txt")
        write_matrix(np.diag([1.0, -2.0]), path)
        assert main(["fn", "log", "--input", path]) == 2

    def test_bad_theta_is_input_error(self, eq4_file):
        assert main(["fn", "log", "--input", eq4_file, "--theta", "7.0"]) == 1

    def test_unknown_function_is_input_error(self, eq4_file):
        assert main(["fn", "sin", "--input", eq4_file]) == 1


class TestCond:
    def test_prints_report(self, tmp_path, capsys):
        path = str(tmp_path / "d.txt")
        write_matrix(np.array([[1.3]]), path)
        assert main(["cond", "--fn", "exp", "--input", path]) == 0
        out = capsys.readouterr().out
        assert "cond_abs" in out and "cond_rel" in out

    def test_order_cap_is_input_error(self, tmp_path):
        path = str(tmp_path / "big.txt")
        write_matrix(np.eye(21), path)
        assert main(["cond", "--fn", "exp", "--input", path]) == 1


class TestVerify:
    def test_clean_report_exit_zero(self, tmp_path, capsys):
        path = str(tmp_path / "t.txt")
        write_matrix(np.diag([0.3, 0.8, 1.4]), path)
        assert main(["verify", "--fn", "exp", "--input", path, "--alpha", "10"]) == 0
        assert "0 violation(s)" in capsys.readouterr().out

    def test_violations_exit_three(self, tmp_path, monkeypatch):
        path = str(tmp_path / "t.txt")
        write_matrix(np.diag([0.3, 0.8]), path)
        import trifun.cli as cli_mod

        real = cli_mod.verify_scaling_structure

        def tampered(kernel, T, alpha):
            report = real(kernel, T, alpha)
            import dataclasses

            return dataclasses.replace(
                report, rescale_violations=((1, 2, 1.0),)
            )

        monkeypatch.setattr(cli_mod, "verify_scaling_structure", tampered)
        assert main(["verify", "--fn", "exp", "--input", path, "--alpha", "10"]) == 3


class TestBench:
    def test_writes_csv(self, tmp_path, capsys):
        out = str(tmp_path / "rows.csv")
        code = main(["bench", "--experiment", "exp2-toeplitz", "--sizes", "82:2:84", "--out", out])
        assert code == 0
        assert len(read_records(out)) == 2
        assert "toeplitz-82" in capsys.readouterr().out

    def test_bad_sizes_is_input_error(self, tmp_path):
        out = str(tmp_path / "rows.csv")
        assert main(["bench", "--experiment", "exp2-toeplitz", "--sizes", "82:2", "--out", out]) == 1


class TestParser:
    def test_unknown_command_is_input_error(self):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag_is_input_error(self):
        assert main(["plan"]) == 1

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0
