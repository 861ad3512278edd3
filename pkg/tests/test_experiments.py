"""Benchmark driver rows, CSV round trips, and byte-level determinism."""

import numpy as np
import pytest

from trifun import gen_builtin_matrix, write_matrix
from trifun.experiments import (
    CSV_COLUMNS,
    DEFAULT_CROSS_TOLERANCE,
    ExperimentRecord,
    read_records,
    record_from_row,
    run_experiment,
    summarize,
    write_records,
)


def _strip_runtimes(path):
    lines = []
    with open(path) as fh:
        for line in fh:
            cells = line.rstrip("\n").split(",")
            lines.append(",".join(cells[:-2]))
    return lines


class TestRows:
    def test_exp3_on_corner_matrix(self, tmp_path):
        records = run_experiment("exp3-exp", out_path=tmp_path / "r.csv")
        row = next(r for r in records if r.matrix_id == "eq3")
        assert row.s_direct >= 20
        assert row.s_scaled <= 1
        assert row.oracle == "exact"
        assert row.err_direct < 1e-9
        assert row.err_scaled < 1e-12

    def test_exp1_log_exact_row(self):
        records = run_experiment("exp1-log")
        row = next(r for r in records if r.matrix_id == "exp1_t1")
        assert row.oracle == "exact"
        assert row.err_scaled <= 1e-10

    def test_exp1_log_parlett_row(self):
        records = run_experiment("exp1-log")
        row = next(r for r in records if r.matrix_id == "eq4")
        assert row.oracle == "parlett"
        assert row.s_scaled < row.s_direct

    def test_toeplitz_counts_reduced(self):
        records = run_experiment("exp2-toeplitz", sizes=range(82, 87, 2))
        assert len(records) == 3
        for row in records:
            assert row.s_scaled < row.s_direct
            assert row.oracle == "cross"
            assert row.err_direct <= DEFAULT_CROSS_TOLERANCE
            assert row.err_scaled == 0.0

    def test_acos_suite_runs(self):
        records = run_experiment("exp4-acos", sizes=(6, 8))
        assert len(records) == 2
        for row in records:
            assert row.oracle in ("parlett", "cross")
            assert row.s_scaled is not None

    def test_custom_requires_inputs(self):
        with pytest.raises(ValueError, match="input files"):
            run_experiment("custom")

    def test_custom_from_file(self, tmp_path):
        path = tmp_path / "m.txt"
        write_matrix(gen_builtin_matrix("eq4"), path)
        records = run_experiment("custom", inputs=[path], fn_name="log")
        assert len(records) == 1
        assert records[0].n == 4

    def test_unknown_experiment(self):
        with pytest.raises(ValueError, match="unknown experiment"):
            run_experiment("exp5-sin")

    def test_failure_rows_are_tagged(self, tmp_path):
        # eigenvalue on the negative real axis: log fails, the run continues
        path = tmp_path / "bad.txt"
        write_matrix(np.diag([1.0, -2.0]), path)
        good = tmp_path / "good.txt"
        write_matrix(np.diag([1.0, 2.0]), good)
        records = run_experiment("custom", inputs=[path, good], fn_name="log")
        assert records[0].oracle == "error:BranchError"
        assert records[0].err_direct is None
        assert records[1].oracle in ("parlett", "cross")


class TestCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "rows.csv"
        records = run_experiment("exp2-toeplitz", sizes=range(82, 85, 2), out_path=path)
        back = read_records(path)
        assert back == records

    def test_header_and_column_order(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_records([], path)
        with open(path) as fh:
            assert fh.readline().strip() == ",".join(CSV_COLUMNS)

    def test_na_cells_round_trip(self):
        rec = ExperimentRecord(
            matrix_id="x", n=2, ratio=1.5, alpha=1.0, m=1,
            s_direct=None, s_scaled=None, err_direct=None, err_scaled=None,
            oracle="error:BranchError", runtime_direct_ms=0.5, runtime_scaled_ms=0.25,
        )
        assert record_from_row(rec.to_row()) == rec

    def test_determinism_modulo_runtimes(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_experiment("exp1-log", seed=7, out_path=p1)
        run_experiment("exp1-log", seed=7, out_path=p2)
        assert _strip_runtimes(p1) == _strip_runtimes(p2)

    def test_seed_changes_random_rows(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_experiment("exp1-log", seed=7, out_path=p1)
        run_experiment("exp1-log", seed=8, out_path=p2)
        assert _strip_runtimes(p1) != _strip_runtimes(p2)


class TestSummary:
    def test_contains_matrix_ids(self):
        records = run_experiment("exp2-toeplitz", sizes=range(82, 85, 2))
        text = summarize(records)
        assert "toeplitz-82" in text
        assert "oracle" in text.splitlines()[0]
