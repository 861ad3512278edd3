"""Matrix file format: bit-exact round trips and line-numbered errors."""

import numpy as np
import pytest

from trifun import MatrixFileError, read_matrix, write_matrix
from trifun.matio import format_matrix, parse_matrix

from helpers import rand_upper


class TestRoundTrip:
    def test_simple_diagonal(self, tmp_path):
        path = tmp_path / "m.txt"
        T = np.diag([1.0, 2.0]).astype(complex)
        write_matrix(T, path)
        np.testing.assert_array_equal(read_matrix(path), T)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_bit_exact(self, tmp_path, seed):
        rng = np.random.default_rng(seed)
        T = rand_upper(rng, int(rng.integers(1, 10)), mag=10.0 ** rng.integers(-300, 300))
        path = tmp_path / "m.txt"
        write_matrix(T, path)
        back = read_matrix(path)
        np.testing.assert_array_equal(back.view(np.float64), T.view(np.float64))

    def test_awkward_values_survive(self, tmp_path):
        T = np.array(
            [[complex(1 / 3, -0.0), complex(5e-324 * 2**52, 1.7976931348623157e308 / 4)],
             [0.0, complex(-1e-200, 2**-1074 * 2**60)]]
        )
        path = tmp_path / "m.txt"
        write_matrix(T, path)
        np.testing.assert_array_equal(read_matrix(path).view(np.float64), T.view(np.float64))

    def test_negative_zero_preserved(self, tmp_path):
        T = np.array([[complex(-0.0, 0.0)]])
        path = tmp_path / "m.txt"
        write_matrix(T, path)
        back = read_matrix(path)
        assert np.signbit(back[0, 0].real)


class TestParsing:
    def test_comments_and_blank_lines(self):
        text = "# header comment\n\n2\n# rows follow\n(1.0,0.0) (2.0,-3.0)\n\n(0.0,0.0) (4.0,0.0)\n"
        T = parse_matrix(text)
        np.testing.assert_array_equal(
            T, np.array([[1.0, 2.0 - 3.0j], [0.0, 4.0]])
        )

    def test_complex_entry_format(self):
        T = parse_matrix("1\n(1.0,-2.5)\n")
        assert T[0, 0] == 1.0 - 2.5j

    def test_malformed_entry_reports_line(self):
        with pytest.raises(MatrixFileError, match="line 2.*malformed"):
            parse_matrix("2\n(1.0,0.0) nonsense\n(0.0,0.0) (1.0,0.0)\n")

    def test_wrong_entry_count_reports_line(self):
        with pytest.raises(MatrixFileError, match="line 3.*dimension mismatch"):
            parse_matrix("2\n(1.0,0.0) (2.0,0.0)\n(0.0,0.0)\n")

    def test_lower_triangular_content_reports_position(self):
        with pytest.raises(MatrixFileError, match=r"line 3.*\(2,1\)"):
            parse_matrix("2\n(1.0,0.0) (2.0,0.0)\n(5.0,0.0) (3.0,0.0)\n")

    def test_missing_rows(self):
        with pytest.raises(MatrixFileError, match="expected 3 rows"):
            parse_matrix("3\n(1.0,0.0) (0.0,0.0) (0.0,0.0)\n")

    def test_extra_rows(self):
        with pytest.raises(MatrixFileError, match="more than 1"):
            parse_matrix("1\n(1.0,0.0)\n(2.0,0.0)\n")

    def test_bad_header(self):
        with pytest.raises(MatrixFileError, match="line 1.*order"):
            parse_matrix("two\n")

    def test_empty_file(self):
        with pytest.raises(MatrixFileError, match="empty"):
            parse_matrix("# only a comment\n")

    def test_non_finite_entry_rejected(self):
        with pytest.raises(MatrixFileError, match="line 2.*non-finite"):
            parse_matrix("1\n(inf,0.0)\n")


class TestFormat:
    def test_header_then_rows(self):
        text = format_matrix(np.diag([1.0, 2.0]))
        lines = text.splitlines()
        assert lines[0] == "2"
        assert lines[1].split()[0] == "(1.0,0.0)"
        assert text.endswith("\n")
