"""Sparse-text ingestion, ratio splits, and CSV emission."""

import csv
import io
import warnings
from pathlib import Path

import numpy as np
import pytest

from conftest import integer_dataset, random_dataset
from pairrank import (
    RESULT_CSV_HEADER,
    Dataset,
    LibsvmLabelError,
    LibsvmParseError,
    ResultRow,
    parse_libsvm,
    subsample_ratio_split,
    write_libsvm,
    write_results_csv,
)


def _parse(text, dim_hint=None):
    return parse_libsvm(io.StringIO(text), dim_hint=dim_hint)


class TestParseLibsvm:
    def test_sparse_line_densifies(self):
        data = _parse("+1 1:0.5 3:2\n", dim_hint=3)
        assert data.dim == 3
        assert data.n1 == 1 and data.n0 == 0
        np.testing.assert_array_equal(data.positives[0], [0.5, 0.0, 2.0])

    def test_bare_label_is_zero_vector(self):
        data = _parse("-1\n", dim_hint=2)
        assert data.n0 == 1
        np.testing.assert_array_equal(data.negatives[0], [0.0, 0.0])

    def test_label_synonyms(self):
        data = _parse("+1 1:1\n1 1:2\n1.0 1:3\n-1 1:4\n0 1:5\n-1.0 1:6\n0.0 1:7\n")
        assert data.n1 == 3 and data.n0 == 4
        np.testing.assert_array_equal(data.positives[:, 0], [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(data.negatives[:, 0], [4.0, 5.0, 6.0, 7.0])

    @pytest.mark.parametrize("token", ["2", "+0.5", "-3"])
    def test_unrecognized_label_raises(self, token):
        with pytest.raises(LibsvmLabelError) as excinfo:
            _parse(f"+1 1:1\n{token} 1:3\n")
        assert excinfo.value.line_number == 2
        assert isinstance(excinfo.value, LibsvmParseError)

    @pytest.mark.parametrize(
        "line",
        [
            "+1 1",
            "+1 :5",
            "+1 a:1",
            "+1 1:",
            "+1 1:abc",
            "+1 0:1",
            "+1 -2:1",
            "+1 2:1 2:3",
            "+1 3:1 2:5",
            "abc 1:1",
            "+1 1:nan",
            "+1 1:1e400",
        ],
    )
    def test_malformed_line_raises_with_line_number(self, line):
        with pytest.raises(LibsvmParseError) as excinfo:
            _parse(line + "\n")
        assert excinfo.value.line_number == 1
        assert "line 1" in str(excinfo.value)

    def test_blank_lines_skipped_but_counted(self):
        data = _parse("+1 1:1\n\n   \n-1 2:1\n")
        assert data.n1 == 1 and data.n0 == 1 and data.dim == 2
        with pytest.raises(LibsvmParseError) as excinfo:
            _parse("+1 1:1\n\n-1 1:\n")
        assert excinfo.value.line_number == 3

    def test_dim_hint_widens_but_never_narrows(self):
        assert _parse("+1 1:1\n", dim_hint=5).dim == 5
        assert _parse("+1 4:1\n", dim_hint=2).dim == 4
        assert _parse("+1 4:1\n").dim == 4

    def test_path_and_stream_agree(self, tmp_path):
        text = "+1 1:0.25 2:-1\n-1 2:3\n"
        path = tmp_path / "toy.txt"
        path.write_text(text, encoding="ascii")
        from_str = parse_libsvm(str(path))
        from_path = parse_libsvm(Path(path))
        from_stream = _parse(text)
        np.testing.assert_array_equal(from_str.positives, from_stream.positives)
        np.testing.assert_array_equal(from_path.negatives, from_stream.negatives)

    def test_non_ascii_bytes_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_bytes(b"+1 1:\xc3\xa9\n")
        with pytest.raises(ValueError):
            parse_libsvm(path)

    def test_wide_data_warns(self):
        with pytest.warns(UserWarning, match="5001"):
            data = _parse("+1 5001:1\n")
        assert data.dim == 5001


class TestWriteLibsvm:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(411)
        data = integer_dataset(rng, dim=4, n1=3, n0=2)
        path = tmp_path / "round.txt"
        write_libsvm(data, path)
        back = parse_libsvm(path, dim_hint=data.dim)
        np.testing.assert_array_equal(back.positives, data.positives)
        np.testing.assert_array_equal(back.negatives, data.negatives)

    def test_continuous_values_round_trip(self, tmp_path):
        rng = np.random.default_rng(412)
        data = random_dataset(rng, dim=3, n1=4, n0=4)
        path = tmp_path / "cont.txt"
        write_libsvm(data, path)
        back = parse_libsvm(path, dim_hint=data.dim)
        np.testing.assert_array_equal(back.positives, data.positives)
        np.testing.assert_array_equal(back.negatives, data.negatives)

    def test_zeros_are_omitted(self, tmp_path):
        data = Dataset.from_arrays(
            positives=np.array([[0.0, 2.0]]), negatives=np.array([[0.0, 0.0]])
        )
        path = tmp_path / "sparse.txt"
        write_libsvm(data, path)
        lines = path.read_text(encoding="ascii").splitlines()
        assert lines[0] == "+1 2:2.0"
        assert lines[1] == "-1"


class TestSubsampleRatioSplit:
    def test_full_ratio_returns_same_object(self):
        rng = np.random.default_rng(421)
        data = integer_dataset(rng, dim=3, n1=5, n0=5)
        assert subsample_ratio_split(data, 1.0, seed=7) is data

    def test_half_of_hundred_keeps_fifty(self):
        rng = np.random.default_rng(422)
        data = integer_dataset(rng, dim=3, n1=60, n0=40)
        split = subsample_ratio_split(data, 0.5, seed=1)
        assert split.n == 50

    def test_keep_count_is_ceiling(self):
        rng = np.random.default_rng(423)
        data = integer_dataset(rng, dim=2, n1=4, n0=3)
        split = subsample_ratio_split(data, 0.5, seed=2)
        assert split.n == 4

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(424)
        data = integer_dataset(rng, dim=3, n1=30, n0=30)
        a = subsample_ratio_split(data, 0.4, seed=11)
        b = subsample_ratio_split(data, 0.4, seed=11)
        c = subsample_ratio_split(data, 0.4, seed=12)
        np.testing.assert_array_equal(a.positives, b.positives)
        np.testing.assert_array_equal(a.negatives, b.negatives)
        assert a.positives.shape != c.positives.shape or not np.array_equal(
            a.positives, c.positives
        )

    def test_kept_rows_come_from_matching_class(self):
        rng = np.random.default_rng(425)
        data = integer_dataset(rng, dim=5, n1=20, n0=15)
        split = subsample_ratio_split(data, 0.6, seed=3)
        pos_rows = {tuple(row) for row in data.positives}
        neg_rows = {tuple(row) for row in data.negatives}
        assert all(tuple(row) in pos_rows for row in split.positives)
        assert all(tuple(row) in neg_rows for row in split.negatives)

    def test_empty_class_warns_not_raises(self):
        rng = np.random.default_rng(426)
        data = integer_dataset(rng, dim=2, n1=1, n0=40)
        warned = None
        for seed in range(20):
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                split = subsample_ratio_split(data, 0.1, seed=seed)
            if split.n1 == 0:
                assert any("empty" in str(w.message) for w in caught)
                warned = seed
                break
        assert warned is not None, "no scanned seed dropped the lone positive"
        with pytest.warns(UserWarning, match="empty"):
            subsample_ratio_split(data, 0.1, seed=warned)

    @pytest.mark.parametrize("ratio", [0.0, -0.5, 1.5])
    def test_invalid_ratio_rejected(self, ratio):
        rng = np.random.default_rng(427)
        data = integer_dataset(rng, dim=2, n1=3, n0=3)
        with pytest.raises(ValueError):
            subsample_ratio_split(data, ratio, seed=0)


def _row(**overrides):
    values = dict(
        experiment_id="exp",
        algorithm="bbr",
        dataset="toy",
        n1=3,
        n0=2,
        s=0,
        seed=17,
        phi_risk=0.125,
        auc=1.0,
        wall_time_seconds=0.0,
        extra={},
    )
    values.update(overrides)
    return ResultRow(**values)


class TestResultRow:
    def test_cells_align_with_header(self):
        row = _row(extra={"a": "b", "c": "d"})
        cells = row.csv_cells()
        assert len(cells) == len(RESULT_CSV_HEADER) == 11
        assert cells[3:7] == ["3", "2", "0", "17"]
        assert cells[7] == "0.125"
        assert cells[8] == "1"
        assert cells[10] == "a=b;c=d"

    def test_float_cells_round_trip(self):
        row = _row(phi_risk=2.0 / 3.0, auc=1.0 / 3.0, wall_time_seconds=0.1234567890123)
        cells = row.csv_cells()
        assert float(cells[7]) == row.phi_risk
        assert float(cells[8]) == row.auc
        assert float(cells[9]) == row.wall_time_seconds

    @pytest.mark.parametrize(
        "overrides",
        [
            {"auc": 1.2},
            {"auc": -0.1},
            {"auc": float("nan")},
            {"wall_time_seconds": -1.0},
            {"extra": {"a=b": "c"}},
            {"extra": {"a": "b;c"}},
            {"extra": {"a;b": "c"}},
        ],
    )
    def test_invalid_rows_rejected(self, overrides):
        with pytest.raises(ValueError):
            _row(**overrides)


class TestWriteResultsCsv:
    def test_empty_iterable_writes_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_results_csv([], path)
        assert path.read_text(encoding="utf-8") == ",".join(RESULT_CSV_HEADER) + "\n"

    def test_two_rows_three_lines(self, tmp_path):
        path = tmp_path / "two.csv"
        write_results_csv([_row(), _row(algorithm="lcbr", s=100)], path)
        assert len(path.read_text(encoding="utf-8").splitlines()) == 3

    def test_reader_round_trip_preserves_cells(self, tmp_path):
        rows = [
            _row(dataset="name,with comma", phi_risk=0.3333333333333333),
            _row(extra={"note": "x,y", "mult": "0.5"}, auc=0.7071067811865476),
        ]
        path = tmp_path / "round.csv"
        write_results_csv(rows, path)
        with open(path, newline="", encoding="utf-8") as handle:
            parsed = list(csv.reader(handle))
        assert parsed[0] == list(RESULT_CSV_HEADER)
        for row, cells in zip(rows, parsed[1:]):
            assert cells == row.csv_cells()
            assert float(cells[7]) == row.phi_risk
            assert float(cells[8]) == row.auc
