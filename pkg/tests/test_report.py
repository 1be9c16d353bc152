from __future__ import annotations

from mallnets import abstract as ab
from mallnets import commute as cm
from mallnets import report

PNG = b"\x89PNG\r\n\x1a\n"


def test_matrix_heatmap(tmp_path):
    path = tmp_path / "matrix.png"
    assert report.matrix_heatmap(cm.EXPECTED_MATRIX, path) == path
    assert path.read_bytes()[:8] == PNG


def test_heatmap_accepts_missing_cells(tmp_path):
    path = tmp_path / "partial.png"
    report.matrix_heatmap({}, path)
    assert path.read_bytes()[:8] == PNG


def test_every_matrix_value_has_a_colour_and_label():
    assert set(report.LEVEL) == set(report.TEXT) == {None, *cm.EXPECTED_MATRIX.values()}
    assert len(report.COLORS) == len(report.LEVEL)
    assert set(report.GLYPH) == set(cm.MATRIX_ORDER)


def test_class_count_chart(tmp_path):
    path = tmp_path / "classes.png"
    report.class_count_chart({"P, ~P": (1, 1), "P & P, ~P": (2, 2)}, path)
    assert path.read_bytes()[:8] == PNG


def test_catalogue_chart(tmp_path):
    d = ab.Diff("mall-minus", False, 21, 19, (), (), (("x", "y"), ("x", "z")))
    path = tmp_path / "cat.png"
    report.catalogue_chart([d], path)
    assert path.read_bytes()[:8] == PNG
