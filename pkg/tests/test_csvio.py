import numpy as np
import pytest

from impurity_thermo import MatrixFn
from impurity_thermo.csvio import (NonFiniteOutput, format_float, read_matrix_fn, render_table,
                                   write_matrix_fn)


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(-0.0) == "0"
    assert format_float(2) == "2"
    assert float(format_float(np.pi)) == np.pi


def test_render_table_layout():
    text = render_table(["a", "b"], [[1.0, 2.5]], meta=["units: none"], footer=["done"])
    assert text == "# units: none\na,b\n1,2.5\n# done\n"
    assert "\r" not in text


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_non_finite_rejected(bad):
    with pytest.raises(NonFiniteOutput, match="column 'b'"):
        render_table(["a", "b"], [[1.0, 2.0], [1.0, bad]], operation="demo")


def test_matrix_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    grid = np.linspace(-2, 2, 9)
    vals = rng.normal(size=(9, 2, 2)) + 1j * rng.normal(size=(9, 2, 2))
    fn = MatrixFn(grid, vals)
    path = write_matrix_fn(tmp_path / "m.csv", fn, meta=["two-level test"])
    lines = path.read_text().splitlines()
    assert lines[1] == "omega,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11"
    back = read_matrix_fn(path)
    np.testing.assert_array_equal(back.grid, grid)
    np.testing.assert_array_equal(back.values, vals)


def test_read_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("omega,re_00\n0,1\n")
    with pytest.raises(ValueError):
        read_matrix_fn(p)
