import numpy as np
import pytest

from escdyn import FATOU, EscapeConfig, classify, exp_map
from escdyn.orbit import BOUNDED, ESCAPING, UNDECIDED, VERDICTS
from escdyn.raster import (
    EscapeField,
    GridSpec,
    PixelBudgetExceeded,
    field_rgb,
    ppm_bytes,
    rasterize,
    write_field_csv,
    write_ppm,
)


def one_cell(code, step=0, max_iter=200, width=1):
    grid = GridSpec((0, 1, 0, 1), width, 1)
    return EscapeField(grid, np.full((1, width), code, np.int8), np.full((1, width), step, np.int32),
                       EscapeConfig(max_iter=max_iter))


def test_ppm_bounded_cell():
    assert ppm_bytes(one_cell(BOUNDED)) == b"P6\n1 1\n255\n\x00\x00\x00"


def test_ppm_undecided_cell():
    assert ppm_bytes(one_cell(UNDECIDED)).endswith(b"\x80\x00\x00")


def test_ppm_escape_gray_levels():
    f = one_cell(ESCAPING, width=2, max_iter=200)
    f.step[0] = [200, 100]
    assert ppm_bytes(f)[-6:] == bytes([255] * 3 + [127] * 3)


def test_gray_saturates_beyond_horizon():
    f = one_cell(ESCAPING, step=500, max_iter=10)
    assert field_rgb(f)[0, 0].tolist() == [255, 255, 255]


def test_grid_centers_top_row_first():
    g = GridSpec((-1, 1, -1, 1), 2, 2)
    c = g.centers()
    assert c.shape == (2, 2)
    assert c[0, 0] == complex(-0.5, 0.5)
    assert c[1, 1] == complex(0.5, -0.5)


@pytest.mark.parametrize("args", [((1, 0, 0, 1), 2, 2), ((0, 1, 0, 1), 0, 2)])
def test_grid_validation(args):
    with pytest.raises(ValueError):
        GridSpec(*args)


def test_pixel_budget():
    with pytest.raises(PixelBudgetExceeded):
        GridSpec((0, 1, 0, 1), 100, 100, pixel_budget=9999)


def test_fatou_right_half_plane_all_escaping():
    field = rasterize(FATOU, GridSpec((0.1, 4, -2, 2), 40, 40))
    assert field.fraction(ESCAPING) == 1.0


def test_exp_quarter_basin_bounded():
    field = rasterize(exp_map(0.25), GridSpec((-2, 0, -1, 1), 32, 32))
    assert field.fraction(BOUNDED) > 0.95


def test_single_cell_matches_classify(fatou_g):
    field = rasterize(fatou_g, GridSpec((-1, 0.5, 2, 4), 1, 1))
    c = classify(fatou_g, complex(-0.25, 3))
    assert VERDICTS[field.verdict[0, 0]] is c.verdict
    assert field.step[0, 0] == c.step


def test_threads_do_not_change_bytes(tmp_path, fatou_g):
    grid = GridSpec((-8, 8, -8, 8), 96, 64)
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    write_ppm(rasterize(fatou_g, grid, threads=1), a)
    write_ppm(rasterize(fatou_g, grid, threads=8), b)
    assert a.read_bytes() == b.read_bytes()


def test_refinement_agrees_on_shared_centers():
    # a 3x finer grid contains every center of the coarse grid
    coarse = rasterize(exp_map(0.25), GridSpec((-3, 3, -3, 3), 20, 20))
    fine = rasterize(exp_map(0.25), GridSpec((-3, 3, -3, 3), 60, 60))
    assert np.array_equal(coarse.verdict, fine.verdict[1::3, 1::3])
    assert np.array_equal(coarse.step, fine.step[1::3, 1::3])


def test_field_csv(tmp_path):
    f = one_cell(ESCAPING, step=7, width=2)
    p = tmp_path / "f.csv"
    write_field_csv(f, p)
    assert p.read_text().splitlines() == ["px,py,verdict,step", "0,0,Escaping,7", "1,0,Escaping,7"]
