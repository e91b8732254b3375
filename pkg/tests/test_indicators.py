import numpy as np
import pytest

from src.factorization import (
    DataOperator,
    IndicatorResult,
    SamplingGrid,
    admissible_points,
    indicator_field,
    rgb_map,
)
from src.factorization.colors import MASKED_GRAY, normalized_values
from src.forward import DiskGreenTraces, DirichletObstacle, Scenario, assemble_dtn, dtn_empty_disk
from src.geometry import Circle
from src.utils.errors import DegenerateRange

R = 5.0
N = 16


class TestSamplingGrid:

    def test_points_are_row_major(self):
        grid = SamplingGrid(x_min=0.0, x_max=1.0, y_min=0.0, y_max=2.0, nx=2, ny=3)
        assert grid.shape == (3, 2)
        assert np.allclose(grid.points[:3], [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

    def test_from_config_defaults(self):
        grid = SamplingGrid.from_config({"nx": 11})
        assert grid.nx == 11 and grid.ny == 101
        assert grid.to_dict()["x_min"] == -5.0


def test_admissible_points_respects_both_disks():
    pts = np.array([[0.0, 0.0], [4.995, 0.0], [1.0, 0.0], [2.0, 2.0]])
    ok = admissible_points(pts, R, Circle((1.0, 0.0), 0.2))
    assert ok.tolist() == [True, False, False, True]


class TestIndicatorField:

    def test_identical_operators_are_masked(self):
        a0 = dtn_empty_disk(1.0, R, N)
        operator = DataOperator.difference(a0, a0, label="same")
        assert operator.is_degenerate()
        result = indicator_field(operator, DiskGreenTraces(1.0, R, N), SamplingGrid(nx=5, ny=5), R)
        assert result.n_valid == 0
        assert result.argmax is None
        assert "DegenerateOperator" in result.notes[0]

    def test_dirichlet_disk_is_brighter_inside(self, resolution):
        obstacle = Circle((1.0, 0.0), 0.5)
        data = assemble_dtn(Scenario(R, 1.0, DirichletObstacle(obstacle)), N, resolution)
        operator = DataOperator.difference(data, dtn_empty_disk(1.0, R, N))
        grid = SamplingGrid(x_min=-3.0, x_max=1.0, y_min=-1.0, y_max=1.0, nx=3, ny=3)
        result = indicator_field(operator, DiskGreenTraces(1.0, R, N), grid, R)
        assert result.n_valid == 9
        assert result.values[1, 2] > result.values[1, 0]
        assert result.at((1, 2)) == {"x": 1.0, "y": 0.0}


class TestIndicatorResult:

    def test_argmax_skips_masked(self):
        result = IndicatorResult(values=[[1.0, 9.0, 2.0]], valid=[[True, False, True]])
        assert result.argmax == (0, 2)
        assert result.extrema == (1.0, 2.0)
        assert np.isnan(result.log_values[0, 1])

    def test_frame_columns(self):
        result = IndicatorResult(
            values=[2.0, 3.0], valid=[True, False], axes={"radius": np.array([0.5, 0.6])}
        )
        frame = result.to_frame()
        assert list(frame.columns) == ["index", "radius", "value", "log_value", "masked"]
        assert frame["masked"].tolist() == [0, 1]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            IndicatorResult(values=[1.0, 2.0], valid=[True])


class TestColors:

    def test_endpoints_and_midpoint(self):
        rgb = rgb_map(IndicatorResult(values=[[0.0, 0.5, 1.0]], valid=[[True, True, True]]))
        assert np.allclose(rgb[0, 0], (0.0, 0.0, 1.0))
        assert np.allclose(rgb[0, 1], (0.0, 1.0, 0.0))
        assert np.allclose(rgb[0, 2], (1.0, 0.0, 0.0))

    def test_masked_entries_are_gray(self):
        rgb = rgb_map(IndicatorResult(values=[0.0, 7.0, 1.0], valid=[True, False, True]))
        assert np.allclose(rgb[1], MASKED_GRAY)

    def test_log_scale(self):
        v = normalized_values(IndicatorResult(values=[1.0, 10.0, 100.0], valid=[True] * 3), log_scale=True)
        assert np.allclose(v, [-1.0, 0.0, 1.0])

    def test_constant_values(self):
        with pytest.raises(DegenerateRange):
            rgb_map(IndicatorResult(values=[2.0, 2.0], valid=[True, True]))

    def test_single_value(self):
        with pytest.raises(DegenerateRange):
            rgb_map(IndicatorResult(values=[2.0, 5.0], valid=[True, False]))
