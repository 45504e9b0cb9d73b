"""
Tests for functions, grids and norms.
"""

import math
import os
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

from semiscale.core.exceptions import ArgumentError, EvaluationError
from semiscale.core.funcspace import (
    CompactSet,
    Function,
    Grid,
    compact_seminorm,
    default_grid,
    holder_quotient,
    sample,
    sup_norm,
)
from semiscale.core.library import get_function


class TestFunction:
    """Test cases for the Function value type."""

    def test_scalar_and_array_evaluation(self):
        f = Function(np.sin, "sin", 1.0)
        assert isinstance(f(0.5), float)
        assert f(0.5) == pytest.approx(math.sin(0.5))
        values = f(np.array([0.0, math.pi / 2]))
        assert values.shape == (2,)
        assert values[1] == pytest.approx(1.0)

    def test_constant_rule_broadcasts(self):
        f = Function.constant(2.5)
        assert f(np.zeros(4)).tolist() == [2.5] * 4
        assert f.bound_hint == 2.5

    def test_evaluate_rejects_non_finite(self):
        f = Function(lambda x: np.where(x == 0.0, np.nan, x), "holed")
        with pytest.raises(EvaluationError) as excinfo:
            f.evaluate(np.array([1.0, 0.0, 2.0]))
        assert excinfo.value.x == 0.0
        assert excinfo.value.label == "holed"
        assert "holed" in str(excinfo.value)

    def test_arithmetic(self):
        f = get_function("sin")
        g = get_function("cos")
        x = np.linspace(-3, 3, 7)
        assert np.allclose((f + g)(x), np.sin(x) + np.cos(x))
        assert np.allclose((f - g)(x), np.sin(x) - np.cos(x))
        assert np.allclose((-f)(x), -np.sin(x))
        assert np.allclose((f * g)(x), np.sin(x) * np.cos(x))
        assert np.allclose((3.0 * f)(x), 3.0 * np.sin(x))
        assert (f + g).bound_hint == 2.0
        assert (f * 3.0).bound_hint == 3.0

    def test_equality_ignores_rule(self):
        assert Function(np.sin, "sin", 1.0) == get_function("sin")
        assert get_function("sin") != get_function("cos")

    def test_from_samples(self):
        points = np.array([0.0, 1.0, 2.0])
        f = Function.from_samples(points, np.array([0.0, 2.0, 0.0]))
        assert f(0.5) == pytest.approx(1.0)
        assert f(-5.0) == 0.0
        assert f(7.0) == 0.0
        assert f.bound_hint == 2.0

    def test_from_samples_validation(self):
        with pytest.raises(ArgumentError):
            Function.from_samples(np.array([0.0]), np.array([1.0]))
        with pytest.raises(ArgumentError):
            Function.from_samples(np.array([0.0, 1.0]), np.array([1.0, 2.0, 3.0]))
        with pytest.raises(EvaluationError):
            Function.from_samples(np.array([0.0, 1.0]), np.array([1.0, np.nan]))


class TestGrid:
    """Test cases for Grid and CompactSet."""

    def test_points_and_spacing(self):
        grid = Grid(-1.0, 1.0, 5)
        assert grid.points.tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]
        assert grid.spacing == 0.5
        assert grid.center == 0.0

    def test_invalid_grids(self):
        with pytest.raises(ArgumentError):
            Grid(1.0, -1.0, 10)
        with pytest.raises(ArgumentError):
            Grid(0.0, 1.0, 1)
        with pytest.raises(ArgumentError):
            Grid(0.0, math.inf, 10)

    def test_window_mask(self):
        grid = Grid(-10.0, 10.0, 21)
        mask = grid.window_mask(0.5)
        assert grid.points[mask].tolist() == [float(x) for x in range(-5, 6)]

    def test_mask_for(self):
        grid = Grid(-10.0, 10.0, 21)
        mask = grid.mask_for(CompactSet(-2.0, 2.0))
        assert mask.sum() == 5
        with pytest.raises(ArgumentError):
            grid.mask_for(CompactSet(-20.0, 20.0))
        with pytest.raises(ArgumentError):
            grid.mask_for(CompactSet(0.2, 0.4))

    def test_compact_set(self):
        K = CompactSet(-5.0, 5.0)
        assert str(K) == "[-5,5]"
        assert K.sample_points(3).tolist() == [-5.0, 0.0, 5.0]
        assert CompactSet(1.0, 1.0).sample_points(10).tolist() == [1.0]
        with pytest.raises(ArgumentError):
            CompactSet(2.0, 1.0)

    def test_default_grid_from_config(self):
        with patch("semiscale.config.Path.home") as mock_home:
            mock_home.return_value = Path("/nonexistent")
            with patch.dict(os.environ, {"SEMISCALE_GRID_N": "401"}):
                grid = default_grid()
        assert grid.n == 401
        assert (grid.a, grid.b) == (-40.0, 40.0)


class TestNorms:
    """Test cases for sup-norms, compact seminorms and Hölder quotients."""

    def setup_method(self):
        self.grid = Grid(-10.0, 10.0, 2001)

    def test_sample_order(self):
        values = sample(get_function("sin"), self.grid)
        assert values.shape == (2001,)
        assert abs(values[1000]) < 1e-12

    def test_sup_norm(self):
        assert sup_norm(get_function("sin"), self.grid) == pytest.approx(1.0, abs=1e-4)
        assert sup_norm(get_function("zero"), self.grid) == 0.0
        assert sup_norm(get_function("gaussian"), self.grid) == 1.0

    def test_compact_seminorm(self):
        K = CompactSet(0.0, math.pi / 2)
        assert compact_seminorm(get_function("sin"), K, density=101) == pytest.approx(1.0, abs=1e-12)
        assert compact_seminorm(get_function("sin"), CompactSet(0.0, 0.0), density=5) == 0.0

    def test_holder_quotient_homogeneity(self):
        f = get_function("holder_bump:0.5")
        q = holder_quotient(f, 0.5, self.grid, 50)
        assert holder_quotient(f.scale(3.0), 0.5, self.grid, 50) == pytest.approx(3.0 * q)

    def test_holder_quotient_nondecreasing_in_alpha(self):
        # lags up to 100 * 0.01 = 1, where |x - y|^alpha shrinks as alpha grows
        f = get_function("sin")
        values = [holder_quotient(f, a, self.grid, 100) for a in (0.25, 0.5, 0.75, 1.0)]
        assert values == sorted(values)
        assert values[-1] == pytest.approx(1.0, abs=1e-3)

    def test_holder_quotient_bump(self):
        q = holder_quotient(get_function("holder_bump:0.5"), 0.5, self.grid, 100)
        assert 0.9 < q <= 1.05

    def test_holder_quotient_validation(self):
        with pytest.raises(ArgumentError):
            holder_quotient(get_function("sin"), 0.0, self.grid, 10)
        with pytest.raises(ArgumentError):
            holder_quotient(get_function("sin"), 1.5, self.grid, 10)
        with pytest.raises(ArgumentError):
            holder_quotient(get_function("sin"), 0.5, self.grid, 0)
