"""
Tests for the concrete semigroups, generators and the shared quadrature kernel.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from semiscale.core.exceptions import ArgumentError, DomainError
from semiscale.core.funcspace import Function, Grid, sample, sup_norm
from semiscale.core.library import get_function
from semiscale.core.semigroups import (
    QuadratureSpec,
    SemigroupDescriptor,
    SemigroupKind,
    apply,
    generator_apply,
    heat_mixture,
    orbit_integral,
    simpson_rule,
    superpose,
)

GRID = Grid(-10.0, 10.0, 2001)
# Wide enough for every evaluation point of a second step started on GRID
FINE = Grid(-30.0, 30.0, 30001)
BUILTINS = ("zero", "const:-1", "sin", "cos", "gaussian", "rational:1", "holder_bump:0.5", "chirp_train:0.5")


def _sup_diff(f, g, grid=GRID) -> float:
    return float(np.max(np.abs(sample(f, grid) - sample(g, grid))))


def _materialize(f: Function, grid: Grid = FINE) -> Function:
    """Sample f once so that a further step does not re-run its quadrature per node."""
    return Function.from_samples(grid.points, sample(f, grid), f.label)


class TestDescriptors:
    """Test cases for SemigroupDescriptor and QuadratureSpec."""

    def test_parse(self):
        assert SemigroupDescriptor.parse("translation").kind == SemigroupKind.TRANSLATION
        heat = SemigroupDescriptor.parse("heat", sigma=2.0)
        assert heat.kind == SemigroupKind.HEAT
        assert heat.sigma == 2.0
        mult = SemigroupDescriptor.parse("multiplication:const:-1", GRID)
        assert mult.omega == -1.0
        assert mult.sigma == 0.0
        assert mult.selection == "multiplication:const:-1"

    def test_parse_errors(self):
        with pytest.raises(ArgumentError):
            SemigroupDescriptor.parse("rotation")
        with pytest.raises(ArgumentError):
            SemigroupDescriptor.parse("multiplication")
        with pytest.raises(DomainError):
            SemigroupDescriptor.parse("multiplication:const:1", GRID)
        with pytest.raises(DomainError):
            SemigroupDescriptor.parse("multiplication:zero", GRID)

    def test_growth_bounds(self):
        sg = SemigroupDescriptor.translation(sigma=1.5)
        assert sg.growth_bound() == 0.0
        assert sg.growth_bound(shifted=True) == -1.5
        assert sg.with_sigma(3.0).effective_bound == -3.0

    def test_invalid_descriptor(self):
        with pytest.raises(ArgumentError):
            SemigroupDescriptor(SemigroupKind.MULTIPLICATION)
        with pytest.raises(ArgumentError):
            SemigroupDescriptor(SemigroupKind.TRANSLATION, M=0.5)
        with pytest.raises(ArgumentError):
            SemigroupDescriptor.translation(sigma=-1.0)

    def test_quadrature_spec(self):
        quad = QuadratureSpec(panels=32, max_intervals=128)
        assert quad.intervals_for(1.0) == 64
        assert quad.intervals_for(10.0) == 100
        assert quad.intervals_for(1000.0) == 128
        assert quad.tail_cutoff(1.0, 1.0) == pytest.approx(math.log(1e6))
        assert quad.tail_cutoff(0.0, 2.0) == 0.5
        with pytest.raises(ArgumentError):
            QuadratureSpec(panels=8)
        with pytest.raises(ArgumentError):
            QuadratureSpec(panels=64, max_intervals=64)

    def test_simpson_rule(self):
        nodes, weights = simpson_rule(0.0, 1.0, 10)
        assert len(nodes) == 11
        assert weights.sum() == pytest.approx(1.0)
        assert np.dot(weights, nodes**3) == pytest.approx(0.25)


class TestApply:
    """Test cases for apply."""

    def test_identity_at_zero(self):
        f = get_function("sin")
        for sg in (SemigroupDescriptor.translation(), SemigroupDescriptor.heat()):
            assert apply(sg, 0.0, f) is f

    def test_negative_time(self):
        with pytest.raises(DomainError):
            apply(SemigroupDescriptor.translation(), -1.0, get_function("sin"))

    def test_translation(self):
        shifted = apply(SemigroupDescriptor.translation(), 0.7, get_function("sin"))
        x = GRID.points
        assert np.allclose(sample(shifted, GRID), np.sin(x + 0.7), atol=1e-15)

    def test_shifted_family(self):
        sg = SemigroupDescriptor.translation(sigma=1.0)
        g = apply(sg, 0.5, get_function("cos"), shifted=True)
        assert np.allclose(sample(g, GRID), math.exp(-0.5) * np.cos(GRID.points + 0.5))
        assert g.bound_hint == pytest.approx(math.exp(-0.5))

    def test_multiplication(self):
        sg = SemigroupDescriptor.multiplication(get_function("potential:1"), GRID)
        g = apply(sg, 0.3, get_function("const:1"))
        x = GRID.points
        assert np.allclose(sample(g, GRID), np.exp(-0.3 * (1.0 + x * x)))

    def test_heat_on_sine(self):
        # G_t * sin = exp(-t) sin
        g = apply(SemigroupDescriptor.heat(), 0.5, get_function("sin"))
        assert np.max(np.abs(sample(g, GRID) - math.exp(-0.5) * np.sin(GRID.points))) < 1e-5

    def test_heat_preserves_constants(self):
        g = apply(SemigroupDescriptor.heat(), 2.0, get_function("const:3"))
        assert np.allclose(sample(g, GRID), 3.0, atol=1e-12)

    @pytest.mark.parametrize("selection", ["translation", "heat", "multiplication:potential:1"])
    def test_semigroup_law(self, selection):
        sg = SemigroupDescriptor.parse(selection, GRID)
        f = get_function("gaussian")
        once = apply(sg, 0.5, f)
        twice = apply(sg, 0.25, _materialize(apply(sg, 0.25, f)))
        assert _sup_diff(once, twice) < 1e-5

    @pytest.mark.parametrize("selection", ["translation", "heat", "multiplication:potential:1"])
    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_contraction(self, selection, t):
        sg = SemigroupDescriptor.parse(selection, GRID)
        for label in BUILTINS:
            f = get_function(label)
            bound = sg.M * math.exp(sg.omega * t) * f.bound_hint
            assert sup_norm(apply(sg, t, f), GRID) <= bound + 1e-6, label


class TestHeatAccuracy:
    """Test cases for the heat convolution on rough and smooth inputs."""

    def setup_method(self):
        self.heat = SemigroupDescriptor.heat()

    @pytest.mark.parametrize("label", ["sin", "gaussian", "rational:1", "holder_bump:0.5", "const:1"])
    def test_semigroup_law_sweep(self, label):
        f = get_function(label)
        times = (0.1, 0.5, 1.0)
        for s in times:
            inner = _materialize(apply(self.heat, s, f))
            for t in times:
                composed = apply(self.heat, t, inner)
                assert _sup_diff(composed, apply(self.heat, s + t, f)) < 5e-3, (s, t)

    @pytest.mark.parametrize("x0", [0.0, 0.3, 1.0, 2.5])
    def test_bump_matches_adaptive_quadrature(self, x0):
        t = 1.1
        g = apply(self.heat, t, get_function("holder_bump:0.5"))
        width = 12.0 * math.sqrt(t)
        kinks = [x0 - k * math.pi for k in range(-8, 9) if abs(x0 - k * math.pi) < width]
        scale = 1.0 / math.sqrt(4.0 * math.pi * t)

        def integrand(y: float) -> float:
            return scale * math.exp(-y * y / (4.0 * t)) * math.sqrt(abs(math.sin(x0 - y)))

        reference, _ = integrate.quad(integrand, -width, width, points=kinks, limit=400)
        assert abs(g(x0) - reference) < 2e-3


class TestGenerator:
    """Test cases for generator_apply."""

    def test_translation_derivative(self):
        d = generator_apply(SemigroupDescriptor.translation(), get_function("sin"))
        assert np.max(np.abs(sample(d, GRID) - np.cos(GRID.points))) < 1e-6

    def test_heat_second_derivative(self):
        d = generator_apply(SemigroupDescriptor.heat(), get_function("sin"))
        assert np.max(np.abs(sample(d, GRID) + np.sin(GRID.points))) < 1e-5

    def test_multiplication(self):
        sg = SemigroupDescriptor.multiplication(get_function("potential:1"), GRID)
        d = generator_apply(sg, get_function("gaussian"), h=-1.0)
        x = GRID.points
        assert np.allclose(sample(d, GRID), -(1.0 + x * x) * np.exp(-x * x))

    def test_shifted_generator(self):
        sg = SemigroupDescriptor.translation(sigma=2.0)
        d = generator_apply(sg, get_function("sin"), shifted=True)
        expected = np.cos(GRID.points) - 2.0 * np.sin(GRID.points)
        assert np.max(np.abs(sample(d, GRID) - expected)) < 1e-6

    def test_nonpositive_stencil(self):
        with pytest.raises(ArgumentError):
            generator_apply(SemigroupDescriptor.translation(), get_function("sin"), h=0.0)

    def test_mesh_halving_detects_kink(self):
        sg = SemigroupDescriptor.translation()
        f = get_function("holder_bump:0.5")
        coarse = sample(generator_apply(sg, f, 0.01), GRID)
        fine = sample(generator_apply(sg, f, 0.005), GRID)
        assert np.max(np.abs(coarse - fine)) > 1.0


class TestQuadratureKernel:
    """Test cases for superpose, the heat mixture and orbit integrals."""

    def setup_method(self):
        self.quad = QuadratureSpec(panels=64)

    def test_superpose_validation(self):
        sg = SemigroupDescriptor.translation()
        with pytest.raises(ArgumentError):
            superpose(sg, np.zeros(3), np.zeros(2), get_function("sin"))
        with pytest.raises(DomainError):
            superpose(sg, np.array([-1.0]), np.array([1.0]), get_function("sin"))

    def test_superpose_translation(self):
        sg = SemigroupDescriptor.translation()
        g = superpose(sg, np.array([0.0, 1.0]), np.array([2.0, -1.0]), get_function("sin"))
        x = GRID.points
        assert np.allclose(sample(g, GRID), 2.0 * np.sin(x) - np.sin(x + 1.0))

    def test_heat_mixture_mass(self):
        nodes, weights = simpson_rule(0.0, 1.0, 64)
        mixture = heat_mixture(nodes, weights, self.quad)
        assert mixture.delta > 0.0
        assert mixture.delta + mixture.coeffs.sum() == pytest.approx(1.0, abs=1e-8)

    def test_orbit_integral_translation(self):
        sg = SemigroupDescriptor.translation()
        g = orbit_integral(sg, 1.0, get_function("sin"), quad=self.quad)
        x = GRID.points
        assert np.max(np.abs(sample(g, GRID) - (np.cos(x) - np.cos(x + 1.0)))) < 1e-8

    def test_orbit_integral_needs_positive_t(self):
        with pytest.raises(DomainError):
            orbit_integral(SemigroupDescriptor.translation(), 0.0, get_function("sin"))

    @pytest.mark.parametrize("selection", ["translation", "heat", "multiplication:const:-1"])
    @pytest.mark.parametrize("t", [0.1, 1.0])
    def test_orbit_identity(self, selection, t):
        # T(t)f - f = A integral_0^t T(s)f ds
        sg = SemigroupDescriptor.parse(selection, GRID)
        f = get_function("sin")
        orbit = orbit_integral(sg, t, f, quad=QuadratureSpec())
        lhs = sample(apply(sg, t, f), GRID) - sample(f, GRID)
        rhs = sample(generator_apply(sg, orbit), GRID)
        assert np.max(np.abs(lhs - rhs)) < 1e-3

    @pytest.mark.parametrize("selection", ["translation", "heat", "multiplication:const:-1"])
    @pytest.mark.parametrize("t", [0.1, 1.0])
    def test_orbit_identity_of_generator(self, selection, t):
        # T(t)f - f = integral_0^t T(s)Af ds
        sg = SemigroupDescriptor.parse(selection, GRID)
        f = get_function("sin")
        orbit = orbit_integral(sg, t, generator_apply(sg, f), quad=QuadratureSpec())
        lhs = sample(apply(sg, t, f), GRID) - sample(f, GRID)
        assert np.max(np.abs(lhs - sample(orbit, GRID))) < 1e-3
