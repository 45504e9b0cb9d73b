"""
Tests for the extrapolation space and its Favard norms.
"""

import math

import numpy as np
import pytest

from semiscale.core.exceptions import ArgumentError, ShiftMismatchError, ShiftRequiredError
from semiscale.core.extrapolation import (
    ExtrapolatedVector,
    a_inverse,
    embed,
    ext_apply,
    favard0_norm,
    favard_ext,
    generator_image,
    isometry_defect,
    little_ext,
    norm_band,
)
from semiscale.core.funcspace import Grid, sample
from semiscale.core.library import get_function
from semiscale.core.scales import Membership, ProbeSchedule, Verdict
from semiscale.core.semigroups import QuadratureSpec, SemigroupDescriptor, apply

GRID = Grid(-10.0, 10.0, 2001)
SCHED = ProbeSchedule()
QUAD = QuadratureSpec()


class TestExtrapolatedVector:
    """Test cases for vectors of the extrapolation space."""

    def setup_method(self):
        self.sg = SemigroupDescriptor.translation(sigma=1.0)

    def test_requires_negative_bound(self):
        with pytest.raises(ShiftRequiredError):
            ExtrapolatedVector(get_function("sin"), SemigroupDescriptor.translation(sigma=0.0))
        with pytest.raises(ShiftRequiredError):
            a_inverse(SemigroupDescriptor.heat(sigma=0.0), get_function("sin"))

    def test_a_inverse_closed_form(self):
        u = a_inverse(self.sg, get_function("sin"), QUAD)
        x = GRID.points
        assert np.allclose(sample(u, GRID), -(np.sin(x) + np.cos(x)) / 2.0, atol=1e-5)

    def test_embedded_norm(self):
        x = embed(self.sg, get_function("sin"), QUAD)
        assert x.norm(GRID) == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-4)

    def test_generator_image(self):
        f = get_function("gaussian")
        x = generator_image(self.sg, f)
        assert x.rep is f
        assert x.norm(GRID) == pytest.approx(1.0)

    def test_linear_structure(self):
        a = generator_image(self.sg, get_function("sin"))
        b = generator_image(self.sg, get_function("cos"))
        total = (a + b).scale(2.0) - b
        x = GRID.points
        assert np.allclose(sample(total.rep, GRID), 2.0 * np.sin(x) + np.cos(x))

    def test_mismatched_shift(self):
        a = generator_image(self.sg, get_function("sin"))
        b = generator_image(SemigroupDescriptor.translation(sigma=2.0), get_function("sin"))
        with pytest.raises(ShiftMismatchError):
            _ = a + b
        with pytest.raises(ShiftMismatchError):
            ext_apply(SemigroupDescriptor.translation(sigma=2.0), 0.5, a)
        with pytest.raises(ShiftMismatchError):
            favard_ext(SemigroupDescriptor.translation(sigma=2.0), a, 0.5, SCHED, GRID)

    def test_to_record(self):
        record = generator_image(self.sg, get_function("sin")).to_record(GRID)
        assert record["semigroup"] == "translation"
        assert record["sigma"] == 1.0
        assert record["rep_label"] == "sin"
        assert record["norm"] == pytest.approx(1.0, abs=1e-4)


class TestExtendedSemigroup:
    """Test cases for the extrapolated semigroup and its scales."""

    def setup_method(self):
        self.sg = SemigroupDescriptor.translation(sigma=1.0)

    @pytest.mark.parametrize("t", [0.1, 1.0, 3.0])
    def test_extension_is_consistent(self, t):
        g = get_function("gaussian")
        extended = ext_apply(self.sg, t, embed(self.sg, g, QUAD))
        direct = a_inverse(self.sg, apply(self.sg, t, g, shifted=True), QUAD)
        assert np.allclose(sample(extended.rep, GRID), sample(direct, GRID), atol=1e-5)

    def test_favard0_norm_of_sine(self):
        est = favard0_norm(self.sg, get_function("sin"), SCHED, QUAD, GRID)
        assert est.value == pytest.approx(1.0, abs=0.01)
        assert est.verdict == Verdict.FINITE

    def test_favard_ext_of_generator_image(self):
        est = favard_ext(self.sg, generator_image(self.sg, get_function("sin")), 1.0, SCHED, GRID)
        assert est.value == pytest.approx(math.sqrt(2.0), abs=0.01)

    def test_little_ext(self):
        member = little_ext(self.sg, generator_image(self.sg, get_function("sin")), 0.5, SCHED, GRID)
        assert member.verdict == Membership.MEMBER
        bump = generator_image(self.sg, get_function("holder_bump:0.5"))
        assert little_ext(self.sg, bump, 0.5, SCHED, GRID).verdict == Membership.NON_MEMBER

    def test_in_lower_space(self):
        assert generator_image(self.sg, get_function("sin")).in_lower_space(SCHED, GRID)
        mult = SemigroupDescriptor.multiplication(get_function("potential:1"), GRID)
        assert not generator_image(mult, get_function("const:1")).in_lower_space(SCHED, GRID)

    def test_isometry(self):
        assert isometry_defect(self.sg, get_function("sin"), QUAD, GRID) < 1e-4

    def test_norm_band(self):
        gs = [get_function(label) for label in ("sin", "cos", "gaussian", "zero")]
        lo, hi = norm_band(self.sg, gs, SCHED, QUAD, GRID)
        assert 0.98 <= lo <= hi <= 1.02
        assert hi / lo <= 8.0

    def test_norm_band_needs_nonzero(self):
        with pytest.raises(ArgumentError):
            norm_band(self.sg, [get_function("zero")], SCHED, QUAD, GRID)
