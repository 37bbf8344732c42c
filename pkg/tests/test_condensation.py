import math

import numpy as np
import pytest

from branekit import (
    analytic_minimum,
    asymmetry_gap,
    condensate_amplitude,
    condensed_blocks,
    eigensolve_blocks,
    hyperbola_residual,
    numeric_minimum,
    potential_derivative,
    potential_value,
    recombined_eigenvalues,
    sample_curve,
    tachyon_potential,
)

PI_THIRD = math.pi / 3


def test_potential_at_origin_is_local_maximum():
    assert potential_value(0.0, PI_THIRD, 1.0, 1.0) == 0.0
    eps = 1e-3
    assert potential_value(eps, PI_THIRD, 1.0, 1.0) < 0.0


def test_potential_value_at_root_pi():
    # -2*pi*pi + pi^2 = -pi^2
    value = potential_value(math.sqrt(math.pi), PI_THIRD, 1.0, 1.0)
    assert value == pytest.approx(-math.pi**2, rel=1e-13)


def test_potential_rejects_negative_amplitude():
    with pytest.raises(ValueError):
        potential_value(-0.1, PI_THIRD, 1.0, 1.0)


def test_tiny_flux_is_nearly_pure_quartic():
    t = 1.3
    assert potential_value(t, 0.4, 1e-12, 2.0) == pytest.approx(2.0 * t**4, rel=1e-9)


def test_analytic_minimum_values():
    tmin, vmin = analytic_minimum(PI_THIRD, 1.0, 1.0)
    assert tmin == pytest.approx(math.sqrt(math.pi), abs=1e-14)
    assert vmin == pytest.approx(-math.pi**2, abs=1e-12)
    tmin0, _ = analytic_minimum(0.0, 1.0, 1.0)
    assert tmin0 == pytest.approx(math.sqrt(2.0 * math.pi), abs=1e-14)


@pytest.mark.parametrize("theta", [0.0, 0.3, 0.6, 0.9, 1.2])
@pytest.mark.parametrize("z2", [0.5, 2.0])
def test_numeric_minimum_reproduces_closed_form(theta, z2):
    tmin, _ = analytic_minimum(theta, z2, 1.0)
    assert abs(numeric_minimum(theta, z2, 1.0, tol=1e-8) - tmin) <= 1e-8


def test_minimizer_independent_of_overall_tension():
    a = numeric_minimum(PI_THIRD, 1.0, 1.0, tol=1e-10)
    b = numeric_minimum(PI_THIRD, 1.0, 10.0, tol=1e-10)
    assert a == pytest.approx(b, abs=1e-10)


def test_stationarity_at_analytic_minimum():
    pot = tachyon_potential(PI_THIRD, 1.0, 1.0)
    scale = 8.0 * math.pi * math.cos(PI_THIRD) * pot.tmin
    assert abs(potential_derivative(pot.tmin, PI_THIRD, 1.0, 1.0)) <= 1e-12 * scale
    assert pot.quad == pytest.approx(-2.0 * math.pi, abs=1e-13)
    assert pot.quart == 1.0


def test_numeric_minimum_guards():
    with pytest.raises(ValueError):
        numeric_minimum(PI_THIRD, 1.0, 1.0, tol=0.0)
    with pytest.raises(ValueError):
        numeric_minimum(PI_THIRD, 1.0, 1.0, bracket=(5.0, 9.0))  # no interior minimum
    with pytest.raises(ValueError):
        numeric_minimum(PI_THIRD, 1.0, 1.0, bracket=(2.0, 2.0))


def test_condensed_blocks_structure():
    blocks = condensed_blocks(0.0, PI_THIRD, 1.0)
    t = math.sqrt(math.pi / 2.0)
    assert blocks.m1[0, 1] == pytest.approx(t, abs=1e-14)
    np.testing.assert_array_equal(blocks.m1.imag, np.zeros((2, 2)))
    np.testing.assert_array_equal(blocks.m1, blocks.m1.conj().T)
    np.testing.assert_array_equal(blocks.m2, blocks.m2.conj().T)
    np.testing.assert_array_equal(blocks.m2.real, np.diag(blocks.m2.real.diagonal()))
    assert blocks.m2[0, 1] == pytest.approx(1j * t, abs=1e-14)
    # equal condensate magnitude in both blocks
    assert abs(blocks.m1[0, 1]) == pytest.approx(abs(blocks.m2[0, 1]), abs=1e-15)


def test_condensate_vanishes_with_flux():
    blocks = condensed_blocks(1.0, PI_THIRD, 1e-14)
    assert abs(blocks.m1[0, 1]) <= 1e-6
    assert abs(blocks.m2[0, 1]) <= 1e-6


def test_recombined_eigenvalues_frozen_point():
    eigs = recombined_eigenvalues(1.0, PI_THIRD, 1.0)
    t = math.sqrt(math.pi / 2.0)
    assert eigs.x_minus == pytest.approx(math.sqrt(3.0) / 2.0 - t, abs=1e-14)
    assert eigs.x_plus == pytest.approx(math.sqrt(3.0) / 2.0 + t, abs=1e-14)
    y = math.sqrt(0.25 + math.pi / 2.0)
    assert eigs.y_minus == pytest.approx(-y, abs=1e-14)
    assert eigs.y_plus == pytest.approx(y, abs=1e-14)
    # the 5-digit values: 0.86603 -/+ 1.25331 and -/+ 1.34937
    assert eigs.x_minus == pytest.approx(0.86603 - 1.25331, abs=1e-5)
    assert eigs.y_plus == pytest.approx(1.34937, abs=1e-5)


def test_recombined_branes_separate_at_origin():
    eigs = recombined_eigenvalues(0.0, PI_THIRD, 1.0)
    t = condensate_amplitude(PI_THIRD, 1.0)
    assert eigs.x_minus == pytest.approx(-t) and eigs.x_plus == pytest.approx(t)
    assert eigs.y_minus == pytest.approx(-t) and eigs.y_plus == pytest.approx(t)


def test_tiny_flux_recovers_intersecting_lines():
    eigs = recombined_eigenvalues(2.0, PI_THIRD, 1e-16)
    assert eigs.x_minus == pytest.approx(2.0 * math.sin(PI_THIRD), abs=1e-7)
    assert eigs.x_plus == pytest.approx(2.0 * math.sin(PI_THIRD), abs=1e-7)
    assert eigs.y_plus == pytest.approx(2.0 * math.cos(PI_THIRD), abs=1e-7)


@pytest.mark.parametrize("x0", [-2.0, -0.5, 0.0, 0.7, 3.0])
def test_eigensolve_agrees_with_closed_forms(x0):
    closed = recombined_eigenvalues(x0, PI_THIRD, 1.0)
    x_vals, _, y_vals, _ = eigensolve_blocks(condensed_blocks(x0, PI_THIRD, 1.0))
    np.testing.assert_allclose(
        sorted([closed.x_minus, closed.x_plus]), x_vals, atol=1e-12
    )
    np.testing.assert_allclose(
        sorted([closed.y_minus, closed.y_plus]), y_vals, atol=1e-12
    )


def test_hyperbola_identity_both_sides():
    eigs = recombined_eigenvalues(1.0, PI_THIRD, 1.0)
    t = condensate_amplitude(PI_THIRD, 1.0)
    lhs = (eigs.x_minus + t) ** 2
    assert lhs == pytest.approx(0.75, abs=1e-13)  # x0^2 sin^2 theta
    assert hyperbola_residual(eigs.x_minus, eigs.y_minus, PI_THIRD, 1.0, "minus") <= 1e-12
    assert hyperbola_residual(eigs.x_plus, eigs.y_plus, PI_THIRD, 1.0, "plus") <= 1e-12


def test_hyperbola_mismatched_branch_flags():
    eigs = recombined_eigenvalues(1.0, PI_THIRD, 1.0)
    assert hyperbola_residual(eigs.x_minus, eigs.y_minus, PI_THIRD, 1.0, "plus") > 0.1


def test_hyperbola_rejects_unknown_branch():
    with pytest.raises(ValueError):
        hyperbola_residual(0.0, 0.0, PI_THIRD, 1.0, "upper")


def test_sample_curve_residuals_and_routes():
    curve = sample_curve(-3.0, 3.0, 101, PI_THIRD, 1.0)
    assert len(curve.points) == 202
    assert len(curve.asymptotes) == 202
    assert curve.max_residual <= 1e-10
    assert curve.max_eigensolve_gap <= 1e-12


def test_sample_curve_guards():
    with pytest.raises(ValueError):
        sample_curve(-3.0, 3.0, 1, PI_THIRD, 1.0)
    with pytest.raises(ValueError):
        sample_curve(3.0, -3.0, 11, PI_THIRD, 1.0)


def test_tiny_flux_curve_coincides_with_asymptotes():
    # each branch degenerates onto the nearer asymptote half-line
    curve = sample_curve(-2.0, 2.0, 21, PI_THIRD, 1e-12)
    for point in curve.points:
        assert abs(point.x_d - point.x0 * math.sin(PI_THIRD)) <= 1e-5
        nearest = min(
            abs(point.y_d - sign * point.x0 * math.cos(PI_THIRD)) for sign in (-1.0, 1.0)
        )
        assert nearest <= 1e-5


def test_large_x0_asymptotics():
    # constant x_d offset from the same-parameter asymptote point, slope -> tan(theta)
    t = condensate_amplitude(PI_THIRD, 1.0)
    big = recombined_eigenvalues(1e3, PI_THIRD, 1.0)
    assert big.x_minus - 1e3 * math.sin(PI_THIRD) == pytest.approx(-t, abs=1e-12)
    assert big.x_plus - 1e3 * math.sin(PI_THIRD) == pytest.approx(t, abs=1e-12)
    step = recombined_eigenvalues(1e3 + 1e-3, PI_THIRD, 1.0)
    slope = (step.x_minus - big.x_minus) / (step.y_minus - big.y_minus)
    assert abs(slope) == pytest.approx(math.tan(PI_THIRD), rel=1e-5)


def test_asymmetry_gap_value():
    curve = sample_curve(-3.0, 3.0, 41, PI_THIRD, 1.0)
    gap = asymmetry_gap(curve)
    assert gap == pytest.approx(2.0 * condensate_amplitude(PI_THIRD, 1.0), rel=1e-10)
    assert gap > 0.1


def test_asymmetry_collapses_without_flux():
    curve = sample_curve(-3.0, 3.0, 41, PI_THIRD, 1e-12)
    assert asymmetry_gap(curve) <= 1e-5


def test_asymmetry_scales_as_root_flux():
    gaps = [
        asymmetry_gap(sample_curve(-1.0, 1.0, 11, PI_THIRD, z2)) for z2 in (1e-2, 1e-4)
    ]
    assert gaps[0] / gaps[1] == pytest.approx(10.0, rel=1e-6)
