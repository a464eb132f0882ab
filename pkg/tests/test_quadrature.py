import math

import numpy as np
import pytest

from revcurv.errors import QuadratureError
from revcurv.quadrature import (
    composite_rule,
    cumulative_integral,
    gauss_legendre,
    integrate,
    integrate_checked,
)


def test_rule_is_exact_up_to_degree_2n_minus_1():
    x, w = gauss_legendre(5)
    for degree in range(10):
        exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
        assert math.isclose(float(np.sum(w * x**degree)), exact, abs_tol=1e-14)


def test_nodes_are_cached_and_read_only():
    x, _ = gauss_legendre(8)
    assert gauss_legendre(8)[0] is x
    with pytest.raises(ValueError):
        x[0] = 0.0


def test_invalid_order():
    with pytest.raises(ValueError):
        gauss_legendre(0)


def test_composite_rule_batches_intervals():
    lo = np.array([0.0, 1.0, 2.0])
    nodes, weights = composite_rule(lo, lo + 0.5, 4, panels=3)
    assert nodes.shape == (3, 12)
    assert np.allclose(weights.sum(axis=-1), 0.5)
    assert np.all((nodes >= lo[:, None]) & (nodes <= lo[:, None] + 0.5))


def test_degenerate_interval_has_zero_weight():
    _, weights = composite_rule(1.0, 1.0, 6)
    assert np.all(weights == 0.0)


def test_integrate_cos():
    value = integrate(np.cos, 0.0, np.array([math.pi / 2, math.pi]), 16, panels=2)
    assert np.allclose(value, [1.0, 0.0], atol=1e-14)


def test_checked_integral_reports_residual():
    value, residual = integrate_checked(np.exp, 0.0, 1.0, 12)
    assert math.isclose(float(value), math.e - 1.0, rel_tol=1e-14)
    assert float(residual) < 1e-13


def test_checked_integral_rejects_a_jump():
    with pytest.raises(QuadratureError) as excinfo:
        integrate_checked(lambda x: np.sign(x - 0.3), 0.0, 1.0, 2)
    assert excinfo.value.residual > 1e-10


def test_cumulative_integral_matches_antiderivative():
    grid = np.linspace(0.0, 2.0, 41)
    running = cumulative_integral(np.cos, grid, 6)
    assert running[0] == 0.0
    assert np.allclose(running, np.sin(grid), atol=1e-14)
