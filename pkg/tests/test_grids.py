import numpy as np
import pytest

from susylab.errors import DegenerateInputError, DomainError
from susylab.grids import (
    Grid,
    SampledFn,
    cumulative_integral,
    derivative,
    l2_norm,
    normalize,
    sample,
)


def test_grid_spacing_and_points():
    g = Grid.full_line(-1.0, 1.0, 201)
    assert g.h == pytest.approx(0.01, abs=0)
    assert g.x[0] == -1.0 and g.x[-1] == pytest.approx(1.0)
    assert len(g.x) == 201


def test_grid_validation():
    with pytest.raises(DomainError):
        Grid.full_line(1.0, -1.0, 11)
    with pytest.raises(DomainError):
        Grid.full_line(0.0, 1.0, 2)
    with pytest.raises(DomainError):
        Grid("half_line", 0.0, 1.0, 11)
    with pytest.raises(DomainError):
        Grid("circle", 0.0, 1.0, 11)


def test_half_line_default_starts_one_spacing_up():
    g = Grid.half_line(10.0, 4001)
    assert g.x_min == pytest.approx(10.0 / 4001)
    assert g.h == pytest.approx(g.x_min)
    fine = g.refined()
    assert fine.n_points == 8002
    assert fine.h == pytest.approx(g.h / 2)
    assert fine.x_min == pytest.approx(fine.h)


def test_full_line_refined_halves_spacing():
    g = Grid.full_line(-12.0, 12.0, 2001)
    fine = g.refined()
    assert fine.n_points == 4001
    assert fine.h == pytest.approx(g.h / 2)
    assert (fine.x_min, fine.x_max) == (g.x_min, g.x_max)


def test_derivative_exact_on_quadratic():
    g = Grid.full_line(-1.0, 1.0, 201)
    d = derivative(sample(g, lambda x: x**2))
    assert np.abs(d.values - 2 * g.x).max() <= 1e-12


def test_derivative_of_constant_is_zero():
    g = Grid.full_line(0.0, 1.0, 51)
    d = derivative(sample(g, lambda x: np.full_like(x, 3.7)))
    assert np.abs(d.values).max() == 0.0


def test_derivative_second_order_convergence():
    def err(n):
        g = Grid.full_line(0.0, np.pi, n)
        d = derivative(sample(g, np.sin))
        return np.abs(d.values - np.cos(g.x)).max()

    e1, e2 = err(401), err(801)
    assert e2 < e1
    assert e1 / e2 == pytest.approx(4.0, rel=0.15)


def test_cumulative_integral_exact_on_constant():
    g = Grid.full_line(0.0, 1.0, 101)
    F = cumulative_integral(sample(g, lambda x: np.ones_like(x)), anchor=0.0)
    assert np.abs(F.values - g.x).max() <= 1e-12


def test_cumulative_integral_exact_on_linear():
    g = Grid.full_line(0.0, 2.0, 401)
    F = cumulative_integral(sample(g, lambda x: 2 * x), anchor=0.0)
    assert F.values[-1] == pytest.approx(4.0, abs=1e-12)


def test_cumulative_integral_of_normalized_density_reaches_one():
    g = Grid.full_line(-10.0, 10.0, 2001)
    psi = normalize(sample(g, lambda x: np.exp(-(x**2) / 2)))
    F = cumulative_integral(SampledFn(g, psi.values**2), anchor=g.x_min)
    assert F.values[-1] == pytest.approx(1.0, abs=1e-8)


def test_cumulative_integral_off_node_anchor():
    g = Grid.full_line(0.0, 1.0, 101)
    F = cumulative_integral(sample(g, lambda x: np.ones_like(x)), anchor=0.345)
    assert np.interp(0.345, g.x, F.values) == pytest.approx(0.0, abs=1e-12)


def test_cumulative_integral_anchor_outside_grid():
    g = Grid.full_line(0.0, 1.0, 11)
    with pytest.raises(DomainError):
        cumulative_integral(sample(g, lambda x: x), anchor=2.0)


def test_normalize_scaling_invariance():
    g = Grid.full_line(-5.0, 5.0, 501)
    base = normalize(sample(g, lambda x: np.exp(-(x**2))))
    doubled = normalize(SampledFn(g, 2.0 * base.values))
    assert np.abs(doubled.values - base.values).max() <= 1e-14


def test_normalize_sign_convention():
    g = Grid.full_line(-5.0, 5.0, 501)
    base = normalize(sample(g, lambda x: np.exp(-(x**2))))
    flipped = normalize(SampledFn(g, -base.values))
    assert np.abs(flipped.values - base.values).max() <= 1e-14


def test_normalize_gaussian_peak():
    # Unit-norm gaussian peaks at pi^(-1/4); oracle via fine quadrature.
    g = Grid.full_line(-10.0, 10.0, 2001)
    psi = normalize(sample(g, lambda x: np.exp(-(x**2) / 2)))
    assert l2_norm(psi) == pytest.approx(1.0, abs=1e-10)
    assert psi.values.max() == pytest.approx(np.pi ** (-0.25), abs=1e-4)


def test_normalize_rejects_zero_function():
    g = Grid.full_line(0.0, 1.0, 11)
    with pytest.raises(DegenerateInputError):
        normalize(sample(g, np.zeros_like))


def test_normalize_idempotent():
    g = Grid.full_line(-5.0, 5.0, 301)
    once = normalize(sample(g, lambda x: (x + 0.3) * np.exp(-(x**2))))
    twice = normalize(once)
    assert np.abs(twice.values - once.values).max() <= 1e-14


def test_fundamental_theorem_round_trip():
    def err(n):
        g = Grid.full_line(0.0, 3.0, n)
        f = sample(g, lambda x: np.cos(2 * x))
        back = derivative(cumulative_integral(f, anchor=0.0))
        return np.abs(back.values[1:-1] - f.values[1:-1]).max()

    e1, e2 = err(301), err(601)
    assert e1 / e2 == pytest.approx(4.0, rel=0.2)


def test_operations_do_not_mutate_inputs():
    g = Grid.full_line(-2.0, 2.0, 101)
    f = sample(g, lambda x: np.exp(-(x**2)))
    copy = f.values.copy()
    derivative(f)
    cumulative_integral(f, anchor=0.0)
    normalize(f)
    assert np.array_equal(f.values, copy)
    assert not f.values.flags.writeable


def test_sampled_fn_length_mismatch():
    g = Grid.full_line(0.0, 1.0, 11)
    with pytest.raises(DomainError):
        SampledFn(g, np.zeros(10))
