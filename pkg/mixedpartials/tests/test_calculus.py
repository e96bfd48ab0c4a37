import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import cumulative_trapezoid

from mixedpartials.calculus import (
    fd_mixed,
    fd_partial_x,
    fd_partial_y,
    holder_modulus,
    joint_continuity_scan,
    primitive_l2_bound,
    primitive_xy,
    primitive_y,
    tolstov_slice_check,
)
from mixedpartials.catalog import sinsin
from mixedpartials.grid import AnalyticFunction2D, GridFunction2D, make_grid, sample
from mixedpartials.pathology import build_fat_cantor, construct_thm51, rescale_to_2pi

cos_cos = AnalyticFunction2D(eval=lambda x, y: np.cos(x) * np.cos(y))


def grid_function(fn, nx, ny):
    return sample(AnalyticFunction2D(eval=fn), make_grid(nx, ny))


def sine_samples(n):
    return np.sin(2 * math.pi * np.arange(n) / n)


def test_fd_partial_x_constant_and_sine():
    u = GridFunction2D(make_grid(5, 4), np.full((5, 4), 3.0))
    assert not np.any(fd_partial_x(u).values)
    u = grid_function(lambda x, y: np.sin(x) + 0 * y, 64, 4)
    X, _ = u.grid.mesh()
    assert np.max(np.abs(fd_partial_x(u).values - np.cos(X))) <= 2e-3


def test_fd_partial_x_second_order():
    errors = []
    for n in (32, 64):
        u = grid_function(lambda x, y: np.sin(2 * x) * np.cos(y), n, n)
        X, Y = u.grid.mesh()
        exact = 2 * np.cos(2 * X) * np.cos(Y)
        errors.append(np.max(np.abs(fd_partial_x(u).values - exact)))
    assert 3.5 <= errors[0] / errors[1] <= 4.5


def test_fd_partial_y_matches_transpose():
    u = grid_function(lambda x, y: np.sin(x) * np.cos(2 * y), 16, 12)
    v = GridFunction2D(make_grid(12, 16), u.values.T)
    np.testing.assert_allclose(fd_partial_y(u).values, fd_partial_x(v).values.T)


def test_fd_argument_value():
    u = GridFunction2D(make_grid(2, 4), np.zeros((2, 4)))
    with pytest.raises(ValueError, match="nx must be at least 3"):
        fd_partial_x(u)
    with pytest.raises(ValueError, match="nx must be at least 3"):
        fd_mixed(u)
    with pytest.raises(ValueError, match="ny must be at least 3"):
        fd_partial_y(GridFunction2D(make_grid(4, 2), np.zeros((4, 2))))
    with pytest.raises(TypeError):
        fd_partial_x(np.zeros((4, 4)))


def test_fd_mixed_examples():
    u = grid_function(lambda x, y: np.sin(3 * x) + 0 * y, 16, 16)
    assert np.max(np.abs(fd_mixed(u).values)) <= 1e-12
    u = sample(sinsin(), make_grid(64, 64))
    X, Y = u.grid.mesh()
    assert np.max(np.abs(fd_mixed(u).values - np.cos(X) * np.cos(Y))) <= 5e-3


def test_fd_mixed_four_point_stencil():
    rng = np.random.default_rng(11)
    u = GridFunction2D(make_grid(7, 5), rng.normal(size=(7, 5)))
    v = u.values
    stencil = (
        np.roll(v, (-1, -1), axis=(0, 1))
        - np.roll(v, (-1, 1), axis=(0, 1))
        - np.roll(v, (1, -1), axis=(0, 1))
        + np.roll(v, (1, 1), axis=(0, 1))
    ) / (4 * u.grid.dx * u.grid.dy)
    np.testing.assert_allclose(fd_mixed(u).values, stencil, rtol=0, atol=1e-12)


def test_fd_is_linear():
    rng = np.random.default_rng(12)
    grid = make_grid(9, 9)
    a = GridFunction2D(grid, rng.normal(size=grid.shape))
    b = GridFunction2D(grid, rng.normal(size=grid.shape))
    combined = GridFunction2D(grid, 2 * a.values - 3 * b.values)
    expected = 2 * fd_mixed(a).values - 3 * fd_mixed(b).values
    np.testing.assert_allclose(fd_mixed(combined).values, expected, atol=1e-12)


def test_primitive_y_examples():
    grid = make_grid(64, 64)
    X, Y = grid.mesh()
    assert not np.any(primitive_y(GridFunction2D(grid, np.zeros(grid.shape))).values)
    F = primitive_y(GridFunction2D(grid, np.ones(grid.shape)))
    np.testing.assert_allclose(F.values, Y, rtol=0, atol=1e-13)
    assert not np.any(F.values[:, 0])
    F = primitive_y(sample(cos_cos, grid))
    assert np.max(np.abs(F.values - np.cos(X) * np.sin(Y))) <= 4e-3


def test_primitive_xy_examples():
    grid = make_grid(64, 64)
    X, Y = grid.mesh()
    G = primitive_xy(GridFunction2D(grid, np.ones(grid.shape)))
    np.testing.assert_allclose(G.values, X * Y, rtol=0, atol=1e-12)
    assert not np.any(G.values[0]) and not np.any(G.values[:, 0])
    G = primitive_xy(sample(cos_cos, grid))
    assert np.max(np.abs(G.values - np.sin(X) * np.sin(Y))) <= 1e-2


def test_primitive_y_then_difference_recovers_integrand():
    u = grid_function(lambda x, y: np.cos(x) * np.cos(2 * y), 32, 64)
    F = primitive_y(u)
    interior = np.gradient(F.values, u.grid.dy, axis=1)[:, 1:-1]
    assert np.max(np.abs(interior - u.values[:, 1:-1])) <= 2e-2


def test_primitive_xy_separable():
    u = grid_function(lambda x, y: np.exp(np.sin(x)) * (1 + np.cos(y)), 64, 64)
    X, Y = u.grid.mesh()
    G = primitive_xy(u)
    px = cumulative_trapezoid(np.exp(np.sin(u.grid.x)), dx=u.grid.dx, initial=0)
    qy = cumulative_trapezoid(1 + np.cos(u.grid.y), dx=u.grid.dy, initial=0)
    np.testing.assert_allclose(G.values, np.outer(px, qy), rtol=1e-12, atol=1e-13)


def test_tolstov_slice_check():
    zero = AnalyticFunction2D(eval=lambda x, y: 0 * x)
    assert tolstov_slice_check(zero, 1.0, make_grid(16, 16)).residual == 0
    result = tolstov_slice_check(cos_cos, math.pi / 2, make_grid(128, 128))
    assert result.residual <= 1e-2
    assert result.snap_distance <= 1e-15
    fine = tolstov_slice_check(cos_cos, math.pi / 2, make_grid(256, 256))
    assert fine.residual <= 2.9e-3


def test_tolstov_slice_check_second_order():
    coarse = tolstov_slice_check(cos_cos, math.pi / 4, make_grid(128, 128))
    fine = tolstov_slice_check(cos_cos, math.pi / 4, make_grid(256, 256))
    assert coarse.residual <= 1e-2
    assert 3.5 <= coarse.residual / fine.residual <= 4.5


def test_tolstov_slice_check_snaps():
    grid = make_grid(16, 16)
    result = tolstov_slice_check(cos_cos, 0.41, grid)
    assert result.x0_snapped == pytest.approx(grid.dx)
    assert result.snap_distance == pytest.approx(abs(0.41 - grid.dx))


def test_holder_modulus_examples():
    assert holder_modulus(np.full(64, 2.0), 0) == (0, True)
    g = sine_samples(4096)
    worst, passed = holder_modulus(g, math.pi)
    assert passed
    assert worst <= math.sqrt(math.pi)
    worst, passed = holder_modulus(g, 0.1)
    assert not passed
    assert worst > math.sqrt(0.1)


def test_holder_modulus_sampled_pairs():
    g = sine_samples(5000)
    assert holder_modulus(g, math.pi).passed
    assert not holder_modulus(g, 0.1).passed
    assert holder_modulus(g, math.pi, seed=1) == holder_modulus(g, math.pi, seed=1)


def test_holder_modulus_argument_value():
    with pytest.raises(ValueError, match="non-negative"):
        holder_modulus(sine_samples(8), -1)
    with pytest.raises(ValueError, match="at least 2 samples"):
        holder_modulus([1.0], 1)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(-3, 3), min_size=1, max_size=4),
    st.floats(min_value=0, max_value=10),
)
def test_holder_modulus_scale_consistent(amplitudes, c):
    x = 2 * math.pi * np.arange(256) / 256
    g = sum(a * np.sin((k + 1) * x) for k, a in enumerate(amplitudes))
    assert holder_modulus(g, c).passed == holder_modulus(2 * g, 4 * c).passed


def test_joint_continuity_scan_examples():
    zero = GridFunction2D(make_grid(16, 8), np.zeros((16, 8)))
    scan = joint_continuity_scan(zero, 0)
    assert scan.pass_rate == 1
    assert scan.max_oscillation == 0
    fx = sample(cos_cos, make_grid(64, 32))
    scan = joint_continuity_scan(fx, math.pi)
    assert scan.pass_rate == 1
    assert scan.worst_ratio <= math.sqrt(math.pi)


def test_joint_continuity_scan_sees_witness_oscillation():
    series = construct_thm51(build_fat_cantor(1, 1.0), 1)
    term = series.terms[0]
    assert term.U == term.V == (0.375, 0.625)
    grid = make_grid(20, 20)
    fx = sample(rescale_to_2pi(series), grid, "fx").scaled(2 * math.pi)
    scan = joint_continuity_scan(fx, math.pi)
    A = series.bump.A
    # node (9, 10) is (0.45, 0.5) in unit coordinates, bump slope near its maximum
    assert fx.values[9, 10] >= 0.99 * A
    assert scan.oscillation[9, 10] >= 0.9 * A
    assert scan.max_oscillation >= 0.9 * A
    outside = [i for i in range(20) if not 0.375 < i / 20 < 0.625]
    assert not np.any(fx.values[outside])


def test_primitive_l2_bound():
    grid = make_grid(32, 32)
    u = sample(sinsin(), grid)
    fx = sample(sinsin(), grid, "fx")
    lhs, rhs = primitive_l2_bound(fx, u)
    assert lhs == pytest.approx(math.pi**2, rel=1e-12)
    assert lhs <= rhs
    with pytest.raises(ValueError, match="share a grid"):
        primitive_l2_bound(sample(sinsin(), make_grid(8, 8)), u)
