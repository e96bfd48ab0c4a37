import logging
from collections import namedtuple
from dataclasses import dataclass

import numpy as np
from scipy import integrate, ndimage

from mixedpartials import const
from mixedpartials.grid import GridFunction2D, sample

logger = logging.getLogger(__name__)

HolderResult = namedtuple("HolderResult", ["worst_ratio", "passed"])
SliceCheck = namedtuple("SliceCheck", ["residual", "x0_snapped", "snap_distance"])


def _check_grid_function(u, name="u"):
    if not isinstance(u, GridFunction2D):
        raise TypeError(f"{name} must be a GridFunction2D, got {type(u)}")


def fd_partial_x(u):
    """Central periodic difference along x.

    :param GridFunction2D u: samples.
    :return: (*GridFunction2D*) -- ``(u(i+1, j) - u(i-1, j)) / (2 dx)``, indices
        taken modulo nx.
    :raises ValueError: if ``nx < 3``.
    """
    _check_grid_function(u)
    if u.grid.nx < const.min_stencil_points:
        raise ValueError(
            f"nx must be at least {const.min_stencil_points}, got {u.grid.nx}"
        )
    values = (np.roll(u.values, -1, axis=0) - np.roll(u.values, 1, axis=0)) / (
        2 * u.grid.dx
    )
    return GridFunction2D(u.grid, values)


def fd_partial_y(u):
    """Central periodic difference along y.

    :param GridFunction2D u: samples.
    :return: (*GridFunction2D*) -- ``(u(i, j+1) - u(i, j-1)) / (2 dy)``.
    :raises ValueError: if ``ny < 3``.
    """
    _check_grid_function(u)
    if u.grid.ny < const.min_stencil_points:
        raise ValueError(
            f"ny must be at least {const.min_stencil_points}, got {u.grid.ny}"
        )
    values = (np.roll(u.values, -1, axis=1) - np.roll(u.values, 1, axis=1)) / (
        2 * u.grid.dy
    )
    return GridFunction2D(u.grid, values)


def fd_mixed(u):
    """Four-point mixed difference
    ``(u(i+1,j+1) - u(i+1,j-1) - u(i-1,j+1) + u(i-1,j-1)) / (4 dx dy)``.

    :param GridFunction2D u: samples.
    :return: (*GridFunction2D*) -- discrete mixed derivative.
    :raises ValueError: if either grid dimension is below 3.
    """
    return fd_partial_y(fd_partial_x(u))


def primitive_y(h):
    """Cumulative trapezoid integral along y, ``F(i, j) = ∫_0^{y_j} h(x_i, t) dt``.

    :param GridFunction2D h: integrand.
    :return: (*GridFunction2D*) -- primitive with ``F(i, 0) = 0``.
    """
    _check_grid_function(h, "h")
    values = integrate.cumulative_trapezoid(
        h.values, dx=h.grid.dy, axis=1, initial=0
    )
    return GridFunction2D(h.grid, values)


def primitive_xy(h):
    """Double primitive ``G(x, y) = ∫_0^x ∫_0^y h(u, v) dv du`` by composed trapezoids.

    :param GridFunction2D h: integrand.
    :return: (*GridFunction2D*) -- primitive with ``G(0, ·) = G(·, 0) = 0``.
    """
    inner = primitive_y(h)
    values = integrate.cumulative_trapezoid(
        inner.values, dx=h.grid.dx, axis=0, initial=0
    )
    return GridFunction2D(h.grid, values)


def tolstov_slice_check(h, x0, grid):
    """Compare the x-derivative of the double primitive of h with the y-primitive
    of h along the grid column nearest to ``x0``.

    The x-derivative is a second-order difference of the (non-periodic) double
    primitive, one-sided at the first and last columns.

    :param mixedpartials.grid.AnalyticFunction2D h: integrand.
    :param float x0: abscissa in [0, 2π).
    :param mixedpartials.grid.PeriodicGrid2D grid: grid.
    :return: (*SliceCheck*) -- max residual over y-nodes, the snapped abscissa
        and the snap distance.
    """
    samples = sample(h, grid)
    G = primitive_xy(samples)
    F = primitive_y(samples)
    i0 = int(round(x0 / grid.dx)) % grid.nx
    x_snapped = float(grid.x[i0])
    dG = np.gradient(G.values, grid.dx, axis=0, edge_order=2)
    residual = float(np.max(np.abs(dG[i0] - F.values[i0])))
    logger.debug(
        "slice check at column %d (x=%.6f): residual %.3e", i0, x_snapped, residual
    )
    return SliceCheck(residual, x_snapped, abs(x0 - x_snapped))


def _pair_ratios(g, dx, offsets):
    worst = 0.0
    for d in offsets:
        diffs = np.abs(g[d:] - g[:-d])
        worst = max(worst, float(np.max(diffs)) / np.sqrt(d * dx))
    return worst


def holder_modulus(g, c, seed=const.default_seed):
    """Worst Hölder-½ ratio ``|g(x1) - g(x0)| / sqrt(x1 - x0)`` over sample pairs.

    Samples are taken at ``2πk/N``. All pairs are examined up to 4096 samples;
    beyond that, adjacent pairs plus a seeded random subset.

    :param numpy.ndarray g: samples on [0, 2π).
    :param float c: bound constant; passes when ``worst_ratio <= sqrt(c)``.
    :param int seed: seed for the random pair subset.
    :return: (*HolderResult*) -- ``(worst_ratio, passed)``.
    :raises ValueError: if ``c`` is negative or fewer than 2 samples are given.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 1 or len(g) < 2:
        raise ValueError(
            f"need a 1D sequence of at least 2 samples, got shape {g.shape}"
        )
    if c < 0:
        raise ValueError(f"c must be non-negative, got {c}")
    n = len(g)
    dx = const.two_pi / n
    if n <= const.holder_exhaustive_limit:
        worst = _pair_ratios(g, dx, range(1, n))
    else:
        worst = _pair_ratios(g, dx, [1])
        rng = np.random.default_rng(seed)
        i = rng.integers(0, n, size=const.holder_random_pairs)
        j = rng.integers(0, n, size=const.holder_random_pairs)
        keep = i != j
        lo, hi = np.minimum(i, j)[keep], np.maximum(i, j)[keep]
        ratios = np.abs(g[hi] - g[lo]) / np.sqrt((hi - lo) * dx)
        if len(ratios) > 0:
            worst = max(worst, float(np.max(ratios)))
    passed = worst <= np.sqrt(c) * (1 + const.holder_slack)
    return HolderResult(worst, bool(passed))


@dataclass(frozen=True, eq=False)
class ContinuityScan:
    """Per-row Hölder results and 3x3 neighbourhood oscillation of a sampled field.

    ``row_passes[j]`` refers to the x-row at ``y_j``.
    """

    row_passes: np.ndarray
    worst_ratio: float
    max_oscillation: float
    oscillation: np.ndarray

    @property
    def pass_rate(self):
        return float(np.mean(self.row_passes))


def joint_continuity_scan(fx, c, seed=const.default_seed):
    """Hölder check of every x-row of ``fx`` against ``c`` plus the oscillation
    ``max - min`` over each periodic 3x3 node neighbourhood.

    :param GridFunction2D fx: samples of a first x-derivative.
    :param float c: Hölder constant for the rows.
    :param int seed: seed forwarded to :func:`holder_modulus`.
    :return: (*ContinuityScan*) -- raw statistics, no threshold is applied to
        the oscillation.
    """
    _check_grid_function(fx, "fx")
    if c < 0:
        raise ValueError(f"c must be non-negative, got {c}")
    results = [holder_modulus(fx.values[:, j], c, seed) for j in range(fx.grid.ny)]
    oscillation = ndimage.maximum_filter(
        fx.values, size=3, mode="wrap"
    ) - ndimage.minimum_filter(fx.values, size=3, mode="wrap")
    scan = ContinuityScan(
        row_passes=np.array([r.passed for r in results]),
        worst_ratio=max(r.worst_ratio for r in results),
        max_oscillation=float(np.max(oscillation)),
        oscillation=oscillation,
    )
    logger.info(
        "continuity scan: %.1f%% rows pass, max oscillation %.3e",
        100 * scan.pass_rate,
        scan.max_oscillation,
    )
    return scan


def primitive_l2_bound(fx, u):
    """Both sides of ``∫∫ (u - u(0, ·))² <= 4π² ∫∫ fx²``.

    :param GridFunction2D fx: samples of the x-derivative of u.
    :param GridFunction2D u: samples.
    :return: (*tuple*) -- ``(lhs, rhs)``.
    :raises ValueError: if the grids differ.
    """
    _check_grid_function(fx, "fx")
    _check_grid_function(u)
    if fx.grid != u.grid:
        raise ValueError("fx and u must share a grid")
    cell = u.grid.dx * u.grid.dy
    lhs = float(cell * np.sum((u.values - u.values[0:1, :]) ** 2))
    rhs = float(const.two_pi**2 * cell * np.sum(fx.values**2))
    return lhs, rhs
