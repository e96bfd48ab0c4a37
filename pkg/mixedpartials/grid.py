"""Uniform periodic discretization of [0, 2π)² and sampled-function storage."""
import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd

from mixedpartials import const
from mixedpartials.helpers import atomic_output, check_finite

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodicGrid2D:
    """Equispaced nodes ``(2πi/nx, 2πj/ny)``; the point 2π is identified with 0."""

    nx: int
    ny: int

    def __post_init__(self):
        for name, value in (("nx", self.nx), ("ny", self.ny)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an int, got {type(value)}")
            if value < const.min_grid_points:
                raise ValueError(
                    f"{name} must be at least {const.min_grid_points}, got {value}"
                )

    @property
    def dx(self):
        return const.two_pi / self.nx

    @property
    def dy(self):
        return const.two_pi / self.ny

    @property
    def x(self):
        return const.two_pi * np.arange(self.nx) / self.nx

    @property
    def y(self):
        return const.two_pi * np.arange(self.ny) / self.ny

    @property
    def shape(self):
        return self.nx, self.ny

    def node(self, i, j):
        """Coordinates of node ``(i, j)``.

        :param int i: index along x, taken modulo ``nx``.
        :param int j: index along y, taken modulo ``ny``.
        :return: (*tuple*) -- ``(x_i, y_j)``.
        """
        i, j = i % self.nx, j % self.ny
        return const.two_pi * i / self.nx, const.two_pi * j / self.ny

    def mesh(self):
        """Node coordinate matrices, ``X[i, j] = x_i`` and ``Y[i, j] = y_j``.

        :return: (*tuple*) -- two numpy.ndarray of shape ``(nx, ny)``.
        """
        return np.meshgrid(self.x, self.y, indexing="ij")


@dataclass(frozen=True, eq=False)
class GridFunction2D:
    """Real samples on a :class:`PeriodicGrid2D`, ``values[i, j]`` at ``node(i, j)``."""

    grid: PeriodicGrid2D
    values: np.ndarray

    def __post_init__(self):
        if not isinstance(self.grid, PeriodicGrid2D):
            raise TypeError(f"grid must be a PeriodicGrid2D, got {type(self.grid)}")
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {values.shape} does not match grid {self.grid.shape}"
            )
        check_finite("values", values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def scaled(self, factor):
        """Return ``factor * self``.

        :param float factor: scalar multiplier.
        :return: (*GridFunction2D*) -- scaled copy.
        """
        return GridFunction2D(self.grid, factor * self.values)

    def __sub__(self, other):
        if not isinstance(other, GridFunction2D) or other.grid != self.grid:
            raise ValueError("can only subtract samples on the same grid")
        return GridFunction2D(self.grid, self.values - other.values)

    def max_abs(self):
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class AnalyticFunction2D:
    """Evaluable function of ``(x, y)`` with optional exact partial derivatives.

    Every callable takes two broadcastable numpy arrays and returns an array (or a
    scalar, which is broadcast on sampling).
    """

    eval: Callable
    d_x: Optional[Callable] = None
    d_y: Optional[Callable] = None
    d_xx: Optional[Callable] = None
    d_yy: Optional[Callable] = None
    d_xy: Optional[Callable] = None

    def derivative(self, what):
        """Look up a callable by derivative name.

        :param str what: one of 'f', 'fx', 'fy', 'fxx', 'fyy', 'fxy'.
        :return: (*callable* or None) -- the callable, None if not provided.
        :raises ValueError: if ``what`` is not a known derivative name.
        """
        if what not in const.derivative_attributes:
            raise ValueError(f"unknown derivative {what!r}")
        return getattr(self, const.derivative_attributes[what])

    def transposed(self):
        """Return the handle of ``(x, y) -> f(y, x)``, derivatives swapped to match.

        :return: (*AnalyticFunction2D*) -- transposed function.
        """

        def swap(fn):
            return None if fn is None else (lambda x, y: fn(y, x))

        return AnalyticFunction2D(
            eval=swap(self.eval),
            d_x=swap(self.d_y),
            d_y=swap(self.d_x),
            d_xx=swap(self.d_yy),
            d_yy=swap(self.d_xx),
            d_xy=swap(self.d_xy),
        )


def make_grid(nx, ny):
    """Build a periodic grid over [0, 2π)².

    :param int nx: points along x, at least 2.
    :param int ny: points along y, at least 2.
    :return: (*PeriodicGrid2D*) -- the grid.
    :raises TypeError: if ``nx`` or ``ny`` is not an int.
    :raises ValueError: if ``nx`` or ``ny`` is below 2.
    """
    return PeriodicGrid2D(nx, ny)


def sample(f, grid, what="f"):
    """Sample a function, or one of its exact derivatives, on every grid node.

    :param AnalyticFunction2D f: function handle.
    :param PeriodicGrid2D grid: grid to sample on.
    :param str what: derivative name, 'f' for the function itself.
    :return: (*GridFunction2D*) -- ``values[i, j] = f(node(i, j))``.
    :raises ValueError: if the requested derivative is missing, or if evaluation
        gives a non-finite value (the first such node is named).
    """
    if not isinstance(f, AnalyticFunction2D):
        raise TypeError(f"f must be an AnalyticFunction2D, got {type(f)}")
    fn = f.derivative(what)
    if fn is None:
        raise ValueError(f"function does not provide derivative {what!r}")
    X, Y = grid.mesh()
    values = np.broadcast_to(np.asarray(fn(X, Y), dtype=float), grid.shape)
    bad = np.argwhere(~np.isfinite(values))
    if len(bad) > 0:
        i, j = (int(k) for k in bad[0])
        x, y = grid.node(i, j)
        raise ValueError(
            f"non-finite value {values[i, j]} of {what} at node ({i}, {j}) = ({x}, {y})"
        )
    return GridFunction2D(grid, values)


def l2_norm(u):
    """Discrete L₂ norm over [0, 2π)², ``sqrt(dx * dy * sum(values**2))``.

    :param GridFunction2D u: samples.
    :return: (*float*) -- the norm.
    """
    return float(np.sqrt(u.grid.dx * u.grid.dy * np.sum(u.values**2)))


def grid_to_frame(u):
    """Flatten samples to a data frame with one row per node, i-major.

    :param GridFunction2D u: samples.
    :return: (*pandas.DataFrame*) -- columns 'x', 'y', 'value'.
    """
    X, Y = u.grid.mesh()
    return pd.DataFrame(
        {"x": X.ravel(), "y": Y.ravel(), "value": u.values.ravel()},
        columns=const.grid_csv_columns,
    )


def write_grid_csv(u, path):
    """Write samples as CSV (header ``x,y,value``, 17 significant digits).

    :param GridFunction2D u: samples.
    :param str path: output file, replaced atomically.
    """
    with atomic_output(path) as tmp_path:
        grid_to_frame(u).to_csv(
            tmp_path, index=False, float_format=const.csv_float_format
        )
    logger.debug("wrote %dx%d grid to %s", u.grid.nx, u.grid.ny, path)


def read_grid_csv(path):
    """Read samples written by :func:`write_grid_csv`.

    :param str path: CSV file.
    :return: (*GridFunction2D*) -- samples on the inferred grid.
    :raises ValueError: if the header is wrong or the rows do not form a full
        i-major uniform grid.
    """
    df = pd.read_csv(path, float_precision="round_trip")
    if list(df.columns) != const.grid_csv_columns:
        raise ValueError(
            f"expected columns {const.grid_csv_columns}, got {list(df.columns)}"
        )
    nx = df["x"].nunique()
    ny = df["y"].nunique()
    if nx * ny != len(df):
        raise ValueError(f"{len(df)} rows do not form a {nx}x{ny} grid")
    grid = make_grid(nx, ny)
    X, Y = grid.mesh()
    if not (
        np.allclose(df["x"].to_numpy(), X.ravel(), rtol=0, atol=1e-12)
        and np.allclose(df["y"].to_numpy(), Y.ravel(), rtol=0, atol=1e-12)
    ):
        raise ValueError("node coordinates are not an i-major uniform periodic grid")
    return GridFunction2D(grid, df["value"].to_numpy().reshape(nx, ny))
