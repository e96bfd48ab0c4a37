"""Truncated 2D Fourier analysis/synthesis and coefficient-space operators.

Coefficients follow ``a_nm = (1/4π²) ∫∫ f e^{-inx} e^{-imy}``; synthesis carries no
prefactor. Boxes are stored as arrays of shape ``(2*nmax + 1, 2*mmax + 1)`` with
``coeffs[n + nmax, m + mmax] = a_nm``.
"""
import json
import logging
import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from mixedpartials import const
from mixedpartials.grid import GridFunction2D, PeriodicGrid2D
from mixedpartials.helpers import check_finite

logger = logging.getLogger(__name__)

DecayNorms = namedtuple("DecayNorms", ["s4x", "s4y", "sxy"])
IbpCheck = namedtuple(
    "IbpCheck", ["lhs", "rhs", "residual", "printed_rhs", "printed_residual"]
)


class NonHermitianError(ValueError):
    """Synthesis of a coefficient box left an imaginary part above the bound."""


def _check_order(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an int, got {type(value)}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")


@dataclass(frozen=True, eq=False)
class FourierCoeffs2D:
    nmax: int
    mmax: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_order("nmax", self.nmax)
        _check_order("mmax", self.mmax)
        coeffs = np.array(self.coeffs, dtype=complex)
        expected = (2 * self.nmax + 1, 2 * self.mmax + 1)
        if coeffs.shape != expected:
            raise ValueError(f"coeffs shape {coeffs.shape} does not match {expected}")
        check_finite("coeffs", coeffs)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def ns(self):
        return np.arange(-self.nmax, self.nmax + 1)

    @property
    def ms(self):
        return np.arange(-self.mmax, self.mmax + 1)

    def coeff(self, n, m):
        if abs(n) > self.nmax or abs(m) > self.mmax:
            return 0j
        return complex(self.coeffs[n + self.nmax, m + self.mmax])

    def with_coeffs(self, coeffs):
        return FourierCoeffs2D(self.nmax, self.mmax, coeffs)

    def hermitian_defect(self):
        """Largest ``|a(-n,-m) - conj(a(n,m))|`` relative to the largest modulus.

        :return: (*float*) -- relative defect, 0 for an all-zero box.
        """
        scale = np.max(np.abs(self.coeffs))
        if scale == 0:
            return 0.0
        mirrored = np.conj(self.coeffs[::-1, ::-1])
        return float(np.max(np.abs(self.coeffs - mirrored)) / scale)

    def is_hermitian(self, tol=const.hermitian_check_tol):
        return self.hermitian_defect() <= tol

    @classmethod
    def zeros(cls, nmax, mmax):
        return cls(nmax, mmax, np.zeros((2 * nmax + 1, 2 * mmax + 1), dtype=complex))


@dataclass(frozen=True, eq=False)
class FourierCoeffs1D:
    mmax: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_order("mmax", self.mmax)
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (2 * self.mmax + 1,):
            raise ValueError(
                f"coeffs shape {coeffs.shape} does not match ({2 * self.mmax + 1},)"
            )
        check_finite("coeffs", coeffs)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def ms(self):
        return np.arange(-self.mmax, self.mmax + 1)

    def coeff(self, m):
        if abs(m) > self.mmax:
            return 0j
        return complex(self.coeffs[m + self.mmax])


def _check_box_fits(nmax, nx, axis):
    if 2 * nmax + 1 > nx:
        raise ValueError(
            f"box order {nmax} along {axis} needs at least {2 * nmax + 1} points, "
            f"grid has {nx}"
        )


def analyze(u, nmax, mmax, method="fft"):
    """Coefficients ``a_nm = (1/(nx*ny)) Σ values(i,j) e^{-in x_i} e^{-im y_j}``.

    :param GridFunction2D u: samples.
    :param int nmax: largest retained |n|.
    :param int mmax: largest retained |m|.
    :param str method: 'direct' evaluates the defining sum through the separable
        exponential matrices; 'fft' reads the same numbers off a 2D FFT.
    :return: (*FourierCoeffs2D*) -- the coefficient box.
    :raises ValueError: if ``2*nmax + 1 > nx`` or ``2*mmax + 1 > ny``, or if
        ``method`` is unknown.
    """
    if not isinstance(u, GridFunction2D):
        raise TypeError(f"u must be a GridFunction2D, got {type(u)}")
    _check_order("nmax", nmax)
    _check_order("mmax", mmax)
    nx, ny = u.grid.shape
    _check_box_fits(nmax, nx, "x")
    _check_box_fits(mmax, ny, "y")
    ns = np.arange(-nmax, nmax + 1)
    ms = np.arange(-mmax, mmax + 1)
    if method == "direct":
        ex = np.exp(-1j * np.outer(ns, u.grid.x))
        ey = np.exp(-1j * np.outer(ms, u.grid.y))
        coeffs = ex @ u.values @ ey.T / (nx * ny)
    elif method == "fft":
        spectrum = np.fft.fft2(u.values) / (nx * ny)
        coeffs = spectrum[np.ix_(ns % nx, ms % ny)]
    else:
        raise ValueError(f"unknown method {method!r}")
    return FourierCoeffs2D(nmax, mmax, coeffs)


def synthesize(c, grid):
    """Evaluate the partial sum ``Σ a_nm e^{in x_i} e^{im y_j}`` on a grid.

    :param FourierCoeffs2D c: coefficients.
    :param PeriodicGrid2D grid: evaluation grid.
    :return: (*GridFunction2D*) -- real part of the partial sum.
    :raises NonHermitianError: if the imaginary part exceeds 1e-9 (relative to the
        largest real value when that is above 1).
    """
    if not isinstance(grid, PeriodicGrid2D):
        raise TypeError(f"grid must be a PeriodicGrid2D, got {type(grid)}")
    ex = np.exp(1j * np.outer(grid.x, c.ns))
    ey = np.exp(1j * np.outer(c.ms, grid.y))
    values = ex @ c.coeffs @ ey
    residual = float(np.max(np.abs(values.imag)))
    scale = max(1.0, float(np.max(np.abs(values.real))))
    if residual > const.hermitian_residual_tol * scale:
        raise NonHermitianError(
            f"imaginary residual {residual:.3e} exceeds bound; coefficients are not "
            "Hermitian"
        )
    return GridFunction2D(grid, values.real)


def analyze_1d(values, mmax):
    """1D coefficients ``c_m = (1/N) Σ values_j e^{-im t_j}``, ``t_j = 2πj/N``.

    :param numpy.ndarray values: samples on the uniform periodic grid of [0, 2π).
    :param int mmax: largest retained |m|.
    :return: (*FourierCoeffs1D*) -- coefficients.
    :raises ValueError: if ``2*mmax + 1`` exceeds the number of samples.
    """
    values = np.asarray(values, dtype=complex)
    _check_order("mmax", mmax)
    _check_box_fits(mmax, len(values), "t")
    spectrum = np.fft.fft(values) / len(values)
    return FourierCoeffs1D(mmax, spectrum[np.arange(-mmax, mmax + 1) % len(values)])


def synthesize_1d(c, points):
    """Evaluate ``Σ c_m e^{im t}`` at arbitrary points.

    :param FourierCoeffs1D c: coefficients.
    :param numpy.ndarray points: evaluation points.
    :return: (*numpy.ndarray*) -- complex values.
    """
    points = np.asarray(points, dtype=float)
    return np.exp(1j * np.multiply.outer(points, c.ms)) @ c.coeffs


def derivative_x(c):
    """Spectral x-derivative, ``a_nm -> i n a_nm``."""
    return c.with_coeffs((1j * c.ns)[:, None] * c.coeffs)


def derivative_y(c):
    """Spectral y-derivative, ``a_nm -> i m a_nm``."""
    return c.with_coeffs((1j * c.ms)[None, :] * c.coeffs)


def derivative_xx(c):
    return c.with_coeffs(-(c.ns**2).astype(float)[:, None] * c.coeffs)


def derivative_yy(c):
    return c.with_coeffs(-(c.ms**2).astype(float)[None, :] * c.coeffs)


def mixed_operator(c):
    """Coefficients of the mixed derivative, ``a_nm -> -n m a_nm``."""
    weights = -np.multiply.outer(c.ns, c.ms).astype(float)
    return c.with_coeffs(weights * c.coeffs)


def integrate_y(c):
    """Termwise y-primitive vanishing on y = 0.

    Each mode ``e^{imy}``, m ≠ 0, becomes ``(e^{imy} - 1)/(im)``; the constants are
    collected into the m = 0 column.

    :param FourierCoeffs2D c: coefficients with a zero m = 0 column.
    :return: (*FourierCoeffs2D*) -- coefficients of ``∫_0^y``.
    :raises ValueError: if the m = 0 column is non-zero (the primitive would grow
        linearly in y and is not periodic).
    """
    zero_column = c.coeffs[:, c.mmax]
    scale = max(1.0, float(np.max(np.abs(c.coeffs))))
    if np.max(np.abs(zero_column)) > const.hermitian_check_tol * scale:
        raise ValueError("m = 0 column must vanish for a periodic y-primitive")
    ms = c.ms.astype(float)
    divisor = np.where(ms == 0, 1.0, ms)
    coeffs = np.where(ms[None, :] == 0, 0, c.coeffs / (1j * divisor)[None, :])
    coeffs[:, c.mmax] = -coeffs.sum(axis=1)
    return c.with_coeffs(coeffs)


def decay_norms(c):
    """Weighted coefficient sums ``Σ n⁴|a|²``, ``Σ m⁴|a|²`` and ``Σ n²m²|a|²``.

    Termwise ``n²m² ≤ n⁴ + m⁴``, so ``sxy ≤ s4x + s4y``.

    :param FourierCoeffs2D c: coefficients.
    :return: (*DecayNorms*) -- ``(s4x, s4y, sxy)``.
    """
    power = np.abs(c.coeffs) ** 2
    n2 = (c.ns.astype(float) ** 2)[:, None]
    m2 = (c.ms.astype(float) ** 2)[None, :]
    return DecayNorms(
        s4x=float(np.sum(n2**2 * power)),
        s4y=float(np.sum(m2**2 * power)),
        sxy=float(np.sum(n2 * m2 * power)),
    )


def decay_inequality_holds(norms):
    return norms.sxy <= (norms.s4x + norms.s4y) * (1 + 1e-12)


def slice_coeffs(c, n):
    """Coefficients of ``α_n(y) = Σ_m a_nm e^{imy}``.

    :param FourierCoeffs2D c: coefficients.
    :param int n: x-frequency.
    :return: (*FourierCoeffs1D*) -- the n-th row of the box.
    :raises ValueError: if ``|n| > nmax``.
    """
    if abs(n) > c.nmax:
        raise ValueError(f"|n| must be at most {c.nmax}, got {n}")
    return FourierCoeffs1D(c.mmax, c.coeffs[n + c.nmax])


def row_transform(u, n):
    """Quadrature of ``(1/2π) ∫ u(x, y_j) e^{-inx} dx`` at every y-node.

    :param GridFunction2D u: samples.
    :param int n: x-frequency.
    :return: (*numpy.ndarray*) -- complex values, one per y-node.
    :raises ValueError: if ``2|n| + 1 > nx``.
    """
    _check_box_fits(abs(n), u.grid.nx, "x")
    return np.exp(-1j * n * u.grid.x) @ u.values / u.grid.nx


def row_transform_bound(u, n):
    """Both sides of ``∫|T u|² dy ≤ (1/2π) ∫∫ |u|²`` for the row transform T.

    :param GridFunction2D u: samples.
    :param int n: x-frequency.
    :return: (*tuple*) -- ``(lhs, rhs)``.
    """
    row = row_transform(u, n)
    lhs = float(u.grid.dy * np.sum(np.abs(row) ** 2))
    rhs = float(u.grid.dx * u.grid.dy * np.sum(u.values**2) / const.two_pi)
    return lhs, rhs


def _cos_moment(c, n):
    """``∫_0^{2π} f(t) cos(nt) dt`` from 1D coefficients."""
    return float((math.pi * (c.coeff(n) + c.coeff(-n))).real)


def _sin_moment(c, n):
    """``∫_0^{2π} f(t) sin(nt) dt`` from 1D coefficients."""
    return float((math.pi * (c.coeff(-n) - c.coeff(n)) / 1j).real)


def ibp_check(fc, gc, n, kind="cos"):
    """Integration-by-parts identity for a periodic f with derivative g.

    For ``kind='cos'`` compares ``∫f cos nx`` with ``-(1/n) ∫g sin nx``; for
    ``kind='sin'`` compares ``∫f sin nx`` with ``(1/n) ∫g cos nx``. The factor n in
    place of 1/n (``-n ∫g sin nx`` and ``n ∫g cos nx``) is reported as
    ``printed_rhs``; it agrees only at n = 1.

    :param FourierCoeffs1D fc: coefficients of f.
    :param FourierCoeffs1D gc: coefficients of g = f'.
    :param int n: positive frequency.
    :param str kind: 'cos' or 'sin'.
    :return: (*IbpCheck*) -- ``(lhs, rhs, residual, printed_rhs, printed_residual)``.
    :raises ValueError: if ``n`` is not positive, exceeds either box, or ``kind`` is
        unknown.
    """
    if n == 0:
        raise ValueError("n must be non-zero")
    if n < 0:
        raise ValueError(f"n must be positive, got {n}")
    if n > fc.mmax or n > gc.mmax:
        raise ValueError(f"n = {n} exceeds a coefficient box ({fc.mmax}, {gc.mmax})")
    if kind == "cos":
        lhs = _cos_moment(fc, n)
        g_moment = _sin_moment(gc, n)
        rhs = -g_moment / n
        printed = -n * g_moment
    elif kind == "sin":
        lhs = _sin_moment(fc, n)
        g_moment = _cos_moment(gc, n)
        rhs = g_moment / n
        printed = n * g_moment
    else:
        raise ValueError(f"kind must be 'cos' or 'sin', got {kind!r}")
    return IbpCheck(lhs, rhs, abs(lhs - rhs), printed, abs(lhs - printed))


def coeffs_to_json(c, threshold=const.coeff_json_threshold):
    """Serialize a coefficient box, listing entries with modulus above threshold.

    :param FourierCoeffs2D c: coefficients.
    :param float threshold: smallest modulus written.
    :return: (*str*) -- JSON text, entries ordered by ``(n, m)``.
    """
    entries = []
    for i, n in enumerate(c.ns):
        for j, m in enumerate(c.ms):
            value = c.coeffs[i, j]
            if abs(value) > threshold:
                entries.append(
                    {
                        "n": int(n),
                        "m": int(m),
                        "re": float(value.real),
                        "im": float(value.imag),
                    }
                )
    return json.dumps(
        {"nmax": c.nmax, "mmax": c.mmax, "coeffs": entries}, allow_nan=False
    )


def coeffs_from_json(text):
    """Inverse of :func:`coeffs_to_json`; omitted entries are zero.

    :param str text: JSON text.
    :return: (*FourierCoeffs2D*) -- coefficients.
    """
    data = json.loads(text)
    c = FourierCoeffs2D.zeros(data["nmax"], data["mmax"])
    coeffs = np.array(c.coeffs)
    for entry in data["coeffs"]:
        coeffs[entry["n"] + c.nmax, entry["m"] + c.mmax] = complex(
            entry["re"], entry["im"]
        )
    return c.with_coeffs(coeffs)
