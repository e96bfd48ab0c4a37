"""Mixed-derivative reconstruction pipeline and its JSON report."""
import json
import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from mixedpartials import const
from mixedpartials.calculus import fd_mixed, fd_partial_x, primitive_xy, primitive_y
from mixedpartials.fourier import (
    DecayNorms,
    analyze,
    decay_inequality_holds,
    decay_norms,
    derivative_x,
    integrate_y,
    mixed_operator,
    synthesize,
)
from mixedpartials.grid import (
    AnalyticFunction2D,
    GridFunction2D,
    PeriodicGrid2D,
    l2_norm,
    sample,
)
from mixedpartials.helpers import to_json_bytes

logger = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """Pipeline input does not vanish on the lines x = 0 and y = 0."""

    def __init__(self, boundary_max, tol):
        self.boundary_max = boundary_max
        super().__init__(
            f"input is not boundary-flat: max |f| on x = 0 or y = 0 is "
            f"{boundary_max:.3e} > {tol:.1e}"
        )


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return (
        s**3 * (10 - 15 * s + 6 * s**2),
        30 * s**2 * (1 - s) ** 2,
        60 * s * (1 - s) * (1 - 2 * s),
    )


@dataclass(frozen=True)
class WindowFunction:
    """``w(x) w(y)`` where w rises from 0 to 1 over ``[π/n, 2π/n]`` with a quintic
    smoothstep and falls back symmetrically over ``[2π - 2π/n, 2π - π/n]``.
    """

    n: int

    @property
    def ramp(self):
        return np.pi / self.n, const.two_pi / self.n

    def profile(self, t):
        """1D window and its first two derivatives at ``t``.

        :param numpy.ndarray t: points in [0, 2π].
        :return: (*tuple*) -- ``(w, w', w'')``.
        """
        start, end = self.ramp
        width = end - start
        t = np.asarray(t, dtype=float)
        up, dup, ddup = _smoothstep((t - start) / width)
        down, ddown, dddown = _smoothstep((const.two_pi - t - start) / width)
        w = up * down
        dw = (dup * down - up * ddown) / width
        ddw = (ddup * down - 2 * dup * ddown + up * dddown) / width**2
        return w, dw, ddw

    def as_function(self):
        """Return the 2D window as an :class:`AnalyticFunction2D`."""

        def part(ox, oy):
            return lambda x, y: self.profile(x)[ox] * self.profile(y)[oy]

        return AnalyticFunction2D(
            eval=part(0, 0),
            d_x=part(1, 0),
            d_y=part(0, 1),
            d_xx=part(2, 0),
            d_yy=part(0, 2),
            d_xy=part(1, 1),
        )


def make_window(n=const.default_window):
    """Build the window equal to 1 on ``[2π/n, 2π - 2π/n]²``.

    :param int n: plateau parameter, at least 3.
    :return: (*WindowFunction*) -- window.
    :raises TypeError: if ``n`` is not an int.
    :raises ValueError: if ``n < 3``.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"n must be an int, got {type(n)}")
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    return WindowFunction(int(n))


def apply_window(f, w):
    """Product ``f * w`` with Leibniz-rule derivatives.

    :param AnalyticFunction2D f: function with d_x, d_y, d_xx and d_yy.
    :param WindowFunction w: window.
    :return: (*AnalyticFunction2D*) -- product; d_xy is provided when f has it.
    :raises ValueError: if f lacks a required derivative.
    """
    required = ("d_x", "d_y", "d_xx", "d_yy")
    missing = [name for name in required if getattr(f, name) is None]
    if missing:
        raise ValueError(f"f must provide {', '.join(missing)}")
    W = w.as_function()

    def product(x, y):
        return f.eval(x, y) * W.eval(x, y)

    def d_x(x, y):
        return f.d_x(x, y) * W.eval(x, y) + f.eval(x, y) * W.d_x(x, y)

    def d_y(x, y):
        return f.d_y(x, y) * W.eval(x, y) + f.eval(x, y) * W.d_y(x, y)

    def d_xx(x, y):
        return (
            f.d_xx(x, y) * W.eval(x, y)
            + 2 * f.d_x(x, y) * W.d_x(x, y)
            + f.eval(x, y) * W.d_xx(x, y)
        )

    def d_yy(x, y):
        return (
            f.d_yy(x, y) * W.eval(x, y)
            + 2 * f.d_y(x, y) * W.d_y(x, y)
            + f.eval(x, y) * W.d_yy(x, y)
        )

    def d_xy(x, y):
        return (
            f.d_xy(x, y) * W.eval(x, y)
            + f.d_x(x, y) * W.d_y(x, y)
            + f.d_y(x, y) * W.d_x(x, y)
            + f.eval(x, y) * W.d_xy(x, y)
        )

    return AnalyticFunction2D(
        eval=product,
        d_x=d_x,
        d_y=d_y,
        d_xx=d_xx,
        d_yy=d_yy,
        d_xy=None if f.d_xy is None else d_xy,
    )


@dataclass(frozen=True)
class Tolerances:
    spectral: float = const.default_tolerances["spectral"]
    quadrature: float = const.default_tolerances["quadrature"]
    parseval: float = const.parseval_rel_tol
    row_zero: float = const.row_zero_tol
    boundary: float = const.boundary_flat_tol


@dataclass(frozen=True)
class CheckResult:
    """Error of one leg. Informational results are reported but never fail a run."""

    max: float
    l2: float
    passed: bool
    informational: bool = False

    def to_dict(self):
        data = {"max": self.max, "l2": self.l2, "pass": self.passed}
        if self.informational:
            data["informational"] = True
        return data


@dataclass
class VerificationReport:
    """Errors of every pipeline leg with pass flags; checks keep execution order."""

    grid: tuple
    box: tuple
    tolerances: Tolerances
    checks: dict = field(default_factory=dict)
    decay: DecayNorms = None
    notes: dict = field(default_factory=dict)
    timings_ms: dict = field(default_factory=dict)

    def record(self, name, error, tol, informational=False):
        """Record a comparison from an error field or a scalar residual.

        :param str name: check name.
        :param GridFunction2D/float error: pointwise difference or scalar residual.
        :param float tol: tolerance on the maximum.
        :param bool informational: keep the result out of the pass/fail verdict.
        :return: (*CheckResult*) -- the recorded result.
        """
        if isinstance(error, GridFunction2D):
            result = CheckResult(error.max_abs(), l2_norm(error), False)
        else:
            result = CheckResult(float(error), float(error), False)
        if not (np.isfinite(result.max) and np.isfinite(result.l2)):
            raise ValueError(f"check {name} produced a non-finite error")
        result = CheckResult(
            result.max, result.l2, bool(result.max <= tol), informational
        )
        if not result.passed:
            log = logger.info if informational else logger.warning
            log("check %s failed: %.3e > %.1e", name, result.max, tol)
        self.checks[name] = result
        return result

    @property
    def all_passed(self):
        return not self.failed_checks()

    def failed_checks(self):
        return [
            name
            for name, c in self.checks.items()
            if not (c.passed or c.informational)
        ]

    def to_dict(self, include_timings=False):
        data = {
            "grid": list(self.grid),
            "box": list(self.box),
            "tolerances": asdict(self.tolerances),
            "checks": {name: c.to_dict() for name, c in self.checks.items()},
            "decay": None if self.decay is None else dict(self.decay._asdict()),
            "notes": dict(self.notes),
        }
        if include_timings:
            data["timings_ms"] = dict(self.timings_ms)
        return data


def reconstruct_mixed(u, nmax, mmax):
    """Spectral mixed derivative ``h = synthesize(mixed_operator(analyze(u)))``.

    :param GridFunction2D u: samples.
    :param int nmax: box order along x.
    :param int mmax: box order along y.
    :return: (*GridFunction2D*) -- h on the grid of u.
    """
    return synthesize(mixed_operator(analyze(u, nmax, mmax)), u.grid)


class _Stopwatch:
    def __init__(self, timings):
        self.timings = timings
        self.last = time.perf_counter()

    def lap(self, stage):
        now = time.perf_counter()
        self.timings[stage] = 1000 * (now - self.last)
        logger.debug("stage %s: %.2f ms", stage, self.timings[stage])
        self.last = now


def _out_of_box_energy(u, nmax, mmax):
    """Energy ``4π² Σ|a_nm|²`` of the largest box the grid resolves, outside
    ``|n| <= nmax, |m| <= mmax``."""
    full = analyze(u, (u.grid.nx - 1) // 2, (u.grid.ny - 1) // 2)
    inside = (np.abs(full.ns)[:, None] <= nmax) & (np.abs(full.ms)[None, :] <= mmax)
    return float(4 * np.pi**2 * np.sum(np.abs(full.coeffs[~inside]) ** 2))


def _sample_reference(f, grid, what):
    if not isinstance(f, AnalyticFunction2D) or f.derivative(what) is None:
        return None
    try:
        return sample(f, grid, what)
    except ValueError as e:
        logger.warning("exact %s unavailable, using differences instead: %s", what, e)
        return None


def run_pipeline(f, grid=None, box=(8, 8), tolerances=None):
    """Reconstruct the mixed derivative of f spectrally, integrate it back and
    compare every leg against independent numerics.

    Stages: sample, analyze, decay sums, ``h`` from the mixed operator, ``F`` as the
    y-primitive of h against fx, ``G`` as the double primitive against f, h against
    the four-point mixed difference, then Parseval and row-zero residuals. Failed
    comparisons are recorded, not raised. When more than a ``tolerances.parseval``
    share of the energy lies outside the box, the legs that hold only for
    band-limited input (h_vs_exact, spectral_fx, parseval) are informational.

    :param AnalyticFunction2D/GridFunction2D f: input function or samples.
    :param PeriodicGrid2D grid: sampling grid; defaults to the grid of sampled input.
    :param tuple box: ``(nmax, mmax)``.
    :param Tolerances tolerances: comparison tolerances, defaults when None.
    :return: (*VerificationReport*) -- the report.
    :raises PreconditionError: if f does not vanish on x = 0 and y = 0.
    :raises ValueError: if the box does not fit the grid or the grid is too small
        for the difference stencils.
    """
    tolerances = tolerances or Tolerances()
    if isinstance(f, GridFunction2D):
        if grid is not None and grid != f.grid:
            raise ValueError("grid does not match the sampled input")
        grid = f.grid
    elif not isinstance(f, AnalyticFunction2D):
        raise TypeError(
            f"f must be an AnalyticFunction2D or GridFunction2D, got {type(f)}"
        )
    if not isinstance(grid, PeriodicGrid2D):
        raise TypeError(f"grid must be a PeriodicGrid2D, got {type(grid)}")
    nmax, mmax = box
    report = VerificationReport(grid.shape, (nmax, mmax), tolerances)
    watch = _Stopwatch(report.timings_ms)

    u = f if isinstance(f, GridFunction2D) else sample(f, grid)
    boundary = max(np.max(np.abs(u.values[0, :])), np.max(np.abs(u.values[:, 0])))
    if boundary > tolerances.boundary:
        raise PreconditionError(float(boundary), tolerances.boundary)
    fd_mixed_u = fd_mixed(u)
    watch.lap("sample")

    c = analyze(u, nmax, mmax)
    watch.lap("analyze")

    report.decay = decay_norms(c)
    excess = max(0.0, report.decay.sxy - (report.decay.s4x + report.decay.s4y))
    report.checks["decay"] = CheckResult(
        excess, excess, decay_inequality_holds(report.decay)
    )
    energy = l2_norm(u) ** 2
    tail = _out_of_box_energy(u, nmax, mmax)
    band_limited = bool(tail <= tolerances.parseval * energy)
    report.notes["band_limited"] = band_limited
    report.notes["out_of_box_energy"] = tail
    if not band_limited:
        logger.info(
            "energy %.3e outside the box, spectral legs are informational", tail
        )

    hc = mixed_operator(c)
    h = synthesize(hc, grid)
    watch.lap("mixed")
    exact_fxy = _sample_reference(f, grid, "fxy")
    if exact_fxy is not None:
        report.record(
            "h_vs_exact",
            h - exact_fxy,
            tolerances.spectral,
            informational=not band_limited,
        )

    fx = _sample_reference(f, grid, "fx")
    report.notes["fx_reference"] = "exact" if fx is not None else "finite_difference"
    if fx is not None:
        spectral_F = synthesize(integrate_y(hc), grid)
        report.record(
            "spectral_fx",
            spectral_F - fx,
            tolerances.spectral,
            informational=not band_limited,
        )
    else:
        fx = fd_partial_x(u)
    F = primitive_y(h)
    report.record("primitive_vs_fx", F - fx, tolerances.quadrature)
    watch.lap("primitive_y")

    G = primitive_xy(h)
    report.record("g_vs_f", G - u, tolerances.quadrature)
    report.record("h_vs_fd_mixed", h - fd_mixed_u, tolerances.quadrature)
    watch.lap("primitive_xy")

    coeff_energy = 4 * np.pi**2 * float(np.sum(np.abs(c.coeffs) ** 2))
    parseval = abs(energy - coeff_energy)
    report.record(
        "parseval",
        parseval / energy if energy > 0 else parseval,
        tolerances.parseval,
        informational=not band_limited,
    )
    bc = analyze(synthesize(derivative_x(c), grid), nmax, mmax)
    report.record(
        "row_zero", float(np.max(np.abs(bc.coeffs[nmax]))), tolerances.row_zero
    )
    watch.lap("residuals")
    logger.info(
        "pipeline on %dx%d, box %dx%d: %d/%d checks pass",
        grid.nx,
        grid.ny,
        nmax,
        mmax,
        len(report.checks) - len(report.failed_checks()),
        len(report.checks),
    )
    return report


def serialize_report(r, include_timings=False):
    """Deterministic JSON encoding of a report, keys sorted.

    :param VerificationReport r: report.
    :param bool include_timings: add the wall-clock stage timings.
    :return: (*bytes*) -- UTF-8 JSON.
    :raises ValueError: if any number in the report is NaN or infinite.
    """
    return to_json_bytes(r.to_dict(include_timings=include_timings))


def parse_report(data):
    """Inverse of :func:`serialize_report`.

    :param bytes/str data: JSON produced by :func:`serialize_report`.
    :return: (*VerificationReport*) -- report.
    """
    obj = json.loads(data)
    decay = obj.get("decay")
    return VerificationReport(
        grid=tuple(obj["grid"]),
        box=tuple(obj["box"]),
        tolerances=Tolerances(**obj["tolerances"]),
        checks={
            name: CheckResult(
                c["max"], c["l2"], c["pass"], c.get("informational", False)
            )
            for name, c in obj["checks"].items()
        },
        decay=None if decay is None else DecayNorms(**decay),
        notes=obj.get("notes", {}),
        timings_ms=obj.get("timings_ms", {}),
    )
