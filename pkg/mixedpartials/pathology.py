"""Fat Cantor sets, the exponential bump and the two series counterexamples.

Both series live on [0, 1]²; :func:`rescale_to_2pi` adapts them to the periodic
square used by the spectral code. At every point at most one term of a series is
non-zero, so derivatives are evaluated termwise on the active term.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy import integrate, optimize

from mixedpartials import const
from mixedpartials.grid import AnalyticFunction2D
from mixedpartials.helpers import index_to_triple

logger = logging.getLogger(__name__)


class ConstructionError(ValueError):
    """No admissible rectangle exists for a series term.

    :param int term: 1-based index of the first term that could not be built.
    """

    def __init__(self, term, reason=""):
        self.term = term
        self.attained = term - 1
        message = f"no admissible rectangle for term {term}"
        if reason:
            message += f": {reason}"
        super().__init__(message)


class BreakNodeError(ValueError):
    """A first or second x-derivative was requested on a zigzag break node."""


@dataclass(frozen=True, eq=False)
class FatCantorSet:
    """Removed open intervals of a centered-removal Cantor construction on [0, 1].

    ``intervals[k] = (a, b)`` lists the removed intervals level by level, left to
    right inside a level; ``level_of[k]`` is the 1-based level of interval k.
    """

    levels: int
    removal: float
    intervals: np.ndarray
    level_of: np.ndarray

    @property
    def measure(self):
        """Exact measure of the remaining set, ``1 - r (1 - 2^-L) / 2``.

        :return: (*fractions.Fraction*) -- measure.
        """
        removed = Fraction(self.removal) * Fraction(1, 2) * (
            1 - Fraction(1, 2**self.levels)
        )
        return 1 - removed

    @property
    def removed_length(self):
        return float(np.sum(self.intervals[:, 1] - self.intervals[:, 0]))

    @property
    def endpoints(self):
        """Endpoints ``a, b`` of every removed interval, in interval order."""
        return self.intervals.ravel()

    def level(self, n):
        return self.intervals[self.level_of == n]

    def check_conditions(self):
        """Scan the endpoint conditions.

        :return: (*dict*) -- condition name to bool.
        """
        a, b = self.intervals[:, 0], self.intervals[:, 1]
        order = np.argsort(a)
        equal_lengths = all(
            np.allclose(lengths, lengths[0], rtol=1e-12, atol=0)
            for lengths in (
                np.diff(self.level(n), axis=1).ravel()
                for n in range(1, self.levels + 1)
            )
        )
        return {
            "inside_unit_interval": bool(np.all((0 < a) & (a < b) & (b < 1))),
            "distinct_endpoints": len(np.unique(self.endpoints)) == 2 * len(a),
            "equal_lengths_per_level": bool(equal_lengths),
            "disjoint": bool(np.all(b[order][:-1] < a[order][1:])),
        }


def build_fat_cantor(levels, removal=1.0):
    """Remove, at level n, the centered open interval of length ``r 4^-n`` from
    each of the 2^(n-1) closed intervals left by the previous level.

    :param int levels: number of levels, 1 to 24.
    :param float removal: removal fraction r, 0 < r <= 1.
    :return: (*FatCantorSet*) -- the construction.
    :raises TypeError: if ``levels`` is not an int.
    :raises ValueError: if a parameter is out of range or a removal would reach
        the edge of the interval it splits.
    """
    if isinstance(levels, bool) or not isinstance(levels, (int, np.integer)):
        raise TypeError(f"levels must be an int, got {type(levels)}")
    if not 1 <= levels <= const.fat_cantor_max_levels:
        raise ValueError(
            f"levels must be between 1 and {const.fat_cantor_max_levels}, got {levels}"
        )
    if not 0 < removal <= 1:
        raise ValueError(f"removal fraction must be in (0, 1], got {removal}")
    lo, hi = np.array([0.0]), np.array([1.0])
    removed, level_of = [], []
    for n in range(1, levels + 1):
        length = removal * 4.0**-n
        mid = (lo + hi) / 2
        a, b = mid - length / 2, mid + length / 2
        if np.any(a <= lo) or np.any(b >= hi):
            raise ValueError(f"level {n} removal exhausts a remaining interval")
        removed.append(np.column_stack([a, b]))
        level_of.append(np.full(len(a), n))
        lo = np.column_stack([lo, b]).ravel()
        hi = np.column_stack([a, hi]).ravel()
    intervals = np.concatenate(removed)
    logger.debug(
        "fat Cantor set: %d levels, %d removed intervals", levels, len(intervals)
    )
    return FatCantorSet(levels, float(removal), intervals, np.concatenate(level_of))


@dataclass(frozen=True)
class BumpFunction:
    """``ψ(t) = exp(4 - 1/(t(1-t)))`` on (0, 1), zero elsewhere; ``ψ(1/2) = 1``.

    ``A`` is the maximum slope, attained at ``t_star``; ``d2_max`` is ``max|ψ''|``.
    """

    A: float
    t_star: float
    d2_max: float
    d2_l1: float

    @staticmethod
    def _parts(t):
        t = np.asarray(t, dtype=float)
        inside = (t > 0) & (t < 1)
        ts = np.where(inside, t, 0.5)
        s = ts * (1 - ts)
        ds = 1 - 2 * ts
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            psi = np.where(inside, np.exp(4 - 1 / s), 0.0)
            dq = ds / s**2
            ddq = (-2 * s - 2 * ds**2) / s**3
        return psi, dq, ddq

    @staticmethod
    def _out(values, t):
        return float(values) if np.ndim(t) == 0 else values

    def eval(self, t):
        psi, _, _ = self._parts(t)
        return self._out(psi, t)

    def d1(self, t):
        psi, dq, _ = self._parts(t)
        with np.errstate(invalid="ignore", over="ignore"):
            values = np.where(psi > 0, psi * dq, 0.0)
        return self._out(values, t)

    def d2(self, t):
        psi, dq, ddq = self._parts(t)
        with np.errstate(invalid="ignore", over="ignore"):
            values = np.where(psi > 0, psi * (dq**2 + ddq), 0.0)
        return self._out(values, t)


@lru_cache(maxsize=None)
def standard_bump():
    """Build the exponential bump and cache its slope maximum.

    :return: (*BumpFunction*) -- the bump.
    """
    shape = BumpFunction(A=float("nan"), t_star=0.0, d2_max=0.0, d2_l1=0.0)
    slope = optimize.minimize_scalar(
        lambda t: -shape.d1(t), bracket=(0.1, 0.3, 0.45), method="golden"
    )
    t_star = float(slope.x)
    scan = np.linspace(0, 1, const.bump_scan_points + 1)
    d2_max = float(np.max(np.abs(shape.d2(scan))))
    d2_l1, _ = integrate.quad(
        lambda t: abs(shape.d2(t)), 0, 1, points=[t_star, 1 - t_star], limit=200
    )
    return BumpFunction(
        A=float(shape.d1(t_star)), t_star=t_star, d2_max=d2_max, d2_l1=d2_l1
    )


@dataclass(frozen=True)
class SeriesTerm:
    """One term supported on ``U x V``.

    For thm51 ``eps`` is both the side of the square and the amplitude factor;
    for thm52 ``eps`` is the zigzag half-period and ``U`` is the whole unit
    interval.
    """

    index: int
    eps: float
    U: Tuple[float, float]
    V: Tuple[float, float]
    witness: Tuple[float, float]
    triple: Optional[Tuple[int, int, int]] = None

    @property
    def v_length(self):
        return self.V[1] - self.V[0]


@dataclass(frozen=True, eq=False)
class CounterexampleSeries:
    kind: str
    cantor: FatCantorSet
    bump: BumpFunction
    terms: Tuple[SeriesTerm, ...]
    _lookup: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in const.pathology_kinds:
            raise ValueError(f"kind must be one of {const.pathology_kinds}")
        key = (lambda t: t.U[0]) if self.kind == "thm51" else (lambda t: t.V[0])
        ordered = sorted(self.terms, key=key)
        lookup = {
            name: np.array([getattr(t, attr)[i] for t in ordered])
            for name, attr, i in (
                ("a", "U", 0),
                ("b", "U", 1),
                ("c", "V", 0),
                ("d", "V", 1),
            )
        }
        lookup["eps"] = np.array([t.eps for t in ordered])
        object.__setattr__(self, "_lookup", lookup)

    @property
    def nterms(self):
        return len(self.terms)

    def term_bounds(self):
        """Uniform bound ``ε_n max|ψ''| / (d_n - c_n)²`` of each thm52 term's fyy.

        :return: (*numpy.ndarray*) -- one bound per term, in term order.
        """
        ratios = np.array([t.eps / t.v_length**2 for t in self.terms])
        return ratios * self.bump.d2_max


def _pick(intervals, candidates, used, target, radius):
    """Index of the unused candidate inside ``[target - radius, target + radius]``
    whose midpoint is nearest to ``target``, or None."""
    a, b = intervals[candidates, 0], intervals[candidates, 1]
    ok = ~used[candidates] & (a >= target - radius) & (b <= target + radius)
    if not np.any(ok):
        return None
    distance = np.where(ok, np.abs((a + b) / 2 - target), np.inf)
    return int(candidates[np.argmin(distance)])


def construct_thm51(cantor, nterms, allow_partial=False):
    """Choose rectangles ``W_n = U_n x V_n`` from removed intervals of equal length.

    Term n uses ``(k, m, l) = index_to_triple(n)`` and must lie in the closed
    square of half-width ``1/l`` around ``(p_k, p_m)``, where ``p`` lists the set's
    endpoints (indices wrap around). Levels are tried from coarsest to finest and,
    inside a level, the unused interval nearest to the target endpoint wins. The
    U's and the V's are each used at most once.

    :param FatCantorSet cantor: source of intervals.
    :param int nterms: number of terms.
    :param bool allow_partial: return the terms built so far instead of raising.
    :return: (*CounterexampleSeries*) -- series of kind 'thm51'.
    :raises ConstructionError: if some term has no admissible rectangle.
    """
    if nterms < 0:
        raise ValueError(f"nterms must be non-negative, got {nterms}")
    bump = standard_bump()
    p = cantor.endpoints
    by_level = [
        np.flatnonzero(cantor.level_of == n) for n in range(1, cantor.levels + 1)
    ]
    used_u = np.zeros(len(cantor.intervals), dtype=bool)
    used_v = np.zeros(len(cantor.intervals), dtype=bool)
    terms = []
    for n in range(1, nterms + 1):
        k, m, l = index_to_triple(n)  # noqa: E741
        pk, pm = p[(k - 1) % len(p)], p[(m - 1) % len(p)]
        choice = None
        for candidates in by_level:
            iu = _pick(cantor.intervals, candidates, used_u, pk, 1 / l)
            iv = _pick(cantor.intervals, candidates, used_v, pm, 1 / l)
            if iu is not None and iv is not None:
                choice = iu, iv
                break
        if choice is None:
            if allow_partial:
                logger.warning("stopped after %d of %d terms", n - 1, nterms)
                break
            raise ConstructionError(n, f"triple {(k, m, l)}")
        iu, iv = choice
        used_u[iu] = used_v[iv] = True
        a, b = (float(e) for e in cantor.intervals[iu])
        c, d = (float(e) for e in cantor.intervals[iv])
        eps = b - a
        terms.append(
            SeriesTerm(
                index=n,
                eps=eps,
                U=(a, b),
                V=(c, d),
                witness=(a + eps * bump.t_star, c + eps / 2),
                triple=(k, m, l),
            )
        )
        logger.debug(
            "term %d: triple %s, U=(%g, %g), V=(%g, %g)", n, (k, m, l), a, b, c, d
        )
    logger.info("built %d thm51 terms", len(terms))
    return CounterexampleSeries("thm51", cantor, bump, tuple(terms))


def construct_thm52(cantor, nterms):
    """One term per removed interval ``(a_n, b_n)``, in interval order.

    ``f_n(x, y) = φ_n(x) ψ((y - a_n) / L_n)`` with ``L_n = b_n - a_n``, where φ_n is
    the zigzag of slope ±1 between 0 and ``ε_n = L_n³ / n²``, starting at 0 with
    breaks at the multiples of ε_n.

    :param FatCantorSet cantor: source of intervals.
    :param int nterms: number of terms.
    :return: (*CounterexampleSeries*) -- series of kind 'thm52'.
    :raises ConstructionError: if ``nterms`` exceeds the number of removed intervals.
    """
    if nterms < 0:
        raise ValueError(f"nterms must be non-negative, got {nterms}")
    available = len(cantor.intervals)
    if nterms > available:
        raise ConstructionError(
            available + 1, f"only {available} removed intervals are available"
        )
    terms = []
    for n in range(1, nterms + 1):
        a, b = (float(e) for e in cantor.intervals[n - 1])
        length = b - a
        eps = length**3 / n**2
        terms.append(
            SeriesTerm(
                index=n,
                eps=eps,
                U=(0.0, 1.0),
                V=(a, b),
                witness=(eps / 2, a + length / 2),
            )
        )
    logger.info("built %d thm52 terms", len(terms))
    return CounterexampleSeries("thm52", cantor, standard_bump(), tuple(terms))


def _zigzag(x, eps):
    r = np.mod(x, 2 * eps)
    return eps - np.abs(r - eps), np.where(r < eps, 1.0, -1.0)


def _term_formula(s, what, x, y, a, c, eps, length, active):
    """Values of one term per point; ``a, c, eps, length`` are per-point term
    parameters and ``active`` masks the points inside its support."""
    bump = s.bump
    if s.kind == "thm51":
        tx, ty = (x - a) / eps, (y - c) / eps
        px, py = {
            "f": (eps * bump.eval(tx), bump.eval(ty)),
            "fx": (bump.d1(tx), bump.eval(ty)),
            "fy": (bump.eval(tx), bump.d1(ty)),
            "fxx": (bump.d2(tx) / eps, bump.eval(ty)),
            "fyy": (bump.eval(tx) / eps, bump.d2(ty)),
            "fxy": (bump.d1(tx) / eps, bump.d1(ty)),
        }[what]
        return np.where(active, px * py, 0.0)
    ty = (y - c) / length
    phi, dphi = _zigzag(x, eps)
    if what in ("fx", "fxx", "fxy"):
        ratio = x / eps
        on_break = active & (np.abs(ratio - np.round(ratio)) <= const.break_node_tol)
        on_break &= bump.eval(ty) != 0
        if np.any(on_break):
            k = np.flatnonzero(on_break)[0]
            raise BreakNodeError(
                f"{what} undefined at break node x={x[k]!r} of the term active at "
                f"y={y[k]!r}"
            )
    values = {
        "f": lambda: phi * bump.eval(ty),
        "fx": lambda: dphi * bump.eval(ty),
        "fy": lambda: phi * bump.d1(ty) / length,
        "fxx": lambda: np.zeros_like(x),
        "fyy": lambda: phi * bump.d2(ty) / length**2,
        "fxy": lambda: dphi * bump.d1(ty) / length,
    }[what]()
    return np.where(active, values, 0.0)


def _check_what(what):
    if what not in const.derivative_names:
        raise ValueError(f"what must be one of {const.derivative_names}, got {what!r}")


def _as_points(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return x.shape, x.ravel(), y.ravel()


def _shaped(values, shape):
    return float(values[0]) if shape == () else values.reshape(shape)


def eval_series(s, x, y, what="f"):
    """Exact value of a derivative of the finite series at points of [0, 1]².

    The active term is found by binary search over the sorted supports (U for
    thm51, V for thm52).

    :param CounterexampleSeries s: series.
    :param float/numpy.ndarray x: abscissae.
    :param float/numpy.ndarray y: ordinates, broadcast against ``x``.
    :param str what: one of 'f', 'fx', 'fy', 'fxx', 'fyy', 'fxy'.
    :return: (*float* or *numpy.ndarray*) -- values, float for scalar input.
    :raises BreakNodeError: for thm52 'fx', 'fxx' or 'fxy' on a break node of
        the active term.
    """
    _check_what(what)
    shape, x, y = _as_points(x, y)
    if s.nterms == 0:
        return _shaped(np.zeros_like(x), shape)
    lk = s._lookup
    key = x if s.kind == "thm51" else y
    starts = lk["a"] if s.kind == "thm51" else lk["c"]
    idx = np.searchsorted(starts, key, side="right") - 1
    found = idx >= 0
    idx = np.clip(idx, 0, None)
    a, b, c, d, eps = (lk[name][idx] for name in ("a", "b", "c", "d", "eps"))
    if s.kind == "thm51":
        active = found & (x < b) & (c < y) & (y < d)
        length = eps
    else:
        active = found & (y < d)
        length = d - c
    values = _term_formula(s, what, x, y, a, c, eps, length, active)
    return _shaped(values, shape)


def eval_series_naive(s, x, y, what="f"):
    """Same as :func:`eval_series` by summing every term over every point."""
    _check_what(what)
    shape, x, y = _as_points(x, y)
    total = np.zeros_like(x)
    for t in s.terms:
        (a, b), (c, d) = t.U, t.V
        if s.kind == "thm51":
            active = (a < x) & (x < b) & (c < y) & (y < d)
            length = t.eps
        else:
            active = (c <= y) & (y < d)
            length = d - c
        total = total + _term_formula(s, what, x, y, a, c, t.eps, length, active)
    return _shaped(total, shape)


def l1_second_derivative_bound(s):
    """``sup_y ∫|fxx| dx`` and ``sup_x ∫|fyy| dy`` of a thm51 series.

    Each horizontal or vertical line meets at most one term, and inside a term the
    integral is largest on the line through the bump peak, so the suprema are taken
    over those lines; the integrals use adaptive quadrature split at the zeros of
    the bump's second derivative.

    :param CounterexampleSeries s: series of kind 'thm51'.
    :return: (*tuple*) -- the two suprema, ``(0, 0)`` for an empty series.
    :raises ValueError: for a thm52 series.
    """
    if s.kind != "thm51":
        raise ValueError("the L1 bound on second derivatives applies to thm51 only")
    sup_x, sup_y = 0.0, 0.0
    knots = (s.bump.t_star, 1 - s.bump.t_star)
    for t in s.terms:
        (a, b), (c, d) = t.U, t.V
        along_x, _ = integrate.quad(
            lambda u: abs(eval_series(s, u, c + t.eps / 2, "fxx")),
            a,
            b,
            points=[a + t.eps * k for k in knots],
            limit=200,
        )
        along_y, _ = integrate.quad(
            lambda v: abs(eval_series(s, a + t.eps / 2, v, "fyy")),
            c,
            d,
            points=[c + t.eps * k for k in knots],
            limit=200,
        )
        sup_x, sup_y = max(sup_x, along_x), max(sup_y, along_y)
    return sup_x, sup_y


def rescale_to_2pi(s):
    """Function handle of ``(x, y) -> f(x / 2π, y / 2π)`` with chain-rule derivatives.

    thm51 terms are supported strictly inside the square, so the periodic
    continuation is as smooth as the series. thm52 zigzags do not vanish at x = 0
    and x = 2π, so its continuation is not periodic in x.

    :param CounterexampleSeries s: series.
    :return: (*mixedpartials.grid.AnalyticFunction2D*) -- rescaled handle.
    """
    scale = const.two_pi

    def rescaled(what, order):
        def fn(x, y):
            values = eval_series(s, np.asarray(x) / scale, np.asarray(y) / scale, what)
            return values / scale**order

        return fn

    return AnalyticFunction2D(
        eval=rescaled("f", 0),
        d_x=rescaled("fx", 1),
        d_y=rescaled("fy", 1),
        d_xx=rescaled("fxx", 2),
        d_yy=rescaled("fyy", 2),
        d_xy=rescaled("fxy", 2),
    )


def _disjoint(pairs):
    pairs = sorted(pairs)
    return all(prev[1] < nxt[0] for prev, nxt in zip(pairs, pairs[1:]))


def check_series(s):
    """Evaluate every term-exact invariant of a constructed series.

    :param CounterexampleSeries s: series.
    :return: (*dict*) -- invariant name to bool, in a fixed order.
    """
    checks = {f"cantor_{k}": v for k, v in s.cantor.check_conditions().items()}
    if s.nterms == 0:
        return checks
    u, v = (np.array([t.witness[i] for t in s.terms]) for i in (0, 1))
    p = s.cantor.endpoints
    if s.kind == "thm51":
        p_count = len(p)
        inside = []
        for t in s.terms:
            k, m, l = t.triple  # noqa: E741
            pk, pm = p[(k - 1) % p_count], p[(m - 1) % p_count]
            inside.append(
                pk - 1 / l <= t.U[0]
                and t.U[1] <= pk + 1 / l
                and pm - 1 / l <= t.V[0]
                and t.V[1] <= pm + 1 / l
            )
        lengths = np.array([(t.U[1] - t.U[0], t.V[1] - t.V[0], t.eps) for t in s.terms])
        witness = np.abs(eval_series(s, u, v, "fx"))
        checks.update(
            {
                "u_disjoint": _disjoint([t.U for t in s.terms]),
                "v_disjoint": _disjoint([t.V for t in s.terms]),
                "equal_sides": bool(
                    np.allclose(lengths[:, 0], lengths[:, 2], rtol=1e-12, atol=0)
                    and np.allclose(lengths[:, 1], lengths[:, 2], rtol=1e-12, atol=0)
                ),
                "inside_box": all(inside),
                "witness_amplitude": bool(np.all(np.abs(witness - s.bump.A) <= 1e-12)),
                "endpoint_columns_zero": bool(
                    np.all(eval_series(s, p[:, None], v[None, :], "fx") == 0)
                ),
                "endpoint_rows_zero": bool(
                    np.all(eval_series(s, u[None, :], p[:, None], "fx") == 0)
                ),
            }
        )
    else:
        ratios = np.array([t.eps / t.v_length**2 for t in s.terms])
        checks.update(
            {
                "ratio_strictly_decreasing": bool(np.all(np.diff(ratios) < 0)),
                "bound_strictly_decreasing": bool(np.all(np.diff(s.term_bounds()) < 0)),
                "peak_slope": bool(
                    np.all(np.abs(np.abs(eval_series(s, u, v, "fx")) - 1) <= 1e-12)
                ),
                "endpoint_rows_zero": bool(
                    np.all(eval_series(s, u[None, :], p[:, None], "fx") == 0)
                ),
                "fxx_zero_off_breaks": bool(np.all(eval_series(s, u, v, "fxx") == 0)),
            }
        )
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.warning("series invariants failed: %s", ", ".join(failed))
    return checks


def witness_table(s):
    """Per-term witness data.

    :param CounterexampleSeries s: series.
    :return: (*pandas.DataFrame*) -- one row per term. thm51 rows carry the exact
        fx at the witness and its distance to A; thm52 rows carry the slope on the
        peak row and the uniform fyy bound.
    """
    rows = []
    for t in s.terms:
        x, y = t.witness
        fx = eval_series(s, x, y, "fx")
        row = {
            "term": t.index,
            "eps": t.eps,
            "v_start": t.V[0],
            "v_end": t.V[1],
            "witness_x": x,
            "witness_y": y,
            "fx": fx,
        }
        if s.kind == "thm51":
            k, m, l = t.triple  # noqa: E741
            row.update(
                {"k": k, "m": m, "l": l, "u_start": t.U[0], "u_end": t.U[1]}
            )
            row["fx_minus_A"] = abs(fx) - s.bump.A
        else:
            row["ratio"] = t.eps / t.v_length**2
            row["fyy_bound"] = row["ratio"] * s.bump.d2_max
        rows.append(row)
    columns = ["term", "eps"]
    if s.kind == "thm51":
        columns += ["k", "m", "l", "u_start", "u_end"]
    columns += ["v_start", "v_end", "witness_x", "witness_y", "fx"]
    columns += ["fx_minus_A"] if s.kind == "thm51" else ["ratio", "fyy_bound"]
    return pd.DataFrame(rows, columns=columns)


def series_metadata(s):
    """JSON-ready description of a series and the parameters it was built with.

    :param CounterexampleSeries s: series.
    :return: (*dict*) -- metadata.
    """
    terms = []
    for t in s.terms:
        entry = {
            "n": t.index,
            "eps": t.eps,
            "U": list(t.U),
            "V": list(t.V),
            "witness": list(t.witness),
        }
        if s.kind == "thm51":
            entry["triple"] = list(t.triple)
        else:
            entry["ratio"] = t.eps / t.v_length**2
        terms.append(entry)
    measure = s.cantor.measure
    return {
        "kind": s.kind,
        "nterms": s.nterms,
        "cantor": {
            "levels": s.cantor.levels,
            "removal": s.cantor.removal,
            "measure": float(measure),
            "measure_exact": str(measure),
        },
        "bump": {
            "formula": "exp(4 - 1/(t(1-t))) on (0, 1)",
            "A": s.bump.A,
            "t_star": s.bump.t_star,
            "d2_max": s.bump.d2_max,
            "d2_l1": s.bump.d2_l1,
        },
        "parameters": {
            "bijection": "inverse nested Cantor tupling, 1-based",
            "selection": "coarsest level first, nearest unused interval",
            "eps_rule": "side length" if s.kind == "thm51" else "L^3 / n^2",
            "zigzag": None if s.kind == "thm51" else "slope +-1, breaks at j*eps",
        },
        "terms": terms,
    }
