import json
import math

import numpy as np
import pytest

from mixedpartials import catalog
from mixedpartials.grid import AnalyticFunction2D, make_grid, sample
from mixedpartials.verify import (
    CheckResult,
    PreconditionError,
    Tolerances,
    VerificationReport,
    apply_window,
    make_window,
    parse_report,
    reconstruct_mixed,
    run_pipeline,
    serialize_report,
)

pipeline_checks = [
    "decay",
    "h_vs_exact",
    "spectral_fx",
    "primitive_vs_fx",
    "g_vs_f",
    "h_vs_fd_mixed",
    "parseval",
    "row_zero",
]


@pytest.fixture(scope="module")
def sinsin_report():
    return run_pipeline(catalog.sinsin(), make_grid(64, 64), (8, 8))


def test_make_window_argument():
    with pytest.raises(ValueError, match="at least 3"):
        make_window(2)
    with pytest.raises(TypeError):
        make_window(3.0)
    assert make_window(np.int64(4)).n == 4


def test_window_profile():
    w = make_window(3)
    assert w.ramp == pytest.approx((math.pi / 3, 2 * math.pi / 3))
    t = np.array([0, math.pi / 6, math.pi / 2, math.pi, 5 * math.pi / 4, 2 * math.pi])
    values, _, _ = w.profile(t)
    np.testing.assert_allclose(values, [0, 0, 0.5, 1, 1, 0], atol=1e-15)
    values, slopes, curvatures = w.profile(np.linspace(0, 2 * math.pi, 500))
    assert np.all((values >= 0) & (values <= 1))
    assert slopes[0] == curvatures[0] == 0


def test_window_derivatives_match_differences():
    w = make_window(4)
    t = np.linspace(0.1, 2 * math.pi - 0.1, 97)
    h = 1e-6
    w0, w1, w2 = w.profile(t)
    plus, minus = w.profile(t + h), w.profile(t - h)
    np.testing.assert_allclose(w1, (plus[0] - minus[0]) / (2 * h), atol=1e-6)
    np.testing.assert_allclose(w2, (plus[1] - minus[1]) / (2 * h), atol=1e-5)


def test_apply_window_leibniz():
    f = catalog.mix()
    W = make_window(3).as_function()
    g = apply_window(f, make_window(3))
    x, y = np.array([0.7, 1.4, 2.5, 5.5]), np.array([0.9, 3.0, 1.2, 5.8])
    h = 1e-6
    np.testing.assert_allclose(g.eval(x, y), f.eval(x, y) * W.eval(x, y))
    np.testing.assert_allclose(
        g.d_xy(x, y), (g.d_x(x, y + h) - g.d_x(x, y - h)) / (2 * h), atol=1e-6
    )
    np.testing.assert_allclose(
        g.d_xx(x, y), (g.d_x(x + h, y) - g.d_x(x - h, y)) / (2 * h), atol=1e-6
    )
    np.testing.assert_allclose(
        g.d_yy(x, y), (g.d_y(x, y + h) - g.d_y(x, y - h)) / (2 * h), atol=1e-6
    )


def test_apply_window_missing_derivatives():
    bare = AnalyticFunction2D(eval=lambda x, y: x * y)
    with pytest.raises(ValueError, match="d_x, d_y, d_xx, d_yy"):
        apply_window(bare, make_window())
    f = catalog.mix()
    partial = AnalyticFunction2D(
        eval=f.eval, d_x=f.d_x, d_y=f.d_y, d_xx=f.d_xx, d_yy=f.d_yy
    )
    assert apply_window(partial, make_window()).d_xy is None


def test_reconstruct_mixed():
    grid = make_grid(32, 32)
    h = reconstruct_mixed(sample(catalog.mix(), grid), 8, 8)
    exact = sample(catalog.mix(), grid, "fxy")
    assert (h - exact).max_abs() <= 1e-12


def test_run_pipeline_sinsin(sinsin_report):
    r = sinsin_report
    assert list(r.checks) == pipeline_checks
    assert r.all_passed
    assert r.failed_checks() == []
    assert r.notes["fx_reference"] == "exact"
    assert r.notes["band_limited"] is True
    assert not r.checks["parseval"].informational
    assert r.grid == (64, 64)
    assert r.box == (8, 8)
    assert r.checks["h_vs_exact"].max <= 1e-12
    assert r.checks["parseval"].max <= 1e-12
    assert r.decay.s4x == pytest.approx(0.25)
    assert r.decay.sxy == pytest.approx(0.25)
    assert set(r.timings_ms) == {
        "sample",
        "analyze",
        "mixed",
        "primitive_y",
        "primitive_xy",
        "residuals",
    }


def test_run_pipeline_sampled_input():
    u = sample(catalog.sinsin(), make_grid(64, 64))
    r = run_pipeline(u, box=(8, 8))
    assert r.notes["fx_reference"] == "finite_difference"
    assert "h_vs_exact" not in r.checks
    assert "spectral_fx" not in r.checks
    assert r.all_passed
    with pytest.raises(ValueError, match="grid does not match"):
        run_pipeline(u, make_grid(32, 32))


def test_run_pipeline_windowed_mix():
    r = run_pipeline(catalog.windowed_mix(), make_grid(64, 64), (16, 16))
    assert list(r.checks) == pipeline_checks
    assert r.checks["decay"].passed
    assert r.checks["row_zero"].passed


def test_run_pipeline_windowed_mix_spectral_legs_informational():
    r = run_pipeline(catalog.windowed_mix(), make_grid(128, 128), (16, 16))
    assert r.notes["band_limited"] is False
    assert r.notes["out_of_box_energy"] > 0
    for name in ("h_vs_exact", "spectral_fx", "parseval"):
        assert r.checks[name].informational
        assert name not in r.failed_checks()
    assert not r.checks["primitive_vs_fx"].informational
    assert r.checks["primitive_vs_fx"].max <= 5e-2
    assert r.checks["decay"].passed
    assert r.checks["row_zero"].passed
    assert parse_report(serialize_report(r)).to_dict() == r.to_dict()


def test_run_pipeline_break_nodes_fall_back():
    f = catalog.build_function("thm52", levels=4, terms=4)
    r = run_pipeline(f, make_grid(64, 64), (8, 8))
    assert r.notes["fx_reference"] == "finite_difference"
    assert "h_vs_exact" not in r.checks


def test_run_pipeline_tight_quadrature_tolerance_fails():
    tight = Tolerances(quadrature=1e-6)
    r = run_pipeline(catalog.sinsin(), make_grid(64, 64), (8, 8), tight)
    assert not r.all_passed
    assert r.failed_checks() == ["primitive_vs_fx", "g_vs_f", "h_vs_fd_mixed"]


def test_run_pipeline_precondition():
    with pytest.raises(PreconditionError) as e:
        run_pipeline(catalog.sin(), make_grid(16, 16), (4, 4))
    assert e.value.boundary_max == pytest.approx(1, abs=0.1)


def test_run_pipeline_argument():
    with pytest.raises(ValueError, match="needs at least"):
        run_pipeline(catalog.sinsin(), make_grid(8, 8), (8, 8))
    with pytest.raises(TypeError):
        run_pipeline(np.zeros((8, 8)), make_grid(8, 8))
    with pytest.raises(TypeError):
        run_pipeline(catalog.sinsin(), None)


def test_serialize_report(sinsin_report):
    data = serialize_report(sinsin_report)
    assert data == serialize_report(sinsin_report)
    assert data.endswith(b"\n")
    obj = json.loads(data)
    assert "timings_ms" not in obj
    assert list(obj) == sorted(obj)
    assert obj["checks"]["parseval"]["pass"] is True
    assert "timings_ms" in json.loads(serialize_report(sinsin_report, True))


def test_parse_report(sinsin_report):
    parsed = parse_report(serialize_report(sinsin_report))
    assert parsed.to_dict() == sinsin_report.to_dict()
    assert parsed.failed_checks() == []


def test_serialize_report_rejects_non_finite():
    r = VerificationReport((8, 8), (2, 2), Tolerances())
    r.checks["broken"] = CheckResult(float("nan"), 0.0, False)
    with pytest.raises(ValueError, match="non-finite"):
        serialize_report(r)
    with pytest.raises(ValueError, match="non-finite"):
        r.record("inf", float("inf"), 1.0)


def test_record():
    r = VerificationReport((8, 8), (2, 2), Tolerances())
    assert r.record("ok", 0.5, 1.0).passed
    assert not r.record("bad", 2.0, 1.0).passed
    assert r.failed_checks() == ["bad"]
    u = sample(catalog.sinsin(), make_grid(8, 8))
    result = r.record("field", u, 0.5)
    assert result.max == pytest.approx(1)
    assert not result.passed
    assert r.record("aside", 2.0, 1.0, informational=True).informational
    assert r.failed_checks() == ["bad", "field"]
    assert r.checks["aside"].to_dict()["informational"] is True
    assert "informational" not in r.checks["bad"].to_dict()


def test_window_boundary_and_plateau():
    W = make_window(3).as_function()
    assert W.eval(math.pi, math.pi) == 1
    for fn in (W.eval, W.d_x, W.d_y, W.d_xx, W.d_yy, W.d_xy):
        assert fn(0.0, math.pi) == 0
    g = apply_window(catalog.mix(), make_window(3))
    assert g.eval(math.pi, math.pi) == catalog.mix().eval(math.pi, math.pi)
    nodes = make_grid(16, 16).x
    for fn in (g.eval, g.d_x, g.d_yy):
        assert not np.any(fn(nodes, np.zeros(16)))
        assert not np.any(fn(np.zeros(16), nodes))


def test_run_pipeline_zero_function():
    zero = AnalyticFunction2D(eval=lambda x, y: 0 * x * y)
    r = run_pipeline(zero, make_grid(16, 16), (4, 4))
    assert r.all_passed
    assert all(c.max == 0 and c.l2 == 0 for c in r.checks.values())


def test_run_pipeline_second_order_in_grid():
    errors = [
        run_pipeline(catalog.sinsin(), make_grid(n, n), (8, 8)).checks["g_vs_f"].max
        for n in (64, 128)
    ]
    assert errors[0] <= 1e-2
    assert 3.5 <= errors[0] / errors[1] <= 4.5


def test_run_pipeline_windowed_mix_converges():
    errors = [
        run_pipeline(catalog.windowed_mix(), make_grid(n, n), (n // 2 - 1,) * 2)
        .checks["primitive_vs_fx"]
        .max
        for n in (64, 128)
    ]
    assert 3 <= errors[0] / errors[1] <= 5


def test_reconstruct_mixed_transpose_symmetric():
    f = catalog.windowed_mix()
    grid = make_grid(48, 48)
    h = reconstruct_mixed(sample(f, grid), 16, 16)
    ht = reconstruct_mixed(sample(f.transposed(), grid), 16, 16)
    np.testing.assert_allclose(ht.values, h.values.T, rtol=0, atol=1e-12)
