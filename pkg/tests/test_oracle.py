import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shellwave import (
    ConvergenceReport,
    InternalField,
    UniformGrid,
    ValidationError,
    complex_distance,
    convergence_order,
    fd_wave_operator,
    fd_wave_operator_grid,
    normal_field,
)
from shellwave.geometry import singular_mask
from shellwave.oracle import (
    fd_curl,
    fd_divergence,
    fd_gradient,
    fd_gradient_grid,
    fd_laplacian,
    fd_vector_ops_grid,
    guarded,
    wave_truncation_estimate,
)

K = np.array([3.0, -2.0, 1.5])


def plane_wave(r, t):
    return np.exp(1j * (np.asarray(r) @ K - np.linalg.norm(K) * np.asarray(t)))


def smooth_vector(r, t):
    x, y, z = np.moveaxis(np.asarray(r), -1, 0)
    return np.stack([np.sin(y * z) + t, np.cos(x) * z**2, np.exp(0.3 * x * y)], axis=-1)


def smooth_scalar(r, t):
    x, y, z = np.moveaxis(np.asarray(r), -1, 0)
    return np.sin(x * y) * np.cos(z) + x * z**3


class TestPointStencils:
    def test_quadratic_exact(self, rng):
        f = lambda r, t: np.sum(np.asarray(r) ** 2, axis=-1) + 2 * np.asarray(t) ** 2
        r = rng.normal(size=(20, 3))
        t = rng.normal(size=20)
        np.testing.assert_allclose(fd_gradient(f, r, t, 0.1), 2 * r, rtol=1e-12)
        np.testing.assert_allclose(fd_laplacian(f, r, t, 0.1), 6.0, rtol=1e-12)
        np.testing.assert_allclose(fd_wave_operator(f, r, t, 0.1), 4.0 - 6.0, atol=1e-10)

    def test_plane_wave_is_null(self, rng):
        r = rng.uniform(-1, 1, (50, 3))
        t = rng.uniform(-1, 1, 50)
        rep = convergence_order(None, lambda pts, h: fd_wave_operator(plane_wave, pts, t, h), r, [0.02, 0.01, 0.005])
        assert rep.passed, rep.to_text()

    def test_truncation_estimate_predicts_residual(self, rng):
        r = rng.uniform(-1, 1, (50, 3))
        t = rng.uniform(-1, 1, 50)
        h = 0.01
        res = fd_wave_operator(plane_wave, r, t, h)
        est = wave_truncation_estimate(plane_wave, r, t, h)
        np.testing.assert_allclose(res, est, rtol=2e-3)

    def test_div_curl_vanishes(self, rng):
        r = rng.uniform(-1, 1, (30, 3))
        t = rng.uniform(-1, 1, 30)
        # nesting two stencils with the same step cancels exactly up to rounding
        curl = lambda rr, tt: fd_curl(smooth_vector, rr, tt, 1e-2)
        assert np.max(np.abs(fd_divergence(curl, r, t, 1e-2))) < 1e-9

    def test_curl_grad_vanishes(self, rng):
        r = rng.uniform(-1, 1, (30, 3))
        t = np.zeros(30)
        grad = lambda rr, tt: fd_gradient(smooth_scalar, rr, tt, 1e-2)
        assert np.max(np.abs(fd_curl(grad, r, t, 1e-2))) < 1e-9

    def test_curl_of_known_field(self, rng):
        r = rng.uniform(-1, 1, (30, 3))
        t = np.zeros(30)
        x, y, z = r.T
        exact = np.stack([
            0.3 * x * np.exp(0.3 * x * y) - 2 * z * np.cos(x),
            y * np.cos(y * z) - 0.3 * y * np.exp(0.3 * x * y),
            -np.sin(x) * z**2 - z * np.cos(y * z),
        ], axis=-1)
        rep = convergence_order(lambda pts: exact, lambda pts, h: fd_curl(smooth_vector, pts, t, h), r, [0.02, 0.01, 0.005])
        assert rep.passed, rep.to_text()

    def test_spheroid_normal(self, cfg, rng):
        r = rng.uniform(-2, 2, (200, 3))
        r = r[complex_distance(r, cfg).p > 0.2]
        p = lambda rr, tt: complex_distance(rr, cfg).p
        n, _, _ = normal_field(r, cfg)
        rep = convergence_order(lambda pts: n, lambda pts, h: fd_gradient(p, pts, 0.0, h), r, [0.02, 0.01, 0.005])
        assert rep.passed, rep.to_text()

    def test_guard_marks_nan(self, cfg):
        f = guarded(lambda r, t: np.ones(np.shape(r)[:-1]), lambda r: singular_mask(r, cfg))
        out = f(np.array([[1.0, 0, 0], [0.5, 0, 0.5]]), 0.0)
        assert np.isnan(out[0]) and out[1] == 1


class TestGrid:
    def test_validation(self):
        with pytest.raises(ValidationError):
            UniformGrid((0, 0, 0), (0.1, -0.1, 0.1), (5, 5, 5))
        with pytest.raises(ValidationError):
            UniformGrid((0, 0, 0), 0.1, (4, 5, 5)).require_stencil()

    def test_cube_and_refinement(self):
        g = UniformGrid.cube(1.0, 41)
        assert g.spacing == (0.05, 0.05, 0.05) and g.time_step == 0.025
        pts = g.points()
        assert pts.shape == (41, 41, 41, 3)
        np.testing.assert_allclose(pts[0, 0, 0], -1.0) and np.testing.assert_allclose(pts[-1, -1, -1], 1.0)
        fine = g.refined(2)
        assert fine.shape == (81, 81, 81) and fine.spacing[0] == 0.025
        np.testing.assert_array_equal(fine.points()[::2, ::2, ::2], pts)

    def test_indexing_is_ij(self):
        g = UniformGrid((0, 10, 20), (1, 2, 3), (5, 6, 7))
        pts = g.points()
        assert tuple(pts[1, 2, 3]) == (1, 14, 29)

    def test_wave_operator_grid_plane_wave(self):
        res = []
        for n in (21, 41, 81):
            g = UniformGrid.cube(0.5, n)
            out = fd_wave_operator_grid(plane_wave, g, 0.3)
            assert out.values.shape == (n - 2,) * 3 and out.excluded_fraction == 0
            res.append(np.max(np.abs(out.values)))
        orders = np.log2(np.array(res[:-1]) / res[1:])
        assert np.all(np.abs(orders - 2) < 0.1)

    def test_vector_ops_grid(self):
        g = UniformGrid.cube(0.5, 41)
        div, curl, ex = fd_vector_ops_grid(smooth_vector, g, 0.0)
        # each component is independent of its own coordinate, so div V = 0 exactly
        assert np.max(np.abs(div)) < 1e-12
        assert np.max(np.abs(curl)) > 0.1
        grad, _ = fd_gradient_grid(smooth_scalar, g, 0.0)
        assert grad.shape == (39, 39, 39, 3)
        assert not ex.any()

    def test_excluded_cells(self, cfg, params):
        g = UniformGrid.cube(2.0, 41)
        # nodes such as (1, 0, 0) sit on the focal circle
        out = fd_wave_operator_grid(InternalField(params), g, 0.5, guard=lambda r: singular_mask(r, cfg))
        assert out.excluded.any()
        assert np.all(out.values[out.excluded] == 0)
        assert 0 < out.excluded_fraction < 0.05


class TestConvergenceReport:
    def test_orders(self):
        rep = ConvergenceReport("x", [0.1, 0.05, 0.025], [4e-2, 1e-2, 2.5e-3], [2e-2, 5e-3, 1.25e-3])
        np.testing.assert_allclose(rep.pair_orders_max, [2, 2])
        assert rep.order_max == pytest.approx(2) and rep.order_rms == pytest.approx(2)
        assert rep.passed

    def test_flags(self):
        assert not ConvergenceReport("x", [0.1, 0.05, 0.025], [1e-2, 2e-2, 1e-3], [1, 1, 1]).monotone
        assert not ConvergenceReport("x", [0.1, 0.05, 0.025], [4e-2, 1e-2, 2.5e-3], [1, 1, 1], 0.06).passed
        flat = ConvergenceReport("x", [0.1, 0.05, 0.025], [1e-2, 0.99e-2, 0.98e-2], [1, 1, 1])
        assert not flat.passed and flat.order_max < 0.1

    def test_text_format(self):
        rep = ConvergenceReport("demo", [0.1, 0.05], [4e-2, 1e-2], [4e-2, 1e-2], notes={"grid": "41^3"})
        keys = [line.split(":", 1)[0] for line in rep.to_text().splitlines()]
        for k in ("name", "spacings", "max_norms", "rms_norms", "order_max", "order_rms", "monotone",
                  "excluded_fraction", "passed", "grid"):
            assert k in keys

    @given(st.floats(0.5, 4.0), st.floats(1e-6, 1e3))
    @settings(max_examples=50, deadline=None)
    def test_recovers_power_law(self, order, c):
        hs = np.array([0.1, 0.05, 0.025])
        rep = ConvergenceReport("p", list(hs), list(c * hs**order), list(c * hs**order))
        assert rep.order_max == pytest.approx(order, rel=1e-9)

    def test_negative_control(self, rng):
        r = rng.uniform(-1, 1, (40, 3))
        t = np.zeros(40)
        # a 1% error in the "closed form" (here zero plus a bias) cannot converge
        bias = lambda pts: 0.01 * np.ones(len(pts))
        rep = convergence_order(bias, lambda pts, h: fd_wave_operator(plane_wave, pts, t, h), r, [0.01, 0.005, 0.0025])
        assert not rep.passed
        assert rep.pair_orders_max[-1] < 0.5
