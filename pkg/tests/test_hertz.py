import numpy as np
import pytest
from conftest import shell_points

from shellwave import (
    ExternalField,
    HertzPotential,
    Jet,
    RegularizedField,
    ShellSpec,
    SmoothstepProfile,
    bound_sources,
    em_fields,
    four_potential,
    polarization,
    real_fields,
    shell_source_density,
    shell_source_derivatives,
)
from shellwave.hertz import fields_from_jet
from shellwave.oracle import convergence_order, fd_curl, fd_divergence, fd_dt, fd_gradient, fd_wave_operator

P_VEC = np.array([1.0, 0.3 - 0.2j, 0.5j])
SPACINGS = [0.01, 0.005, 0.0025]


@pytest.fixture
def source_shell():
    # bound currents need grad S, which contains h'''
    return ShellSpec(0.5, SmoothstepProfile(0.2, 5))


@pytest.fixture
def shell_sample(cfg, rng):
    return shell_points(cfg, rng, 80, 0.33, 0.67), rng.uniform(-0.5, 1.0, 80)


def _Z(params, shell, p_vec=P_VEC):
    return HertzPotential(p_vec, RegularizedField(params, shell))


def _order_at_least_two(rep):
    assert rep.monotone, rep.to_text()
    assert 1.7 <= rep.order_max <= 2.3, rep.to_text()


class TestFields:
    def test_G_is_F_minus_polarization(self, params, shell, shell_sample):
        r, t = shell_sample
        f = em_fields(_Z(params, shell), r, t)
        P = polarization(params, shell, P_VEC, r, t)
        scale = np.max(np.abs(f.F))
        assert np.max(np.abs(f.G - (f.F - 4 * np.pi * P))) < 1e-12 * scale
        rf = real_fields(f, P)
        assert np.max(rf.residual_D) < 1e-10 and np.max(rf.residual_B) < 1e-10

    def test_outside_shell_D_is_E(self, params, shell, cfg, rng):
        r = shell_points(cfg, rng, 50, 0.75, 1.5)
        f = em_fields(_Z(params, shell), r, 0.3)
        rf = real_fields(f)
        # equal up to rounding, since dtt Psi_2 = lap Psi_2 only analytically
        scale = np.max(np.abs(f.F))
        assert np.max(rf.residual_D) < 1e-12 * scale and np.max(rf.residual_B) < 1e-12 * scale

    def test_exterior_coincidence(self, params, shell, cfg, rng):
        r = shell_points(cfg, rng, 100, 0.75, 2.0)
        t = rng.uniform(-1, 1, 100)
        shell_f = em_fields(_Z(params, shell), r, t)
        bare = em_fields(HertzPotential(P_VEC, ExternalField(params)), r, t)
        for a, b in ((shell_f.F, bare.F), (shell_f.G, bare.G)):
            assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(b))

    def test_static_scalar_drops_time_coupling(self, params, shell_sample):
        r, t = shell_sample
        jet = ExternalField(params).jet(r, t)
        z = np.zeros_like
        static = Jet(jet.val, jet.grad, jet.hess, z(jet.dt), z(jet.dt_grad), z(jet.dtt))
        f = fields_from_jet(P_VEC, static)
        expected = jet.hess @ P_VEC - jet.laplacian[..., None] * P_VEC
        np.testing.assert_allclose(f.F, expected, rtol=1e-14)
        np.testing.assert_allclose(f.G, jet.hess @ P_VEC, rtol=1e-14)

    def test_real_potential_magnetic_field(self, params, shell_sample):
        r, t = shell_sample
        jet = ExternalField(params).jet(r, t)
        real = Jet(*(np.real(getattr(jet, k)).astype(complex) for k in ("val", "grad", "hess", "dt", "dt_grad", "dtt")))
        p = np.array([0.2, -1.0, 0.4], dtype=complex)
        f = fields_from_jet(p, real)
        np.testing.assert_allclose(f.B, np.cross(real.dt_grad.real, p.real), rtol=1e-14)

    def test_zero_dipole(self, params, shell, shell_sample):
        r, t = shell_sample
        f = em_fields(_Z(params, shell, np.zeros(3)), r, t)
        assert np.all(f.F == 0) and np.all(f.G == 0)
        assert np.all(polarization(params, shell, np.zeros(3), r, t) == 0)

    def test_bad_dipole_shape(self, params, shell):
        with pytest.raises(ValueError):
            _Z(params, shell, np.ones(2))

    def test_divergence_free(self, params, shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, shell)
        F = lambda rr, tt: em_fields(Z, rr, tt).F
        rep = convergence_order(None, lambda pts, h: fd_divergence(F, pts, t, h), r, SPACINGS, name="div F")
        _order_at_least_two(rep)

    def test_free_current_vanishes(self, params, shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, shell)
        F = lambda rr, tt: em_fields(Z, rr, tt).F
        G = lambda rr, tt: em_fields(Z, rr, tt).G
        oracle = lambda pts, h: fd_dt(F, pts, t, h / 2) + 1j * fd_curl(G, pts, t, h)
        _order_at_least_two(convergence_order(None, oracle, r, SPACINGS, name="free current"))

    def test_duality_with_fd_curls(self, params, shell, shell_sample):
        # F = curl curl Z + i curl dZ/dt from sampled Z only
        r, t = shell_sample
        Z = _Z(params, shell)

        def oracle(pts, h):
            curl_z = lambda rr, tt: fd_curl(Z, rr, tt, h)
            zt = lambda rr, tt: fd_dt(Z, rr, tt, h / 2)
            return fd_curl(curl_z, pts, t, h) + 1j * fd_curl(zt, pts, t, h)

        rep = convergence_order(lambda pts: em_fields(Z, pts, t).F, oracle, r, SPACINGS, name="duality")
        _order_at_least_two(rep)

    def test_polarization_is_wave_operator(self, params, source_shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, source_shell)
        exact = lambda pts: 4 * np.pi * polarization(params, source_shell, P_VEC, pts, t)
        _order_at_least_two(convergence_order(exact, lambda pts, h: fd_wave_operator(Z, pts, t, h), r, SPACINGS))


class TestBoundSources:
    def test_zero_off_shell(self, params, source_shell, cfg, rng):
        r = np.vstack([shell_points(cfg, rng, 200, 0.0, 0.29), shell_points(cfg, rng, 200, 0.71, 2.0)])
        bs = bound_sources(params, source_shell, P_VEC, r, 0.4)
        assert np.all(bs.rho_b == 0) and np.all(bs.J_b == 0)
        assert np.all(bs.rho_m == 0) and np.all(bs.J_m == 0)

    def test_real_dipole_split(self, params, source_shell, shell_sample):
        r, t = shell_sample
        p = np.array([0.0, 0.0, 1.0])
        bs = bound_sources(params, source_shell, p, r, t)
        _, gs, ds = shell_source_derivatives(params, source_shell, r, t)
        np.testing.assert_allclose(bs.J_b, p * ds.real[:, None] - np.cross(p, gs.imag), rtol=1e-14, atol=1e-300)
        np.testing.assert_allclose(bs.rho_b, -gs.real @ p, rtol=1e-14)

    def test_continuity(self, params, source_shell, cfg, rng):
        r = shell_points(cfg, rng, 50, 0.33, 0.67)
        t = rng.uniform(-0.5, 1.0, 50)
        rho = lambda rr, tt: bound_sources(params, source_shell, P_VEC, rr, tt).rho_b
        J = lambda rr, tt: bound_sources(params, source_shell, P_VEC, rr, tt).J_b
        oracle = lambda pts, h: fd_dt(rho, pts, t, h / 2) + fd_divergence(J, pts, t, h)
        _order_at_least_two(convergence_order(None, oracle, r, SPACINGS, name="continuity"))

    def test_microscopic_maxwell(self, params, source_shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, source_shell)
        E = lambda rr, tt: em_fields(Z, rr, tt).E
        B = lambda rr, tt: em_fields(Z, rr, tt).B
        bs = lambda pts: bound_sources(params, source_shell, P_VEC, pts, t)
        checks = {
            "div B": (None, lambda pts, h: fd_divergence(B, pts, t, h)),
            "faraday": (None, lambda pts, h: fd_curl(E, pts, t, h) + fd_dt(B, pts, t, h / 2)),
            "gauss": (lambda pts: 4 * np.pi * bs(pts).rho_b, lambda pts, h: fd_divergence(E, pts, t, h)),
            "ampere": (lambda pts: 4 * np.pi * bs(pts).J_b,
                       lambda pts, h: fd_curl(B, pts, t, h) - fd_dt(E, pts, t, h / 2)),
        }
        for name, (exact, oracle) in checks.items():
            _order_at_least_two(convergence_order(exact, oracle, r, SPACINGS, name=name))


class TestFourPotential:
    def test_lorenz_condition(self, params, shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, shell)
        phi = lambda rr, tt: four_potential(Z, rr, tt)[0]
        A = lambda rr, tt: four_potential(Z, rr, tt)[1]
        oracle = lambda pts, h: fd_dt(phi, pts, t, h / 2) + fd_divergence(A, pts, t, h)
        _order_at_least_two(convergence_order(None, oracle, r, SPACINGS, name="lorenz"))

    def test_fields_from_potentials(self, params, shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, shell)
        phi = lambda rr, tt: four_potential(Z, rr, tt)[0]
        A = lambda rr, tt: four_potential(Z, rr, tt)[1]
        f = lambda pts: em_fields(Z, pts, t)
        e_rep = convergence_order(lambda pts: f(pts).E,
                                  lambda pts, h: -fd_gradient(phi, pts, t, h) - fd_dt(A, pts, t, h / 2), r, SPACINGS)
        b_rep = convergence_order(lambda pts: f(pts).B, lambda pts, h: fd_curl(A, pts, t, h), r, SPACINGS)
        _order_at_least_two(e_rep)
        _order_at_least_two(b_rep)

    def test_real_potential_has_no_curl_part(self, params, shell, shell_sample):
        r, t = shell_sample
        Z = _Z(params, shell, np.array([1.0, -0.5, 0.25]))
        _, A = four_potential(Z, r, t)
        jet = Z.jet(r, t)
        # imaginary part of the scalar still feeds curl Z_m; only a real Z leaves dZ_e/dt
        expected = np.cross(jet.grad.imag, Z.p_vec.real) + jet.dt.real[:, None] * Z.p_vec.real
        np.testing.assert_allclose(A, expected, rtol=1e-13, atol=1e-15)
        real_jet = Jet(*(np.real(getattr(jet, k)).astype(complex) for k in ("val", "grad", "hess", "dt", "dt_grad", "dtt")))

        class _Real:
            p_vec = Z.p_vec

            def jet(self, rr, tt):
                return real_jet

        _, A_real = four_potential(_Real(), r, t)
        np.testing.assert_allclose(A_real, real_jet.dt.real[:, None] * Z.p_vec.real, rtol=1e-14)

    def test_source_sits_on_shell(self, params, shell, cfg, rng):
        r = shell_points(cfg, rng, 100, 0.75, 1.5)
        assert np.all(shell_source_density(params, shell, r, 0.0) == 0)
