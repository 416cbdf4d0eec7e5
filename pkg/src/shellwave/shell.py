"""Regularized shell field and its smooth volume source.

Replacing the Heaviside step across the spheroid ``p = alpha`` by a profile
``h`` gives the continuous field

    Psi_A^eps = h(alpha - p) Psi_1 + h(p - alpha) Psi_2 = Psi_1 + H Psi_J,
    H = h(p - alpha),

whose source ``4 pi S = box Psi_A^eps`` lives on the shell
``|p - alpha| <= eps`` and depends on the jump field alone:

    -4 pi S = H'' Psi_J N + 2 H' (N Psi_J' + D Psi_J),
    N = (p^2 + a^2)/(p^2 + q^2) = |grad p|^2,   D = p/(p^2 + q^2) = div(grad p)/2.

Off the shell everything is returned as exact zeros without evaluating the
jump field, so the support is exact and the focal circle is never touched.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ProfileRegularityError, ValidationError
from .geometry import complex_distance
from .profiles import TransitionProfile, quintic
from .wavelets import (
    Jet,
    ScalarField,
    WaveletParams,
    _broadcast,
    _jet_from_rt,
    _tau,
    _w,
    external_jet,
    external_field,
    internal_field,
    internal_jet,
    jump_table,
)

_FOUR_PI = 4 * np.pi


@dataclass(frozen=True)
class ShellSpec:
    alpha: float
    profile: TransitionProfile

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError("spheroid radius alpha must be positive")
        if not 0 < self.profile.eps < self.alpha:
            raise ValidationError(
                f"shell half-width must satisfy 0 < eps < alpha (eps={self.profile.eps}, alpha={self.alpha})"
            )
        if self.profile.smoothness < 2:
            raise ProfileRegularityError("the shell source needs a C2 transition profile")

    @classmethod
    def default(cls, alpha=0.5, eps=0.2):
        return cls(alpha, quintic(eps))

    @property
    def eps(self):
        return self.profile.eps

    def active(self, p):
        """Points where ``h(p - alpha)`` is not locally constant."""
        if not self.profile.compact:
            return np.ones(np.shape(p), dtype=bool)
        return np.abs(p - self.alpha) < self.eps


@dataclass
class _ShellGeometry:
    rt: np.ndarray
    p: np.ndarray
    q: np.ndarray
    w: np.ndarray
    grad_rt: np.ndarray
    n: np.ndarray
    grad_q: np.ndarray
    big_n: np.ndarray
    big_d: np.ndarray
    grad_n: np.ndarray
    grad_d: np.ndarray


def _geometry(params, r):
    cd = complex_distance(r, params.cfg)
    rt = cd.value
    p, q = cd.p, cd.q
    w = _w(r, params.cfg)
    grad_rt = w / rt[..., None]
    n = grad_rt.real
    grad_q = -grad_rt.imag
    d = p**2 + q**2
    a2 = params.cfg.a_norm ** 2
    big_n = (p**2 + a2) / d
    big_d = p / d
    grad_d2 = 2 * p[..., None] * n + 2 * q[..., None] * grad_q
    grad_n = (2 * p[..., None] * n - big_n[..., None] * grad_d2) / d[..., None]
    grad_dd = (n - big_d[..., None] * grad_d2) / d[..., None]
    return _ShellGeometry(rt, p, q, w, grad_rt, n, grad_q, big_n, big_d, grad_n, grad_dd)


def _source_terms(params, shell, r, t, with_derivs=False):
    """Closed-form S (and optionally grad S, dS/dt) at points inside the shell."""
    g = _geometry(params, r)
    tau = _tau(params, t)
    nmax = 3 if with_derivs else 2
    hk = shell.profile.derivs(g.p - shell.alpha, nmax)
    tab = jump_table(params, g.rt, tau)
    pj, pj1 = tab[0, 0], tab[1, 0]
    neg4pi_s = hk[2] * pj * g.big_n + 2 * hk[1] * (g.big_n * pj1 + g.big_d * pj)
    s = -neg4pi_s / _FOUR_PI
    if not with_derivs:
        return s, None, None
    grad_pj = pj1[..., None] * g.grad_rt
    grad_pj1 = tab[2, 0][..., None] * g.grad_rt
    bracket = g.big_n * pj1 + g.big_d * pj
    grad_bracket = (g.grad_n * pj1[..., None] + g.big_n[..., None] * grad_pj1
                    + g.grad_d * pj[..., None] + g.big_d[..., None] * grad_pj)
    grad_neg = (hk[3][..., None] * g.n * (pj * g.big_n)[..., None]
                + hk[2][..., None] * (grad_pj * g.big_n[..., None] + pj[..., None] * g.grad_n)
                + 2 * hk[2][..., None] * g.n * bracket[..., None]
                + 2 * hk[1][..., None] * grad_bracket)
    dt_neg = hk[2] * tab[0, 1] * g.big_n + 2 * hk[1] * (g.big_n * tab[1, 1] + g.big_d * tab[0, 1])
    return s, -grad_neg / _FOUR_PI, -dt_neg / _FOUR_PI


def _shell_mask(params, shell, r):
    p = complex_distance(r, params.cfg).p
    return shell.active(p), p


def shell_source_density(params: WaveletParams, shell: ShellSpec, r, t):
    """Smooth volume source ``S_A^eps``; exactly zero off the shell for compact profiles."""
    r, t = _broadcast(r, t)
    act, _ = _shell_mask(params, shell, r)
    out = np.zeros(act.shape, dtype=complex)
    if np.any(act):
        out[act] = _source_terms(params, shell, r[act], t[act])[0]
    return out


def shell_source_derivatives(params: WaveletParams, shell: ShellSpec, r, t):
    """``(S, grad S, dS/dt)``; needs a profile with continuous third derivative."""
    if shell.profile.smoothness < 3:
        raise ProfileRegularityError(
            "gradient of the shell source needs a C3 profile (e.g. septic); got C"
            f"{shell.profile.smoothness}"
        )
    r, t = _broadcast(r, t)
    act, _ = _shell_mask(params, shell, r)
    s = np.zeros(act.shape, dtype=complex)
    gs = np.zeros(act.shape + (3,), dtype=complex)
    ds = np.zeros(act.shape, dtype=complex)
    if np.any(act):
        s[act], gs[act], ds[act] = _source_terms(params, shell, r[act], t[act], with_derivs=True)
    return s, gs, ds


def _regions(params, shell, r):
    p = complex_distance(r, params.cfg).p
    hval = shell.profile(p - shell.alpha)
    return hval, hval == 0.0, hval == 1.0


def regularized_field(params: WaveletParams, shell: ShellSpec, r, t):
    """``Psi_A^eps = h_1 Psi_1 + h_2 Psi_2``."""
    r, t = _broadcast(r, t)
    hval, inner, outer = _regions(params, shell, r)
    out = np.empty(hval.shape, dtype=complex)
    mid = ~(inner | outer)
    if np.any(inner):
        out[inner] = internal_field(params, r[inner], t[inner])
    if np.any(outer):
        out[outer] = external_field(params, r[outer], t[outer])
    if np.any(mid):
        h2 = hval[mid]
        out[mid] = (1 - h2) * internal_field(params, r[mid], t[mid]) + h2 * external_field(
            params, r[mid], t[mid]
        )
    return out


def _mid_jet(params, shell, r, t):
    g = _geometry(params, r)
    tau = _tau(params, t)
    h0, h1, h2 = shell.profile.derivs(g.p - shell.alpha, 2)
    jj = _jet_from_rt(jump_table(params, g.rt, tau), g.rt, g.w)
    base = internal_jet(params, r, t)
    # hessian of p = Re hess(rt)
    w, rt = g.w, g.rt
    hess_p = (np.eye(3) / rt[..., None, None]
              - w[..., :, None] * w[..., None, :] / rt[..., None, None] ** 3).real
    n = g.n
    nn = n[..., :, None] * n[..., None, :]
    cross = n[..., :, None] * jj.grad[..., None, :] + jj.grad[..., :, None] * n[..., None, :]
    e = lambda x: x[..., None]
    ee = lambda x: x[..., None, None]
    return Jet(
        val=base.val + h0 * jj.val,
        grad=base.grad + e(h1 * jj.val) * n + e(h0) * jj.grad,
        hess=(base.hess + ee(h2 * jj.val) * nn + ee(h1 * jj.val) * hess_p
              + ee(h1) * cross + ee(h0) * jj.hess),
        dt=base.dt + h0 * jj.dt,
        dt_grad=base.dt_grad + e(h1 * jj.dt) * n + e(h0) * jj.dt_grad,
        dtt=base.dtt + h0 * jj.dtt,
    )


def regularized_jet(params: WaveletParams, shell: ShellSpec, r, t) -> Jet:
    r, t = _broadcast(r, t)
    hval, inner, outer = _regions(params, shell, r)
    jet = Jet.zeros(hval.shape)
    mid = ~(inner | outer)
    if np.any(inner):
        jet.put(inner, internal_jet(params, r[inner], t[inner]))
    if np.any(outer):
        jet.put(outer, external_jet(params, r[outer], t[outer]))
    if np.any(mid):
        jet.put(mid, _mid_jet(params, shell, r[mid], t[mid]))
    return jet


def field_gradient(params: WaveletParams, shell: ShellSpec, r, t):
    """``grad Psi_A^eps = h'(p - alpha) Psi_J n + h_k grad Psi_k``."""
    return regularized_jet(params, shell, r, t).grad


class RegularizedField(ScalarField):
    def __init__(self, params, shell):
        self.params = params
        self.shell = shell

    def __call__(self, r, t):
        return regularized_field(self.params, self.shell, r, t)

    def jet(self, r, t):
        return regularized_jet(self.params, self.shell, r, t)

    def source(self, r, t):
        return shell_source_density(self.params, self.shell, r, t)
