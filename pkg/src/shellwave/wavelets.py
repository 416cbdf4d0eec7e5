"""Scalar pulsed-beam wavelets.

``Psi(rt, tau) = gt(tau - rt) / rt`` on a chosen branch of the complex
distance.  From it come the internal field ``Psi_1`` (even part in ``rt``,
regular everywhere), the external field ``Psi_2`` (standard branch) and the
jump field ``Psi_J`` (odd part).

Closed-form space-time derivatives are returned as :class:`Jet` objects.
Spatial derivatives go through ``grad rt = (r - i a)/rt`` and
``hess rt = I/rt - w w^T / rt**3`` with ``w = r - i a``.  Near the focal circle
the internal field is expanded as a power series in ``rt**2`` instead, since
differencing two nearly singular wavelets there cancels catastrophically.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularLocusError, TimelikeConditionError, ValidationError
from .geometry import (
    STANDARD,
    SourceConfig,
    branch_distance,
    complex_distance,
    disk_mask,
    singular_mask,
)
from .signals import DrivingSignal

# |rt| below SERIES_RADIUS * (|b| - a) switches Psi_1 to the series in rt**2
SERIES_RADIUS = 0.05
SERIES_TERMS = 9

_I3 = np.eye(3)


@dataclass(frozen=True)
class WaveletParams:
    cfg: SourceConfig
    sig: DrivingSignal
    cut: object = STANDARD

    def __post_init__(self):
        if not self.cfg.is_timelike:
            raise TimelikeConditionError(
                f"need |a| < |b| (got |a|={self.cfg.a_norm:g}, b={self.cfg.b:g})"
            )

    @property
    def margin(self):
        """Lower bound ``|b| - a`` on the distance of ``tau - rt`` from the real axis."""
        return abs(self.cfg.b) - self.cfg.a_norm


@dataclass
class Jet:
    """Value and closed-form derivatives of a complex scalar field at ``(r, t)``.

    ``grad`` has shape ``(..., 3)``, ``hess`` ``(..., 3, 3)``; ``dt_grad`` is
    the spatial gradient of the time derivative.
    """

    val: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    dt: np.ndarray
    dt_grad: np.ndarray
    dtt: np.ndarray

    @property
    def laplacian(self):
        return np.trace(self.hess, axis1=-2, axis2=-1)

    @property
    def box(self):
        return self.dtt - self.laplacian

    def __add__(self, other):
        return Jet(*(getattr(self, k) + getattr(other, k) for k in _JET_FIELDS))

    def __sub__(self, other):
        return Jet(*(getattr(self, k) - getattr(other, k) for k in _JET_FIELDS))

    def scaled(self, c):
        return Jet(*(c * getattr(self, k) for k in _JET_FIELDS))

    @classmethod
    def zeros(cls, shape):
        z = np.zeros(shape, dtype=complex)
        return cls(z, np.zeros(shape + (3,), complex), np.zeros(shape + (3, 3), complex),
                   z.copy(), np.zeros(shape + (3,), complex), z.copy())

    def take(self, idx):
        return Jet(*(getattr(self, k)[idx] for k in _JET_FIELDS))

    def put(self, idx, other):
        for k in _JET_FIELDS:
            getattr(self, k)[idx] = getattr(other, k)


_JET_FIELDS = ("val", "grad", "hess", "dt", "dt_grad", "dtt")


def _tau(params, t):
    return np.asarray(t, dtype=float) - 1j * params.cfg.b


def _w(r, cfg):
    return np.asarray(r, dtype=float) - 1j * cfg.a


def psi_derivative(sig, rt, tau, j, k, cache=None):
    """``d^j/d rt^j d^k/d tau^k`` of ``gt(tau - rt)/rt``.

    Leibniz rule: ``(-1)^j sum_i C(j,i) (j-i)! gt^(k+i)(tau - rt) / rt^(j-i+1)``.
    ``cache`` maps derivative order to pre-evaluated ``gt^(m)(tau - rt)``.
    """
    out = 0.0
    for i in range(j + 1):
        g = cache[k + i] if cache is not None else sig.analytic(tau - rt, k + i)
        out = out + math.comb(j, i) * math.factorial(j - i) * g / rt ** (j - i + 1)
    return (-1) ** j * out


_ORDERS = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2))


def _radial_table(sig, rt, tau, parity=None):
    """Table of ``(j, k)`` derivatives of Psi, or of its even/odd part in rt.

    parity ``+1`` gives ``(Psi(rt) + Psi(-rt))/2`` (internal field),
    ``-1`` gives ``(Psi(rt) - Psi(-rt))/2`` (jump field), ``None`` plain Psi.
    """
    cp = {m: sig.analytic(tau - rt, m) for m in range(3)}
    table = {jk: psi_derivative(sig, rt, tau, *jk, cache=cp) for jk in _ORDERS}
    if parity is None:
        return table
    cm = {m: sig.analytic(tau + rt, m) for m in range(3)}
    for j, k in _ORDERS:
        mirrored = psi_derivative(sig, -rt, tau, j, k, cache=cm)
        table[j, k] = 0.5 * (table[j, k] + parity * (-1) ** j * mirrored)
    return table


def _jet_from_rt(table, rt, w):
    g1 = w / rt[..., None]
    h1 = _I3 / rt[..., None, None] - w[..., :, None] * w[..., None, :] / rt[..., None, None] ** 3
    outer = g1[..., :, None] * g1[..., None, :]
    return Jet(
        val=table[0, 0],
        grad=table[1, 0][..., None] * g1,
        hess=table[2, 0][..., None, None] * outer + table[1, 0][..., None, None] * h1,
        dt=table[0, 1],
        dt_grad=table[1, 1][..., None] * g1,
        dtt=table[0, 2],
    )


def _series_table(sig, s, tau):
    """Derivatives in ``s = rt**2`` of the internal field near the focal circle.

    ``Psi_1 = -sum_j gt^(2j+1)(tau) s^j / (2j+1)!``
    """
    nmax = 2 * SERIES_TERMS + 3
    g = {m: sig.analytic(tau, m) for m in range(1, nmax + 1)}
    table = {}
    for m in range(3):
        for k in range(3):
            if m + k > 2:
                continue
            acc = 0.0
            for j in range(m, SERIES_TERMS + m):
                coef = math.factorial(j) / (math.factorial(j - m) * math.factorial(2 * j + 1))
                acc = acc + coef * g[2 * j + 1 + k] * s ** (j - m)
            table[m, k] = -acc
    return table


def _jet_from_s(table, w):
    # s = w.w ; grad s = 2 w ; hess s = 2 I
    outer = w[..., :, None] * w[..., None, :]
    return Jet(
        val=table[0, 0],
        grad=2 * table[1, 0][..., None] * w,
        hess=4 * table[2, 0][..., None, None] * outer + 2 * table[1, 0][..., None, None] * _I3,
        dt=table[0, 1],
        dt_grad=2 * table[1, 1][..., None] * w,
        dtt=table[0, 2],
    )


def _broadcast(r, t):
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast_shapes(r.shape[:-1], t.shape)
    return np.broadcast_to(r, shape + (3,)), np.broadcast_to(t, shape)


def _guard_focal(params, r):
    if np.any(singular_mask(r, params.cfg)):
        raise SingularLocusError("wavelet evaluated on the focal circle")


# ---------------------------------------------------------------- values


def wavelet(params: WaveletParams, r, t):
    """``Psi_B = gt(tau - rt_B) / rt_B`` on the branch of ``params.cut``."""
    r, t = _broadcast(r, t)
    _guard_focal(params, r)
    rt = branch_distance(r, params.cfg, params.cut).value
    return params.sig.analytic(_tau(params, t) - rt, 0) / rt


def external_field(params: WaveletParams, r, t):
    r, t = _broadcast(r, t)
    _guard_focal(params, r)
    rt = complex_distance(r, params.cfg).value
    return params.sig.analytic(_tau(params, t) - rt, 0) / rt


def _near_focal(params, rt):
    return np.abs(rt) < SERIES_RADIUS * params.margin


def internal_field(params: WaveletParams, r, t):
    """``Psi_1 = (Psi(rt) + Psi(-rt))/2``; regular everywhere."""
    r, t = _broadcast(r, t)
    rt = complex_distance(r, params.cfg).value
    tau = _tau(params, t)
    near = _near_focal(params, rt)
    out = np.empty(rt.shape, dtype=complex)
    far = ~near
    if np.any(far):
        x, tt = rt[far], tau[far]
        sig = params.sig
        out[far] = (sig.analytic(tt - x, 0) - sig.analytic(tt + x, 0)) / (2 * x)
    if np.any(near):
        out[near] = _series_table(params.sig, rt[near] ** 2, tau[near])[0, 0]
    return out


def _check_jump_domain(params, r):
    _guard_focal(params, r)
    if np.any(disk_mask(r, params.cfg)):
        raise SingularLocusError("jump field evaluated on the branch disk")


def jump_field(params: WaveletParams, r, t):
    """``Psi_J = (Psi(rt) - Psi(-rt))/2`` (requires ``p > 0``)."""
    r, t = _broadcast(r, t)
    _check_jump_domain(params, r)
    rt = complex_distance(r, params.cfg).value
    tau = _tau(params, t)
    sig = params.sig
    return (sig.analytic(tau - rt, 0) + sig.analytic(tau + rt, 0)) / (2 * rt)


def jump_field_deriv(params: WaveletParams, r, t):
    """Complex ``rt`` derivative ``Psi_J' = (Psi'(rt) + Psi'(-rt))/2``."""
    r, t = _broadcast(r, t)
    _check_jump_domain(params, r)
    rt = complex_distance(r, params.cfg).value
    tau = _tau(params, t)
    sig = params.sig
    plus = psi_derivative(sig, rt, tau, 1, 0)
    minus = psi_derivative(sig, -rt, tau, 1, 0)
    return 0.5 * (plus + minus)


# ---------------------------------------------------------------- jets


def external_jet(params: WaveletParams, r, t) -> Jet:
    r, t = _broadcast(r, t)
    _guard_focal(params, r)
    rt = complex_distance(r, params.cfg).value
    table = _radial_table(params.sig, rt, _tau(params, t))
    return _jet_from_rt(table, rt, _w(r, params.cfg))


def jump_jet(params: WaveletParams, r, t) -> Jet:
    r, t = _broadcast(r, t)
    _check_jump_domain(params, r)
    rt = complex_distance(r, params.cfg).value
    table = _radial_table(params.sig, rt, _tau(params, t), parity=-1)
    return _jet_from_rt(table, rt, _w(r, params.cfg))


def jump_table(params: WaveletParams, rt, tau):
    """Radial derivative table of ``Psi_J`` at given complex distance and time."""
    return _radial_table(params.sig, rt, tau, parity=-1)


def internal_jet(params: WaveletParams, r, t) -> Jet:
    r, t = _broadcast(r, t)
    rt = complex_distance(r, params.cfg).value
    tau = _tau(params, t)
    w = _w(r, params.cfg)
    near = _near_focal(params, rt)
    jet = Jet.zeros(rt.shape)
    far = ~near
    if np.any(far):
        table = _radial_table(params.sig, rt[far], tau[far], parity=+1)
        jet.put(far, _jet_from_rt(table, rt[far], w[far]))
    if np.any(near):
        table = _series_table(params.sig, rt[near] ** 2, tau[near])
        jet.put(near, _jet_from_s(table, w[near]))
    return jet


# ---------------------------------------------------------------- field objects


class ScalarField:
    """A complex scalar field with a value evaluator and a closed-form jet."""

    def __call__(self, r, t):
        raise NotImplementedError

    def jet(self, r, t) -> Jet:
        raise NotImplementedError


class InternalField(ScalarField):
    def __init__(self, params):
        self.params = params

    def __call__(self, r, t):
        return internal_field(self.params, r, t)

    def jet(self, r, t):
        return internal_jet(self.params, r, t)


class ExternalField(ScalarField):
    def __init__(self, params):
        self.params = params

    def __call__(self, r, t):
        return external_field(self.params, r, t)

    def jet(self, r, t):
        return external_jet(self.params, r, t)


class JumpField(ScalarField):
    def __init__(self, params):
        self.params = params

    def __call__(self, r, t):
        return jump_field(self.params, r, t)

    def jet(self, r, t):
        return jump_jet(self.params, r, t)


class BranchWavelet(ScalarField):
    """Value-only wavelet on an arbitrary branch (its jet would jump across the cut)."""

    def __init__(self, params):
        self.params = params

    def __call__(self, r, t):
        return wavelet(self.params, r, t)


