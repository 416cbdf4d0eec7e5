"""Driving signals and their analytic signals.

The analytic signal of a real driving signal ``g`` is the Cauchy integral

    gt(tau) = 1/(2 pi i) * integral g(t') dt' / (tau - t')

evaluated at complex time ``tau = t - i b``.  Its real and imaginary parts at
``tau = t - i b`` are the Poisson-smoothed signal ``g_b`` and the smoothed
Hilbert transform ``gbar_b``.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import QuadratureError, SingularEvaluationError, ValidationError

_TWO_PI_I = 2j * np.pi


def complex_time(t, b):
    return np.asarray(t, dtype=float) - 1j * np.asarray(b, dtype=float)


class DrivingSignal:
    """Base class: subclasses implement ``analytic(tau, order)``."""

    def analytic(self, tau, order=0):
        raise NotImplementedError

    def __call__(self, tau):
        return self.analytic(tau, 0)


@dataclass(frozen=True)
class CauchySignal(DrivingSignal):
    """Order-``n`` derivative of the Cauchy kernel ``1/(2 pi i tau)``."""

    n: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError("Cauchy order must be a non-negative integer")

    def analytic(self, tau, order=0):
        tau = np.asarray(tau, dtype=complex)
        if np.any(tau == 0):
            raise SingularEvaluationError("Cauchy kernel evaluated at tau = 0")
        m = self.n + order
        return (-1) ** m * math.factorial(m) / (_TWO_PI_I * tau ** (m + 1))


def _power_integral(u0, u1, m):
    """Integral of u**-m from u1 to u0 along a path avoiding u = 0."""
    if m == 1:
        return np.log(u0 / u1)
    return (u0 ** (1 - m) - u1 ** (1 - m)) / (1 - m)


class TabulatedSignal(DrivingSignal):
    """Piecewise-linear signal, zero outside ``[t[0], t[-1]]``.

    The Cauchy integral is done exactly segment by segment: on a segment
    where ``g = A - s u`` with ``u = tau - t'`` the kernel integrals reduce to
    integrals of powers of ``u``.
    """

    chunk = 4096

    def __init__(self, times, values):
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValidationError("tabulated signal needs matching 1-D arrays of length >= 2")
        if not np.all(np.diff(times) > 0):
            raise ValidationError("tabulated times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValidationError("tabulated values must be finite")
        self.times = times
        self.values = values
        self._t0 = times[:-1]
        self._t1 = times[1:]
        self._g0 = values[:-1]
        self._slope = np.diff(values) / np.diff(times)

    @classmethod
    def from_file(cls, path):
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise ValidationError(f"{path}: expected two columns (t, g)")
        return cls(data[:, 0], data[:, 1])

    @property
    def support(self):
        return float(self.times[0]), float(self.times[-1])

    def sample(self, t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, self.times, self.values, left=0.0, right=0.0)

    def _check(self, tau):
        lo, hi = self.support
        bad = (tau.imag == 0) & (tau.real >= lo) & (tau.real <= hi)
        if np.any(bad):
            raise SingularEvaluationError("analytic signal evaluated on the real support of g")

    def _kernel_moment(self, tau, k):
        # integral of g(t') / (tau - t')**(k+1) dt'
        u0 = tau[:, None] - self._t0
        u1 = tau[:, None] - self._t1
        amp = self._g0 + self._slope * u0
        term = amp * _power_integral(u0, u1, k + 1) - self._slope * _power_integral(u0, u1, k)
        return term.sum(axis=1)

    def analytic(self, tau, order=0):
        tau = np.asarray(tau, dtype=complex)
        self._check(tau)
        flat = tau.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for start in range(0, flat.size, self.chunk):
            sl = slice(start, start + self.chunk)
            out[sl] = self._kernel_moment(flat[sl], order)
        scale = (-1) ** order * math.factorial(order) / _TWO_PI_I
        return (scale * out).reshape(tau.shape)


class FunctionSignal(DrivingSignal):
    """Compactly supported callable ``g`` integrated by adaptive quadrature.

    Uses QUADPACK's adaptive Gauss-Kronrod rule on the real and imaginary
    parts of the kernel.  Slow (one quadrature per point) but independent of
    any tabulation.
    """

    def __init__(self, func: Callable, support, rtol=1e-10, max_evals=100_000, points=None):
        lo, hi = map(float, support)
        if not hi > lo:
            raise ValidationError("support must be a non-empty bounded interval")
        self.func = func
        self.support = (lo, hi)
        self.rtol = rtol
        self.limit = max(1, max_evals // 21)
        self.points = points

    def _quad(self, f, tau, order):
        lo, hi = self.support
        kw = dict(epsabs=0.0, epsrel=self.rtol, limit=self.limit, full_output=1)
        if self.points is not None:
            kw["points"] = self.points
        parts = []
        for fn in (lambda s: f(s).real, lambda s: f(s).imag):
            res = integrate.quad(fn, lo, hi, **kw)
            val, err = res[0], res[1]
            if len(res) > 3 and val != 0 and err > 10 * self.rtol * abs(val) + 1e-300:
                raise QuadratureError(
                    f"quadrature did not converge at tau={tau} (order {order})",
                    achieved=err / abs(val),
                )
            parts.append(val)
        return parts[0] + 1j * parts[1]

    def analytic(self, tau, order=0):
        tau = np.asarray(tau, dtype=complex)
        lo, hi = self.support
        if np.any((tau.imag == 0) & (tau.real >= lo) & (tau.real <= hi)):
            raise SingularEvaluationError("analytic signal evaluated on the real support of g")
        scale = (-1) ** order * math.factorial(order) / _TWO_PI_I
        out = np.empty(tau.shape, dtype=complex)
        for idx, z in np.ndenumerate(tau):
            out[idx] = self._quad(lambda s: self.func(s) / (z - s) ** (order + 1), z, order)
        return scale * out


def analytic_signal(sig: DrivingSignal, tau):
    return sig.analytic(tau, 0)


def analytic_signal_deriv(sig: DrivingSignal, tau, order=1):
    """``d^order gt / d tau^order``."""
    if order < 0:
        raise ValidationError("derivative order must be non-negative")
    return sig.analytic(tau, order)


def smoothed_parts(sig: DrivingSignal, t, b):
    """Return ``(g_b(t), gbar_b(t))`` with ``gt(t - i b) = g_b + i gbar_b``."""
    b = np.asarray(b, dtype=float)
    if np.any(b == 0):
        raise ValidationError("smoothing scale b must be non-zero")
    val = sig.analytic(complex_time(t, b), 0)
    return val.real, val.imag
