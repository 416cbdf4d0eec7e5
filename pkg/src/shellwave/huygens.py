"""Extended Huygens sources on transition shells.

A zone function ``p(r, t)`` and thresholds ``p1 < p2`` split space into
``V1 = {p < p1}``, the transition shell ``VT = {p1 <= p <= p2}`` and
``V2 = {p > p2}``.  Two prescribed fields are blended as
``F = h_k F_k``, ``G = h_k G_k`` with ``h2`` rising from 0 to 1 across the
shell and ``h1 = 1 - h2``.  The extra sources of the blend depend only on
the jump ``F_J = F2 - F1``, ``G_J = G2 - G1``::

    4 pi rho_T = grad h2 . F_J
    4 pi J_T   = -dh2/dt F_J - i grad h2 x G_J

Real parts are the electric sources and imaginary parts the magnetic ones.
Blending Hertz potentials instead (``Z = h_k Z_k``) gives purely bound
sources with polarization

    4 pi P = 2 dh2/dt dZ_J/dt - 2 (grad h2 . grad) Z_J + Z_J box h2

where ``box h2 = d2h2/dt2 - lap h2``; the last term reduces to
``-Z_J lap h2`` only for time-independent transitions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import SourceConfig, complex_distance
from .hertz import HertzPotential, em_fields
from .profiles import TransitionProfile, make_profile, SmoothstepProfile
from .wavelets import _broadcast, _w

# ---------------------------------------------------------------- zone functions


class ZoneFunction:
    """Real scalar ``p(r, t)`` with closed-form first and second derivatives."""

    static = False

    def value(self, r, t):
        raise NotImplementedError

    def grad(self, r, t):
        raise NotImplementedError

    def dt(self, r, t):
        raise NotImplementedError

    def laplacian(self, r, t):
        raise NotImplementedError

    def dtt(self, r, t):
        raise NotImplementedError


@dataclass(frozen=True)
class PlanarZone(ZoneFunction):
    """``p = normal . r - velocity t - offset``; a plane moving along its normal."""

    normal: tuple = (0.0, 0.0, 1.0)
    velocity: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if n.shape != (3,) or norm == 0:
            raise ValidationError("planar zone needs a nonzero normal 3-vector")
        object.__setattr__(self, "normal", tuple(n / norm))

    @property
    def static(self):
        return self.velocity == 0.0

    def value(self, r, t):
        r, t = _broadcast(r, t)
        return r @ np.asarray(self.normal) - self.velocity * t - self.offset

    def grad(self, r, t):
        r, t = _broadcast(r, t)
        return np.broadcast_to(np.asarray(self.normal), r.shape).copy()

    def dt(self, r, t):
        r, t = _broadcast(r, t)
        return np.full(t.shape, -float(self.velocity))

    def laplacian(self, r, t):
        r, t = _broadcast(r, t)
        return np.zeros(t.shape)

    def dtt(self, r, t):
        return self.laplacian(r, t)


@dataclass(frozen=True)
class SpheroidalZone(ZoneFunction):
    """``p = Re rt``: level sets are the oblate spheroids of the source geometry.

    The gradient ``n = Re grad rt`` is not normalized; ``|n|^2 = (p^2+a^2)/(p^2+q^2)``.
    """

    cfg: SourceConfig
    static = True

    def _rt(self, r):
        return complex_distance(r, self.cfg)

    def value(self, r, t):
        r, t = _broadcast(r, t)
        return self._rt(r).p

    def grad(self, r, t):
        r, t = _broadcast(r, t)
        return (_w(r, self.cfg) / self._rt(r).value[..., None]).real

    def dt(self, r, t):
        r, t = _broadcast(r, t)
        return np.zeros(t.shape)

    def laplacian(self, r, t):
        # lap rt = 2 / rt, so lap p = 2 Re(1/rt) = 2p / (p^2 + q^2)
        r, t = _broadcast(r, t)
        cd = self._rt(r)
        return 2 * cd.p / (cd.p**2 + cd.q**2)

    def dtt(self, r, t):
        return self.dt(r, t)


# ---------------------------------------------------------------- transition


@dataclass
class TransitionJet:
    """``h2`` and the derivatives entering the transitional sources."""

    val: np.ndarray
    grad: np.ndarray
    dt: np.ndarray
    lap: np.ndarray
    dtt: np.ndarray

    @property
    def box(self):
        return self.dtt - self.lap


@dataclass(frozen=True)
class ZoneTransition:
    """``h2(r, t) = c(h(p(r, t) - (p1 + p2)/2))`` with a profile of half-width ``(p2 - p1)/2``.

    ``c(h) = h + i chirality h (1 - h)`` keeps ``h2`` equal to 0 and 1 outside
    the shell; a nonzero ``chirality`` makes the shell a chiral medium.
    """

    zone: ZoneFunction
    p1: float
    p2: float
    profile: object = 2
    chirality: float = 0.0

    def __post_init__(self):
        if not self.p1 < self.p2:
            raise ValidationError(f"zone thresholds must satisfy p1 < p2 (got {self.p1}, {self.p2})")
        eps = (self.p2 - self.p1) / 2
        prof = self.profile
        if isinstance(prof, (int, np.integer)):
            prof = SmoothstepProfile(eps, int(prof))
        elif isinstance(prof, str):
            prof = make_profile(prof, eps)
        elif isinstance(prof, TransitionProfile):
            if not np.isclose(prof.eps, eps, rtol=1e-12, atol=0.0):
                raise ValidationError("profile half-width must equal (p2 - p1)/2")
        else:
            raise ValidationError("profile must be a smoothstep order, a name or a TransitionProfile")
        object.__setattr__(self, "profile", prof)

    @property
    def center(self):
        return 0.5 * (self.p1 + self.p2)

    @property
    def eps(self):
        return 0.5 * (self.p2 - self.p1)

    @property
    def is_real(self):
        return self.chirality == 0.0

    def _lift(self, h):
        k = self.chirality
        if k == 0.0:
            return h, np.ones_like(h), np.zeros_like(h)
        c = h + 1j * k * h * (1 - h)
        return c, 1 + 1j * k * (1 - 2 * h), np.full(np.shape(h), -2j * k)

    def __call__(self, r, t):
        p = self.zone.value(r, t)
        return self._lift(self.profile(p - self.center))[0]

    def active(self, r, t):
        """Points where ``h2`` is not locally constant."""
        p = self.zone.value(r, t)
        if not self.profile.compact:
            return np.ones(np.shape(p), dtype=bool)
        return np.abs(p - self.center) < self.eps

    def jet(self, r, t) -> TransitionJet:
        r, t = _broadcast(r, t)
        z = self.zone
        p = z.value(r, t)
        h0, h1, h2 = self.profile.derivs(p - self.center, 2)
        c0, c1, c2 = self._lift(h0)
        gp, pt = z.grad(r, t), z.dt(r, t)
        gp2 = np.sum(gp * gp, axis=-1)
        e = lambda x: x[..., None]
        return TransitionJet(
            val=c0,
            grad=e(c1 * h1) * gp,
            dt=c1 * h1 * pt,
            lap=c2 * h1**2 * gp2 + c1 * (h2 * gp2 + h1 * z.laplacian(r, t)),
            dtt=c2 * (h1 * pt) ** 2 + c1 * (h2 * pt**2 + h1 * z.dtt(r, t)),
        )


# ---------------------------------------------------------------- prescribed fields


def _zero_rho(r, t):
    r, t = _broadcast(r, t)
    return np.zeros(t.shape, dtype=complex)


def _zero_j(r, t):
    r, t = _broadcast(r, t)
    return np.zeros(r.shape, dtype=complex)


@dataclass
class PrescribedField:
    """Complex field pair ``(F, G)`` with its charge-current ``(rho, J)``.

    ``rho`` and ``J`` default to zero, i.e. the field is taken to be
    source-free wherever it is evaluated.
    """

    F: object
    G: object
    rho: object = None
    J: object = None

    def __post_init__(self):
        if self.rho is None:
            self.rho = _zero_rho
        if self.J is None:
            self.J = _zero_j

    @classmethod
    def from_hertz(cls, Z: HertzPotential):
        """Fields of a Hertz potential; their free sources vanish."""
        return cls(lambda r, t: em_fields(Z, r, t).F, lambda r, t: em_fields(Z, r, t).G)

    def both(self, r, t):
        return self.F(r, t), self.G(r, t)


def _blend(transition, f1, f2, r, t, fn, ncomp):
    """``h1 fn(f1) + h2 fn(f2)``, evaluating each side only where it contributes."""
    r, t = _broadcast(r, t)
    h2 = transition(r, t)
    out = np.zeros(h2.shape + ncomp, dtype=complex)
    use1, use2 = h2 != 1.0, h2 != 0.0
    if np.any(use1):
        out[use1] += ((1 - h2[use1]).reshape(-1, *([1] * len(ncomp)))) * fn(f1)(r[use1], t[use1])
    if np.any(use2):
        out[use2] += (h2[use2].reshape(-1, *([1] * len(ncomp)))) * fn(f2)(r[use2], t[use2])
    return out


class InterpolatedField:
    """``F = h_k F_k``, ``G = h_k G_k``; equals field 1 in V1 and field 2 in V2."""

    def __init__(self, transition: ZoneTransition, field1: PrescribedField, field2: PrescribedField):
        self.transition = transition
        self.fields = (field1, field2)

    def F(self, r, t):
        return _blend(self.transition, *self.fields, r, t, lambda f: f.F, (3,))

    def G(self, r, t):
        return _blend(self.transition, *self.fields, r, t, lambda f: f.G, (3,))

    def sources(self, r, t):
        return total_sources(self.transition, self.fields, r, t)


def interpolate(transition: ZoneTransition, fields) -> InterpolatedField:
    f1, f2 = fields
    return InterpolatedField(transition, f1, f2)


# ---------------------------------------------------------------- transitional sources


@dataclass
class TransitionalSources:
    rho: np.ndarray
    J: np.ndarray

    @property
    def rho_e(self):
        return self.rho.real

    @property
    def J_e(self):
        return self.J.real

    @property
    def rho_m(self):
        return self.rho.imag

    @property
    def J_m(self):
        return self.J.imag


def _jump(fields, r, t):
    f1, f2 = fields
    F1, G1 = f1.both(r, t)
    F2, G2 = f2.both(r, t)
    return F2 - F1, G2 - G1


def transitional_sources(transition: ZoneTransition, fields, r, t) -> TransitionalSources:
    """``(rho_T, J_T)``; exact zeros outside the transition shell."""
    r, t = _broadcast(r, t)
    act = transition.active(r, t)
    rho = np.zeros(act.shape, dtype=complex)
    J = np.zeros(act.shape + (3,), dtype=complex)
    if np.any(act):
        ra, ta = r[act], t[act]
        hj = transition.jet(ra, ta)
        FJ, GJ = _jump(fields, ra, ta)
        rho[act] = np.sum(hj.grad * FJ, axis=-1) / (4 * np.pi)
        J[act] = (-hj.dt[..., None] * FJ - 1j * np.cross(hj.grad, GJ)) / (4 * np.pi)
    return TransitionalSources(rho, J)


def total_sources(transition: ZoneTransition, fields, r, t):
    """``rho = h_k rho_k + rho_T`` and ``J = h_k J_k + J_T``."""
    f1, f2 = fields
    rho_i = _blend(transition, f1, f2, r, t, lambda f: f.rho, ())
    j_i = _blend(transition, f1, f2, r, t, lambda f: f.J, (3,))
    ts = transitional_sources(transition, fields, r, t)
    return rho_i + ts.rho, j_i + ts.J


# ---------------------------------------------------------------- surface limit


@dataclass
class SurfaceSources:
    sigma: np.ndarray
    K: np.ndarray

    @property
    def sigma_e(self):
        return self.sigma.real

    @property
    def K_e(self):
        return self.K.real

    @property
    def sigma_m(self):
        return self.sigma.imag

    @property
    def K_m(self):
        return self.K.imag


def surface_limit(zone: ZoneFunction, fields, r, t) -> SurfaceSources:
    """Huygens surface sources ``4 pi sigma = n . F_J``, ``4 pi K = -i n x G_J``.

    ``n = grad p`` (not normalized), which is the limit of ``grad h2`` per unit ``p``.
    """
    if not zone.static:
        raise ValidationError("surface limit needs a time-independent zone function")
    r, t = _broadcast(r, t)
    n = zone.grad(r, t)
    FJ, GJ = _jump(fields, r, t)
    sigma = np.sum(n * FJ, axis=-1) / (4 * np.pi)
    K = -1j * np.cross(n, GJ) / (4 * np.pi)
    return SurfaceSources(sigma, K)


# ---------------------------------------------------------------- diagnostics


@dataclass
class MagneticReport:
    max_rho_m: float
    max_J_m: float
    nomag_holds: bool
    E_dot_B: np.ndarray
    FJ2: np.ndarray

    @property
    def min_abs_FJ2(self):
        return float(np.min(np.abs(self.FJ2))) if self.FJ2.size else float("nan")

    @property
    def is_null(self):
        return bool(np.all(np.abs(self.FJ2) == 0))

    def to_text(self):
        return (
            f"max_rho_m: {self.max_rho_m:.6e}\nmax_J_m: {self.max_J_m:.6e}\n"
            f"nomag_holds: {str(self.nomag_holds).lower()}\n"
            f"max_abs_E_dot_B: {np.max(np.abs(self.E_dot_B)) if self.E_dot_B.size else 0:.6e}\n"
            f"min_abs_FJ2: {self.min_abs_FJ2:.6e}\n"
        )


def magnetic_diagnostics(transition: ZoneTransition, fields, points, t, tol=1e-12) -> MagneticReport:
    """Magnetic transitional sources, ``E_J . B_J`` and the scalar ``F_J . F_J`` at sample points.

    ``F_J . F_J = D_J^2 - B_J^2 + 2i D_J . B_J``; it vanishes only for null jumps.
    """
    r, t = _broadcast(points, t)
    ts = transitional_sources(transition, fields, r, t)
    FJ, GJ = _jump(fields, r, t)
    mr = float(np.max(np.abs(ts.rho_m))) if ts.rho.size else 0.0
    mj = float(np.max(np.abs(ts.J_m))) if ts.J.size else 0.0
    e_dot_b = np.sum(GJ.real * FJ.imag, axis=-1)
    fj2 = np.sum(FJ * FJ, axis=-1)
    return MagneticReport(mr, mj, max(mr, mj) <= tol, e_dot_b, fj2)


# ---------------------------------------------------------------- Hertz interpolation


def hertz_interpolation(transition: ZoneTransition, Z1: HertzPotential, Z2: HertzPotential, r, t):
    """Transitional polarization ``P`` of ``Z = h_k Z_k``; exact zeros off the shell."""
    r, t = _broadcast(r, t)
    act = transition.active(r, t)
    out = np.zeros(act.shape + (3,), dtype=complex)
    if not np.any(act):
        return out
    ra, ta = r[act], t[act]
    hj = transition.jet(ra, ta)
    j1, j2 = Z1.jet(ra, ta), Z2.jet(ra, ta)
    p1, p2 = Z1.p_vec, Z2.p_vec
    e = lambda x: x[..., None]
    zj = e(j2.val) * p2 - e(j1.val) * p1
    zj_t = e(j2.dt) * p2 - e(j1.dt) * p1
    dir_d = e(np.sum(hj.grad * j2.grad, axis=-1)) * p2 - e(np.sum(hj.grad * j1.grad, axis=-1)) * p1
    four_pi_p = 2 * e(hj.dt) * zj_t - 2 * dir_d + zj * e(hj.box)
    out[act] = four_pi_p / (4 * np.pi)
    return out


class InterpolatedHertz:
    """``Z = h_k Z_k`` as a vector field, with its transitional polarization."""

    def __init__(self, transition: ZoneTransition, Z1: HertzPotential, Z2: HertzPotential):
        self.transition = transition
        self.Z = (Z1, Z2)

    def __call__(self, r, t):
        return _blend(self.transition, *self.Z, r, t, lambda z: z, (3,))

    def polarization(self, r, t):
        return hertz_interpolation(self.transition, *self.Z, r, t)
