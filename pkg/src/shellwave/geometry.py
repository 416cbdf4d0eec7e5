"""Complex distance, branch cuts and oblate spheroidal coordinates.

The complex distance from the imaginary source point ``i a`` to a real
observation point ``r`` is ``rt = sqrt((r - i a).(r - i a)) = p - i q``.
Its real and imaginary parts are the oblate spheroidal coordinates about the
``a`` axis: level sets of ``p`` are confocal spheroids, level sets of ``q``
orthogonal hyperboloids, and the common focal set is the circle
``C = {a.r = 0, |r| = |a|}``.

All functions accept points of shape ``(..., 3)`` and broadcast.
"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable

import numpy as np

from .errors import SingularLocusError, ValidationError

# fraction of |a| defining the guard tubes around C and D
GUARD_FRACTION = 1e-9


def _vec3(v, name="vector"):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValidationError(f"{name} must be a 3-vector, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class SourceConfig:
    """Imaginary space-time displacement ``(a, b)`` of the source point."""

    a: np.ndarray
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", _vec3(self.a, "a"))
        object.__setattr__(self, "b", float(self.b))

    @property
    def a_norm(self) -> float:
        return float(np.linalg.norm(self.a))

    @property
    def axis(self) -> np.ndarray:
        """Unit vector along ``a`` (``z`` when ``a = 0``)."""
        n = self.a_norm
        if n == 0.0:
            return np.array([0.0, 0.0, 1.0])
        return self.a / n

    @property
    def is_timelike(self) -> bool:
        return self.a_norm < abs(self.b)

    def frame(self):
        """Right-handed orthonormal frame ``(e1, e2, axis)`` used for the azimuth."""
        ax = self.axis
        helper = np.array([1.0, 0.0, 0.0])
        if abs(ax @ helper) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        e1 = helper - (helper @ ax) * ax
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(ax, e1)
        return e1, e2, ax

    @property
    def guard_distance(self) -> float:
        return GUARD_FRACTION * self.a_norm


# ---------------------------------------------------------------- branch cuts


@dataclass(frozen=True)
class StandardDisk:
    """The standard branch ``p >= 0`` with cut on the disk ``D``."""

    def inside(self, r, cfg, p=None):
        return np.zeros(np.shape(r)[:-1], dtype=bool)


@dataclass(frozen=True)
class UpperHemispheroid:
    """Cut on the upper half of the spheroid ``p = alpha`` plus its apron."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError("hemispheroid cut needs alpha > 0")

    def inside(self, r, cfg, p=None):
        if p is None:
            p = complex_distance(r, cfg).p
        return (p < self.alpha) & (np.asarray(r, float) @ cfg.axis > 0)


@dataclass(frozen=True)
class LowerHemispheroid:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError("hemispheroid cut needs alpha > 0")

    def inside(self, r, cfg, p=None):
        if p is None:
            p = complex_distance(r, cfg).p
        return (p < self.alpha) & (np.asarray(r, float) @ cfg.axis < 0)


@dataclass(frozen=True)
class GeneralMembrane:
    """Arbitrary deformation of ``D`` given by the swept-volume predicate.

    ``predicate(r)`` must return a boolean array, ``True`` inside the volume
    swept out while deforming the disk to the membrane.
    """

    predicate: Callable

    def inside(self, r, cfg, p=None):
        return np.asarray(self.predicate(np.asarray(r, float)), dtype=bool)


STANDARD = StandardDisk()


@dataclass(frozen=True)
class ComplexDistance:
    p: np.ndarray
    q: np.ndarray
    branch: object = field(default=STANDARD)

    @property
    def value(self):
        return self.p - 1j * self.q


def _rt_standard(r, a):
    r = np.asarray(r, dtype=float)
    a = np.asarray(a, dtype=float)
    dot = lambda u, v: np.einsum("...i,...i->...", u, v)
    s = dot(r, r) - dot(a, a) - 2j * dot(r, a)
    rt = np.sqrt(s)
    p = rt.real
    q = -rt.imag
    # on the disk itself take the limit from the a.r > 0 side
    q = np.where(p == 0.0, np.abs(q), q)
    return p, q


def complex_distance(r, cfg: SourceConfig) -> ComplexDistance:
    """Standard branch of the complex distance (``p >= 0``)."""
    p, q = _rt_standard(r, cfg.a)
    return ComplexDistance(p, q, STANDARD)


def branch_distance(r, cfg: SourceConfig, cut) -> ComplexDistance:
    """Complex distance on the branch whose cut is ``cut``.

    Equal to the standard branch outside the swept volume of the cut and to its
    negative inside.
    """
    p, q = _rt_standard(r, cfg.a)
    flip = cut.inside(r, cfg, p)
    sign = np.where(flip, -1.0, 1.0)
    return ComplexDistance(sign * p, sign * q, cut)


def rt_value(r, cfg):
    p, q = _rt_standard(r, cfg.a)
    return p - 1j * q


# ---------------------------------------------------------------- coordinates


@dataclass(frozen=True)
class SpheroidalPoint:
    p: np.ndarray
    q: np.ndarray
    phi: np.ndarray


def spheroidal_coords(r, cfg: SourceConfig) -> SpheroidalPoint:
    r = np.asarray(r, dtype=float)
    p, q = _rt_standard(r, cfg.a)
    e1, e2, _ = cfg.frame()
    phi = np.mod(np.arctan2(r @ e2, r @ e1), 2 * np.pi)
    return SpheroidalPoint(p, q, phi)


def cartesian(pt: SpheroidalPoint, cfg: SourceConfig):
    """Inverse of :func:`spheroidal_coords`; needs ``a > 0``."""
    a = cfg.a_norm
    if a == 0.0:
        raise ValidationError("inverse spheroidal map needs a > 0")
    p = np.asarray(pt.p, dtype=float)
    q = np.asarray(pt.q, dtype=float)
    phi = np.asarray(pt.phi, dtype=float)
    if np.any(p < 0):
        raise ValidationError("spheroidal coordinate p must be >= 0")
    if np.any(np.abs(q) > a * (1 + 1e-12)):
        raise ValidationError("spheroidal coordinate q must lie in [-a, a]")
    e1, e2, ax = cfg.frame()
    zeta = p * q / a
    rho = np.sqrt(p**2 + a**2) * np.sqrt(np.clip(a**2 - q**2, 0.0, None)) / a
    return (
        (rho * np.cos(phi))[..., None] * e1
        + (rho * np.sin(phi))[..., None] * e2
        + zeta[..., None] * ax
    )


def focal_distance(r, cfg: SourceConfig):
    """Euclidean distance from ``r`` to the focal circle (to the origin if a = 0)."""
    r = np.asarray(r, dtype=float)
    ax = cfg.axis
    zeta = r @ ax
    rho = np.linalg.norm(r - zeta[..., None] * ax, axis=-1)
    return np.hypot(rho - cfg.a_norm, zeta)


def singular_mask(r, cfg: SourceConfig):
    """True where ``r`` lies inside the guard tube around the focal circle."""
    return focal_distance(r, cfg) <= cfg.guard_distance


def disk_mask(r, cfg: SourceConfig, p=None):
    """True on the guard slab around the branch disk (``p`` below the guard)."""
    if p is None:
        p = complex_distance(r, cfg).p
    if cfg.a_norm == 0.0:
        return np.zeros(np.shape(p), dtype=bool)
    return p < cfg.guard_distance


def check_off_focal_circle(r, cfg):
    if np.any(singular_mask(r, cfg)):
        raise SingularLocusError("evaluation point on the focal circle")


def normal_field(r, cfg: SourceConfig):
    """Unnormalized spheroid normal ``n = grad p`` with ``|n|^2`` and ``div n``."""
    check_off_focal_circle(r, cfg)
    r = np.asarray(r, dtype=float)
    p, q = _rt_standard(r, cfg.a)
    d = p**2 + q**2
    n = (p[..., None] * r + q[..., None] * cfg.a) / d[..., None]
    n2 = (p**2 + cfg.a_norm**2) / d
    div_n = 2 * p / d
    return n, n2, div_n


class Region(IntEnum):
    INTERIOR = 0
    SHELL = 1
    EXTERIOR = 2


@dataclass(frozen=True)
class RegionInfo:
    region: np.ndarray
    p: np.ndarray
    focal_distance: np.ndarray


def classify_region(r, cfg: SourceConfig, alpha: float, eps: float) -> RegionInfo:
    if not 0 < eps < alpha:
        raise ValidationError(f"shell half-width must satisfy 0 < eps < alpha (eps={eps}, alpha={alpha})")
    p = complex_distance(r, cfg).p
    region = np.full(np.shape(p), Region.SHELL, dtype=int)
    region[p < alpha - eps] = Region.INTERIOR
    region[p > alpha + eps] = Region.EXTERIOR
    return RegionInfo(region, p, focal_distance(r, cfg))
