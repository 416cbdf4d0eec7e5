"""Scenario files: flat ``key = value`` text, one key per line, ``#`` comments.

Vectors are comma-separated.  ``p_vec`` takes six reals, the real parts of
the three components followed by the imaginary parts.  Example::

    a = 0, 0, 1
    b = 2
    alpha = 0.5
    eps = 0.2
    profile = quintic
    signal = cauchy:1
    p_vec = 1, 0, 0, 0, 0, 0
    grid_origin = -1, -1, -1
    grid_spacing = 0.1
    grid_extents = 21, 21, 21
    times = 0.5
"""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .errors import TimelikeConditionError, ValidationError
from .geometry import SourceConfig
from .huygens import PlanarZone, SpheroidalZone, ZoneTransition
from .oracle import UniformGrid
from .profiles import make_profile
from .shell import ShellSpec
from .signals import CauchySignal, TabulatedSignal
from .wavelets import WaveletParams


def _floats(text, name="value"):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"{name}: expected numbers, got {text!r}") from None


@dataclass(frozen=True)
class Scenario:
    a: tuple = (0.0, 0.0, 1.0)
    b: float = 2.0
    alpha: float = 0.5
    eps: float = 0.2
    profile: str = "quintic"
    verify_profile: str = "smoothstep5"
    signal: str = "cauchy:1"
    p_vec: tuple = (1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    grid_origin: tuple = (-1.0, -1.0, -1.0)
    grid_spacing: tuple = (0.1, 0.1, 0.1)
    grid_extents: tuple = (21, 21, 21)
    times: tuple = (0.5,)
    zone: str = "spheroidal"
    zone_normal: tuple = (0.0, 0.0, 1.0)
    zone_velocity: float = 0.0
    zone_offset: float = 0.0
    zone_p1: float = None
    zone_p2: float = None
    zone_chirality: float = 0.0
    t_check: float = 0.5
    seed: int = 20240601
    base_dir: str = field(default=".", compare=False)

    def __post_init__(self):
        self.source_config()  # validates a
        if not self.cfg_timelike():
            raise TimelikeConditionError(
                f"need |a| < |b| (got |a|={np.linalg.norm(self.a):g}, b={self.b:g})"
            )
        if not 0 < self.eps < self.alpha:
            raise ValidationError(f"need 0 < eps < alpha (eps={self.eps}, alpha={self.alpha})")
        make_profile(self.profile, self.eps)
        make_profile(self.verify_profile, self.eps)
        if len(self.p_vec) != 6:
            raise ValidationError("p_vec needs 6 reals (Re x, Re y, Re z, Im x, Im y, Im z)")
        if len(self.grid_extents) != 3 or any(int(n) < 1 for n in self.grid_extents):
            raise ValidationError("grid_extents needs 3 positive integers")
        if len(self.times) == 0:
            raise ValidationError("times must list at least one time")
        if self.zone not in ("spheroidal", "planar"):
            raise ValidationError(f"unknown zone {self.zone!r} (spheroidal or planar)")
        self.transition()

    # ------------------------------------------------------------ parsing

    @classmethod
    def from_text(cls, text: str, base_dir="."):
        kw = {}
        names = {f.name: f for f in fields(cls) if f.name != "base_dir"}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"line {lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in names:
                raise ValidationError(f"line {lineno}: unknown key {key!r}")
            if key in kw:
                raise ValidationError(f"line {lineno}: duplicate key {key!r}")
            kw[key] = cls._convert(key, val)
        return cls(base_dir=str(base_dir), **kw)

    @classmethod
    def from_file(cls, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read scenario file {path}: {exc.strerror}") from None
        return cls.from_text(text, base_dir=path.parent)

    @staticmethod
    def _convert(key, val):
        vec3 = ("a", "grid_origin", "zone_normal")
        try:
            if key in vec3:
                v = _floats(val, name=key)
                if len(v) != 3:
                    raise ValidationError(f"{key}: expected 3 numbers")
                return tuple(v)
            if key == "grid_spacing":
                v = _floats(val, name=key)
                if len(v) == 1:
                    v = v * 3
                if len(v) != 3 or min(v) <= 0:
                    raise ValidationError("grid_spacing: expected 1 or 3 positive numbers")
                return tuple(v)
            if key == "grid_extents":
                v = [int(x) for x in val.split(",") if x.strip()]
                if len(v) == 1:
                    v = v * 3
                return tuple(v)
            if key == "p_vec":
                return tuple(_floats(val, name=key))
            if key == "times":
                return tuple(_floats(val, name=key))
            if key == "seed":
                return int(val)
            if key in ("profile", "verify_profile", "signal", "zone"):
                return val
            return float(val)
        except ValueError:
            raise ValidationError(f"{key}: cannot parse {val!r}") from None

    def to_text(self):
        out = []
        for f in fields(self):
            if f.name == "base_dir":
                continue
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, tuple):
                v = ", ".join(repr(x) for x in v)
            out.append(f"{f.name} = {v}")
        return "\n".join(out) + "\n"

    # ------------------------------------------------------------ objects

    def cfg_timelike(self):
        return float(np.linalg.norm(self.a)) < abs(self.b)

    def source_config(self):
        return SourceConfig(self.a, self.b)

    def driving_signal(self):
        kind, _, arg = self.signal.partition(":")
        kind = kind.strip().lower()
        if kind == "cauchy":
            try:
                n = int(arg) if arg.strip() else 1
            except ValueError:
                raise ValidationError(f"bad Cauchy order in signal {self.signal!r}") from None
            return CauchySignal(n)
        if kind == "file":
            path = Path(arg.strip())
            if not path.is_absolute():
                path = Path(self.base_dir) / path
            return TabulatedSignal.from_file(path)
        raise ValidationError(f"unknown signal {self.signal!r} (cauchy:N or file:path)")

    def params(self):
        return WaveletParams(self.source_config(), self.driving_signal())

    def shell(self, profile=None, eps=None):
        eps = self.eps if eps is None else eps
        return ShellSpec(self.alpha, make_profile(profile or self.profile, eps))

    def polarization_vector(self):
        v = np.asarray(self.p_vec, dtype=float)
        return v[:3] + 1j * v[3:]

    def grid(self, scale: int = 1):
        g = UniformGrid(self.grid_origin, self.grid_spacing, self.grid_extents)
        return g if scale == 1 else g.refined(int(scale))

    def zone_function(self):
        if self.zone == "planar":
            return PlanarZone(self.zone_normal, self.zone_velocity, self.zone_offset)
        return SpheroidalZone(self.source_config())

    def transition(self, profile=None):
        p1 = self.alpha - self.eps if self.zone_p1 is None else self.zone_p1
        p2 = self.alpha + self.eps if self.zone_p2 is None else self.zone_p2
        if not p1 < p2:
            raise ValidationError(f"zone thresholds must satisfy p1 < p2 (got {p1}, {p2})")
        prof = make_profile(profile or self.profile, (p2 - p1) / 2)
        return ZoneTransition(self.zone_function(), p1, p2, prof, self.zone_chirality)

    def with_eps(self, eps):
        return replace(self, eps=eps)
