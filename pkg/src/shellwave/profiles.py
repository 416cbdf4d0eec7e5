"""Smooth surrogates ``h`` for the Heaviside step.

All profiles satisfy ``h(p) + h(-p) = 1``; the polynomial smoothsteps are
also compact: ``h = 0`` for ``p <= -eps`` and ``h = 1`` for ``p >= eps``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ValidationError


def smoothstep_polynomial(order: int) -> Polynomial:
    """Generalized smoothstep on ``[0, 1]`` whose first ``order`` derivatives vanish at both ends.

    ``order=2`` is the quintic ``u^3 (10 - 15u + 6u^2)``, ``order=3`` the
    septic ``u^4 (35 - 84u + 70u^2 - 20u^3)``.
    """
    n = order
    coef = np.zeros(2 * n + 2)
    for k in range(n + 1):
        coef[n + 1 + k] = math.comb(n + k, k) * math.comb(2 * n + 1, n - k) * (-1) ** k
    return Polynomial(coef)


class TransitionProfile:
    eps: float
    smoothness: int  # h is C^smoothness
    compact: bool

    def derivs(self, p, nmax=2):
        """Return ``[h, h', ..., h^(nmax)]`` evaluated at ``p``."""
        raise NotImplementedError

    def __call__(self, p):
        return self.derivs(p, 0)[0]


@dataclass(frozen=True)
class SmoothstepProfile(TransitionProfile):
    eps: float
    order: int = 2
    _poly: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.eps > 0:
            raise ValidationError("profile half-width eps must be positive")
        if self.order < 1:
            raise ValidationError("smoothstep order must be >= 1")
        poly = smoothstep_polynomial(self.order)
        ders = [poly]
        for _ in range(2 * self.order + 1):
            ders.append(ders[-1].deriv())
        object.__setattr__(self, "_poly", ders)

    @property
    def smoothness(self):
        return self.order

    @property
    def compact(self):
        return True

    @property
    def name(self):
        return {2: "quintic", 3: "septic"}.get(self.order, f"smoothstep{self.order}")

    def derivs(self, p, nmax=2):
        p = np.asarray(p, dtype=float)
        # evaluate on the left half and reflect so that h(p) + h(-p) = 1,
        # h' is even, h'' is odd, ... hold to the last bit
        x = -np.abs(p)
        u = np.clip((x + self.eps) / (2 * self.eps), 0.0, 1.0)
        inside = np.abs(p) < self.eps
        right = p > 0
        out = []
        for k in range(nmax + 1):
            if k < len(self._poly):
                val = self._poly[k](u) / (2 * self.eps) ** k
            else:
                val = np.zeros_like(u)
            if k == 0:
                left_val = np.where(p <= -self.eps, 0.0, val)
                val = np.where(right, 1.0 - left_val, left_val)
                val = np.where(p >= self.eps, 1.0, val)
            else:
                val = np.where(inside, val, 0.0)
                if k % 2 == 0:
                    # h^(k)(p) = (-1)^(k+1) h^(k)(-p)
                    val = np.where(right, -val, val)
            out.append(val)
        return out


def quintic(eps):
    return SmoothstepProfile(eps, 2)


def septic(eps):
    return SmoothstepProfile(eps, 3)


@dataclass(frozen=True)
class ArctanProfile(TransitionProfile):
    """``h(p) = arg(-p + i eps)/pi``; smooth but not compactly supported."""

    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValidationError("profile half-width eps must be positive")

    smoothness = 10**6
    compact = False
    name = "arctan"

    def derivs(self, p, nmax=2):
        if nmax > 3:
            raise ValidationError("arctan profile provides derivatives up to order 3")
        p = np.asarray(p, dtype=float)
        e = self.eps
        d = p**2 + e**2
        out = [np.arctan2(e, -p) / np.pi, e / (np.pi * d), -2 * e * p / (np.pi * d**2),
               -2 * e * (e**2 - 3 * p**2) / (np.pi * d**3)]
        return out[: nmax + 1]


def profile_eval(prof: TransitionProfile, p):
    """``(h, h', h'')`` at ``p``."""
    h, h1, h2 = prof.derivs(p, 2)
    return h, h1, h2


def make_profile(name: str, eps: float) -> TransitionProfile:
    """Profile from a scenario name: ``quintic``, ``septic``, ``smoothstepN`` or ``arctan``."""
    key = name.strip().lower()
    if key == "quintic":
        return quintic(eps)
    if key == "septic":
        return septic(eps)
    if key == "arctan":
        return ArctanProfile(eps)
    if key.startswith("smoothstep"):
        try:
            order = int(key[len("smoothstep"):])
        except ValueError:
            raise ValidationError(f"bad smoothstep profile name {name!r}") from None
        return SmoothstepProfile(eps, order)
    raise ValidationError(f"unknown transition profile {name!r}")
