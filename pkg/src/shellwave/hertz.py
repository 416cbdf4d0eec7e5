"""Electromagnetic fields from a complex Hertz potential ``Z = p_vec * Phi``.

Complex field combinations (Gaussian units, c = 1)::

    F = D + iB,   G = E + iH = F - 4 pi P,   P = P_e + i P_m
    F = curl curl Z + i curl dZ/dt
    G = grad div Z + i curl dZ/dt - d2Z/dt2

With a constant vector ``p_vec`` every curl and divergence reduces to
contractions of the scalar jet of ``Phi``.  The polarization of
``Z = p_vec Psi_A^eps`` is ``p_vec S_A^eps`` and the bound densities are

    rho_b = -Re(p_vec . grad S),   J_b = Re(p_vec dS/dt) - Im(p_vec x grad S).
"""

from dataclasses import dataclass

import numpy as np

from .shell import ShellSpec, shell_source_derivatives, shell_source_density
from .wavelets import ScalarField, WaveletParams, _broadcast


def _cvec3(v):
    v = np.asarray(v, dtype=complex)
    if v.shape != (3,):
        raise ValueError("p_vec must be a complex 3-vector")
    return v


@dataclass(frozen=True)
class HertzPotential:
    """``Z(r, t) = p_vec * scalar(r, t)`` with a constant complex ``p_vec``."""

    p_vec: np.ndarray
    scalar: ScalarField

    def __post_init__(self):
        object.__setattr__(self, "p_vec", _cvec3(self.p_vec))

    def __call__(self, r, t):
        return self.scalar(r, t)[..., None] * self.p_vec

    def jet(self, r, t):
        return self.scalar.jet(r, t)


@dataclass
class EMFieldSample:
    F: np.ndarray
    G: np.ndarray

    @property
    def D(self):
        return self.F.real

    @property
    def B(self):
        return self.F.imag

    @property
    def E(self):
        return self.G.real

    @property
    def H(self):
        return self.G.imag


def fields_from_jet(p_vec, jet):
    hp = jet.hess @ p_vec
    curl_dt = np.cross(jet.dt_grad, p_vec)
    F = hp - jet.laplacian[..., None] * p_vec + 1j * curl_dt
    G = hp + 1j * curl_dt - jet.dtt[..., None] * p_vec
    return EMFieldSample(F, G)


def em_fields(Z: HertzPotential, r, t) -> EMFieldSample:
    return fields_from_jet(Z.p_vec, Z.jet(r, t))


@dataclass
class RealFields:
    E: np.ndarray
    B: np.ndarray
    D: np.ndarray
    H: np.ndarray
    residual_D: np.ndarray
    residual_B: np.ndarray


def real_fields(sample: EMFieldSample, P=None) -> RealFields:
    """Split into ``E, B, D, H`` and check ``D = E + 4 pi Re P``, ``B = H + 4 pi Im P``."""
    if P is None:
        P = np.zeros_like(sample.F)
    P = np.asarray(P, dtype=complex)
    E, B, D, H = sample.E, sample.B, sample.D, sample.H
    res_d = np.linalg.norm(D - E - 4 * np.pi * P.real, axis=-1)
    res_b = np.linalg.norm(B - H - 4 * np.pi * P.imag, axis=-1)
    return RealFields(E, B, D, H, res_d, res_b)


def polarization(params: WaveletParams, shell: ShellSpec, p_vec, r, t):
    """``P = p_vec S_A^eps``; zero off the shell."""
    p_vec = _cvec3(p_vec)
    return shell_source_density(params, shell, r, t)[..., None] * p_vec


@dataclass
class BoundSources:
    rho_b: np.ndarray
    J_b: np.ndarray
    # magnetic charge-current of Hertz-derived fields: identically zero
    rho_m: np.ndarray
    J_m: np.ndarray


def bound_sources(params: WaveletParams, shell: ShellSpec, p_vec, r, t) -> BoundSources:
    p_vec = _cvec3(p_vec)
    r, t = _broadcast(r, t)
    _, gs, ds = shell_source_derivatives(params, shell, r, t)
    rho = -(gs @ p_vec).real
    J = (ds[..., None] * p_vec).real - np.cross(p_vec, gs).imag
    return BoundSources(rho, J, np.zeros_like(rho), np.zeros_like(J))


def four_potential(Z: HertzPotential, r, t):
    """Scalar and vector potentials ``Phi = -div Z_e``, ``A = curl Z_m + dZ_e/dt``."""
    jet = Z.jet(r, t)
    p = Z.p_vec
    div_z = jet.grad @ p
    phi = -div_z.real
    # curl(p Phi) = grad Phi x p
    A = np.cross(jet.grad, p).imag + (jet.dt[..., None] * p).real
    return phi, A
