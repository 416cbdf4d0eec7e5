"""Finite-difference verification oracle.

Second-order central stencils only, built from *value* evaluators: nothing
here calls a closed-form derivative, so every comparison against the
analytic formulas is an independent check.  Complex fields are differenced
as they come (which is componentwise in real and imaginary parts).

Two flavours are provided:

* point stencils, ``fd_*(f, r, t, h)``, evaluating ``f`` at ``r +- h e_i``;
  used for convergence studies at a fixed set of points with shrinking ``h``;
* grid operators on a :class:`UniformGrid`, sampling once and differencing
  the array (interior nodes only, no one-sided fallback).

A ``guard`` predicate marks forbidden points (focal circle, branch disk).
Stencils touching a guarded point are *excluded* and reported in a mask.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

_E = np.eye(3)


def guarded(f, guard):
    """Wrap ``f`` so that guarded points yield NaN instead of being evaluated."""
    if guard is None:
        return f

    def wrapped(r, t):
        r = np.asarray(r, dtype=float)
        t = np.broadcast_to(np.asarray(t, dtype=float), r.shape[:-1])
        bad = np.asarray(guard(r), dtype=bool)
        ok = ~bad
        sample = f(r[ok][:1], t[ok][:1]) if np.any(ok) else None
        tail = () if sample is None else np.shape(sample)[1:]
        out = np.full(bad.shape + tail, np.nan + 0j)
        if np.any(ok):
            out[ok] = f(r[ok], t[ok])
        return out

    return wrapped


# ---------------------------------------------------------------- point stencils


def fd_gradient(f, r, t, h):
    return np.stack([(f(r + h * e, t) - f(r - h * e, t)) / (2 * h) for e in _E], axis=-1)


def fd_divergence(V, r, t, h):
    return sum((V(r + h * e, t)[..., i] - V(r - h * e, t)[..., i]) / (2 * h) for i, e in enumerate(_E))


def fd_curl(V, r, t, h):
    d = [(V(r + h * e, t) - V(r - h * e, t)) / (2 * h) for e in _E]  # d[j][..., i] = dV_i/dx_j
    return np.stack([d[1][..., 2] - d[2][..., 1], d[2][..., 0] - d[0][..., 2], d[0][..., 1] - d[1][..., 0]], axis=-1)


def fd_laplacian(f, r, t, h):
    c = f(r, t)
    return sum(f(r + h * e, t) - 2 * c + f(r - h * e, t) for e in _E) / h**2


def fd_dt(f, r, t, ht):
    return (f(r, t + ht) - f(r, t - ht)) / (2 * ht)


def fd_dtt(f, r, t, ht):
    return (f(r, t + ht) - 2 * f(r, t) + f(r, t - ht)) / ht**2


def fd_wave_operator(f, r, t, h, ht=None):
    """``box f = f_tt - lap f`` with the 7-point Laplacian and 3-point time difference."""
    if ht is None:
        ht = h / 2
    c = f(r, t)
    lap = sum(f(r + h * e, t) - 2 * c + f(r - h * e, t) for e in _E) / h**2
    return (f(r, t + ht) - 2 * c + f(r, t - ht)) / ht**2 - lap


def fd_fourth(f, r, t, h, axis):
    """Five-point fourth difference along ``axis`` (0-2 spatial, 3 = time)."""
    if axis == 3:
        vals = [f(r, t + k * h) for k in (-2, -1, 0, 1, 2)]
    else:
        e = _E[axis]
        vals = [f(r + k * h * e, t) for k in (-2, -1, 0, 1, 2)]
    return (vals[0] - 4 * vals[1] + 6 * vals[2] - 4 * vals[3] + vals[4]) / h**4


def wave_truncation_estimate(f, r, t, h, ht=None):
    """Leading truncation term of :func:`fd_wave_operator` from fourth differences.

    ``(ht^2/12) f_tttt - (h^2/12) sum_i f_iiii``
    """
    if ht is None:
        ht = h / 2
    spatial = sum(fd_fourth(f, r, t, h, i) for i in range(3))
    return ht**2 / 12 * fd_fourth(f, r, t, ht, 3) - h**2 / 12 * spatial


# ---------------------------------------------------------------- grids


@dataclass(frozen=True)
class UniformGrid:
    """Tensor grid ``origin + (i h_x, j h_y, k h_z)``; arrays are indexed ``[i, j, k]``."""

    origin: tuple
    spacing: tuple
    shape: tuple
    time_step: float = None

    def __post_init__(self):
        origin = tuple(float(x) for x in np.broadcast_to(np.asarray(self.origin, float), (3,)))
        spacing = tuple(float(x) for x in np.broadcast_to(np.asarray(self.spacing, float), (3,)))
        shape = tuple(int(n) for n in np.broadcast_to(np.asarray(self.shape), (3,)))
        if any(h <= 0 for h in spacing):
            raise ValidationError("grid spacing must be positive")
        if any(n < 1 for n in shape):
            raise ValidationError("grid extents must be positive")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "shape", shape)
        if self.time_step is None:
            object.__setattr__(self, "time_step", min(spacing) / 2)

    @classmethod
    def cube(cls, half_width, n, center=(0.0, 0.0, 0.0), time_step=None):
        h = 2 * half_width / (n - 1)
        origin = np.asarray(center, float) - half_width
        return cls(tuple(origin), (h, h, h), (n, n, n), time_step)

    def axes(self):
        return [o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.shape)]

    def points(self):
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def refined(self, k: int):
        """Same box with spacing divided by ``k``."""
        shape = tuple((n - 1) * k + 1 for n in self.shape)
        return UniformGrid(self.origin, tuple(h / k for h in self.spacing), shape, self.time_step / k)

    def require_stencil(self):
        if min(self.shape) < 5:
            raise ValidationError("grid needs at least 5 points per axis for central stencils")


@dataclass
class GridResult:
    values: np.ndarray
    excluded: np.ndarray
    points: np.ndarray

    @property
    def excluded_fraction(self):
        return float(np.mean(self.excluded)) if self.excluded.size else 0.0


def sample(f, grid: UniformGrid, t, guard=None):
    pts = grid.points()
    vals = guarded(f, guard)(pts, np.full(grid.shape, float(t)))
    return vals


_INNER = (slice(1, -1),) * 3


def _shift(arr, axis, k):
    idx = [slice(1, -1)] * 3
    idx[axis] = slice(1 + k, arr.shape[axis] - 1 + k if arr.shape[axis] - 1 + k != 0 else None)
    return arr[tuple(idx)]


def grid_gradient(arr, spacing):
    return np.stack([(_shift(arr, i, 1) - _shift(arr, i, -1)) / (2 * spacing[i]) for i in range(3)], axis=-1)


def grid_divergence(varr, spacing):
    return sum((_shift(varr[..., i], i, 1) - _shift(varr[..., i], i, -1)) / (2 * spacing[i]) for i in range(3))


def grid_curl(varr, spacing):
    d = lambda comp, ax: (_shift(varr[..., comp], ax, 1) - _shift(varr[..., comp], ax, -1)) / (2 * spacing[ax])
    return np.stack([d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)], axis=-1)


def grid_laplacian(arr, spacing):
    c = arr[_INNER]
    return sum((_shift(arr, i, 1) - 2 * c + _shift(arr, i, -1)) / spacing[i] ** 2 for i in range(3))


def _interior_mask(vals):
    bad = np.isnan(vals)
    while bad.ndim > 3:
        bad = bad.any(axis=-1)
    ex = bad[_INNER].copy()
    for i in range(3):
        ex |= _shift(bad, i, 1) | _shift(bad, i, -1)
    return ex


def fd_wave_operator_grid(f, grid: UniformGrid, t, guard=None) -> GridResult:
    """Wave operator on the interior nodes of ``grid``."""
    grid.require_stencil()
    ht = grid.time_step
    now = sample(f, grid, t, guard)
    before = sample(f, grid, t - ht, guard)
    after = sample(f, grid, t + ht, guard)
    box = (after[_INNER] - 2 * now[_INNER] + before[_INNER]) / ht**2 - grid_laplacian(now, grid.spacing)
    ex = _interior_mask(now) | _interior_mask(before) | _interior_mask(after)
    box = np.where(ex, 0.0, box)
    return GridResult(box, ex, grid.points()[_INNER])


def fd_vector_ops_grid(V, grid: UniformGrid, t, guard=None):
    """``(div V, curl V)`` on interior nodes, with the exclusion mask."""
    grid.require_stencil()
    vals = sample(V, grid, t, guard)
    ex = _interior_mask(vals)
    div = np.where(ex, 0.0, grid_divergence(vals, grid.spacing))
    curl = np.where(ex[..., None], 0.0, grid_curl(vals, grid.spacing))
    return div, curl, ex


def fd_gradient_grid(f, grid: UniformGrid, t, guard=None):
    grid.require_stencil()
    vals = sample(f, grid, t, guard)
    ex = _interior_mask(vals)
    return np.where(ex[..., None], 0.0, grid_gradient(vals, grid.spacing)), ex


# ---------------------------------------------------------------- convergence


@dataclass
class ConvergenceReport:
    name: str
    spacings: list
    max_norms: list
    rms_norms: list
    excluded_fraction: float = 0.0
    lo: float = 1.7
    hi: float = 2.3
    notes: dict = field(default_factory=dict)

    @staticmethod
    def _fit(hs, res):
        res = np.asarray(res, float)
        if res.size < 2 or np.any(res <= 0):
            return float("nan")
        return float(np.polyfit(np.log(hs), np.log(res), 1)[0])

    @property
    def pair_orders_max(self):
        r = np.asarray(self.max_norms)
        return list(np.log2(r[:-1] / r[1:]) / np.log2(np.asarray(self.spacings[:-1]) / self.spacings[1:]))

    @property
    def pair_orders_rms(self):
        r = np.asarray(self.rms_norms)
        return list(np.log2(r[:-1] / r[1:]) / np.log2(np.asarray(self.spacings[:-1]) / self.spacings[1:]))

    @property
    def order_max(self):
        return self._fit(self.spacings, self.max_norms)

    @property
    def order_rms(self):
        return self._fit(self.spacings, self.rms_norms)

    @property
    def monotone(self):
        r = np.asarray(self.max_norms)
        return bool(np.all(r[1:] < r[:-1]))

    @property
    def valid(self):
        return self.excluded_fraction < 0.05

    @property
    def passed(self):
        return self.valid and self.monotone and self.lo <= self.order_max <= self.hi

    def to_text(self):
        fmt = lambda xs: ", ".join(f"{x:.6e}" for x in xs)
        lines = [
            f"name: {self.name}",
            f"spacings: {fmt(self.spacings)}",
            f"max_norms: {fmt(self.max_norms)}",
            f"rms_norms: {fmt(self.rms_norms)}",
            f"pair_orders_max: {fmt(self.pair_orders_max)}",
            f"pair_orders_rms: {fmt(self.pair_orders_rms)}",
            f"order_max: {self.order_max:.4f}",
            f"order_rms: {self.order_rms:.4f}",
            f"monotone: {str(self.monotone).lower()}",
            f"excluded_fraction: {self.excluded_fraction:.6f}",
            f"accepted_range: {self.lo}, {self.hi}",
            f"passed: {str(self.passed).lower()}",
        ]
        lines += [f"{k}: {v}" for k, v in self.notes.items()]
        return "\n".join(lines) + "\n"


def _pointwise_norm(x):
    x = np.asarray(x)
    if x.ndim > 1:
        return np.sqrt(np.sum(np.abs(x) ** 2, axis=tuple(range(1, x.ndim))))
    return np.abs(x)


def convergence_order(formula, oracle, points, spacings, name="", lo=1.7, hi=2.3, guard=None):
    """Residual ``|formula - oracle_h|`` over ``points`` for each spacing ``h``.

    ``formula(points)`` gives the closed-form values (``None`` means the
    exact value is zero); ``oracle(points, h)`` the finite-difference values.
    Points whose stencil hits a guard (NaN in the oracle) are excluded.
    """
    points = np.asarray(points, dtype=float)
    pts = points.reshape(-1, 3)
    exact = None if formula is None else np.asarray(formula(pts))
    maxes, rmses = [], []
    excluded = np.zeros(pts.shape[0], dtype=bool)
    residuals = []
    for h in spacings:
        approx = np.asarray(oracle(pts, h))
        res = _pointwise_norm(approx if exact is None else approx - exact)
        residuals.append(res)
        excluded |= np.isnan(res)
    if guard is not None:
        excluded |= np.asarray(guard(pts), dtype=bool)
    keep = ~excluded
    for res in residuals:
        r = res[keep]
        maxes.append(float(r.max()) if r.size else float("nan"))
        rmses.append(float(np.sqrt(np.mean(r**2))) if r.size else float("nan"))
    return ConvergenceReport(name, list(map(float, spacings)), maxes, rmses,
                             float(excluded.mean()) if excluded.size else 0.0, lo, hi)
