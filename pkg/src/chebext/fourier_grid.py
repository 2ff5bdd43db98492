"""Uniform tensor grids, quadrature Fourier transforms, norms and the Sobolev seminorm.

Conventions: the forward transform is

    F v(xi) = (2 pi)^{-d} int exp(i xi . x) v(x) dx

and the inverse carries no normalisation,

    F^{-1} w(x) = int w(xi) exp(-i xi . x) dxi,

so that ``||u||_2 = (2 pi)^{d/2} ||F u||_2``. Both are computed as
trapezoidal sums on closed uniform grids, one axis at a time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class SupportWarning(UserWarning):
    """Samples on the grid boundary exceed the compact-support tolerance."""


SUPPORT_TOL = 1e-14


@dataclass(frozen=True)
class GridSpec:
    """Closed uniform tensor grid on ``prod_j [-h_j, h_j]``."""

    half_width: tuple[float, ...]
    points: tuple[int, ...]

    def __post_init__(self):
        hw = tuple(float(h) for h in np.atleast_1d(self.half_width))
        pts = tuple(int(p) for p in np.atleast_1d(self.points))
        if len(hw) != len(pts):
            raise ValueError("half_width and points must have the same length")
        if any(not h > 0 for h in hw):
            raise ValueError(f"half-widths must be positive, got {hw}")
        if any(p < 2 for p in pts):
            raise ValueError(f"need at least 2 points per axis, got {pts}")
        object.__setattr__(self, "half_width", hw)
        object.__setattr__(self, "points", pts)

    @classmethod
    def cube(cls, d: int, half_width: float, points: int) -> "GridSpec":
        return cls((half_width,) * d, (points,) * d)

    @property
    def d(self) -> int:
        return len(self.points)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(2 * h / (p - 1) for h, p in zip(self.half_width, self.points))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.linspace(-h, h, p) for h, p in zip(self.half_width, self.points))

    def axis_weights(self) -> tuple[np.ndarray, ...]:
        """Trapezoidal weights per axis; each sums to ``2 h_j``."""
        out = []
        for h, p in zip(self.spacing, self.points):
            w = np.full(p, h)
            w[0] = w[-1] = h / 2
            out.append(w)
        return tuple(out)

    def weights(self) -> np.ndarray:
        return _outer(self.axis_weights())

    def mesh(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.axes, indexing="ij"))


def _outer(factors) -> np.ndarray:
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return out


@dataclass(frozen=True)
class _Sampled:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != int(np.prod(self.grid.points)):
            raise ValueError(
                f"{vals.size} samples do not fill a grid of shape {self.grid.shape}"
            )
        vals = vals.reshape(self.grid.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "values", vals)

    def __mul__(self, c):
        return type(self)(self.grid, self.values * c, **self._meta())

    __rmul__ = __mul__

    def _meta(self) -> dict:
        return {}


@dataclass(frozen=True)
class Field(_Sampled):
    """Complex samples on a frequency-space (``xi``) grid."""

    domain = "xi"


@dataclass(frozen=True)
class SpatialField(_Sampled):
    """Complex samples on a physical-space (``x``) grid.

    ``sigma`` optionally records the l1-radius of the support ball
    ``sum_j |x_j| <= sigma``.
    """

    sigma: float | None = field(default=None)
    domain = "x"

    def _meta(self) -> dict:
        return {"sigma": self.sigma}

    def support_violation(self, tol: float = SUPPORT_TOL) -> float:
        """Largest ``|v|`` outside the declared l1 ball, relative to ``max |v|``."""
        if self.sigma is None:
            raise ValueError("no support radius recorded")
        peak = np.abs(self.values).max()
        if peak == 0:
            return 0.0
        l1 = sum(np.abs(m) for m in self.grid.mesh())
        outside = l1 > self.sigma * (1 + 1e-12)
        if not outside.any():
            return 0.0
        return float(np.abs(self.values[outside]).max() / peak)

    def respects_support(self, tol: float = SUPPORT_TOL) -> bool:
        return self.support_violation() <= tol


def _boundary_max(values: np.ndarray) -> float:
    out = 0.0
    for axis in range(values.ndim):
        for end in (0, -1):
            out = max(out, float(np.abs(np.take(values, end, axis=axis)).max()))
    return out


def _transform(values, in_grid: GridSpec, out_axes, sign: float) -> np.ndarray:
    out = np.asarray(values, dtype=complex)
    for x, w, q in zip(in_grid.axes, in_grid.axis_weights(), out_axes):
        kernel = np.exp(sign * 1j * np.multiply.outer(q, x)) * w
        # contract the leading axis; the new axis is appended at the end
        out = np.tensordot(out, kernel, axes=([0], [1]))
    return out


def forward_transform(v: SpatialField, out_grid: GridSpec) -> Field:
    """Trapezoidal approximation of ``(2 pi)^{-d} int exp(i xi x) v(x) dx`` on ``out_grid``.

    Emits :class:`SupportWarning` when boundary samples of ``v`` exceed
    ``1e-14 * max |v|``, since the quadrature then truncates the support.
    """
    if out_grid.d != v.grid.d:
        raise ValueError("dimension mismatch between field and output grid")
    peak = np.abs(v.values).max()
    if peak > 0 and _boundary_max(v.values) > SUPPORT_TOL * peak:
        warnings.warn("samples do not vanish on the grid boundary", SupportWarning, stacklevel=2)
    vals = _transform(v.values, v.grid, out_grid.axes, +1.0) / (2 * np.pi) ** v.grid.d
    return Field(out_grid, vals)


def inverse_transform(w: Field, out_grid: GridSpec) -> SpatialField:
    """Trapezoidal approximation of ``int w(xi) exp(-i xi x) dxi`` over the box of ``w``.

    ``w`` is implicitly zero outside its grid box.
    """
    if out_grid.d != w.grid.d:
        raise ValueError("dimension mismatch between field and output grid")
    return SpatialField(out_grid, _transform(w.values, w.grid, out_grid.axes, -1.0))


def sup_norm(f: _Sampled) -> float:
    return float(np.abs(f.values).max())


def l2_norm(f: _Sampled) -> float:
    """Trapezoidal approximation of the continuum L2 norm over the grid box."""
    return float(np.sqrt(np.sum(f.grid.weights() * np.abs(f.values) ** 2)))


def parseval_residual(v: SpatialField, w: Field) -> float:
    """``| ||v|| - (2 pi)^{d/2} ||w|| | / ||v||``; ``w`` should approximate ``F v``."""
    nv = l2_norm(v)
    if nv == 0:
        raise ValueError("Parseval residual undefined for a zero field")
    return abs(nv - (2 * np.pi) ** (v.grid.d / 2) * l2_norm(w)) / nv


def sobolev_seminorm(v: SpatialField, m: int) -> float:
    """Spectral estimate of ``(sum_j ||d^m v / dx_j^m||_2^2)^{1/2}``.

    The samples are treated as one period of a periodic function (the last
    point on each axis duplicates the first and is dropped), which is exact
    up to aliasing when ``v`` vanishes near the grid boundary.
    """
    if m < 1:
        raise ValueError(f"seminorm order must be >= 1, got {m}")
    if any(p < 2 * m + 2 for p in v.grid.points):
        raise ValueError(f"grid too coarse for order {m}: need >= {2 * m + 2} points per axis")
    periodic = v.values[tuple(slice(0, p - 1) for p in v.grid.points)]
    spec = np.fft.fftn(periodic)
    power = np.abs(spec) ** 2
    cell = float(np.prod(v.grid.spacing))
    count = periodic.size
    total = 0.0
    for j, (h, p) in enumerate(zip(v.grid.spacing, v.grid.points)):
        k = 2 * np.pi * np.fft.fftfreq(p - 1, d=h)
        shape = [1] * v.grid.d
        shape[j] = p - 1
        total += np.sum(power * (k.reshape(shape) ** (2 * m)))
    return float(np.sqrt(total * cell / count))
