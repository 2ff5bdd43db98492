"""Chebyshev continuation of Fourier data and the resulting reconstruction.

Given samples of ``w ~ F v`` at the Gauss-Chebyshev nodes of ``[-r, r]^d``,
:func:`extend` produces

    C_{R,n}[w](xi) = w(xi)                                   on [-r, r]^d
                   = sum_{|k| < n} a_k[w] prod_j T_{k_j}(xi_j / r)   on [-R, R]^d minus [-r, r]^d
                   = 0                                       elsewhere

and :func:`reconstruct` applies the inverse transform with ``R`` and ``n``
picked by :func:`make_plan` from the a-priori constants and noise level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import (
    AliasingError,
    NodeGrid,
    coeffs_from_node_samples,
    dct_coefficients,
    eval_dense_grid,
    eval_series_grid,
)
from .fourier_grid import Field, GridSpec, SpatialField, inverse_transform


class HypothesisError(ValueError):
    """An a-priori hypothesis of an estimate or plan is violated."""


@dataclass(frozen=True)
class PriorData:
    """A-priori constants: ``||v||_1 <= (2 pi)^d N``, support in ``sum |x_j| <= sigma``,
    data on ``[-r, r]^d`` and, when ``m >= 1``, ``|v|_{H^m} <= gamma``."""

    d: int
    N: float
    sigma: float
    r: float
    m: int = 0
    gamma: float | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        for name in ("N", "sigma", "r"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.m < 0:
            raise ValueError(f"smoothness order must be >= 0, got {self.m}")
        if self.m >= 1 and not (self.gamma is not None and self.gamma > 0):
            raise ValueError("gamma > 0 is required when m >= 1")

    def scaled(self, alpha: float, beta: float) -> "PriorData":
        """Constants of ``alpha beta^d v(beta x)``, whose transform is ``alpha F v(xi / beta)``."""
        gamma = None if self.gamma is None else self.gamma * alpha * beta ** (self.m + self.d / 2)
        return PriorData(self.d, alpha * self.N, self.sigma / beta, beta * self.r, self.m, gamma)


@dataclass(frozen=True)
class Plan:
    tau: float
    delta: float
    L: float
    R: float
    n: int


def check_noise(N: float, delta: float):
    if not delta > 0:
        raise HypothesisError(f"noise level must satisfy delta > 0, got {delta}")
    if not delta < N:
        raise HypothesisError(
            f"delta < N violated ({delta} >= {N}): data no more informative than w = 0"
        )


def check_tau(tau: float):
    if not 0 <= tau <= 1:
        raise HypothesisError(f"tau must lie in [0, 1], got {tau}")


def continuation_factor(tau: float, N: float, delta: float, r: float, sigma: float) -> float:
    """``L_tau = max{1, (1/4) ((1 - tau) ln(N/delta) / (r sigma))^tau}``."""
    check_tau(tau)
    check_noise(N, delta)
    base = (1 - tau) * math.log(N / delta) / (r * sigma)
    return max(1.0, 0.25 * base**tau)


def make_plan(prior: PriorData, tau: float, delta: float) -> Plan:
    """Continuation radius and truncation order for noise level ``delta``.

    ``R = r L_tau`` and ``n = ceil((2 - tau) ln(N/delta) / (ln 3 + ln(4 L_tau) / tau))``,
    with ``n = 0`` (plain zero padding) when ``tau = 0``.
    """
    L = continuation_factor(tau, prior.N, delta, prior.r, prior.sigma)
    if tau > 0:
        n = math.ceil((2 - tau) * math.log(prior.N / delta) / (math.log(3) + math.log(4 * L) / tau))
    else:
        n = 0
    return Plan(tau=float(tau), delta=float(delta), L=L, R=prior.r * L, n=n)


def suggest_tau(prior: PriorData, delta: float, grid_size: int = 64) -> float:
    """``tau`` on a uniform grid of ``[0, 1]`` minimising the reconstruction bound."""
    from .bounds import bound_reconstruction

    taus = np.linspace(0.0, 1.0, grid_size)
    totals = [bound_reconstruction(prior, t, delta).total for t in taus]
    return float(taus[int(np.argmin(totals))])


def _inside_mask(axis: np.ndarray, r: float) -> np.ndarray:
    return np.abs(axis) <= r * (1 + 1e-12)


def extend(nodes: NodeGrid, samples, R: float, n: int, out_grid: GridSpec) -> Field:
    """Continue node samples of ``w`` from ``[-r, r]^d`` to the grid box ``[-R, R]^d``.

    Inside ``[-r, r]^d`` the result is the full-degree tensor Chebyshev
    interpolant of the samples; elsewhere it is the total-degree ``< n``
    series. With ``n = 0`` the field is zero outside ``[-r, r]^d``.
    """
    samples = np.asarray(samples)
    r = nodes.r
    if R < r:
        raise HypothesisError(f"R >= r violated ({R} < {r})")
    if out_grid.d != nodes.d:
        raise ValueError("output grid dimension does not match node grid")
    if any(not math.isclose(h, R, rel_tol=1e-12) for h in out_grid.half_width):
        raise ValueError(f"output grid must span [-R, R]^d with R={R}")
    if n > nodes.M:
        raise AliasingError(f"aliasing risk: truncation n={n} exceeds node count M={nodes.M}")
    if nodes.M < 4:
        raise ValueError("at least 4 nodes per axis are required")

    axes = out_grid.axes
    masks = [_inside_mask(a, r) for a in axes]
    if n > 0:
        values = eval_series_grid(coeffs_from_node_samples(nodes, samples, n), axes)
    else:
        values = np.zeros(out_grid.shape, dtype=complex)
    if all(m.any() for m in masks):
        dense = dct_coefficients(samples)
        inner = eval_dense_grid(dense, r, [a[m] for a, m in zip(axes, masks)])
        values[np.ix_(*masks)] = inner
    return Field(out_grid, values)


def resample_to_nodes(w: Field, nodes: NodeGrid) -> np.ndarray:
    """Tensor cubic interpolation of uniform-grid data onto Chebyshev nodes.

    The interpolation error adds to the noise level the caller passes on.
    """
    from scipy.interpolate import make_interp_spline

    if w.grid.d != nodes.d:
        raise ValueError("field dimension does not match node grid")
    if any(h < nodes.r * (1 - 1e-12) for h in w.grid.half_width):
        raise ValueError(f"field grid does not cover [-r, r]^d with r={nodes.r}")
    if min(w.grid.points) < 4:
        raise ValueError("cubic resampling needs at least 4 points per axis")
    # both grids are tensor products, so interpolate one axis at a time
    out = w.values
    for axis, coords in enumerate(w.grid.axes):
        out = make_interp_spline(coords, out, k=3, axis=axis)(nodes.nodes)
    return out


def frequency_grid(d: int, R: float, points: int) -> GridSpec:
    return GridSpec.cube(d, R, points)


def reconstruct(nodes: NodeGrid, samples, prior: PriorData, tau: float, delta: float,
                out_grid: GridSpec, freq_points: int = 257) -> SpatialField:
    """``F^{-1} C_{R_tau, n_tau}[w]`` sampled on the spatial grid ``out_grid``."""
    if not math.isclose(nodes.r, prior.r, rel_tol=1e-12):
        raise ValueError(f"node grid half-width {nodes.r} differs from prior r={prior.r}")
    plan = make_plan(prior, tau, delta)
    freq = frequency_grid(prior.d, plan.R, freq_points)
    continued = extend(nodes, samples, plan.R, plan.n, freq)
    out = inverse_transform(continued, out_grid)
    return SpatialField(out.grid, out.values, sigma=prior.sigma)


def zero_padding_reconstruct(nodes: NodeGrid, samples, out_grid: GridSpec,
                             freq_points: int = 257) -> SpatialField:
    """Inverse transform of the data interpolant extended by zero outside ``[-r, r]^d``."""
    freq = frequency_grid(nodes.d, nodes.r, freq_points)
    data = extend(nodes, samples, nodes.r, 0, freq)
    return inverse_transform(data, out_grid)
