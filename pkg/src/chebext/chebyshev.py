"""Chebyshev polynomials, Gauss-Chebyshev nodes and the tensor coefficient transform.

Coefficients of a function ``w`` on the box ``[-r, r]^d`` are the weighted
integrals

    a_k = prod_j (2^[k_j>0] / pi) * int w(xi) T_{k_j}(xi_j/r) / sqrt(r^2 - xi_j^2) dxi

discretised with M-point Gauss-Chebyshev quadrature per axis, which reduces
to a type-II discrete cosine transform of the node samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np
from scipy import fft


class AliasingError(ValueError):
    """Raised when the truncation order exceeds the number of quadrature nodes."""


def cheb_eval(k: int, t):
    """Evaluate the Chebyshev polynomial ``T_k`` at ``t``.

    Uses ``cos(k arccos t)`` on ``[-1, 1]`` and ``sign(t)^k cosh(k arccosh |t|)``
    outside, which is forward stable for large ``|t|``.

    Parameters
    ----------
    k : int
        Degree, ``k >= 0``.
    t : float or ndarray
        Real evaluation points (any magnitude).

    Returns
    -------
    float or ndarray
    """
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    inside = np.abs(t) <= 1.0
    out[inside] = np.cos(k * np.arccos(t[inside]))
    ta = np.abs(t[~inside])
    with np.errstate(over="ignore"):
        vals = np.cosh(k * np.arccosh(ta))
    if k % 2:
        vals = np.sign(t[~inside]) * vals
    out[~inside] = vals
    return out[()] if out.ndim == 0 else out


def cheb_table(n: int, t) -> np.ndarray:
    """Return ``T_0..T_{n-1}`` at the points ``t`` as an array of shape ``(len(t), n)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    table = np.empty((t.size, n))
    for k in range(n):
        table[:, k] = cheb_eval(k, t)
    return table


@dataclass(frozen=True)
class NodeGrid:
    """Tensor grid of Gauss-Chebyshev nodes ``r cos(pi (i + 1/2) / M)`` on ``[-r, r]^d``."""

    d: int
    M: int
    r: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.M < 1:
            raise ValueError(f"need at least one node per axis, got M={self.M}")
        if not self.r > 0:
            raise ValueError(f"half-width must be positive, got r={self.r}")

    @cached_property
    def nodes(self) -> np.ndarray:
        """Per-axis nodes, strictly decreasing."""
        i = np.arange(self.M)
        return self.r * np.cos(np.pi * (i + 0.5) / self.M)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.M,) * self.d

    def points(self) -> np.ndarray:
        """All ``M^d`` node points, shape ``(M, ..., M, d)``, row-major."""
        mesh = np.meshgrid(*([self.nodes] * self.d), indexing="ij")
        return np.stack(mesh, axis=-1)


def cheb_nodes(d: int, M: int, r: float) -> NodeGrid:
    return NodeGrid(d=d, M=M, r=float(r))


def default_node_count(n: int) -> int:
    """Default quadrature size ``max(4n, 32)``."""
    return max(4 * n, 32)


def simplex_indices(n: int, d: int) -> np.ndarray:
    """Multi-indices with ``k_1 + ... + k_d < n`` in lexicographic order, shape ``(K, d)``."""
    if n <= 0:
        return np.zeros((0, d), dtype=int)
    grids = np.meshgrid(*([np.arange(n)] * d), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=-1)
    return idx[idx.sum(axis=1) < n]


def simplex_size(n: int, d: int) -> int:
    """Number of multi-indices with total degree below ``n``: ``binom(n + d - 1, d)``."""
    return comb(n + d - 1, d) if n > 0 else 0


@dataclass(frozen=True)
class ChebCoeffs:
    """Total-degree truncated Chebyshev coefficients on ``[-r, r]^d``.

    ``values[i]`` is the coefficient of the multi-index ``indices[i]``; every
    stored index has total degree below ``n``.
    """

    d: int
    n: int
    r: float
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.indices.shape != (simplex_size(self.n, self.d), self.d):
            raise ValueError("indices do not enumerate the total-degree simplex")
        if self.values.shape != (self.indices.shape[0],):
            raise ValueError("one coefficient per multi-index is required")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("coefficients must be finite")

    @classmethod
    def from_dense(cls, dense: np.ndarray, n: int, r: float) -> "ChebCoeffs":
        """Truncate a dense tensor ``dense[k_1, ..., k_d]`` to total degree ``< n``."""
        dense = np.asarray(dense)
        d = dense.ndim
        idx = simplex_indices(n, d)
        if n > 0 and any(s < n for s in dense.shape):
            padded = np.zeros((max(n, max(dense.shape)),) * d, dtype=complex)
            padded[tuple(slice(0, s) for s in dense.shape)] = dense
            dense = padded
        values = dense[tuple(idx.T)].astype(complex) if n > 0 else np.zeros(0, complex)
        return cls(d=d, n=n, r=float(r), indices=idx, values=values)

    def dense(self) -> np.ndarray:
        """Coefficients as an ``(n,)*d`` tensor, zero outside the simplex."""
        out = np.zeros((self.n,) * self.d, dtype=complex)
        if self.n:
            out[tuple(self.indices.T)] = self.values
        return out

    def __getitem__(self, k) -> complex:
        k = tuple(np.atleast_1d(k))
        if sum(k) >= self.n:
            return 0j
        return self.dense()[k]


def dct_coefficients(samples: np.ndarray) -> np.ndarray:
    """Full tensor of Gauss-Chebyshev coefficients (all ``k_j < M``) from node samples.

    ``a_k = (2^{#{k_j > 0}} / M^d) sum_i w_i prod_j cos(k_j pi (i_j + 1/2) / M)``.
    """
    samples = np.asarray(samples)
    M = samples.shape[0]
    if any(s != M for s in samples.shape):
        raise ValueError(f"node samples must be a cube, got shape {samples.shape}")
    if np.iscomplexobj(samples):
        out = fft.dctn(samples.real, type=2) + 1j * fft.dctn(samples.imag, type=2)
    else:
        out = fft.dctn(samples, type=2).astype(complex)
    # scipy's DCT-II carries a factor 2 per axis
    out /= (2 * M) ** samples.ndim
    for axis in range(samples.ndim):
        scale = np.full(M, 2.0)
        scale[0] = 1.0
        shape = [1] * samples.ndim
        shape[axis] = M
        out *= scale.reshape(shape)
    return out


def coeffs_from_node_samples(grid: NodeGrid, samples, n: int) -> ChebCoeffs:
    """Chebyshev coefficients of total degree below ``n`` from samples on ``grid``.

    Raises
    ------
    AliasingError
        If ``n > grid.M``.
    ValueError
        If the sample array does not match the node grid.
    """
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ValueError(f"sample shape {samples.shape} does not match node grid {grid.shape}")
    if n < 0:
        raise ValueError(f"truncation order must be >= 0, got {n}")
    if n > grid.M:
        raise AliasingError(f"aliasing risk: truncation n={n} exceeds node count M={grid.M}")
    if not np.all(np.isfinite(samples)):
        raise ValueError("node samples must be finite")
    return ChebCoeffs.from_dense(dct_coefficients(samples), n, grid.r)


def _contract_axes(dense: np.ndarray, tables: list[np.ndarray]) -> np.ndarray:
    # out[i_1..i_d] = sum_k dense[k_1..k_d] prod_j tables[j][i_j, k_j]
    out = dense
    for table in tables:
        out = np.tensordot(out, table, axes=([0], [1]))
    return out


def eval_series_grid(coeffs: ChebCoeffs, axes) -> np.ndarray:
    """Evaluate the truncated series on the tensor grid spanned by per-axis ``axes``."""
    axes = [np.atleast_1d(np.asarray(a, dtype=float)) for a in axes]
    if len(axes) != coeffs.d:
        raise ValueError(f"expected {coeffs.d} axes, got {len(axes)}")
    if coeffs.n == 0:
        return np.zeros(tuple(a.size for a in axes), dtype=complex)
    tables = [cheb_table(coeffs.n, a / coeffs.r) for a in axes]
    return _contract_axes(coeffs.dense(), tables)


def eval_dense_grid(dense: np.ndarray, r: float, axes) -> np.ndarray:
    """Evaluate a full (untruncated) coefficient tensor on a tensor grid."""
    axes = [np.atleast_1d(np.asarray(a, dtype=float)) for a in axes]
    tables = [cheb_table(dense.shape[j], a / r) for j, a in enumerate(axes)]
    return _contract_axes(dense, tables)


def eval_series(coeffs: ChebCoeffs, point) -> complex | np.ndarray:
    """Evaluate ``sum_{|k| < n} a_k prod_j T_{k_j}(point_j / r)``.

    ``point`` may be a single d-vector or an array of shape ``(..., d)``.
    Points outside ``[-r, r]^d`` are allowed.
    """
    pts = np.asarray(point, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != coeffs.d:
        raise ValueError(f"points must have trailing dimension {coeffs.d}")
    flat = pts.reshape(-1, coeffs.d)
    if coeffs.n == 0:
        out = np.zeros(flat.shape[0], dtype=complex)
    else:
        prod = np.ones((flat.shape[0], coeffs.indices.shape[0]))
        for j in range(coeffs.d):
            table = cheb_table(coeffs.n, flat[:, j] / coeffs.r)
            prod *= table[:, coeffs.indices[:, j]]
        out = prod @ coeffs.values
    out = out.reshape(pts.shape[:-1])
    return complex(out[0]) if single else out
