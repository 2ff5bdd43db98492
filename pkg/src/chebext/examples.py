"""Admissible test functions with known transforms, and the oscillatory instability family.

The smooth building block is the bump

    g(t) = exp(1 / ((t - 1)(t - 2)))  for 1 < t < 2,  0 otherwise.

Every member of :func:`standard_suite` is a tensor product of 1-d factors
(scaled/shifted bumps, optionally modulated, or box indicators), so its
transform, l1 norm, support radius and Sobolev seminorm are all computed
from 1-d quantities at high resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate, special

from .chebyshev import NodeGrid
from .extrapolate import PriorData
from .fourier_grid import Field, GridSpec, SpatialField

_GL_NODES = 800


def bump_g(t):
    """The compactly supported C-infinity bump on ``(1, 2)``; peak ``e^{-4}`` at ``t = 1.5``."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = (t > 1) & (t < 2)
    ti = t[inside]
    out[inside] = np.exp(1.0 / ((ti - 1) * (ti - 2)))
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _bump_derivative_poly(m: int) -> Polynomial:
    # g^(m) = g * p_m / q^(2m) with q = (t-1)(t-2)
    q = Polynomial([2.0, -3.0, 1.0])
    dq = q.deriv()
    p = Polynomial([1.0])
    for j in range(m):
        p = -dq * p + q**2 * p.deriv() - 2 * j * q * dq * p
    return p


def bump_derivative(t, m: int):
    """``m``-th derivative of :func:`bump_g`."""
    t = np.asarray(t, dtype=float)
    if m == 0:
        return bump_g(t)
    out = np.zeros_like(t)
    inside = (t > 1) & (t < 2)
    ti = t[inside]
    q = (ti - 1) * (ti - 2)
    out[inside] = np.exp(1.0 / q) * _bump_derivative_poly(m)(ti) / q ** (2 * m)
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _gauss_legendre(a: float, b: float, n: int = _GL_NODES):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


BUMP_INTEGRAL = float(np.sum(_gauss_legendre(1.0, 2.0)[1] * bump_g(_gauss_legendre(1.0, 2.0)[0])))


def _chunked_oscillatory(weights, nodes, values, freqs):
    # sum_i weights_i values_i exp(i freq nodes_i), chunked over freqs
    freqs = np.asarray(freqs, dtype=float)
    flat = freqs.ravel()
    out = np.empty(flat.size, dtype=complex)
    wv = weights * values
    for s in range(0, flat.size, 4096):
        out[s:s + 4096] = np.exp(1j * np.multiply.outer(flat[s:s + 4096], nodes)) @ wv
    return out.reshape(freqs.shape)


@dataclass(frozen=True)
class BumpFactor:
    """``amplitude * g(scale * (x - center)) * exp(i modulation x)``; support ``[c + 1/s, c + 2/s]``."""

    amplitude: float = 1.0
    scale: float = 1.0
    center: float = 0.0
    modulation: float = 0.0
    smoothness = np.inf

    @property
    def support(self) -> tuple[float, float]:
        return self.center + 1 / self.scale, self.center + 2 / self.scale

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        vals = self.amplitude * bump_g(self.scale * (x - self.center))
        return vals * np.exp(1j * self.modulation * x)

    def fourier(self, xi):
        eta = np.asarray(xi, dtype=float) + self.modulation
        t, w = _gauss_legendre(1.0, 2.0)
        integral = _chunked_oscillatory(w, t, bump_g(t), eta / self.scale)
        return self.amplitude * np.exp(1j * eta * self.center) * integral / (2 * np.pi * self.scale)

    @property
    def l1_norm(self) -> float:
        return self.amplitude * BUMP_INTEGRAL / self.scale

    @property
    def l2_norm(self) -> float:
        t, w = _gauss_legendre(1.0, 2.0)
        return self.amplitude * float(np.sqrt(np.sum(w * bump_g(t) ** 2) / self.scale))

    def derivative_l2(self, m: int) -> float:
        """``||f^(m)||_2`` via Leibniz' rule and Gauss-Legendre quadrature."""
        t, w = _gauss_legendre(1.0, 2.0)
        acc = np.zeros(t.shape, dtype=complex)
        for l in range(m + 1):
            acc += comb(m, l) * self.scale**l * bump_derivative(t, l) * (1j * self.modulation) ** (m - l)
        return self.amplitude * float(np.sqrt(np.sum(w * np.abs(acc) ** 2) / self.scale))

    def cheb_coefficients(self, r: float, kmax: int) -> np.ndarray:
        """Chebyshev coefficients of ``F f`` on ``[-r, r]`` for ``k <= kmax``.

        Uses ``a_k = 2^[k>0] i^k / (2 pi) int f(x) J_k(r x) dx``, which keeps
        relative accuracy for coefficients far below machine epsilon.
        """
        a, b = self.support
        x, w = _gauss_legendre(a, b)
        fx = self.spatial(x)
        return _bessel_moments(x, w * fx, r, kmax)


def _bessel_moments(x, wf, r, kmax):
    k = np.arange(kmax + 1)
    jk = special.jv(k[:, None], r * x[None, :])
    eps = np.where(k > 0, 2.0, 1.0)
    return eps * (1j) ** k * (jk @ wf) / (2 * np.pi)


@dataclass(frozen=True)
class IndicatorFactor:
    """``amplitude`` on ``(a, b)``, half that at the endpoints, zero elsewhere."""

    a: float = -1.0
    b: float = 1.0
    amplitude: float = 1.0
    smoothness = 0

    @property
    def support(self) -> tuple[float, float]:
        return self.a, self.b

    def spatial(self, x):
        x = np.asarray(x, dtype=float)
        vals = np.where((x > self.a) & (x < self.b), 1.0, 0.0)
        vals = np.where((x == self.a) | (x == self.b), 0.5, vals)
        return (self.amplitude * vals).astype(complex)

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        width = self.b - self.a
        return (
            self.amplitude * width / (2 * np.pi)
            * np.exp(0.5j * (self.a + self.b) * xi)
            * np.sinc(width * xi / (2 * np.pi))
        )

    @property
    def l1_norm(self) -> float:
        return abs(self.amplitude) * (self.b - self.a)

    @property
    def l2_norm(self) -> float:
        return abs(self.amplitude) * np.sqrt(self.b - self.a)

    def derivative_l2(self, m: int) -> float:
        raise ValueError("indicator functions have no square-integrable derivatives")

    def cheb_coefficients(self, r: float, kmax: int) -> np.ndarray:
        x, w = _gauss_legendre(self.a, self.b, 400)
        return _bessel_moments(x, w * self.amplitude, r, kmax)


def _outer(factors):
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.multiply.outer(out, f)
    return out


@dataclass(frozen=True)
class TestFunction:
    """Separable admissible function ``v(x) = prod_j f_j(x_j)`` with certified a-priori constants."""

    name: str
    factors: tuple = field(repr=False)

    __test__ = False  # not a pytest class

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def smoothness(self) -> float:
        return min(f.smoothness for f in self.factors)

    @property
    def N(self) -> float:
        """``||v||_1 / (2 pi)^d``."""
        return float(np.prod([f.l1_norm for f in self.factors]) / (2 * np.pi) ** self.d)

    @property
    def sigma(self) -> float:
        """Radius of the smallest l1 ball centred at 0 containing the support box."""
        return float(sum(max(abs(a), abs(b)) for a, b in (f.support for f in self.factors)))

    def gamma(self, m: int) -> float:
        """``|v|_{H^m}`` from 1-d derivative norms."""
        if m < 1:
            raise ValueError("seminorm order must be >= 1")
        l2 = [f.l2_norm for f in self.factors]
        total = 0.0
        for j, f in enumerate(self.factors):
            others = np.prod([l2[i] for i in range(self.d) if i != j]) if self.d > 1 else 1.0
            total += (f.derivative_l2(m) * others) ** 2
        return float(np.sqrt(total))

    def prior(self, r: float, m: int = 0) -> PriorData:
        gamma = self.gamma(m) if m >= 1 else None
        return PriorData(d=self.d, N=self.N, sigma=self.sigma, r=r, m=m, gamma=gamma)

    def spatial(self, grid: GridSpec) -> SpatialField:
        vals = _outer([f.spatial(a) for f, a in zip(self.factors, grid.axes)])
        return SpatialField(grid, vals, sigma=self.sigma)

    def fourier_axes(self, axes) -> np.ndarray:
        return _outer([f.fourier(a) for f, a in zip(self.factors, axes)])

    def fourier(self, grid: GridSpec) -> Field:
        return Field(grid, self.fourier_axes(grid.axes))

    def fourier_nodes(self, nodes: NodeGrid) -> np.ndarray:
        return self.fourier_axes([nodes.nodes] * self.d)

    def cheb_coefficients(self, r: float, kmax: int) -> np.ndarray:
        """Dense tensor of converged coefficients ``a_k``, all ``k_j <= kmax``."""
        return _outer([f.cheb_coefficients(r, kmax) for f in self.factors])


def _normalised_bump(scale: float, center: float, modulation: float = 0.0) -> BumpFactor:
    # amplitude chosen so that ||f||_1 = 2 pi, i.e. N = 1 per factor
    amp = 2 * np.pi * scale / BUMP_INTEGRAL
    return BumpFactor(amplitude=amp, scale=scale, center=center, modulation=modulation)


def suite_factor(name: str):
    """1-d building blocks of the standard suite."""
    if name == "bump":
        return _normalised_bump(1.0, 0.0)
    if name == "centered_bump":
        return _normalised_bump(2.0, -0.75)
    if name == "modulated_bump":
        return _normalised_bump(2.0, -0.75, modulation=3.0)
    if name == "indicator":
        return IndicatorFactor(-1.0, 1.0)
    raise KeyError(f"unknown suite member {name!r}")


SUITE_NAMES = ("bump", "centered_bump", "indicator", "modulated_bump")


def suite_member(name: str, d: int) -> TestFunction:
    return TestFunction(name=name, factors=(suite_factor(name),) * d)


def standard_suite(d: int) -> list[TestFunction]:
    """Shifted/scaled bump products, box indicators and modulated bumps in dimension ``d``.

    Bumps are normalised to ``N = 1``; the indicator of ``[-1, 1]^d`` has
    ``N = pi^{-d}`` and is admissible only for smoothness order 0.
    """
    if d not in (1, 2):
        raise ValueError(f"standard suite is defined for d in (1, 2), got {d}")
    return [suite_member(name, d) for name in SUITE_NAMES]


# --- instability family -------------------------------------------------


@dataclass(frozen=True)
class InstabilitySpec:
    """Parameters of ``alpha * Re v_{n,m}(beta (x - center))``."""

    n: int
    m: int = 0
    d: int = 2
    alpha: float = 1.0
    beta: float = 1.0
    center: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"oscillation index must be >= 1, got {self.n}")
        if self.m < 0:
            raise ValueError(f"smoothness order must be >= 0, got {self.m}")
        if self.d not in (1, 2):
            raise ValueError(f"instability exhibits exist for d in (1, 2), got {self.d}")
        c = (0.0,) * self.d if self.center is None else tuple(float(x) for x in self.center)
        if len(c) != self.d:
            raise ValueError("center must have d components")
        object.__setattr__(self, "center", c)

    def _check_coverage(self, grid: GridSpec):
        if grid.d != self.d:
            raise ValueError(f"grid dimension {grid.d} does not match exhibit dimension {self.d}")
        reach = 2.0 / self.beta
        for c, h in zip(self.center, grid.half_width):
            if abs(c) + reach > h:
                raise ValueError("grid does not cover the support of the exhibit")


def re_vnm(x1, x2, n: int, m: int):
    """``Re v_{n,m}(x1, x2) = n^{-m} cos(n phi) g(t)`` in polar coordinates ``(t, phi)``."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    t = np.hypot(x1, x2)
    return float(n) ** (-m) * np.cos(n * np.arctan2(x2, x1)) * bump_g(t)


def make_vnm(spec: InstabilitySpec, out_grid: GridSpec) -> SpatialField:
    """Samples of ``alpha * Re v_{n,m}(beta (x - x0))`` on a 2-d grid."""
    if spec.d != 2:
        raise ValueError("make_vnm builds the planar exhibit; use make_hnm for d = 1")
    spec._check_coverage(out_grid)
    x1, x2 = out_grid.mesh()
    y1 = spec.beta * (x1 - spec.center[0])
    y2 = spec.beta * (x2 - spec.center[1])
    vals = spec.alpha * re_vnm(y1, y2, spec.n, spec.m)
    sigma = sum(abs(c) for c in spec.center) + 2 * np.sqrt(2) / spec.beta
    return SpatialField(out_grid, vals, sigma=sigma)


def hnm_values(x, n: int, m: int, epsabs: float = 1e-12) -> np.ndarray:
    """``h_{n,m}(x) = int_{-2}^{2} Re v_{2n,m}(t, x) dt`` by adaptive vector quadrature.

    The integrand is even in ``t``, so twice the integral over ``[0, 2]`` is used.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    active = np.abs(x) < 2
    out = np.zeros_like(x)
    if not active.any():
        return out
    xa = x[active]
    res, err = integrate.quad_vec(
        lambda t: re_vnm(t, xa, 2 * n, m), 0.0, 2.0, epsabs=epsabs / 2, epsrel=0, limit=2000, norm="max",
    )
    if not np.all(np.isfinite(res)) or err > epsabs:
        raise RuntimeError(f"h_{{n,m}} quadrature did not converge (error estimate {err:.2e})")
    out[active] = 2 * res
    return out


def make_hnm(spec: InstabilitySpec, out_grid: GridSpec) -> SpatialField:
    """Samples of ``alpha * h_{n,m}(beta (x - x0))`` on a 1-d grid."""
    if spec.d != 1:
        raise ValueError("make_hnm builds the 1-d exhibit; use make_vnm for d = 2")
    spec._check_coverage(out_grid)
    y = spec.beta * (out_grid.axes[0] - spec.center[0])
    vals = spec.alpha * hnm_values(y, spec.n, spec.m)
    return SpatialField(out_grid, vals, sigma=abs(spec.center[0]) + 2 / spec.beta)


def _radial_moment(n: int, rho, nodes: int = 512) -> np.ndarray:
    # int_1^2 t g(t) J_n(t rho) dt
    t, w = _gauss_legendre(1.0, 2.0, nodes)
    rho = np.asarray(rho, dtype=float)
    radii, inverse = np.unique(rho, return_inverse=True)
    jn = special.jv(n, np.multiply.outer(radii, t))
    return (jn @ (w * t * bump_g(t)))[inverse].reshape(rho.shape)


def fourier_re_vnm(n: int, m: int, xi1, xi2, method: str = "bessel",
                   radial: int = 512, angular: int = 1024) -> np.ndarray:
    """``F[Re v_{n,m}]`` at frequency points, computed in polar coordinates.

    ``method="bessel"`` integrates the angular variable in closed form
    (``2 pi i^n J_n``), which keeps relative accuracy for values far below
    machine epsilon. ``method="quadrature"`` uses a radial Gauss-Legendre by
    angular trapezoid rule and bottoms out at about ``1e-17``.
    """
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    rho = np.hypot(xi1, xi2)
    phi0 = np.arctan2(xi2, xi1)
    if method == "bessel":
        moment = _radial_moment(n, rho, radial)
        return float(n) ** (-m) * (1j) ** n * moment * np.cos(n * phi0) / (2 * np.pi)
    if method == "quadrature":
        t, w = _gauss_legendre(1.0, 2.0, radial)
        phi = 2 * np.pi * np.arange(angular) / angular
        radial_w = w * t * bump_g(t)
        out = np.empty(rho.shape, dtype=complex)
        flat_r, flat_p = rho.ravel(), phi0.ravel()
        res = out.reshape(-1)
        cos_n = np.cos(n * phi)
        for i, (rr, pp) in enumerate(zip(flat_r, flat_p)):
            # Re v has angular factor cos(n phi)
            phase = np.exp(1j * rr * np.multiply.outer(t, np.cos(phi - pp)))
            res[i] = radial_w @ (phase @ cos_n) * (2 * np.pi / angular)
        return float(n) ** (-m) * out / (2 * np.pi) ** 2
    raise ValueError(f"unknown method {method!r}")


UNDERFLOW_FLOOR = 1e-300


def decay_norm(spec: InstabilitySpec, r: float, points: int = 129, method: str = "bessel") -> float:
    """``sup |F[exhibit]|`` over a ``points``-per-axis grid of ``[-r, r]^d``.

    For ``d = 1`` the exhibit is ``h_{n,m}`` and ``F h_{n,m}(xi) = 2 pi F[Re v_{2n,m}](0, xi)``.
    """
    if spec.n > 80:
        raise ValueError("decay_norm supports n <= 80")
    axis = np.linspace(-r, r, points)
    if spec.d == 2:
        e1, e2 = np.meshgrid(axis, axis, indexing="ij")
        vals = fourier_re_vnm(spec.n, spec.m, e1 / spec.beta, e2 / spec.beta, method)
        value = spec.alpha * spec.beta**-2 * np.abs(vals).max()
    else:
        vals = 2 * np.pi * fourier_re_vnm(2 * spec.n, spec.m, 0 * axis, axis / spec.beta, method)
        value = spec.alpha / spec.beta * np.abs(vals).max()
    if value < UNDERFLOW_FLOOR:
        raise FloatingPointError("decay norm below 1e-300 floor")
    return float(value)


def vnm_l2_closed_form(spec: InstabilitySpec) -> float:
    """``||alpha Re v_{n,m}(beta(x - x0))||_2 = alpha beta^{-1} n^{-m} (pi int t g^2)^{1/2}``."""
    t, w = _gauss_legendre(1.0, 2.0)
    return spec.alpha / spec.beta * spec.n ** (-spec.m) * float(np.sqrt(np.pi * np.sum(w * t * bump_g(t) ** 2)))


def fit_rate(x, y, log_x: bool = True) -> tuple[float, float]:
    """Least-squares slope and intercept of ``log y`` against ``log x`` (or ``x``)."""
    x = np.asarray(x, dtype=float)
    lx = np.log(x) if log_x else x
    slope, intercept = np.polyfit(lx, np.log(np.asarray(y, dtype=float)), 1)
    return float(slope), float(intercept)
