"""Closed-form stability estimates for the Chebyshev continuation and the reconstruction.

Every product of the form ``A^n e^B`` is evaluated as ``exp(n ln A + B)`` so
that hypothesis-satisfying parameters (``e^{r sigma rho}`` with ``rho`` in
the tens) do not overflow. Hypotheses are hard errors.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .extrapolate import HypothesisError, PriorData, check_noise, check_tau, continuation_factor


def _require(cond: bool, message: str):
    if not cond:
        raise HypothesisError(message)


def _check_R_rho(prior: PriorData, R: float, rho: float):
    _require(R >= prior.r, f"R >= r violated ({R} < {prior.r})")
    _require(rho >= 4 * R / prior.r, f"rho >= 4R/r violated ({rho} < {4 * R / prior.r})")


def _exp(x: float) -> float:
    # a bound beyond double range is vacuous, not an error
    return math.exp(x) if x < 709.78 else math.inf


def _logsumexp(*terms: float) -> float:
    top = max(terms)
    return top + math.log(sum(math.exp(t - top) for t in terms))


def bound_lemma21(prior: PriorData, delta: float, R: float, rho: float, n: int) -> float:
    """Sup-error bound of ``C_{R,n}`` on ``[-R, R]^d``:

    ``(1/4) (4^d (4R/r)^n delta + (16/3)^d N e^{r sigma rho} (4R/(3 r rho))^n)``.
    """
    check_noise(prior.N, delta)
    _require(n >= 1, f"n >= 1 violated (n={n})")
    _check_R_rho(prior, R, rho)
    d, r = prior.d, prior.r
    noise = d * math.log(4) + n * math.log(4 * R / r) + math.log(delta)
    tail = (d * math.log(16 / 3) + math.log(prior.N) + r * prior.sigma * rho
            + n * math.log(4 * R / (3 * r * rho)))
    return _exp(_logsumexp(noise, tail) - math.log(4))


@dataclass(frozen=True)
class HolderBound:
    n_star: int
    tau_rho: float
    value: float


def optimal_order(prior: PriorData, delta: float, rho: float) -> int:
    """``n* = ceil((ln(N/delta) + r sigma rho) / ln(3 rho))``."""
    return math.ceil((math.log(prior.N / delta) + prior.r * prior.sigma * rho) / math.log(3 * rho))


def bound_holder_theorem(prior: PriorData, delta: float, R: float, rho: float) -> HolderBound:
    """Hölder estimate at ``n = n*``: ``(16/3)^d (R/r) (N e^{r sigma rho} / delta)^{tau(rho)} delta``
    with ``tau(rho) = ln(4R/r) / ln(3 rho)``."""
    check_noise(prior.N, delta)
    _check_R_rho(prior, R, rho)
    d, r = prior.d, prior.r
    tau_rho = math.log(4 * R / r) / math.log(3 * rho)
    log_value = (d * math.log(16 / 3) + math.log(R / r)
                 + tau_rho * (math.log(prior.N / delta) + r * prior.sigma * rho) + math.log(delta))
    return HolderBound(optimal_order(prior, delta, rho), tau_rho, _exp(log_value))


def bound_corollary(prior: PriorData, tau: float, delta: float) -> float:
    """``(16/3)^d N (delta/N)^{(1-tau)^2} L_tau(delta)``."""
    check_tau(tau)
    L = continuation_factor(tau, prior.N, delta, prior.r, prior.sigma)
    return _exp(prior.d * math.log(16 / 3) + math.log(prior.N)
                    + (1 - tau) ** 2 * math.log(delta / prior.N) + math.log(L))


@dataclass(frozen=True)
class ReconstructionBound:
    holder_term: float
    tail_term: float
    total: float


def bound_reconstruction(prior: PriorData, tau: float, delta: float) -> ReconstructionBound:
    """L2 error bound ``(20 sqrt r)^d N L^{d/2+1} (delta/N)^{(1-tau)^2} + gamma (r L)^{-m}``."""
    _require(prior.m >= 1, f"integer m > 0 required by the reconstruction estimate (m={prior.m})")
    check_tau(tau)
    d, r = prior.d, prior.r
    L = continuation_factor(tau, prior.N, delta, r, prior.sigma)
    holder = _exp(d * math.log(20 * math.sqrt(r)) + math.log(prior.N)
                      + (d / 2 + 1) * math.log(L) + (1 - tau) ** 2 * math.log(delta / prior.N))
    tail = _exp(math.log(prior.gamma) - prior.m * math.log(r * L))
    return ReconstructionBound(holder, tail, holder + tail)


def coeff_bound(prior: PriorData, R: float, rho: float, k) -> float:
    """Bound on ``|a_k prod_j T_{k_j}(xi_j/r)|`` over ``[-R, R]^d``:
    ``2^d N e^{r sigma rho / 2} (2R/(r rho))^{|k|}`` for ``rho >= 1``."""
    _require(R >= prior.r, f"R >= r violated ({R} < {prior.r})")
    _require(rho >= 1, f"rho >= 1 violated (rho={rho})")
    total = sum(int(x) for x in k)
    _require(len(k) == prior.d and min(k) >= 0, f"multi-index {tuple(k)} invalid for d={prior.d}")
    r = prior.r
    return _exp(prior.d * math.log(2) + math.log(prior.N) + 0.5 * r * prior.sigma * rho
                    + total * math.log(2 * R / (r * rho)))


def tail_bound(prior: PriorData, R: float, rho_prime: float, n: int) -> float:
    """Truncation bound ``(8/3)^d N e^{r sigma rho'} binom(n+d-1, n) (4R/(3 r rho'))^n``."""
    _require(n >= 0, f"n >= 0 violated (n={n})")
    _check_R_rho(prior, R, rho_prime)
    d, r = prior.d, prior.r
    return _exp(d * math.log(8 / 3) + math.log(prior.N) + r * prior.sigma * rho_prime
                    + math.log(math.comb(n + d - 1, n)) + n * math.log(4 * R / (3 * r * rho_prime)))


@dataclass(frozen=True)
class BoundReport:
    lemma21: float
    thm_holder: HolderBound
    corollary: float
    thm_rec: ReconstructionBound | None
    n: int
    tau: float

    def to_dict(self) -> dict:
        return asdict(self)

    def format(self) -> str:
        rows = [
            ("n*", f"{self.thm_holder.n_star}"),
            ("tau(rho)", f"{self.thm_holder.tau_rho:.6g}"),
            (f"lemma21 (n={self.n})", f"{self.lemma21:.6g}"),
            ("holder_theorem", f"{self.thm_holder.value:.6g}"),
            (f"corollary (tau={self.tau:g})", f"{self.corollary:.6g}"),
        ]
        if self.thm_rec is not None:
            rows += [
                ("reconstruction.holder_term", f"{self.thm_rec.holder_term:.6g}"),
                ("reconstruction.tail_term", f"{self.thm_rec.tail_term:.6g}"),
                ("reconstruction.total", f"{self.thm_rec.total:.6g}"),
            ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def bound_report(prior: PriorData, delta: float, R: float, rho: float,
                 tau: float = 0.5, n: int | None = None) -> BoundReport:
    """Evaluate all estimates; ``n`` defaults to ``n*``."""
    holder = bound_holder_theorem(prior, delta, R, rho)
    n = holder.n_star if n is None else n
    rec = bound_reconstruction(prior, tau, delta) if prior.m >= 1 else None
    return BoundReport(
        lemma21=bound_lemma21(prior, delta, R, rho, n),
        thm_holder=holder,
        corollary=bound_corollary(prior, tau, delta),
        thm_rec=rec,
        n=n,
        tau=tau,
    )
