"""Monte Carlo simulators for the test statistics, from their defining representations.

Random numbers come from numpy's Philox4x32 counter-based generator. Every
sampler owns a fixed stream id, and each independent component within a
sampler gets its own child stream ``SeedSequence(seed, spawn_key=(stream, l))``,
so adding a sampler or a component never perturbs existing streams.
Gamma variates use the Marsaglia-Tsang squeeze method (with the U^(1/a)
boost for shape < 1); beta variates are ratios of gammas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .cf import StatisticSpec, _check_bartlett, _check_lambdas, _check_wilks, _check_wilks_cs, bartlett_coefficients
from .errors import DomainError

STREAM_BARTLETT = 1
STREAM_WILKS = 2
STREAM_WILKS_CS = 3
STREAM_QUADFORM = 4
STREAM_LOG_BETA = 5


@dataclass(frozen=True)
class SimulationConfig:
    n_samples: int = 100_000
    seed: int = 0
    spec: Optional[StatisticSpec] = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise DomainError("n_samples must be >= 1")
        if self.seed < 0:
            raise DomainError("seed must be a nonnegative integer")


@dataclass
class SampleSummary:
    samples: np.ndarray
    mean: float
    std: float
    quantiles: dict = field(default_factory=dict)


def summarize(samples, probs: Sequence[float] = ()) -> SampleSummary:
    samples = np.asarray(samples, dtype=float)
    std = float(samples.std(ddof=1)) if samples.size > 1 else 0.0
    quants = {float(p): float(np.quantile(samples, p)) for p in probs}
    return SampleSummary(samples, float(samples.mean()), std, quants)


def generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def gamma_variates(rng: np.random.Generator, shape: float, size: int) -> np.ndarray:
    """Gamma(shape, scale=1) draws by Marsaglia-Tsang."""
    if not shape > 0:
        raise DomainError("gamma shape must be positive")
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(size)
    filled = 0
    while filled < size:
        need = size - filled
        batch = need + need // 20 + 16
        x = rng.standard_normal(batch)
        u = rng.random(batch)
        v = (1.0 + c * x) ** 3
        ok = v > 0
        with np.errstate(invalid="ignore", divide="ignore"):
            logv = np.log(v)
        squeeze = u < 1.0 - 0.0331 * x ** 4
        full = np.log(u) < 0.5 * x * x + d * (1.0 - v + logv)
        accept = ok & (squeeze | full)
        got = (d * v[accept])[:need]
        out[filled:filled + got.size] = got
        filled += got.size
    if boost:
        out *= rng.random(size) ** (1.0 / shape)
    return out


def log_beta_variates(rng_a, rng_b, alpha, beta, size):
    """log B for B ~ Beta(alpha, beta), computed as log Ga - log(Ga + Gb)."""
    ga = gamma_variates(rng_a, alpha, size)
    gb = gamma_variates(rng_b, beta, size)
    return np.log(ga) - np.log(ga + gb)


def simulate_bartlett(k, nu, config: SimulationConfig, rate: float = 0.5, probs=()) -> SampleSummary:
    """Bartlett's statistic c/b - (nu/b) log R_w with X_l ~ Gamma(nu_l/2, rate)."""
    nu = _check_bartlett(k, nu)
    co = bartlett_coefficients(k, nu)
    n = config.n_samples
    w = nu / co.nu_total
    log_geo = np.zeros(n)
    total = np.zeros(n)
    for l, v in enumerate(nu):
        x = gamma_variates(generator(config.seed, STREAM_BARTLETT, l), 0.5 * v, n) / rate
        log_geo += w[l] * np.log(x)
        total += x
    log_r = log_geo - np.log(total / k)
    return summarize(co.c / co.b - (co.nu_total / co.b) * log_r, probs)


def simulate_wilks(p, n, q, config: SimulationConfig, probs=()) -> SampleSummary:
    """lambda = -sum_j log B_j with B_j ~ Beta((n-j+1)/2, q/2)."""
    _check_wilks(p, n, q)
    size = config.n_samples
    acc = np.zeros(size)
    for j in range(1, int(p) + 1):
        acc -= log_beta_variates(
            generator(config.seed, STREAM_WILKS, j, 0),
            generator(config.seed, STREAM_WILKS, j, 1),
            0.5 * (n - j + 1), 0.5 * q, size,
        )
    return summarize(acc, probs)


def simulate_wilks_cs(p, n, q, config: SimulationConfig, probs=()) -> SampleSummary:
    """lambda_CS = -log B1 - (p-1) log B2."""
    _check_wilks_cs(p, n, q)
    m = p - 1
    size = config.n_samples
    s = config.seed
    lb1 = log_beta_variates(
        generator(s, STREAM_WILKS_CS, 1, 0), generator(s, STREAM_WILKS_CS, 1, 1),
        0.5 * (n - q), 0.5 * (q - 1), size,
    )
    lb2 = log_beta_variates(
        generator(s, STREAM_WILKS_CS, 2, 0), generator(s, STREAM_WILKS_CS, 2, 1),
        0.5 * m * (n - q), 0.5 * m * (q - 1), size,
    )
    return summarize(-lb1 - m * lb2, probs)


def simulate_quadform(lambdas, config: SimulationConfig, probs=()) -> SampleSummary:
    """sum_j lambda_j Z_j^2 with Z_j standard normal."""
    lam = _check_lambdas(lambdas)
    acc = np.zeros(config.n_samples)
    for j, value in enumerate(lam):
        z = generator(config.seed, STREAM_QUADFORM, j).standard_normal(config.n_samples)
        acc += value * z * z
    return summarize(acc, probs)


def simulate_log_beta(alpha, beta, coef, config: SimulationConfig, probs=()) -> SampleSummary:
    s = config.seed
    lb = log_beta_variates(
        generator(s, STREAM_LOG_BETA, 0), generator(s, STREAM_LOG_BETA, 1), alpha, beta, config.n_samples
    )
    return summarize(coef * lb, probs)


def simulate(spec: StatisticSpec, config: SimulationConfig, probs=()) -> SampleSummary:
    """Dispatch on ``spec.variant``; raises DomainError when no simulator exists."""
    p = spec.params
    v = spec.variant
    if v == "bartlett":
        return simulate_bartlett(p["k"], p["nu"], config, probs=probs)
    if v == "wilks":
        if p.get("coef", -1.0) != -1.0:
            raise DomainError("wilks simulation supports coef=-1 only")
        return simulate_wilks(p["p"], p["n"], p["q"], config, probs)
    if v == "wilks_cs":
        return simulate_wilks_cs(p["p"], p["n"], p["q"], config, probs)
    if v == "quadform":
        return simulate_quadform(p["lambdas"], config, probs)
    if v == "log_beta":
        return simulate_log_beta(p["alpha"], p["beta"], p.get("coef", 1.0), config, probs)
    raise DomainError(f"no Monte Carlo oracle for statistic {v!r}")


def ks_distance(samples, cdf_evaluator: Callable[[np.ndarray], np.ndarray]) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF of ``samples`` and ``cdf_evaluator``."""
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise DomainError("samples must be nonempty")
    f = np.asarray(cdf_evaluator(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - f)), np.max(np.abs((i - 1) / n - f))))


def ks_critical_value(n: int, level: float = 0.01) -> float:
    """Asymptotic one-sample KS critical value c(level)/sqrt(n)."""
    coef = {0.01: 1.63, 0.05: 1.36, 0.10: 1.22}[level]
    return coef / math.sqrt(n)


def ks_two_sample_critical_value(n: int, m: int, level: float = 0.05) -> float:
    coef = {0.01: 1.63, 0.05: 1.36, 0.10: 1.22}[level]
    return coef * math.sqrt((n + m) / (n * m))
