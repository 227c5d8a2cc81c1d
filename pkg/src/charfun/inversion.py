"""Gil-Pelaez inversion of characteristic functions by the trapezoidal rule.

The integration domain (A, B) sets the step dt = 2*pi/(B - A); nodes are
t_j = j*dt for j = 0..N with half weights at both ends. The t=0 term of the
CDF sum is replaced by its limit (mean - x) * w_0, which makes the CDF exact
whenever |Y - x| < B - A, apart from truncation at T = N*dt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._backend import kernels
from .cf import CharacteristicFunction, chi2
from .errors import ConvergenceError, DomainError, MomentError

_MOMENT_STEP = 1e-3
_NORMAL_SCALE = math.sqrt(-2.0 * math.log(0.9))


@dataclass(frozen=True)
class InversionOptions:
    n_nodes: int = 1000
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    sigma_rule: float = 6.0
    quantile_tol: float = 1e-8
    max_newton_iters: int = 100
    tail_epsilon: float = 1e-12

    def __post_init__(self):
        if self.n_nodes < 16:
            raise DomainError("n_nodes must be >= 16")
        if not self.sigma_rule > 0:
            raise DomainError("sigma_rule must be positive")
        if not (self.quantile_tol > 0 and self.tail_epsilon > 0):
            raise DomainError("tolerances must be positive")
        if self.max_newton_iters < 1:
            raise DomainError("max_newton_iters must be >= 1")
        if self.x_min is not None and self.x_max is not None and not self.x_max > self.x_min:
            raise DomainError("x_max must exceed x_min")


@dataclass(frozen=True)
class ResolvedGrid:
    delta_t: float
    T: float
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple[float, float]
    mean: float
    std: float
    tail_cf_magnitude: float
    warnings: tuple[str, ...] = ()
    cf_values: Optional[np.ndarray] = field(default=None, repr=False)
    source: Optional[CharacteristicFunction] = field(default=None, repr=False, compare=False)


@dataclass
class DistributionResult:
    x: np.ndarray
    pdf: np.ndarray
    cdf: np.ndarray
    quantiles: list[tuple[float, float]]
    diagnostics: dict
    grid: ResolvedGrid


# ------------------------------------------------------------------ moments


def _std_guess(cf):
    # smallest power-of-two t with |cf(t)| < 0.9; Gaussian scale then gives std
    ts = 2.0 ** np.arange(-40, 41)
    mags = np.abs(cf(ts))
    below = np.nonzero(mags < 0.9)[0]
    if below.size == 0:
        raise MomentError("|cf(t)| never drops below 0.9: degenerate distribution")
    return _NORMAL_SCALE / ts[below[0]]


def _log_cf(cf, h):
    # log cf on a geometric ladder up to h, phase unwrapped from t ~ 0
    ladder = h * 2.0 ** np.arange(-40, 1)
    vals = cf(ladder)
    if np.any(vals == 0) or not np.all(np.isfinite(vals)):
        raise MomentError("cf vanishes or is not finite near the origin")
    phase = np.unwrap(np.angle(vals))
    return np.log(np.abs(vals[-1])) + 1j * phase[-1]


def _cumulants(cf, h):
    def at(step):
        lc = _log_cf(cf, step)
        return lc.imag / step, -2.0 * lc.real / step ** 2

    m1, v1 = at(h)
    m2, v2 = at(2.0 * h)
    # Richardson: both estimates carry an O(h^2) bias
    return (4.0 * m1 - m2) / 3.0, (4.0 * v1 - v2) / 3.0


def estimate_moments(cf: CharacteristicFunction) -> tuple[float, float]:
    """Mean and standard deviation, from the hint or from log cf near t=0.

    Uses cumulants: Im log cf(h)/h -> mean and -2 Re log cf(h)/h^2 -> variance,
    with h = 1e-3/std (one refinement pass), Richardson-extrapolated.
    """
    if cf.moment_hint is not None:
        return float(cf.moment_hint[0]), float(cf.moment_hint[1])
    std = _std_guess(cf)
    mean = var = float("nan")
    for _ in range(2):
        mean, var = _cumulants(cf, _MOMENT_STEP / std)
        if not (np.isfinite(var) and var > 0):
            raise MomentError(f"non-positive variance estimate {var!r}")
        std = math.sqrt(var)
    return float(mean), float(std)


# --------------------------------------------------------------------- grid


def resolve_grid(cf: CharacteristicFunction, opts: InversionOptions = InversionOptions()) -> ResolvedGrid:
    """Domain by the sigma rule (with overrides), step 2*pi/(B-A), N+1 nodes."""
    if opts.x_min is not None and opts.x_max is not None:
        try:
            mean, std = estimate_moments(cf)
        except MomentError:
            mean, std = 0.5 * (opts.x_min + opts.x_max), float("nan")
    else:
        mean, std = estimate_moments(cf)
    a = mean - opts.sigma_rule * std if opts.x_min is None else float(opts.x_min)
    b = mean + opts.sigma_rule * std if opts.x_max is None else float(opts.x_max)
    if not b > a:
        raise DomainError(f"empty integration domain ({a}, {b})")
    dt = 2.0 * math.pi / (b - a)
    n = int(opts.n_nodes)
    nodes = dt * np.arange(n + 1, dtype=float)
    weights = np.ones(n + 1)
    weights[0] = weights[-1] = 0.5
    values = cf(nodes)
    tail = float(abs(values[-1]))
    warnings = []
    if not np.all(np.isfinite(values)):
        warnings.append("cf returned non-finite values on the grid")
    if tail > opts.tail_epsilon:
        warnings.append(f"|cf(T)| = {tail:.3e} exceeds tail_epsilon = {opts.tail_epsilon:.1e}; increase n_nodes")
    return ResolvedGrid(
        delta_t=dt,
        T=n * dt,
        nodes=nodes,
        weights=weights,
        domain=(a, b),
        mean=mean,
        std=std,
        tail_cf_magnitude=tail,
        warnings=tuple(warnings),
        cf_values=values,
        source=cf,
    )


def _values(cf, grid):
    if grid.source is cf and grid.cf_values is not None:
        return grid.cf_values
    return cf(grid.nodes)


def _sums(cf, x, grid):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    pdf, cdf = kernels.gp_sums(
        x.ravel(), grid.nodes, grid.weights, _values(cf, grid), grid.delta_t, grid.mean
    )
    return pdf.reshape(x.shape), cdf.reshape(x.shape)


def invert_pdf(cf: CharacteristicFunction, x, grid: ResolvedGrid) -> np.ndarray:
    """Raw trapezoidal PDF (may dip slightly below zero)."""
    return _sums(cf, x, grid)[0]


def invert_cdf(cf: CharacteristicFunction, x, grid: ResolvedGrid) -> np.ndarray:
    """Trapezoidal Gil-Pelaez CDF, clipped to [0, 1]."""
    return np.clip(_sums(cf, x, grid)[1], 0.0, 1.0)


# ---------------------------------------------------------------- quantiles


def _quantile_one(cf, p, grid, opts):
    lo, hi = grid.domain
    q = min(max(grid.mean, lo), hi)
    for _ in range(opts.max_newton_iters):
        pdf, cdf = _sums(cf, np.array([q]), grid)
        f = float(np.clip(cdf[0], 0.0, 1.0)) - p
        if abs(f) <= opts.quantile_tol:
            return q
        if f < 0:
            lo = q
        else:
            hi = q
        d = float(pdf[0])
        step_ok = d >= 1e-12
        if step_ok:
            nxt = q - f / d
            step_ok = lo < nxt < hi
        q = nxt if step_ok else 0.5 * (lo + hi)
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(q)):
            # flat region or tolerance below resolution
            return 0.5 * (lo + hi)
    raise ConvergenceError(f"quantile for p={p} did not converge in {opts.max_newton_iters} iterations")


def quantile(
    cf: CharacteristicFunction,
    probs: Sequence[float],
    grid: ResolvedGrid,
    opts: InversionOptions = InversionOptions(),
) -> list[tuple[float, float]]:
    """Newton iteration on the inverted CDF from the mean, bisection fallback on (A, B)."""
    out = []
    for p in probs:
        p = float(p)
        if not 0.0 < p < 1.0:
            raise DomainError(f"probabilities must lie in (0, 1), got {p}")
        out.append((p, float(_quantile_one(cf, p, grid, opts))))
    return out


def cf2dist(
    cf: CharacteristicFunction,
    x: Optional[Sequence[float]] = None,
    probs: Optional[Sequence[float]] = None,
    opts: InversionOptions = InversionOptions(),
) -> DistributionResult:
    """PDF and CDF on ``x`` plus quantiles at ``probs``.

    Without ``x`` a 100-point grid spanning the integration domain is used.
    Negative PDF values are clipped to 0 and the CDF to its running maximum
    along sorted x; raw extremes are kept in the diagnostics.
    """
    has_x = x is not None and len(x) > 0
    has_p = probs is not None and len(probs) > 0
    if not (has_x or has_p):
        raise DomainError("need x values or probabilities")
    grid = resolve_grid(cf, opts)
    xs = np.asarray(x, dtype=float) if has_x else np.linspace(grid.domain[0], grid.domain[1], 100)
    raw_pdf, raw_cdf = _sums(cf, xs, grid)
    order = np.argsort(xs, kind="stable")
    cdf = np.empty_like(raw_cdf)
    cdf[order] = np.maximum.accumulate(np.clip(raw_cdf[order], 0.0, 1.0))
    pdf = np.maximum(raw_pdf, 0.0)
    quants = quantile(cf, probs, grid, opts) if has_p else []
    diagnostics = {
        "tail_cf_magnitude": grid.tail_cf_magnitude,
        "domain": [grid.domain[0], grid.domain[1]],
        "n_nodes": int(opts.n_nodes),
        "delta_t": grid.delta_t,
        "mean": grid.mean,
        "std": grid.std,
        "pdf_raw_min": float(raw_pdf.min()),
        "cdf_raw_min": float(raw_cdf.min()),
        "cdf_raw_max": float(raw_cdf.max()),
        "warnings": list(grid.warnings),
    }
    return DistributionResult(xs, pdf, cdf, quants, diagnostics, grid)


# ------------------------------------------------------- chi-square helpers


def chi2_options(df: float, opts: Optional[InversionOptions] = None) -> InversionOptions:
    """Domain [0, B] with P(chi2_df > B) < e^-32 and enough nodes for the slow CF decay."""
    # Laurent-Massart: P(X - df >= 2 sqrt(df s) + 2 s) <= exp(-s)
    s = 32.0
    upper = df + 2.0 * math.sqrt(df * s) + 2.0 * s
    base = opts or InversionOptions()
    return InversionOptions(
        n_nodes=max(base.n_nodes, 1 << 16),
        x_min=0.0,
        x_max=upper,
        sigma_rule=base.sigma_rule,
        quantile_tol=base.quantile_tol,
        max_newton_iters=base.max_newton_iters,
        tail_epsilon=base.tail_epsilon,
    )


def chi2_quantile(prob: float, df: float, opts: Optional[InversionOptions] = None) -> float:
    """Chi-square quantile computed by inverting the chi-square CF."""
    c = chi2(df)
    o = chi2_options(df, opts)
    grid = resolve_grid(c, o)
    return quantile(c, [prob], grid, o)[0][1]


def wilks_chi2_approx_quantile(prob: float, p: int, n: int, q: int) -> float:
    """Quantile of -log(Lambda(p, n, q)) from the Bartlett-Rao chi-square(pq) approximation."""
    if not (p >= 1 and q >= 1 and n >= p):
        raise DomainError(f"invalid Wilks parameters p={p}, n={n}, q={q}")
    denom = n - 0.5 * (p - q + 1)
    if not denom > 0:
        raise DomainError(f"correction denominator n - (p - q + 1)/2 = {denom} is not positive")
    return chi2_quantile(prob, p * q) / denom
