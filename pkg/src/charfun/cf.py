"""Characteristic functions of classical test statistics and CF combinators.

Gamma-ratio CFs are assembled in log space from ``gamma_ratio_ln`` and
exponentiated once, so large degrees of freedom do not overflow.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ._kernels_py import cexpm1, clog1p
from .complex_math import gamma_ratio_ln
from .errors import DomainError

CF_PRODUCT_TERMS = 10_000
_SMALL_T = 1e-8


@dataclass(frozen=True)
class CharacteristicFunction:
    """Evaluatable CF with optional support and moment metadata.

    ``func`` maps a float array of t to complex values. Calling the object
    forces ``cf(0) == 1`` exactly and returns a scalar for scalar input.
    """

    func: Callable[[np.ndarray], np.ndarray]
    support_min: Optional[float] = None
    moment_hint: Optional[tuple[float, float]] = None
    name: str = "cf"

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(arr).ravel()
        out = np.asarray(self.func(flat), dtype=complex).reshape(flat.shape)
        out = np.where(flat == 0.0, 1.0 + 0.0j, out)
        if arr.ndim == 0:
            return complex(out[0])
        return out.reshape(arr.shape)


@dataclass(frozen=True)
class BartlettCoefficients:
    b: float
    c: float
    nu_total: float


def _t(t):
    return np.asarray(t, dtype=float)


def _chi2_log(t, df):
    # log (1 - 2it)^(-df/2); Re(1 - 2it) = 1 keeps the principal branch continuous
    return -0.5 * df * clog1p(-2j * t)


def cf_chi2(t, df):
    """CF of the chi-square distribution, (1 - 2it)^(-df/2)."""
    if not df > 0:
        raise DomainError(f"df must be positive, got {df}")
    return np.exp(_chi2_log(_t(t), df))


def _check_lambdas(lambdas):
    lam = np.asarray(lambdas, dtype=float).ravel()
    if lam.size == 0 or np.any(lam < 0) or not np.any(lam > 0):
        raise DomainError("lambdas must be nonnegative with at least one positive")
    return lam


def cf_quadform(t, lambdas):
    """CF of sum_j lambda_j Q_j with Q_j iid chi-square(1)."""
    lam = _check_lambdas(lambdas)
    t = _t(t)
    acc = np.zeros(t.shape, dtype=complex)
    for value, count in Counter(lam[lam > 0].tolist()).items():
        acc += _chi2_log(value * t, count)
    return np.exp(acc)


def _weights_array(weights, terms):
    if callable(weights):
        w = np.asarray(weights(np.arange(1, terms + 1, dtype=float)), dtype=float)
    else:
        w = np.asarray(weights, dtype=float)[:terms]
    if w.size != terms or np.any(w <= 0):
        raise DomainError("need `terms` positive weights")
    return w


def cf_weighted_chi2_product(t, weights, terms):
    """Truncated product prod_{j<=terms} (1 - 2i w_j t)^(-1/2).

    ``weights`` is either a vectorized callable j -> w_j (j starts at 1)
    or a sequence with at least ``terms`` entries.
    """
    if terms < 1:
        raise DomainError("terms must be >= 1")
    w = _weights_array(weights, int(terms))
    t = _t(t)
    flat = np.atleast_1d(t).ravel()
    out = np.empty(flat.shape, dtype=complex)
    chunk = max(1, 2_000_000 // w.size)
    for start in range(0, flat.size, chunk):
        ts = flat[start:start + chunk]
        out[start:start + chunk] = -0.5 * clog1p(-2j * np.multiply.outer(ts, w)).sum(axis=1)
    return np.exp(out).reshape(t.shape)


def cvm_weight(j):
    return 1.0 / (j * np.pi) ** 2


def ad_weight(j):
    return 1.0 / (j * (j + 1.0))


def _closed_form(t, log_half_square, power_sums):
    # evaluates on |t|, conjugates for t < 0; tiny |t| uses the cumulant series
    # log cf = sum_n (2it)^n S_n / (2n) with S_n = sum_j w_j^n
    t = _t(t)
    flat = np.atleast_1d(t).ravel()
    a = np.abs(flat)
    out = np.ones(flat.shape, dtype=complex)
    small = (a > 0) & (a < _SMALL_T)
    big = a >= _SMALL_T
    if small.any():
        z = 2j * a[small]
        s1, s2 = power_sums
        out[small] = np.exp(0.5 * s1 * z + 0.25 * s2 * z * z)
    if big.any():
        out[big] = np.exp(0.5 * log_half_square(a[big]))
    out = np.where(flat < 0, out.conj(), out)
    return out.reshape(t.shape)


def _cvm_log_square(t):
    # log(z / sin z) with z = sqrt(2it), continuous in t > 0
    z = np.sqrt(t) * (1.0 + 1.0j)
    return np.log(z) + 1j * z - np.log(-cexpm1(2j * z)) - 0.5j * np.pi + math.log(2.0)


def _ad_log_square(t):
    # log(-2 pi i t / cos u), u = (pi/2) sqrt(1 + 8it) = pi/2 + v
    root = np.sqrt(1.0 + 8j * t)
    v = 0.5 * np.pi * (8j * t) / (root + 1.0)
    u = 0.5 * np.pi + v
    return (np.log(2.0 * np.pi * t) - 0.5j * np.pi) + 1j * u - np.log(-cexpm1(2j * v)) + math.log(2.0)


def cf_cvm_closed(t):
    """Asymptotic Cramer-von Mises CF, sqrt(sqrt(2it) / sin(sqrt(2it)))."""
    return _closed_form(t, _cvm_log_square, (1.0 / 6.0, 1.0 / 90.0))


def cf_ad_closed(t):
    """Asymptotic Anderson-Darling CF, sqrt(-2 pi i t / cos((pi/2) sqrt(1 + 8it)))."""
    return _closed_form(t, _ad_log_square, (1.0, math.pi ** 2 / 3.0 - 3.0))


def _log_beta_log(t, alpha, beta, coef):
    s = 1j * coef * _t(t)
    return gamma_ratio_ln(alpha + s, alpha) + gamma_ratio_ln(alpha + beta, alpha + beta + s)


def cf_log_beta(t, alpha, beta, coef=1.0):
    """CF of coef * log(B) with B ~ Beta(alpha, beta)."""
    if not (alpha > 0 and beta > 0):
        raise DomainError("alpha and beta must be positive")
    return np.exp(_log_beta_log(t, alpha, beta, coef))


def _check_weights(alpha, weight):
    alpha = np.asarray(alpha, dtype=float).ravel()
    weight = np.asarray(weight, dtype=float).ravel()
    if alpha.size != weight.size or alpha.size == 0:
        raise DomainError("alpha and weight must be nonempty and of equal length")
    if np.any(alpha <= 0) or np.any(weight <= 0):
        raise DomainError("alpha and weights must be positive")
    if abs(weight.sum() - 1.0) > 1e-10:
        raise DomainError(f"weights must sum to 1, got {weight.sum()!r}")
    return alpha, weight


def _means_ratio_log(t, k, alpha, weight, coef):
    s = 1j * coef * _t(t)
    total = float(alpha.sum())
    acc = s * math.log(k) + gamma_ratio_ln(total, total + s)
    for (a, w), count in Counter(zip(alpha.tolist(), weight.tolist())).items():
        acc = acc + count * gamma_ratio_ln(a + w * s, a)
    return acc


def cf_log_means_ratio(t, k, alpha, weight, coef=1.0):
    """CF of coef * log(R_w), R_w the weighted geometric over arithmetic mean
    of k independent Gamma(alpha_l) variables with a common scale.
    """
    alpha, weight = _check_weights(alpha, weight)
    if alpha.size != k:
        raise DomainError(f"expected {k} shape parameters, got {alpha.size}")
    return np.exp(_means_ratio_log(t, k, alpha, weight, coef))


def _check_bartlett(k, nu):
    nu = np.asarray(nu, dtype=float).ravel()
    if k < 2:
        raise DomainError("Bartlett's test needs k >= 2 groups")
    if nu.size != k:
        raise DomainError(f"expected {k} degrees of freedom, got {nu.size}")
    if np.any(nu <= 0):
        raise DomainError("degrees of freedom must be positive")
    return nu


def bartlett_coefficients(k, nu):
    """Correction factor b, shift constant c and total degrees of freedom."""
    nu = _check_bartlett(k, nu)
    total = float(nu.sum())
    b = 1.0 + (np.sum(1.0 / nu) - 1.0 / total) / (3.0 * (k - 1))
    c = total * math.log(k / total) + float(np.sum(nu * np.log(nu)))
    return BartlettCoefficients(b=float(b), c=c, nu_total=total)


def cf_bartlett(t, k, nu):
    """Exact null CF of Bartlett's corrected statistic."""
    nu = _check_bartlett(k, nu)
    co = bartlett_coefficients(k, nu)
    t = _t(t)
    s = 1j * t / co.b
    half = 0.5 * co.nu_total
    acc = s * (co.c - co.nu_total * math.log(k)) + gamma_ratio_ln(half, half - co.nu_total * s)
    for v, count in Counter(nu.tolist()).items():
        acc = acc + count * gamma_ratio_ln(0.5 * v - v * s, 0.5 * v)
    return np.exp(acc)


def _check_wilks(p, n, q):
    if not (p >= 1 and q >= 1 and n >= p):
        raise DomainError(f"Wilks lambda needs n >= p >= 1 and q >= 1, got p={p}, n={n}, q={q}")


def cf_wilks_log(t, p, n, q, coef=-1.0):
    """CF of coef * log(Lambda(p, n, q)); coef=-1 gives lambda = -log(Lambda)."""
    _check_wilks(p, n, q)
    acc = 0.0
    for j in range(1, int(p) + 1):
        acc = acc + _log_beta_log(t, 0.5 * (n - j + 1), 0.5 * q, coef)
    return np.exp(acc)


def _check_wilks_cs(p, n, q):
    if not (p >= 2 and q >= 2 and n > q):
        raise DomainError(f"compound-symmetry Wilks needs p >= 2 and n > q >= 2, got p={p}, n={n}, q={q}")


def cf_wilks_cs_log(t, p, n, q):
    """CF of -log(Lambda_CS) under compound symmetry, Lambda_CS ~ B1 * B2^(p-1)."""
    _check_wilks_cs(p, n, q)
    m = p - 1
    return np.exp(
        _log_beta_log(t, 0.5 * (n - q), 0.5 * (q - 1), -1.0)
        + _log_beta_log(t, 0.5 * m * (n - q), 0.5 * m * (q - 1), -float(m))
    )


# ---------------------------------------------------------------- combinators


def shift_scale(cf: CharacteristicFunction, shift: float = 0.0, scale: float = 1.0) -> CharacteristicFunction:
    """CF of scale * Y + shift, i.e. t -> exp(i shift t) cf(scale t)."""
    shift = float(shift)
    scale = float(scale)

    def func(t):
        return np.exp(1j * shift * t) * cf(scale * t)

    support = None
    if cf.support_min is not None and scale > 0:
        support = scale * cf.support_min + shift
    hint = None
    if cf.moment_hint is not None:
        hint = (scale * cf.moment_hint[0] + shift, abs(scale) * cf.moment_hint[1])
    return CharacteristicFunction(func, support, hint, f"{scale:g}*{cf.name}+{shift:g}")


def product(cfs: Sequence[CharacteristicFunction]) -> CharacteristicFunction:
    """CF of a sum of independent variables."""
    cfs = list(cfs)
    if not cfs:
        raise DomainError("product needs at least one CF")
    if len(cfs) == 1:
        return cfs[0]

    def func(t):
        out = cfs[0](t)
        for other in cfs[1:]:
            out = out * other(t)
        return out

    support = None
    if all(c.support_min is not None for c in cfs):
        support = float(sum(c.support_min for c in cfs))
    hint = None
    if all(c.moment_hint is not None for c in cfs):
        hint = (
            float(sum(c.moment_hint[0] for c in cfs)),
            math.sqrt(sum(c.moment_hint[1] ** 2 for c in cfs)),
        )
    return CharacteristicFunction(func, support, hint, "*".join(c.name for c in cfs))


# ------------------------------------------------------------------ builders


def chi2(df) -> CharacteristicFunction:
    if not df > 0:
        raise DomainError(f"df must be positive, got {df}")
    return CharacteristicFunction(
        lambda t: cf_chi2(t, df), 0.0, (float(df), math.sqrt(2.0 * df)), f"chi2({df:g})"
    )


def quadform(lambdas) -> CharacteristicFunction:
    lam = _check_lambdas(lambdas)
    hint = (float(lam.sum()), math.sqrt(2.0 * float(np.sum(lam ** 2))))
    return CharacteristicFunction(lambda t: cf_quadform(t, lam), 0.0, hint, "quadform")


def cvm(terms: Optional[int] = None) -> CharacteristicFunction:
    """Asymptotic Cramer-von Mises; closed form, or truncated product when ``terms`` is given."""
    hint = (1.0 / 6.0, math.sqrt(1.0 / 45.0))
    if terms is None:
        return CharacteristicFunction(cf_cvm_closed, 0.0, hint, "cvm")
    return CharacteristicFunction(
        lambda t: cf_weighted_chi2_product(t, cvm_weight, terms), 0.0, hint, f"cvm[{terms}]"
    )


def ad(terms: Optional[int] = None) -> CharacteristicFunction:
    """Asymptotic Anderson-Darling; closed form, or truncated product when ``terms`` is given."""
    hint = (1.0, math.sqrt(2.0 * math.pi ** 2 / 3.0 - 6.0))
    if terms is None:
        return CharacteristicFunction(cf_ad_closed, 0.0, hint, "ad")
    return CharacteristicFunction(
        lambda t: cf_weighted_chi2_product(t, ad_weight, terms), 0.0, hint, f"ad[{terms}]"
    )


def log_beta(alpha, beta, coef=1.0) -> CharacteristicFunction:
    if not (alpha > 0 and beta > 0):
        raise DomainError("alpha and beta must be positive")
    return CharacteristicFunction(
        lambda t: cf_log_beta(t, alpha, beta, coef),
        0.0 if coef < 0 else None,
        None,
        "log_beta",
    )


def log_means_ratio(k, alpha, weight, coef=1.0) -> CharacteristicFunction:
    alpha, weight = _check_weights(alpha, weight)
    if alpha.size != k:
        raise DomainError(f"expected {k} shape parameters, got {alpha.size}")
    return CharacteristicFunction(
        lambda t: np.exp(_means_ratio_log(t, k, alpha, weight, coef)),
        0.0 if coef < 0 else None,
        None,
        "log_means_ratio",
    )


def bartlett(k, nu) -> CharacteristicFunction:
    nu = _check_bartlett(k, nu)
    return CharacteristicFunction(lambda t: cf_bartlett(t, k, nu), 0.0, None, "bartlett")


def wilks_log(p, n, q, coef=-1.0) -> CharacteristicFunction:
    _check_wilks(p, n, q)
    return CharacteristicFunction(
        lambda t: cf_wilks_log(t, p, n, q, coef), 0.0 if coef < 0 else None, None, "wilks"
    )


def wilks_cs_log(p, n, q) -> CharacteristicFunction:
    _check_wilks_cs(p, n, q)
    return CharacteristicFunction(lambda t: cf_wilks_cs_log(t, p, n, q), 0.0, None, "wilks_cs")


# ------------------------------------------------------ statistic descriptors

VARIANTS = (
    "bartlett", "wilks", "wilks_cs", "quadform", "cvm", "ad", "log_beta", "log_means_ratio",
)


@dataclass(frozen=True)
class StatisticSpec:
    """Named statistic plus its parameters.

    Parameter names per variant: bartlett (k, nu); wilks and wilks_cs
    (p, n, q); quadform (lambdas); cvm/ad (optional terms); log_beta
    (alpha, beta, coef); log_means_ratio (k, alpha, weight, coef).
    """

    variant: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown statistic {self.variant!r}")
        self.build()  # validates parameters eagerly

    def build(self) -> CharacteristicFunction:
        p = self.params
        v = self.variant
        if v == "bartlett":
            return bartlett(p["k"], p["nu"])
        if v == "wilks":
            return wilks_log(p["p"], p["n"], p["q"], p.get("coef", -1.0))
        if v == "wilks_cs":
            return wilks_cs_log(p["p"], p["n"], p["q"])
        if v == "quadform":
            return quadform(p["lambdas"])
        if v == "cvm":
            return cvm(p.get("terms"))
        if v == "ad":
            return ad(p.get("terms"))
        if v == "log_beta":
            return log_beta(p["alpha"], p["beta"], p.get("coef", 1.0))
        return log_means_ratio(p["k"], p["alpha"], p["weight"], p.get("coef", 1.0))

    def describe(self) -> dict:
        out = {"statistic": self.variant}
        for key, value in self.params.items():
            out[key] = list(value) if isinstance(value, (list, tuple, np.ndarray)) else value
        return out
