"""Pure numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` algorithm for algorithm; results agree to rounding.
"""
import numpy as np

LANCZOS_G = 7.0
LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
HALF_LOG_2PI = 0.91893853320467274178
LOG_PI = 1.14472988584940017414
LOG_2 = 0.69314718055994530942

_CHUNK = 512


def clog1p(w):
    """log(1 + w) for complex w, accurate for small |w|."""
    w = np.asarray(w, dtype=complex)
    x, y = w.real, w.imag
    near = np.abs(w) < 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        re = np.where(near, 0.5 * np.log1p(x * (2.0 + x) + y * y), np.log(np.hypot(1.0 + x, y)))
    im = np.arctan2(y, 1.0 + x)
    return re + 1j * im


def cexpm1(z):
    """exp(z) - 1 for complex z, accurate for small |z|."""
    x, y = z.real, z.imag
    half = np.sin(0.5 * y)
    re = np.expm1(x) * np.cos(y) - 2.0 * half * half
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


def _lanczos_series(z):
    # A_g(z - 1) = c0 + sum_k c_k / (z - 1 + k)
    s = np.full(z.shape, LANCZOS_COEF[0], dtype=complex)
    for k in range(1, 9):
        s = s + LANCZOS_COEF[k] / (z + (k - 1.0))
    return s


def _lanczos_loggamma(z):
    """log Gamma(z) for Re z >= 0.5."""
    tt = z + (LANCZOS_G - 0.5)
    return HALF_LOG_2PI + (z - 0.5) * np.log(tt) - tt + np.log(_lanczos_series(z))


def _logsinpi_upper(z):
    # continuous log sin(pi z) on Im z >= 0
    return (-1j * np.pi) * z + (0.5j * np.pi - LOG_2) + np.log(-cexpm1((2j * np.pi) * z))


def loggamma(z):
    """Vectorized log Gamma on complex input; poles must be screened by the caller."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    flip = flat.imag < 0.0
    zz = np.where(flip, flat.conj(), flat)
    out = np.empty_like(zz)
    right = zz.real >= 0.5
    if right.any():
        out[right] = _lanczos_loggamma(zz[right])
    left = ~right
    if left.any():
        zl = zz[left]
        out[left] = LOG_PI - _logsinpi_upper(zl) - _lanczos_loggamma(1.0 - zl)
    out[flip] = out[flip].conj()
    return out.reshape(z.shape)


def loggamma_ratio(a, b):
    """log Gamma(a) - log Gamma(b), elementwise on broadcast complex arrays."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))
    a = a.ravel()
    b = b.ravel()
    out = np.empty(a.shape, dtype=complex)
    both = (a.real >= 0.5) & (b.real >= 0.5)
    if both.any():
        aa, bb = a[both], b[both]
        d = aa - bb
        tb = bb + (LANCZOS_G - 0.5)
        # S(a) - S(b) = -d * sum_k c_k / ((a-1+k)(b-1+k))
        ds = np.zeros(aa.shape, dtype=complex)
        for k in range(1, 9):
            ds = ds + LANCZOS_COEF[k] / ((aa + (k - 1.0)) * (bb + (k - 1.0)))
        sb = _lanczos_series(bb)
        out[both] = (
            (aa - 0.5) * clog1p(d / tb)
            + d * (np.log(tb) - 1.0)
            + clog1p(-d * ds / sb)
        )
    rest = ~both
    if rest.any():
        out[rest] = loggamma(a[rest]) - loggamma(b[rest])
    return out


def gp_sums(x, t, w, cf, dt, mean):
    """Trapezoidal Gil-Pelaez sums.

    Returns ``(pdf, cdf)`` at the points ``x`` from CF values ``cf`` at nodes
    ``t`` (``t[0] == 0``) with weights ``w``. The t=0 CDF term uses the limit
    ``mean - x``.
    """
    x = np.ascontiguousarray(x, dtype=float)
    t = np.ascontiguousarray(t, dtype=float)
    w = np.ascontiguousarray(w, dtype=float)
    cf = np.ascontiguousarray(cf, dtype=complex)
    wr = w[1:] * cf.real[1:]
    wi = w[1:] * cf.imag[1:]
    t1 = t[1:]
    wr_t = wr / t1
    wi_t = wi / t1
    pdf = np.empty(x.shape)
    cdf = np.empty(x.shape)
    for start in range(0, x.size, _CHUNK):
        xs = x[start:start + _CHUNK]
        phase = np.multiply.outer(xs, t1)
        c = np.cos(phase)
        s = np.sin(phase)
        sp = w[0] * cf.real[0] + c @ wr + s @ wi
        sc = w[0] * (mean - xs) + c @ wi_t - s @ wr_t
        pdf[start:start + _CHUNK] = sp
        cdf[start:start + _CHUNK] = sc
    pdf *= dt / np.pi
    cdf = 0.5 - (dt / np.pi) * cdf
    return pdf, cdf
