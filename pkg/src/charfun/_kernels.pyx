# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: complex log-gamma and the trapezoidal Gil-Pelaez sums.

Same algorithms as ``_kernels_py``; complex helpers are written on real
parts to avoid depending on C99 ``complex.h``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, cos, exp, expm1, hypot, log, log1p, sin

cnp.import_array()

cdef double LANCZOS_G = 7.0
cdef double[9] COEF
COEF[:] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double HALF_LOG_2PI = 0.91893853320467274178
cdef double LOG_PI = 1.14472988584940017414
cdef double LOG_2 = 0.69314718055994530942
cdef double PI = 3.14159265358979323846


cdef inline double complex _clog(double complex z) nogil:
    return log(hypot(z.real, z.imag)) + 1j * atan2(z.imag, z.real)


cdef inline double complex _clog1p(double complex w) nogil:
    cdef double x = w.real, y = w.imag
    if hypot(x, y) < 0.5:
        return 0.5 * log1p(x * (2.0 + x) + y * y) + 1j * atan2(y, 1.0 + x)
    return log(hypot(1.0 + x, y)) + 1j * atan2(y, 1.0 + x)


cdef inline double complex _cexpm1(double complex z) nogil:
    cdef double h = sin(0.5 * z.imag)
    return (expm1(z.real) * cos(z.imag) - 2.0 * h * h) + 1j * (exp(z.real) * sin(z.imag))


cdef inline double complex _series(double complex z) nogil:
    cdef double complex s = COEF[0]
    cdef int k
    for k in range(1, 9):
        s = s + COEF[k] / (z + (k - 1.0))
    return s


cdef inline double complex _lanczos(double complex z) nogil:
    cdef double complex tt = z + (LANCZOS_G - 0.5)
    return HALF_LOG_2PI + (z - 0.5) * _clog(tt) - tt + _clog(_series(z))


cdef inline double complex _loggamma_one(double complex z) nogil:
    cdef bint flip = z.imag < 0.0
    cdef double complex zz, r, lsin
    if flip:
        zz = z.real - 1j * z.imag
    else:
        zz = z
    if zz.real >= 0.5:
        r = _lanczos(zz)
    else:
        lsin = (-1j * PI) * zz + (0.5j * PI - LOG_2) + _clog(-_cexpm1((2j * PI) * zz))
        r = LOG_PI - lsin - _lanczos(1.0 - zz)
    if flip:
        r = r.real - 1j * r.imag
    return r


cdef inline double complex _ratio_one(double complex a, double complex b) nogil:
    cdef double complex d, tb, ds, sb
    cdef int k
    if a.real >= 0.5 and b.real >= 0.5:
        d = a - b
        tb = b + (LANCZOS_G - 0.5)
        ds = 0.0
        for k in range(1, 9):
            ds = ds + COEF[k] / ((a + (k - 1.0)) * (b + (k - 1.0)))
        sb = _series(b)
        return (a - 0.5) * _clog1p(d / tb) + d * (_clog(tb) - 1.0) + _clog1p(-d * ds / sb)
    return _loggamma_one(a) - _loggamma_one(b)


def loggamma(z):
    """Vectorized log Gamma on complex input; poles must be screened by the caller."""
    arr = np.ascontiguousarray(z, dtype=np.complex128)
    cdef double complex[::1] zin = arr.ravel()
    out = np.empty(zin.shape[0], dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(zin.shape[0]):
            o[i] = _loggamma_one(zin[i])
    return out.reshape(arr.shape)


def loggamma_ratio(a, b):
    """log Gamma(a) - log Gamma(b), elementwise on broadcast complex arrays."""
    aa, bb = np.broadcast_arrays(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))
    cdef const double complex[::1] av = np.ascontiguousarray(aa).ravel()
    cdef const double complex[::1] bv = np.ascontiguousarray(bb).ravel()
    out = np.empty(av.shape[0], dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(av.shape[0]):
            o[i] = _ratio_one(av[i], bv[i])
    return out


def gp_sums(x, t, w, cf, double dt, double mean):
    """Trapezoidal Gil-Pelaez sums; see ``_kernels_py.gp_sums``.

    For equidistant nodes the phase exp(-i t_j x) is advanced by complex
    rotation and re-anchored with exact cos/sin every ``ANCHOR`` steps.
    """
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    tarr = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] tv = tarr
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double complex[::1] cv = np.ascontiguousarray(cf, dtype=np.complex128)
    cdef Py_ssize_t n = xv.shape[0], m = tv.shape[0], i, j
    cdef Py_ssize_t ANCHOR = 32
    cdef Py_ssize_t BLOCK = 4096
    cdef bint uniform = m > 2 and bool(np.allclose(np.diff(tarr), tarr[1] - tarr[0], rtol=1e-9, atol=0.0))
    cdef double step = tarr[1] - tarr[0] if m > 1 else 0.0
    pdf = np.empty(n)
    cdf = np.empty(n)
    cdef double[::1] po = pdf
    cdef double[::1] co = cdf
    wr_arr = np.empty(m)
    wi_arr = np.empty(m)
    wrt_arr = np.zeros(m)
    wit_arr = np.zeros(m)
    cdef double[::1] wr = wr_arr
    cdef double[::1] wi = wi_arr
    cdef double[::1] wrt = wrt_arr
    cdef double[::1] wit = wit_arr
    cdef double xi, c, s, c1, s1, cn, sp, sc, scale = dt / PI
    for j in range(m):
        wr[j] = wv[j] * cv[j].real
        wi[j] = wv[j] * cv[j].imag
        if j > 0:
            wrt[j] = wr[j] / tv[j]
            wit[j] = wi[j] / tv[j]
    spa = np.empty(n)
    sca = np.empty(n)
    cdef double[::1] spv = spa
    cdef double[::1] scv = sca
    cdef Py_ssize_t j0, j1, jstart
    with nogil:
        for i in range(n):
            spv[i] = wr[0]
            scv[i] = wv[0] * (mean - xv[i])
        # blocks of BLOCK nodes stay in cache while every x is swept;
        # the summation order per x is still j = 1, 2, ..., m-1
        j0 = 1
        while j0 < m:
            j1 = j0 + BLOCK
            if j1 > m:
                j1 = m
            for i in range(n):
                xi = xv[i]
                sp = spv[i]
                sc = scv[i]
                if uniform:
                    c1 = cos(step * xi)
                    s1 = sin(step * xi)
                    c = cos(tv[j0] * xi)
                    s = sin(tv[j0] * xi)
                    jstart = j0 + 1
                    sp = sp + c * wr[j0] + s * wi[j0]
                    sc = sc + c * wit[j0] - s * wrt[j0]
                else:
                    jstart = j0
                for j in range(jstart, j1):
                    if not uniform or j % ANCHOR == 0:
                        c = cos(tv[j] * xi)
                        s = sin(tv[j] * xi)
                    else:
                        cn = c * c1 - s * s1
                        s = s * c1 + c * s1
                        c = cn
                    sp = sp + c * wr[j] + s * wi[j]
                    sc = sc + c * wit[j] - s * wrt[j]
                spv[i] = sp
                scv[i] = sc
            j0 = j1
        for i in range(n):
            po[i] = scale * spv[i]
            co[i] = 0.5 - scale * scv[i]
    return pdf, cdf
