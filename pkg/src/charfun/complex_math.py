"""Complex log-gamma and gamma ratios.

Branch convention
-----------------
``cgamma_ln`` returns the standard analytic branch of log Gamma: the one that
is real on the positive real axis and continuous everywhere except across the
negative real axis (the same convention as ``scipy.special.loggamma`` and
``mpmath.loggamma``). On the negative real axis the limit from above is
returned, so conjugate symmetry holds everywhere except on that cut.

Downstream code only ever exponentiates sums and differences of these values,
so any consistent branch would do.
"""
import numpy as np

from ._backend import kernels
from .errors import DomainError, PoleError


def _as_complex(z, name="z"):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _check_poles(arr, name="z"):
    re = arr.real
    poles = (arr.imag == 0.0) & (re <= 0.0) & (re == np.floor(re))
    if np.any(poles):
        bad = arr[poles].ravel()[0]
        raise PoleError(f"{name}={bad.real:g} is a pole of the gamma function")


def _finish(out, scalar):
    if not np.all(np.isfinite(out)):
        raise OverflowError("log-gamma result is not finite")
    return complex(out.ravel()[0]) if scalar else out


def cgamma_ln(z):
    """Principal log Gamma(z) for complex scalar or array ``z``.

    Lanczos approximation (g=7, 9 terms) on Re z >= 1/2 and the reflection
    formula elsewhere. Relative accuracy of exp(result) is about 1e-13 for
    |z| <= 1e3.
    """
    arr = _as_complex(z)
    _check_poles(arr)
    return _finish(kernels.loggamma(arr), arr.ndim == 0)


def gamma_ratio_ln(num, den):
    """log(Gamma(num) / Gamma(den)), elementwise with broadcasting.

    When both arguments lie in Re >= 1/2 the Lanczos forms are subtracted
    analytically, so nearby arguments do not lose digits to cancellation.
    The imaginary part may differ from ``cgamma_ln(num) - cgamma_ln(den)``
    by a multiple of 2*pi.
    """
    a = _as_complex(num, "num")
    b = _as_complex(den, "den")
    _check_poles(a, "num")
    _check_poles(b, "den")
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = kernels.loggamma_ratio(a, b).reshape(shape)
    return _finish(out, len(shape) == 0)
