"""Bessel J: ascending series with guard digits, and the Mellin-Barnes integral."""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
from mpmath import mp

from ..errors import ContourError, DomainError, PrecisionError
from ..precision import PrecisionPolicy, resolve
from .contour import ContourSpec, line_integral


def _log10_peak_term(nu: float, x: float) -> float:
    # log10 of the largest |term| (x/2)^(2m+nu) / (m! Gamma(m+nu+1))
    lx = math.log(x / 2)
    best = -math.inf
    m_hi = int(x + abs(nu) + 10)
    for m in range(m_hi + 1):
        v = (2 * m + nu) * lx - math.lgamma(m + 1) - math.lgamma(m + nu + 1)
        best = max(best, v)
    return best / math.log(10)


def _series(nu, x, dps):
    with mp.workdps(dps):
        nu = mpmath.mpf(nu)
        x = mpmath.mpf(x)
        h2 = -(x / 2) ** 2
        term = (x / 2) ** nu / mpmath.gamma(nu + 1)
        total = term
        eps = mpmath.mpf(10) ** (-dps)
        m = 0
        while True:
            m += 1
            term = term * h2 / (m * (m + nu))
            total += term
            if m > x and abs(term) <= eps * max(abs(total), eps):
                break
        return +total


@lru_cache(maxsize=200_000)
def _bessel_cached(nu_key, x_key, digits):
    nu = mpmath.mpf(nu_key)
    x = mpmath.mpf(x_key)
    peak = max(0.0, _log10_peak_term(float(nu), float(x)))
    dps = digits + 10 + math.ceil(peak)
    val = _series(nu, x, dps)
    with mp.workdps(dps):
        lost = peak - (float(mpmath.log10(abs(val))) if val != 0 else -digits)
    if lost > dps - digits - 5:
        # the result is much smaller than the peak term: redo with enough headroom
        dps = digits + 15 + math.ceil(lost)
        val = _series(nu, x, dps)
    return val


def bessel_j(nu, x, policy: PrecisionPolicy | None = None):
    """J_nu(x) for real nu >= 0 and x > 0 from the ascending series.

    The series alternates and its largest term can exceed the result by many
    orders of magnitude; the working precision is raised by that ratio so the
    result keeps ``working_digits`` significant digits.
    """
    pol = resolve(policy)
    nu = mpmath.mpf(nu)
    x = mpmath.mpf(x)
    if x <= 0:
        raise DomainError("bessel_j needs x > 0")
    if nu < 0:
        raise DomainError("bessel_j needs nu >= 0")
    with mp.workdps(pol.working_digits + 10):
        v = _bessel_cached(nu, x, pol.working_digits)
    return +v


def bessel_j_mb(nu, x, spec: ContourSpec | None = None, policy: PrecisionPolicy | None = None):
    """J_nu(x) from its Mellin-Barnes integral.

    (1/2 pi i) int_(sigma) x^(-s-1) 2^s Gamma((nu+1+s)/2) / Gamma((nu+1-s)/2) ds,
    with -1-nu < sigma < 0.  The integrand decays only like |t|^sigma on the
    line, so the contour is bent into left horizontal rays at +-height where
    it decays super-exponentially.  No poles are crossed: they all lie on
    the real axis left of -1-nu.
    """
    pol = resolve(policy)
    nu = mpmath.mpf(nu)
    x = mpmath.mpf(x)
    if x <= 0:
        raise DomainError("bessel_j_mb needs x > 0")
    if spec is None:
        spec = ContourSpec(sigma=-0.5, height=4.0, panels=4, tails="left")
    if not (-1 - nu < spec.sigma < 0):
        raise ContourError("need -1 - nu < sigma < 0")
    if spec.tails != "left":
        spec = spec.with_(tails="left")
    # cancellation on the rays scales like e^x
    extra = int(float(x) / math.log(10)) + 15
    with mp.workdps(pol.working_digits + extra):
        lx = mpmath.log(x)
        l2 = mpmath.log(2)

        def g(s):
            return mpmath.exp(-(s + 1) * lx + s * l2 + mpmath.loggamma((nu + 1 + s) / 2) - mpmath.loggamma((nu + 1 - s) / 2))

        tol = mpmath.mpf(10) ** (-pol.working_digits) / 10
        v = line_integral(g, spec, pol, real=True, tol=tol)
    if not mpmath.isfinite(v):
        raise PrecisionError("Mellin-Barnes evaluation failed")
    return +v


def bessel_j_float(nu, x):
    """Vectorised float64 J_nu(x) for bulk screening (scipy)."""
    from scipy.special import jv

    return jv(nu, x)
