"""Gamma-family functions (thin typed wrappers over mpmath)."""

from __future__ import annotations

import mpmath
from mpmath import mp

from ..errors import DomainError, PoleError
from ..precision import PrecisionPolicy, resolve


def _is_nonpositive_integer(z) -> bool:
    z = mpmath.mpmathify(z)
    return mpmath.im(z) == 0 and mpmath.re(z) <= 0 and mpmath.isint(mpmath.re(z))


def log_gamma(z, policy: PrecisionPolicy | None = None):
    """Principal branch of log Gamma(z)."""
    pol = resolve(policy)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at z={z}")
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.loggamma(mpmath.mpmathify(z))
    return +v


def digamma(x, policy: PrecisionPolicy | None = None):
    """psi(x) = Gamma'(x)/Gamma(x) for real x > 0."""
    pol = resolve(policy)
    x = mpmath.mpmathify(x)
    if mpmath.im(x) != 0 or x <= 0:
        raise DomainError("digamma is defined here for real x > 0 only")
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.digamma(x)
    return +v


def gamma_ratio(a, b, policy: PrecisionPolicy | None = None):
    """Gamma(a)/Gamma(b) through log-gamma, stable for large arguments."""
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.exp(log_gamma(a, pol) - log_gamma(b, pol))
        if mpmath.im(v) == 0 or (mpmath.im(a) == 0 and mpmath.im(b) == 0):
            v = mpmath.re(v)
    return +v
