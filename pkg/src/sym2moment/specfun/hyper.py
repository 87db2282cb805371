"""Gauss hypergeometric series with guard digits, and Ferrers functions P^mu_nu."""

from __future__ import annotations

import math

import mpmath
from mpmath import mp

from ..errors import DomainError, PoleError, PrecisionError
from ..precision import PrecisionPolicy, resolve

SERIES_RADIUS = 0.75


def _is_nonpos_int(c) -> bool:
    c = mpmath.mpmathify(c)
    return mpmath.im(c) == 0 and mpmath.re(c) <= 0 and mpmath.isint(mpmath.re(c))


def _series(a, b, c, z, dps, max_terms=10**6):
    """Plain summation of sum (a)_n (b)_n / ((c)_n n!) z^n.

    Returns (value, log10 of the largest term).  The stopping rule bounds the
    remainder by a geometric series once n > 2(|a| + |b| + |c|) + 10, where the
    term ratio is below |z| (1 + |a|/n)(1 + |b|/n) / (1 - |c|/n) < 1.
    """
    with mp.workdps(dps):
        a, b, c, z = (mpmath.mpmathify(v) for v in (a, b, c, z))
        eps = mpmath.mpf(10) ** (-dps)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        peak = mpmath.mpf(1)
        n0 = 2 * (abs(a) + abs(b) + abs(c)) + 10
        az = abs(z)
        n = 0
        while n < max_terms:
            term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            n += 1
            total += term
            at = abs(term)
            if at > peak:
                peak = at
            if term == 0:
                break
            if n > n0:
                rho = az * (1 + abs(a) / n) * (1 + abs(b) / n) / (1 - abs(c) / n)
                if rho < 1 and at * rho / (1 - rho) <= eps * abs(total):
                    break
        else:
            raise PrecisionError("hypergeometric series did not converge")
        return +total, float(mpmath.log10(peak))


def _regularized_shift(a, b, c, z):
    # F(a,b;c;z)/Gamma(c) at c = -m equals (a)_{m+1}(b)_{m+1}/(m+1)! z^{m+1} F(a+m+1, b+m+1; m+2; z)
    m = int(-mpmath.re(c))
    pre = mpmath.rf(a, m + 1) * mpmath.rf(b, m + 1) / mpmath.factorial(m + 1) * z ** (m + 1)
    return pre, (a + m + 1, b + m + 1, m + 2)


def hyp2f1(a, b, c, z, policy: PrecisionPolicy | None = None, *, regularized: bool = False):
    """Gauss F(a, b; c; z) for |z| < 1.

    For |z| <= 0.75 the series is summed directly.  A first pass measures the
    largest term; the precision is then raised by log10(peak / |F|) digits and
    the sum recomputed, and a third pass with 15 more digits must agree to the
    relative tolerance.  Closer to the unit circle the sum is handed to
    mpmath, whose connection formulas handle the slowly convergent region.

    ``regularized=True`` returns F / Gamma(c), finite at c = 0, -1, ...
    """
    pol = resolve(policy)
    a, b, c, z = (mpmath.mpmathify(v) for v in (a, b, c, z))
    if not abs(z) < 1:
        raise DomainError("hyp2f1 needs |z| < 1")
    if _is_nonpos_int(c):
        if not regularized:
            raise PoleError("c is a non-positive integer")
        with mp.workdps(pol.working_digits + 10):
            pre, (a2, b2, c2) = _regularized_shift(a, b, c, z)
            v = pre * hyp2f1(a2, b2, c2, z, pol) / mpmath.gamma(c2)
        return +v
    if abs(z) > SERIES_RADIUS:
        v = _delegate(a, b, c, z, pol)
    else:
        v = _guarded_series(a, b, c, z, pol)
    if regularized:
        with mp.workdps(pol.working_digits + 10):
            v = v * mpmath.rgamma(c)
    return +v


def _guarded_series(a, b, c, z, pol):
    base = pol.working_digits + 10
    v, peak = _series(a, b, c, z, base)
    for _ in range(4):
        with mp.workdps(base):
            mag = float(mpmath.log10(abs(v))) if v != 0 else -base
        guard = max(0, math.ceil(peak - mag))
        dps = base + guard
        v, peak = _series(a, b, c, z, dps)
        with mp.workdps(dps):
            mag2 = float(mpmath.log10(abs(v))) if v != 0 else -dps
        if peak - mag2 <= guard + 1:
            break
    else:
        raise PrecisionError("could not find enough guard digits for the hypergeometric series")
    check, _ = _series(a, b, c, z, dps + 15)
    with mp.workdps(dps + 15):
        if abs(check - v) > mpmath.mpf(pol.target_rel_tol) * abs(check) + mpmath.mpf(10) ** (-pol.working_digits - 5):
            raise PrecisionError("hypergeometric series lost accuracy (guard digits insufficient)")
    return check


def _delegate(a, b, c, z, pol):
    with mp.workdps(pol.working_digits + 15):
        v1 = mpmath.hyp2f1(a, b, c, z)
    with mp.workdps(pol.working_digits + 30):
        v2 = mpmath.hyp2f1(a, b, c, z)
        if abs(v2 - v1) > mpmath.mpf(pol.target_rel_tol) * abs(v2) + mpmath.mpf(10) ** (-pol.working_digits - 5):
            raise PrecisionError("hypergeometric evaluation unstable near |z| = 1")
    return v2


def legendre_p(mu, nu, x, policy: PrecisionPolicy | None = None):
    """Ferrers function P^mu_nu(x) on (-1, 1).

    P^mu_nu(x) = ((1+x)/(1-x))^(mu/2) F(-nu, nu+1; 1-mu; (1-x)/2) / Gamma(1-mu).
    """
    pol = resolve(policy)
    x = mpmath.mpmathify(x)
    if not (-1 < x < 1):
        raise DomainError("legendre_p needs -1 < x < 1")
    with mp.workdps(pol.working_digits + 10):
        mu = mpmath.mpmathify(mu)
        nu = mpmath.mpmathify(nu)
        F = hyp2f1(-nu, nu + 1, 1 - mu, (1 - x) / 2, pol, regularized=True)
        v = ((1 + x) / (1 - x)) ** (mu / 2) * F
    return +v
