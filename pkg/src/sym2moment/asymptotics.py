"""Main terms of the first moment, the contour integral I(u, y), and critical values.

i^(-k) is always the exact integer (-1)^(k/2).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp

from .arith import bernoulli, p_coeff
from .errors import ContourError, DomainError
from .lvalues import AfeKernelSpec, log_r_b, moment_lhs
from .precision import PrecisionPolicy, resolve
from .specfun.contour import ContourSpec, line_integral
from .specfun.gamma import digamma
from .specfun.hyper import hyp2f1, legendre_p
from .specfun.zeta import CHI_M3, CHI_M4, completed_dirichlet_l, dirichlet_l, riemann_zeta


def _require_even(k: int, lo: int = 2) -> None:
    if k % 2 or k < lo:
        raise DomainError(f"k must be an even integer >= {lo}")


def i_pow(k: int) -> int:
    """i^(-k) for even k."""
    return -1 if (k // 2) % 2 else 1


# ---------------------------------------------------------------- M_1


def m1_constant(policy: PrecisionPolicy | None = None):
    """2 gamma + psi(3/4)/2 - log(2 pi^(3/2))."""
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        v = 2 * mpmath.euler + digamma(mpmath.mpf(3) / 4, pol) / 2 - mpmath.log(2 * mpmath.pi ** (mpmath.mpf(3) / 2))
    return +v


def m1_constant_reflection(policy: PrecisionPolicy | None = None):
    """Same constant with psi(3/4) = -gamma - 3 log 2 + pi/2."""
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        psi34 = -mpmath.euler - 3 * mpmath.log(2) + mpmath.pi / 2
        v = 2 * mpmath.euler + psi34 / 2 - mpmath.log(2) - mpmath.mpf(3) / 2 * mpmath.log(mpmath.pi)
    return +v


def m1(k: int, policy: PrecisionPolicy | None = None):
    """psi(k - 1/2) + 2 gamma + psi(3/4)/2 - log(2 pi^(3/2))."""
    _require_even(k)
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        v = digamma(k - mpmath.mpf(1) / 2, pol) + m1_constant(pol)
    return +v


def m1_residue(k: int, h: float = 1e-8, policy: PrecisionPolicy | None = None):
    """2 d/du [u^2 H(u) (2 pi^(3/2))^(-u) R_b(u) zeta(1+2u)] at u = 0 by central differences.

    u^2 H(u) = u G(u) with G even and G(0) = 1, so the result does not depend
    on the kernel; the quartic G(u) = e^(-u^4) is used here.
    """
    _require_even(k)
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 20):
        lb = mpmath.log(2) + mpmath.mpf(3) / 2 * mpmath.log(mpmath.pi)

        def g(u):
            return u * mpmath.exp(-(u**4) - u * lb + log_r_b(u, k)) * mpmath.zeta(1 + 2 * u)

        hh = mpmath.mpf(h)
        v = 2 * (g(hh) - g(-hh)) / (2 * hh)
    return +v


# ---------------------------------------------------------------- M_-4


def _gamma_half_ratio(k: int):
    # Gamma((k-1/2)/2) / Gamma((k+1/2)/2)
    q = mpmath.mpf(1) / 4
    return mpmath.exp(mpmath.loggamma(mpmath.mpf(k) / 2 - q) - mpmath.loggamma(mpmath.mpf(k) / 2 + q))


def m_minus4(k: int, policy: PrecisionPolicy | None = None):
    """i^(-k) sqrt(pi/2) L(1/2, chi_-4) Gamma((k-1/2)/2) / Gamma((k+1/2)/2)."""
    _require_even(k)
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        v = i_pow(k) * mpmath.sqrt(mpmath.pi / 2) * dirichlet_l(mpmath.mpf(1) / 2, CHI_M4, pol) * _gamma_half_ratio(k)
    return +v


def m_minus4_residue(k: int, radius: float = 0.25, nodes: int = 64, policy: PrecisionPolicy | None = None):
    """The same term as a residue at u = 0, computed by the trapezoidal rule on a circle.

    i^(-k) pi^(5/4) / (4 Gamma(3/4)) res H(u) Gamma((k-1/2+u)/2)/Gamma((k-1/2)/2)
    Gamma((k-1/2-u)/2)/Gamma((k+1/2)/2) Lambda(1/2+u, chi_-4), with H(u) = e^(-u^4)/u.
    """
    _require_even(k)
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        a = (k - mpmath.mpf(1) / 2) / 2
        b = (k + mpmath.mpf(1) / 2) / 2
        r = mpmath.mpf(radius)

        def integrand(u):
            g = mpmath.exp(mpmath.loggamma(a + u / 2) - mpmath.loggamma(a) + mpmath.loggamma(a - u / 2) - mpmath.loggamma(b))
            return mpmath.exp(-(u**4)) * g * completed_dirichlet_l(mpmath.mpf(1) / 2 + u, CHI_M4, pol)

        # res of integrand(u)/u = mean of integrand over the circle
        acc = mpmath.fsum(integrand(r * mpmath.expjpi(mpmath.mpf(2 * j) / nodes)) for j in range(nodes)) / nodes
        v = i_pow(k) * mpmath.pi ** (mpmath.mpf(5) / 4) / (4 * mpmath.gamma(mpmath.mpf(3) / 4)) * mpmath.re(acc)
    return +v


# ---------------------------------------------------------------- M_-3


def m_minus3_digits(k: int, policy: PrecisionPolicy | None = None) -> int:
    pol = resolve(policy)
    return max(pol.working_digits, math.ceil(0.4 * k + 30))


def mos_hypergeometric(k: int, policy: PrecisionPolicy | None = None):
    """(2/sqrt 3)^(k-1/2) F((k-1/2)/2, (k-1/2)/2; 1/2; -1/3)."""
    pol = resolve(policy)
    pol = pol.escalate(m_minus3_digits(k, pol) - pol.working_digits)
    with mp.workdps(pol.working_digits + 10):
        a = (k - mpmath.mpf(1) / 2) / 2
        F = hyp2f1(a, a, mpmath.mpf(1) / 2, -mpmath.mpf(1) / 3, pol)
        v = (2 / mpmath.sqrt(3)) ** (k - mpmath.mpf(1) / 2) * F
    return +v


def mos_legendre(k: int, policy: PrecisionPolicy | None = None):
    """Gamma((k+1/2)/2) Gamma(1-(k-1/2)/2) / (2 sqrt pi) [P^0_{k-3/2}(1/2) + P^0_{k-3/2}(-1/2)]."""
    pol = resolve(policy)
    pol = pol.escalate(m_minus3_digits(k, pol) - pol.working_digits)
    with mp.workdps(pol.working_digits + 10):
        nu = k - mpmath.mpf(3) / 2
        h = mpmath.mpf(1) / 2
        P = legendre_p(0, nu, h, pol) + legendre_p(0, nu, -h, pol)
        v = mpmath.gamma((k + h) / 2) * mpmath.gamma(1 - (k - h) / 2) / (2 * mpmath.sqrt(mpmath.pi)) * P
    return +v


def m_minus3(k: int, policy: PrecisionPolicy | None = None):
    """sqrt(2 pi) i^(-k) L(1/2, chi_-3) (2/sqrt 3)^(k-1/2) F(...; -1/3) Gamma((k-1/2)/2)/Gamma((k+1/2)/2).

    The hypergeometric factor is evaluated at max(policy digits, 0.4 k + 30) digits.
    """
    _require_even(k)
    pol = resolve(policy)
    H = mos_hypergeometric(k, pol)
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.sqrt(2 * mpmath.pi) * i_pow(k) * dirichlet_l(mpmath.mpf(1) / 2, CHI_M3, pol) * H * _gamma_half_ratio(k)
    return +v


def s_table(k: int) -> int:
    _require_even(k)
    return {2: -1, 4: 0, 0: 1}[k % 6]


def c_table(k: int, policy: PrecisionPolicy | None = None):
    """cos(k pi/3 - 7 pi/12) + cos(2 k pi/3 - 11 pi/12)."""
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.cospi(mpmath.mpf(k) / 3 - mpmath.mpf(7) / 12) + mpmath.cospi(mpmath.mpf(2 * k) / 3 - mpmath.mpf(11) / 12)
    return +v


def m_minus3_prime(k: int, policy: PrecisionPolicy | None = None):
    """3^(1/4) sqrt(2 pi) L(1/2, chi_-3) Gamma(k-1/2)/Gamma(k) S(k)."""
    _require_even(k)
    pol = resolve(policy)
    S = s_table(k)
    if S == 0:
        return mpmath.mpf(0)
    with mp.workdps(pol.working_digits + 10):
        g = mpmath.exp(mpmath.loggamma(k - mpmath.mpf(1) / 2) - mpmath.loggamma(k))
        v = mpmath.mpf(3) ** (mpmath.mpf(1) / 4) * mpmath.sqrt(2 * mpmath.pi) * dirichlet_l(mpmath.mpf(1) / 2, CHI_M3, pol) * g * S
    return +v


def moment_rhs(k: int, policy: PrecisionPolicy | None = None):
    _require_even(k, 12)
    return m1(k, policy) + m_minus4(k, policy) + m_minus3(k, policy)


# ---------------------------------------------------------------- I(u, y)


def _check_strip(u, k):
    u = mpmath.mpmathify(u)
    if not (mpmath.mpf(1) / 2 < mpmath.re(u) < k - 4):
        raise ContourError("need 1/2 < Re u < k - 4")
    return u


def i_closed(u, y, k: int, policy: PrecisionPolicy | None = None):
    """Closed form of I(u, y); the y = 2 branch is taken only when y == 2 exactly."""
    _require_even(k)
    pol = resolve(policy)
    is_two = (y == 2) if isinstance(y, (int, Fraction)) else (mpmath.mpmathify(y) == 2)
    with mp.workdps(pol.working_digits + 10):
        u = _check_strip(u, k)
        yv = mpmath.mpf(y.numerator) / y.denominator if isinstance(y, Fraction) else mpmath.mpmathify(y)
        if not yv > 0:
            raise DomainError("y must be positive")
        h = mpmath.mpf(1) / 2
        ik = i_pow(k)  # i^k = i^(-k) for even k
        cosf = mpmath.cospi((h + u) / 2)
        lg = mpmath.loggamma
        if is_two:
            v = ik * mpmath.mpf(4) ** u * cosf / mpmath.sqrt(mpmath.pi) * mpmath.gamma(u) * mpmath.exp(lg(k - h - u) - lg(k - h + u))
        elif yv < 2:
            pre = mpmath.exp(lg((k - h - u) / 2) - lg((k + h + u) / 2))
            v = pre * hyp2f1((k - h - u) / 2, (-k + 3 * h - u) / 2, h, yv * yv / 4, pol)
        else:
            pre = 2 * ik * cosf * yv ** (-(k - h - u)) * mpmath.exp(lg(k - h - u) - lg(k))
            v = pre * hyp2f1((k - h - u) / 2, (k + h - u) / 2, k, 4 / (yv * yv), pol)
    return +v


def i_integrand(u, y, k: int):
    h = mpmath.mpf(1) / 2
    lg = mpmath.loggamma
    ly = mpmath.log(y)

    def f(z):
        return mpmath.exp(lg((k - h - u - z) / 2) - lg((k + h + u + z) / 2) + lg(z) - z * ly) * mpmath.cospi(z / 2)

    return f


def i_numeric(u, y, k: int, spec: ContourSpec | None = None, policy: PrecisionPolicy | None = None, tol: float = 1e-17):
    """(1/2 pi i) int_(sigma) Gamma((k-1/2-u-z)/2)/Gamma((k+1/2+u+z)/2) Gamma(z) cos(pi z/2) y^(-z) dz.

    The integrand decays only like |t|^(-1-Re u) on the line.  By default the
    contour turns into horizontal rays at +-height, to the right for y > 2
    and to the left for y < 2, where the integrand decays like (y/2)^(-x)
    or (y/2)^(|x|); y = 2 keeps the vertical line with an algebraic tail.
    """
    _require_even(k)
    pol = resolve(policy)
    u = _check_strip(u, k)
    yv = mpmath.mpmathify(y)
    if spec is None:
        tails = "right" if yv > 2 else ("left" if yv < 2 else "algebraic")
        rate = abs(math.log(float(yv) / 2)) if yv != 2 else 1.0
        # panels long enough that ~80 of them reach the tolerance
        width = max(2.0, min(64.0, 70.0 / (80 * rate)))
        spec = ContourSpec(sigma=3.0, height=15.0, panels=6, tails=tails, degree=4, ray_panel=width, max_ray_panels=2000)
    if not (0 < spec.sigma < k - mpmath.mpf(1) / 2 - mpmath.re(u)):
        raise ContourError("sigma must separate the poles of Gamma(z) from those of the numerator")
    digits = min(pol.working_digits, 15 - int(math.floor(math.log10(tol))))
    with mp.workdps(digits):
        f = i_integrand(u, yv, k)
        v = line_integral(f, spec, pol, tol=mpmath.mpf(tol))
        if mpmath.im(u) == 0:
            v = mpmath.re(v)
    return +v


def i_bessel_integral(u, y, k: int, digits: int = 25):
    """2^(1/2+u) int_0^oo J_{k-1}(x) cos(x y/2) x^(-1/2-u) dx.

    [0, x0] is integrated directly.  Beyond x0, J cos is split into the four
    pieces H^(1,2)(x) e^(+-i x y/2) / 4; each has a single frequency w and is
    integrated along the vertical ray x0 + i t (w > 0) or x0 - i t (w < 0),
    where it decays like e^(-|w| t).  A zero-frequency piece (y = 2) stays on
    the real axis.
    """
    with mp.workdps(digits):
        u = mpmath.mpmathify(u)
        y = mpmath.mpf(y)
        nu = k - 1
        p = -mpmath.mpf(1) / 2 - u

        def g(x):
            return mpmath.besselj(nu, x) * mpmath.cos(x * y / 2) * x**p

        x0 = mpmath.mpf(max(2 * k, 40))
        step = mpmath.pi / (1 + y / 2)
        head = mpmath.quad(g, mpmath.linspace(0, x0, int(x0 / step) + 2))
        tail = mpmath.mpc(0)
        for hankel, sh in ((mpmath.hankel1, 1), (mpmath.hankel2, -1)):
            for sc in (1, -1):
                w = sh + sc * y / 2

                def piece(x, hankel=hankel, sc=sc):
                    return hankel(nu, x) * mpmath.expj(sc * x * y / 2) * x**p

                if w == 0:
                    tail += mpmath.quad(piece, [x0, 2 * x0, mpmath.inf])
                else:
                    d = 1 if w > 0 else -1
                    tail += d * 1j * mpmath.quad(lambda t: piece(x0 + d * 1j * t), [0, 1 / abs(w), mpmath.inf])
        v = 2 ** (mpmath.mpf(1) / 2 + u) * (head + tail / 4)
        if mpmath.im(u) == 0:
            v = mpmath.re(v)
    return +v


# ---------------------------------------------------------------- critical values


def dummigan_coefficients(k: int, r: int) -> tuple[int, int, int]:
    """(c_1, c_-4, c_-3) = (p(2,1) + p(-2,1), p(0,1), p(1,1) + p(-1,1))."""
    c1 = p_coeff(k, r, 2, 1) + p_coeff(k, r, -2, 1)
    c4 = p_coeff(k, r, 0, 1)
    c3 = p_coeff(k, r, 1, 1) + p_coeff(k, r, -1, 1)
    return int(c1), int(c4), int(c3)


def dummigan_beta_value(k: int, r: int, policy: PrecisionPolicy | None = None):
    """beta = c_1 zeta(1-2r) + c_-4 L(1-r, chi_-4) + c_-3 L(1-r, chi_-3), with c_1 += 2k/B_k at r = k-1."""
    _require_even(k, 12)
    if r % 2 == 0 or not (3 <= r <= k - 1):
        raise DomainError("r must be odd with 3 <= r <= k-1")
    pol = resolve(policy)
    c1, c4, c3 = (int(c) for c in dummigan_coefficients(k, r))
    with mp.workdps(pol.working_digits + 10):
        a1 = mpmath.mpf(c1)
        if r == k - 1:
            Bk = bernoulli(k)
            a1 += mpmath.mpf(2 * k * Bk.denominator) / Bk.numerator
        v = a1 * riemann_zeta(1 - 2 * r, pol) + c4 * dirichlet_l(1 - r, CHI_M4, pol) + c3 * dirichlet_l(1 - r, CHI_M3, pol)
    return +v


def dummigan_beta(k: int, r: int, policy: PrecisionPolicy | None = None):
    """-(2 pi)^(2r)/4 Gamma(k-r)/Gamma(k+r-1) beta: the value of w_f L(r, sym^2 f) when dim S_k = 1."""
    pol = resolve(policy)
    beta = dummigan_beta_value(k, r, pol)
    with mp.workdps(pol.working_digits + 10):
        v = -(2 * mpmath.pi) ** (2 * r) / 4 * mpmath.exp(mpmath.loggamma(k - r) - mpmath.loggamma(k + r - 1)) * beta
    return +v


# ---------------------------------------------------------------- report


@dataclass
class MomentReport:
    k: int
    lhs: object
    m1: object
    m_minus4: object
    m_minus3: object
    residual: object
    runtime_seconds: float
    policy: dict = field(default_factory=dict)
    afe: dict = field(default_factory=dict)

    def as_row(self, digits: int = 30) -> dict:
        from .precision import fmt_sci

        return {
            "k": self.k,
            "lhs": fmt_sci(self.lhs, digits),
            "m1": fmt_sci(self.m1, digits),
            "m_minus4": fmt_sci(self.m_minus4, digits),
            "m_minus3": fmt_sci(self.m_minus3, digits),
            "residual": fmt_sci(self.residual, digits),
        }


def moment_report(k: int, policy: PrecisionPolicy | None = None, spec: AfeKernelSpec | None = None) -> MomentReport:
    """Left side, the three main terms and residual = lhs - (m1 + m_-4 + m_-3)."""
    _require_even(k, 12)
    pol = resolve(policy)
    t0 = time.perf_counter()
    # every routine rounds its result to the caller's context
    with mp.workdps(pol.working_digits + 10):
        detail = moment_lhs(k, pol, spec, detail=True)
        a, b, c = m1(k, pol), m_minus4(k, pol), m_minus3(k, pol)
        res = detail.value - (a + b + c)
    return MomentReport(
        k=k,
        lhs=detail.value,
        m1=a,
        m_minus4=b,
        m_minus3=c,
        residual=+res,
        runtime_seconds=time.perf_counter() - t0,
        policy=pol.fingerprint(),
        afe=detail.spec.fingerprint(),
    )
