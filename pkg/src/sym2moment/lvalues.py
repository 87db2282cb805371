"""Central values L(1/2, sym^2 f): smoothed functional-equation sums and checks.

Three independent routes are provided:

* ``sym2_central_afe``: 2 sum lambda(n)^2 n^(-1/2) V_k(n), with V_k the
  inverse Mellin transform of H(u) R(u) zeta(1+2u) / zeta(1/2+u);
* ``sym2_central_oracle``: the textbook two-sided smoothed sum for the
  completed L-function, with coefficients A(m) = sum_{a^2 b = m} lambda(b^2)
  built from prime eigenvalues only;
* ``sym2_series``: the Euler product for Re s > 1 with a certified tail.

H(u) defaults to e^(c u^2)/u.  The quartic kernel e^(-u^4)/u is available to
``v_kernel`` but its V_k decays too slowly in y to certify a truncation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mp

from .arith import num_divisors, primes_up_to, smallest_prime_factor_table
from .errors import ContourError, DomainError, PrecisionError, TruncationError
from .modforms import HeckeEigenform, cusp_dimension, eigenforms_with_weights, extend_prime_coefficients
from .precision import PrecisionPolicy, resolve
from .specfun.contour import ContourSpec, inverse_mellin

KERNELS = ("gaussian", "quartic")
DEFAULT_SCALE = 0.035
ORACLE_SCALE = 0.06
SAFETY = 1.2


class UncertifiedTailWarning(UserWarning):
    """A value was returned without a rigorous truncation bound."""


@dataclass(frozen=True)
class AfeKernelSpec:
    """Kernel, contour and truncation for V_k.

    ``tail_estimate`` bounds |2 sum_{n > n_cutoff} lambda(n)^2 V_k(n)/sqrt(n)|
    using |lambda(n)| <= d(n); ``scale`` is c in e^(c u^2)/u.
    """

    contour: ContourSpec
    n_cutoff: int
    tail_estimate: float
    kernel: str = "gaussian"
    scale: float = DEFAULT_SCALE

    def __post_init__(self):
        if not (0.5 < self.contour.sigma <= 3):
            raise ContourError("sigma must lie in (1/2, 3]")
        if self.kernel not in KERNELS:
            raise DomainError(f"kernel must be one of {KERNELS}")
        if self.n_cutoff < 1:
            raise DomainError("n_cutoff must be positive")
        if not self.scale > 0:
            raise DomainError("kernel scale must be positive")

    def fingerprint(self) -> dict:
        return {
            "sigma": self.contour.sigma,
            "height": self.contour.height,
            "n_cutoff": self.n_cutoff,
            "kernel": self.kernel,
            "scale": self.scale,
        }


# ---------------------------------------------------------------- gamma factors


def log_r_a(u, k: int):
    """log R_a(u) = log L_inf(1/2+u)/L_inf(1/2) without the pi power."""
    lg = mpmath.loggamma
    return (
        lg((mpmath.mpf(3) / 2 + u) / 2) - lg(mpmath.mpf(3) / 4)
        + lg((k - mpmath.mpf(1) / 2 + u) / 2) - lg((k - mpmath.mpf(1) / 2) / 2)
        + lg((k + mpmath.mpf(1) / 2 + u) / 2) - lg((k + mpmath.mpf(1) / 2) / 2)
    )


def log_r_b(u, k: int):
    """log R_b(u) = log Gamma(k-1/2+u)/Gamma(k-1/2) + log Gamma(3/4+u/2)/Gamma(3/4)."""
    lg = mpmath.loggamma
    h = mpmath.mpf(1) / 2
    q = mpmath.mpf(3) / 4
    return lg(k - h + u) - lg(k - h) + lg(q + u / 2) - lg(q)


def r_a(u, k: int):
    return mpmath.exp(log_r_a(u, k))


def r_b(u, k: int):
    return mpmath.exp(log_r_b(u, k))


def _log_base():
    return mpmath.log(2) + mpmath.mpf(3) / 2 * mpmath.log(mpmath.pi)


def _log_h(u, kernel: str, scale):
    if kernel == "gaussian":
        return scale * u * u - mpmath.log(u)
    return -(u**4) - mpmath.log(u)


def afe_transform(k: int, kernel: str = "gaussian", scale=DEFAULT_SCALE):
    """u -> H(u) (2 pi^(3/2))^(-u) R_b(u) zeta(1+2u) / zeta(1/2+u)."""
    lb = _log_base()
    sc = mpmath.mpf(scale)

    def F(u):
        return mpmath.exp(_log_h(u, kernel, sc) - u * lb + log_r_b(u, k)) * mpmath.zeta(1 + 2 * u) / mpmath.zeta(mpmath.mpf(1) / 2 + u)

    return F


def _majorant(k: int, sigma):
    """Bound for |(2 pi^(3/2))^(-u) R_b(u) zeta(1+2u)/zeta(1/2+u)| on Re u = sigma.

    Uses |Gamma(x+iy)| <= Gamma(x) for x > 0 and |1/zeta(s)| <= zeta(Re s)/zeta(2 Re s).
    """
    s = mpmath.mpf(sigma)
    return mpmath.exp(-s * _log_base() + log_r_b(s, k)) * mpmath.zeta(1 + 2 * s) * mpmath.zeta(s + mpmath.mpf(1) / 2) / mpmath.zeta(2 * s + 1)


def _vertical_tail(k: int, sigma, T, kernel: str, scale):
    """Bound for (1/pi) int_T^oo |H(u) ...| dt on Re u = sigma, uniformly in y >= 1."""
    s = mpmath.mpf(sigma)
    T = mpmath.mpf(T)
    K0 = _majorant(k, s)
    if kernel == "gaussian":
        c = mpmath.mpf(scale)
        return K0 * mpmath.exp(c * (s * s - T * T)) / (2 * c * T * T) / mpmath.pi
    # quartic: phi(t) = t^4 - 6 s^2 t^2 + s^4 is convex increasing for t^2 > 3 s^2
    if T * T <= 3 * s * s:
        return mpmath.inf
    phi = T**4 - 6 * s * s * T * T + s**4
    dphi = 4 * T**3 - 12 * s * s * T
    return K0 * mpmath.exp(-phi) / (T * dphi) / mpmath.pi


def choose_height(k: int, sigma, tol, kernel: str = "gaussian", scale=DEFAULT_SCALE) -> float:
    T = 2.0
    while _vertical_tail(k, sigma, T, kernel, scale) > tol:
        T += 0.5
    return T


def _log_v_bound_const(k: int, sigma_b, scale):
    # |V_k(y)| <= C y^(-sigma_b) with C = (1/2 pi) e^(c s^2) sqrt(pi/c) / s * majorant(s)
    s = mpmath.mpf(sigma_b)
    c = mpmath.mpf(scale)
    return c * s * s + mpmath.log(mpmath.sqrt(mpmath.pi / c) / (2 * mpmath.pi * s)) + mpmath.log(_majorant(k, s))


def v_bound(y, k: int, sigma_b, scale=DEFAULT_SCALE):
    """Analytic bound |V_k(y)| <= C(sigma_b) y^(-sigma_b) for the Gaussian kernel."""
    return mpmath.exp(_log_v_bound_const(k, sigma_b, scale) - sigma_b * mpmath.log(y))


def afe_tail(k: int, N: int, sigma_b, scale=DEFAULT_SCALE):
    """Bound for 2 sum_{n > N} d(n)^2 |V_k(n)| / sqrt(n), using d(n)^2 <= 4n."""
    s = mpmath.mpf(sigma_b)
    if s <= 1.5:
        return mpmath.inf
    return 8 * mpmath.exp(_log_v_bound_const(k, s, scale)) * mpmath.mpf(N) ** (mpmath.mpf(3) / 2 - s) / (s - mpmath.mpf(3) / 2)


def afe_cutoff(k: int, tol, scale=DEFAULT_SCALE) -> tuple[int, float, float]:
    """Smallest N (over a grid of sigma_b) whose certified tail is <= tol.

    Returns (N, tail bound, sigma_b).
    """
    with mp.workdps(30):
        tol = mpmath.mpf(tol)
        best = None
        for i in range(7, 161):
            s = mpmath.mpf(i) / 4
            logN = (mpmath.log(8 / (s - mpmath.mpf(3) / 2)) + _log_v_bound_const(k, s, scale) - mpmath.log(tol)) / (s - mpmath.mpf(3) / 2)
            N = max(1, int(mpmath.ceil(mpmath.exp(logN))))
            if best is None or N < best[0]:
                best = (N, s)
        N, s = best
        return N, float(afe_tail(k, N, s, scale)), float(s)


def afe_spec(
    k: int,
    policy: PrecisionPolicy | None = None,
    *,
    sigma: float = 1.0,
    kernel: str = "gaussian",
    scale: float = DEFAULT_SCALE,
    n_cutoff: int | None = None,
) -> AfeKernelSpec:
    """Certified kernel spec for weight k: contour height and n_cutoff from analytic bounds."""
    pol = resolve(policy)
    tol = pol.target_abs_tol
    if kernel != "gaussian":
        raise TruncationError("no certified truncation exists for the quartic kernel; use v_kernel directly")
    N, tail, sb = afe_cutoff(k, tol / 10, scale)
    if n_cutoff is not None:
        if n_cutoff < N:
            tail = float(afe_tail(k, n_cutoff, sb, scale))
            if tail > tol:
                raise TruncationError(f"n_cutoff={n_cutoff} leaves a tail bound {tail:.3e} above {tol:g}")
        N = n_cutoff
        with mp.workdps(30):
            tail = float(afe_tail(k, N, sb, scale))
    with mp.workdps(30):
        T = choose_height(k, sigma, mpmath.mpf(tol) / 1e6, kernel, scale)
    return AfeKernelSpec(ContourSpec(sigma=sigma, height=T, panels=max(4, math.ceil(T / 4))), N, tail, kernel, scale)


def quartic_spec(k: int, sigma: float = 1.0, n_cutoff: int = 1, policy: PrecisionPolicy | None = None) -> AfeKernelSpec:
    """Contour spec for v_kernel with the quartic kernel (no truncation certificate)."""
    pol = resolve(policy)
    with mp.workdps(30):
        T = choose_height(k, sigma, mpmath.mpf(pol.target_abs_tol) / 1e6, "quartic")
    return AfeKernelSpec(ContourSpec(sigma=sigma, height=T, panels=max(4, int(2 * T))), n_cutoff, math.inf, "quartic", 1.0)


# ---------------------------------------------------------------- V_k


def _kernel_dps(spec: AfeKernelSpec, pol: PrecisionPolicy) -> int:
    extra = 10
    if spec.kernel == "quartic":
        # |e^(-u^4)| reaches e^(8 sigma^4) on the line
        extra += math.ceil(8 * spec.contour.sigma**4 / math.log(10))
    return pol.working_digits + extra


def v_kernel_values(ys, k: int, spec: AfeKernelSpec, policy: PrecisionPolicy | None = None, tol=None) -> list:
    """V_k(y) for every y in ys (all y >= 1), sharing transform evaluations."""
    pol = resolve(policy)
    if any(y < 1 for y in ys):
        raise DomainError("vectorised V_k needs y >= 1")
    tol = mpmath.mpf(pol.target_abs_tol if tol is None else tol)
    with mp.workdps(_kernel_dps(spec, pol)):
        F = afe_transform(k, spec.kernel, spec.scale)

        def tb(T):
            return _vertical_tail(k, spec.contour.sigma, T, spec.kernel, spec.scale)

        vals = inverse_mellin(F, ys, spec.contour, pol, tail_bound=tb, real=True, tol=tol)
    return [+v for v in vals]


def v_kernel(y, k: int, spec: AfeKernelSpec | None = None, policy: PrecisionPolicy | None = None):
    """V_k(y) = (1/2 pi i) int_(sigma) y^(-u) H(u) R(u) zeta(1+2u)/zeta(1/2+u) du."""
    pol = resolve(policy)
    y = mpmath.mpf(y)
    if not y > 0:
        raise DomainError("v_kernel needs y > 0")
    if spec is None:
        spec = afe_spec(k, pol)
    if y >= 1:
        return v_kernel_values([y], k, spec, pol)[0]
    # y < 1: |y^(-u)| = y^(-sigma) scales the tail bound
    with mp.workdps(_kernel_dps(spec, pol)):
        F = afe_transform(k, spec.kernel, spec.scale)
        scale_y = y ** (-spec.contour.sigma)

        def tb(T):
            return scale_y * _vertical_tail(k, spec.contour.sigma, T, spec.kernel, spec.scale)

        T = spec.contour.height
        while tb(T) > mpmath.mpf(pol.target_abs_tol) / 4:
            T += 1
        (v,) = inverse_mellin(F, [y], spec.contour.with_(height=T), pol, tail_bound=tb, real=True)
    return +v


@lru_cache(maxsize=64)
def _v_table(k: int, spec: AfeKernelSpec, pol: PrecisionPolicy) -> tuple:
    N = spec.n_cutoff
    with mp.workdps(30):
        mass = mpmath.fsum(num_divisors(n) ** 2 / mpmath.sqrt(n) for n in range(1, N + 1))
    tol = mpmath.mpf(pol.target_abs_tol) / (8 * mass)
    return tuple(v_kernel_values(list(range(1, N + 1)), k, spec, pol, tol=tol))


def sym2_central_afe(f: HeckeEigenform, spec: AfeKernelSpec | None = None, policy: PrecisionPolicy | None = None):
    """2 sum_{n <= n_cutoff} lambda_f(n)^2 V_k(n)/sqrt(n); the tail is bounded by spec.tail_estimate."""
    pol = resolve(policy)
    if spec is None:
        spec = afe_spec(f.k, pol)
    if spec.kernel != "gaussian":
        raise TruncationError("the quartic kernel admits no certified truncation")
    if spec.tail_estimate > pol.target_abs_tol:
        raise TruncationError(f"tail estimate {spec.tail_estimate:.3e} exceeds {pol.target_abs_tol:g}")
    if f.N < spec.n_cutoff:
        raise TruncationError(f"form has lambda(n) only to {f.N}, need {spec.n_cutoff}")
    V = _v_table(f.k, spec, pol)
    with mp.workdps(pol.working_digits + 10):
        terms = [f.lam[n] ** 2 * V[n - 1] / mpmath.sqrt(n) for n in range(1, spec.n_cutoff + 1)]
        v = 2 * mpmath.fsum(terms)
    return +v


def required_length(k: int, policy: PrecisionPolicy | None = None, spec: AfeKernelSpec | None = None) -> int:
    """Number of lambda(n) needed by sym2_central_afe and the oracle, with safety margin."""
    pol = resolve(policy)
    spec = spec or afe_spec(k, pol)
    M = oracle_cutoff(k, mpmath.mpf(1) / 2, 1e-16 / 4)
    return int(math.ceil(SAFETY * max(spec.n_cutoff, M)))


# ---------------------------------------------------------------- oracle route


def log_l_inf(s, k: int):
    """log of pi^(-3s/2) Gamma((s+1)/2) Gamma((s+k-1)/2) Gamma((s+k)/2)."""
    lg = mpmath.loggamma
    return -3 * s / 2 * mpmath.log(mpmath.pi) + lg((s + 1) / 2) + lg((s + k - 1) / 2) + lg((s + k) / 2)


def _oracle_majorant(k, s, sigma):
    # |L_inf(s+u)/L_inf(s)| <= that ratio at u = sigma for real s, using |Gamma(x+iy)| <= Gamma(x)
    return abs(mpmath.exp(log_l_inf(s + sigma, k) - log_l_inf(s, k)))


def oracle_cutoff(k: int, s, tol, scale=ORACLE_SCALE) -> int:
    """M with sum_{m > M} |A(m)| m^(-s') |W_{s'}(m)| <= tol for s' in {s, 1-s}.

    |A(m)| <= d_3(m) <= d(m)^2 <= 4m and |W_s(y)| <= C y^(-b) with
    C = (1/2 pi) e^(c b^2) sqrt(pi/c)/b |L_inf(s+b)/L_inf(s)|.
    """
    with mp.workdps(30):
        s = mpmath.mpf(s)
        c = mpmath.mpf(scale)
        tol = mpmath.mpf(tol)
        worst = 1
        for sp in (s, 1 - s):
            best = None
            for i in range(1, 200):
                b = mpmath.mpf(i) / 4
                e = b + sp - 2  # sum 4 m^(1 - sp - b) <= 4 M^(2 - sp - b)/(sp + b - 2)
                if e <= 0:
                    continue
                if sp != s:
                    pre = abs(mpmath.exp(log_l_inf(1 - s, k) - log_l_inf(s, k)))
                else:
                    pre = 1
                logC = c * b * b + mpmath.log(mpmath.sqrt(mpmath.pi / c) / (2 * mpmath.pi * b)) + mpmath.log(_oracle_majorant(k, sp, b))
                logM = (mpmath.log(4 * pre / e) + logC - mpmath.log(tol)) / e
                M = max(1, int(mpmath.ceil(mpmath.exp(logM))))
                if best is None or M < best:
                    best = M
            worst = max(worst, best)
        return worst


def lambda_of_squares(f: HeckeEigenform, M: int) -> list:
    """lambda_f(n^2) for n <= M from lambda_f(p) and the Hecke recursion."""
    spf = smallest_prime_factor_table(M)
    out = [mpmath.mpf(0)] * (M + 1)
    if M >= 1:
        out[1] = mpmath.mpf(1)
    cache = {}
    for n in range(2, M + 1):
        p = int(spf[n])
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        key = (p, e)
        if key not in cache:
            lp = f.lam_at(p)
            prev, cur = mpmath.mpf(1), lp
            for _ in range(2 * e - 1):
                prev, cur = cur, lp * cur - prev
            cache[key] = cur
        out[n] = cache[key] * out[m]
    return out


def dirichlet_coefficients(f: HeckeEigenform, M: int) -> list:
    """A(m) = sum_{a^2 b = m} lambda_f(b^2) for m <= M (index 0 unused)."""
    sq = lambda_of_squares(f, M)
    A = [mpmath.mpf(0)] * (M + 1)
    a = 1
    while a * a <= M:
        step = a * a
        for b in range(1, M // step + 1):
            A[step * b] += sq[b]
        a += 1
    return A


@lru_cache(maxsize=32)
def _oracle_w_cached(k, s_key, M, sigma_key, scale, pol, tol_key):
    with mp.workdps(pol.working_digits + 10):
        return tuple(_oracle_w(k, mpmath.mpf(s_key), list(range(1, M + 1)), mpmath.mpf(sigma_key), scale, pol, mpmath.mpf(tol_key)))


def _oracle_w(k, s, ys, sigma, scale, pol, tol):
    c = mpmath.mpf(scale)
    ls = log_l_inf(s, k)

    def F(u):
        return mpmath.exp(c * u * u + log_l_inf(s + u, k) - ls) / u

    K0 = _oracle_majorant(k, s, sigma)

    def tb(T):
        return K0 * mpmath.exp(c * (sigma * sigma - T * T)) / (2 * c * T * T) / mpmath.pi

    T = mpmath.mpf(4)
    while tb(T) > tol / 4:
        T += 1
    spec = ContourSpec(sigma=float(sigma), height=float(T), panels=max(4, math.ceil(T / 4)))
    return inverse_mellin(F, ys, spec, pol, tail_bound=tb, real=True, tol=tol)


def sym2_central_oracle(
    f: HeckeEigenform,
    s=mpmath.mpf(1) / 2,
    *,
    scale: float = ORACLE_SCALE,
    tol: float = 1e-16,
    policy: PrecisionPolicy | None = None,
):
    """L(s, sym^2 f) from the two-sided smoothed functional equation.

    L(s) = sum A(m) m^(-s) W_s(m) + L_inf(1-s)/L_inf(s) sum A(m) m^(s-1) W_{1-s}(m)
    with W_s(y) = (1/2 pi i) int e^(c u^2) u^(-1) L_inf(s+u)/L_inf(s) y^(-u) du.
    Needs real s; the root number is +1.
    """
    pol = resolve(policy)
    s = mpmath.mpf(s)
    M = oracle_cutoff(f.k, s, tol / 4, scale)
    if M > f.N and any(p not in f.prime_lam for p in primes_up_to(M) if p > f.N):
        raise TruncationError(f"oracle needs lambda(p) for p <= {M}")
    with mp.workdps(pol.working_digits + 10):
        A = dirichlet_coefficients(f, M)
        ys = list(range(1, M + 1))
        ratio = mpmath.re(mpmath.exp(log_l_inf(1 - s, f.k) - log_l_inf(s, f.k)))
        # W errors are amplified by |A(m)| m^(-Re s') <= 4 m^(1 - s')
        amp = mpmath.fsum(4 * mpmath.mpf(m) ** (1 + max(-s, s - 1)) for m in ys) * max(1, abs(ratio))
        wtol = mpmath.mpf(tol) / (4 * amp)
        # the dual line must sit right of Re u = s so its Dirichlet series converges
        sig1 = max(mpmath.mpf(1), 1 - s + mpmath.mpf(1) / 2)
        sig2 = max(mpmath.mpf(1), s + mpmath.mpf(1) / 2)
        W1 = _oracle_w_cached(f.k, str(s), M, str(sig1), scale, pol, str(wtol))
        total = mpmath.fsum(A[m] * mpmath.mpf(m) ** (-s) * W1[m - 1] for m in ys)
        if s == mpmath.mpf(1) / 2:
            total *= 2
        else:
            W2 = _oracle_w_cached(f.k, str(1 - s), M, str(sig2), scale, pol, str(wtol))
            total += ratio * mpmath.fsum(A[m] * mpmath.mpf(m) ** (s - 1) * W2[m - 1] for m in ys)
    return +total


# ---------------------------------------------------------------- Euler product


def euler_tail(s, P: int):
    """Bound for |log of prod_{p > P} local factors|: 3 log(zeta(s) prod_{p <= P}(1 - p^(-s)))."""
    with mp.workdps(40):
        s = mpmath.mpf(s)
        acc = mpmath.log(mpmath.zeta(s))
        for p in primes_up_to(P):
            acc += mpmath.log1p(-mpmath.mpf(p) ** (-s))
        return 3 * acc


@lru_cache(maxsize=32)
def euler_cutoff(s, rel_tol) -> int:
    """Smallest prime P with exp(euler_tail(s, P)) - 1 <= rel_tol, found in one ascending pass."""
    with mp.workdps(40):
        s = mpmath.mpf(s)
        target = mpmath.log1p(mpmath.mpf(rel_tol)) / 3
        acc = mpmath.log(mpmath.zeta(s))
        done, limit = 1, 1024
        while True:
            for p in primes_up_to(limit):
                if p <= done:
                    continue
                acc += mpmath.log1p(-mpmath.mpf(p) ** (-s))
                if acc <= target:
                    return p
            done, limit = limit, 2 * limit


def sym2_series(f: HeckeEigenform, s, rel_tol: float = 1e-12, policy: PrecisionPolicy | None = None, P: int | None = None):
    """L(s, sym^2 f) for real s > 1 as an Euler product over p <= P.

    The local factor is 1 - (l^2-1) x + (l^2-1) x^2 - x^3 with x = p^(-s),
    l = lambda(p).  For s >= 3 the prime range is chosen so that the
    certified tail is below ``rel_tol``; for 1 < s < 3 the bound still holds
    but the range it needs can be impractical, and s = 1 returns the partial
    product with an ``UncertifiedTailWarning``.
    """
    pol = resolve(policy)
    s = mpmath.mpf(s)
    if s < 1:
        raise DomainError("sym2_series needs s >= 1")
    if s == 1:
        if P is None:
            raise TruncationError("s = 1 needs an explicit prime range P")
        warnings.warn("Euler product at s = 1 has no certified tail", UncertifiedTailWarning, stacklevel=2)
    elif P is None:
        P = euler_cutoff(s, rel_tol)
    if s < 3 and s != 1:
        warnings.warn("tail bound for s < 3 needs a long prime range", UncertifiedTailWarning, stacklevel=2)
    if P > f.N:
        extend_prime_coefficients([f], P)
    with mp.workdps(pol.working_digits + 10):
        acc = mpmath.mpf(0)
        for p in primes_up_to(P):
            lp = f.lam_at(p)
            x = mpmath.mpf(p) ** (-s)
            t = lp * lp - 1
            acc -= mpmath.log(1 - t * x + t * x * x - x**3)
        v = mpmath.exp(acc)
    return +v


# ---------------------------------------------------------------- moment


@dataclass
class MomentLHS:
    k: int
    value: object
    per_form: list = field(default_factory=list)
    spec: AfeKernelSpec | None = None


def moment_lhs(
    k: int,
    policy: PrecisionPolicy | None = None,
    spec: AfeKernelSpec | None = None,
    forms: list[HeckeEigenform] | None = None,
    *,
    detail: bool = False,
):
    """sum_f w_f L(1/2, sym^2 f) over the normalised eigenforms of weight k."""
    pol = resolve(policy)
    spec = spec or afe_spec(k, pol)
    if forms is None and cusp_dimension(k) == 0:
        forms = []
    if forms is None:
        forms = eigenforms_with_weights(k, int(math.ceil(SAFETY * spec.n_cutoff)), pol)
    vals = [sym2_central_afe(f, spec, pol) for f in forms]
    with mp.workdps(pol.working_digits + 10):
        total = mpmath.fsum(f.w * v for f, v in zip(forms, vals))
    total = +total
    if detail:
        return MomentLHS(k, total, [(f.w, v) for f, v in zip(forms, vals)], spec)
    return total
