"""Riemann, Hurwitz and periodic zeta functions; Dirichlet characters and L-values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from ..arith import kronecker
from ..errors import DomainError, PoleError
from ..precision import PrecisionPolicy, resolve


def riemann_zeta(s, policy: PrecisionPolicy | None = None):
    pol = resolve(policy)
    s = mpmath.mpmathify(s)
    if s == 1:
        raise PoleError("zeta(s) has a pole at s = 1")
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.zeta(s)
    return +v


def hurwitz_zeta(s, a, policy: PrecisionPolicy | None = None):
    """sum_{n >= 0} (n + a)^(-s), continued analytically, for 0 < a <= 1."""
    pol = resolve(policy)
    s = mpmath.mpmathify(s)
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    with mp.workdps(pol.working_digits + 10):
        a = _as_mp(a)
        if not (0 < a <= 1):
            raise DomainError("hurwitz_zeta needs 0 < a <= 1")
        v = mpmath.zeta(s, a)
    return +v


def _as_mp(a):
    if isinstance(a, Fraction):
        return mpmath.mpf(a.numerator) / a.denominator
    return mpmath.mpmathify(a)


def periodic_zeta(s, a, policy: PrecisionPolicy | None = None):
    """F(s, a) = sum_{n >= 1} e(n a) n^(-s) for 0 < a < 1, continued to all s.

    Rational ``a`` (``Fraction`` or ``int``/``int`` ratio given as Fraction)
    uses the finite Hurwitz decomposition; other ``a`` fall back to the Lerch
    transcendent.
    """
    pol = resolve(policy)
    s = mpmath.mpmathify(s)
    with mp.workdps(pol.working_digits + 15 + _pole_guard(s)):
        if isinstance(a, Fraction):
            if not (0 < a < 1):
                raise DomainError("periodic_zeta needs 0 < a < 1")
            p, q = a.numerator, a.denominator
            if s == 1:
                v = -mpmath.log(1 - mpmath.expjpi(mpmath.mpf(2 * p) / q))
            else:
                v = mpmath.mpf(q) ** (-s) * mpmath.fsum(
                    mpmath.expjpi(mpmath.mpf(2 * p * r) / q) * mpmath.zeta(s, mpmath.mpf(r) / q)
                    for r in range(1, q + 1)
                )
        else:
            a = mpmath.mpmathify(a)
            if not (0 < a < 1):
                raise DomainError("periodic_zeta needs 0 < a < 1")
            z = mpmath.expjpi(2 * a)
            v = z * mpmath.lerchphi(z, s, 1)
    return +v


# ---------------------------------------------------------------- characters


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod q stored as its value table."""

    modulus: int
    values: tuple

    @property
    def delta(self) -> int:
        return 0 if self(-1) == 1 else 1

    def __call__(self, n: int):
        return self.values[int(n) % self.modulus]

    @classmethod
    def kronecker(cls, D: int) -> "DirichletCharacter":
        """chi_D(n) = (D/n) for a fundamental discriminant D, modulus |D|."""
        q = abs(D)
        return cls(q, tuple(kronecker(D, n) for n in range(q)))

    def is_real(self) -> bool:
        return all(mpmath.im(mpmath.mpmathify(v)) == 0 for v in self.values)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(mpmath.conj(v) if not isinstance(v, int) else v for v in self.values))

    def is_principal(self) -> bool:
        return all(v == (1 if math.gcd(n, self.modulus) == 1 else 0) for n, v in enumerate(self.values))

    def is_primitive(self) -> bool:
        q = self.modulus
        for d in range(1, q):
            if q % d:
                continue
            # an induced character is constant 1 on units n = 1 (mod d)
            if all(self(n) == 1 for n in range(1, q) if (n - 1) % d == 0 and math.gcd(n, q) == 1):
                return False
        return True

    def check(self) -> None:
        q = self.modulus
        if len(self.values) != q:
            raise DomainError("value table must have length q")
        for m in range(q):
            for n in range(q):
                if abs(mpmath.mpmathify(self(m * n)) - mpmath.mpmathify(self(m)) * self(n)) > mpmath.mpf(10) ** (-mp.dps + 5):
                    raise DomainError("values are not completely multiplicative")
            if (math.gcd(m, q) > 1) != (self(m) == 0):
                raise DomainError("chi(n) must vanish exactly on non-units")


CHI_M4 = DirichletCharacter.kronecker(-4)
CHI_M3 = DirichletCharacter.kronecker(-3)


def _pole_guard(s) -> int:
    # the 1/(s-1) parts of the Hurwitz terms cancel in character sums
    d = abs(s - 1)
    return 0 if d == 0 or d > 1 else int(-mpmath.log10(d)) + 5


def _require_primitive(chi: DirichletCharacter) -> None:
    if chi.modulus == 1 or chi.is_principal() or not chi.is_primitive():
        raise DomainError("character must be primitive and non-principal")


def dirichlet_l(s, chi: DirichletCharacter, policy: PrecisionPolicy | None = None):
    """L(s, chi) = q^(-s) sum_r chi(r) zeta(s, r/q) for primitive non-principal chi."""
    _require_primitive(chi)
    pol = resolve(policy)
    q = chi.modulus
    s = mpmath.mpmathify(s)
    with mp.workdps(pol.working_digits + 10 + _pole_guard(s)):
        if s == 1:
            # zeta(s, a) = 1/(s-1) - psi(a) + O(s-1) and sum chi(r) = 0
            v = -mpmath.fsum(chi(r) * mpmath.digamma(mpmath.mpf(r) / q) for r in range(1, q)) / q
        else:
            v = mpmath.mpf(q) ** (-s) * mpmath.fsum(chi(r) * mpmath.zeta(s, mpmath.mpf(r) / q) for r in range(1, q) if chi(r) != 0)
        if chi.is_real() and mpmath.im(s) == 0:
            v = mpmath.re(v)
    return +v


def gauss_sum(chi: DirichletCharacter, policy: PrecisionPolicy | None = None):
    """tau(chi) = sum_{r mod q} chi(r) e(r/q)."""
    _require_primitive(chi)
    pol = resolve(policy)
    q = chi.modulus
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.fsum(chi(r) * mpmath.expjpi(mpmath.mpf(2 * r) / q) for r in range(q))
    return +v


def root_number(chi: DirichletCharacter, policy: PrecisionPolicy | None = None):
    """eps(chi) = i^(-delta) tau(chi) / sqrt(q)."""
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        v = mpmath.mpc(0, -1) ** chi.delta * gauss_sum(chi, pol) / mpmath.sqrt(chi.modulus)
    return +v


def completed_dirichlet_l(s, chi: DirichletCharacter, policy: PrecisionPolicy | None = None):
    """Lambda(s, chi) = (q/pi)^((s+delta)/2) Gamma((s+delta)/2) L(s, chi)."""
    pol = resolve(policy)
    with mp.workdps(pol.working_digits + 10):
        w = (mpmath.mpmathify(s) + chi.delta) / 2
        v = (mpmath.mpf(chi.modulus) / mpmath.pi) ** w * mpmath.gamma(w) * dirichlet_l(s, chi, pol)
    return +v
