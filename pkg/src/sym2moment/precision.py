"""Precision policy and helpers for mpmath working precision.

mpmath keeps its precision in a process-global context, so every routine in
this package changes it only through ``workdps`` blocks and restores it on
exit.  Results are rounded to the caller's context on return, so callers
wanting the full working precision wrap their calls in ``workdps`` too.
Threads must not share the context; the CLI parallelises with processes for
that reason.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from mpmath import mp

from .errors import DomainError

DEFAULT_DIGITS = 50


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision in decimal digits plus absolute and relative targets."""

    working_digits: int = DEFAULT_DIGITS
    target_abs_tol: float = 1e-25
    target_rel_tol: float = 1e-25

    def __post_init__(self):
        if int(self.working_digits) != self.working_digits or self.working_digits < 30:
            raise DomainError("working_digits must be an integer >= 30")
        for name in ("target_abs_tol", "target_rel_tol"):
            tol = getattr(self, name)
            if not tol > 0:
                raise DomainError(f"{name} must be positive")
            if math.log10(tol) < -self.working_digits + 3:
                raise DomainError(f"{name}={tol:g} is not representable at {self.working_digits} digits")

    def escalate(self, extra: int) -> "PrecisionPolicy":
        return PrecisionPolicy(self.working_digits + max(0, int(extra)), self.target_abs_tol, self.target_rel_tol)

    def fingerprint(self) -> dict:
        return {
            "working_digits": self.working_digits,
            "target_abs_tol": self.target_abs_tol,
            "target_rel_tol": self.target_rel_tol,
        }


DEFAULT_POLICY = PrecisionPolicy()


def resolve(policy: PrecisionPolicy | None) -> PrecisionPolicy:
    return DEFAULT_POLICY if policy is None else policy


@contextmanager
def workdps(digits: int):
    """Set mpmath precision to ``digits`` decimal digits for the block."""
    with mp.workdps(int(digits)):
        yield


def log10_abs(x) -> float:
    """log10 |x| as a float, -inf for zero; safe for huge mp numbers and ints."""
    if isinstance(x, int):
        if x == 0:
            return -math.inf
        n = abs(x)
        bits = n.bit_length()
        if bits < 1000:
            return math.log10(n)
        shift = bits - 60
        return math.log10(n >> shift) + shift * math.log10(2)
    a = abs(mpmath.mpmathify(x))
    if a == 0:
        return -math.inf
    return float(mpmath.log10(a))


def fmt_sci(x, digits: int) -> str:
    """Scientific-notation string with ``digits`` significant digits."""
    with mp.workdps(digits + 10):
        x = mpmath.mpf(x)
        if x == 0:
            return "0." + "0" * (digits - 1) + "e+0"
        if not mpmath.isfinite(x):
            return str(x)
        e = int(mpmath.floor(mpmath.log10(abs(x))))
        mant = x / mpmath.mpf(10) ** e
        s = mpmath.nstr(mant, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
        if s.lstrip("-").startswith("10"):
            e += 1
            mant = x / mpmath.mpf(10) ** e
            s = mpmath.nstr(mant, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
    return f"{s}e{e:+d}"
