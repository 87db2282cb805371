"""Exact integer arithmetic: Kronecker symbols, Kloosterman sums, congruence counts.

N(c) counts units x mod c with x^2 = -1 (mod c) and M(c) counts units with
x^2 - x + 1 = 0 (mod c).  Both have an enumeration route and a closed form
through the factorisation of c; the two are kept independent on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp

from .errors import DomainError

ENUMERATION_LIMIT = 10**6


# ---------------------------------------------------------------- factoring


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (n is small in every caller)."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def num_divisors(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def smallest_prime_factor_table(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, int(math.isqrt(n_max)) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(n_max + 1)
    mask = spf == 0
    spf[mask] = idx[mask]
    return spf


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].tolist()


# ---------------------------------------------------------------- Kronecker


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n), with (D/0) = [D = +-1] and (D/-1) = sign(D)."""
    D, n = int(D), int(n)
    if n == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 == 1 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D / n) for odd n > 0
    a = D % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------- Kloosterman


@lru_cache(maxsize=4096)
def _units_and_inverses(c: int) -> tuple[np.ndarray, np.ndarray]:
    xs = [x for x in range(c) if math.gcd(x, c) == 1]
    if c == 1:
        return np.array([0], dtype=np.int64), np.array([0], dtype=np.int64)
    inv = [pow(x, -1, c) for x in xs]
    return np.array(xs, dtype=np.int64), np.array(inv, dtype=np.int64)


def kloosterman(m: int, n: int, c: int, digits: int | None = None):
    """S(m, n; c) from exact residues; returns a real mpf.

    Residues (m x + n xbar) mod c are tallied exactly, so only the final
    cosine sum is rounded.
    """
    if c < 1:
        raise DomainError("modulus c must be >= 1")
    xs, inv = _units_and_inverses(c)
    res = (m % c * xs + n % c * inv) % c
    counts = np.bincount(res, minlength=c)
    nz = np.nonzero(counts)[0]
    with mp.workdps((digits or mp.dps) + 5):
        tot = mpmath.fsum(int(counts[r]) * mpmath.cospi(mpmath.mpf(2 * int(r)) / c) for r in nz)
    return +tot


def kloosterman_table(ms, ns, c: int) -> np.ndarray:
    """Float64 matrix S(m_i, n_j; c) for bulk screening."""
    xs, inv = _units_and_inverses(c)
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    U = np.exp(2j * np.pi * ((np.outer(ms, xs) % c) / c))
    V = np.exp(2j * np.pi * ((np.outer(ns, inv) % c) / c))
    return (U @ V.T).real


# ---------------------------------------------------------------- r(x, c)


def r_of(x: int, c: int) -> int:
    """Representative of x + xbar (mod c) in [1, c]."""
    if c < 1:
        raise DomainError("modulus c must be >= 1")
    if math.gcd(x, c) != 1:
        raise DomainError(f"x={x} is not coprime to c={c}")
    r = (x + pow(x, -1, c)) % c if c > 1 else 0
    return r if r else c


def r_ratio(x: int, c: int) -> Fraction:
    return Fraction(r_of(x, c), c)


# ---------------------------------------------------------------- N(c), M(c)


@dataclass(frozen=True)
class CongruenceCount:
    kind: str
    c: int
    count: int


def _enumerate_count(kind: str, c: int) -> int:
    # both congruences force gcd(x, c) = 1, so no separate unit test is needed
    x = np.arange(c, dtype=np.int64)
    if kind == "N":
        return int(np.count_nonzero((x * x + 1) % c == 0))
    return int(np.count_nonzero((x * x - x + 1) % c == 0))


def _closed_count(kind: str, c: int) -> int:
    # N: c = 2^a n with a <= 1 and every odd prime p | n having p = 1 (mod 4)
    # M: c = 3^b n with b <= 1 and every prime p | n having p = 1 (mod 3)
    special, mod = (2, 4) if kind == "N" else (3, 3)
    count = 1
    for p, e in (factorize(c) if c > 1 else {}).items():
        if p == special:
            if e > 1:
                return 0
        elif p % mod != 1:
            return 0
        else:
            count *= 2
    return count


def _count(kind: str, c: int, method: str) -> int:
    if c < 1:
        raise DomainError("c must be >= 1")
    if method == "auto":
        method = "enumerate" if c <= ENUMERATION_LIMIT else "closed"
    if method == "enumerate":
        return _enumerate_count(kind, c)
    if method == "closed":
        return _closed_count(kind, c)
    raise DomainError(f"unknown method {method!r}")


def count_N(c: int, method: str = "auto") -> int:
    """#{x mod c : x^2 = -1 (mod c)} (such x are automatically units)."""
    return _count("N", int(c), method)


def count_M(c: int, method: str = "auto") -> int:
    """#{x mod c : x^2 - x + 1 = 0 (mod c)}."""
    return _count("M", int(c), method)


def count_table(kind: str, n_max: int) -> np.ndarray:
    """Closed-form counts for every c <= n_max via a smallest-prime-factor sieve."""
    if kind not in ("N", "M"):
        raise DomainError("kind must be 'N' or 'M'")
    spf = smallest_prime_factor_table(n_max)
    out = np.zeros(n_max + 1, dtype=np.int64)
    special, mod = (2, 4) if kind == "N" else (3, 3)
    for c in range(1, n_max + 1):
        n, val = c, 1
        while n > 1 and val:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if p == special:
                if e > 1:
                    val = 0
            elif p % mod != 1:
                val = 0
            else:
                val *= 2
        out[c] = val
    return out


def character_divisor_sums(D: int, n_max: int) -> np.ndarray:
    """sum_{d | n} chi_D(d) for n <= n_max."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        chi = kronecker(D, d)
        if chi:
            out[d::d] += chi
    return out


def square_convolution(counts: np.ndarray) -> np.ndarray:
    """sum_{a^2 b = n} counts[b] for every n < len(counts)."""
    n_max = len(counts) - 1
    out = np.zeros_like(counts)
    a = 1
    while a * a <= n_max:
        sq = a * a
        out[sq::sq] += counts[1 : n_max // sq + 1]
        a += 1
    return out


def convolution_identity_check(kind: str, n_max: int, counts: np.ndarray | None = None):
    """Check sum_{a^2 b = n} count(b) = sum_{d | n} chi_D(d) for all n <= n_max.

    Returns ``(True, None)`` or ``(False, n)`` with the first failing n.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    D = -4 if kind == "N" else -3
    if counts is None:
        counts = count_table(kind, n_max)
    lhs = square_convolution(np.asarray(counts[: n_max + 1]))
    rhs = character_divisor_sums(D, n_max)
    bad = np.nonzero(lhs[1:] != rhs[1:])[0]
    if len(bad):
        return False, int(bad[0]) + 1
    return True, None


# ---------------------------------------------------------------- Bernoulli, p_{k,r}


@lru_cache(maxsize=None)
def _bernoulli_list(k: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for m in range(1, k + 1):
        s = sum(math.comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli(k: int) -> Fraction:
    """Exact B_k with B_1 = -1/2."""
    if k < 0:
        raise DomainError("k must be >= 0")
    return _bernoulli_list(int(k))[k]


def p_coeff(k: int, r: int, t: int, m: int) -> Fraction:
    """Coefficient of x^(k-r-1) in (1 - t x + m x^2)^(-r)."""
    if r < 3 or r > k - 1:
        raise DomainError("need 3 <= r <= k-1")
    N = k - r - 1
    total = 0
    # (1 - y)^(-r) with y = x (t - m x); the x^N term needs N - j factors of -m x
    for j in range((N + 1) // 2, N + 1):
        total += math.comb(r + j - 1, j) * math.comb(j, N - j) * t ** (2 * j - N) * (-m) ** (N - j)
    return Fraction(total)
