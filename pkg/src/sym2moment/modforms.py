"""Level-one cusp forms: exact q-expansions, Hecke eigenforms, Petersson weights.

Coefficients are exact integers held in flint polynomials.  Eigenforms are
obtained by diagonalising the exact integer matrix of T_2 on the Miller basis
at raised working precision; the eigenvalue field is never built exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import flint
import mpmath
import numpy as np
from mpmath import mp

from .arith import kloosterman, kloosterman_table, primes_up_to
from .errors import (
    DomainError,
    NegativeWeightError,
    PrecisionError,
    RepeatedEigenvalueError,
    SingularSystemError,
    TailBoundError,
)
from .precision import PrecisionPolicy, log10_abs, resolve
from .specfun.bessel import bessel_j, bessel_j_float

CACHE_ENV = "SYM2MOMENT_CACHE_DIR"


# ---------------------------------------------------------------- q-expansions


@dataclass(frozen=True)
class QExpansion:
    """Exact power series sum_{n=0}^{N} a(n) q^n of a weight-k form."""

    weight: int
    coeffs: tuple

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def poly(self) -> flint.fmpz_poly:
        return flint.fmpz_poly(list(self.coeffs))

    @classmethod
    def from_poly(cls, weight: int, p: flint.fmpz_poly, N: int) -> "QExpansion":
        cs = [int(c) for c in p.coeffs()[: N + 1]]
        cs += [0] * (N + 1 - len(cs))
        return cls(weight, tuple(cs))

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        N = min(self.N, other.N)
        return QExpansion.from_poly(self.weight + other.weight, self.poly().mul_low(other.poly(), N + 1), N)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise DomainError("cannot add forms of different weights")
        N = min(self.N, other.N)
        return QExpansion(self.weight, tuple(a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1])))

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + other.scale(-1)

    def scale(self, c: int) -> "QExpansion":
        return QExpansion(self.weight, tuple(c * a for a in self.coeffs))

    def is_cusp(self) -> bool:
        return self.coeffs[0] == 0


def _sigma_table(power: int, N: int) -> list[int]:
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d**power
        for m in range(d, N + 1, d):
            sig[m] += dp
    return sig


def eisenstein(k: int, N: int) -> QExpansion:
    """E_4 = 1 + 240 sum sigma_3(n) q^n, E_6 = 1 - 504 sum sigma_5(n) q^n."""
    if k not in (4, 6):
        raise DomainError("only E_4 and E_6 are provided")
    c = 240 if k == 4 else -504
    sig = _sigma_table(k - 1, N)
    return QExpansion(k, tuple([1] + [c * s for s in sig[1:]]))


def one(N: int) -> QExpansion:
    return QExpansion(0, tuple([1] + [0] * N))


def delta(N: int) -> QExpansion:
    E4, E6 = eisenstein(4, N), eisenstein(6, N)
    raw = E4 * E4 * E4 - E6 * E6
    return QExpansion(12, tuple(a // 1728 for a in raw.coeffs))


def cusp_dimension(k: int) -> int:
    if k % 2 or k < 0:
        return 0
    if k == 2:
        return 0
    d = k // 12
    return d - 1 if k % 12 == 2 else d


def _small_weight(kp: int, N: int) -> QExpansion:
    # E_{k'} for k' in {0, 4, 6, 8, 10, 14} as a monomial in E_4, E_6
    a, b = {0: (0, 0), 4: (1, 0), 6: (0, 1), 8: (2, 0), 10: (1, 1), 14: (2, 1)}[kp]
    out = one(N)
    E4, E6 = eisenstein(4, N), eisenstein(6, N)
    for _ in range(a):
        out = out * E4
    for _ in range(b):
        out = out * E6
    return out


def _cache_path(k: int) -> Path | None:
    d = os.environ.get(CACHE_ENV)
    if not d:
        return None
    return Path(d) / f"miller_k{k}.json"


def save_basis(path: Path, k: int, basis: list[QExpansion]) -> None:
    payload = {"format": "sym2moment-miller-v1", "k": k, "N": basis[0].N, "basis": [[str(c) for c in g.coeffs] for g in basis]}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)


def load_basis(path: Path) -> tuple[int, list[QExpansion]]:
    payload = json.loads(path.read_text())
    if payload.get("format") != "sym2moment-miller-v1":
        raise DomainError("unrecognised cache format")
    k = int(payload["k"])
    return k, [QExpansion(k, tuple(int(c) for c in row)) for row in payload["basis"]]


def miller_basis(k: int, N: int) -> list[QExpansion]:
    """Echelon basis g_1..g_d of S_k with g_i = q^i + O(q^(d+1)), exact to q^N."""
    d = cusp_dimension(k)
    if d == 0:
        raise DomainError(f"S_{k} is zero")
    if N < 2 * d:
        raise DomainError("N too small for the requested weight")
    path = _cache_path(k)
    if path is not None and path.exists():
        kk, basis = load_basis(path)
        if kk == k and basis[0].N >= N:
            return [QExpansion(k, g.coeffs[: N + 1]) for g in basis]
    basis = _miller_basis(k, N)
    if path is not None:
        save_basis(path, k, basis)
    return basis


@lru_cache(maxsize=64)
def _miller_basis(k: int, N: int) -> list[QExpansion]:
    d = cusp_dimension(k)
    kp = k - 12 * d
    D = delta(N)
    E6sq = eisenstein(6, N) * eisenstein(6, N)
    Ek = _small_weight(kp, N)
    gens = []
    for j in range(1, d + 1):
        g = Ek
        for _ in range(j):
            g = g * D
        for _ in range(d - j):
            g = g * E6sq
        gens.append(g)
    # back-substitution clears q^i (i > j) from g_j; leading terms are already 1
    polys = [g.poly() for g in gens]
    for j in range(d - 1, -1, -1):
        for i in range(j + 1, d):
            c = int(polys[j][i + 1])
            if c:
                polys[j] = polys[j] - c * polys[i]
    return [QExpansion.from_poly(k, p, N) for p in polys]


# ---------------------------------------------------------------- Hecke eigenforms


@dataclass
class HeckeEigenform:
    """Normalised eigenform: lam[n] = a_f(n) / n^((k-1)/2), lam[1] = 1.

    ``coords`` are the coordinates in the Miller basis, kept so the
    expansion can be extended later; ``digits`` is the precision of lam.
    """

    k: int
    lam: tuple
    coords: tuple
    theta: object
    digits: int
    w: object = None
    prime_lam: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.lam) - 1

    def lam_at(self, n: int):
        if n <= self.N:
            return self.lam[n]
        if n in self.prime_lam:
            return self.prime_lam[n]
        raise DomainError(f"lambda({n}) not available (N={self.N})")


def hecke_matrix(basis: list[QExpansion], p: int = 2) -> list[list[int]]:
    """Exact integer matrix M with T_p g_i = sum_j M[i][j] g_j."""
    d = len(basis)
    k = basis[0].weight
    pk = p ** (k - 1)
    M = []
    for g in basis:
        row = []
        for j in range(1, d + 1):
            v = g[p * j] + (pk * g[j // p] if j % p == 0 else 0)
            row.append(v)
        M.append(row)
    return M


def _distinct_roots(M: list[list[int]], dps: int):
    d = len(M)
    cp = flint.fmpz_mat(M).charpoly()
    if d > 1 and cp.gcd(cp.derivative()).degree() > 0:
        return None
    coeffs = [int(c) for c in reversed(cp.coeffs())]
    with mp.workdps(dps):
        if d == 1:
            return [mpmath.mpf(-coeffs[1])]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
        out = []
        for r in roots:
            if abs(mpmath.im(r)) > mpmath.mpf(10) ** (-dps // 2) * (1 + abs(r)):
                raise PrecisionError("Hecke polynomial has a non-real root")
            out.append(mpmath.re(r))
        return sorted(out)


def _eigvec(M, theta, dps):
    d = len(M)
    with mp.workdps(dps):
        A = mpmath.matrix(d, d)
        for i in range(d):
            for j in range(d):
                A[i, j] = M[j][i]
            A[i, i] -= theta
        if d == 1:
            return [mpmath.mpf(1)], mpmath.mpf(0)
        B = mpmath.matrix(d, d - 1)
        rhs = mpmath.matrix(d, 1)
        for i in range(d):
            rhs[i] = -A[i, 0]
            for j in range(1, d):
                B[i, j - 1] = A[i, j]
        x, _ = mpmath.qr_solve(B, rhs)
        v = [mpmath.mpf(1)] + [x[i] for i in range(d - 1)]
        res = max(abs(sum(A[i, j] * v[j] for j in range(d))) for i in range(d))
        return v, res / mpmath.norm(mpmath.matrix(v))


def hecke_eigenforms(k: int, N: int, policy: PrecisionPolicy | None = None) -> list[HeckeEigenform]:
    """Normalised Hecke eigenforms of weight k with lambda(n) for n <= N.

    T_2 is diagonalised first; if its eigenvalues collide T_3 is tried.
    Raises ``RepeatedEigenvalueError`` when neither separates the forms.
    """
    pol = resolve(policy)
    d = cusp_dimension(k)
    if d == 0:
        raise DomainError(f"S_{k} is zero")
    basis = miller_basis(k, max(N, 3 * d + 3))
    big = max(log10_abs(c) for g in basis for c in g.coeffs[1:] if c)
    dps = pol.working_digits + 20 + int(big)
    for p in (2, 3):
        M = hecke_matrix(basis, p)
        thetas = _distinct_roots(M, dps)
        if thetas is not None:
            break
    else:
        raise RepeatedEigenvalueError(f"T_2 and T_3 have repeated eigenvalues in weight {k}")
    forms = []
    for th in thetas:
        v, res = _eigvec(M, th, dps)
        if res > mpmath.mpf(10) ** (-pol.working_digits):
            raise PrecisionError(f"eigen-residual {mpmath.nstr(res, 3)} too large")
        forms.append(_build_form(k, basis, v, th, N, pol.working_digits, dps))
    return forms


def _build_form(k, basis, v, theta, N, digits, dps) -> HeckeEigenform:
    half = mpmath.mpf(k - 1) / 2
    lam = [mpmath.mpf(0)]
    with mp.workdps(dps):
        for n in range(1, N + 1):
            a = mpmath.fsum(v[i] * basis[i][n] for i in range(len(basis)))
            lam.append(a * mpmath.exp(-half * mpmath.log(n)))
    with mp.workdps(digits + 10):
        lam = tuple(+x for x in lam)
        lam = (lam[0], mpmath.mpf(1)) + lam[2:]
        coords = tuple(+x for x in v)
    return HeckeEigenform(k=k, lam=lam, coords=coords, theta=theta, digits=digits)


def extend_prime_coefficients(forms: list[HeckeEigenform], P: int) -> None:
    """Fill ``prime_lam`` with lambda(p) for primes N < p <= P (in place)."""
    if not forms:
        return
    k = forms[0].k
    basis = miller_basis(k, P)
    half = mpmath.mpf(k - 1) / 2
    for f in forms:
        digits = f.digits
        big = max(log10_abs(c) for g in basis for c in g.coeffs[-10:] if c)
        with mp.workdps(digits + 20 + int(big)):
            v = [mpmath.mpf(x) for x in f.coords]
            for p in primes_up_to(P):
                if p <= f.N or p in f.prime_lam:
                    continue
                a = mpmath.fsum(v[i] * basis[i][p] for i in range(len(basis)))
                f.prime_lam[p] = a * mpmath.exp(-half * mpmath.log(p))
        with mp.workdps(digits + 10):
            for p in list(f.prime_lam):
                f.prime_lam[p] = +f.prime_lam[p]


def hecke_lambda(f: HeckeEigenform, n: int):
    """lambda_f(n) from prime values via multiplicativity and the Hecke recursion."""
    out = mpmath.mpf(1)
    m = n
    p = 2
    while m > 1:
        if p * p > m:
            p = m
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            lp = f.lam_at(p)
            prev, cur = mpmath.mpf(1), lp
            for _ in range(e - 1):
                prev, cur = cur, lp * cur - prev
            out *= cur
        p += 1
    return out


# ---------------------------------------------------------------- Petersson


def _c_tail(k: int, mn: int, C: int):
    """Bound for 2 pi sum_{c > C} |S(m,n;c)| |J_{k-1}(4 pi sqrt(mn)/c)| / c.

    Uses |S| <= c and |J_nu(x)| <= (x/2)^nu / Gamma(nu+1).
    """
    nu = k - 1
    with mp.workdps(30):
        return 2 * mpmath.pi * (2 * mpmath.pi * mpmath.sqrt(mn)) ** nu / mpmath.gamma(nu + 1) * mpmath.mpf(C) ** (1 - nu) / (nu - 1)


def petersson_cutoff(k: int, mn: int, tol) -> int:
    C = 1
    while _c_tail(k, mn, C) > tol:
        C = int(C * 1.25) + 1
    lo, hi = max(1, int(C / 1.25) - 1), C
    while lo < hi:
        mid = (lo + hi) // 2
        if _c_tail(k, mn, mid) > tol:
            lo = mid + 1
        else:
            hi = mid
    return hi


def petersson_rhs(k: int, m: int, n: int, policy: PrecisionPolicy | None = None, c_max: int | None = None):
    """delta_{m,n} + 2 pi i^(-k) sum_{c <= c_max} S(m,n;c) J_{k-1}(4 pi sqrt(mn)/c) / c.

    ``c_max`` defaults to the smallest cutoff whose certified tail is below a
    tenth of ``target_abs_tol``; an explicit cutoff with a larger tail raises.
    """
    pol = resolve(policy)
    if m < 1 or n < 1:
        raise DomainError("m, n must be >= 1")
    tol = mpmath.mpf(pol.target_abs_tol) / 10
    if c_max is None:
        c_max = petersson_cutoff(k, m * n, tol)
    elif _c_tail(k, m * n, c_max) > tol:
        raise TailBoundError(f"c_max={c_max} leaves a tail above tolerance")
    sign = -1 if (k // 2) % 2 else 1
    with mp.workdps(pol.working_digits + 10):
        x0 = 4 * mpmath.pi * mpmath.sqrt(m * n)
        terms = []
        for c in range(1, c_max + 1):
            S = kloosterman(m, n, c, pol.working_digits + 10)
            if S == 0:
                continue
            terms.append(S * bessel_j(k - 1, x0 / c, pol) / c)
        v = (1 if m == n else 0) + sign * 2 * mpmath.pi * mpmath.fsum(terms)
    return +v


def petersson_matrices(ks, M: int, tol: float = 1e-15) -> dict[int, np.ndarray]:
    """Float64 Petersson right sides R_k[m-1, n-1] for all m, n <= M and k in ks.

    Kloosterman tables are shared across weights; the c-range is certified per
    weight for the worst product mn = M^2.
    """
    ks = list(ks)
    ms = np.arange(1, M + 1)
    root = np.sqrt(np.outer(ms, ms).astype(float))
    cutoffs = {k: petersson_cutoff(k, M * M, tol) for k in ks}
    out = {k: np.zeros((M, M)) for k in ks}
    for c in range(1, max(cutoffs.values()) + 1):
        S = kloosterman_table(ms, ms, c)
        x = 4 * np.pi * root / c
        for k in ks:
            if c <= cutoffs[k]:
                out[k] += S * bessel_j_float(k - 1, x) / c
    for k in ks:
        sign = -1 if (k // 2) % 2 else 1
        out[k] = np.eye(M) + sign * 2 * np.pi * out[k]
    return out


def solve_weights(k: int, forms: list[HeckeEigenform], policy: PrecisionPolicy | None = None) -> list[HeckeEigenform]:
    """Solve sum_f w_f lambda_f(n) = petersson_rhs(k, 1, n), n = 1..d, for the w_f."""
    pol = resolve(policy)
    d = len(forms)
    with mp.workdps(pol.working_digits + 10):
        A = mpmath.matrix(d, d)
        b = mpmath.matrix(d, 1)
        for i in range(d):
            n = i + 1
            b[i] = petersson_rhs(k, 1, n, pol)
            for j, f in enumerate(forms):
                A[i, j] = f.lam_at(n)
        if d > 1 and abs(mpmath.det(A)) < mpmath.mpf(10) ** (-pol.working_digits // 2):
            raise SingularSystemError("eigenvalue matrix is singular")
        w = mpmath.lu_solve(A, b)
    for j, f in enumerate(forms):
        if not w[j] > 0:
            raise NegativeWeightError(f"w_f = {mpmath.nstr(w[j], 5)} is not positive")
        f.w = +w[j]
    return forms


def eigenforms_with_weights(k: int, N: int, policy: PrecisionPolicy | None = None) -> list[HeckeEigenform]:
    forms = hecke_eigenforms(k, N, policy)
    return solve_weights(k, forms, policy)
