"""Adaptive Gauss-Legendre quadrature for (1/2 pi i) integrals over vertical lines.

A contour is the segment sigma + i[-T, T] plus one of four tail treatments:

``truncate``
    nothing beyond |Im z| = T; the caller supplies an analytic bound for the
    discarded part and it is checked against the tolerance.
``left`` / ``right``
    horizontal rays from sigma +- iT to -infinity or +infinity.  Only valid
    when no poles lie between the rays and the original line; the integrand
    must decay along the rays.
``algebraic``
    the vertical line continued to infinity through t = T e^v, for
    integrands decaying like a power of |t|.

All integrands are evaluated at the current mpmath precision; callers wrap
calls in ``mp.workdps``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
from mpmath import mp
from mpmath.calculus.quadrature import GaussLegendre

from ..errors import ContourError, NonConvergenceError, TailBoundError
from ..precision import PrecisionPolicy, resolve

TAIL_MODES = ("truncate", "left", "right", "algebraic")


@dataclass(frozen=True)
class ContourSpec:
    sigma: float
    height: float
    panels: int = 8
    tails: str = "truncate"
    degree: int = 4
    max_depth: int = 30
    ray_panel: float = 2.0
    max_ray_panels: int = 400

    def __post_init__(self):
        if not self.height > 0:
            raise ContourError("height must be positive")
        if self.panels < 1:
            raise ContourError("panels must be >= 1")
        if self.tails not in TAIL_MODES:
            raise ContourError(f"tails must be one of {TAIL_MODES}")

    def with_(self, **kw) -> "ContourSpec":
        return replace(self, **kw)


@lru_cache(maxsize=32)
def _nodes(degree: int, prec: int):
    with mp.workprec(prec + 20):
        raw = GaussLegendre(mp).calc_nodes(degree, prec + 20)
    with mp.workprec(prec):
        return tuple((+x, +w) for x, w in raw)


def _gl(g, a, b, nodes, width):
    half = (b - a) / 2
    mid = (a + b) / 2
    acc = [mpmath.mpc(0)] * width
    for x, w in nodes:
        vals = g(mid + half * x)
        for i in range(width):
            acc[i] += w * vals[i]
    return [half * v for v in acc]


def _maxabs(vals):
    return max((abs(v) for v in vals), default=mpmath.mpf(0))


def _adaptive(g, a, b, tol, nodes, width, max_depth):
    """Integrate a vector-valued g on [a, b] by bisection until halves agree."""
    total = [mpmath.mpc(0)] * width
    stack = [(a, b, _gl(g, a, b, nodes, width), tol, 0)]
    while stack:
        lo, hi, whole, t, depth = stack.pop()
        mid = (lo + hi) / 2
        left = _gl(g, lo, mid, nodes, width)
        right = _gl(g, mid, hi, nodes, width)
        refined = [l + r for l, r in zip(left, right)]
        err = _maxabs([u - v for u, v in zip(refined, whole)])
        if err <= t:
            total = [s + v for s, v in zip(total, refined)]
            continue
        if depth >= max_depth:
            raise NonConvergenceError(f"panel [{mpmath.nstr(lo, 8)}, {mpmath.nstr(hi, 8)}] did not converge")
        stack.append((lo, mid, left, t / 2, depth + 1))
        stack.append((mid, hi, right, t / 2, depth + 1))
    return total


def _semi_infinite(g, tol, nodes, width, spec, start=0):
    """Integrate g on [start, oo) in fixed-width panels until contributions die out."""
    total = [mpmath.mpc(0)] * width
    w = mpmath.mpf(spec.ray_panel)
    a = mpmath.mpf(start)
    quiet = 0
    for _ in range(spec.max_ray_panels):
        part = _adaptive(g, a, a + w, tol / 16, nodes, width, spec.max_depth)
        total = [s + v for s, v in zip(total, part)]
        a += w
        quiet = quiet + 1 if _maxabs(part) <= tol / 64 else 0
        if quiet >= 3:
            return total
    raise NonConvergenceError("tail integral did not decay within max_ray_panels")


def line_integral_vector(
    f: Callable[[mpmath.mpc], Sequence],
    width: int,
    spec: ContourSpec,
    policy: PrecisionPolicy | None = None,
    *,
    tail_bound: Callable[[mpmath.mpf], mpmath.mpf] | None = None,
    real: bool = False,
    tol=None,
):
    """(1/2 pi i) integral of a vector-valued f along the contour in ``spec``.

    ``real`` declares f(conj z) = conj f(z) componentwise; then only the
    upper half is evaluated and the real value is returned.
    ``tail_bound(T)`` must bound (1/2 pi) integral_{|t| > T} |f(sigma + i t)| dt
    for every component and is required in ``truncate`` mode.
    """
    pol = resolve(policy)
    tol = mpmath.mpf(pol.target_abs_tol if tol is None else tol)
    nodes = _nodes(spec.degree, mp.prec)
    sigma = mpmath.mpf(spec.sigma)
    T = mpmath.mpf(spec.height)
    pi = mpmath.pi

    if spec.tails == "truncate":
        if tail_bound is None:
            raise ContourError("truncate mode needs a caller-supplied tail bound")
        tb = tail_bound(T)
        if not tb <= tol / 4:
            raise TailBoundError(f"tail bound {mpmath.nstr(tb, 5)} exceeds tolerance at height {spec.height}")
        budget = tol / 2
    else:
        budget = tol / 3

    if real:
        def seg(t):
            return [mpmath.re(v) for v in f(mpmath.mpc(sigma, t))]

        vals = _adaptive_panels(seg, 0, T, budget * pi, nodes, width, spec)
        out = [v / pi for v in vals]
    else:
        def seg(t):
            return f(mpmath.mpc(sigma, t))

        vals = _adaptive_panels(seg, -T, T, budget * 2 * pi, nodes, width, spec)
        out = [v / (2 * pi) for v in vals]

    if spec.tails in ("left", "right"):
        sgn = -1 if spec.tails == "left" else 1
        if real:
            def ray(x):
                return [mpmath.im(v) for v in f(mpmath.mpc(sigma + sgn * x, T))]

            vals = _semi_infinite(ray, budget * pi, nodes, width, spec)
            out = [o + sgn * v / pi for o, v in zip(out, vals)]
        else:
            def ray(x):
                up = f(mpmath.mpc(sigma + sgn * x, T))
                dn = f(mpmath.mpc(sigma + sgn * x, -T))
                return [sgn * (u - d) for u, d in zip(up, dn)]

            vals = _semi_infinite(ray, budget * 2 * pi, nodes, width, spec)
            out = [o + v / (2j * pi) for o, v in zip(out, vals)]
    elif spec.tails == "algebraic":
        if real:
            def tail(v):
                t = T * mpmath.exp(v)
                return [t * mpmath.re(x) for x in f(mpmath.mpc(sigma, t))]

            vals = _semi_infinite(tail, budget * pi, nodes, width, spec)
            out = [o + v / pi for o, v in zip(out, vals)]
        else:
            def tail(v):
                t = T * mpmath.exp(v)
                up = f(mpmath.mpc(sigma, t))
                dn = f(mpmath.mpc(sigma, -t))
                return [t * (u + d) for u, d in zip(up, dn)]

            vals = _semi_infinite(tail, budget * 2 * pi, nodes, width, spec)
            out = [o + v / (2 * pi) for o, v in zip(out, vals)]

    if real:
        out = [mpmath.re(v) for v in out]
    return out


def _adaptive_panels(g, a, b, tol, nodes, width, spec):
    a = mpmath.mpf(a)
    b = mpmath.mpf(b)
    h = (b - a) / spec.panels
    total = [mpmath.mpc(0)] * width
    for j in range(spec.panels):
        part = _adaptive(g, a + j * h, a + (j + 1) * h, tol / spec.panels, nodes, width, spec.max_depth)
        total = [s + v for s, v in zip(total, part)]
    return total


def line_integral(
    integrand: Callable[[mpmath.mpc], mpmath.mpc],
    spec: ContourSpec,
    policy: PrecisionPolicy | None = None,
    *,
    tail_bound=None,
    real: bool = False,
    tol=None,
):
    """(1/2 pi i) integral of ``integrand`` along the contour described by ``spec``."""
    (v,) = line_integral_vector(lambda z: (integrand(z),), 1, spec, policy, tail_bound=tail_bound, real=real, tol=tol)
    return v


def inverse_mellin(
    transform: Callable[[mpmath.mpc], mpmath.mpc],
    ys: Sequence,
    spec: ContourSpec,
    policy: PrecisionPolicy | None = None,
    *,
    tail_bound=None,
    real: bool = False,
    tol=None,
):
    """(1/2 pi i) integral of transform(u) y^(-u) du for every y in ``ys``.

    The transform is evaluated once per node and shared across all y.
    ``tail_bound(T)`` must hold uniformly for the y in ``ys``.
    """
    if all(isinstance(y, int) and y >= 1 for y in ys):
        f = _integer_powers(transform, ys)
    else:
        logs = [mpmath.log(mpmath.mpf(y)) for y in ys]

        def f(u):
            F = transform(u)
            return [F * mpmath.exp(-u * L) for L in logs]

    return line_integral_vector(f, len(ys), spec, policy, tail_bound=tail_bound, real=real, tol=tol)


def _integer_powers(transform, ys):
    # n^(-u) for every n <= max(ys) from one exp per prime, then multiplicativity
    top = max(ys)
    spf = list(range(top + 1))
    for p in range(2, int(top**0.5) + 1):
        if spf[p] == p:
            for m in range(p * p, top + 1, p):
                if spf[m] == m:
                    spf[m] = p
    logs = {p: mpmath.log(p) for p in range(2, top + 1) if spf[p] == p}

    def f(u):
        F = transform(u)
        pw = [None, mpmath.mpc(1)] + [None] * (top - 1)
        for n in range(2, top + 1):
            p = spf[n]
            pw[n] = mpmath.exp(-u * logs[p]) if p == n else pw[p] * pw[n // p]
        return [F * pw[y] for y in ys]

    return f
