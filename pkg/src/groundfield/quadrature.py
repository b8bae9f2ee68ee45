"""Integration over R^n with error estimates.

Three tools cover everything the checks need:

* :func:`radial_integral` -- omega_{n-1} * int_0^inf r^(n-1+s) g(r) dr by globally
  adaptive Gauss-Kronrod (7/15) with endpoint maps r = a t^beta near the origin
  and r = a / u for the tail, so no node ever sits at r = 0 or r = inf.
* :func:`spherical_integrals` -- radial-angular reduction for general integrands:
  the adaptive radial rule wraps a fixed product rule on S^(n-1). Several
  integrands can share one pass.
* :func:`tensor_grid_integral` -- composite trapezoid on [-L, L]^n with the
  difference to the half-resolution grid as error estimate.

Non-integrable integrands are reported as :class:`QuadratureDivergence` rather
than as large numbers.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, roots_jacobi

from .errors import DomainError, NodeSingularity, QuadratureDivergence

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-14
MAX_DEPTH = 60
DIVERGENCE_THRESHOLD = 1e12
MAX_INTERVALS = 20000

# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (nonnegative half)
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[1:7:2] = _WG[:3]
G_WEIGHTS[7] = _WG[3]
G_WEIGHTS[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureEstimate:
    value: float
    error: float
    method: str
    nodes: int

    def as_dict(self):
        return {"value": self.value, "error": self.error, "method": self.method, "nodes": self.nodes}


def sphere_area(n: int) -> float:
    """Surface measure of S^(n-1): 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def _gk_panel(h, a, b):
    c = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = np.asarray(h(c + half * GK_NODES), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    if not np.all(np.isfinite(vals)):
        raise QuadratureDivergence(f"integrand is not finite on [{a}, {b}]")
    k = half * (GK_WEIGHTS @ vals)
    g = half * (G_WEIGHTS @ vals)
    resabs = abs(half) * (GK_WEIGHTS @ np.abs(vals))
    err = np.maximum(np.abs(k - g), 50.0 * np.finfo(float).eps * resabs)
    return k, err


def adaptive_gk(h, a, b, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, max_depth=MAX_DEPTH,
                threshold=DIVERGENCE_THRESHOLD, max_intervals=MAX_INTERVALS):
    """Globally adaptive G7/K15 on a finite interval for scalar or vector integrands.

    Returns ``(values, errors, nodes)`` as arrays over components.
    """
    value, err = _gk_panel(h, a, b)
    nodes = 15
    heap = []
    counter = 0

    def push(lo, hi, depth, v, e):
        nonlocal counter
        scale = np.maximum(atol, rtol * np.abs(total_val))
        heapq.heappush(heap, (-float(np.max(e / scale)), counter, lo, hi, depth, v, e))
        counter += 1

    total_val, total_err = value.copy(), err.copy()
    push(a, b, 0, value, err)
    while True:
        if np.any(np.abs(total_val) > threshold):
            raise QuadratureDivergence(f"partial integrals exceed {threshold:g}")
        if np.all(total_err <= np.maximum(atol, rtol * np.abs(total_val))):
            return total_val, total_err, nodes
        if len(heap) >= max_intervals:
            raise QuadratureDivergence(f"no convergence within {max_intervals} subintervals")
        _, _, lo, hi, depth, v, e = heapq.heappop(heap)
        if depth >= max_depth:
            raise QuadratureDivergence(f"subdivision depth exceeded {max_depth} near [{lo:.3g}, {hi:.3g}]")
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk_panel(h, lo, mid)
        v2, e2 = _gk_panel(h, mid, hi)
        nodes += 30
        total_val = total_val - v + v1 + v2
        total_err = total_err - e + e1 + e2
        push(lo, mid, depth + 1, v1, e1)
        push(mid, hi, depth + 1, v2, e2)


def _origin_beta(origin_power):
    """Exponent beta for r = a t^beta that makes r^s dr smooth in t."""
    if origin_power is None or origin_power <= -1:
        return 1.0
    q = origin_power + 1.0
    return math.ceil(q - 1e-12) / q


def _times(vals, jac):
    vals = np.asarray(vals, dtype=float)
    return vals * jac.reshape(jac.shape + (1,) * (vals.ndim - 1))


def _radial_panels(h, r_max, breakpoints, origin_power, rtol, atol):
    """Integrate a 1-D integrand h(r) over (0, r_max) with endpoint maps."""
    pts = sorted(b for b in (breakpoints or ()) if 0 < b < r_max)
    if not pts:
        pts = [1.0] if not np.isfinite(r_max) else [0.5 * r_max]
    beta = _origin_beta(origin_power)
    a0 = pts[0]

    def first(t):
        return _times(h(a0 * t ** beta), a0 * beta * t ** (beta - 1.0))

    pieces = [(first, 0.0, 1.0)]
    for lo, hi in zip(pts[:-1], pts[1:]):
        pieces.append((h, lo, hi))
    last = pts[-1]
    if np.isfinite(r_max):
        pieces.append((h, last, r_max))
    else:
        def tail(u):
            return _times(h(last / u), last / (u * u))
        pieces.append((tail, 0.0, 1.0))

    total = err = None
    nodes = 0
    for fn, lo, hi in pieces:
        v, e, k = adaptive_gk(fn, lo, hi, rtol=rtol, atol=atol)
        total = v if total is None else total + v
        err = e if err is None else err + e
        nodes += k
    if np.any(np.abs(total) > DIVERGENCE_THRESHOLD):
        raise QuadratureDivergence(f"partial integrals exceed {DIVERGENCE_THRESHOLD:g}")
    return total, err, nodes


def radial_integral(g, n: int, s: float = 0.0, *, r_max=np.inf, breakpoints=None,
                    g_origin_power: float = 0.0, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL) -> QuadratureEstimate:
    """omega_{n-1} * int_0^r_max r^(n-1+s) g(r) dr for a vectorised radial profile g.

    ``g_origin_power`` is the leading power of g at r = 0 (when known); it picks
    the origin map so that algebraic endpoint singularities become smooth.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    omega = sphere_area(n)
    power = n - 1 + s

    def h(r):
        with np.errstate(all="ignore"):
            return omega * r ** power * np.asarray(g(r), dtype=float)

    v, e, k = _radial_panels(h, r_max, breakpoints, power + g_origin_power, rtol, atol)
    if v.shape[0] != 1:
        raise ValueError("radial_integral expects a scalar profile; use spherical_integrals")
    return QuadratureEstimate(float(v[0]), float(e[0]), "radial", k)


def sphere_rule(n: int, m: int):
    """Product rule on S^(n-1): Gauss-Jacobi in each polar angle, trapezoid in the azimuth.

    Exact for polynomials of degree < 2m restricted to the sphere. Returns
    ``(nodes, weights)`` with weights summing to the surface area.
    """
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        k = 2 * m
        th = 2.0 * np.pi * np.arange(k) / k
        return np.stack([np.cos(th), np.sin(th)], axis=-1), np.full(k, 2.0 * np.pi / k)
    a = (n - 3) / 2.0
    t, wt = roots_jacobi(m, a, a)
    sub, wsub = sphere_rule(n - 1, m)
    s = np.sqrt(1.0 - t * t)
    nodes = np.concatenate([
        np.broadcast_to(t[:, None, None], (m, len(wsub), 1)),
        s[:, None, None] * sub[None, :, :],
    ], axis=-1).reshape(-1, n)
    weights = (wt[:, None] * wsub[None, :]).reshape(-1)
    return nodes, weights


def default_angular_order(n: int) -> int:
    return {1: 1, 2: 48, 3: 24}.get(n, 14)


def spherical_integrals(f, n: int, *, radial=False, angular_order=None, r_max=np.inf,
                        breakpoints=None, origin_power: float = 0.0, rtol=DEFAULT_RTOL,
                        atol=DEFAULT_ATOL) -> list[QuadratureEstimate]:
    """Integrals over R^n of a vectorised integrand f(points) -> (..., ncomp).

    When ``radial`` is set the integrand is assumed rotation invariant and only
    the ray along e1 is sampled.
    """
    if radial:
        sig = np.zeros((1, n))
        sig[0, 0] = 1.0
        wts = np.array([sphere_area(n)])
    else:
        sig, wts = sphere_rule(n, angular_order or default_angular_order(n))

    def h(r):
        pts = r[:, None, None] * sig[None, :, :]
        with np.errstate(all="ignore"):
            vals = np.asarray(f(pts), dtype=float)
        if vals.ndim == 2:
            vals = vals[..., None]
        out = np.einsum("mkc,k->mc", vals, wts)
        with np.errstate(all="ignore"):
            return out * (r ** (n - 1))[:, None]

    v, e, k = _radial_panels(h, r_max, breakpoints, n - 1 + origin_power, rtol, atol)
    method = "radial" if radial else f"radial-angular({len(wts)})"
    return [QuadratureEstimate(float(a), float(b), method, k * len(wts)) for a, b in zip(v, e)]


def spherical_integral(f, n: int, **kwargs) -> QuadratureEstimate:
    return spherical_integrals(f, n, **kwargs)[0]


def sphere_poly_moment(P) -> float:
    """int over S^(n-1) of P(sigma)^2 by the exact monomial formula."""
    Q = P * P
    n = P.n
    total = 0.0
    for beta, c in Q.coeffs.items():
        if any(b % 2 for b in beta):
            continue
        num = 1.0
        for b in beta:
            num *= gamma((b + 1) / 2.0)
        total += float(c) * 2.0 * num / gamma((sum(beta) + n) / 2.0)
    return total


def tensor_grid_integral(f, n: int, L: float, m: int) -> QuadratureEstimate:
    """Composite trapezoid over [-L, L]^n with m nodes per axis (endpoints included)."""
    if m < 4:
        raise ValueError("need at least 4 nodes per axis")

    def trapezoid(k):
        x = np.linspace(-L, L, k)
        w = np.full(k, x[1] - x[0])
        w[0] = w[-1] = 0.5 * (x[1] - x[0])
        grids = np.meshgrid(*([x] * n), indexing="ij")
        pts = np.stack([g.reshape(-1) for g in grids], axis=-1)
        wgrid = np.ones(1)
        for _ in range(n):
            wgrid = np.multiply.outer(wgrid, w).reshape(-1)
        try:
            with np.errstate(all="ignore"):
                vals = np.asarray(f(pts), dtype=float)
        except DomainError as err:
            raise NodeSingularity(f"integrand undefined at a grid node: {err}") from err
        if not np.all(np.isfinite(vals)):
            raise NodeSingularity("integrand is not finite at a grid node")
        return float(wgrid @ vals), float(wgrid @ np.abs(vals))

    fine, fine_abs = trapezoid(m)
    coarse, _ = trapezoid(m // 2)
    err = abs(fine - coarse)
    if err == 0.0 and fine_abs != 0.0:
        err = np.finfo(float).eps * fine_abs
    return QuadratureEstimate(fine, err, "tensor", m ** n)
