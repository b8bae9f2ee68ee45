"""Ground states of J_X(phi) = ||grad phi + phi X||^2 in closed form.

A ground state solves grad phi + phi X = 0. For a gradient field X = grad u this
is phi = C exp(-u); excited states carry an extra polynomial factor P. All
states here have the form C * P(x) * exp(-u(x)), optionally cut off outside a
ball, and are evaluated with exact forward-mode derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import expr as ex
from .dual import Dual2, exp, log
from .errors import (DimensionMismatch, DomainError, NonPositiveState,
                     NotAdmissible, NotGradient, NotNormalizable, QuadratureDivergence)
from .fields import (ComponentField, GradientField, RadialPowerField, SumField, VectorField,
                     _check_scale)
from .grids import GridState
from .polynomial import Polynomial
from .quadrature import (DEFAULT_RTOL, QuadratureEstimate, radial_integral, sphere_area,
                         sphere_poly_moment, spherical_integrals)


@dataclass(frozen=True)
class GroundState:
    """phi(x) = C * P(x) * exp(-u(x)), zero for |x| >= support_radius when set.

    ``family`` records the radial power-law parameters (alpha, p) when the state
    came from that family; it is metadata only, never used for evaluation.
    """

    u: ex.Expr
    n: int
    C: float = 1.0
    poly: Optional[Polynomial] = None
    admissible: bool = True
    reason: str = ""
    family: Optional[dict] = None
    support_radius: Optional[float] = None

    @classmethod
    def from_text(cls, u_text, n, **kw):
        return cls(ex.parse(u_text, n), n, **kw)

    @property
    def is_radial(self):
        return self.poly is None and ex.is_radial(self.u)

    @property
    def degree(self):
        return 0 if self.poly is None else self.poly.degree

    def dual(self, x, order=1) -> Dual2:
        x = np.asarray(x, dtype=float)
        if self.support_radius is None:
            return self._dual_inside(x, order)
        r = np.sqrt(np.sum(x * x, axis=-1))
        inside = r < self.support_radius
        val = np.zeros(x.shape[:-1])
        grad = np.zeros(x.shape) if order >= 1 else None
        hess = np.zeros(x.shape + (self.n,)) if order >= 2 else None
        if np.any(inside):
            d = self._dual_inside(x[inside], order)
            val[inside] = d.val
            if order >= 1:
                grad[inside] = d.gradient(self.n)
            if order >= 2 and d.hess is not None:
                hess[inside] = d.hess
        return Dual2(val, grad, hess, order)

    def _dual_inside(self, x, order):
        out = exp(-ex.evaluate(self.u, x, order))
        if self.poly is not None:
            out = self.poly.dual(x, order) * out
        return out * self.C

    def __call__(self, x):
        with np.errstate(all="ignore"):
            return self.dual(x, 0).val

    def gradient(self, x):
        return self.dual(x, 1).gradient(self.n)

    def laplacian(self, x):
        return self.dual(x, 2).laplacian

    def radial_profile(self):
        if not self.is_radial:
            return None
        e1 = np.zeros(self.n)
        e1[0] = 1.0
        return lambda r: self(np.asarray(r, dtype=float)[..., None] * e1)

    def to_record(self):
        rec = {
            "u": ex.render(self.u),
            "polyFactor": None if self.poly is None else self.poly.to_records(),
            "C": self.C,
            "n": self.n,
            "admissible": self.admissible,
        }
        if self.reason:
            rec["reason"] = self.reason
        if self.family is not None:
            rec["family"] = dict(self.family)
        if self.support_radius is not None:
            rec["supportRadius"] = self.support_radius
        return rec

    @classmethod
    def from_record(cls, rec):
        n = int(rec["n"])
        poly = rec.get("polyFactor")
        return cls(ex.parse(rec["u"], n), n, float(rec.get("C", 1.0)),
                   None if poly is None else Polynomial.from_records(n, poly),
                   bool(rec.get("admissible", True)), rec.get("reason", ""),
                   rec.get("family"), rec.get("supportRadius"))


# -- integrals over states --------------------------------------------------------

@dataclass
class PointData:
    """What integrands see: points, |x|, phi and (optionally) grad phi."""

    x: np.ndarray
    r: np.ndarray
    phi: np.ndarray
    grad: Optional[np.ndarray] = None


def _origin_power(*fields_):
    power = 0.0
    for X in fields_:
        if isinstance(X, RadialPowerField) and X.alpha != 0:
            power = min(power, 2 - 2 * X.p, -X.p)
    return power


def state_integrals(phi: GroundState, integrands, *, need_grad=True, radial=None,
                    origin_power=0.0, rtol=DEFAULT_RTOL, angular_order=None, breakpoints=None):
    """Integrate functions of (x, phi, grad phi) over R^n in one adaptive pass.

    ``integrands`` is a list of callables each returning an array over the
    points, or a single callable returning them stacked on a last axis.
    """
    if radial is None:
        radial = phi.is_radial

    def f(x):
        d = phi.dual(x, 1 if need_grad else 0)
        data = PointData(x, np.sqrt(np.sum(x * x, axis=-1)), d.val,
                         d.gradient(phi.n) if need_grad else None)
        if callable(integrands):
            return integrands(data)
        return np.stack([np.asarray(g(data), dtype=float) * np.ones_like(data.phi) for g in integrands],
                        axis=-1)

    r_max = np.inf if phi.support_radius is None else phi.support_radius
    return spherical_integrals(f, phi.n, radial=radial, angular_order=angular_order, r_max=r_max,
                               origin_power=origin_power, rtol=rtol, breakpoints=breakpoints)


def _radial_all(phi, *fields_):
    return phi.is_radial and all(X is None or X.is_radial for X in fields_)


def norm_sq(phi: GroundState) -> QuadratureEstimate:
    return state_integrals(phi, [lambda d: d.phi ** 2], need_grad=False)[0]


def dirichlet_energy(phi: GroundState) -> QuadratureEstimate:
    return state_integrals(phi, [lambda d: np.sum(d.grad ** 2, axis=-1)])[0]


def _jx_integrand(X):
    def g(d):
        return np.sum((d.grad + d.phi[..., None] * X(d.x)) ** 2, axis=-1)
    return g


def jx_energy(phi, X: VectorField) -> QuadratureEstimate:
    """J_X(phi) = int |grad phi + phi X|^2 dx."""
    if isinstance(phi, GridState):
        return _grid_jx(phi, X)
    if phi.n != X.n:
        raise DimensionMismatch(f"state in n={phi.n}, field in n={X.n}")
    return state_integrals(phi, [_jx_integrand(X)], radial=_radial_all(phi, X),
                           origin_power=_origin_power(X))[0]


def _grid_jx(state: GridState, X):
    pts = state.grid.points()
    integrand = np.sum((state.gradient() + state.values[..., None] * X(pts)) ** 2, axis=-1)
    h = state.grid.h
    fine = float(np.sum(integrand) * h ** state.grid.n)
    return QuadratureEstimate(fine, float(np.finfo(float).eps * abs(fine) + h * h * abs(fine)),
                              "grid", state.grid.size)


# -- construction -----------------------------------------------------------------

def _potential_of(X: VectorField):
    """u with grad u = X, when one is available."""
    if isinstance(X, RadialPowerField):
        return X.potential_u()
    if isinstance(X, GradientField):
        return X.u
    if isinstance(X, SumField):
        parts = [_potential_of(f) for f in X.fields]
        out = parts[0]
        for p in parts[1:]:
            out = ex.BinOp("+", out, p)
        return out
    if isinstance(X, ComponentField):
        raise NotGradient("componentwise field: no scalar potential u with X = grad u is known"
                          + _curl_note(X))
    raise NotGradient(f"{type(X).__name__} is not given as a gradient")


def _curl_note(X: ComponentField):
    rng = np.random.default_rng(0)
    J = X.jacobian(rng.normal(size=(16, X.n)))
    asym = np.max(np.abs(J - np.swapaxes(J, -1, -2))) if X.n > 1 else 0.0
    return f" (max |dX_i/dx_j - dX_j/dx_i| = {asym:.3g} at sample points)"


def _radial_family_admissibility(X: RadialPowerField):
    a, p, n = X.alpha, X.p, X.n
    if p == 2:
        return False, "p = 2: phi ~ |x|^-alpha, neither ||grad phi|| nor ||phi X|| is finite"
    if not p < 1 + n / 2:
        return False, f"|X|^2 is not locally integrable (p >= 1 + n/2 = {1 + n / 2})"
    if p > 2:
        return False, "p > 2: u -> 0 at infinity, phi tends to a constant and is not square integrable"
    if not a > 0:
        return False, "alpha <= 0: exp(-u) does not decay"
    return True, ""


def _numeric_admissibility(phi: GroundState, X):
    try:
        norm = state_integrals(phi, [lambda d: d.phi ** 2, lambda d: np.sum(d.grad ** 2, axis=-1)],
                               radial=phi.is_radial, origin_power=_origin_power(X), rtol=1e-8)
    except (QuadratureDivergence, DomainError) as err:
        return False, f"quadrature of ||phi||^2, ||grad phi||^2 failed: {err}"
    if not norm[0].value > 0:
        return False, "phi vanishes identically"
    return True, ""


def solve_ground_state(X: VectorField) -> GroundState:
    """The positive solution C exp(-u) of grad phi + phi X = 0, normalized when admissible."""
    u = _potential_of(X)
    family = None
    if isinstance(X, RadialPowerField):
        family = {"kind": "radial-power", "alpha": X.alpha, "p": X.p}
    state = GroundState(u, X.n, 1.0, None, True, "", family)
    if isinstance(X, RadialPowerField):
        ok, reason = _radial_family_admissibility(X)
        if ok:
            ok, reason = _numeric_admissibility(state, X)
    else:
        flags = X.admissibility()
        ok, reason = (True, "") if flags.ok else (False, f"integrability flags {flags.as_dict()}")
        if ok:
            ok, reason = _numeric_admissibility(state, X)
    state = replace(state, admissible=ok, reason=reason)
    return normalize(state) if ok else state


def normalize(state: GroundState) -> GroundState:
    """Rescale C so that ||phi|| = 1 (relative quadrature error <= 1e-10)."""
    if not state.admissible:
        raise NotNormalizable(f"state is not admissible: {state.reason}")
    unit = replace(state, C=1.0)
    try:
        if (state.poly is not None and state.poly.is_homogeneous() and ex.is_radial(state.u)):
            # |P(x)|^2 exp(-2u(r)) separates into a sphere moment times a radial integral
            k = state.poly.degree
            e1 = np.zeros(state.n)
            e1[0] = 1.0
            profile = lambda r: np.exp(-2.0 * ex.evaluate_radial(state.u, r))  # noqa: E731
            radial = radial_integral(profile, state.n, s=2 * k,
                                     r_max=state.support_radius or np.inf, rtol=1e-12)
            est = QuadratureEstimate(sphere_poly_moment(state.poly) / sphere_area(state.n) * radial.value,
                                     sphere_poly_moment(state.poly) / sphere_area(state.n) * radial.error,
                                     "radial", radial.nodes)
        else:
            est = state_integrals(unit, [lambda d: d.phi ** 2], need_grad=False, rtol=1e-12)[0]
    except (QuadratureDivergence, DomainError) as err:
        raise NotNormalizable(f"||phi||^2 does not converge: {err}") from err
    if not (est.value > 0 and math.isfinite(est.value)):
        raise NotNormalizable("||phi||^2 is not a positive finite number")
    if est.error > 1e-10 * est.value:
        raise NotNormalizable(f"||phi||^2 quadrature error {est.error:.2e} too large")
    return replace(state, C=1.0 / math.sqrt(est.value))


# -- field recovery, products, scaling --------------------------------------------

@dataclass(frozen=True)
class StateField(VectorField):
    """X = -grad log phi, defined where phi > 0."""

    state: GroundState

    @property
    def n(self):
        return self.state.n

    @property
    def is_radial(self):
        return self.state.is_radial

    def _log_dual(self, x, order):
        x = np.asarray(x, dtype=float)
        st = self.state
        if st.support_radius is not None:
            r = np.sqrt(np.sum(x * x, axis=-1))
            if np.any(r >= st.support_radius):
                raise NonPositiveState("phi vanishes outside its support ball")
        if st.C <= 0:
            raise NonPositiveState("normalization constant is not positive")
        out = -ex.evaluate(st.u, x, order)
        if st.poly is not None:
            pd = st.poly.dual(x, order)
            if np.any(pd.val <= 0):
                raise NonPositiveState("polynomial factor is not positive at the query points")
            out = out + log(pd)
        return out

    def __call__(self, x):
        return -self._log_dual(x, 1).gradient(self.n)

    def div(self, x):
        return -self._log_dual(x, 2).laplacian


@dataclass(frozen=True, eq=False)
class SampledField(VectorField):
    """-grad log psi for a grid state, by central differences and linear interpolation."""

    state: GridState

    @property
    def n(self):
        return self.state.grid.n

    def _field_arrays(self):
        v = self.state.values
        if np.any(v <= 0):
            raise NonPositiveState("grid state has non-positive entries")
        g = self.state.gradient()
        return -g / v[..., None]

    def __call__(self, x):
        from scipy.interpolate import RegularGridInterpolator
        arr = self._field_arrays()
        axis = self.state.grid.axis
        comps = [RegularGridInterpolator([axis] * self.n, arr[..., i])(np.asarray(x, float))
                 for i in range(self.n)]
        return np.stack(comps, axis=-1)

    def div(self, x):
        from scipy.interpolate import RegularGridInterpolator
        arr = self._field_arrays()
        h = self.state.grid.h
        d = sum(np.gradient(arr[..., i], h, axis=i) for i in range(self.n))
        axis = self.state.grid.axis
        return RegularGridInterpolator([axis] * self.n, d)(np.asarray(x, float))


def field_from_state(phi) -> VectorField:
    if isinstance(phi, GridState):
        return SampledField(phi)
    return StateField(phi)


def product_state(phi0: GroundState, phi1: GroundState) -> GroundState:
    """phi0 * phi1, the ground state for X + Y when phi0, phi1 are ground states for X, Y."""
    if phi0.n != phi1.n:
        raise DimensionMismatch(f"states live in n={phi0.n} and n={phi1.n}")
    if not (phi0.admissible and phi1.admissible):
        raise NotAdmissible("both factors must be admissible ground states")
    if phi0.support_radius is not None or phi1.support_radius is not None:
        raise NotAdmissible("compactly supported factors are not ground states of a field on R^n")
    if phi0.poly is None:
        poly = phi1.poly
    elif phi1.poly is None:
        poly = phi0.poly
    else:
        poly = phi0.poly * phi1.poly
    family = None
    f0, f1 = phi0.family, phi1.family
    if f0 and f1 and f0.get("p") == f1.get("p"):
        family = {"kind": "radial-power", "alpha": f0["alpha"] + f1["alpha"], "p": f0["p"]}
    out = GroundState(ex.BinOp("+", phi0.u, phi1.u), phi0.n, phi0.C * phi1.C, poly, True, "", family)
    return normalize(out)


def scale_state(phi: GroundState, lam: float) -> GroundState:
    """phi_lam(x) = lam^(n/2) phi(lam x); preserves the L2 norm."""
    lam = _check_scale(lam)
    if lam == 1.0:
        return phi
    family = None
    if phi.family is not None:
        a, p = phi.family["alpha"], phi.family["p"]
        family = {"kind": "radial-power", "alpha": a if p == 2 else a * lam ** (2 - p), "p": p}
    return GroundState(
        ex.scale_arguments(phi.u, lam), phi.n, phi.C * lam ** (phi.n / 2),
        None if phi.poly is None else phi.poly.scaled_arguments(lam),
        phi.admissible, phi.reason, family,
        None if phi.support_radius is None else phi.support_radius / lam,
    )


# -- trial states and helpers -----------------------------------------------------

def gaussian_state(n: int, width: float, center=None, normalized=True) -> GroundState:
    """exp(-width |x - center|^2), a smooth rapidly decaying trial state."""
    if center is None or not np.any(center):
        u = ex.BinOp("*", ex.num(width), ex.BinOp("^", ex.Radius(), ex.Num(2.0)))
    else:
        terms = None
        for i, c in enumerate(center):
            sq = ex.BinOp("^", ex.BinOp("-", ex.Var(i + 1), ex.num(c)), ex.Num(2.0))
            terms = sq if terms is None else ex.BinOp("+", terms, sq)
        u = ex.BinOp("*", ex.num(width), terms)
    state = GroundState(u, n)
    if normalized:
        # closed form: int exp(-2 w |x|^2) dx = (pi / (2 w))^(n/2)
        state = replace(state, C=(2.0 * width / math.pi) ** (n / 4))
    return state


def random_gaussian_trial(rng: np.random.Generator, n: int, max_center=0.5,
                          width_range=(0.5, 2.0)) -> GroundState:
    width = float(rng.uniform(*width_range))
    direction = rng.normal(size=n)
    direction /= np.linalg.norm(direction)
    center = direction * max_center * float(rng.uniform(0.0, 1.0))
    return gaussian_state(n, width, center)


def decay_radius(phi: GroundState, threshold=1e-12, r_start=1.0, r_limit=1e6) -> float:
    """Smallest radius (to 1%) beyond which a radial state is below threshold * its peak."""
    profile = phi.radial_profile()
    if profile is None:
        raise ValueError("decay_radius needs a radial state")
    rs = np.geomspace(1e-6, r_limit, 4000)
    with np.errstate(all="ignore"):
        vals = np.abs(profile(rs))
    vals = np.where(np.isfinite(vals), vals, 0.0)
    peak = vals.max()
    if peak == 0:
        return r_start
    above = np.nonzero(vals > threshold * peak)[0]
    return float(max(rs[above[-1] + 1] if above[-1] + 1 < len(rs) else r_limit, r_start))


def euler_residual(phi: GroundState, X: VectorField, x, shift: Optional[Callable] = None):
    """-Delta phi + (|X|^2 - div X) phi (+ shift(x) phi) at points x."""
    d = phi.dual(x, 2)
    W = 0.0 if shift is None else shift(x)
    return -d.laplacian + (X.norm_sq(x) - X.div(x) + W) * d.val


def first_order_residual(phi: GroundState, X: VectorField, x):
    """|grad phi + phi X| and |phi X| at points x."""
    d = phi.dual(x, 1)
    phiX = d.val[..., None] * X(x)
    return np.linalg.norm(d.gradient(phi.n) + phiX, axis=-1), np.linalg.norm(phiX, axis=-1)
