"""Named numerical checks of the ground-state identities, inequalities and eigenvalues.

Every check returns a VerificationReport whose pass flag is recomputable from
(lhs, rhs, relation, tolerance):

    "="   pass iff |lhs - rhs| <= tol or |lhs - rhs| / max(|lhs|, |rhs|) <= tol
    ">="  pass iff lhs >= rhs - tol * max(1, |rhs|)
    ">"   pass iff lhs > rhs
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import expr as ex
from .errors import InvalidInput, NoGroundState, QuadratureDivergence
from .fields import (GradientField, PotentialFunction, RadialPowerField, VectorField, describe_field,
                     field_to_spec, power_potential, scale_field, schrodinger_potential, zero_field)
from .grids import Grid
from .harmonics import (coulomb_rate, coulomb_states, harmonic_basis, oscillator_states,
                        schrodinger_residual)
from .oracle import discretize, lambda_estimate, radial_ground_energy, smallest_eigenpair
from .quadrature import tensor_grid_integral
from .states import (GroundState, StateField, _origin_power, decay_radius, gaussian_state, jx_energy,
                     random_gaussian_trial, scale_state, solve_ground_state, state_integrals)

DEFAULT_TOL = 1e-6
INEQUALITY_TOL = 1e-9


@dataclass
class VerificationReport:
    check_id: str
    inputs: dict
    lhs: float
    rhs: float
    tolerance: float
    relation: str = "="
    notes: str = ""
    details: dict = field(default_factory=dict)

    @property
    def abs_error(self):
        return abs(self.lhs - self.rhs)

    @property
    def rel_error(self):
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.abs_error / scale if scale > 0 else 0.0

    @property
    def passed(self):
        return decide(self.lhs, self.rhs, self.relation, self.tolerance)

    def to_record(self):
        return {
            "checkId": self.check_id,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "absError": self.abs_error,
            "relError": self.rel_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "notes": self.notes,
            "details": self.details,
        }


def decide(lhs, rhs, relation, tol):
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return False
    if relation == "=":
        diff = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        return diff <= tol or (scale > 0 and diff / scale <= tol)
    if relation == ">=":
        return lhs >= rhs - tol * max(1.0, abs(rhs))
    if relation == ">":
        return lhs > rhs
    raise ValueError(f"unknown relation {relation!r}")


def _field_inputs(X):
    try:
        return field_to_spec(X)
    except InvalidInput:
        return {"field": describe_field(X)}


def _state_inputs(phi: GroundState):
    rec = phi.to_record()
    if rec.get("polyFactor") is None:
        del rec["polyFactor"]
    return rec


# -- integrals shared by the polarization checks ---------------------------------

def _radial_pair(phi, X):
    return phi.is_radial and X.is_radial


def _peq_integrals(phi: GroundState, X: VectorField, with_jx=True):
    """J_X(phi), ||grad phi||^2, ||X phi||^2, int div X |phi|^2 in one pass."""
    def parts(d):
        xv, div = X.value_and_div(d.x)
        phi2 = d.phi ** 2
        cols = [np.sum(d.grad ** 2, axis=-1), np.sum(xv * xv, axis=-1) * phi2, div * phi2]
        if with_jx:
            cols.append(np.sum((d.grad + d.phi[..., None] * xv) ** 2, axis=-1))
        return np.stack(cols, axis=-1)

    return state_integrals(phi, parts, radial=_radial_pair(phi, X), origin_power=_origin_power(X))


def check_identity_peq1(phi: GroundState, X: VectorField, tol=DEFAULT_TOL, check_id="peq1"):
    """||grad phi + X phi||^2 = ||grad phi||^2 + ||X phi||^2 - int div X |phi|^2."""
    G, XX, D, J = _peq_integrals(phi, X)
    return VerificationReport(
        check_id, {"state": _state_inputs(phi), "field": _field_inputs(X)},
        J.value, G.value + XX.value - D.value, tol, "=",
        "J_X(phi) against the three-term expansion",
        {"gradNormSq": G.value, "fieldNormSq": XX.value, "divIntegral": D.value,
         "quadratureError": J.error + G.error + XX.error + D.error},
    )


def check_inequality_peq2(phi: GroundState, X: VectorField, tol=INEQUALITY_TOL, check_id="peq2"):
    """||grad phi||^2 ||X phi||^2 >= (int div X |phi|^2)^2 / 4."""
    G, XX, D = _peq_integrals(phi, X, with_jx=False)
    lhs = G.value * XX.value
    rhs = 0.25 * D.value ** 2
    return VerificationReport(
        check_id, {"state": _state_inputs(phi), "field": _field_inputs(X)}, lhs, rhs, tol, ">=",
        "product of norms against a quarter of the squared divergence integral",
        {"ratio": rhs / lhs if lhs else math.inf, "gradNormSq": G.value, "fieldNormSq": XX.value,
         "divIntegral": D.value},
    )


def check_equality_peq4(X: VectorField, tol=DEFAULT_TOL, check_id="peq4"):
    """At the ground state, ||grad phi0||^2 = ||X phi0||^2 = (1/2) int div X |phi0|^2."""
    phi0 = solve_ground_state(X)
    if not phi0.admissible:
        raise NoGroundState(f"no admissible ground state: {phi0.reason}")
    G, XX, D = _peq_integrals(phi0, X, with_jx=False)
    vals = [G.value, XX.value, 0.5 * D.value]
    return VerificationReport(
        check_id, {"field": _field_inputs(X)}, max(vals), min(vals), tol, "=",
        "largest against smallest of the three ground-state quantities",
        {"gradNormSq": vals[0], "fieldNormSq": vals[1], "halfDivIntegral": vals[2]},
    )


def check_exeq2(phi: GroundState, alpha: float, p: float, n: int, tol=INEQUALITY_TOL,
                check_id="exeq2"):
    """int |grad phi|^2 * int |x|^(2-2p) |phi|^2 >= (n-p)^2/4 (int |phi|^2 / |x|^p)^2."""
    if not p < 1 + n / 2:
        raise InvalidInput("need p < 1 + n/2")
    if phi.n != n:
        raise InvalidInput("state dimension does not match n")
    funcs = [
        lambda d: np.sum(d.grad ** 2, axis=-1),
        lambda d: d.r ** (2 - 2 * p) * d.phi ** 2,
        lambda d: d.phi ** 2 / d.r ** p,
    ]
    G, M, K = state_integrals(phi, funcs, origin_power=min(0.0, 2 - 2 * p, -p))
    lhs = G.value * M.value
    rhs = (n - p) ** 2 / 4 * K.value ** 2
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    return VerificationReport(
        check_id, {"state": _state_inputs(phi), "alpha": alpha, "p": p, "n": n}, lhs, rhs, tol, ">=",
        "weighted uncertainty inequality for alpha x/|x|^p",
        {"equality": rel <= DEFAULT_TOL, "ratio": rhs / lhs},
    )


# -- Hardy ------------------------------------------------------------------------------

def hardy_constant(n):
    return (n - 2) ** 2 / 4


def hardy_family_state(n: int, eps: float) -> GroundState:
    """(|x|^2+eps^2)^(-(n-2)/4) (1+eps^2|x|^2)^(-(n-2)/4).

    The second factor is the first one composed with the inversion x -> x/|x|^2
    (up to a constant), so the cutoff at |x| ~ 1/eps costs the same relative
    amount as the regularisation at |x| ~ eps.
    """
    s = repr((n - 2) / 4)
    e2 = repr(eps * eps)
    u = ex.parse(f"{s}*(log(r^2 + {e2}) + log(1 + {e2}*r^2))", n)
    return GroundState(u, n)


def _hardy_breakpoints(eps):
    return [eps ** k for k in (2.0, 1.5, 1.0, 0.5, 0.0, -0.5, -1.0, -1.5, -2.0)]


def hardy_ratio(phi: GroundState, breakpoints=None):
    """||grad phi||^2 / int |phi|^2/|x|^2."""
    G, H = state_integrals(phi, [lambda d: np.sum(d.grad ** 2, axis=-1),
                                 lambda d: d.phi ** 2 / d.r ** 2],
                           origin_power=-2.0, breakpoints=breakpoints)
    return G.value, H.value


def check_hardy(phi: GroundState, n: int, tol=INEQUALITY_TOL, check_id="hardy"):
    """int |grad phi|^2 >= (n-2)^2/4 int |phi|^2/|x|^2."""
    if n < 3:
        raise InvalidInput("the Hardy inequality needs n >= 3")
    G, H = hardy_ratio(phi)
    c = hardy_constant(n)
    return VerificationReport(check_id, {"state": _state_inputs(phi), "n": n}, G, c * H, tol, ">=",
                              "Dirichlet energy against the Hardy term",
                              {"ratioOverConstant": G / (c * H)})


def check_hardy_family(n: int, eps: float, factor=1.1, check_id="hardy.family"):
    """The epsilon-family ratio lies in [C, factor * C] with C = (n-2)^2/4."""
    phi = hardy_family_state(n, eps)
    G, H = hardy_ratio(phi, _hardy_breakpoints(eps))
    ratio = G / (hardy_constant(n) * H)
    return VerificationReport(check_id, {"n": n, "eps": eps, "factor": factor}, factor, ratio, 0.0, ">=",
                              "minimizing family: ratio / constant must be at most the factor",
                              {"ratioOverConstant": ratio, "gradNormSq": G, "hardyTerm": H})


def hardy_sweep(n: int, eps_values=(1e-1, 1e-2, 1e-3)):
    out = []
    for eps in eps_values:
        G, H = hardy_ratio(hardy_family_state(n, eps), _hardy_breakpoints(eps))
        out.append({"eps": eps, "ratioOverConstant": G / (hardy_constant(n) * H)})
    return out


def check_hardy_nonattainment(n: int, check_id="hardy.nonattainment"):
    """||grad phi0||^2 for phi0 = |x|^(-(n-2)/2) must be reported as divergent."""
    alpha = (n - 2) / 2
    phi0 = solve_ground_state(RadialPowerField(alpha, 2.0, n))
    try:
        est = state_integrals(phi0, [lambda d: np.sum(d.grad ** 2, axis=-1)], origin_power=-n)[0]
        diverged, message = 0.0, f"quadrature returned {est.value!r}"
    except QuadratureDivergence as err:
        diverged, message = 1.0, str(err)
    return VerificationReport(check_id, {"n": n, "alpha": alpha, "p": 2.0}, diverged, 1.0, 0.0, "=",
                              "lhs is 1 when quadrature of ||grad phi0||^2 diverges",
                              {"message": message, "admissible": phi0.admissible})


# -- Hersch bound and the Lambda + B bounds ---------------------------------------

def default_sampler(n, r_min=1e-6, r_max=50.0):
    """Random points with log-uniform radii and uniform directions."""
    def sample(rng, count):
        d = rng.normal(size=(count, n))
        d /= np.linalg.norm(d, axis=1)[:, None]
        r = np.exp(rng.uniform(math.log(r_min), math.log(r_max), size=count))
        return d * r[:, None]
    return sample


def _w(V, X):
    return lambda x: V(x) - X.norm_sq(x) + X.div(x)


def sampled_extrema(f, sampler, rng, start=1000, stable=1e-8, max_points=2 ** 20):
    """inf and sup of f over random samples, doubling the sample until inf is stable."""
    count = start
    pts = sampler(rng, count)
    vals = f(pts)
    lo, hi = float(np.min(vals)), float(np.max(vals))
    while True:
        more = f(sampler(rng, count))
        new_lo, new_hi = min(lo, float(np.min(more))), max(hi, float(np.max(more)))
        count *= 2
        if abs(new_lo - lo) <= stable or count >= max_points:
            return new_lo, new_hi, count, abs(new_lo - lo) <= stable
        lo, hi = new_lo, new_hi


def oracle_energy(V: PotentialFunction, n: int, tol=1e-8, state=None):
    """E0(V) and its error estimate from the radial or full-grid oracle."""
    profile = V.radial_profile()
    if profile is not None:
        res = radial_ground_energy(profile, n, tol, state)
        return res.E, max(res.error, tol), "radial"
    grid = Grid(n, 8.0, {1: 400, 2: 200}.get(n, 40))
    E, _ = smallest_eigenpair(discretize(V, grid), tol=1e-8)
    return E, grid.h ** 2 * max(1.0, abs(E)), "grid"


def hersch_bound(V: PotentialFunction, X: VectorField, sampler=None, rng=None, tol=1e-8,
                 oracle_tol=1e-8, state=None, check_id="hersch"):
    """E0(V) >= inf (V - |X|^2 + div X); lhs is the oracle E0, rhs the sampled infimum."""
    n = X.n
    sampler = sampler or default_sampler(n)
    rng = rng if rng is not None else np.random.default_rng(0)
    inf_w, sup_w, count, stable = sampled_extrema(_w(V, X), sampler, rng)
    E0, err, method = oracle_energy(V, n, oracle_tol, state)
    tight_tol = max(1e-8, err)
    return VerificationReport(
        check_id, {"potential": V.description, "field": _field_inputs(X)}, E0, inf_w, max(tol, err), ">=",
        "oracle ground state energy against the sampled infimum of V - |X|^2 + div X",
        {"samples": count, "stable": stable, "supSampled": sup_w, "oracle": method,
         "oracleError": err, "tight": abs(E0 - inf_w) <= tight_tol, "tightTolerance": tight_tol},
    )


def check_hersch_tight(V, X, sampler=None, rng=None, oracle_tol=1e-8, state=None,
                       check_id="hersch.tight"):
    """The bound is saturated: sampled infimum equals E0 within max(1e-8, oracle error)."""
    base = hersch_bound(V, X, sampler, rng, oracle_tol=oracle_tol, state=state, check_id=check_id)
    base.relation = "="
    base.tolerance = base.details["tightTolerance"]
    base.notes = "sampled infimum of V - |X|^2 + div X equals the oracle E0"
    return base


def b_functional(phi: GroundState, V: PotentialFunction, X: VectorField):
    """B_{V,X}(phi) = int (V - |X|^2 + div X) |phi|^2."""
    w = _w(V, X)
    radial = phi.is_radial and X.is_radial and V.radial is not None
    return state_integrals(phi, [lambda d: w(d.x) * d.phi ** 2], need_grad=False, radial=radial,
                           origin_power=min(-1.0, _origin_power(X)))[0].value


def check_prop4_bounds(V: PotentialFunction, X: VectorField, trials, rng=None, tol=1e-6,
                       oracle_tol=1e-8, state=None, check_id="prop4"):
    """Lambda(X) + inf B <= E0(V) <= Lambda(X) + sup B; returns (lower, upper) reports.

    inf and sup of B over unit trials are taken as the smaller (larger) of the
    supplied trial values and the sampled extrema of V - |X|^2 + div X, which
    are the limits of trials concentrating at a point.
    """
    n = X.n
    rng = rng if rng is not None else np.random.default_rng(0)
    lam = lambda_estimate(X, oracle_tol)
    B = [b_functional(phi, V, X) for phi in trials]
    inf_w, sup_w, _, _ = sampled_extrema(_w(V, X), default_sampler(n, r_max=10.0), rng)
    lower = lam + min([inf_w] + B)
    upper = lam + max([sup_w] + B)
    E0, err, method = oracle_energy(V, n, oracle_tol, state)
    inputs = {"potential": V.description, "field": _field_inputs(X), "trials": len(trials)}
    details = {"Lambda": lam, "trialB": B, "infW": inf_w, "supW": sup_w, "E0": E0,
               "oracle": method, "collapsed": abs(upper - lower) <= tol * max(1.0, abs(E0))}
    lo = VerificationReport(check_id + ".lower", inputs, E0, lower, tol, ">=",
                            "E0 against Lambda(X) + inf B", dict(details))
    hi = VerificationReport(check_id + ".upper", inputs, upper, E0, tol, ">=",
                            "Lambda(X) + sup B against E0", dict(details))
    return lo, hi


# -- scaling, virial, bump -------------------------------------------------------------

def check_scaling(phi: GroundState, X: VectorField, lam: float, tol=1e-8, check_id="scaling"):
    """J_X(phi_lam) = lam^2 J_{X_lam}(phi)."""
    lhs = jx_energy(scale_state(phi, lam), X)
    rhs = jx_energy(phi, scale_field(X, lam))
    return VerificationReport(check_id, {"state": _state_inputs(phi), "field": _field_inputs(X),
                                         "lambda": lam},
                              lhs.value, lam * lam * rhs.value, tol, "=",
                              "energy of the scaled state against lambda^2 times the scaled field energy",
                              {"quadratureError": lhs.error + lam * lam * rhs.error})


def check_virial(phi: GroundState, V: PotentialFunction, k: float, tol=1e-8, check_id="virial"):
    """2 ||grad phi||^2 = k int V |phi|^2 for V homogeneous of degree k."""
    if not phi.admissible or phi.support_radius is not None:
        raise InvalidInput("virial identity needs a rapidly decaying eigenstate")
    if V.lambda_shift != 0:
        raise InvalidInput("potential must be homogeneous (no constant shift)")
    radial = phi.is_radial and V.radial is not None
    G, P = state_integrals(phi, [lambda d: np.sum(d.grad ** 2, axis=-1), lambda d: V(d.x) * d.phi ** 2],
                           radial=radial, origin_power=min(0.0, k))
    return VerificationReport(check_id, {"state": _state_inputs(phi), "potential": V.description, "k": k},
                              2 * G.value, k * P.value, tol, "=",
                              "twice the kinetic energy against k times the potential energy",
                              {"kinetic": G.value, "potential": P.value})


def bump_state(n=3) -> GroundState:
    """exp(1/(|x|^2 - 1)) inside the unit ball, zero outside."""
    return GroundState(ex.parse("1/(1 - r^2)", n), n, support_radius=1.0, admissible=False,
                       reason="compactly supported: not a ground state of a field on R^n")


def check_bump_counterexample(n=3, jmin=3, jmax=20, check_id="bump"):
    """|X| for X = -grad log phi blows up monotonically towards the unit sphere."""
    phi = bump_state(n)
    X = StateField(phi)
    e1 = np.zeros(n)
    e1[0] = 1.0
    js = np.arange(jmin, jmax + 1)
    radii = 1.0 - 2.0 ** (-js.astype(float))
    mags = np.linalg.norm(X(radii[:, None] * e1), axis=-1)
    closed = 2 * radii / (1 - radii ** 2) ** 2
    growth = mags[1:] / mags[:-1]
    inner = np.linspace(0.01, 0.5, 50)[:, None] * e1
    outside = phi(np.array([1.0, 1.5])[:, None] * e1)
    edge = 1.0 - 2.0 ** -8
    grad_edge = float(np.linalg.norm(phi.gradient(np.array([edge * e1]))))
    return VerificationReport(
        check_id, {"n": n, "j": [int(jmin), int(jmax)]}, float(np.min(growth)), 1.0, 0.0, ">",
        "smallest ratio of |X| at consecutive radii 1 - 2^-j must exceed 1",
        {"magnitudes": [float(m) for m in mags],
         "closedFormMaxRelError": float(np.max(np.abs(mags - closed) / closed)),
         "supInnerHalfBall": float(np.max(np.linalg.norm(X(inner), axis=-1))),
         "phiOutside": [float(v) for v in outside], "gradNearEdge": grad_edge},
    )


# -- eigenvalues -------------------------------------------------------------------------

def check_oracle_energy(V: PotentialFunction, n: int, expected: float, tol: float, check_id,
                        state=None, grid: Optional[Grid] = None, oracle_tol=1e-8):
    """Oracle E0(V) against a closed-form eigenvalue."""
    if grid is None:
        E, err, method = oracle_energy(V, n, oracle_tol, state)
        details = {"oracle": method, "errorEstimate": err}
    else:
        E, psi = smallest_eigenpair(discretize(V, grid), tol=1e-8)
        vals = psi.values
        details = {"oracle": "grid", "L": grid.L, "m": grid.m,
                   "minOverMax": float(vals.min() / vals.max())}
    return VerificationReport(check_id, {"potential": V.description, "n": n}, E, expected, tol, "=",
                              "oracle E0 against the closed-form value", details)


def _residual_points(rng, n, count, r_lo=None, r_hi=None):
    if r_lo is None:
        return 1.5 * rng.normal(size=(count, n))
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * rng.uniform(r_lo, r_hi, size=(count, 1))


def check_spectrum_level(family: str, n: int, alpha: float, k: int, rng, points=500, tol=1e-8,
                         check_id=None):
    """max over basis states and sample points of |H psi - E_k psi| / (1 + |psi|)."""
    if family == "oscillator":
        E = alpha * (n + 2 * k)
        states = oscillator_states(n, alpha, k)
        V = lambda x: alpha * alpha * np.sum(x * x, axis=-1)  # noqa: E731
        x = _residual_points(rng, n, points)
    elif family == "coulomb":
        g = coulomb_rate(n, alpha, k)
        E = -g * g
        states = coulomb_states(n, alpha, k)
        V = lambda x: -alpha * (n - 1) / np.linalg.norm(x, axis=-1)  # noqa: E731
        x = _residual_points(rng, n, points, 0.1, 20.0)
    else:
        raise InvalidInput(f"unknown family {family!r}")
    worst = 0.0
    for s in states:
        res, mag = schrodinger_residual(s, V, E, x)
        worst = max(worst, float(np.max(res / (1 + mag))))
    return VerificationReport(check_id or f"spectrum.{family}.k{k}",
                              {"family": family, "n": n, "alpha": alpha, "k": k, "points": points},
                              worst, 0.0, tol, "=",
                              "largest scaled Schroedinger residual over the harmonic basis",
                              {"E": E, "basisSize": len(states)})


# -- randomized trial pairs --------------------------------------------------------------

def random_field(rng, n=3):
    """A seeded admissible field: radial power law or a non-radial gradient."""
    kind = int(rng.integers(0, 3))
    alpha = float(rng.uniform(0.5, 2.0))
    if kind < 2:
        p = float(rng.choice([0.0, 0.5, 1.0, 1.5]))
        return RadialPowerField(alpha, p, n)
    c = rng.uniform(-1.0, 1.0, size=n)
    lin = " + ".join(f"{float(ci)!r}*x{i + 1}" for i, ci in enumerate(c))
    return GradientField(ex.parse(f"{alpha!r}*r^2/2 + {lin}", n), n)


def check_peq1_trials(count, seed, n=3, tol=DEFAULT_TOL):
    rng = np.random.default_rng([seed, 1])
    out = []
    for i in range(count):
        phi = random_gaussian_trial(rng, n)
        X = random_field(rng, n)
        out.append(check_identity_peq1(phi, X, tol, check_id=f"peq1.trial.{i:02d}"))
    return out


# -- suites ------------------------------------------------------------------------------

def _oracle_suite(seed):
    out = []
    for n in (2, 3):
        for a in (0.5, 1.0, 2.0):
            X = RadialPowerField(a, 0.0, n)
            V = power_potential(a * a, 2.0, n)
            out.append(check_oracle_energy(V, n, a * n, 1e-6, f"oracle.oscillator.n{n}.a{a:g}",
                                           state=solve_ground_state(X)))
    V = power_potential(1.0, 2.0, 2)
    out.append(check_oracle_energy(V, 2, 2.0, 1e-2, "oracle.oscillator.grid2d",
                                   grid=Grid(2, 8.0, 200)))
    for Z in (1, 2):
        a = Z / 2
        V = power_potential(-2 * a, -1.0, 3)
        out.append(check_oracle_energy(V, 3, -Z * Z / 4, 1e-4, f"oracle.coulomb.Z{Z}",
                                       state=solve_ground_state(RadialPowerField(a, 1.0, 3)),
                                       oracle_tol=1e-6))
    return out


def _spectrum_suite(seed):
    rng = np.random.default_rng([seed, 2])
    out = []
    for family in ("oscillator", "coulomb"):
        for k in range(4):
            out.append(check_spectrum_level(family, 3, 1.0, k, rng))
    return out


def _peq2_suite(seed):
    rng = np.random.default_rng([seed, 3])
    X = RadialPowerField(1.0, 0.0, 3)
    phi0 = solve_ground_state(X)
    eq = check_inequality_peq2(phi0, X, check_id="peq2.equality")
    eq.relation, eq.tolerance = "=", DEFAULT_TOL
    eq.notes = "equality at the ground state of X"
    trial = random_gaussian_trial(rng, 3)
    strict = check_inequality_peq2(trial, X, check_id="peq2.generic")
    heis = check_inequality_peq2(gaussian_state(3, 0.8), RadialPowerField(1.0, 0.0, 3),
                                 check_id="peq2.heisenberg")
    heis.notes = "Heisenberg: int |grad phi|^2 int |x|^2 |phi|^2 >= n^2/4 for unit phi"
    return [eq, strict, heis]


def _peq4_suite(seed):
    out = []
    for p in (0.0, 0.5, 1.0):
        out.append(check_equality_peq4(RadialPowerField(1.0, p, 3), check_id=f"peq4.p{p:g}"))
    # independent oracle for the oscillator value 3/2: tensor trapezoid of |grad phi0|^2
    phi0 = solve_ground_state(RadialPowerField(1.0, 0.0, 3))
    est = tensor_grid_integral(lambda x: np.sum(phi0.gradient(x) ** 2, axis=-1), 3, 8.0, 81)
    out.append(VerificationReport("peq4.p0.tensor", {"L": 8.0, "m": 81}, est.value, 1.5, DEFAULT_TOL, "=",
                                  "tensor-grid ||grad phi0||^2 for the oscillator against 3/2",
                                  {"errorEstimate": est.error}))
    try:
        check_equality_peq4(RadialPowerField(0.5, 2.0, 3))
        flag = 0.0
    except NoGroundState:
        flag = 1.0
    out.append(VerificationReport("peq4.p2", {"alpha": 0.5, "p": 2.0, "n": 3}, flag, 1.0, 0.0, "=",
                                  "lhs is 1 when the Hardy field is reported as having no ground state"))
    return out


def _exeq2_suite(seed):
    rng = np.random.default_rng([seed, 4])
    phi1 = solve_ground_state(RadialPowerField(1.0, 1.0, 3))
    eq = check_exeq2(phi1, 1.0, 1.0, 3, check_id="exeq2.p1.equality")
    eq.relation, eq.tolerance = "=", DEFAULT_TOL
    strict = check_exeq2(random_gaussian_trial(rng, 3), 1.0, 0.5, 3, check_id="exeq2.p0.5.generic")
    heis = check_exeq2(gaussian_state(3, 0.6), 1.0, 0.0, 3, check_id="exeq2.p0.heisenberg")
    heis.relation, heis.tolerance = "=", DEFAULT_TOL
    heis.notes = "centred Gaussians attain the Heisenberg bound"
    return [eq, heis, strict]


def _hardy_suite(seed, trials=4, eps=1e-3):
    rng = np.random.default_rng([seed, 5])
    out = []
    for n in (3, 4):
        for i in range(trials):
            phi = random_gaussian_trial(rng, n) if i else gaussian_state(n, 1.0)
            out.append(check_hardy(phi, n, check_id=f"hardy.n{n}.trial.{i}"))
        fam = check_hardy_family(n, eps, check_id=f"hardy.n{n}.family")
        fam.details["sweep"] = hardy_sweep(n, (1e-1, 1e-2))
        out.append(fam)
        out.append(check_hardy_nonattainment(n, check_id=f"hardy.n{n}.nonattainment"))
    return out


def _bound_pairs():
    osc = RadialPowerField(1.0, 0.0, 3)
    cou = RadialPowerField(1.0, 1.0, 3)
    return [
        ("oscillator", power_potential(1.0, 2.0, 3), osc, solve_ground_state(osc), 1e-8),
        ("hydrogen", power_potential(-2.0, -1.0, 3), cou, solve_ground_state(cou), 1e-6),
    ]


def _hersch_suite(seed):
    out = []
    for i, (name, V, X, phi0, otol) in enumerate(_bound_pairs()):
        rng = np.random.default_rng([seed, 6, i])
        out.append(hersch_bound(V, X, rng=rng, state=phi0, oracle_tol=otol, check_id=f"hersch.{name}"))
        rng = np.random.default_rng([seed, 6, i])
        out.append(check_hersch_tight(V, X, rng=rng, state=phi0, oracle_tol=otol,
                                      check_id=f"hersch.{name}.tight"))
    _, V, _, phi0, _ = _bound_pairs()[0]
    rep = hersch_bound(V, zero_field(3), rng=np.random.default_rng([seed, 6, 9]), state=phi0,
                       check_id="hersch.oscillator.zero-field")
    rep.notes += "; with X = 0 the bound is inf V and is not tight"
    out.append(rep)
    return out


def _prop4_suite(seed):
    out = []
    rng = np.random.default_rng([seed, 7])
    trials = [gaussian_state(3, w) for w in (0.3, 0.5, 1.0)]
    for name, V, X, phi0, otol in _bound_pairs():
        out.extend(check_prop4_bounds(V, X, trials, rng=rng, state=phi0, oracle_tol=otol,
                                      check_id=f"prop4.{name}"))
    _, V, _, phi0, _ = _bound_pairs()[0]
    out.extend(check_prop4_bounds(V, zero_field(3), trials, rng=rng, state=phi0, oracle_tol=1e-6,
                                  check_id="prop4.oscillator.zero-field"))
    return out


def _scaling_suite(seed):
    out = []
    phi = gaussian_state(3, 0.7)
    for p in (0.0, 1.0, 2.0):
        X = RadialPowerField(1.3, p, 3)
        for lam in (0.5, 2.0, 5.0):
            out.append(check_scaling(phi, X, lam, check_id=f"scaling.p{p:g}.lam{lam:g}"))
    return out


def _virial_suite(seed):
    osc = solve_ground_state(RadialPowerField(1.0, 0.0, 3))
    hyd = solve_ground_state(RadialPowerField(1.0, 1.0, 3))
    return [
        check_virial(osc, power_potential(1.0, 2.0, 3), 2.0, check_id="virial.oscillator"),
        check_virial(hyd, power_potential(-2.0, -1.0, 3), -1.0, check_id="virial.hydrogen"),
    ]


SUITES = {
    "oracle": _oracle_suite,
    "spectrum": _spectrum_suite,
    "peq1": lambda seed: check_peq1_trials(25, seed),
    "peq2": _peq2_suite,
    "peq4": _peq4_suite,
    "exeq2": _exeq2_suite,
    "hardy": _hardy_suite,
    "hersch": _hersch_suite,
    "prop4": _prop4_suite,
    "scaling": _scaling_suite,
    "virial": _virial_suite,
    "bump": lambda seed: [check_bump_counterexample()],
}


def run_suite(name="all", seed=42) -> list[VerificationReport]:
    """Run a named suite (or all of them); reports are ordered by check id."""
    names = sorted(SUITES) if name == "all" else [name]
    reports = []
    for key in names:
        if key not in SUITES:
            raise InvalidInput(f"unknown suite {key!r}; choose from {', '.join(sorted(SUITES))} or all")
        reports.extend(SUITES[key](seed))
    return sorted(reports, key=lambda r: r.check_id)
