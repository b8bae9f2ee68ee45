"""Finite-difference ground state energies, independent of any closed form.

Two solvers are provided. ``smallest_eigenpair`` works on a full Dirichlet box
grid with the (2n+1)-point Laplacian. ``radial_solve`` handles radial potentials
with a cell-centred finite-volume scheme in r whose cells carry the exact shell
volumes, so the 1/r^2 terms of the radial reduction never appear and the
scheme is second order in every dimension. Two grids are combined by
Richardson extrapolation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import DomainError, GroundFieldError, InvalidInput, NoConvergence, NodeSingularity
from .fields import PotentialFunction, VectorField, schrodinger_potential
from .grids import Grid, GridState
from .quadrature import QuadratureEstimate
from .states import GroundState, decay_radius, solve_ground_state, state_integrals

__all__ = ["Grid", "DiscreteOperator", "discretize", "smallest_eigenpair", "RadialProblem",
           "RadialResult", "radial_solve", "default_tolerance", "radial_ground_energy", "rayleigh", "lambda_estimate"]


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """-Delta_h + diag(V) on the interior nodes of a grid, as a sparse CSR matrix."""

    matrix: sp.csr_matrix
    grid: Grid
    potential: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape

    def lower_bound(self):
        """Gershgorin lower bound of the spectrum."""
        A = self.matrix
        diag = A.diagonal()
        off = np.asarray(abs(A).sum(axis=1)).ravel() - np.abs(diag)
        return float(np.min(diag - off))


def _laplacian_1d(m, h):
    return sp.diags([np.full(m - 1, -1.0), np.full(m, 2.0), np.full(m - 1, -1.0)],
                    [-1, 0, 1], format="csr") / (h * h)


def discretize(V, grid: Grid) -> DiscreteOperator:
    """Assemble -Delta_h + V with homogeneous Dirichlet data on the box boundary."""
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(V(grid.points()), dtype=float)
    except DomainError as err:
        raise NodeSingularity(f"potential is singular at a grid node: {err}") from err
    if not np.all(np.isfinite(vals)):
        raise NodeSingularity("potential is not finite at a grid node (use an even m to avoid the origin)")
    T = _laplacian_1d(grid.m, grid.h)
    I = sp.identity(grid.m, format="csr")
    A = sp.csr_matrix((grid.size, grid.size))
    for ax in range(grid.n):
        term = None
        for j in range(grid.n):
            piece = T if j == ax else I
            term = piece if term is None else sp.kron(term, piece, format="csr")
        A = A + term
    A = (A + sp.diags(vals.ravel())).tocsr()
    return DiscreteOperator(A, grid, vals)


def smallest_eigenpair(op: DiscreteOperator, tol: float = 1e-8, maxiter: int = 10_000):
    """Lowest eigenpair by Lanczos iteration.

    In one and two dimensions the operator is factorised cheaply and
    shift-invert with the shift below the spectrum converges in a few steps.
    In three or more dimensions LU fill-in dominates, so plain Lanczos on the
    smallest algebraic end is used instead. Either way the returned pair is
    checked against its residual.

    Returns ``(E, GridState)``; the state has unit discrete L2 norm and a
    positive largest-magnitude entry.
    """
    A = op.matrix
    v0 = np.ones(A.shape[0])
    try:
        if op.grid.n <= 2:
            sigma = op.lower_bound() - 1.0
            vals, vecs = eigsh(A, k=1, sigma=sigma, which="LM", tol=tol * 1e-2, maxiter=maxiter, v0=v0)
        else:
            vals, vecs = eigsh(A, k=1, which="SA", tol=tol * 1e-2, maxiter=maxiter, v0=v0)
    except ArpackNoConvergence as err:
        raise NoConvergence(f"Lanczos did not converge within {maxiter} iterations") from err
    E = float(vals[0])
    psi = vecs[:, 0]
    psi = psi / np.linalg.norm(psi)
    residual = float(np.linalg.norm(A @ psi - E * psi))
    if residual > tol * max(1.0, abs(E)):
        raise NoConvergence(f"eigenpair residual {residual:.2e} exceeds tolerance {tol:.1e}")
    if psi[np.argmax(np.abs(psi))] < 0:
        psi = -psi
    h = op.grid.h
    values = psi.reshape((op.grid.m,) * op.grid.n) / math.sqrt(h ** op.grid.n)
    return E, GridState(op.grid, values)


# -- radial solver -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RadialProblem:
    """Radial potential V(r) in n dimensions on the ball of radius R, Dirichlet at R.

    ``m`` is the cell count of the coarse grid; cells are centred at
    r_i = (i - 1/2) h with h = R/(m + 1/2), so no node sits at the origin.
    """

    V: Callable
    n: int
    R: float
    m: int = 4000

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput("n must be >= 1")
        if not self.R > 0 or self.m < 3:
            raise InvalidInput("need R > 0 and m >= 3")

    def effective_potential(self, r):
        """V(r) + (n-1)(n-3)/(4 r^2): the potential seen by psi = r^((n-1)/2) phi."""
        r = np.asarray(r, dtype=float)
        return self.V(r) + (self.n - 1) * (self.n - 3) / (4.0 * r * r)


def _fv_lowest(V, n, R, m):
    h = R / (m + 0.5)
    i = np.arange(1, m + 1)
    r = (i - 0.5) * h
    vol = ((i * h) ** n - ((i - 1) * h) ** n) / n
    with np.errstate(all="ignore"):
        v = np.asarray(V(r), dtype=float) * np.ones(m)
    if not np.all(np.isfinite(v)):
        raise NodeSingularity("radial potential is not finite at a cell centre")
    w = (i * h) ** (n - 1) / h
    w_left = np.concatenate([[0.0], w[:-1]])
    diag = (w_left + w + vol * v) / vol
    off = -w[:-1] / np.sqrt(vol[:-1] * vol[1:])
    return float(eigh_tridiagonal(diag, off, select="i", select_range=(0, 0), eigvals_only=True)[0])


@dataclass
class RadialResult:
    E: float
    error: float
    R: float
    m: int
    history: list = field(default_factory=list)

    def as_dict(self):
        return {"E": self.E, "error": self.error, "R": self.R, "m": self.m}


def _richardson(V, n, R, m):
    e1 = _fv_lowest(V, n, R, m)
    e2 = _fv_lowest(V, n, R, 2 * m)
    e4 = _fv_lowest(V, n, R, 4 * m)
    r1 = (4 * e2 - e1) / 3
    r2 = (4 * e4 - e2) / 3
    return r2, abs(r2 - r1)


def radial_solve(problem: RadialProblem, tol: float = 1e-8, *, fixed_radius: bool = True,
                 max_radius: float = 1e6, max_m: int = 64_000) -> RadialResult:
    """Lowest radial eigenvalue of -Delta + V(|x|) with Richardson extrapolation.

    The discretisation error is estimated from two extrapolated values (m, 2m)
    and (2m, 4m); m doubles until that estimate is below tol. Unless
    ``fixed_radius`` is set, R doubles until E changes by less than tol.
    """
    V, n = problem.V, problem.n
    R, m = problem.R, problem.m
    history = []

    def at_radius(R, m):
        while True:
            E, err = _richardson(V, n, R, m)
            history.append({"R": R, "m": m, "E": E, "error": err})
            if err <= tol:
                return E, err, m
            if 2 * m > max_m:
                raise NoConvergence(f"radial discretisation error {err:.2e} above {tol:.1e} at m={m}")
            m *= 2

    E, err, m = at_radius(R, m)
    if fixed_radius:
        return RadialResult(E, err, R, m, history)
    while True:
        R2 = 2 * R
        if R2 > max_radius:
            raise NoConvergence(f"E did not settle before R = {max_radius:g}")
        # keep the spacing while the cell budget allows
        E2, err2, m2 = at_radius(R2, min(2 * m, max_m // 4))
        if abs(E2 - E) <= tol:
            return RadialResult(E2, max(err2, abs(E2 - E)), R2, m2, history)
        E, err, R, m = E2, err2, R2, m2


def default_tolerance(profile) -> float:
    """1e-8 for potentials bounded near the origin, 1e-6 for singular ones.

    A 1/r singularity limits the extrapolated radial scheme to about 1e-7.
    """
    if profile is None:
        return 1e-8
    with np.errstate(all="ignore"):
        v = np.asarray(profile(np.array([1e-8, 1e-6])), dtype=float)
    singular = not np.all(np.isfinite(v)) or abs(v[0] - v[1]) > 1e-3
    return 1e-6 if singular else 1e-8


def radial_ground_energy(V: Callable, n: int, tol: float = 1e-8, state: Optional[GroundState] = None,
                         R: Optional[float] = None, m: int = 4000) -> RadialResult:
    """E0 of a radial potential; the box radius comes from a known decaying state when given."""
    if R is not None:
        return radial_solve(RadialProblem(V, n, R, m), tol)
    if state is not None and state.is_radial:
        return radial_solve(RadialProblem(V, n, decay_radius(state, 1e-12), m), tol)
    return radial_solve(RadialProblem(V, n, 10.0, m), tol, fixed_radius=False)


# -- Rayleigh quotient and Lambda(X) -------------------------------------------------

def rayleigh(phi, V: PotentialFunction) -> QuadratureEstimate:
    """||grad phi||^2 + int V |phi|^2 for a normalized state."""
    if isinstance(phi, GridState):
        g = phi.gradient()
        h = phi.grid.h ** phi.grid.n
        vals = np.asarray(V(phi.grid.points()), dtype=float)
        value = float(np.sum(np.sum(g * g, axis=-1) + vals * phi.values ** 2) * h)
        return QuadratureEstimate(value, abs(value) * phi.grid.h ** 2, "grid", phi.grid.size)
    radial = phi.is_radial and V.radial is not None
    parts = state_integrals(phi, [lambda d: np.sum(d.grad ** 2, axis=-1),
                                  lambda d: V(d.x) * d.phi ** 2], radial=radial, origin_power=-1.0)
    return QuadratureEstimate(parts[0].value + parts[1].value, parts[0].error + parts[1].error,
                              parts[0].method, parts[0].nodes)


def lambda_estimate(X: VectorField, tol: Optional[float] = None) -> float:
    """Lambda(X) = E0(|X|^2 - div X), from the oracle (tol defaults to ``default_tolerance``)."""
    V = schrodinger_potential(X, 0.0)
    profile = V.radial_profile()
    if tol is None:
        tol = default_tolerance(profile)
    if profile is not None:
        state = None
        try:
            candidate = solve_ground_state(X)
            state = candidate if candidate.admissible else None
        except GroundFieldError:
            pass
        return radial_ground_energy(profile, X.n, tol, state).E
    grid = Grid(X.n, 8.0, {1: 400, 2: 120}.get(X.n, 30))
    E, _ = smallest_eigenpair(discretize(V, grid), tol=max(tol, 1e-8))
    return E
