"""Harmonic homogeneous polynomials, excited states P * phi0 and the resulting spectra."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import expr as ex
from .errors import InvalidInput, NotAdmissible
from .fields import GradientField, RadialPowerField, VectorField
from .polynomial import Polynomial, monomials
from .states import GroundState, normalize, solve_ground_state

EXACT_LIMIT = 400          # largest monomial count handled by exact rational elimination
SVD_CUTOFF = 1e-10


@dataclass(frozen=True)
class HarmonicPolynomial(Polynomial):
    """A homogeneous polynomial of degree k with vanishing Laplacian."""

    k: int = 0

    def __post_init__(self):
        super().__post_init__()
        if not self.is_homogeneous(self.k):
            raise InvalidInput(f"polynomial is not homogeneous of degree {self.k}")

    def laplacian_residual(self):
        """Largest coefficient of Delta P relative to the largest coefficient of P."""
        scale = self.max_abs_coeff() or 1.0
        return self.laplacian().max_abs_coeff() / scale

    def to_record(self):
        return {"n": self.n, "k": self.k, "coeffs": self.to_records()}


def harmonic_dimension(n: int, k: int) -> int:
    """C(n+k-1, n-1) - C(n+k-3, n-1): the dimension of degree-k harmonics in n variables."""
    if k < 0:
        return 0
    total = math.comb(n + k - 1, n - 1)
    return total - (math.comb(n + k - 3, n - 1) if k >= 2 else 0)


def laplacian_matrix(n: int, k: int):
    """Integer matrix of Delta from degree-k monomials (columns) to degree k-2 (rows)."""
    cols = monomials(n, k)
    rows = monomials(n, k - 2) if k >= 2 else []
    index = {b: i for i, b in enumerate(rows)}
    A = [[0] * len(cols) for _ in rows]
    for j, b in enumerate(cols):
        for i in range(n):
            if b[i] >= 2:
                nb = list(b)
                nb[i] -= 2
                A[index[tuple(nb)]][j] += b[i] * (b[i] - 1)
    return A, cols


def _nullspace_exact(A, ncols):
    """Null-space basis of a rational matrix by reduced row echelon form."""
    M = [[Fraction(v) for v in row] for row in A]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -M[row][fc]
        basis.append(v)
    return basis


def _nullspace_svd(A, ncols):
    if not A:
        return [list(row) for row in np.eye(ncols)]
    mat = np.asarray(A, dtype=float)
    _, s, vt = np.linalg.svd(mat)
    rank = int(np.sum(s > SVD_CUTOFF * s[0])) if s.size else 0
    return [list(row) for row in vt[rank:]]


def harmonic_basis(n: int, k: int, exact: bool | None = None) -> list[HarmonicPolynomial]:
    """A basis of the degree-k harmonic homogeneous polynomials in n variables.

    Small cases use exact rational elimination and return coprime integer
    coefficients, so Delta P vanishes exactly in floating point; larger cases
    fall back to an SVD null space scaled to unit largest coefficient.
    """
    if n < 1 or k < 0:
        raise InvalidInput("need n >= 1 and k >= 0")
    A, cols = laplacian_matrix(n, k)
    if exact is None:
        exact = len(cols) <= EXACT_LIMIT
    vectors = _nullspace_exact(A, len(cols)) if exact else _nullspace_svd(A, len(cols))
    out = []
    for v in vectors:
        if exact:
            v = _primitive_integers(v)
            coeffs = {b: float(c) for b, c in zip(cols, v) if c != 0}
        else:
            scale = max(abs(float(c)) for c in v)
            coeffs = {b: float(c) / scale for b, c in zip(cols, v) if abs(float(c)) > 0}
        out.append(HarmonicPolynomial(n, coeffs, k))
    return out


def _primitive_integers(v):
    """Scale a rational vector to coprime integers, which floats hold exactly here."""
    lcm = 1
    for c in v:
        lcm = math.lcm(lcm, c.denominator)
    ints = [int(c * lcm) for c in v]
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    ints = [i // g for i in ints]
    if max(abs(i) for i in ints) >= 2 ** 53:
        raise OverflowError("integer harmonic coefficients exceed double precision")
    return ints


def w_function(P: Polynomial, X: VectorField):
    """W with 2 grad P . X + W P = 0.

    For X = alpha x / |x|^p Euler's identity grad P . x = k P gives the closed form
    W = -2 alpha k / |x|^p. Otherwise W is evaluated pointwise and P(x) = 0 raises
    ZeroDivisionError.
    """
    k = P.degree
    if isinstance(X, RadialPowerField) and P.is_homogeneous():
        a, p = X.alpha, X.p
        if k == 0 or a == 0:
            return lambda x: np.zeros(np.asarray(x).shape[:-1])

        def closed(x):
            r = np.sqrt(np.sum(np.asarray(x, dtype=float) ** 2, axis=-1))
            return -2.0 * a * k / r ** p
        return closed

    def pointwise(x):
        x = np.asarray(x, dtype=float)
        d = P.dual(x, 1)
        if np.any(d.val == 0):
            raise ZeroDivisionError("W is undefined where P(x) = 0")
        return -2.0 * np.sum(d.gradient(P.n) * X(x), axis=-1) / d.val
    return pointwise


def excited_state(P: Polynomial, phi0: GroundState) -> GroundState:
    """P * phi0, normalized; a constant P returns phi0 itself."""
    if not phi0.admissible:
        raise NotAdmissible(f"ground state is not admissible: {phi0.reason}")
    if P.n != phi0.n:
        raise InvalidInput(f"polynomial in n={P.n}, state in n={phi0.n}")
    if P.degree == 0:
        return phi0
    poly = P if phi0.poly is None else P * phi0.poly
    return normalize(replace(phi0, poly=Polynomial(P.n, poly.coeffs)))


@dataclass(frozen=True)
class SpectrumEntry:
    """Level k: eigenvalue, degeneracy and the template P_k(x) exp(-u_k(x))."""

    k: int
    E: float
    degeneracy: int
    template: str
    u: str

    def as_dict(self):
        return {"k": self.k, "E": self.E, "degeneracy": self.degeneracy,
                "stateTemplate": self.template, "u": self.u}


def oscillator_spectrum(n: int, alpha: float, kmax: int) -> list[SpectrumEntry]:
    """-Delta + alpha^2 |x|^2: E_k = alpha (n + 2k), states P_k exp(-alpha |x|^2 / 2)."""
    if not alpha > 0 or n < 1:
        raise InvalidInput("need alpha > 0 and n >= 1")
    u = ex.render(RadialPowerField(alpha, 0.0, n).potential_u())
    out = []
    for k in range(kmax + 1):
        deg = harmonic_dimension(n, k)
        if deg == 0:
            continue
        out.append(SpectrumEntry(k, alpha * (n + 2 * k), deg, "P_k(x) * exp(-u(x))", u))
    return out


def coulomb_rate(n: int, alpha: float, k: int) -> float:
    """Decay rate gamma_k of P_k(x) exp(-gamma_k |x|) for -Delta - alpha (n-1)/|x|.

    From -Delta(P e^{-g r}) = (g (n - 1 + 2k)/r - g^2) P e^{-g r}: matching the
    Coulomb coupling alpha (n-1) fixes g = alpha (n-1)/(n-1+2k).
    """
    return alpha * (n - 1) / (n - 1 + 2 * k)


def coulomb_spectrum(n: int, alpha: float, kmax: int) -> list[SpectrumEntry]:
    """-Delta - alpha (n-1)/|x|: E_k = -gamma_k^2 with gamma_k = alpha (n-1)/(n-1+2k).

    In n = 3 this is E_k = -(2/(2+2k))^2 alpha^2.
    """
    if n < 2 or not alpha > 0:
        raise InvalidInput("need n >= 2 and alpha > 0")
    out = []
    for k in range(kmax + 1):
        deg = harmonic_dimension(n, k)
        if deg == 0:
            continue
        g = coulomb_rate(n, alpha, k)
        out.append(SpectrumEntry(k, -g * g, deg, "P_k(x) * exp(-u(x))", ex.render(
            ex.BinOp("*", ex.num(g), ex.Radius()))))
    return out


def oscillator_states(n: int, alpha: float, k: int) -> list[GroundState]:
    phi0 = solve_ground_state(RadialPowerField(alpha, 0.0, n))
    return [excited_state(P, phi0) for P in harmonic_basis(n, k)]


def coulomb_states(n: int, alpha: float, k: int) -> list[GroundState]:
    """Normalized eigenstates of level k for the fixed Hamiltonian -Delta - alpha (n-1)/|x|."""
    phi_k = solve_ground_state(RadialPowerField(coulomb_rate(n, alpha, k), 1.0, n))
    return [excited_state(P, phi_k) for P in harmonic_basis(n, k)]


def schrodinger_residual(state: GroundState, V, E: float, x):
    """|-Delta psi + V psi - E psi| and |psi| at points x."""
    d = state.dual(x, 2)
    return np.abs(-d.laplacian + (V(x) - E) * d.val), np.abs(d.val)


def gradient_field_for(state: GroundState) -> VectorField:
    """grad u as a field, for w_function on general gradient fields."""
    return GradientField(state.u, state.n)
