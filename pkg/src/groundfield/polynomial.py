"""Sparse multivariate polynomials over the monomial basis."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dual import Dual2


def monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """All multi-indices of total degree k in n variables, in lexicographic order (descending)."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), k):
        beta = [0] * n
        for i in combo:
            beta[i] += 1
        out.append(tuple(beta))
    return sorted(out, reverse=True)


@dataclass(frozen=True)
class Polynomial:
    n: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for beta, c in self.coeffs.items():
            beta = tuple(int(b) for b in beta)
            if len(beta) != self.n or min(beta, default=0) < 0:
                raise ValueError(f"bad multi-index {beta} for n={self.n}")
            if c != 0:
                clean[beta] = clean.get(beta, 0) + c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def constant(cls, n, c=1.0):
        return cls(n, {(0,) * n: c})

    @classmethod
    def coordinate(cls, n, i):
        beta = [0] * n
        beta[i] = 1
        return cls(n, {tuple(beta): 1.0})

    @property
    def degrees(self):
        return {sum(b) for b in self.coeffs}

    @property
    def degree(self):
        return max(self.degrees, default=0)

    def is_homogeneous(self, k=None):
        degs = self.degrees
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def __add__(self, other):
        out = dict(self.coeffs)
        for b, c in other.coeffs.items():
            out[b] = out.get(b, 0) + c
        return Polynomial(self.n, out)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(self.n, {b: c * other for b, c in self.coeffs.items()})
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        out = {}
        for (b1, c1), (b2, c2) in itertools.product(self.coeffs.items(), other.coeffs.items()):
            b = tuple(i + j for i, j in zip(b1, b2))
            out[b] = out.get(b, 0) + c1 * c2
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def derivative(self, i):
        out = {}
        for b, c in self.coeffs.items():
            if b[i] > 0:
                nb = list(b)
                nb[i] -= 1
                out[tuple(nb)] = out.get(tuple(nb), 0) + c * b[i]
        return Polynomial(self.n, out)

    def laplacian(self):
        out = {}
        for b, c in self.coeffs.items():
            for i in range(self.n):
                if b[i] >= 2:
                    nb = list(b)
                    nb[i] -= 2
                    out[tuple(nb)] = out.get(tuple(nb), 0) + c * b[i] * (b[i] - 1)
        return Polynomial(self.n, out)

    def scaled_arguments(self, lam):
        """x -> P(lam * x)."""
        return Polynomial(self.n, {b: c * lam ** sum(b) for b, c in self.coeffs.items()})

    def max_abs_coeff(self):
        return max((abs(float(c)) for c in self.coeffs.values()), default=0.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1])
        for b, c in self.coeffs.items():
            term = np.full(x.shape[:-1], float(c))
            for i, e in enumerate(b):
                if e:
                    term = term * x[..., i] ** e
            total = total + term
        return total

    def dual(self, x, order=2) -> Dual2:
        coords = Dual2.coordinates(x, order)
        total = Dual2(np.zeros(np.asarray(x).shape[:-1]))
        for b, c in self.coeffs.items():
            term = Dual2(float(c))
            for i, e in enumerate(b):
                if e:
                    term = term * coords[i].power(e)
            total = total + term
        return total

    def to_records(self):
        return [[list(b), float(c)] for b, c in sorted(self.coeffs.items(), reverse=True)]

    @classmethod
    def from_records(cls, n, records):
        return cls(n, {tuple(b): float(c) for b, c in records})
