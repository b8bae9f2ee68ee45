"""Uniform Dirichlet grids on [-L, L]^n and states sampled on them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput


@dataclass(frozen=True)
class Grid:
    """m interior points per axis on [-L, L]^n; spacing h = 2L/(m+1).

    With m even no node sits at the origin (nodes are offset by h/2 from it).
    """

    n: int
    L: float
    m: int

    def __post_init__(self):
        if self.m < 3:
            raise InvalidInput("grid needs m >= 3")
        if not self.L > 0:
            raise InvalidInput("grid half-width must be positive")

    @property
    def h(self):
        return 2.0 * self.L / (self.m + 1)

    @property
    def axis(self):
        return -self.L + self.h * np.arange(1, self.m + 1)

    @property
    def size(self):
        return self.m ** self.n

    def points(self):
        """Node coordinates, shape (m, ..., m, n) in 'ij' order."""
        mesh = np.meshgrid(*([self.axis] * self.n), indexing="ij")
        return np.stack(mesh, axis=-1)


@dataclass(frozen=True, eq=False)
class GridState:
    """A state sampled at the interior nodes of a grid (zero on the boundary)."""

    grid: Grid
    values: np.ndarray

    def padded(self):
        return np.pad(self.values, 1)

    def gradient(self):
        """Central-difference gradient at the interior nodes, shape values.shape + (n,)."""
        h = self.grid.h
        v = self.padded()
        inner = tuple(slice(1, -1) for _ in range(self.grid.n))
        out = []
        for ax in range(self.grid.n):
            fwd = list(inner)
            bwd = list(inner)
            fwd[ax] = slice(2, None)
            bwd[ax] = slice(None, -2)
            out.append((v[tuple(fwd)] - v[tuple(bwd)]) / (2 * h))
        return np.stack(out, axis=-1)

    def norm_sq(self):
        return float(np.sum(self.values ** 2) * self.grid.h ** self.grid.n)
