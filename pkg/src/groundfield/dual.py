"""Batched second-order forward-mode dual numbers.

A :class:`Dual2` carries a value together with its gradient and (optionally)
full Hessian with respect to the n coordinates of a point. All three arrays
share leading batch dimensions, so one pass evaluates a whole point cloud.

``order`` controls how much is propagated: 0 (values only), 1 (gradients),
2 (gradients and Hessians). ``None`` in ``grad``/``hess`` means identically
zero, which keeps constants and linear leaves cheap.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError, SingularPoint


def _outer(a, b):
    return a[..., :, None] * b[..., None, :]


def _add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _scale(c, g, extra_dims):
    if g is None:
        return None
    c = np.asarray(c)
    return c.reshape(c.shape + (1,) * extra_dims) * g


class Dual2:
    __slots__ = ("val", "grad", "hess", "order")

    def __init__(self, val, grad=None, hess=None, order=0):
        self.val = np.asarray(val, dtype=float)
        self.grad = grad
        self.hess = hess
        self.order = order

    # -- construction -------------------------------------------------

    @classmethod
    def constant(cls, c):
        return cls(c)

    @classmethod
    def coordinates(cls, x, order=2):
        """Seed one dual per coordinate of points ``x`` with shape (..., n)."""
        x = np.asarray(x, dtype=float)
        n = x.shape[-1]
        out = []
        for i in range(n):
            grad = None
            if order >= 1:
                grad = np.zeros(x.shape)
                grad[..., i] = 1.0
            out.append(cls(x[..., i], grad, None, order))
        return out

    @classmethod
    def radius(cls, x, order=2):
        """|x| with exact derivatives; raises SingularPoint at the origin if order >= 1."""
        x = np.asarray(x, dtype=float)
        r = np.sqrt(np.sum(x * x, axis=-1))
        if order == 0:
            return cls(r)
        if np.any(r == 0.0):
            raise SingularPoint("r is not differentiable at the origin")
        grad = x / r[..., None]
        hess = None
        if order >= 2:
            n = x.shape[-1]
            hess = (np.eye(n) - _outer(grad, grad)) / r[..., None, None]
        return cls(r, grad, hess, order)

    # -- chain rule -------------------------------------------------------

    def _apply(self, f0, f1, f2):
        """Compose with a scalar function whose value and first two derivatives are given."""
        grad = hess = None
        if self.order >= 1 and self.grad is not None:
            grad = _scale(f1, self.grad, 1)
            if self.order >= 2:
                hess = _add(_scale(f1, self.hess, 2), _scale(f2, _outer(self.grad, self.grad), 2))
        return Dual2(f0, grad, hess, self.order)

    @staticmethod
    def _lift(other):
        return other if isinstance(other, Dual2) else Dual2(other)

    def __add__(self, other):
        other = self._lift(other)
        order = max(self.order, other.order)
        return Dual2(self.val + other.val, _add(self.grad, other.grad),
                     _add(self.hess, other.hess) if order >= 2 else None, order)

    __radd__ = __add__

    def __neg__(self):
        return Dual2(-self.val,
                     None if self.grad is None else -self.grad,
                     None if self.hess is None else -self.hess,
                     self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        order = max(self.order, other.order)
        a, b = self, other
        grad = _add(_scale(a.val, b.grad, 1), _scale(b.val, a.grad, 1))
        hess = None
        if order >= 2:
            hess = _add(_scale(a.val, b.hess, 2), _scale(b.val, a.hess, 2))
            if a.grad is not None and b.grad is not None:
                cross = _outer(a.grad, b.grad)
                hess = _add(hess, cross + np.swapaxes(cross, -1, -2))
        return Dual2(a.val * b.val, grad, hess, order)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.val
        if np.any(v == 0.0):
            raise DomainError("division by zero")
        inv = 1.0 / v
        return self._apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def power(self, c):
        """Raise to a constant real exponent ``c``."""
        c = float(c)
        v = self.val
        integral = c == np.round(c)
        if not integral and np.any(v < 0.0):
            raise DomainError(f"negative base raised to non-integer power {c}")
        if c < 0 and np.any(v == 0.0):
            raise DomainError("zero raised to a negative power")

        def term(coef, k):
            # coef * v**(c-k); zero coefficient means the term vanishes identically
            if coef == 0.0:
                return np.zeros_like(v)
            if c - k < 0 and np.any(v == 0.0):
                raise DomainError(f"derivative of x^{c} is infinite at 0")
            with np.errstate(invalid="ignore"):
                return coef * np.power(v, c - k)

        f0 = np.power(v, c)
        f1 = term(c, 1) if self.order >= 1 else None
        f2 = term(c * (c - 1.0), 2) if self.order >= 2 else None
        return self._apply(f0, f1, f2)

    def __pow__(self, other):
        if isinstance(other, Dual2):
            if other.grad is None and other.hess is None:
                return self.power(other.val)
            return exp(other * log(self))
        return self.power(other)

    def __rpow__(self, other):
        return exp(self * log(Dual2(other)))

    def __repr__(self):
        return f"Dual2(val={self.val!r}, order={self.order})"

    @property
    def laplacian(self):
        if self.hess is None:
            return np.zeros_like(self.val)
        return np.trace(self.hess, axis1=-2, axis2=-1)

    def gradient(self, n):
        if self.grad is None:
            return np.zeros(self.val.shape + (n,))
        return self.grad


def exp(a: Dual2) -> Dual2:
    e = np.exp(a.val)
    return a._apply(e, e, e)


def log(a: Dual2) -> Dual2:
    if np.any(a.val <= 0.0):
        raise DomainError("log of a non-positive number")
    inv = 1.0 / a.val
    return a._apply(np.log(a.val), inv, -inv * inv)


def sqrt(a: Dual2) -> Dual2:
    if np.any(a.val < 0.0):
        raise DomainError("sqrt of a negative number")
    s = np.sqrt(a.val)
    if a.order == 0:
        return Dual2(s)
    if np.any(s == 0.0):
        raise DomainError("sqrt is not differentiable at 0")
    return a._apply(s, 0.5 / s, -0.25 / (s * s * s))


def sin(a: Dual2) -> Dual2:
    s, c = np.sin(a.val), np.cos(a.val)
    return a._apply(s, c, -s)


def cos(a: Dual2) -> Dual2:
    s, c = np.sin(a.val), np.cos(a.val)
    return a._apply(c, -s, -c)


def absolute(a: Dual2) -> Dual2:
    if a.order >= 1 and np.any(a.val == 0.0):
        raise DomainError("abs is not differentiable at 0")
    sgn = np.sign(a.val)
    return a._apply(np.abs(a.val), sgn, np.zeros_like(a.val))


FUNCTIONS = {
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sin": sin,
    "cos": cos,
    "abs": absolute,
}
