"""Vector fields X on R^n and the Schroedinger potentials they induce.

Every field evaluates on point arrays of shape (..., n) and exposes its value,
divergence and squared norm. The potential attached to X is

    V_{X,lam}(x) = |X(x)|^2 - div X(x) + lam,

for which the ground states of ||grad phi + phi X||^2 are Schroedinger ground
states at energy lam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import expr as ex
from .errors import InvalidInput, InvalidScale, NotAdmissible, SingularPoint


def _points(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != n:
        raise InvalidInput(f"point dimension {x.shape[-1]} does not match field dimension {n}")
    return x


@dataclass(frozen=True)
class Admissibility:
    """Local integrability of |X|^2 and div X; ``None`` means unknown."""

    norm_sq_loc_integrable: Optional[bool]
    div_loc_integrable: Optional[bool]

    @property
    def ok(self):
        return self.norm_sq_loc_integrable is not False and self.div_loc_integrable is not False

    def as_dict(self):
        return {"normSqLocIntegrable": self.norm_sq_loc_integrable,
                "divLocIntegrable": self.div_loc_integrable}


class VectorField:
    n: int
    is_radial: bool = False

    def __call__(self, x):
        raise NotImplementedError

    def div(self, x):
        raise NotImplementedError

    def norm_sq(self, x):
        v = self(x)
        return np.sum(v * v, axis=-1)

    def value_and_div(self, x):
        """X(x) and div X(x) together; subclasses share work where they can."""
        return self(x), self.div(x)

    def admissibility(self) -> Admissibility:
        return Admissibility(None, None)

    def scaled(self, lam) -> "VectorField":
        return ScaledField(self, lam)

    def radial_potential_profile(self) -> Optional[Callable]:
        """r -> |X|^2 - div X along a ray, for radial fields only."""
        if not self.is_radial:
            return None
        e1 = np.zeros(self.n)
        e1[0] = 1.0

        def profile(r):
            pts = np.asarray(r, dtype=float)[..., None] * e1
            return self.norm_sq(pts) - self.div(pts)

        return profile

    def __add__(self, other):
        return SumField((self, other))


@dataclass(frozen=True, eq=True)
class RadialPowerField(VectorField):
    """X(x) = alpha * x / |x|^p."""

    alpha: float
    p: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInput(f"dimension must be an integer >= 1, got {self.n}")

    is_radial = True

    @property
    def singular_at_origin(self):
        return self.p >= 1

    def _radius(self, x):
        return np.sqrt(np.sum(x * x, axis=-1))

    def __call__(self, x):
        x = _points(x, self.n)
        r = self._radius(x)
        zero = r == 0.0
        if np.any(zero):
            if self.singular_at_origin:
                raise SingularPoint(f"x/|x|^{self.p} is singular at the origin")
            # p < 1: the field extends continuously by 0
            r = np.where(zero, 1.0, r)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.alpha * x / r[..., None] ** self.p
        return np.where(zero[..., None], 0.0, out) if np.any(zero) else out

    def div(self, x):
        x = _points(x, self.n)
        r = self._radius(x)
        zero = r == 0.0
        if np.any(zero):
            if self.p > 0:
                raise SingularPoint(f"div of x/|x|^{self.p} is singular at the origin")
            at0 = self.alpha * self.n if self.p == 0 else 0.0
            r = np.where(zero, 1.0, r)
            return np.where(zero, at0, self.alpha * (self.n - self.p) * r ** (-self.p))
        return self.alpha * (self.n - self.p) * r ** (-self.p)

    def norm_sq(self, x):
        x = _points(x, self.n)
        r = self._radius(x)
        zero = r == 0.0
        if np.any(zero):
            if self.singular_at_origin:
                raise SingularPoint(f"x/|x|^{self.p} is singular at the origin")
            r = np.where(zero, 1.0, r)
            return np.where(zero, 0.0, self.alpha ** 2 * r ** (2 - 2 * self.p))
        return self.alpha ** 2 * r ** (2 - 2 * self.p)

    def admissibility(self):
        return Admissibility(self.p < 1 + self.n / 2, self.p < 1 + self.n)

    def scaled(self, lam):
        lam = _check_scale(lam)
        return RadialPowerField(self.alpha * lam ** (self.p - 2), self.p, self.n)

    def radial_potential_profile(self):
        a, p, n = self.alpha, self.p, self.n

        def profile(r):
            r = np.asarray(r, dtype=float)
            return a * a * r ** (2 - 2 * p) - a * (n - p) * r ** (-p)

        return profile

    def potential_u(self) -> ex.Expr:
        """u with grad u = X: alpha/(2-p) r^(2-p), or alpha log r when p = 2."""
        if self.p == 2:
            return ex.BinOp("*", ex.num(self.alpha), ex.Call("log", ex.Radius()))
        return ex.BinOp("*", ex.num(self.alpha / (2 - self.p)),
                        ex.BinOp("^", ex.Radius(), ex.num(2 - self.p)))

    def to_spec(self):
        return {"kind": "radial-power", "alpha": self.alpha, "p": self.p, "n": self.n}


@dataclass(frozen=True)
class GradientField(VectorField):
    """X = grad u for a parsed scalar expression u."""

    u: ex.Expr
    n: int

    def __post_init__(self):
        if ex.max_variable(self.u) > self.n:
            raise InvalidInput(f"expression uses x{ex.max_variable(self.u)} but n={self.n}")

    @classmethod
    def from_text(cls, text, n):
        return cls(ex.parse(text, n), n)

    @property
    def is_radial(self):
        return ex.is_radial(self.u)

    def __call__(self, x):
        return ex.grad_u(self.u, _points(x, self.n))

    def div(self, x):
        return ex.laplacian_u(self.u, _points(x, self.n))

    def value_and_div(self, x):
        d = ex.evaluate(self.u, _points(x, self.n), 2)
        return d.gradient(self.n), d.laplacian

    def to_spec(self):
        return {"kind": "gradient", "u": ex.render(self.u), "n": self.n}


@dataclass(frozen=True)
class ComponentField(VectorField):
    """A field given componentwise; not necessarily a gradient."""

    components: tuple
    n: int

    @classmethod
    def from_text(cls, texts, n):
        if len(texts) != n:
            raise InvalidInput(f"need {n} components, got {len(texts)}")
        return cls(tuple(ex.parse(t, n) for t in texts), n)

    def __call__(self, x):
        x = _points(x, self.n)
        return np.stack([ex.eval_u(c, x) for c in self.components], axis=-1)

    def div(self, x):
        x = _points(x, self.n)
        return sum(ex.grad_u(c, x)[..., i] for i, c in enumerate(self.components))

    def jacobian(self, x):
        x = _points(x, self.n)
        return np.stack([ex.grad_u(c, x) for c in self.components], axis=-2)

    def to_spec(self):
        return {"kind": "components", "components": [ex.render(c) for c in self.components], "n": self.n}


@dataclass(frozen=True)
class SumField(VectorField):
    fields: tuple

    def __post_init__(self):
        dims = {f.n for f in self.fields}
        if len(dims) != 1:
            from .errors import DimensionMismatch
            raise DimensionMismatch(f"cannot add fields of dimensions {sorted(dims)}")

    @property
    def n(self):
        return self.fields[0].n

    @property
    def is_radial(self):
        return all(f.is_radial for f in self.fields)

    def __call__(self, x):
        return sum(f(x) for f in self.fields)

    def div(self, x):
        return sum(f.div(x) for f in self.fields)

    def admissibility(self):
        flags = [f.admissibility() for f in self.fields]
        both = lambda vals: True if all(v is True for v in vals) else None  # noqa: E731
        return Admissibility(both([a.norm_sq_loc_integrable for a in flags]),
                             both([a.div_loc_integrable for a in flags]))


@dataclass(frozen=True)
class ScaledField(VectorField):
    """X_lam(x) = X(x / lam) / lam."""

    base: VectorField
    lam: float

    def __post_init__(self):
        _check_scale(self.lam)

    @property
    def n(self):
        return self.base.n

    @property
    def is_radial(self):
        return self.base.is_radial

    def __call__(self, x):
        return self.base(np.asarray(x, dtype=float) / self.lam) / self.lam

    def div(self, x):
        return self.base.div(np.asarray(x, dtype=float) / self.lam) / self.lam ** 2

    def admissibility(self):
        return self.base.admissibility()

    def scaled(self, lam):
        lam = _check_scale(lam)
        prod = self.lam * lam
        return self.base if prod == 1.0 else ScaledField(self.base, prod)


def _check_scale(lam):
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise InvalidScale(f"scale factor must be positive and finite, got {lam}")
    return lam


def zero_field(n) -> RadialPowerField:
    return RadialPowerField(0.0, 0.0, n)


@dataclass(frozen=True)
class PotentialFunction:
    """Pointwise Schroedinger potential; ``radial`` gives V(r) when V is radial."""

    evaluator: Callable
    lambda_shift: float = 0.0
    description: str = ""
    n: Optional[int] = None
    radial: Optional[Callable] = None

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float)) + self.lambda_shift

    def radial_profile(self):
        if self.radial is None:
            return None
        shift = self.lambda_shift
        base = self.radial
        return lambda r: base(np.asarray(r, dtype=float)) + shift


def eval_field(X: VectorField, x):
    return X(x)


def field_div(X: VectorField, x):
    return X.div(x)


def field_norm_sq(X: VectorField, x):
    return X.norm_sq(x)


def admissibility(X: VectorField) -> Admissibility:
    return X.admissibility()


def scale_field(X: VectorField, lam: float) -> VectorField:
    if lam == 1:
        return X
    return X.scaled(lam)


def schrodinger_potential(X: VectorField, lam: float = 0.0) -> PotentialFunction:
    flags = X.admissibility()
    if not flags.ok:
        raise NotAdmissible(f"|X|^2 or div X is not locally integrable: {flags.as_dict()}")

    def evaluator(x):
        return X.norm_sq(x) - X.div(x)

    return PotentialFunction(evaluator, float(lam), f"|X|^2 - div X + {lam} for {describe_field(X)}",
                             X.n, X.radial_potential_profile())


def potential_from_expr(text: str, n: int) -> PotentialFunction:
    """V(x) given as an expression; radial when it only involves r."""
    node = ex.parse(text, n)
    radial = None
    if ex.is_radial(node):
        radial = lambda r: ex.evaluate_radial(node, r)  # noqa: E731
    return PotentialFunction(lambda x: ex.eval_u(node, x), 0.0, f"V = {text}", n, radial)


def power_potential(coeff: float, k: float, n: int) -> PotentialFunction:
    """V(x) = coeff * |x|^k, homogeneous of degree k."""

    def evaluator(x):
        r = np.sqrt(np.sum(x * x, axis=-1))
        if k < 0 and np.any(r == 0):
            raise SingularPoint(f"|x|^{k} is singular at the origin")
        return coeff * r ** k

    return PotentialFunction(evaluator, 0.0, f"{coeff}*|x|^{k}", n,
                             lambda r: coeff * np.asarray(r, dtype=float) ** k)


def describe_field(X: VectorField) -> str:
    if isinstance(X, RadialPowerField):
        return f"alpha*x/|x|^p (alpha={X.alpha}, p={X.p}, n={X.n})"
    if isinstance(X, GradientField):
        return f"grad({ex.render(X.u)}) (n={X.n})"
    return type(X).__name__


def field_from_spec(spec: dict) -> VectorField:
    """Build a field from its record form.

    ``{"kind": "radial-power", "alpha": a, "p": p, "n": n}``,
    ``{"kind": "gradient", "u": "<expression>", "n": n}`` or
    ``{"kind": "components", "components": [...], "n": n}``.
    """
    try:
        kind = spec["kind"]
        n = int(spec["n"])
        if kind in ("radial-power", "radial"):
            return RadialPowerField(float(spec["alpha"]), float(spec["p"]), n)
        if kind == "gradient":
            if "u" in spec:
                return GradientField.from_text(spec["u"], n)
            return RadialPowerField(float(spec["alpha"]), float(spec["p"]), n)
        if kind == "components":
            return ComponentField.from_text(list(spec["components"]), n)
    except KeyError as err:
        raise InvalidInput(f"field spec is missing {err}") from None
    raise InvalidInput(f"unknown field kind {kind!r}")


def field_to_spec(X: VectorField) -> dict:
    if hasattr(X, "to_spec"):
        return X.to_spec()
    raise InvalidInput(f"{type(X).__name__} has no record form")


def as_radial_power(X: VectorField, rtol=1e-10) -> Optional[RadialPowerField]:
    """Recognise X = alpha x/|x|^p when it is given in another form (e.g. grad of c*r^q)."""
    if isinstance(X, RadialPowerField):
        return X
    if not X.is_radial:
        return None
    e1 = np.zeros(X.n)
    e1[0] = 1.0
    rs = np.array([0.5, 2.0, 0.7, 1.3, 3.1])
    try:
        radial = X(rs[:, None] * e1)[:, 0]
    except Exception:
        return None
    if not np.all(np.isfinite(radial)) or np.any(radial == 0) or np.any(np.sign(radial) != np.sign(radial[0])):
        return None
    # radial component alpha r^(1-p)
    slope = math.log(radial[1] / radial[0]) / math.log(rs[1] / rs[0])
    p = 1.0 - slope
    alpha = radial[0] / rs[0] ** slope
    p_round = round(p * 1e8) / 1e8
    model = alpha * rs ** (1.0 - p_round)
    if np.max(np.abs(model - radial) / np.abs(radial)) > rtol:
        return None
    return RadialPowerField(float(f"{alpha:.12g}"), float(p_round), X.n)
