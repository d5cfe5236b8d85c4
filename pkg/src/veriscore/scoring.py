"""Consistent scoring functions for quantiles, expectiles, and Huber means.

Each family is parameterized by a generator: a nondecreasing function g
for quantiles, a convex function phi (with derivative) for expectiles
and Huber means.  With indicator ind = 1 when y < x:

* quantile level alpha:   (ind - alpha) * (g(x) - g(y))
* expectile level alpha:  |ind - alpha| * (phi(y) - phi(x) - phi'(x)(y - x))
* Huber mean, cap nu:     0.5 * (phi(y) - phi(k + y) + k * phi'(x)),
  where k = cap(x - y, nu) clamps to [-nu, nu].

Familiar special cases: g(t) = t gives the pinball loss, g(t) = 2t at
level 1/2 gives absolute error, phi(t) = 2t^2 at level 1/2 gives squared
error, and phi(t) = t^2 gives the classic Huber loss.

Scores are negatively oriented (smaller is better), nonnegative, and
zero when forecast equals observation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import ValidationError

__all__ = [
    "GeneratorSpec",
    "ScoringSpec",
    "DiscreteDistribution",
    "FunctionalValue",
    "cap",
    "score",
    "functional_value",
    "check_generator",
    "quantile_score",
    "absolute_error",
    "expectile_score",
    "squared_error",
    "huber_loss",
]

FUNCTIONALS = ("quantile", "expectile", "huber_mean")


def cap(value, nu):
    """Clamp value to [-nu, nu] elementwise."""
    if nu <= 0:
        raise ValidationError(f"cap parameter nu must be positive, got {nu}")
    return np.clip(value, -nu, nu)


@dataclass(frozen=True)
class GeneratorSpec:
    """A generator g or phi together with the derivatives a family needs.

    ``family`` is "g" (quantile generators, needing g and g') or "phi"
    (expectile and Huber generators, needing phi, phi', phi'').  When
    the relevant derivative (g' or phi'') is a known constant,
    ``deriv_const`` records it; region decompositions then have exact
    closed forms.
    """

    kind: str
    family: str
    value: Callable
    derivative: Callable
    second_derivative: Callable | None = None
    deriv_const: float | None = None

    @staticmethod
    def identity_g() -> "GeneratorSpec":
        return GeneratorSpec(
            kind="identity_g",
            family="g",
            value=lambda t: np.asarray(t, dtype=float),
            derivative=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            deriv_const=1.0,
        )

    @staticmethod
    def quadratic_phi() -> "GeneratorSpec":
        return GeneratorSpec(
            kind="quadratic_phi",
            family="phi",
            value=lambda t: np.square(np.asarray(t, dtype=float)),
            derivative=lambda t: 2.0 * np.asarray(t, dtype=float),
            second_derivative=lambda t: np.full_like(
                np.asarray(t, dtype=float), 2.0
            ),
            deriv_const=2.0,
        )

    @staticmethod
    def scaled_quadratic_phi() -> "GeneratorSpec":
        return GeneratorSpec(
            kind="scaled_quadratic_phi",
            family="phi",
            value=lambda t: 2.0 * np.square(np.asarray(t, dtype=float)),
            derivative=lambda t: 4.0 * np.asarray(t, dtype=float),
            second_derivative=lambda t: np.full_like(
                np.asarray(t, dtype=float), 4.0
            ),
            deriv_const=4.0,
        )

    @staticmethod
    def custom_g(g, g_prime, *, deriv_const=None) -> "GeneratorSpec":
        """Custom quantile generator; g must be nondecreasing."""
        return GeneratorSpec(
            kind="custom",
            family="g",
            value=g,
            derivative=g_prime,
            deriv_const=deriv_const,
        )

    @staticmethod
    def custom_phi(phi, phi_prime, phi_second, *, deriv_const=None) -> "GeneratorSpec":
        """Custom expectile or Huber generator; phi must be convex."""
        return GeneratorSpec(
            kind="custom",
            family="phi",
            value=phi,
            derivative=phi_prime,
            second_derivative=phi_second,
            deriv_const=deriv_const,
        )


def check_generator(gen: GeneratorSpec, lo=-100.0, hi=100.0, points=201) -> None:
    """Probe monotonicity (g) or convexity (phi) on a grid; raise if violated."""
    grid = np.linspace(lo, hi, points)
    if gen.family == "g":
        d = np.asarray(gen.derivative(grid), dtype=float)
        if np.any(d < -1e-12):
            t = grid[np.argmin(d)]
            raise ValidationError(
                f"generator is decreasing near t={t:.6g} (g'={d.min():.3e})"
            )
    elif gen.family == "phi":
        if gen.second_derivative is None:
            raise ValidationError("phi generator needs a second derivative")
        d = np.asarray(gen.second_derivative(grid), dtype=float)
        if np.any(d < -1e-12):
            t = grid[np.argmin(d)]
            raise ValidationError(
                f"generator is concave near t={t:.6g} (phi''={d.min():.3e})"
            )
    else:
        raise ValidationError(f"unknown generator family {gen.family!r}")


@dataclass(frozen=True)
class ScoringSpec:
    """A functional plus the generator that scores it.

    ``alpha`` is the quantile or expectile level in (0, 1); ``nu`` is
    the positive Huber cap.  The generator family must match the
    functional: "g" for quantiles, "phi" otherwise.
    """

    functional: str
    generator: GeneratorSpec
    alpha: float | None = None
    nu: float | None = None

    def __post_init__(self):
        if self.functional not in FUNCTIONALS:
            raise ValidationError(
                f"unknown functional {self.functional!r}, expected one of "
                f"{FUNCTIONALS}"
            )
        if self.functional in ("quantile", "expectile"):
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise ValidationError(
                    f"{self.functional} level alpha must lie in (0, 1), "
                    f"got {self.alpha!r}"
                )
            if self.nu is not None:
                raise ValidationError(f"{self.functional} takes no cap nu")
        else:
            if self.nu is None or not self.nu > 0:
                raise ValidationError(
                    f"Huber cap nu must be positive, got {self.nu!r}"
                )
            if self.alpha is not None:
                raise ValidationError("huber_mean takes no level alpha")
        wanted = "g" if self.functional == "quantile" else "phi"
        if self.generator.family != wanted:
            raise ValidationError(
                f"{self.functional} needs a {wanted!r}-family generator, "
                f"got {self.generator.family!r}"
            )
        if self.generator.kind == "custom":
            check_generator(self.generator)

    def describe(self) -> dict:
        """Compact echo used in reports."""
        out = {"functional": self.functional, "generator": self.generator.kind}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.nu is not None:
            out["nu"] = self.nu
        return out


def score(spec: ScoringSpec, x, y):
    """Evaluate the scoring function at forecasts x and observations y.

    Vectorized; x and y broadcast against each other.  Scalar inputs
    return a float.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
        raise ValidationError("forecasts and observations must be finite")
    gen = spec.generator
    ind = (y < x).astype(float)
    if spec.functional == "quantile":
        out = (ind - spec.alpha) * (gen.value(x) - gen.value(y))
    elif spec.functional == "expectile":
        out = np.abs(ind - spec.alpha) * (
            gen.value(y) - gen.value(x) - gen.derivative(x) * (y - x)
        )
    else:
        k = np.clip(x - y, -spec.nu, spec.nu)
        out = 0.5 * (gen.value(y) - gen.value(k + y) + k * gen.derivative(x))
    if out.ndim == 0:
        return float(out)
    return out


class DiscreteDistribution:
    """Finite discrete distribution given by support points and masses.

    Values are sorted, duplicates merged, and probabilities normalized
    to sum to one exactly.
    """

    def __init__(self, values, probs):
        v = np.atleast_1d(np.asarray(values, dtype=float))
        p = np.atleast_1d(np.asarray(probs, dtype=float))
        if v.shape != p.shape or v.ndim != 1 or v.size == 0:
            raise ValidationError("values and probs must be equal-length 1d arrays")
        if not np.all(np.isfinite(v)):
            raise ValidationError("support points must be finite")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValidationError("probabilities must be finite and nonnegative")
        total = p.sum()
        if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
            raise ValidationError(f"probabilities sum to {total!r}, expected 1")
        keep = p > 0
        v, p = v[keep], p[keep]
        order = np.argsort(v, kind="stable")
        v, p = v[order], p[order]
        keep_vals, keep_probs = [v[0]], [p[0]]
        for vi, pi in zip(v[1:], p[1:]):
            if vi == keep_vals[-1]:
                keep_probs[-1] += pi
            else:
                keep_vals.append(vi)
                keep_probs.append(pi)
        self.values = np.asarray(keep_vals)
        self.probs = np.asarray(keep_probs)
        self.probs = self.probs / self.probs.sum()

    def __repr__(self):
        return f"DiscreteDistribution({self.values.tolist()}, {self.probs.tolist()})"

    def mean(self) -> float:
        return float(self.values @ self.probs)

    def expected_score(self, spec: ScoringSpec, x):
        """E[score(spec, x, Y)] for a grid of forecasts x, vectorized."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        s = score(spec, x[:, None], self.values[None, :])
        out = np.asarray(s) @ self.probs
        return out

    def sample(self, rng: np.random.Generator, size: int):
        return rng.choice(self.values, size=size, p=self.probs)


@dataclass(frozen=True)
class FunctionalValue:
    """A functional of a distribution, with its full solution interval.

    ``value`` is the representative point: the lower endpoint for
    quantiles, the unique root for expectiles, the interval midpoint for
    Huber means.  ``lower`` and ``upper`` bound the set of points at
    which the functional is attained; they coincide when the solution is
    unique.
    """

    value: float
    lower: float
    upper: float


def _quantile_value(dist: DiscreteDistribution, alpha: float) -> FunctionalValue:
    cum = np.cumsum(dist.probs)
    tol = 1e-12
    idx = int(np.searchsorted(cum, alpha - tol))
    idx = min(idx, dist.values.size - 1)
    lo = float(dist.values[idx])
    if abs(cum[idx] - alpha) <= tol and idx + 1 < dist.values.size:
        hi = float(dist.values[idx + 1])
    else:
        hi = lo
    return FunctionalValue(lo, lo, hi)


def _expectile_value(dist: DiscreteDistribution, alpha: float) -> FunctionalValue:
    v, p = dist.values, dist.probs

    def ident(x):
        above = np.maximum(v - x, 0.0) @ p
        below = np.maximum(x - v, 0.0) @ p
        return alpha * above - (1.0 - alpha) * below

    lo, hi = float(v[0]), float(v[-1])
    if lo == hi:
        return FunctionalValue(lo, lo, lo)
    root = float(optimize.brentq(ident, lo, hi, xtol=1e-13, rtol=8.9e-16))
    return FunctionalValue(root, root, root)


def _huber_value(dist: DiscreteDistribution, nu: float) -> FunctionalValue:
    v, p = dist.values, dist.probs

    def ident(x):
        return float(np.clip(v - x, -nu, nu) @ p)

    span = max(1.0, float(v[-1] - v[0]))
    lo, hi = float(v[0]) - nu, float(v[-1]) + nu

    def boundary(keep_positive: bool):
        a, b = lo, hi
        for _ in range(200):
            if b - a <= 1e-14 * span:
                break
            m = 0.5 * (a + b)
            val = ident(m)
            if (val > 0.0) if keep_positive else (val >= 0.0):
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    left = boundary(keep_positive=True)
    right = boundary(keep_positive=False)
    if right < left:  # single crossing, both bisections met at the root
        left = right = 0.5 * (left + right)
    return FunctionalValue(0.5 * (left + right), left, right)


def functional_value(spec: ScoringSpec, dist: DiscreteDistribution) -> FunctionalValue:
    """The quantile, expectile, or Huber mean of a discrete distribution.

    Quantiles use the generalized inverse and report the full interval
    when the level is hit exactly; expectiles are the unique root of the
    asymmetric identification function; Huber means are the root set of
    the capped identification function, found by bisection.
    """
    if spec.functional == "quantile":
        return _quantile_value(dist, spec.alpha)
    if spec.functional == "expectile":
        return _expectile_value(dist, spec.alpha)
    return _huber_value(dist, spec.nu)


# --- common ready-made specs ------------------------------------------------


def quantile_score(alpha: float) -> ScoringSpec:
    """Pinball loss at level alpha (generator g(t) = t)."""
    return ScoringSpec("quantile", GeneratorSpec.identity_g(), alpha=alpha)


def absolute_error() -> ScoringSpec:
    """|x - y| as the median's scoring function (g(t) = 2t at level 1/2)."""
    gen = GeneratorSpec.custom_g(
        lambda t: 2.0 * np.asarray(t, dtype=float),
        lambda t: np.full_like(np.asarray(t, dtype=float), 2.0),
        deriv_const=2.0,
    )
    return ScoringSpec("quantile", gen, alpha=0.5)


def expectile_score(alpha: float) -> ScoringSpec:
    """Asymmetric squared error at level alpha (phi(t) = 2t^2)."""
    return ScoringSpec("expectile", GeneratorSpec.scaled_quadratic_phi(), alpha=alpha)


def squared_error() -> ScoringSpec:
    """(x - y)^2 as the mean's scoring function."""
    return expectile_score(0.5)


def huber_loss(nu: float) -> ScoringSpec:
    """Classic Huber loss with cap nu (phi(t) = t^2)."""
    return ScoringSpec("huber_mean", GeneratorSpec.quadratic_phi(), nu=nu)
