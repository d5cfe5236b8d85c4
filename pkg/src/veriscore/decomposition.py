"""Splitting a consistent score into per-region components.

Given a partition of unity chi_1, ..., chi_k and a scoring function
with generator g (quantiles) or phi (expectiles, Huber means), each
region j gets its own generator by integrating the weighted derivative
from an anchor point u_j:

    g_j(u)   = integral of chi_j * g''... for quantiles, of chi_j * g'
               from u_j to u,
    phi_j(u) = double integral of chi_j * phi'' (first from the anchor
               to v, then from the anchor to u),

so g = sum g_j and phi = sum phi_j up to affine terms that no score in
these families can see.  Scoring each region with its own generator
yields components S_j with sum_j S_j = S.  Each component is itself a
consistent scoring function for the same functional, is nonnegative,
and vanishes identically on any interval its weight does not touch.
Strictly positive weights (the arctan pair) keep strict consistency.

Closed forms
------------
When the weighted derivative chi_j * (g' or phi'') is piecewise linear,
its antiderivatives are exact piecewise polynomials; with the arctan
weights they are elementary functions.  Both cases are available
whenever the weight carries exact antiderivatives and the generator's
relevant derivative is a constant (all built-in generators).  Scores
are then evaluated through difference forms that never reference the
anchor, so components cancel *exactly*, not merely to rounding, for
forecast and observation on the same side outside the weight's support.

Everything else falls back to adaptive quadrature with target absolute
tolerance ``quad_tol`` (default 1e-10); a result whose error estimate
exceeds 1e-7 * max(1, |value|) raises :class:`NumericError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import NumericError, ValidationError
from .partition import PartitionOfUnity, WeightFunction
from .scoring import ScoringSpec, score

__all__ = [
    "RegionGenerator",
    "ClosedFormInfo",
    "DecomposedScore",
    "region_generator",
    "decompose",
    "score_components",
    "score_decomposed",
]

QUAD_TOL_DEFAULT = 1e-10


@dataclass(frozen=True)
class ClosedFormInfo:
    """Description of an exact component evaluation path."""

    weight_kind: str
    deriv_const: float
    knots: tuple[float, ...]
    anchor: float


@dataclass(frozen=True)
class DecomposedScore:
    """Per-region components plus the directly evaluated total.

    ``total`` is score(spec, x, y) itself; the components sum back to it
    within floating-point rounding.
    """

    per_component: np.ndarray
    total: float | np.ndarray

    @property
    def component_sum(self):
        return self.per_component.sum(axis=0)


def _default_anchor(weight: WeightFunction) -> float:
    lo, hi = weight.support()
    if math.isfinite(lo):
        return float(lo)
    return 0.0


class RegionGenerator:
    """The generator of one score component: a weight applied to a base.

    ``value(u)`` is g_j(u) or phi_j(u) anchored at ``anchor``;
    ``derivative(u)`` is phi_j'(u) for phi-family bases.  Scoring goes
    through anchor-free difference forms (see module docstring).
    """

    def __init__(
        self,
        spec: ScoringSpec,
        weight: WeightFunction,
        *,
        anchor: float | None = None,
        quad_tol: float = QUAD_TOL_DEFAULT,
    ):
        if not isinstance(spec, ScoringSpec):
            raise ValidationError("spec must be a ScoringSpec")
        if not isinstance(weight, WeightFunction):
            raise ValidationError("weight must be a WeightFunction")
        self.spec = spec
        self.weight = weight
        self.anchor = float(anchor) if anchor is not None else _default_anchor(weight)
        if not math.isfinite(self.anchor):
            raise ValidationError("anchor must be finite")
        self.quad_tol = float(quad_tol)
        self._closed = (
            weight.has_exact_integrals and spec.generator.deriv_const is not None
        )

    @property
    def has_closed_form(self) -> bool:
        return self._closed

    @property
    def closed_form(self) -> ClosedFormInfo | None:
        if not self._closed:
            return None
        return ClosedFormInfo(
            weight_kind=self.weight.kind,
            deriv_const=float(self.spec.generator.deriv_const),
            knots=self.weight.finite_knots(),
            anchor=self.anchor,
        )

    # -- weighted derivative of the base generator ------------------------

    def _density(self, t):
        gen = self.spec.generator
        d = gen.derivative(t) if gen.family == "g" else gen.second_derivative(t)
        return np.asarray(d, dtype=float) * self.weight(t)

    def _quad(self, lo: float, hi: float) -> float:
        if lo == hi:
            return 0.0
        sign = 1.0
        if hi < lo:
            lo, hi, sign = hi, lo, -1.0
        pts = [k for k in self.weight.finite_knots() if lo < k < hi]
        val, err = integrate.quad(
            lambda t: float(self._density(np.asarray([t]))[0]),
            lo,
            hi,
            points=pts or None,
            epsabs=self.quad_tol,
            epsrel=1e-10,
            limit=300,
        )
        if err > 1e-7 * max(1.0, abs(val)):
            raise NumericError(
                f"component quadrature on [{lo}, {hi}] achieved error "
                f"{err:.2e} only"
            )
        return sign * val

    # -- anchored pointwise evaluation -------------------------------------

    def value(self, u):
        """g_j(u) for g-family bases, phi_j(u) for phi-family bases."""
        u = np.asarray(u, dtype=float)
        c = self.spec.generator.deriv_const
        if self._closed:
            w = self.weight
            a = self.anchor
            if self.spec.generator.family == "g":
                out = c * (w.antideriv(u) - w.antideriv(a))
            else:
                out = c * (
                    w.antideriv2(u) - w.antideriv2(a) - w.antideriv(a) * (u - a)
                )
            return float(out) if out.ndim == 0 else out
        if self.spec.generator.family == "g":
            flat = np.atleast_1d(u).ravel()
            vals = np.array([self._quad(self.anchor, t) for t in flat])
        else:
            flat = np.atleast_1d(u).ravel()
            vals = np.empty(flat.size)
            for i, t in enumerate(flat):
                lo, hi, sign = self.anchor, float(t), 1.0
                if hi < lo:
                    lo, hi, sign = hi, lo, -1.0
                if lo == hi:
                    vals[i] = 0.0
                    continue
                val, err = integrate.quad(
                    lambda v: self._derivative_scalar(v),
                    lo,
                    hi,
                    epsabs=self.quad_tol,
                    epsrel=1e-10,
                    limit=300,
                )
                if err > 1e-7 * max(1.0, abs(val)):
                    raise NumericError(
                        f"nested component quadrature achieved error {err:.2e} only"
                    )
                vals[i] = sign * val
        out = vals.reshape(np.shape(u))
        return float(out) if out.ndim == 0 else out

    def _derivative_scalar(self, u: float) -> float:
        return self._quad(self.anchor, float(u))

    def derivative(self, u):
        """phi_j'(u); defined for phi-family bases only."""
        if self.spec.generator.family != "phi":
            raise ValidationError("derivative() applies to phi-family bases only")
        u = np.asarray(u, dtype=float)
        c = self.spec.generator.deriv_const
        if self._closed:
            w = self.weight
            out = c * (w.antideriv(u) - w.antideriv(self.anchor))
            return float(out) if out.ndim == 0 else out
        flat = np.atleast_1d(u).ravel()
        vals = np.array([self._quad(self.anchor, t) for t in flat])
        out = vals.reshape(np.shape(u))
        return float(out) if out.ndim == 0 else out

    # -- anchor-free score forms -------------------------------------------

    def _gdiff(self, x, y):
        # g_j(x) - g_j(y)
        if self._closed:
            c = self.spec.generator.deriv_const
            w = self.weight
            return c * (w.antideriv(x) - w.antideriv(y))
        flat_x = np.atleast_1d(x).ravel()
        flat_y = np.atleast_1d(y).ravel()
        vals = np.array(
            [self._quad(fy, fx) for fx, fy in zip(flat_x, flat_y)]
        )
        return vals.reshape(np.shape(x))

    def _bregman(self, x, y):
        # phi_j(y) - phi_j(x) - phi_j'(x) * (y - x), computed without the
        # anchor so that it cancels exactly off-support
        if self._closed:
            c = self.spec.generator.deriv_const
            w = self.weight
            return c * (w.double_integral(x, y) - w.antideriv(x) * (y - x))
        flat_x = np.atleast_1d(x).ravel()
        flat_y = np.atleast_1d(y).ravel()
        out = np.empty(flat_x.size)
        for i, (fx, fy) in enumerate(zip(flat_x, flat_y)):
            lo, hi = (fx, fy) if fx <= fy else (fy, fx)
            if lo == hi:
                out[i] = 0.0
                continue
            pts = [k for k in self.weight.finite_knots() if lo < k < hi]
            val, err = integrate.quad(
                lambda t: float(self._density(np.asarray([t]))[0]) * abs(fy - t),
                lo,
                hi,
                points=pts or None,
                epsabs=self.quad_tol,
                epsrel=1e-10,
                limit=300,
            )
            if err > 1e-7 * max(1.0, abs(val)):
                raise NumericError(
                    f"component quadrature on [{lo}, {hi}] achieved error "
                    f"{err:.2e} only"
                )
            out[i] = val
        return out.reshape(np.shape(x))

    def _huber_form(self, x, y, nu):
        # 0.5 * (phi_j(y) - phi_j(z) + k * phi_j'(x)) with z = y + k,
        # k = cap(x - y, nu).  The recomputed difference d = z - y is used
        # in place of k (they differ by at most one ulp of y), which makes
        # the form anchor-free and exactly zero off-support.
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        k = np.clip(x - y, -nu, nu)
        z = y + k
        d = z - y
        if self._closed:
            c = self.spec.generator.deriv_const
            w = self.weight
            return 0.5 * c * (d * w.antideriv(x) - w.double_integral(y, z))
        flat_x = np.atleast_1d(x).ravel()
        flat_y = np.atleast_1d(y).ravel()
        out = np.empty(flat_x.size)
        for i, (fx, fy) in enumerate(zip(flat_x, flat_y)):
            lo, hi = (fx, fy) if fx <= fy else (fy, fx)
            if lo == hi:
                out[i] = 0.0
                continue
            kinks = set(self.weight.finite_knots())
            kinks.update((fy - nu, fy + nu))
            pts = sorted(p for p in kinks if lo < p < hi)
            val, err = integrate.quad(
                lambda t: float(self._density(np.asarray([t]))[0])
                * 0.5
                * min(abs(t - fy), nu),
                lo,
                hi,
                points=pts or None,
                epsabs=self.quad_tol,
                epsrel=1e-10,
                limit=300,
            )
            if err > 1e-7 * max(1.0, abs(val)):
                raise NumericError(
                    f"component quadrature on [{lo}, {hi}] achieved error "
                    f"{err:.2e} only"
                )
            out[i] = val
        return out.reshape(np.shape(x))

    def score(self, x, y):
        """This region's score component, vectorized like score()."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x, y = np.broadcast_arrays(x, y)
        spec = self.spec
        ind = (y < x).astype(float)
        if spec.functional == "quantile":
            out = (ind - spec.alpha) * self._gdiff(x, y)
        elif spec.functional == "expectile":
            out = np.abs(ind - spec.alpha) * self._bregman(x, y)
        else:
            out = self._huber_form(x, y, spec.nu)
        out = np.asarray(out)
        return float(out) if out.ndim == 0 else out


def region_generator(
    spec: ScoringSpec,
    weight: WeightFunction,
    *,
    anchor: float | None = None,
    quad_tol: float = QUAD_TOL_DEFAULT,
) -> RegionGenerator:
    """Build the component generator for a single weight."""
    return RegionGenerator(spec, weight, anchor=anchor, quad_tol=quad_tol)


def decompose(
    spec: ScoringSpec,
    partition: PartitionOfUnity,
    *,
    anchors=None,
    quad_tol: float = QUAD_TOL_DEFAULT,
) -> tuple[RegionGenerator, ...]:
    """Component generators for every weight of a partition.

    ``anchors`` optionally overrides the per-weight anchor points; score
    components do not depend on them (only the anchored pointwise values
    do).
    """
    if anchors is None:
        anchors = [None] * len(partition)
    anchors = list(anchors)
    if len(anchors) != len(partition):
        raise ValidationError(
            f"got {len(anchors)} anchors for {len(partition)} weights"
        )
    return tuple(
        RegionGenerator(spec, w, anchor=a, quad_tol=quad_tol)
        for w, a in zip(partition, anchors)
    )


def score_components(regions, x, y) -> np.ndarray:
    """Stack of component scores, shape (n_regions,) + broadcast(x, y)."""
    regions = tuple(regions)
    if not regions:
        raise ValidationError("need at least one region generator")
    return np.stack([np.asarray(r.score(x, y)) for r in regions])


def score_decomposed(regions, x, y) -> DecomposedScore:
    """Components together with the directly evaluated total score."""
    regions = tuple(regions)
    parts = score_components(regions, x, y)
    total = score(regions[0].spec, x, y)
    return DecomposedScore(per_component=parts, total=total)
