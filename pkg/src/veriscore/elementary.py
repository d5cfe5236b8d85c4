"""Elementary scores, Murphy diagrams, and mixture representations.

Every consistent score in this library is a nonnegative mixture of
elementary scores indexed by a threshold theta.  The elementary score
charges a forecast x only when theta separates x from the observation
y; the mixing measure has density g'(theta) for quantiles and
phi''(theta) for expectiles and Huber means, multiplied by the region
weight when a weighted component is being represented.

``murphy_curve`` averages the elementary score over forecast cases on
a grid of thresholds, one curve per forecast system.  Plotting the
curves against theta shows for which thresholds one system dominates
another; integrating a curve against a mixing density recovers the
mean score under the corresponding generator, which ``murphy_area``
does numerically.

``verify_mixture`` checks the mixture representation for one forecast
case by integrating elementary score times mixing density with a
composite Simpson rule split at the integrand's kinks, and comparing
against the directly evaluated score.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .decomposition import region_generator
from .errors import ValidationError
from .io import fmt12
from .partition import WeightFunction
from .scoring import FUNCTIONALS, ScoringSpec, score

__all__ = [
    "elementary_score",
    "MurphyCurve",
    "murphy_curve",
    "murphy_area",
    "write_murphy_csv",
    "write_murphy_meta",
    "MixtureCheck",
    "verify_mixture",
]


def _check_params(functional: str, alpha, nu) -> tuple:
    if functional not in FUNCTIONALS:
        raise ValidationError(
            f"unknown functional {functional!r}, expected one of {FUNCTIONALS}"
        )
    if functional in ("quantile", "expectile"):
        if alpha is None:
            raise ValidationError(f"{functional} elementary score needs alpha")
        alpha = float(alpha)
        if not 0.0 < alpha < 1.0:
            raise ValidationError(f"alpha must be in (0, 1), got {alpha}")
        return alpha, None
    if nu is None:
        raise ValidationError(f"{functional} elementary score needs nu")
    nu = float(nu)
    if not (np.isfinite(nu) and nu > 0.0):
        raise ValidationError(f"nu must be positive and finite, got {nu}")
    return None, nu


def elementary_score(functional: str, theta, x, y, *, alpha=None, nu=None):
    """Elementary score at threshold theta, broadcast over all inputs.

    The score is zero unless theta lies between forecast and
    observation (thresholds are attributed to the half-open interval
    [min, max)).  Quantiles charge a flat rate 1-alpha or alpha
    depending on the side, expectiles scale that rate by the distance
    |y - theta|, and Huber means charge the distance capped at nu and
    halved.
    """
    alpha, nu = _check_params(functional, alpha, nu)
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    under = (y <= theta) & (theta < x)  # forecast above, observation below
    over = (x <= theta) & (theta < y)
    if functional == "quantile":
        out = np.where(under, 1.0 - alpha, 0.0) + np.where(over, alpha, 0.0)
    elif functional == "expectile":
        dist = np.abs(y - theta)
        out = np.where(under, (1.0 - alpha) * dist, 0.0) + np.where(
            over, alpha * dist, 0.0
        )
    else:
        capped = 0.5 * np.minimum(np.abs(y - theta), nu)
        out = np.where(under | over, capped, 0.0)
    return float(out) if out.ndim == 0 else out


def _as_xy(cases) -> tuple[np.ndarray, np.ndarray]:
    """Forecast/observation arrays from a case container.

    Accepts an object with ``forecasts`` and ``observations`` arrays, a
    pair (forecasts, observations), or an iterable of objects carrying
    ``forecast`` and ``observation`` attributes.
    """
    if hasattr(cases, "forecasts") and hasattr(cases, "observations"):
        x = np.asarray(cases.forecasts, dtype=float)
        y = np.asarray(cases.observations, dtype=float)
    elif isinstance(cases, tuple) and len(cases) == 2:
        x = np.atleast_1d(np.asarray(cases[0], dtype=float))
        y = np.atleast_1d(np.asarray(cases[1], dtype=float))
    else:
        pairs = [(c.forecast, c.observation) for c in cases]
        if not pairs:
            raise ValidationError("empty forecast case collection")
        arr = np.asarray(pairs, dtype=float)
        x, y = arr[:, 0], arr[:, 1]
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise ValidationError(
            "forecasts and observations must be equal-length non-empty arrays"
        )
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValidationError("forecasts and observations must be finite")
    return x, y


@dataclass(frozen=True)
class MurphyCurve:
    """Mean elementary scores on a threshold grid, one row per system."""

    functional: str
    alpha: float | None
    nu: float | None
    thresholds: np.ndarray
    names: tuple[str, ...]
    means: np.ndarray  # shape (len(names), len(thresholds))

    def mean_for(self, name: str) -> np.ndarray:
        try:
            return self.means[self.names.index(name)]
        except ValueError:
            raise ValidationError(
                f"no system named {name!r}, have {list(self.names)}"
            ) from None


def _resolve_grid(grid, x_all: np.ndarray, y_all: np.ndarray) -> np.ndarray:
    if grid is None or isinstance(grid, (int, np.integer)):
        n = 501 if grid is None else int(grid)
        if n < 2:
            raise ValidationError("threshold grid needs at least 2 points")
        lo = min(x_all.min(), y_all.min())
        hi = max(x_all.max(), y_all.max())
        span = hi - lo
        pad = 0.05 * span if span > 0 else 1.0
        return np.linspace(lo - pad, hi + pad, n)
    arr = np.asarray(grid, dtype=float)
    if arr.ndim == 1 and arr.size == 3 and arr[2] == round(arr[2]) and arr[2] >= 2:
        lo, hi, n = float(arr[0]), float(arr[1]), int(arr[2])
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValidationError(f"bad threshold range ({lo}, {hi})")
        return np.linspace(lo, hi, n)
    if arr.ndim == 1 and arr.size >= 2 and np.all(np.isfinite(arr)):
        if not np.all(np.diff(arr) > 0):
            raise ValidationError("explicit threshold grid must be strictly ascending")
        return arr.astype(float)
    raise ValidationError(
        "grid must be None, a point count, (lo, hi, n), or an ascending array"
    )


def murphy_curve(
    systems,
    functional: str,
    *,
    alpha=None,
    nu=None,
    grid=None,
) -> MurphyCurve:
    """Mean elementary score per system on a shared threshold grid.

    ``systems`` maps names to forecast cases: a dict, or a sequence of
    (name, cases) pairs, where cases is anything ``_as_xy`` accepts.
    ``grid`` defaults to 501 thresholds spanning all forecasts and
    observations with 5 percent padding; an int changes the count, a
    (lo, hi, n) triple or an ascending array fixes it exactly.
    """
    if isinstance(systems, dict):
        items = list(systems.items())
    else:
        items = [(str(name), cases) for name, cases in systems]
    if not items:
        raise ValidationError("murphy_curve needs at least one forecast system")
    names = tuple(name for name, _ in items)
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate system names in {names}")
    alpha_v, nu_v = _check_params(functional, alpha, nu)
    data = [_as_xy(cases) for _, cases in items]
    thresholds = _resolve_grid(
        grid,
        np.concatenate([x for x, _ in data]),
        np.concatenate([y for _, y in data]),
    )
    means = np.empty((len(items), thresholds.size))
    for i, (x, y) in enumerate(data):
        vals = elementary_score(
            functional, thresholds[:, None], x[None, :], y[None, :],
            alpha=alpha_v, nu=nu_v,
        )
        means[i] = vals.mean(axis=1)
    return MurphyCurve(
        functional=functional,
        alpha=alpha_v,
        nu=nu_v,
        thresholds=thresholds,
        names=names,
        means=means,
    )


def murphy_area(curve_or_thresholds, means=None, density=None) -> float | np.ndarray:
    """Trapezoid integral of mean elementary score times mixing density.

    Call either as ``murphy_area(curve, density=...)`` to integrate
    every system curve at once, or with explicit threshold and mean
    arrays.  ``density`` defaults to the Lebesgue mixing density 1
    (the quantile case with g(t) = t); pass phi'' for expectile or
    Huber generators.  The grid must cover the integrand's support for
    the area to approximate the mean score.
    """
    if isinstance(curve_or_thresholds, MurphyCurve):
        curve = curve_or_thresholds
        thresholds, values = curve.thresholds, curve.means
    else:
        thresholds = np.asarray(curve_or_thresholds, dtype=float)
        values = np.asarray(means, dtype=float)
    if density is None:
        dens = np.ones_like(thresholds)
    else:
        dens = np.asarray(density(thresholds), dtype=float)
    area = np.asarray(trapezoid(values * dens, thresholds, axis=-1))
    return float(area) if area.ndim == 0 else area


def write_murphy_csv(curve: MurphyCurve, path) -> None:
    """Threshold grid and per-system means, 12 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["theta"] + [f"{name}_mean" for name in curve.names])
        for k, theta in enumerate(curve.thresholds):
            writer.writerow([fmt12(theta)] + [fmt12(v) for v in curve.means[:, k]])


def write_murphy_meta(curve: MurphyCurve, path, weight=None) -> None:
    """JSON sidecar describing how the curve was computed."""
    meta = {
        "functional": curve.functional,
        "alpha": curve.alpha,
        "nu": curve.nu,
        "grid": {
            "lo": float(curve.thresholds[0]),
            "hi": float(curve.thresholds[-1]),
            "n": int(curve.thresholds.size),
        },
        "systems": list(curve.names),
        "weight": weight.config() if weight is not None else None,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=False)
        fh.write("\n")


@dataclass(frozen=True)
class MixtureCheck:
    """Direct score, its mixture integral, and their difference."""

    direct: float
    mixture: float

    @property
    def residual(self) -> float:
        return abs(self.direct - self.mixture)


def _simpson(f, lo: float, hi: float, panels: int) -> float:
    # composite Simpson rule; panels must be even.  Endpoint samples are
    # nudged inside the interval so that weight jumps sitting exactly on
    # a split point are read from the correct side.
    t = np.linspace(lo, hi, panels + 1)
    shrink = (hi - lo) * 1e-12
    t[0] += shrink
    t[-1] -= shrink
    v = f(t)
    return (hi - lo) / (3.0 * panels) * (
        v[0] + v[-1] + 4.0 * v[1:-1:2].sum() + 2.0 * v[2:-1:2].sum()
    )


def verify_mixture(
    spec: ScoringSpec,
    x: float,
    y: float,
    *,
    weight: WeightFunction | None = None,
    max_step: float = 0.02,
    min_panels: int = 64,
) -> MixtureCheck:
    """Compare a score against its elementary mixture integral.

    The integrand is elementary score times mixing density (times the
    region weight when one is given); it lives on [min(x, y), max(x, y)]
    and is smooth except at the Huber kinks y +- nu and the weight's
    breakpoints, so the integration range is split there and each piece
    gets a composite Simpson rule with step at most ``max_step``.
    """
    x, y = float(x), float(y)
    if not (np.isfinite(x) and np.isfinite(y)):
        raise ValidationError("forecast and observation must be finite")
    if weight is None:
        direct = float(score(spec, x, y))
    else:
        direct = float(region_generator(spec, weight).score(x, y))
    if x == y:
        return MixtureCheck(direct=direct, mixture=0.0)

    gen = spec.generator
    if spec.functional == "quantile":
        density = gen.derivative
    else:
        density = gen.second_derivative

    # Between min(x, y) and max(x, y) the elementary score equals one
    # smooth closed form (its interior limit), so the integrand is only
    # evaluated through that form; the half-open boundary convention is
    # Lebesgue-null and would otherwise poison the endpoint samples.
    nu = spec.nu
    if spec.functional == "huber_mean":
        rate = None
    else:
        rate = (1.0 - spec.alpha) if y < x else spec.alpha

    def integrand(theta):
        if spec.functional == "quantile":
            base = np.full_like(theta, rate)
        elif spec.functional == "expectile":
            base = rate * np.abs(y - theta)
        else:
            base = 0.5 * np.minimum(np.abs(y - theta), nu)
        base = base * density(theta)
        if weight is not None:
            base = base * weight(theta)
        return base

    lo, hi = (x, y) if x < y else (y, x)
    cuts = {lo, hi}
    if spec.functional == "huber_mean":
        for kink in (y - spec.nu, y + spec.nu):
            if lo < kink < hi:
                cuts.add(kink)
    if weight is not None:
        for knot in weight.finite_knots():
            if lo < knot < hi:
                cuts.add(float(knot))
    edges = sorted(cuts)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        panels = max(min_panels, math.ceil((b - a) / max_step))
        panels += panels % 2
        total += _simpson(integrand, a, b, panels)
    return MixtureCheck(direct=direct, mixture=total)
