"""Forecast system comparison and two simulation studies.

``compare`` pairs two forecast systems case by case, scores both with
the same scoring function (optionally decomposed over a partition of
unity), and attaches a confidence interval to each mean score
difference.  Positive differences mean the second system scored
better (lower).

``generate_synthetic`` draws a climatological observation series and
two synthetic forecast systems around it: system A carries an error
whose spread grows with the observed value through an arctan ramp,
system B carries homoscedastic errors.  Overall the two systems are
close to indistinguishable in mean score, while region components
separate them sharply on either side of the ramp center.

``simulate_hedging`` reproduces a forecaster who games event-selection
rules for extreme-event verification.  Four selection rules (assess
when the observation, either forecast, any of the two, or only the
rival forecast exceeds a threshold) each get the submitting system's
optimal strategy; a fifth rule scores every event with the
upper-region component of squared error and removes the incentive.

Randomness
----------
Every simulation derives named substreams from one integer seed via
``stream_rng``; the stream table below fixes the substream indices, so
results are reproducible and individual streams can be re-drawn in
isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, truncnorm

from .decomposition import decompose, region_generator, score_components
from .errors import ValidationError
from .io import CaseSet, round12
from .partition import PartitionOfUnity, RectangularWeight, partition_config
from .scoring import ScoringSpec, score, squared_error

__all__ = [
    "STREAMS",
    "stream_rng",
    "case_scores",
    "ComparisonReport",
    "compare",
    "SyntheticConfig",
    "generate_synthetic",
    "truncated_normal_mean",
    "lognormal_mean",
    "lognormal_tail_mean",
    "StrategyResult",
    "HedgingReport",
    "simulate_hedging",
]

STREAMS = {
    "synthetic": {"observations": 0, "errors_a": 1, "errors_b": 2},
    "hedging": {"situations": 0, "observations": 1, "rival": 2},
    "comparison": {"bootstrap": 3},
}


def stream_rng(seed: int, group: str, name: str) -> np.random.Generator:
    """Independent generator for one named substream of a seed."""
    try:
        index = STREAMS[group][name]
    except KeyError:
        raise ValidationError(
            f"unknown stream {group!r}/{name!r}; see STREAMS"
        ) from None
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def case_scores(spec: ScoringSpec, cases: CaseSet, partition=None, *, quad_tol=None):
    """Per-case total scores and, with a partition, their components.

    Returns (totals, components) where totals has one entry per case
    and components has one row per partition member, or None.
    """
    totals = np.asarray(score(spec, cases.forecasts, cases.observations))
    if partition is None:
        return totals, None
    partition.domain.require(cases.forecasts, "forecast")
    partition.domain.require(cases.observations, "observation")
    kwargs = {} if quad_tol is None else {"quad_tol": quad_tol}
    regions = decompose(spec, partition, **kwargs)
    comps = score_components(regions, cases.forecasts, cases.observations)
    return totals, comps


@dataclass(frozen=True)
class ComparisonReport:
    """Paired mean-score comparison of two forecast systems.

    ``mean_diff`` is mean score of the first system minus the second;
    positive values favor the second system.  Component entries follow
    the partition order and are None when no partition was used.
    """

    label_a: str
    label_b: str
    n: int
    spec: ScoringSpec
    partition: PartitionOfUnity | None
    mean_a: float
    mean_b: float
    mean_components_a: np.ndarray | None
    mean_components_b: np.ndarray | None
    mean_diff: float
    mean_diff_components: np.ndarray | None
    ci_total: tuple[float, float]
    ci_components: np.ndarray | None
    ci_method: str
    ci_level: float
    bootstrap_samples: int | None
    seed: int | None

    def to_dict(self) -> dict:
        def arr(a):
            return None if a is None else [round12(v) for v in np.asarray(a).ravel()]

        def pair_rows(a):
            if a is None:
                return None
            return [[round12(lo), round12(hi)] for lo, hi in np.asarray(a)]

        ci = {
            "method": self.ci_method,
            "level": self.ci_level,
            "total": [round12(self.ci_total[0]), round12(self.ci_total[1])],
            "components": pair_rows(self.ci_components),
        }
        if self.ci_method == "bootstrap":
            ci["bootstrap_samples"] = self.bootstrap_samples
            ci["seed"] = self.seed
        return {
            "labels": [self.label_a, self.label_b],
            "n": self.n,
            "score": self.spec.describe(),
            "partition": (
                None if self.partition is None else partition_config(self.partition)
            ),
            "means": {
                self.label_a: {
                    "total": round12(self.mean_a),
                    "components": arr(self.mean_components_a),
                },
                self.label_b: {
                    "total": round12(self.mean_b),
                    "components": arr(self.mean_components_b),
                },
            },
            "difference": {
                "total": round12(self.mean_diff),
                "components": arr(self.mean_diff_components),
            },
            "ci": ci,
        }

    def summary_lines(self) -> list[str]:
        lines = [
            f"n={self.n} paired cases, score {self.spec.describe()}",
            f"mean {self.label_a}: {self.mean_a:.2f}   "
            f"mean {self.label_b}: {self.mean_b:.2f}   "
            f"diff: {self.mean_diff:.2f}",
            f"{int(self.ci_level * 100)}% CI ({self.ci_method}) for diff: "
            f"[{self.ci_total[0]:.2f}, {self.ci_total[1]:.2f}]",
        ]
        if self.mean_diff_components is not None:
            for j, d in enumerate(self.mean_diff_components):
                lo, hi = self.ci_components[j]
                lines.append(
                    f"  component {j}: diff {d:.2f}  CI [{lo:.2f}, {hi:.2f}]"
                )
        return lines


def _align(cases_a: CaseSet, cases_b: CaseSet) -> CaseSet:
    """Reorder the second case set to the first one's ids."""
    if cases_a.ids == cases_b.ids:
        aligned = cases_b
    else:
        pos = {cid: i for i, cid in enumerate(cases_b.ids)}
        missing = [cid for cid in cases_a.ids if cid not in pos]
        if missing or len(cases_a) != len(cases_b):
            extra = [cid for cid in cases_b.ids if cid not in set(cases_a.ids)]
            raise ValidationError(
                "case sets do not pair up: "
                f"{len(missing)} ids missing from the second set "
                f"(first {missing[:3]}), {len(extra)} extra "
                f"(first {extra[:3]})"
            )
        perm = np.asarray([pos[cid] for cid in cases_a.ids])
        aligned = CaseSet(
            cases_a.ids, cases_b.forecasts[perm], cases_b.observations[perm]
        )
    bad = np.nonzero(cases_a.observations != aligned.observations)[0]
    if bad.size:
        i = bad[0]
        raise ValidationError(
            f"paired cases must share observations; case {cases_a.ids[i]!r} "
            f"has {cases_a.observations[i]!r} vs {aligned.observations[i]!r}"
        )
    return aligned


def _normal_ci(rows: np.ndarray, level_z: float = 1.96):
    n = rows.shape[1]
    if n < 2:
        raise ValidationError("confidence intervals need at least 2 cases")
    means = rows.mean(axis=1)
    half = level_z * rows.std(axis=1, ddof=1) / math.sqrt(n)
    return np.column_stack([means - half, means + half])


def _bootstrap_ci(rows: np.ndarray, samples: int, rng: np.random.Generator):
    m, n = rows.shape
    if n < 2:
        raise ValidationError("confidence intervals need at least 2 cases")
    stats = np.empty((samples, m))
    done = 0
    while done < samples:
        b = min(512, samples - done)
        idx = rng.integers(0, n, size=(b, n))
        stats[done : done + b] = rows[:, idx].mean(axis=2).T
        done += b
    lo = np.percentile(stats, 2.5, axis=0)
    hi = np.percentile(stats, 97.5, axis=0)
    return np.column_stack([lo, hi])


def compare(
    cases_a: CaseSet,
    cases_b: CaseSet,
    spec: ScoringSpec,
    partition: PartitionOfUnity | None = None,
    *,
    ci: str = "normal",
    bootstrap_samples: int = 10000,
    seed: int = 0,
    labels: tuple[str, str] = ("A", "B"),
) -> ComparisonReport:
    """Score two systems on paired cases and compare mean scores.

    Cases pair by id (order need not match); the paired observations
    must be identical.  ``ci`` selects the interval for the mean score
    differences: "normal" uses the paired large-sample interval with
    z = 1.96, "bootstrap" the percentile interval over case resamples
    drawn from the named bootstrap stream of ``seed``.
    """
    label_a, label_b = str(labels[0]), str(labels[1])
    if not label_a or not label_b or label_a == label_b:
        raise ValidationError(f"labels must be distinct and non-empty, got {labels}")
    if ci not in ("normal", "bootstrap"):
        raise ValidationError(f"ci must be 'normal' or 'bootstrap', got {ci!r}")
    aligned_b = _align(cases_a, cases_b)
    totals_a, comps_a = case_scores(spec, cases_a, partition)
    totals_b, comps_b = case_scores(spec, aligned_b, partition)
    rows = (totals_a - totals_b)[None, :]
    if partition is not None:
        rows = np.vstack([rows, comps_a - comps_b])
    if ci == "normal":
        bounds = _normal_ci(rows)
        samples_used = None
    else:
        if not 1 <= bootstrap_samples <= 10**6:
            raise ValidationError(
                f"bootstrap_samples must be in [1, 1e6], got {bootstrap_samples}"
            )
        bounds = _bootstrap_ci(
            rows, bootstrap_samples, stream_rng(seed, "comparison", "bootstrap")
        )
        samples_used = bootstrap_samples
    return ComparisonReport(
        label_a=label_a,
        label_b=label_b,
        n=len(cases_a),
        spec=spec,
        partition=partition,
        mean_a=float(totals_a.mean()),
        mean_b=float(totals_b.mean()),
        mean_components_a=None if comps_a is None else comps_a.mean(axis=1),
        mean_components_b=None if comps_b is None else comps_b.mean(axis=1),
        mean_diff=float((totals_a - totals_b).mean()),
        mean_diff_components=(
            None if comps_a is None else (comps_a - comps_b).mean(axis=1)
        ),
        ci_total=(float(bounds[0, 0]), float(bounds[0, 1])),
        ci_components=None if partition is None else bounds[1:],
        ci_method=ci,
        ci_level=0.95,
        bootstrap_samples=samples_used,
        seed=seed if ci == "bootstrap" else None,
    )


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of the two-system synthetic experiment.

    Observations are N(clim_mean, clim_sd^2).  System A's error is
    centered normal with standard deviation arctan(y - err_a_center)
    + err_a_base, so A is sharp below the center and noisy above it;
    system B's error has constant standard deviation err_b_sd.
    """

    n: int = 10000
    seed: int = 0
    clim_mean: float = 4.0
    clim_sd: float = 15.0
    err_b_sd: float = 2.0
    err_a_center: float = 10.0
    err_a_base: float = 2.0

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be positive, got {self.n}")
        for name in ("clim_sd", "err_b_sd"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be positive, got {v}")
        if not np.isfinite(self.err_a_center):
            raise ValidationError("err_a_center must be finite")
        if self.err_a_base <= math.pi / 2:
            raise ValidationError(
                "err_a_base must exceed pi/2 so the error spread stays positive"
            )

    def error_sd_a(self, y):
        """Standard deviation of system A's error given the outcome."""
        return np.arctan(np.asarray(y, dtype=float) - self.err_a_center) + self.err_a_base


def generate_synthetic(config: SyntheticConfig = SyntheticConfig()):
    """Draw paired forecast cases for the two synthetic systems.

    Returns (cases_a, cases_b) sharing ids and observations.  Streams:
    observations, errors_a, errors_b (see STREAMS["synthetic"]).
    """
    n = config.n
    y = stream_rng(config.seed, "synthetic", "observations").normal(
        config.clim_mean, config.clim_sd, n
    )
    e_a = stream_rng(config.seed, "synthetic", "errors_a").standard_normal(n)
    e_b = stream_rng(config.seed, "synthetic", "errors_b").normal(
        0.0, config.err_b_sd, n
    )
    x_a = y + e_a * config.error_sd_a(y)
    x_b = y + e_b
    width = max(6, len(str(n - 1)))
    ids = [f"case_{i:0{width}d}" for i in range(n)]
    return CaseSet(ids, x_a, y), CaseSet(ids, x_b, y)


def truncated_normal_mean(mean: float, sd: float, lower: float) -> float:
    """Mean of a normal distribution conditioned on exceeding lower."""
    if not (np.isfinite(mean) and np.isfinite(sd) and sd > 0):
        raise ValidationError(f"need finite mean and positive sd, got {mean}, {sd}")
    if lower == -np.inf:
        return float(mean)
    if not np.isfinite(lower):
        raise ValidationError("lower bound must be finite or -inf")
    a = (lower - mean) / sd
    return float(truncnorm.mean(a, np.inf, loc=mean, scale=sd))


def lognormal_mean(mu: float, sigma: float) -> float:
    """Mean of exp(N(mu, sigma^2))."""
    if not (np.isfinite(mu) and np.isfinite(sigma) and sigma > 0):
        raise ValidationError(f"need finite mu and positive sigma, got {mu}, {sigma}")
    return float(np.exp(mu + 0.5 * sigma * sigma))


def lognormal_tail_mean(mu: float, sigma: float, lower: float) -> float:
    """Mean of exp(N(mu, sigma^2)) conditioned on exceeding lower."""
    full = lognormal_mean(mu, sigma)
    if lower <= 0:
        return full
    z = (math.log(lower) - mu) / sigma
    tail = norm.sf(z)
    if tail <= 0.0:
        raise ValidationError(
            f"tail probability above {lower} underflows for mu={mu}, sigma={sigma}"
        )
    return float(full * norm.sf(z - sigma) / tail)


@dataclass(frozen=True)
class StrategyResult:
    """Mean score of one forecast policy under one assessment rule.

    ``gain`` is the honest policy's mean score minus this policy's,
    each over its own assessment set; positive gain means the policy
    improved the submitting system's apparent performance.
    """

    name: str
    n_assessed: int
    mean_score: float
    se: float
    gain: float
    gain_se: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_assessed": self.n_assessed,
            "mean_score": round12(self.mean_score),
            "se": round12(self.se),
            "gain": round12(self.gain),
            "gain_se": round12(self.gain_se),
        }


@dataclass(frozen=True)
class HedgingReport:
    """Honest versus strategic mean scores under one assessment option."""

    option: int
    n_events: int
    threshold: float
    seed: int
    params: dict
    note: str
    honest: StrategyResult
    strategies: tuple[StrategyResult, ...]

    def to_dict(self) -> dict:
        return {
            "option": self.option,
            "n_events": self.n_events,
            "threshold": self.threshold,
            "seed": self.seed,
            "params": dict(self.params),
            "note": self.note,
            "honest": self.honest.to_dict(),
            "strategies": [s.to_dict() for s in self.strategies],
        }

    def summary_lines(self) -> list[str]:
        lines = [
            f"option {self.option}: {self.note}",
            f"events: {self.n_events}, threshold: {self.threshold:.2f}",
            f"honest mean score: {self.honest.mean_score:.2f} "
            f"over {self.honest.n_assessed} assessed",
        ]
        for s in self.strategies:
            lines.append(
                f"  {s.name}: mean {s.mean_score:.2f} over {s.n_assessed} "
                f"assessed, gain {s.gain:.2f} (se {s.gain_se:.2f})"
            )
        return lines


_OPTION_NOTES = {
    1: "assess events whose observation reaches the threshold",
    2: "assess events where either submitted forecast reaches the threshold",
    3: "assess events where a forecast or the observation reaches the threshold",
    4: "assess events where the rival forecast reaches the threshold",
    5: "assess all events with the upper-region component of squared error",
}


def _masked_mean(scores: np.ndarray, sel: np.ndarray, what: str):
    cnt = int(sel.sum())
    if cnt < 2:
        raise ValidationError(
            f"{what}: only {cnt} events assessed; increase n or lower the threshold"
        )
    vals = scores[sel]
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(cnt)), cnt


def simulate_hedging(
    option: int,
    *,
    n: int = 8000,
    seed: int = 0,
    threshold: float = 20.0,
    mu_mean: float = 1.5,
    mu_sd: float = 1.0,
    log_sd: float = 0.4,
    rival_sd: float = 0.35,
) -> HedgingReport:
    """Simulate honest and strategic forecasting under one assessment rule.

    Each event i has a latent level mu_i ~ N(mu_mean, mu_sd^2); the
    outcome is lognormal, Y_i = exp(N(mu_i, log_sd^2)), and the
    submitting system knows that distribution exactly, so its honest
    point forecast is the lognormal mean.  The rival system issues the
    lognormal mean perturbed by a multiplicative information error
    with log standard deviation rival_sd.  Strategies follow the
    assessment rule of the chosen option:

    1. tail_conditional_mean: submit the mean conditioned on exceeding
       the threshold (the conditioning event always has positive
       probability here; were it not so, the threshold itself would be
       submitted).
    2. forced_assessment: if neither the rival's forecast nor the
       honest mean reaches the threshold, submit the threshold exactly
       when its expected squared error beats the rival's, which drags
       the event into the assessed set.
    3. threshold_dodge: as 2, but when forcing does not pay, submit
       just below the threshold so only the observation can trigger
       assessment.
    4. honest forecasting; nothing the submitting system does changes
       the assessed set.  (A rival capping its own forecast just below
       the threshold would empty the set entirely; that lever belongs
       to the rival and is not simulated.)
    5. all events are scored with the upper-region component of
       squared error split at the threshold; strategies 1 to 3 are
       re-evaluated under it and their gains collapse.

    Gains compare each strategy with honest forecasting under the same
    option; standard errors are paired when the assessed set cannot
    change (options 1, 4, 5) and conservative otherwise.
    """
    if option not in (1, 2, 3, 4, 5):
        raise ValidationError(f"option must be 1..5, got {option}")
    if n < 2:
        raise ValidationError(f"n must be at least 2, got {n}")
    for name, v, positive in (
        ("threshold", threshold, True),
        ("mu_mean", mu_mean, False),
        ("mu_sd", mu_sd, True),
        ("log_sd", log_sd, True),
        ("rival_sd", rival_sd, True),
    ):
        if not np.isfinite(v) or (positive and v <= 0):
            raise ValidationError(f"{name} must be finite{' and positive' * positive}, got {v}")

    mu = stream_rng(seed, "hedging", "situations").normal(mu_mean, mu_sd, n)
    y = np.exp(stream_rng(seed, "hedging", "observations").normal(mu, log_sd, n))
    delta = stream_rng(seed, "hedging", "rival").normal(0.0, rival_sd, n)

    half_var = 0.5 * log_sd * log_sd
    m = np.exp(mu + half_var)  # honest point forecast: Mean(F_B)
    x_rival = np.exp(mu + delta + half_var)
    t = threshold

    z = (math.log(t) - mu) / log_sd
    tail = norm.sf(z)
    safe_tail = np.where(tail > 0, tail, 1.0)
    tail_mean = np.where(tail > 0, m * norm.sf(z - log_sd) / safe_tail, t)

    neither = np.maximum(x_rival, m) < t
    forcing_pays = neither & ((t - m) ** 2 < (x_rival - m) ** 2)
    s_tail = tail_mean
    s_force = np.where(forcing_pays, t, m)
    s_dodge = np.where(forcing_pays, t, np.where(neither, t - 0.1, m))

    params = {
        "n": n,
        "threshold": t,
        "mu_mean": mu_mean,
        "mu_sd": mu_sd,
        "log_sd": log_sd,
        "rival_sd": rival_sd,
    }

    def sq(x):
        return (x - y) ** 2

    def paired(name, strat_forecasts, sel):
        h_mean, h_se, cnt = _masked_mean(sq(m), sel, "honest")
        s_mean, s_se, _ = _masked_mean(sq(strat_forecasts), sel, name)
        d = (sq(m) - sq(strat_forecasts))[sel]
        gain_se = float(d.std(ddof=1) / math.sqrt(cnt))
        honest = StrategyResult("honest", cnt, h_mean, h_se, 0.0, 0.0)
        strat = StrategyResult(name, cnt, s_mean, s_se, float(d.mean()), gain_se)
        return honest, strat

    if option == 1:
        sel = y >= t
        honest, strat = paired("tail_conditional_mean", s_tail, sel)
        strategies = (strat,)
    elif option in (2, 3):
        name = "forced_assessment" if option == 2 else "threshold_dodge"
        s = s_force if option == 2 else s_dodge
        sel_h = np.maximum(x_rival, m) >= t
        sel_s = np.maximum(x_rival, s) >= t
        if option == 3:
            sel_h = sel_h | (y >= t)
            sel_s = sel_s | (y >= t)
        h_mean, h_se, h_cnt = _masked_mean(sq(m), sel_h, "honest")
        s_mean, s_se, s_cnt = _masked_mean(sq(s), sel_s, name)
        honest = StrategyResult("honest", h_cnt, h_mean, h_se, 0.0, 0.0)
        strategies = (
            StrategyResult(
                name, s_cnt, s_mean, s_se,
                h_mean - s_mean, float(np.hypot(h_se, s_se)),
            ),
        )
    elif option == 4:
        sel = x_rival >= t
        h_mean, h_se, cnt = _masked_mean(sq(m), sel, "honest")
        honest = StrategyResult("honest", cnt, h_mean, h_se, 0.0, 0.0)
        # the assessed set ignores the submitted forecast and the outcome
        # distribution is unchanged by conditioning on the rival, so the
        # optimal strategic submission is the honest mean itself
        strategies = (StrategyResult("strategic", cnt, h_mean, h_se, 0.0, 0.0),)
    else:
        upper = region_generator(squared_error(), RectangularWeight(t, np.inf))
        base = np.asarray(upper.score(m, y))
        h_mean = float(base.mean())
        h_se = float(base.std(ddof=1) / math.sqrt(n))
        honest = StrategyResult("honest", n, h_mean, h_se, 0.0, 0.0)
        strategies = []
        for name, s in (
            ("tail_conditional_mean", s_tail),
            ("forced_assessment", s_force),
            ("threshold_dodge", s_dodge),
        ):
            vals = np.asarray(upper.score(s, y))
            d = base - vals
            strategies.append(
                StrategyResult(
                    name,
                    n,
                    float(vals.mean()),
                    float(vals.std(ddof=1) / math.sqrt(n)),
                    float(d.mean()),
                    float(d.std(ddof=1) / math.sqrt(n)),
                )
            )
        strategies = tuple(strategies)

    return HedgingReport(
        option=option,
        n_events=n,
        threshold=t,
        seed=seed,
        params=params,
        note=_OPTION_NOTES[option],
        honest=honest,
        strategies=strategies,
    )
