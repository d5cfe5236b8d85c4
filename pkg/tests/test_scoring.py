"""Scoring-family values, functional solvers, and validation."""

import numpy as np
import pytest

from veriscore import (
    DiscreteDistribution,
    GeneratorSpec,
    ScoringSpec,
    ValidationError,
    absolute_error,
    cap,
    check_generator,
    expectile_score,
    functional_value,
    huber_loss,
    quantile_score,
    score,
    squared_error,
)


def test_quantile_score_frozen_value():
    # ind = 0, (0 - 0.25) * (2 - 5) = 0.75
    assert score(quantile_score(0.25), 2.0, 5.0) == pytest.approx(0.75)


def test_expectile_score_frozen_value():
    # |1 - 0.5| * (2*64 - 2*144 - 48*(8 - 12)) = 16
    assert score(expectile_score(0.5), 12.0, 8.0) == pytest.approx(16.0)


def test_huber_score_frozen_value():
    # k = 1, 0.5 * (0 - 1 + 1 * 6) = 2.5
    assert score(huber_loss(1.0), 3.0, 0.0) == pytest.approx(2.5)


def test_absolute_and_squared_error_reduce_to_familiar_forms():
    rng = np.random.default_rng(0)
    x = rng.uniform(-20, 20, 200)
    y = rng.uniform(-20, 20, 200)
    np.testing.assert_allclose(score(absolute_error(), x, y), np.abs(x - y))
    np.testing.assert_allclose(score(squared_error(), x, y), (x - y) ** 2)
    np.testing.assert_allclose(
        2.0 * score(quantile_score(0.5), x, y), np.abs(x - y)
    )


def test_huber_matches_piecewise_formula():
    rng = np.random.default_rng(1)
    x = rng.uniform(-10, 10, 500)
    y = rng.uniform(-10, 10, 500)
    for nu in (0.5, 1.0, 3.0):
        d = np.abs(x - y)
        expected = np.where(d <= nu, 0.5 * d**2, nu * (d - 0.5 * nu))
        np.testing.assert_allclose(score(huber_loss(nu), x, y), expected)


def test_score_zero_at_coincidence_and_nonnegative():
    rng = np.random.default_rng(2)
    specs = [
        quantile_score(0.3),
        expectile_score(0.8),
        huber_loss(2.0),
        absolute_error(),
        squared_error(),
    ]
    pts = rng.uniform(-50, 50, 100)
    for spec in specs:
        np.testing.assert_array_equal(score(spec, pts, pts), np.zeros(100))
        x = rng.uniform(-50, 50, 400)
        y = rng.uniform(-50, 50, 400)
        assert np.all(score(spec, x, y) >= 0.0)


def test_score_scalar_returns_float_and_broadcasts():
    out = score(quantile_score(0.5), 1.0, 2.0)
    assert isinstance(out, float)
    grid = score(squared_error(), np.linspace(0, 1, 5)[:, None], np.zeros(3))
    assert grid.shape == (5, 3)


def test_score_rejects_nonfinite():
    with pytest.raises(ValidationError):
        score(squared_error(), np.nan, 1.0)
    with pytest.raises(ValidationError):
        score(squared_error(), 1.0, np.inf)


def test_spec_validation_matrix():
    g = GeneratorSpec.identity_g()
    phi = GeneratorSpec.quadratic_phi()
    with pytest.raises(ValidationError):
        ScoringSpec("quantile", g)  # missing alpha
    with pytest.raises(ValidationError):
        ScoringSpec("quantile", g, alpha=0.0)
    with pytest.raises(ValidationError):
        ScoringSpec("expectile", phi, alpha=1.0)
    with pytest.raises(ValidationError):
        ScoringSpec("quantile", g, alpha=0.5, nu=1.0)
    with pytest.raises(ValidationError):
        ScoringSpec("huber_mean", phi)  # missing nu
    with pytest.raises(ValidationError):
        ScoringSpec("huber_mean", phi, nu=-1.0)
    with pytest.raises(ValidationError):
        ScoringSpec("huber_mean", phi, alpha=0.5, nu=1.0)
    with pytest.raises(ValidationError):
        ScoringSpec("quantile", phi, alpha=0.5)  # family mismatch
    with pytest.raises(ValidationError):
        ScoringSpec("expectile", g, alpha=0.5)
    with pytest.raises(ValidationError):
        ScoringSpec("mean", phi, nu=1.0)


def test_custom_generator_probed_at_construction():
    bad_g = GeneratorSpec.custom_g(
        lambda t: -np.asarray(t, dtype=float),
        lambda t: np.full_like(np.asarray(t, dtype=float), -1.0),
    )
    with pytest.raises(ValidationError):
        ScoringSpec("quantile", bad_g, alpha=0.5)
    bad_phi = GeneratorSpec.custom_phi(
        lambda t: -np.square(np.asarray(t, dtype=float)),
        lambda t: -2.0 * np.asarray(t, dtype=float),
        lambda t: np.full_like(np.asarray(t, dtype=float), -2.0),
    )
    with pytest.raises(ValidationError):
        ScoringSpec("expectile", bad_phi, alpha=0.5)
    with pytest.raises(ValidationError):
        check_generator(
            GeneratorSpec.custom_phi(
                lambda t: t, lambda t: t, None
            )
        )


def test_describe_echo():
    assert quantile_score(0.25).describe() == {
        "functional": "quantile",
        "generator": "identity_g",
        "alpha": 0.25,
    }
    assert huber_loss(2.0).describe() == {
        "functional": "huber_mean",
        "generator": "quadratic_phi",
        "nu": 2.0,
    }


def test_cap_clamps_and_validates():
    np.testing.assert_array_equal(
        cap(np.array([-5.0, 0.3, 5.0]), 1.5), np.array([-1.5, 0.3, 1.5])
    )
    with pytest.raises(ValidationError):
        cap(1.0, 0.0)


def test_discrete_distribution_normalizes_and_merges():
    d = DiscreteDistribution([2.0, 1.0, 2.0, 3.0], [0.25, 0.25, 0.25, 0.25])
    np.testing.assert_array_equal(d.values, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(d.probs, [0.25, 0.5, 0.25])
    assert d.mean() == pytest.approx(2.0)
    dz = DiscreteDistribution([1.0, 5.0, 9.0], [0.5, 0.0, 0.5])
    np.testing.assert_array_equal(dz.values, [1.0, 9.0])


def test_discrete_distribution_validation():
    with pytest.raises(ValidationError):
        DiscreteDistribution([1.0, 2.0], [0.6, 0.6])
    with pytest.raises(ValidationError):
        DiscreteDistribution([1.0, 2.0], [1.2, -0.2])
    with pytest.raises(ValidationError):
        DiscreteDistribution([np.inf], [1.0])
    with pytest.raises(ValidationError):
        DiscreteDistribution([1.0, 2.0], [1.0])


def test_expected_score_matches_manual_sum():
    d = DiscreteDistribution([0.0, 2.0, 7.0], [0.2, 0.5, 0.3])
    spec = expectile_score(0.7)
    xs = np.array([-1.0, 2.5, 6.0])
    got = d.expected_score(spec, xs)
    manual = np.array(
        [
            sum(p * score(spec, x, v) for v, p in zip(d.values, d.probs))
            for x in xs
        ]
    )
    np.testing.assert_allclose(got, manual)


def test_median_of_three_points():
    d = DiscreteDistribution([1.0, 2.0, 3.0], [1 / 3, 1 / 3, 1 / 3])
    fv = functional_value(quantile_score(0.5), d)
    assert fv.value == 2.0
    assert (fv.lower, fv.upper) == (2.0, 2.0)


def test_median_interval_when_level_hit_exactly():
    d = DiscreteDistribution([1.0, 3.0], [0.5, 0.5])
    fv = functional_value(quantile_score(0.5), d)
    assert (fv.value, fv.lower, fv.upper) == (1.0, 1.0, 3.0)


def test_expectile_linear_in_level_for_two_points():
    d = DiscreteDistribution([0.0, 6.0], [0.5, 0.5])
    # alpha * E(Y - x)+ = (1 - alpha) * E(x - Y)+ gives x = 6 alpha
    for alpha in (0.25, 0.5, 0.75):
        fv = functional_value(expectile_score(alpha), d)
        assert fv.value == pytest.approx(6.0 * alpha, abs=1e-10)
        assert fv.lower == fv.upper == fv.value


def test_huber_mean_interval_and_unique_root():
    d = DiscreteDistribution([0.0, 6.0], [0.5, 0.5])
    fv = functional_value(huber_loss(1.0), d)
    assert fv.lower == pytest.approx(1.0, abs=1e-9)
    assert fv.upper == pytest.approx(5.0, abs=1e-9)
    assert fv.value == pytest.approx(3.0, abs=1e-9)
    skew = DiscreteDistribution([0.0, 6.0], [0.25, 0.75])
    fv2 = functional_value(huber_loss(1.0), skew)
    assert fv2.value == pytest.approx(17.0 / 3.0, abs=1e-9)
    assert fv2.upper - fv2.lower == pytest.approx(0.0, abs=1e-9)


def test_huber_mean_approaches_mean_for_large_cap():
    d = DiscreteDistribution([0.0, 6.0], [0.5, 0.5])
    fv = functional_value(huber_loss(10.0), d)
    assert fv.value == pytest.approx(3.0, abs=1e-9)


def test_functional_minimizes_expected_score():
    # the reported functional should sit at the argmin of the expected score
    rng = np.random.default_rng(7)
    for _ in range(20):
        k = rng.integers(2, 6)
        vals = np.sort(rng.uniform(-10, 10, k))
        probs = rng.dirichlet(np.ones(k))
        d = DiscreteDistribution(vals, probs)
        for spec in (
            quantile_score(float(rng.uniform(0.1, 0.9))),
            expectile_score(float(rng.uniform(0.1, 0.9))),
            huber_loss(float(rng.uniform(0.2, 3.0))),
        ):
            fv = functional_value(spec, d)
            grid = np.linspace(vals[0] - 1, vals[-1] + 1, 2001)
            es = d.expected_score(spec, grid)
            best = grid[np.argmin(es)]
            step = grid[1] - grid[0]
            assert fv.lower - step <= best <= fv.upper + step


def test_sampling_respects_probabilities():
    d = DiscreteDistribution([0.0, 1.0], [0.25, 0.75])
    draws = d.sample(np.random.default_rng(3), 20000)
    assert abs(draws.mean() - 0.75) < 0.01
