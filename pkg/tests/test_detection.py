"""Detector model: misassignment, dark counts, exact pattern probabilities."""

import numpy as np
import pytest

from swapsim.photonics import (
    EARLY,
    LATE,
    DetectorParams,
    FockState,
    ModeLabel,
    detect,
    landing_matrix,
    misbin_probability,
    pattern_distribution,
)

CELLS_2 = (("d", 0), ("d", 1))
CELLS_4 = (("r1", 0), ("r1", 1), ("r2", 0), ("r2", 1))


def test_detector_params_validation():
    with pytest.raises(ValueError):
        DetectorParams(efficiency=1.2)
    with pytest.raises(ValueError):
        DetectorParams(efficiency=0.5, dark_rate_hz=-1.0)
    with pytest.raises(ValueError):
        DetectorParams(efficiency=0.5, window_s=0.0)
    with pytest.raises(ValueError):
        DetectorParams(efficiency=0.5, jitter_fwhm_s=-1e-12)
    with pytest.raises(ValueError):
        DetectorParams(efficiency=0.5, number_resolving=True)


def test_misbin_probability_values():
    assert misbin_probability(0.0) == 0.0
    # 500 ps FWHM jitter against 1.4 ns bins: one-sided Gaussian escape
    assert misbin_probability(500e-12, 1.4e-9) == pytest.approx(
        4.89056e-4, rel=1e-4
    )
    # the deployed 250 ps jitter makes misassignment negligible
    assert misbin_probability(250e-12, 1.4e-9) < 1e-10
    assert misbin_probability(2e-9, 1.4e-9) > misbin_probability(1e-9, 1.4e-9)
    with pytest.raises(ValueError):
        misbin_probability(-1e-12)
    with pytest.raises(ValueError):
        misbin_probability(1e-12, 0.0)


def test_misbin_probability_monte_carlo_oracle():
    rng = np.random.default_rng(2024)
    fwhm = 900e-12
    sep = 1.4e-9
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    n = 400_000
    times = rng.normal(0.0, sigma, size=n)
    frac = np.mean(times > sep / 2.0)
    expected = misbin_probability(fwhm, sep)
    assert abs(frac - expected) < 3.0 * np.sqrt(expected * (1 - expected) / n)


def test_landing_matrix_spills_one_sided_at_edges():
    p = DetectorParams(efficiency=0.8, jitter_fwhm_s=500e-12)
    m = p.misbin_prob
    land = landing_matrix(CELLS_2, p)
    np.testing.assert_allclose(land[0, 0], 0.8 * (1 - 2 * m), rtol=1e-12)
    np.testing.assert_allclose(land[0, 1], 0.8 * m, rtol=1e-12)
    # separate detector groups never exchange clicks
    land4 = landing_matrix(CELLS_4, p)
    assert land4[1, 2] == 0.0 and land4[0, 2] == 0.0


def test_vacuum_pattern_is_darks_only():
    p = DetectorParams(efficiency=0.9, dark_rate_hz=1e5)
    d = p.dark_prob
    dist = pattern_distribution(CELLS_2, (0, 0), p)
    np.testing.assert_allclose(dist[frozenset()], (1 - d) ** 2, rtol=1e-12)
    np.testing.assert_allclose(dist[frozenset({0})], d * (1 - d), rtol=1e-12)
    # the double-dark term is a small residue of inclusion-exclusion, so it
    # carries a few ulps of cancellation error relative to its own size
    np.testing.assert_allclose(dist[frozenset({0, 1})], d * d, rtol=1e-7)


def test_single_photon_pattern():
    p = DetectorParams(efficiency=0.37, dark_rate_hz=0.0, jitter_fwhm_s=0.0)
    dist = pattern_distribution(CELLS_2, (1, 0), p)
    np.testing.assert_allclose(dist[frozenset({0})], 0.37, atol=1e-12)
    np.testing.assert_allclose(dist[frozenset()], 0.63, atol=1e-12)
    assert dist[frozenset({1})] == pytest.approx(0.0, abs=1e-15)


def test_threshold_detector_saturates_on_bunched_photons():
    p = DetectorParams(efficiency=0.4, dark_rate_hz=0.0, jitter_fwhm_s=0.0)
    dist = pattern_distribution(CELLS_2, (2, 0), p)
    np.testing.assert_allclose(dist[frozenset({0})], 1 - 0.6**2, atol=1e-12)
    np.testing.assert_allclose(dist[frozenset()], 0.6**2, atol=1e-12)


def test_pattern_distribution_is_normalized():
    p = DetectorParams(efficiency=0.55, dark_rate_hz=2e5, jitter_fwhm_s=600e-12)
    for counts in [(0, 0, 0, 0), (1, 0, 2, 0), (2, 1, 0, 3), (1, 1, 1, 1)]:
        dist = pattern_distribution(CELLS_4, counts, p)
        assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)
        assert all(v >= 0.0 for v in dist.values())


def test_pattern_distribution_counts_must_align():
    p = DetectorParams(efficiency=0.5)
    with pytest.raises(ValueError):
        pattern_distribution(CELLS_2, (1,), p)


def test_sampled_detection_matches_exact_distribution():
    # Monte Carlo detect() against the closed-form pattern probabilities
    rng = np.random.default_rng(99)
    a = ModeLabel(1533, "r1", EARLY)
    b = ModeLabel(1533, "r1", LATE)
    c = ModeLabel(1533, "r2", EARLY)
    state = FockState(
        (a, b, c),
        {(1, 0, 1): np.sqrt(0.5), (0, 1, 0): np.sqrt(0.3), (2, 0, 0): np.sqrt(0.2)},
        truncation=2,
    )
    p = DetectorParams(efficiency=0.6, dark_rate_hz=5e5, jitter_fwhm_s=700e-12)
    cells = (("r1", 0), ("r1", 1), ("r2", 0))
    weights = {occ: abs(amp) ** 2 for occ, amp in state.amplitudes.items()}
    expected: dict[frozenset, float] = {}
    for occ, w in weights.items():
        for clicked, q in pattern_distribution(cells, occ, p).items():
            pattern = frozenset(cells[i] for i in clicked)
            expected[pattern] = expected.get(pattern, 0.0) + w * q
    n = 200_000
    seen: dict[frozenset, int] = {}
    params = {"r1": p, "r2": p}
    for _ in range(n):
        pattern = detect(state, params, rng)
        seen[pattern] = seen.get(pattern, 0) + 1
    for pattern, prob in expected.items():
        if prob < 1e-4:
            continue
        sigma = np.sqrt(prob * (1 - prob) / n)
        assert abs(seen.get(pattern, 0) / n - prob) < 4.0 * sigma, pattern


def test_detect_ignores_unwired_paths():
    rng = np.random.default_rng(1)
    a = ModeLabel(795, "A", EARLY)
    env = ModeLabel(795, "env", EARLY)
    state = FockState((a, env), {(0, 3): 1.0}, truncation=3)
    p = DetectorParams(efficiency=1.0, dark_rate_hz=0.0)
    assert detect(state, {"A": p}, rng) == frozenset()
