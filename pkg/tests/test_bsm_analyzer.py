"""Click-pattern classification and analyzer measurement operators."""

import math

import numpy as np
import pytest

from swapsim.photonics import (
    BASIS_CLICK,
    BASIS_IGNORE,
    BASIS_PHASE,
    BASIS_Z,
    COINCIDENCE,
    EARLY,
    HERALD_FAIL,
    HERALD_SINGLET,
    HERALD_TRIPLET,
    LATE,
    NO_COINCIDENCE,
    OUTCOME_ANY,
    OUTCOME_CLICKED,
    OUTCOME_EARLY,
    OUTCOME_INVALID,
    OUTCOME_LATE,
    OUTCOME_MINUS,
    OUTCOME_PLUS,
    OUTCOME_SILENT,
    RAIL_1,
    RAIL_2,
    AnalyzerSetting,
    BsmParams,
    DetectorParams,
    FockState,
    ModeLabel,
    analyzer_povm,
    apply_isometry,
    bsm_classify,
    fock_basis,
    hom_coincidence,
    interferometer_map,
)
from swapsim.qstate import phase_projector

CLEAN = DetectorParams(efficiency=0.8, dark_rate_hz=0.0, jitter_fwhm_s=0.0)
MESSY = DetectorParams(efficiency=0.35, dark_rate_hz=2e5, jitter_fwhm_s=600e-12)

# fock_basis(2, 2) rows: (0,0), (0,1), (1,0), (0,2), (1,1), (2,0); the
# single-photon block in (early, late) qubit order is rows/cols [2, 1]
ONE_PHOTON = np.ix_([2, 1], [2, 1])


def test_bsm_params_validation():
    assert BsmParams().overlap == 1.0
    assert BsmParams().accept_psi_plus is False
    with pytest.raises(ValueError):
        BsmParams(overlap=1.2)
    with pytest.raises(ValueError):
        BsmParams(overlap=-0.1)


def test_cross_rail_cross_bin_clicks_herald_singlet():
    for pattern in (
        frozenset({(RAIL_1, EARLY), (RAIL_2, LATE)}),
        frozenset({(RAIL_1, LATE), (RAIL_2, EARLY)}),
    ):
        assert bsm_classify(pattern) == HERALD_SINGLET
        assert bsm_classify(pattern, accept_psi_plus=True) == HERALD_SINGLET


def test_same_rail_two_bin_clicks_herald_triplet_only_when_accepted():
    for pattern in (
        frozenset({(RAIL_1, EARLY), (RAIL_1, LATE)}),
        frozenset({(RAIL_2, EARLY), (RAIL_2, LATE)}),
    ):
        assert bsm_classify(pattern) == HERALD_FAIL
        assert bsm_classify(pattern, accept_psi_plus=True) == HERALD_TRIPLET


def test_other_click_patterns_fail():
    rejects = [
        frozenset(),
        frozenset({(RAIL_1, EARLY)}),
        frozenset({(RAIL_2, LATE)}),
        frozenset({(RAIL_1, EARLY), (RAIL_2, EARLY)}),
        frozenset({(RAIL_1, LATE), (RAIL_2, LATE)}),
        frozenset({(RAIL_1, EARLY), (RAIL_1, LATE), (RAIL_2, EARLY), (RAIL_2, LATE)}),
    ]
    for pattern in rejects:
        assert bsm_classify(pattern) == HERALD_FAIL
        assert bsm_classify(pattern, accept_psi_plus=True) == HERALD_FAIL


def test_extra_clicks_veto_the_herald():
    threefold = frozenset({(RAIL_1, EARLY), (RAIL_2, LATE), (RAIL_1, LATE)})
    assert bsm_classify(threefold) == HERALD_FAIL
    assert bsm_classify(threefold, accept_psi_plus=True) == HERALD_FAIL


def test_hom_coincidence_requires_both_rails_in_one_bin():
    hits = [
        frozenset({(RAIL_1, EARLY), (RAIL_2, EARLY)}),
        frozenset({(RAIL_1, LATE), (RAIL_2, LATE)}),
        frozenset({(RAIL_1, EARLY), (RAIL_2, EARLY), (RAIL_2, LATE)}),
    ]
    misses = [
        frozenset(),
        frozenset({(RAIL_1, EARLY)}),
        frozenset({(RAIL_1, EARLY), (RAIL_1, LATE)}),
        frozenset({(RAIL_1, EARLY), (RAIL_2, LATE)}),
    ]
    for pattern in hits:
        assert hom_coincidence(pattern) == COINCIDENCE
    for pattern in misses:
        assert hom_coincidence(pattern) == NO_COINCIDENCE


def test_analyzer_setting_validation():
    with pytest.raises(ValueError):
        AnalyzerSetting("diagonal")
    with pytest.raises(ValueError):
        AnalyzerSetting(BASIS_PHASE, phase=-0.1)
    with pytest.raises(ValueError):
        AnalyzerSetting(BASIS_PHASE, phase=2 * math.pi)
    with pytest.raises(ValueError):
        AnalyzerSetting(BASIS_Z, phase=0.3)
    assert AnalyzerSetting(BASIS_Z).outcomes == (
        OUTCOME_EARLY,
        OUTCOME_LATE,
        OUTCOME_INVALID,
    )
    assert AnalyzerSetting(BASIS_PHASE, phase=1.0).outcomes == (
        OUTCOME_PLUS,
        OUTCOME_MINUS,
        OUTCOME_INVALID,
    )
    assert AnalyzerSetting(BASIS_CLICK).outcomes == (OUTCOME_CLICKED, OUTCOME_SILENT)
    assert AnalyzerSetting(BASIS_IGNORE).outcomes == (OUTCOME_ANY,)


def test_interferometer_splits_each_bin_across_ports_and_delays():
    phase = 0.7
    early = ModeLabel(795, "a", EARLY)
    late = ModeLabel(795, "a", LATE)
    mapping = interferometer_map("a", phase)
    ket = apply_isometry(
        FockState((early, late), {(1, 0): 1.0}, truncation=1), mapping
    )
    idx = {(m.spatial, m.temporal): i for i, m in enumerate(ket.modes)}

    def single(cell):
        occ = [0] * len(ket.modes)
        occ[idx[cell]] = 1
        return tuple(occ)

    shift = np.exp(1j * phase)
    np.testing.assert_allclose(ket.amplitudes[single(("a+", EARLY))], 0.5)
    np.testing.assert_allclose(ket.amplitudes[single(("a-", EARLY))], 0.5)
    np.testing.assert_allclose(ket.amplitudes[single(("a+", LATE))], 0.5 * shift)
    np.testing.assert_allclose(ket.amplitudes[single(("a-", LATE))], -0.5 * shift)

    # early photon through the long arm meets the late photon through the
    # short arm in the middle bin; bunching doubles the two-path amplitude
    pair = apply_isometry(FockState((early, late), {(1, 1): 1.0}, truncation=2), mapping)
    doubled = [0] * len(pair.modes)
    doubled[idx[("a+", LATE)]] = 2
    np.testing.assert_allclose(
        pair.amplitudes[tuple(doubled)], (math.sqrt(2) / 4) * shift, atol=1e-12
    )


@pytest.mark.parametrize("n_max", [2, 3])
@pytest.mark.parametrize(
    "setting",
    [
        AnalyzerSetting(BASIS_Z),
        AnalyzerSetting(BASIS_PHASE),
        AnalyzerSetting(BASIS_PHASE, phase=2.1),
        AnalyzerSetting(BASIS_CLICK),
        AnalyzerSetting(BASIS_IGNORE),
    ],
)
def test_measurement_operators_sum_to_identity(setting, n_max):
    povm = analyzer_povm(setting, "a", MESSY, n_max)
    assert set(povm) == set(setting.outcomes)
    dim = len(fock_basis(2, n_max))
    total = sum(povm.values())
    np.testing.assert_allclose(total, np.eye(dim), atol=1e-9)
    for mat in povm.values():
        np.testing.assert_allclose(mat, mat.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(mat).min() > -1e-9


@pytest.mark.parametrize("phase", [0.0, math.pi / 2, 1.3])
def test_phase_basis_single_photon_block_is_scaled_projector(phase):
    povm = analyzer_povm(AnalyzerSetting(BASIS_PHASE, phase=phase), "a", CLEAN, 2)
    eta = CLEAN.efficiency
    np.testing.assert_allclose(
        povm[OUTCOME_PLUS][ONE_PHOTON],
        (eta / 2) * phase_projector(phase).matrix,
        atol=1e-12,
    )
    np.testing.assert_allclose(
        povm[OUTCOME_MINUS][ONE_PHOTON],
        (eta / 2) * phase_projector(phase + math.pi).matrix,
        atol=1e-12,
    )
    # outer-bin detections and losses make up the rest of the block trace
    inv = povm[OUTCOME_INVALID][ONE_PHOTON]
    np.testing.assert_allclose(np.trace(inv).real, 2 - eta, atol=1e-12)
    assert povm[OUTCOME_PLUS][0, 0] == pytest.approx(0.0, abs=1e-15)


def test_bin_basis_single_photon_block_is_efficiency_scaled():
    povm = analyzer_povm(AnalyzerSetting(BASIS_Z), "a", CLEAN, 2)
    eta = CLEAN.efficiency
    np.testing.assert_allclose(
        povm[OUTCOME_EARLY][ONE_PHOTON], [[eta, 0.0], [0.0, 0.0]], atol=1e-12
    )
    np.testing.assert_allclose(
        povm[OUTCOME_LATE][ONE_PHOTON], [[0.0, 0.0], [0.0, eta]], atol=1e-12
    )


def test_click_monitor_blocks():
    povm = analyzer_povm(AnalyzerSetting(BASIS_CLICK), "a", CLEAN, 2)
    eta = CLEAN.efficiency
    np.testing.assert_allclose(
        povm[OUTCOME_CLICKED][ONE_PHOTON], eta * np.eye(2), atol=1e-12
    )
    assert povm[OUTCOME_CLICKED][0, 0] == pytest.approx(0.0, abs=1e-15)
    assert povm[OUTCOME_SILENT][0, 0] == pytest.approx(1.0)
    # two photons in one bin saturate a threshold detector faster
    idx = fock_basis(2, 2).index((2, 0))
    np.testing.assert_allclose(
        povm[OUTCOME_CLICKED][idx, idx], 1 - (1 - eta) ** 2, atol=1e-12
    )


def test_vacuum_outcomes_with_dark_counts():
    det = DetectorParams(efficiency=0.9, dark_rate_hz=1e5, jitter_fwhm_s=0.0)
    d = det.dark_prob
    povm = analyzer_povm(AnalyzerSetting(BASIS_Z), "a", det, 2)
    np.testing.assert_allclose(povm[OUTCOME_EARLY][0, 0], d * (1 - d), rtol=1e-7)
    np.testing.assert_allclose(povm[OUTCOME_LATE][0, 0], d * (1 - d), rtol=1e-7)
    np.testing.assert_allclose(
        povm[OUTCOME_INVALID][0, 0], (1 - d) ** 2 + d * d, rtol=1e-7
    )


def test_ignored_path_operator_is_identity():
    povm = analyzer_povm(AnalyzerSetting(BASIS_IGNORE), "a", MESSY, 4)
    dim = len(fock_basis(2, 4))
    np.testing.assert_allclose(povm[OUTCOME_ANY], np.eye(dim), atol=0)
