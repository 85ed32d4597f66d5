"""Delimited tables and rendered figures."""

import numpy as np
import pytest

from swapsim import ExperimentConfig
from swapsim.photonics import COINCIDENCE, HomResult
from swapsim.report import (
    read_table,
    save_herald_figure,
    save_hom_figure,
    save_scan_figure,
    save_state_figure,
    save_sweep_figure,
    write_table,
)
from swapsim.tomography import fit_visibility

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _is_png(path) -> bool:
    return path.read_bytes()[:8] == _PNG_MAGIC


# ------------------------------------------------------------------ tables


def test_table_round_trip(tmp_path):
    path = tmp_path / "table.csv"
    write_table(
        path,
        {
            "phase": np.array([0.0, 0.5235987755982988, np.pi]),
            "counts": [12, 0, 7],
            "label": ["a", "b", "c"],
        },
        comments=("a comment", "another, with a comma"),
    )
    comments, columns = read_table(path)
    assert comments == ("a comment", "another, with a comma")
    assert list(columns) == ["phase", "counts", "label"]
    np.testing.assert_array_equal(
        columns["phase"], [0.0, 0.5235987755982988, np.pi]
    )
    np.testing.assert_array_equal(columns["counts"], [12.0, 0.0, 7.0])
    assert columns["label"].tolist() == ["a", "b", "c"]


def test_table_floats_round_trip_exactly(tmp_path):
    values = np.array([1.0 / 3.0, 5.142535813583263e-05, 1e-300])
    path = tmp_path / "floats.csv"
    write_table(path, {"v": values})
    _, columns = read_table(path)
    np.testing.assert_array_equal(columns["v"], values)


def test_table_rejects_ragged_columns(tmp_path):
    with pytest.raises(ValueError, match="mismatched lengths"):
        write_table(tmp_path / "bad.csv", {"a": [1, 2], "b": [1]})


def test_read_table_requires_data(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# only a comment\n")
    with pytest.raises(ValueError, match="no table"):
        read_table(path)


# ----------------------------------------------------------------- figures


def _hom_result(reference: int) -> HomResult:
    key = (COINCIDENCE, "any", "any")
    return HomResult(
        config=ExperimentConfig(),
        n_pulses=1000,
        seed=0,
        workers=1,
        conditioned=False,
        qnd=False,
        truncation=2,
        coincidence_key=key,
        matched_probabilities={key: 0.01},
        reference_probabilities={key: 0.02},
        matched_counts={key: 55},
        reference_counts={key: reference},
    )


def test_hom_figure(tmp_path):
    path = tmp_path / "hom.png"
    save_hom_figure(_hom_result(reference=100), path)
    assert _is_png(path)


def test_hom_figure_handles_missing_reference(tmp_path):
    path = tmp_path / "hom.png"
    save_hom_figure(_hom_result(reference=0), path)
    assert _is_png(path)


def test_scan_figure_with_and_without_fit(tmp_path):
    phases = np.linspace(0.0, 2.0 * np.pi, 12, endpoint=False)
    counts = 200.0 * (1.0 + 0.6 * np.cos(phases))
    fit = fit_visibility(phases, counts)
    with_fit = tmp_path / "scan_fit.png"
    save_scan_figure(phases, counts, fit, with_fit)
    assert _is_png(with_fit)
    without_fit = tmp_path / "scan_raw.png"
    save_scan_figure(phases, counts, None, without_fit)
    assert _is_png(without_fit)


def test_state_figure(tmp_path):
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = rho[2, 2] = 0.5
    rho[1, 2] = rho[2, 1] = 0.45
    path = tmp_path / "state.png"
    save_state_figure(rho, path)
    assert _is_png(path)


def test_herald_figure(tmp_path):
    path = tmp_path / "herald.png"
    save_herald_figure(
        {
            "signal": {"bound": 0.174, "expected": 0.030, "measured": 0.020},
            "idler": {"bound": 0.348, "expected": 0.166, "measured": 0.058},
        },
        path,
    )
    assert _is_png(path)


def test_sweep_figure(tmp_path):
    mus = np.array([0.02, 0.05, 0.1])
    values = np.array([0.75, 0.63, 0.50])
    with_bars = tmp_path / "sweep_bars.png"
    save_sweep_figure(mus, values, np.array([0.01, 0.02, 0.02]), with_bars)
    assert _is_png(with_bars)
    without_bars = tmp_path / "sweep_plain.png"
    save_sweep_figure(mus, values, None, without_bars)
    assert _is_png(without_bars)
