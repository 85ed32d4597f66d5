"""Per-qubit time-bin analyzers and their exact measurement operators.

A time-bin qubit is read out either directly (bin-resolved detection,
the z basis) or through an unbalanced interferometer whose long arm
delays by one bin (the phase basis).  The interferometer maps each
input bin t to ports +/- over bins t and t+1:

    a_t -> (1/2) [ p+_t + p-_t + e^{i phase} ( p+_{t+1} - p-_{t+1} ) ]

A click in the middle output bin interferes the early photon that took
the long arm with the late photon that took the short arm, projecting
onto (|early> + e^{i phase} |late>)/sqrt(2) with probability 1/2.

Measurement operators are built over the full photon-number basis of
the analyzer's two input modes, folding in detector efficiency, dark
counts, and time-bin misassignment, so multi-photon contamination is
treated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import tau

import numpy as np

from .detection import DetectorParams, pattern_distribution
from .fock import EARLY, LATE, FockState, ModeLabel, apply_isometry, fock_basis

BASIS_Z = "z"
BASIS_PHASE = "phase"
BASIS_CLICK = "click"
BASIS_IGNORE = "ignore"

_BASES = (BASIS_Z, BASIS_PHASE, BASIS_CLICK, BASIS_IGNORE)

OUTCOME_EARLY = "early"
OUTCOME_LATE = "late"
OUTCOME_PLUS = "plus"
OUTCOME_MINUS = "minus"
OUTCOME_INVALID = "invalid"
OUTCOME_CLICKED = "clicked"
OUTCOME_SILENT = "silent"
OUTCOME_ANY = "any"

_OUTCOMES = {
    BASIS_Z: (OUTCOME_EARLY, OUTCOME_LATE, OUTCOME_INVALID),
    BASIS_PHASE: (OUTCOME_PLUS, OUTCOME_MINUS, OUTCOME_INVALID),
    BASIS_CLICK: (OUTCOME_CLICKED, OUTCOME_SILENT),
    BASIS_IGNORE: (OUTCOME_ANY,),
}


@dataclass(frozen=True)
class AnalyzerSetting:
    """One qubit analyzer configuration.

    basis 'z' detects the two bins directly; 'phase' reads out through
    the interferometer set to the given phase; 'click' only asks whether
    the path produced any click (heralding monitor); 'ignore' leaves the
    path unmeasured.
    """

    basis: str
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.basis not in _BASES:
            raise ValueError(f"basis must be one of {_BASES}, got {self.basis!r}")
        if not 0.0 <= self.phase < tau:
            raise ValueError(f"phase must be within [0, 2*pi), got {self.phase!r}")
        if self.basis != BASIS_PHASE and self.phase != 0.0:
            raise ValueError(f"basis {self.basis!r} takes no phase")

    @property
    def outcomes(self) -> tuple[str, ...]:
        return _OUTCOMES[self.basis]


def interferometer_map(
    spatial: str, phase: float, wavelength: int = 795, bins: tuple[int, ...] = (EARLY, LATE)
) -> dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]]:
    """Isometry of the readout interferometer on one spatial path.

    Each input bin t spreads over ports '+'/'-' at bins t and t+1; the
    long (delayed) arm carries the phase.
    """
    plus = spatial + "+"
    minus = spatial + "-"
    shift = np.exp(1j * phase)
    mapping: dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]] = {}
    for t in bins:
        mapping[ModeLabel(wavelength, spatial, t)] = (
            (0.5, ModeLabel(wavelength, plus, t)),
            (0.5, ModeLabel(wavelength, minus, t)),
            (0.5 * shift, ModeLabel(wavelength, plus, t + 1)),
            (-0.5 * shift, ModeLabel(wavelength, minus, t + 1)),
        )
    return mapping


def _classify_z(clicks: frozenset[tuple[str, int]], spatial: str) -> str:
    if len(clicks) != 1:
        return OUTCOME_INVALID
    ((_, b),) = clicks
    return OUTCOME_EARLY if b == EARLY else OUTCOME_LATE


def _classify_phase(clicks: frozenset[tuple[str, int]], spatial: str) -> str:
    if len(clicks) != 1:
        return OUTCOME_INVALID
    ((group, b),) = clicks
    if b != LATE:
        return OUTCOME_INVALID
    return OUTCOME_PLUS if group.endswith("+") else OUTCOME_MINUS


def _classify_click(clicks: frozenset[tuple[str, int]], spatial: str) -> str:
    return OUTCOME_CLICKED if clicks else OUTCOME_SILENT


def analyzer_povm(
    setting: AnalyzerSetting,
    spatial: str,
    detector: DetectorParams,
    n_max: int,
    wavelength: int = 795,
) -> dict[str, np.ndarray]:
    """Measurement operators over the input-path photon-number basis.

    Returns one PSD matrix per outcome, indexed by fock_basis(2, n_max)
    of the (early, late) input modes; the elements sum to the identity.
    """
    if setting.basis == BASIS_IGNORE:
        dim = len(fock_basis(2, n_max))
        return {OUTCOME_ANY: np.eye(dim, dtype=complex)}

    in_modes = (
        ModeLabel(wavelength, spatial, EARLY),
        ModeLabel(wavelength, spatial, LATE),
    )
    basis = fock_basis(2, n_max)
    dim = len(basis)

    if setting.basis == BASIS_PHASE:
        mapping = interferometer_map(spatial, setting.phase, wavelength)
        cells = tuple(
            (spatial + port, t) for port in ("+", "-") for t in (EARLY, LATE, LATE + 1)
        )
        classify = _classify_phase
    else:
        mapping = None
        cells = ((spatial, EARLY), (spatial, LATE))
        classify = _classify_z if setting.basis == BASIS_Z else _classify_click

    # amplitude matrix: rows = output occupations, cols = input basis states
    out_index: dict[tuple[int, ...], int] = {}
    cols: list[dict[int, complex]] = []
    out_cell_of_mode: list[int] = []
    out_modes: tuple[ModeLabel, ...] | None = None
    for occ in basis:
        ket = FockState(in_modes, {occ: 1.0}, truncation=n_max)
        if mapping is not None:
            ket = apply_isometry(ket, mapping)
        if out_modes is None:
            out_modes = ket.modes
            cell_pos = {c: i for i, c in enumerate(cells)}
            out_cell_of_mode = [cell_pos[(m.spatial, m.temporal)] for m in ket.modes]
        col: dict[int, complex] = {}
        for o, amp in ket.amplitudes.items():
            row = out_index.setdefault(o, len(out_index))
            col[row] = amp
        cols.append(col)

    amps = np.zeros((len(out_index), dim), dtype=complex)
    for j, col in enumerate(cols):
        for row, amp in col.items():
            amps[row, j] = amp

    # outcome weight of each output occupation, via exact click patterns
    outcomes = setting.outcomes
    pos = {o: i for i, o in enumerate(outcomes)}
    weights = np.zeros((len(out_index), len(outcomes)))
    pattern_cache: dict[tuple[int, ...], np.ndarray] = {}
    for occ, row in out_index.items():
        counts = [0] * len(cells)
        for mode_i, n in enumerate(occ):
            counts[out_cell_of_mode[mode_i]] += n
        key = tuple(counts)
        if key not in pattern_cache:
            dist = pattern_distribution(cells, key, detector)
            vec = np.zeros(len(outcomes))
            for clicked, p in dist.items():
                pattern = frozenset(cells[i] for i in clicked)
                vec[pos[classify(pattern, spatial)]] += p
            pattern_cache[key] = vec
        weights[row] = pattern_cache[key]

    return {
        o: amps.conj().T @ (weights[:, i : i + 1] * amps)
        for i, o in enumerate(outcomes)
    }
