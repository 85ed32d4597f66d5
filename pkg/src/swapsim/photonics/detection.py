"""Threshold-detector model: efficiency, dark counts, and time-bin misassignment.

Detection cells are (detector, time-bin) pairs.  Detectors are
non-number-resolving: a cell either clicks or stays silent.  Each photon
is registered independently with the detector efficiency and lands in
its own bin unless timing jitter pushes the click into an adjacent bin.
Exact click-pattern probabilities follow from inclusion-exclusion over
silent cell sets, which is linear in the photon count per cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .fock import FockState

BIN_SEPARATION_S = 1.4e-9
_FWHM_TO_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


def misbin_probability(jitter_fwhm_s: float, bin_separation_s: float = BIN_SEPARATION_S) -> float:
    """Probability a click lands in one specific adjacent time bin.

    The click time is Gaussian around the true bin center; crossing the
    midpoint between bins (half the separation) reassigns the click.
    """
    if jitter_fwhm_s < 0.0 or bin_separation_s <= 0.0:
        raise ValueError("jitter must be nonnegative and bin separation positive")
    if jitter_fwhm_s == 0.0:
        return 0.0
    sigma = jitter_fwhm_s / _FWHM_TO_SIGMA
    half = bin_separation_s / 2.0
    return 0.5 * math.erfc(half / (sigma * math.sqrt(2.0)))


@dataclass(frozen=True)
class DetectorParams:
    """Threshold single-photon detector behind its full optical path.

    efficiency is the end-to-end photon detection probability (coupling,
    filtering, transmission, and detector system efficiency combined).
    window_s is the per-bin gate, which also sets the bin separation used
    for the misassignment estimate.  Detectors never resolve photon number.
    """

    efficiency: float
    dark_rate_hz: float = 0.0
    window_s: float = BIN_SEPARATION_S
    jitter_fwhm_s: float = 250e-12
    number_resolving: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency must be within [0, 1], got {self.efficiency!r}")
        if self.dark_rate_hz < 0.0:
            raise ValueError("dark_rate_hz must be nonnegative")
        if self.window_s <= 0.0:
            raise ValueError("window_s must be positive")
        if self.jitter_fwhm_s < 0.0:
            raise ValueError("jitter_fwhm_s must be nonnegative")
        if self.number_resolving:
            raise ValueError("number-resolving detectors are not modeled")

    @property
    def dark_prob(self) -> float:
        """Dark-count probability per time-bin gate."""
        return self.dark_rate_hz * self.window_s

    @property
    def misbin_prob(self) -> float:
        """Probability a click lands in one specific adjacent bin."""
        return misbin_probability(self.jitter_fwhm_s, self.window_s)


def landing_matrix(
    cells: tuple[tuple[str, int], ...], params: DetectorParams
) -> np.ndarray:
    """L[i, j] = P(a photon sitting at cell i produces a click at cell j).

    Jitter only moves clicks between adjacent bins of the same detector
    group; efficiency multiplies everything.
    """
    k = len(cells)
    m = params.misbin_prob
    out = np.zeros((k, k))
    for i, (gi, bi) in enumerate(cells):
        # a click drifts early or late with probability m each; drifting
        # into a bin that is not gated loses the click entirely
        out[i, i] = 1.0 - 2.0 * m
        for j, (gj, bj) in enumerate(cells):
            if gj == gi and abs(bj - bi) == 1:
                out[i, j] = m
    return out * params.efficiency


def pattern_distribution(
    cells: tuple[tuple[str, int], ...],
    counts: tuple[int, ...],
    params: DetectorParams,
) -> dict[frozenset[int], float]:
    """Exact probability of every click pattern given photons per cell.

    Uses P(no clicks in S) = prod_cells(1-dark) * prod_photons(1 - sum_S L)
    and inclusion-exclusion to pin each exact pattern.
    """
    k = len(cells)
    if len(counts) != k:
        raise ValueError("counts must align with cells")
    land = landing_matrix(cells, params)
    dark = params.dark_prob

    def silent_prob(silent: frozenset[int]) -> float:
        p = (1.0 - dark) ** len(silent)
        for i, n in enumerate(counts):
            if n:
                escape = 1.0 - sum(land[i, j] for j in silent)
                p *= escape**n
        return p

    all_cells = frozenset(range(k))
    silent_cache = {s: silent_prob(s) for r in range(k + 1) for s in map(frozenset, combinations(range(k), r))}

    dist: dict[frozenset[int], float] = {}
    for r in range(k + 1):
        for clicked in map(frozenset, combinations(range(k), r)):
            rest = all_cells - clicked
            p = 0.0
            for extra in range(len(clicked) + 1):
                for t in map(frozenset, combinations(sorted(clicked), extra)):
                    p += (-1.0) ** len(t) * silent_cache[rest | t]
            dist[clicked] = max(p, 0.0)
    return dist


def detect(
    state: FockState,
    params_by_spatial: dict[str, DetectorParams],
    rng: np.random.Generator,
) -> frozenset[tuple[str, int]]:
    """Sample one click pattern from a pure state hitting the detectors.

    Modes whose spatial path has no detector entry (environment modes,
    undetected arms) are ignored.  Returns the set of (spatial, bin)
    cells that clicked.
    """
    occs = list(state.amplitudes.keys())
    weights = np.array([abs(state.amplitudes[o]) ** 2 for o in occs])
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("state has no amplitude")
    occ = occs[rng.choice(len(occs), p=weights / total)]

    gated: dict[str, set[int]] = {}
    for mode in state.modes:
        if mode.spatial in params_by_spatial:
            gated.setdefault(mode.spatial, set()).add(mode.temporal)

    clicks: set[tuple[str, int]] = set()
    for mode, n in zip(state.modes, occ):
        if mode.spatial not in params_by_spatial:
            continue
        p = params_by_spatial[mode.spatial]
        for _ in range(n):
            if rng.random() >= p.efficiency:
                continue
            b = mode.temporal
            m = p.misbin_prob
            u = rng.random()
            if u < m:
                b += 1
            elif u < 2.0 * m:
                b -= 1
            if b in gated[mode.spatial]:
                clicks.add((mode.spatial, b))
    # darks fire independently in every gated bin of every wired detector
    for mode in state.modes:
        if mode.spatial not in params_by_spatial:
            continue
        p = params_by_spatial[mode.spatial]
        cell = (mode.spatial, mode.temporal)
        if cell not in clicks and rng.random() < p.dark_prob:
            clicks.add(cell)
    return frozenset(clicks)
