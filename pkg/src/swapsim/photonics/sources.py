"""Photon-pair source model: pair-number statistics and state imperfections.

Each source emits into four modes (two wavelengths x two time bins).  The
n-pair component is the properly symmetrized bosonic state built from
(X + e^{i phase} Y)^n acting on vacuum, where X creates an early pair and
Y a late pair; within the n-pair sector the early/late pair split is
uniform over the n+1 possibilities.

Imperfect single-pair emission is modeled as a mixture of pure states
that differ only in their one-pair component.  Because every detector
observable here is diagonal in photon number, this mixture reproduces
exactly the statistics of applying the noise channel to the one-pair
sector alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fock import EARLY, LATE, FockState, ModeLabel

PAIR_STATISTICS = ("thermal", "poissonian")
NOISE_CHANNELS = ("depolarizing", "dephasing")


@dataclass(frozen=True)
class SourceParams:
    """One pair source: emission statistics and single-pair state quality.

    mu is the mean number of pairs per pulse (per time-bin qubit); phase
    is the pump-interferometer phase between the early-pair and late-pair
    amplitudes; state_fidelity is the overlap of the one-pair state with
    the ideal phase-coherent pair state, reached through the configured
    noise channel.
    """

    mu: float
    phase: float = 0.0
    state_fidelity: float = 1.0
    pair_statistics: str = "thermal"
    noise_channel: str = "depolarizing"

    def __post_init__(self) -> None:
        if not 0.0 <= self.mu < 1.0:
            raise ValueError(f"mu must be within [0, 1), got {self.mu!r}")
        if not 0.0 <= self.state_fidelity <= 1.0:
            raise ValueError(
                f"state_fidelity must be within [0, 1], got {self.state_fidelity!r}"
            )
        if self.pair_statistics not in PAIR_STATISTICS:
            raise ValueError(
                f"pair_statistics must be one of {PAIR_STATISTICS}, "
                f"got {self.pair_statistics!r}"
            )
        if self.noise_channel not in NOISE_CHANNELS:
            raise ValueError(
                f"noise_channel must be one of {NOISE_CHANNELS}, "
                f"got {self.noise_channel!r}"
            )


def source_modes(
    qubit_spatial: str, partner_spatial: str, qubit_wavelength: int = 795,
    partner_wavelength: int = 1533,
) -> tuple[ModeLabel, ModeLabel, ModeLabel, ModeLabel]:
    """Mode labels (qubit early, qubit late, partner early, partner late)."""
    return (
        ModeLabel(qubit_wavelength, qubit_spatial, EARLY),
        ModeLabel(qubit_wavelength, qubit_spatial, LATE),
        ModeLabel(partner_wavelength, partner_spatial, EARLY),
        ModeLabel(partner_wavelength, partner_spatial, LATE),
    )


def pair_number_probs(params: SourceParams, max_pairs: int) -> list[float]:
    """P(n pairs) for n = 0..max_pairs, renormalized over the truncation."""
    mu = params.mu
    if params.pair_statistics == "thermal":
        raw = [mu**n / (1.0 + mu) ** (n + 1) for n in range(max_pairs + 1)]
    else:
        raw = [math.exp(-mu) * mu**n / math.factorial(n) for n in range(max_pairs + 1)]
    total = sum(raw)
    return [p / total for p in raw]


def _sector_amplitudes(
    n: int, phase: float
) -> dict[tuple[int, int, int, int], complex]:
    """n-pair sector over (qubit early, qubit late, partner early, partner late).

    Symmetrization leaves a flat 1/sqrt(n+1) amplitude over the k-early /
    (n-k)-late splits, each late pair carrying one factor of the phase.
    """
    amp = 1.0 / math.sqrt(n + 1.0)
    out: dict[tuple[int, int, int, int], complex] = {}
    for k in range(n + 1):
        late = n - k
        out[(k, late, k, late)] = amp * complex(
            math.cos(phase * late), math.sin(phase * late)
        )
    return out


def _one_pair_kets(params: SourceParams) -> list[tuple[float, dict]]:
    """Weighted one-pair kets realizing the configured noise channel.

    Basis order within a ket dict: (qe, ql, pe, pl) occupations.
    Correlated kets pair early-with-early; anticorrelated kets pair
    early-with-late.  A phase-orthogonal partner or the anticorrelated
    pair complete an orthonormal one-pair basis.
    """
    s = 1.0 / math.sqrt(2.0)
    phase = params.phase

    def correlated(extra: float) -> dict:
        ph = phase + extra
        return {
            (1, 0, 1, 0): s,
            (0, 1, 0, 1): s * complex(math.cos(ph), math.sin(ph)),
        }

    def anticorrelated(ph: float) -> dict:
        return {
            (1, 0, 0, 1): s,
            (0, 1, 1, 0): s * complex(math.cos(ph), math.sin(ph)),
        }

    f = params.state_fidelity
    if params.noise_channel == "dephasing":
        return [(f, correlated(0.0)), (1.0 - f, correlated(math.pi))]
    # depolarizing: ideal ket plus the isotropic remainder spread over an
    # orthonormal one-pair basis
    p = (4.0 * f - 1.0) / 3.0
    w_rest = (1.0 - p) / 4.0
    return [
        (p + w_rest, correlated(0.0)),
        (w_rest, correlated(math.pi)),
        (w_rest, anticorrelated(0.0)),
        (w_rest, anticorrelated(math.pi)),
    ]


def spdc_components(
    params: SourceParams,
    truncation: int,
    modes: tuple[ModeLabel, ModeLabel, ModeLabel, ModeLabel],
    drop_multi_pair: bool = False,
) -> list[tuple[float, FockState]]:
    """Mixture decomposition of the source state at a pair truncation.

    Each component is a pure state whose one-pair sector is one of the
    noise-channel kets; higher sectors are the ideal symmetrized states.
    With drop_multi_pair (ideal pair-number heralding) sectors with two
    or more pairs are removed and the states stay sub-normalized, so the
    missing mass shows up as discarded pulses downstream.
    """
    if truncation < 2:
        raise ValueError(
            "pair truncation must be at least 2 so multi-pair noise is represented"
        )
    probs = pair_number_probs(params, truncation)
    c = [math.sqrt(p) for p in probs]
    max_sector = 1 if drop_multi_pair else truncation

    components: list[tuple[float, FockState]] = []
    for weight, one_pair in _one_pair_kets(params):
        if weight == 0.0:
            continue
        amps: dict[tuple[int, ...], complex] = {(0, 0, 0, 0): c[0]}
        for occ, a in one_pair.items():
            amps[occ] = c[1] * a
        for n in range(2, max_sector + 1):
            for occ, a in _sector_amplitudes(n, params.phase).items():
                amps[occ] = c[n] * a
        components.append(
            (weight, FockState(modes, amps, 2 * truncation).prune(0.0))
        )
    return components


def spdc_state(
    params: SourceParams,
    truncation: int,
    modes: tuple[ModeLabel, ModeLabel, ModeLabel, ModeLabel] | None = None,
    qubit_spatial: str = "A",
    partner_spatial: str = "B",
) -> FockState:
    """The pure source state for a noiseless single-pair sector.

    For state_fidelity < 1 the source is a genuine mixture; use
    spdc_components for its pure-state decomposition.
    """
    if params.state_fidelity != 1.0:
        raise ValueError(
            "spdc_state is only defined at state_fidelity = 1; "
            "use spdc_components for the mixture decomposition"
        )
    if modes is None:
        modes = source_modes(qubit_spatial, partner_spatial)
    components = spdc_components(params, truncation, modes)
    return components[0][1]
