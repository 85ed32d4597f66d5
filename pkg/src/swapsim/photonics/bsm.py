"""Time-bin Bell-state measurement at a central beam splitter.

Two photons — one from each source's partner arm — interfere on a 50:50
beam splitter whose outputs feed one threshold detector per rail.  Click
patterns over (rail, time-bin) cells herald Bell states:

* clicks on different rails in different bins herald the antisymmetric
  singlet (both-rail suppression of every symmetric state),
* clicks on the same rail in the two bins herald the symmetric
  odd-parity triplet, usable only when the detectors resolve the
  two bins on one rail (optional acceptance flag).

Everything else is rejected.  Classification demands the exact pattern:
extra clicks veto the herald.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fock import EARLY, LATE

RAIL_1 = "r1"
RAIL_2 = "r2"

HERALD_SINGLET = "psi_minus"
HERALD_TRIPLET = "psi_plus"
HERALD_FAIL = "fail"

SWAP_CLASSES = (HERALD_SINGLET, HERALD_TRIPLET, HERALD_FAIL)

COINCIDENCE = "coincidence"
NO_COINCIDENCE = "no_coincidence"

HOM_CLASSES = (COINCIDENCE, NO_COINCIDENCE)

_SINGLET_PATTERNS = (
    frozenset({(RAIL_1, EARLY), (RAIL_2, LATE)}),
    frozenset({(RAIL_1, LATE), (RAIL_2, EARLY)}),
)
_TRIPLET_PATTERNS = (
    frozenset({(RAIL_1, EARLY), (RAIL_1, LATE)}),
    frozenset({(RAIL_2, EARLY), (RAIL_2, LATE)}),
)


@dataclass(frozen=True)
class BsmParams:
    """Interference quality and acceptance rules of the swap measurement.

    overlap is the amplitude overlap between the interfering photons'
    wave packets (1 = perfectly indistinguishable, 0 = fully
    distinguishable); the conditioned two-photon interference visibility
    equals overlap**2.  accept_psi_plus additionally heralds on the
    same-rail, two-bin patterns.
    """

    overlap: float = 1.0
    accept_psi_plus: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError(f"overlap must be within [0, 1], got {self.overlap!r}")


def bsm_classify(
    clicks: frozenset[tuple[str, int]], accept_psi_plus: bool = False
) -> str:
    """Label a click pattern over (rail, bin) cells as a herald or a failure."""
    if clicks in _SINGLET_PATTERNS:
        return HERALD_SINGLET
    if accept_psi_plus and clicks in _TRIPLET_PATTERNS:
        return HERALD_TRIPLET
    return HERALD_FAIL


def hom_coincidence(clicks: frozenset[tuple[str, int]]) -> str:
    """Label a pattern by whether both rails clicked in the same bin."""
    bins_r1 = {b for rail, b in clicks if rail == RAIL_1}
    bins_r2 = {b for rail, b in clicks if rail == RAIL_2}
    return COINCIDENCE if bins_r1 & bins_r2 else NO_COINCIDENCE
