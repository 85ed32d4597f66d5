"""Bandwidth-limited heralding model for a pulsed photon-pair source.

Treats the pump band and the two collection filters as flat-top (box)
spectra in the joint signal/idler frequency plane.  The pump band is an
anti-diagonal strip of perpendicular width equal to the pump bandwidth;
each filter is an axis-aligned strip.  Heralding efficiencies follow as
ratios of the resulting overlap areas, and loss chains multiply on top.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

SPEED_OF_LIGHT_NM_GHZ = 2.99792458e8  # c expressed in nm * GHz
TIME_BANDWIDTH_GAUSSIAN = 0.44  # FWHM duration-bandwidth product of a Gaussian pulse
_SQRT2 = 2.0**0.5


@dataclass(frozen=True)
class BandwidthModel:
    """Pump bandwidth and collection-filter bandwidths, all in GHz."""

    pump_bandwidth_ghz: float
    signal_filter_ghz: float
    idler_filter_ghz: float

    def __post_init__(self) -> None:
        for name in ("pump_bandwidth_ghz", "signal_filter_ghz", "idler_filter_ghz"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def signal_band_area(self) -> float:
        """Overlap area (GHz^2) of the pump strip with the signal filter strip."""
        return _SQRT2 * self.pump_bandwidth_ghz * self.signal_filter_ghz

    @property
    def idler_band_area(self) -> float:
        """Overlap area (GHz^2) of the pump strip with the idler filter strip."""
        return _SQRT2 * self.pump_bandwidth_ghz * self.idler_filter_ghz

    @property
    def joint_filter_area(self) -> float:
        """Area (GHz^2) of the rectangle where both filters pass."""
        return self.signal_filter_ghz * self.idler_filter_ghz

    @property
    def within_validity(self) -> bool:
        """True when each filter is narrower than the pump band.

        Only then does the filter rectangle sit inside the pump strip, so
        the area ratios below hold without truncation corrections.
        """
        return (
            self.signal_filter_ghz < self.pump_bandwidth_ghz
            and self.idler_filter_ghz < self.pump_bandwidth_ghz
        )


@dataclass(frozen=True)
class HeraldingMeasurement:
    """Measured coincidence and singles rates, with implied efficiencies."""

    coincidence_rate: float
    signal_singles: float
    idler_singles: float

    def __post_init__(self) -> None:
        for name in ("coincidence_rate", "signal_singles", "idler_singles"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.coincidence_rate > self.signal_singles + 1e-12 or (
            self.coincidence_rate > self.idler_singles + 1e-12
        ):
            raise ValueError("coincidence rate cannot exceed either singles rate")

    @property
    def signal_efficiency(self) -> float:
        """Probability the signal photon arrives given its twin was detected."""
        if self.idler_singles == 0.0:
            raise ValueError("signal_efficiency undefined without idler singles")
        return self.coincidence_rate / self.idler_singles

    @property
    def idler_efficiency(self) -> float:
        """Probability the idler photon arrives given its twin was detected."""
        if self.signal_singles == 0.0:
            raise ValueError("idler_efficiency undefined without signal singles")
        return self.coincidence_rate / self.signal_singles


def heralding_bound(model: BandwidthModel) -> tuple[float, float]:
    """Filter-limited heralding efficiencies (signal, idler).

    Each equals the joint-filter area over the partner arm's band area,
    which reduces to filter_width / (sqrt(2) * pump_width).  Outside the
    validity regime the ratio is clamped at 1 with a warning instead of
    extrapolating the area geometry.
    """
    if not model.within_validity:
        warnings.warn(
            "filter bandwidth exceeds the pump bandwidth; the box-overlap "
            "model is outside its validity regime, clamping efficiencies at 1",
            stacklevel=2,
        )
    eta_signal = model.joint_filter_area / model.idler_band_area
    eta_idler = model.joint_filter_area / model.signal_band_area
    return min(eta_signal, 1.0), min(eta_idler, 1.0)


def loss_chain(bound: float, factors: list[float] | tuple[float, ...]) -> float:
    """Multiply a heralding bound by a chain of transmission/efficiency factors."""
    out = float(bound)
    for i, f in enumerate(factors):
        if not 0.0 <= f <= 1.0:
            raise ValueError(f"loss factor {i} is {f!r}, outside [0, 1]")
        out *= f
    return out


def infer_coupling(measured: float, expected: float) -> float:
    """Residual coupling efficiency explaining measured vs expected heralding."""
    if expected <= 0.0:
        raise ValueError("expected heralding must be positive")
    ratio = measured / expected
    if ratio > 1.0:
        warnings.warn(
            f"measured heralding {measured!r} exceeds the model expectation "
            f"{expected!r}; clamping inferred coupling at 1",
            stacklevel=2,
        )
        return 1.0
    return ratio


class ConjugateBandwidth(NamedTuple):
    """Partner-photon spectrum implied by energy conservation."""

    idler_wavelength_nm: float
    idler_width_nm: float
    pump_bandwidth_ghz: float


def conjugate_bandwidth(
    signal_wavelength_nm: float,
    signal_width_nm: float,
    pump_wavelength_nm: float,
    pump_duration_ps: float,
    time_bandwidth: float = TIME_BANDWIDTH_GAUSSIAN,
) -> ConjugateBandwidth:
    """Idler wavelength and width from the signal spectrum and pump pulse.

    Energy conservation fixes 1/idler = 1/pump - 1/signal.  Frequency
    widths add (box-convolution of the signal filter with the pump band),
    with the pump width taken from its pulse duration via the
    time-bandwidth product.
    """
    if pump_wavelength_nm <= 0.0 or signal_wavelength_nm <= 0.0:
        raise ValueError("wavelengths must be positive")
    if signal_wavelength_nm <= pump_wavelength_nm:
        raise ValueError(
            "signal wavelength must exceed the pump wavelength for pair emission"
        )
    if signal_width_nm < 0.0 or pump_duration_ps <= 0.0:
        raise ValueError("signal width must be nonnegative and pump duration positive")

    inv_idler = 1.0 / pump_wavelength_nm - 1.0 / signal_wavelength_nm
    idler_wavelength = 1.0 / inv_idler
    pump_bandwidth = 1000.0 * time_bandwidth / pump_duration_ps  # GHz from ps
    signal_bandwidth = (
        SPEED_OF_LIGHT_NM_GHZ * signal_width_nm / signal_wavelength_nm**2
    )
    idler_bandwidth = signal_bandwidth + pump_bandwidth
    idler_width = idler_bandwidth * idler_wavelength**2 / SPEED_OF_LIGHT_NM_GHZ
    return ConjugateBandwidth(idler_wavelength, idler_width, pump_bandwidth)
