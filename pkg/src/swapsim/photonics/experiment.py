"""End-to-end bench: two pair sources, a central swap measurement, and
per-qubit analyzers, evaluated exactly and then sampled.

The quantum state entering the detectors is identical for every pulse,
so the bench computes the exact joint distribution over (swap outcome,
analyzer outcome, analyzer outcome) once per setting and then draws any
number of pulses from a multinomial.  Sampling cost is independent of
the pulse count, which makes rare fourfold coincidences cheap.

Pipeline per noise component:

1. build each source's photon-number expansion (sources module),
2. express partial distinguishability of the two interfering partner
   photons by splitting one partner path into a shared and a private
   spectral slot (amplitude overlap = configured value),
3. interfere the partner paths on the central 50:50 beam splitter,
4. group amplitudes by the rail occupation, which detection measures,
   giving one sub-normalized branch on the kept qubit paths per rail
   pattern; rail click patterns are classified by the swap rules with
   the 1533 nm detector model folded in exactly,
5. accumulate one density operator over the two kept paths per swap
   class; analyzer measurement operators (795 nm detector model folded
   in) contract against them to give exact outcome probabilities.

Everything downstream (tomography, interference scans, source-power
sweeps) consumes these distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analyzer import (
    BASIS_CLICK,
    BASIS_IGNORE,
    BASIS_PHASE,
    BASIS_Z,
    OUTCOME_ANY,
    OUTCOME_CLICKED,
    AnalyzerSetting,
    analyzer_povm,
)
from .bsm import (
    COINCIDENCE,
    HOM_CLASSES,
    RAIL_1,
    RAIL_2,
    SWAP_CLASSES,
    BsmParams,
    bsm_classify,
    hom_coincidence,
)
from .detection import DetectorParams, pattern_distribution
from .fock import EARLY, LATE, ModeLabel, apply_isometry, fock_basis
from .sources import SourceParams, source_modes, spdc_components

PATH_A = "A"
PATH_B = "B"
PATH_C = "C"
PATH_D = "D"

QUBIT_WAVELENGTH = 795
PARTNER_WAVELENGTH = 1533

SLOT_SHARED = "common"
SLOT_EXTRA = "own"

MODE_SWAP = "swap"
MODE_HOM = "hom"

DISCARDED = "discarded"
DISCARDED_KEY = (DISCARDED, "", "")

RAIL_CELLS = (
    (RAIL_1, EARLY),
    (RAIL_1, LATE),
    (RAIL_2, EARLY),
    (RAIL_2, LATE),
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one bench run.

    Defaults mirror the deployed tabletop hardware: two pair sources at
    equal brightness whose stored qubits differ by a pi pump phase, an
    amplitude overlap of sqrt(0.89) at the central beam splitter, and
    end-to-end detection efficiencies of 1.96% (795 nm) and 5.8%
    (1533 nm).  truncation is the maximum simulated pair number per
    source per pulse.
    """

    source_ab: SourceParams = SourceParams(
        mu=0.191, phase=0.0, state_fidelity=0.995, noise_channel="dephasing"
    )
    source_cd: SourceParams = SourceParams(
        mu=0.191, phase=math.pi, state_fidelity=0.995, noise_channel="dephasing"
    )
    bsm: BsmParams = BsmParams(overlap=math.sqrt(0.89))
    detector_795: DetectorParams = DetectorParams(
        efficiency=0.0196, dark_rate_hz=10.0
    )
    detector_1533: DetectorParams = DetectorParams(
        efficiency=0.058, dark_rate_hz=10.0
    )
    truncation: int = 2
    bin_separation_ns: float = 1.4

    def __post_init__(self) -> None:
        if self.truncation < 2:
            raise ValueError(
                f"truncation must be at least 2 pairs, got {self.truncation}"
            )
        if self.bin_separation_ns <= 0.0:
            raise ValueError("bin_separation_ns must be positive")


def hom_visibility_bound(pump_duration_ps: float, coherence_time_ps: float) -> float:
    """Best two-photon interference visibility for mismatched timescales.

    Photons heralded from pulses longer than their coherence time carry
    timing which-path information; the achievable dip visibility is
    1/sqrt(1 + (duration/coherence)^2).
    """
    if pump_duration_ps <= 0.0 or coherence_time_ps <= 0.0:
        raise ValueError("timescales must be positive")
    ratio = pump_duration_ps / coherence_time_ps
    return 1.0 / math.sqrt(1.0 + ratio * ratio)


def tomography_settings() -> tuple[tuple[AnalyzerSetting, AnalyzerSetting], ...]:
    """The nine analyzer-pair configurations for two-qubit tomography."""
    bases = (
        AnalyzerSetting(BASIS_PHASE, 0.0),
        AnalyzerSetting(BASIS_PHASE, math.pi / 2.0),
        AnalyzerSetting(BASIS_Z),
    )
    return tuple((a, d) for a in bases for d in bases)


def scan_settings(
    phases: tuple[float, ...], fixed_phase: float = 0.0
) -> tuple[tuple[AnalyzerSetting, AnalyzerSetting], ...]:
    """Analyzer pairs sweeping one phase against a fixed partner phase."""
    fixed = AnalyzerSetting(BASIS_PHASE, fixed_phase)
    return tuple((AnalyzerSetting(BASIS_PHASE, p), fixed) for p in phases)


def _slot_embedding(
    overlap: float,
) -> dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]]:
    """Split one partner path into shared/private spectral slots.

    The interfering photon from the other source lives entirely in the
    shared slot, so the amplitude overlap between the two wave packets
    equals the configured value.
    """
    spill = math.sqrt(max(0.0, 1.0 - overlap * overlap))
    mapping: dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]] = {}
    for t in (EARLY, LATE):
        src = ModeLabel(PARTNER_WAVELENGTH, PATH_B, t, SLOT_SHARED)
        terms: list[tuple[complex, ModeLabel]] = []
        if overlap > 0.0:
            terms.append((complex(overlap), src))
        if spill > 0.0:
            terms.append(
                (complex(spill), ModeLabel(PARTNER_WAVELENGTH, PATH_B, t, SLOT_EXTRA))
            )
        mapping[src] = tuple(terms)
    return mapping


def _swap_mapping(
    modes: tuple[ModeLabel, ...],
) -> dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]]:
    """Central 50:50 beam splitter from the partner paths onto two rails,
    acting separately on every (time-bin, slot) mode pair."""
    by_bin_slot: dict[tuple[int, str], dict[str, ModeLabel]] = {}
    for m in modes:
        if m.spatial in (PATH_B, PATH_C):
            by_bin_slot.setdefault((m.temporal, m.slot), {})[m.spatial] = m
    inv = 1.0 / math.sqrt(2.0)
    mapping: dict[ModeLabel, tuple[tuple[complex, ModeLabel], ...]] = {}
    for (t, slot), present in sorted(by_bin_slot.items()):
        r1 = ModeLabel(PARTNER_WAVELENGTH, RAIL_1, t, slot)
        r2 = ModeLabel(PARTNER_WAVELENGTH, RAIL_2, t, slot)
        if PATH_B in present:
            mapping[present[PATH_B]] = ((inv, r1), (inv, r2))
        if PATH_C in present:
            mapping[present[PATH_C]] = ((inv, r1), (-inv, r2))
    return mapping


def _ordered_positions(modes: tuple[ModeLabel, ...], spatial: str) -> list[int]:
    tagged = [(m.temporal, i) for i, m in enumerate(modes) if m.spatial == spatial]
    return [i for _, i in sorted(tagged)]


class _Bench:
    """Exact outcome distributions for one experiment configuration.

    Builds, once, a density operator over the two kept qubit paths for
    every swap-measurement class; analyzer settings then contract
    against those operators per call.
    """

    def __init__(
        self,
        config: ExperimentConfig,
        mode: str = MODE_SWAP,
        overlap: float | None = None,
        truncation: int | None = None,
        drop_multi_pair: bool = False,
    ):
        self.config = config
        self.mode = mode
        self.drop_multi_pair = drop_multi_pair
        self.n_max = config.truncation if truncation is None else truncation
        self.classes = SWAP_CLASSES if mode == MODE_SWAP else HOM_CLASSES
        xi = config.bsm.overlap if overlap is None else overlap

        basis = fock_basis(2, self.n_max)
        index = {occ: i for i, occ in enumerate(basis)}
        dim = len(basis)
        self.dim = dim

        comps_ab = spdc_components(
            config.source_ab,
            self.n_max,
            source_modes(PATH_A, PATH_B),
            drop_multi_pair=drop_multi_pair,
        )
        comps_cd = spdc_components(
            config.source_cd,
            self.n_max,
            source_modes(PATH_D, PATH_C),
            drop_multi_pair=drop_multi_pair,
        )
        if xi < 1.0:
            embed = _slot_embedding(xi)
            comps_ab = [(w, apply_isometry(s, embed)) for w, s in comps_ab]

        n_classes = len(self.classes)
        rho = [np.zeros((dim * dim, dim * dim), dtype=complex) for _ in range(n_classes)]
        kept = 0.0
        class_cache: dict[tuple[int, ...], np.ndarray] = {}

        for w_ab, state_ab in comps_ab:
            for w_cd, state_cd in comps_cd:
                weight = w_ab * w_cd
                st = state_ab.tensor(state_cd)
                st = apply_isometry(st, _swap_mapping(st.modes))

                pos_a = _ordered_positions(st.modes, PATH_A)
                pos_d = _ordered_positions(st.modes, PATH_D)
                rail = [
                    (i, RAIL_CELLS.index((m.spatial, m.temporal)))
                    for i, m in enumerate(st.modes)
                    if m.spatial in (RAIL_1, RAIL_2)
                ]

                branches: dict[tuple[int, ...], np.ndarray] = {}
                for occ, amp in st.amplitudes.items():
                    rail_occ = tuple(occ[i] for i, _ in rail)
                    ia = index[tuple(occ[p] for p in pos_a)]
                    idd = index[tuple(occ[p] for p in pos_d)]
                    mat = branches.get(rail_occ)
                    if mat is None:
                        mat = np.zeros((dim, dim), dtype=complex)
                        branches[rail_occ] = mat
                    mat[ia, idd] += amp

                vecs = []
                wts = []
                for rail_occ, mat in branches.items():
                    counts = [0, 0, 0, 0]
                    for (_, cell), n in zip(rail, rail_occ):
                        counts[cell] += n
                    sig = tuple(counts)
                    cv = class_cache.get(sig)
                    if cv is None:
                        cv = self._class_vector(sig)
                        class_cache[sig] = cv
                    v = mat.reshape(-1)
                    kept += weight * float(np.vdot(v, v).real)
                    vecs.append(v)
                    wts.append(weight * cv)

                varr = np.array(vecs)
                warr = np.array(wts)
                for k in range(n_classes):
                    rho[k] += (varr * warr[:, k : k + 1]).T @ varr.conj()

        self.rho = [r.reshape(dim, dim, dim, dim) for r in rho]
        self.discarded = max(0.0, 1.0 - kept)

    def _class_vector(self, sig: tuple[int, ...]) -> np.ndarray:
        dist = pattern_distribution(RAIL_CELLS, sig, self.config.detector_1533)
        vec = np.zeros(len(self.classes))
        pos = {c: i for i, c in enumerate(self.classes)}
        for clicked, p in dist.items():
            pattern = frozenset(RAIL_CELLS[i] for i in clicked)
            if self.mode == MODE_SWAP:
                label = bsm_classify(pattern, self.config.bsm.accept_psi_plus)
            else:
                label = hom_coincidence(pattern)
            vec[pos[label]] += p
        return vec

    def outcome_distribution(
        self, setting_a: AnalyzerSetting, setting_d: AnalyzerSetting
    ) -> dict[tuple[str, str, str], float]:
        """Exact P(swap class, outcome A, outcome D), plus the discarded
        mass when multi-pair emissions are dropped."""
        povm_a = analyzer_povm(
            setting_a, PATH_A, self.config.detector_795, self.n_max, QUBIT_WAVELENGTH
        )
        povm_d = analyzer_povm(
            setting_d, PATH_D, self.config.detector_795, self.n_max, QUBIT_WAVELENGTH
        )
        out: dict[tuple[str, str, str], float] = {}
        for k, cls in enumerate(self.classes):
            r4 = self.rho[k]
            for oa, ma in povm_a.items():
                for od, md in povm_d.items():
                    val = np.einsum("ji,lk,ikjl->", ma, md, r4).real
                    out[(cls, oa, od)] = max(float(val), 0.0)
        if self.drop_multi_pair:
            out[DISCARDED_KEY] = self.discarded
        return out


def _chunk_sizes(n: int, workers: int) -> list[int]:
    base, rem = divmod(n, workers)
    return [base + (1 if i < rem else 0) for i in range(workers)]


def _sample(
    probs: np.ndarray, n_pulses: int, seed: int, stream: int, workers: int
) -> np.ndarray:
    """Multinomial pulse counts, sharded deterministically by worker.

    Shard s draws its share of pulses from the generator seeded with
    (seed, stream, s); totals are bitwise reproducible for a given
    (seed, workers) pair.
    """
    p = np.clip(probs, 0.0, None)
    total = p.sum()
    if total <= 0.0:
        raise ValueError("outcome distribution has no probability mass")
    p = p / total
    counts = np.zeros(len(p), dtype=np.int64)
    for shard, m in enumerate(_chunk_sizes(n_pulses, workers)):
        if m == 0:
            continue
        rng = np.random.default_rng(np.random.SeedSequence((seed, stream, shard)))
        counts += rng.multinomial(m, p)
    return counts


def _validate_run_args(n_pulses: int, seed: int, workers: int) -> None:
    if n_pulses < 0:
        raise ValueError("n_pulses must be nonnegative")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if workers < 1:
        raise ValueError("workers must be at least 1")


@dataclass
class SwapResult:
    """Counts and exact distributions for a set of analyzer settings."""

    config: ExperimentConfig
    settings: tuple[tuple[AnalyzerSetting, AnalyzerSetting], ...]
    n_pulses: int
    seed: int
    workers: int
    qnd: bool
    probabilities: tuple[dict[tuple[str, str, str], float], ...]
    counts: tuple[dict[tuple[str, str, str], int], ...]


def run_swap(
    config: ExperimentConfig,
    *,
    n_pulses: int,
    seed: int,
    settings: tuple[tuple[AnalyzerSetting, AnalyzerSetting], ...] | None = None,
    qnd: bool = False,
    workers: int = 1,
) -> SwapResult:
    """Simulate the full swap experiment over analyzer settings.

    qnd=True post-selects, losslessly, on neither source emitting more
    than one pair (an idealized emission-number monitor); the removed
    pulses are reported under the 'discarded' key.
    """
    _validate_run_args(n_pulses, seed, workers)
    if settings is None:
        settings = tomography_settings()
    else:
        settings = tuple(settings)
    bench = _Bench(config, MODE_SWAP, drop_multi_pair=qnd)
    probabilities = []
    counts = []
    for i, (sa, sd) in enumerate(settings):
        dist = bench.outcome_distribution(sa, sd)
        keys = list(dist)
        drawn = _sample(
            np.array([dist[k] for k in keys]), n_pulses, seed, i, workers
        )
        probabilities.append(dist)
        counts.append({k: int(c) for k, c in zip(keys, drawn)})
    return SwapResult(
        config=config,
        settings=settings,
        n_pulses=n_pulses,
        seed=seed,
        workers=workers,
        qnd=qnd,
        probabilities=tuple(probabilities),
        counts=tuple(counts),
    )


@dataclass
class HomResult:
    """Two-photon interference run: matched overlap vs distinguishable.

    The reference run repeats the experiment with the interfering
    photons made fully distinguishable (overlap forced to zero), which
    plays the role of moving far off the dip.
    """

    config: ExperimentConfig
    n_pulses: int
    seed: int
    workers: int
    conditioned: bool
    qnd: bool
    truncation: int
    coincidence_key: tuple[str, str, str]
    matched_probabilities: dict[tuple[str, str, str], float]
    reference_probabilities: dict[tuple[str, str, str], float]
    matched_counts: dict[tuple[str, str, str], int]
    reference_counts: dict[tuple[str, str, str], int]

    @property
    def matched_coincidences(self) -> int:
        return self.matched_counts[self.coincidence_key]

    @property
    def reference_coincidences(self) -> int:
        return self.reference_counts[self.coincidence_key]

    @property
    def visibility(self) -> float:
        """Sampled dip visibility 1 - matched/reference."""
        ref = self.reference_coincidences
        if ref == 0:
            raise ValueError("no reference coincidences recorded")
        return 1.0 - self.matched_coincidences / ref

    @property
    def visibility_sigma(self) -> float:
        """Poisson propagation of the sampled visibility."""
        a = self.matched_coincidences
        b = self.reference_coincidences
        if b == 0:
            raise ValueError("no reference coincidences recorded")
        return math.sqrt(a / b**2 + a**2 / b**3)

    @property
    def exact_visibility(self) -> float:
        """Visibility of the underlying exact distributions."""
        pm = self.matched_probabilities[self.coincidence_key]
        pr = self.reference_probabilities[self.coincidence_key]
        if pr == 0.0:
            raise ValueError("reference coincidence probability is zero")
        return 1.0 - pm / pr


def run_hom(
    config: ExperimentConfig,
    *,
    n_pulses: int,
    seed: int,
    conditioned: bool = False,
    qnd: bool = False,
    workers: int = 1,
    truncation: int | None = None,
) -> HomResult:
    """Two-photon interference at the central beam splitter.

    Unconditioned: count pulses where both rails click in the same time
    bin.  Conditioned: additionally require a click on each source's
    kept-photon detector, selecting one-pair-per-source events.
    """
    _validate_run_args(n_pulses, seed, workers)
    n_max = config.truncation if truncation is None else truncation
    setting = AnalyzerSetting(BASIS_CLICK if conditioned else BASIS_IGNORE)
    side = OUTCOME_CLICKED if conditioned else OUTCOME_ANY
    key = (COINCIDENCE, side, side)

    tables = []
    for stream, overlap in enumerate((None, 0.0)):
        bench = _Bench(
            config,
            MODE_HOM,
            overlap=overlap,
            truncation=n_max,
            drop_multi_pair=qnd,
        )
        dist = bench.outcome_distribution(setting, setting)
        keys = list(dist)
        drawn = _sample(
            np.array([dist[k] for k in keys]), n_pulses, seed, stream, workers
        )
        tables.append((dist, {k: int(c) for k, c in zip(keys, drawn)}))

    (p_matched, c_matched), (p_reference, c_reference) = tables
    return HomResult(
        config=config,
        n_pulses=n_pulses,
        seed=seed,
        workers=workers,
        conditioned=conditioned,
        qnd=qnd,
        truncation=n_max,
        coincidence_key=key,
        matched_probabilities=p_matched,
        reference_probabilities=p_reference,
        matched_counts=c_matched,
        reference_counts=c_reference,
    )
