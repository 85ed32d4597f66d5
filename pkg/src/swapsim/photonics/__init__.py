"""Photonic layer: Fock states, pair sources, detectors, the central
swap measurement, per-qubit analyzers, and the end-to-end bench."""

from .analyzer import (  # noqa: F401
    BASIS_CLICK,
    BASIS_IGNORE,
    BASIS_PHASE,
    BASIS_Z,
    OUTCOME_ANY,
    OUTCOME_CLICKED,
    OUTCOME_EARLY,
    OUTCOME_INVALID,
    OUTCOME_LATE,
    OUTCOME_MINUS,
    OUTCOME_PLUS,
    OUTCOME_SILENT,
    AnalyzerSetting,
    analyzer_povm,
    interferometer_map,
)
from .bsm import (  # noqa: F401
    COINCIDENCE,
    HERALD_FAIL,
    HERALD_SINGLET,
    HERALD_TRIPLET,
    HOM_CLASSES,
    NO_COINCIDENCE,
    RAIL_1,
    RAIL_2,
    SWAP_CLASSES,
    BsmParams,
    bsm_classify,
    hom_coincidence,
)
from .detection import (  # noqa: F401
    BIN_SEPARATION_S,
    DetectorParams,
    detect,
    landing_matrix,
    misbin_probability,
    pattern_distribution,
)
from .experiment import (  # noqa: F401
    DISCARDED,
    DISCARDED_KEY,
    PATH_A,
    PATH_B,
    PATH_C,
    PATH_D,
    RAIL_CELLS,
    ExperimentConfig,
    HomResult,
    SwapResult,
    hom_visibility_bound,
    run_hom,
    run_swap,
    scan_settings,
    tomography_settings,
)
from .fock import (  # noqa: F401
    EARLY,
    LATE,
    FockState,
    ModeLabel,
    apply_isometry,
    apply_loss,
    beam_splitter,
    fock_basis,
    trace_out_branches,
)
from .sources import (  # noqa: F401
    NOISE_CHANNELS,
    PAIR_STATISTICS,
    SourceParams,
    pair_number_probs,
    source_modes,
    spdc_components,
    spdc_state,
)
