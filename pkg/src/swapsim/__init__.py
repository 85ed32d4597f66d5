"""Simulator and analysis toolkit for time-bin entanglement swapping."""

__version__ = "1.0.0"

from .qstate import (  # noqa: F401
    BellKind,
    DensityMatrix,
    Ket,
    Projector,
    ProjectorBasis,
    bell_state,
    expectation,
    partial_trace,
    phase_projector,
    psd_sqrt,
    tensor,
    z_projector,
)
from .metrics import (  # noqa: F401
    MaxEntFit,
    WernerFit,
    concurrence,
    fidelity,
    max_entangled_ket,
    nearest_max_entangled,
    nearest_werner,
    separable_visibility_bound,
    werner_state,
)
from .heralding import (  # noqa: F401
    BandwidthModel,
    ConjugateBandwidth,
    HeraldingMeasurement,
    conjugate_bandwidth,
    heralding_bound,
    infer_coupling,
    loss_chain,
)
from .tomography import (  # noqa: F401
    FringeFit,
    TomographyDesign,
    TomographyResult,
    bootstrap_reconstruct,
    counts_from_run,
    fit_visibility,
    log_likelihood,
    mle_reconstruct,
    tomography_design,
)
from .photonics import (  # noqa: F401
    AnalyzerSetting,
    BsmParams,
    DetectorParams,
    ExperimentConfig,
    HomResult,
    SourceParams,
    SwapResult,
    hom_visibility_bound,
    run_hom,
    run_swap,
    scan_settings,
    tomography_settings,
)
from .config import (  # noqa: F401
    config_digest,
    dump_config,
    load_config,
    parse_config,
    save_config,
)
from .manifest import (  # noqa: F401
    RunManifest,
    build_manifest,
    manifest_json,
    read_manifest,
    write_manifest,
)
