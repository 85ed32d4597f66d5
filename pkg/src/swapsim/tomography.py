"""Maximum-likelihood two-qubit reconstruction and fringe fitting.

Heralded analyzer counts are Poisson with an unknown overall flux, so
the reconstruction profiles the likelihood over that scale: only the
relative exposures of the measurement operators matter (a phase-basis
outcome collects half the flux of a bin-basis outcome).  Up to a
counts-only constant the profiled objective is

    f(rho) = sum_j n_j log(s_j tr(rho Pi_j)) - N log(sum_j s_j tr(rho Pi_j)),

the multinomial log-likelihood of the observed split across outcomes.

The state is parameterized as rho = T^dag T / tr(T^dag T), which is
physical by construction, and fitted by damped gradient ascent from
several deterministic starting points.  The optimizer is batched over
its leading axis so the multi-start point estimate and the Poisson
bootstrap run through one vectorized code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .photonics import (
    BASIS_PHASE,
    BASIS_Z,
    HERALD_SINGLET,
    OUTCOME_EARLY,
    OUTCOME_LATE,
    OUTCOME_MINUS,
    OUTCOME_PLUS,
    AnalyzerSetting,
    SwapResult,
    tomography_settings,
)
from .qstate import DensityMatrix, phase_projector, z_projector

_TAU = 2.0 * math.pi
_PROB_FLOOR = 1e-15


# ------------------------------------------------------------------ design


def _setting_effects(
    setting: AnalyzerSetting,
) -> tuple[tuple[str, np.ndarray, float], ...]:
    """(outcome, single-qubit projector, exposure) for one analyzer."""
    if setting.basis == BASIS_Z:
        return (
            (OUTCOME_EARLY, z_projector("early").matrix, 1.0),
            (OUTCOME_LATE, z_projector("late").matrix, 1.0),
        )
    if setting.basis == BASIS_PHASE:
        return (
            (OUTCOME_PLUS, phase_projector(setting.phase).matrix, 0.5),
            (
                OUTCOME_MINUS,
                phase_projector((setting.phase + math.pi) % _TAU).matrix,
                0.5,
            ),
        )
    raise ValueError(
        f"tomography needs bin or phase readout, got basis {setting.basis!r}"
    )


@dataclass(frozen=True)
class TomographyDesign:
    """Measurement operators, relative exposures, and count labels.

    labels[j] = (setting index, outcome A, outcome D) names the count
    that belongs to operators[j].
    """

    settings: tuple[tuple[AnalyzerSetting, AnalyzerSetting], ...]
    operators: np.ndarray
    exposures: np.ndarray
    labels: tuple[tuple[int, str, str], ...]


def tomography_design(
    settings: tuple[tuple[AnalyzerSetting, AnalyzerSetting], ...] | None = None,
) -> TomographyDesign:
    """Two-qubit product operators for a set of analyzer-pair settings."""
    if settings is None:
        settings = tomography_settings()
    else:
        settings = tuple(settings)
    operators: list[np.ndarray] = []
    exposures: list[float] = []
    labels: list[tuple[int, str, str]] = []
    for i, (sa, sd) in enumerate(settings):
        for oa, proj_a, ea in _setting_effects(sa):
            for od, proj_d, ed in _setting_effects(sd):
                operators.append(np.kron(proj_a, proj_d))
                exposures.append(ea * ed)
                labels.append((i, oa, od))
    return TomographyDesign(
        settings=settings,
        operators=np.array(operators),
        exposures=np.array(exposures),
        labels=tuple(labels),
    )


def counts_from_run(
    result: SwapResult,
    herald: str = HERALD_SINGLET,
    design: TomographyDesign | None = None,
) -> np.ndarray:
    """Extract the herald-gated analyzer counts in design order."""
    if design is None:
        design = tomography_design(result.settings)
    if design.settings != result.settings:
        raise ValueError("design settings do not match the run's settings")
    counts = np.zeros(len(design.labels), dtype=np.int64)
    for j, (i, oa, od) in enumerate(design.labels):
        counts[j] = result.counts[i][(herald, oa, od)]
    return counts


# --------------------------------------------------------------- optimizer


def _rho_of(t: np.ndarray) -> np.ndarray:
    a = t.conj().swapaxes(-2, -1) @ t
    tra = np.einsum("...ii->...", a).real
    return a / tra[..., None, None]


def _objective(
    t: np.ndarray, freq: np.ndarray, ops: np.ndarray, exps: np.ndarray
) -> np.ndarray:
    """Per-item profiled log-likelihood divided by the total counts."""
    rho = _rho_of(t)
    q = np.maximum(np.einsum("bxy,jyx->bj", rho, ops).real, _PROB_FLOOR)
    p = q * exps
    return (freq * np.log(p)).sum(axis=1) - np.log(p.sum(axis=1))


def _gradient(
    t: np.ndarray, freq: np.ndarray, ops: np.ndarray, exps: np.ndarray
) -> np.ndarray:
    """Ascent direction paired with _objective under T -> T + step * grad."""
    a = t.conj().swapaxes(-2, -1) @ t
    tra = np.einsum("bii->b", a).real
    rho = a / tra[:, None, None]
    q = np.maximum(np.einsum("bxy,jyx->bj", rho, ops).real, _PROB_FLOOR)
    big_q = (q * exps).sum(axis=1)
    coef = freq / q - exps[None, :] / big_q[:, None]
    g = np.einsum("bj,jxy->bxy", coef, ops)
    tr_rho_g = np.einsum("bxy,byx->b", rho, g).real
    eye = np.eye(t.shape[-1])
    g_amb = (g - tr_rho_g[:, None, None] * eye) / tra[:, None, None]
    return 2.0 * (t @ g_amb)


def _ascent(
    counts_b: np.ndarray,
    ops: np.ndarray,
    exps: np.ndarray,
    t0: np.ndarray,
    iterations: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Backtracking gradient ascent, batched over the leading axis."""
    totals = counts_b.sum(axis=1, keepdims=True)
    if np.any(totals <= 0):
        raise ValueError("every count vector needs at least one event")
    freq = counts_b / totals
    t = t0.astype(complex)
    step = np.full(len(t0), 0.05)
    f = _objective(t, freq, ops, exps)
    for _ in range(iterations):
        grad = _gradient(t, freq, ops, exps)
        cand = t + step[:, None, None] * grad
        f_new = _objective(cand, freq, ops, exps)
        ok = f_new >= f
        t = np.where(ok[:, None, None], cand, t)
        f = np.where(ok, f_new, f)
        step = np.where(ok, step * 1.2, step * 0.5)
        if float(step.max()) < 1e-14:
            break
    return t, f


def _starting_points(starts: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0xD0E)))
    t0 = np.zeros((starts, 4, 4), dtype=complex)
    t0[0] = np.eye(4)
    for b in range(1, starts):
        t0[b] = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return t0


def log_likelihood(
    rho: DensityMatrix | np.ndarray,
    counts: np.ndarray,
    design: TomographyDesign | None = None,
) -> float:
    """Profiled log-likelihood of a state, up to a counts-only constant."""
    if design is None:
        design = tomography_design()
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    counts = np.asarray(counts, dtype=float)
    q = np.maximum(
        np.einsum("jyx,xy->j", design.operators, m).real, _PROB_FLOOR
    )
    p = q * design.exposures
    return float((counts * np.log(p)).sum() - counts.sum() * np.log(p.sum()))


@dataclass(frozen=True)
class TomographyResult:
    """Point estimate of the heralded two-qubit state."""

    rho: DensityMatrix
    log_likelihood: float
    starts: int
    iterations: int


def _validated_counts(counts: np.ndarray, design: TomographyDesign) -> np.ndarray:
    counts = np.asarray(counts)
    if counts.shape != (len(design.exposures),):
        raise ValueError(
            f"expected {len(design.exposures)} counts, got shape {counts.shape}"
        )
    if np.any(counts < 0):
        raise ValueError("counts must be nonnegative")
    if counts.sum() <= 0:
        raise ValueError("at least one event is required")
    return counts.astype(float)


def mle_reconstruct(
    counts: np.ndarray,
    design: TomographyDesign | None = None,
    *,
    starts: int = 10,
    iterations: int = 1200,
    seed: int = 0,
) -> TomographyResult:
    """Best physical two-qubit state for the observed counts."""
    if design is None:
        design = tomography_design()
    counts = _validated_counts(counts, design)
    if starts < 1:
        raise ValueError("starts must be at least 1")
    t0 = _starting_points(starts, seed)
    batch = np.tile(counts, (starts, 1))
    t, f = _ascent(batch, design.operators, design.exposures, t0, iterations)
    best = int(np.argmax(f))
    rho = _rho_of(t[best])
    rho = (rho + rho.conj().T) / 2.0
    return TomographyResult(
        rho=DensityMatrix(rho),
        log_likelihood=float(f[best] * counts.sum()),
        starts=starts,
        iterations=iterations,
    )


def bootstrap_reconstruct(
    counts: np.ndarray,
    design: TomographyDesign | None = None,
    *,
    resamples: int = 100,
    seed: int = 0,
    iterations: int = 800,
) -> np.ndarray:
    """Poisson-resampled reconstructions, shaped (resamples, 4, 4).

    Each resample redraws every count from a Poisson law at the observed
    value and refits from the point estimate, so spreads of any derived
    quantity over the first axis estimate its statistical uncertainty.
    """
    if resamples < 100:
        raise ValueError(
            f"at least 100 resamples are needed for stable intervals, "
            f"got {resamples}"
        )
    if design is None:
        design = tomography_design()
    counts = _validated_counts(counts, design)
    point = mle_reconstruct(counts, design, seed=seed)
    anchor = point.rho.matrix + 1e-12 * np.eye(4)
    t_warm = np.linalg.cholesky(anchor).conj().T
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0xB00)))
    drawn = rng.poisson(counts, size=(resamples, len(counts))).astype(float)
    empty = drawn.sum(axis=1) <= 0
    drawn[empty] = counts
    t0 = np.tile(t_warm, (resamples, 1, 1))
    t, _ = _ascent(drawn, design.operators, design.exposures, t0, iterations)
    rho = _rho_of(t)
    return (rho + rho.conj().swapaxes(-2, -1)) / 2.0


# ------------------------------------------------------------- fringe fit


@dataclass(frozen=True)
class FringeFit:
    """Sinusoidal fit N(phase) = baseline * (1 + V cos(freq*phase - offset))."""

    baseline: float
    visibility: float
    phase_offset: float
    frequency: float
    visibility_sigma: float
    residual_rms: float

    def predict(self, phases: np.ndarray) -> np.ndarray:
        phases = np.asarray(phases, dtype=float)
        return self.baseline * (
            1.0
            + self.visibility
            * np.cos(self.frequency * phases - self.phase_offset)
        )


def _linear_fringe(
    phases: np.ndarray, counts: np.ndarray, freq: float
) -> tuple[np.ndarray, np.ndarray, float]:
    design = np.column_stack(
        [np.ones_like(phases), np.cos(freq * phases), np.sin(freq * phases)]
    )
    coef, *_ = np.linalg.lstsq(design, counts, rcond=None)
    resid = counts - design @ coef
    return coef, design, float(resid @ resid)


def _golden_frequency(
    phases: np.ndarray, counts: np.ndarray, lo: float, hi: float
) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = _linear_fringe(phases, counts, c)[2]
    fd = _linear_fringe(phases, counts, d)[2]
    for _ in range(80):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = _linear_fringe(phases, counts, c)[2]
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = _linear_fringe(phases, counts, d)[2]
        if b - a < 1e-10:
            break
    return (a + b) / 2.0


def fit_visibility(
    phases: np.ndarray,
    counts: np.ndarray,
    *,
    frequency: float = 1.0,
    fit_frequency: bool = False,
    frequency_window: tuple[float, float] = (0.5, 2.0),
) -> FringeFit:
    """Least-squares fringe through count-vs-analyzer-phase data.

    With fit_frequency the phase-to-fringe frequency is profiled out: a
    grid over frequency_window followed by a golden-section refinement,
    with the sinusoid's linear parameters solved exactly at each trial
    frequency.  The visibility error bar is the delta-method propagation
    of the ordinary least-squares covariance, taken at the fitted
    frequency (counts are treated as homoscedastic).
    """
    phases = np.asarray(phases, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if phases.shape != counts.shape or phases.ndim != 1:
        raise ValueError("phases and counts must be matching 1-d arrays")
    n_params = 4 if fit_frequency else 3
    if len(phases) <= n_params:
        raise ValueError(
            f"need more than {n_params} points to fit and report an error bar"
        )
    if fit_frequency:
        lo, hi = frequency_window
        if not 0.0 < lo < hi:
            raise ValueError("frequency_window must be increasing and positive")
        grid = np.linspace(lo, hi, 151)
        losses = [_linear_fringe(phases, counts, w)[2] for w in grid]
        k = int(np.argmin(losses))
        a = grid[max(0, k - 1)]
        b = grid[min(len(grid) - 1, k + 1)]
        frequency = _golden_frequency(phases, counts, a, b)
    coef, design, rss = _linear_fringe(phases, counts, frequency)
    base, cos_c, sin_c = coef
    if base <= 0.0:
        raise ValueError("fitted fringe baseline is not positive")
    amp = math.hypot(cos_c, sin_c)
    visibility = amp / base
    offset = math.atan2(sin_c, cos_c)
    dof = len(phases) - n_params
    noise = rss / dof
    cov = noise * np.linalg.inv(design.T @ design)
    if amp < 1e-12:
        sigma = math.sqrt(max(0.0, (cov[1, 1] + cov[2, 2]) / 2.0)) / base
    else:
        grad = np.array([-visibility / base, cos_c / (base * amp), sin_c / (base * amp)])
        sigma = math.sqrt(max(0.0, grad @ cov @ grad))
    return FringeFit(
        baseline=float(base),
        visibility=float(visibility),
        phase_offset=float(offset),
        frequency=float(frequency),
        visibility_sigma=float(sigma),
        residual_rms=math.sqrt(rss / len(phases)),
    )
