"""Command-line front end.

Four subcommands cover the bench end to end:

  hom     two-photon interference dip between the sources' photons
  swap    full swap run, analyzed either as tomography or a phase scan
  herald  filter-limited heralding budget (closed forms, no sampling)
  sweep   heralded-state concurrence versus source brightness

Every run writes delimited tables, a rendered figure per analysis, and
a manifest.json with enough provenance to reproduce the outputs.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import report
from .config import load_config, parse_config
from .heralding import (
    BandwidthModel,
    conjugate_bandwidth,
    heralding_bound,
    infer_coupling,
    loss_chain,
)
from .manifest import build_manifest, write_manifest
from .metrics import concurrence, fidelity, nearest_max_entangled, nearest_werner
from .photonics import (
    BASIS_PHASE,
    HERALD_SINGLET,
    HERALD_TRIPLET,
    OUTCOME_PLUS,
    AnalyzerSetting,
    ExperimentConfig,
    run_hom,
    run_swap,
    scan_settings,
    tomography_settings,
)
from .qstate import BellKind, bell_state
from .tomography import bootstrap_reconstruct, counts_from_run, fit_visibility, mle_reconstruct

_BASIS_LABELS = ("ee", "el", "le", "ll")
_HERALDS = {"singlet": HERALD_SINGLET, "triplet": HERALD_TRIPLET}


# ------------------------------------------------------------- arg parsing


def _pulse_count(text: str) -> int:
    """Accept plain integers, underscores, and scientific notation."""
    try:
        value = float(text.replace("_", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a pulse count: {text!r}") from exc
    if value < 0 or value != int(value):
        raise argparse.ArgumentTypeError(f"pulse count must be a nonnegative integer, got {text!r}")
    return int(value)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _default_workers() -> int:
    return max(1, int(os.environ.get("SWAPSIM_WORKERS", "1")))


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        type=Path,
        default=None,
        metavar="INI",
        help="experiment configuration file (default: the packaged bench calibration)",
    )
    parser.add_argument(
        "--pulses",
        type=_pulse_count,
        default=1_000_000,
        help="pump pulses per analyzer setting (default: %(default)s)",
    )
    parser.add_argument("--seed", type=int, default=0, help="random seed (default: %(default)s)")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="parallel workers (default: SWAPSIM_WORKERS or 1)",
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=Path("."),
        metavar="DIR",
        help="output directory (default: current directory)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapsim",
        description="Simulate and analyze a time-bin entanglement-swapping bench.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    hom = sub.add_parser("hom", help="two-photon interference dip")
    _add_run_options(hom)
    hom.add_argument(
        "--conditioned",
        action="store_true",
        help="restrict to pulses where both heralding monitors fired",
    )
    hom.add_argument(
        "--qnd",
        action="store_true",
        help="read the heralding monitors without detector loss or darks",
    )
    hom.add_argument(
        "--truncation",
        type=int,
        default=None,
        help="override the photon-number truncation for this run",
    )
    hom.set_defaults(handler=_cmd_hom)

    swap = sub.add_parser("swap", help="swap run with tomography or a phase scan")
    _add_run_options(swap)
    swap.add_argument(
        "--scan",
        type=int,
        default=None,
        metavar="N",
        help="scan one analyzer phase over N points instead of running tomography",
    )
    swap.add_argument(
        "--fixed-phase",
        type=float,
        default=0.0,
        help="partner analyzer phase during a scan (default: %(default)s)",
    )
    swap.add_argument(
        "--herald",
        choices=sorted(_HERALDS),
        default="singlet",
        help="swap outcome class to analyze (default: %(default)s)",
    )
    swap.add_argument(
        "--bootstrap",
        type=int,
        default=0,
        metavar="B",
        help="bootstrap resamples for tomography error bars (0 disables)",
    )
    swap.add_argument(
        "--qnd",
        action="store_true",
        help="read the swap detectors without loss or darks",
    )
    swap.set_defaults(handler=_cmd_swap)

    herald = sub.add_parser("herald", help="filter-limited heralding budget")
    herald.add_argument("--out", type=Path, default=Path("."), metavar="DIR")
    herald.add_argument("--pump-ghz", type=float, default=24.4, help="pump bandwidth (GHz)")
    herald.add_argument(
        "--signal-filter-ghz", type=float, default=6.0, help="signal collection filter (GHz)"
    )
    herald.add_argument(
        "--idler-filter-ghz", type=float, default=12.0, help="idler collection filter (GHz)"
    )
    herald.add_argument(
        "--signal-chain",
        type=_float_list,
        default=(0.50, 0.40, 0.85),
        help="extra signal-arm transmissions (comma-separated)",
    )
    herald.add_argument(
        "--idler-chain",
        type=_float_list,
        default=(0.70, 0.80, 0.85),
        help="extra idler-arm transmissions (comma-separated)",
    )
    herald.add_argument(
        "--measured-signal", type=float, default=0.0196, help="measured signal heralding"
    )
    herald.add_argument(
        "--measured-idler", type=float, default=0.058, help="measured idler heralding"
    )
    herald.add_argument("--signal-nm", type=float, default=795.0, help="signal wavelength (nm)")
    herald.add_argument(
        "--signal-width-nm", type=float, default=1.5, help="signal filter width (nm)"
    )
    herald.add_argument("--pump-nm", type=float, default=523.5, help="pump wavelength (nm)")
    herald.add_argument("--pump-ps", type=float, default=18.0, help="pump pulse duration (ps)")
    herald.set_defaults(handler=_cmd_herald)

    sweep = sub.add_parser("sweep", help="concurrence versus source brightness")
    _add_run_options(sweep)
    sweep.add_argument(
        "--mu",
        type=_float_list,
        default=(0.02, 0.05, 0.10, 0.191),
        help="mean pairs per pulse to sweep (comma-separated)",
    )
    sweep.add_argument(
        "--seeds",
        type=int,
        default=1,
        help="independent repetitions per brightness (default: %(default)s)",
    )
    sweep.add_argument(
        "--herald",
        choices=sorted(_HERALDS),
        default="singlet",
        help="swap outcome class to analyze (default: %(default)s)",
    )
    sweep.set_defaults(handler=_cmd_sweep)

    return parser


# --------------------------------------------------------------- plumbing


def default_config() -> ExperimentConfig:
    """The packaged bench calibration shipped with the library."""
    text = resources.files("swapsim").joinpath("configs/bench.ini").read_text()
    return parse_config(text)


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is None:
        return default_config()
    return load_config(args.config)


def _prepare_out(out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    return out


def _finish(
    out: Path,
    command: str,
    config: ExperimentConfig | None,
    args: argparse.Namespace,
    outputs: list[str],
) -> int:
    manifest = build_manifest(
        command=command,
        config=config,
        seed=getattr(args, "seed", 0),
        n_pulses=getattr(args, "pulses", 0),
        workers=getattr(args, "workers", None) or 1,
        outputs=tuple(outputs),
    )
    write_manifest(manifest, out / "manifest.json")
    print(f"wrote {', '.join([*outputs, 'manifest.json'])} in {out}")
    return 0


def _describe_setting(setting: AnalyzerSetting) -> str:
    if setting.basis == BASIS_PHASE:
        return f"phase({setting.phase:.6g})"
    return setting.basis


# ------------------------------------------------------------ subcommands


def _cmd_hom(args: argparse.Namespace, command: str) -> int:
    config = _resolve_config(args)
    out = _prepare_out(args.out)
    workers = args.workers or _default_workers()
    result = run_hom(
        config,
        n_pulses=args.pulses,
        seed=args.seed,
        conditioned=args.conditioned,
        qnd=args.qnd,
        workers=workers,
        truncation=args.truncation,
    )
    key = result.coincidence_key
    comments = [
        f"two-photon interference, conditioned={result.conditioned} qnd={result.qnd}",
        f"exact visibility {result.exact_visibility:.6f}",
    ]
    if result.reference_coincidences > 0:
        comments.append(
            f"sampled visibility {result.visibility:.6f} +/- {result.visibility_sigma:.6f}"
        )
        print(
            f"visibility = {result.visibility:.4f} +/- {result.visibility_sigma:.4f}"
            f" (exact {result.exact_visibility:.4f})"
        )
    else:
        comments.append("sampled visibility undefined: no reference coincidences")
        print(f"no reference coincidences; exact visibility {result.exact_visibility:.4f}")
    report.write_table(
        out / "hom.csv",
        {
            "arm": ["matched", "reference"],
            "coincidences": [result.matched_coincidences, result.reference_coincidences],
            "probability": [
                result.matched_probabilities[key],
                result.reference_probabilities[key],
            ],
        },
        comments=tuple(comments),
    )
    report.save_hom_figure(result, out / "hom.png")
    return _finish(out, command, config, args, ["hom.csv", "hom.png"])


def _write_counts_table(result, out: Path) -> None:
    rows: dict[str, list] = {
        "setting": [],
        "analyzer_a": [],
        "analyzer_d": [],
        "herald": [],
        "outcome_a": [],
        "outcome_d": [],
        "probability": [],
        "count": [],
    }
    for index, (setting_pair, probs, counts) in enumerate(
        zip(result.settings, result.probabilities, result.counts)
    ):
        for key in sorted(probs):
            rows["setting"].append(index)
            rows["analyzer_a"].append(_describe_setting(setting_pair[0]))
            rows["analyzer_d"].append(_describe_setting(setting_pair[1]))
            rows["herald"].append(key[0])
            rows["outcome_a"].append(key[1])
            rows["outcome_d"].append(key[2])
            rows["probability"].append(probs[key])
            rows["count"].append(counts[key])
    report.write_table(out / "counts.csv", rows, comments=("per-pulse outcome table",))


def _cmd_swap(args: argparse.Namespace, command: str) -> int:
    if args.scan is not None:
        return _cmd_swap_scan(args, command)
    config = _resolve_config(args)
    out = _prepare_out(args.out)
    workers = args.workers or _default_workers()
    result = run_swap(
        config,
        n_pulses=args.pulses,
        seed=args.seed,
        settings=tomography_settings(),
        qnd=args.qnd,
        workers=workers,
    )
    _write_counts_table(result, out)

    herald = _HERALDS[args.herald]
    counts = counts_from_run(result, herald=herald)
    events = int(counts.sum())
    mle = mle_reconstruct(counts, seed=args.seed)
    rho = mle.rho
    target = bell_state(BellKind.PSI_PLUS)
    ent_fit = nearest_max_entangled(rho)
    werner = nearest_werner(rho)
    values = {
        "heralded_events": float(events),
        "concurrence": concurrence(rho),
        "fidelity_vs_psi_plus": fidelity(rho, target),
        "fidelity_vs_nearest_max_entangled": ent_fit.fidelity,
        "werner_visibility": werner.v,
        "purity": float(np.trace(rho.matrix @ rho.matrix).real),
    }
    sigmas: dict[str, float] = {}
    if args.bootstrap:
        samples = bootstrap_reconstruct(counts, resamples=args.bootstrap, seed=args.seed)
        sigmas["concurrence"] = float(np.std([concurrence(s) for s in samples]))
        sigmas["fidelity_vs_psi_plus"] = float(np.std([fidelity(s, target) for s in samples]))
    report.write_table(
        out / "metrics.csv",
        {
            "metric": list(values),
            "value": [values[k] for k in values],
            "sigma": [sigmas.get(k, math.nan) for k in values],
        },
        comments=(f"heralded on the {args.herald} swap outcome",),
    )
    matrix = rho.matrix
    grid = [(r, c) for r in range(4) for c in range(4)]
    report.write_table(
        out / "state.csv",
        {
            "row": [_BASIS_LABELS[r] for r, _ in grid],
            "col": [_BASIS_LABELS[c] for _, c in grid],
            "real": [matrix[r, c].real for r, c in grid],
            "imag": [matrix[r, c].imag for r, c in grid],
        },
        comments=("reconstructed density matrix, basis ee, el, le, ll",),
    )
    report.save_state_figure(matrix, out / "state.png")
    print(f"heralded events: {events}")
    for name, value in values.items():
        if name == "heralded_events":
            continue
        tail = f" +/- {sigmas[name]:.4f}" if name in sigmas else ""
        print(f"{name} = {value:.4f}{tail}")
    return _finish(
        out, command, config, args, ["counts.csv", "metrics.csv", "state.csv", "state.png"]
    )


def _cmd_swap_scan(args: argparse.Namespace, command: str) -> int:
    if args.scan < 5:
        raise ValueError("a phase scan needs at least 5 points")
    config = _resolve_config(args)
    out = _prepare_out(args.out)
    workers = args.workers or _default_workers()
    phases = np.linspace(0.0, 2.0 * math.pi, args.scan, endpoint=False)
    result = run_swap(
        config,
        n_pulses=args.pulses,
        seed=args.seed,
        settings=scan_settings(tuple(phases), fixed_phase=args.fixed_phase),
        qnd=args.qnd,
        workers=workers,
    )
    herald = _HERALDS[args.herald]
    key = (herald, OUTCOME_PLUS, OUTCOME_PLUS)
    counts = np.array([table.get(key, 0) for table in result.counts], dtype=float)
    comments = [
        f"heralded (plus, plus) coincidences vs analyzer phase, herald={args.herald}",
        f"partner analyzer fixed at phase {args.fixed_phase:.6g}",
    ]
    try:
        fit = fit_visibility(phases, counts)
        comments.append(
            f"fringe fit: baseline {fit.baseline:.3f}, visibility {fit.visibility:.4f}"
            f" +/- {fit.visibility_sigma:.4f}, offset {fit.phase_offset:.4f}"
        )
        print(f"fringe visibility = {fit.visibility:.4f} +/- {fit.visibility_sigma:.4f}")
    except ValueError as exc:
        fit = None
        comments.append(f"fringe fit failed: {exc}")
        print(f"fringe fit failed: {exc}", file=sys.stderr)
    report.write_table(
        out / "scan.csv",
        {"phase": phases, "counts": counts},
        comments=tuple(comments),
    )
    report.save_scan_figure(phases, counts, fit, out / "scan.png")
    return _finish(out, command, config, args, ["scan.csv", "scan.png"])


def _cmd_herald(args: argparse.Namespace, command: str) -> int:
    out = _prepare_out(args.out)
    model = BandwidthModel(
        pump_bandwidth_ghz=args.pump_ghz,
        signal_filter_ghz=args.signal_filter_ghz,
        idler_filter_ghz=args.idler_filter_ghz,
    )
    bound_s, bound_i = heralding_bound(model)
    expected_s = loss_chain(bound_s, args.signal_chain)
    expected_i = loss_chain(bound_i, args.idler_chain)
    coupling_s = infer_coupling(args.measured_signal, expected_s)
    coupling_i = infer_coupling(args.measured_idler, expected_i)
    conjugate = conjugate_bandwidth(
        signal_wavelength_nm=args.signal_nm,
        signal_width_nm=args.signal_width_nm,
        pump_wavelength_nm=args.pump_nm,
        pump_duration_ps=args.pump_ps,
    )
    report.write_table(
        out / "herald.csv",
        {
            "arm": ["signal", "idler"],
            "filter_ghz": [args.signal_filter_ghz, args.idler_filter_ghz],
            "bandwidth_bound": [bound_s, bound_i],
            "expected_after_losses": [expected_s, expected_i],
            "measured": [args.measured_signal, args.measured_idler],
            "inferred_coupling": [coupling_s, coupling_i],
        },
        comments=(
            f"pump bandwidth {args.pump_ghz:.6g} GHz",
            f"conjugate idler band: {conjugate.idler_wavelength_nm:.2f} nm center, "
            f"{conjugate.idler_width_nm:.2f} nm wide "
            f"(pump bandwidth {conjugate.pump_bandwidth_ghz:.2f} GHz "
            f"from a {args.pump_ps:.6g} ps pulse)",
        ),
    )
    report.save_herald_figure(
        {
            "signal": {
                "bound": bound_s,
                "expected": expected_s,
                "measured": args.measured_signal,
            },
            "idler": {
                "bound": bound_i,
                "expected": expected_i,
                "measured": args.measured_idler,
            },
        },
        out / "herald.png",
    )
    print(
        f"signal: bound {bound_s:.4f}, expected {expected_s:.4f}, "
        f"measured {args.measured_signal:.4f}, coupling {coupling_s:.2f}"
    )
    print(
        f"idler: bound {bound_i:.4f}, expected {expected_i:.4f}, "
        f"measured {args.measured_idler:.4f}, coupling {coupling_i:.2f}"
    )
    return _finish(out, command, None, args, ["herald.csv", "herald.png"])


def _cmd_sweep(args: argparse.Namespace, command: str) -> int:
    if args.seeds < 1:
        raise ValueError("--seeds must be at least 1")
    config = _resolve_config(args)
    out = _prepare_out(args.out)
    workers = args.workers or _default_workers()
    herald = _HERALDS[args.herald]
    means, stds, event_means = [], [], []
    for mu in args.mu:
        cfg = replace(
            config,
            source_ab=replace(config.source_ab, mu=mu),
            source_cd=replace(config.source_cd, mu=mu),
        )
        values, events = [], []
        for k in range(args.seeds):
            result = run_swap(
                cfg,
                n_pulses=args.pulses,
                seed=args.seed + k,
                settings=tomography_settings(),
                workers=workers,
            )
            counts = counts_from_run(result, herald=herald)
            events.append(int(counts.sum()))
            values.append(concurrence(mle_reconstruct(counts, seed=args.seed).rho))
        means.append(float(np.mean(values)))
        stds.append(float(np.std(values)))
        event_means.append(float(np.mean(events)))
        print(
            f"mu={mu:.3f}: concurrence {means[-1]:.4f} +/- {stds[-1]:.4f}"
            f" ({event_means[-1]:.0f} heralded events)"
        )
    report.write_table(
        out / "sweep.csv",
        {
            "mu": list(args.mu),
            "concurrence": means,
            "concurrence_std": stds,
            "heralded_events": event_means,
        },
        comments=(
            f"concurrence vs source brightness, {args.seeds} repetitions per point",
        ),
    )
    report.save_sweep_figure(
        np.asarray(args.mu),
        np.asarray(means),
        np.asarray(stds) if args.seeds > 1 else None,
        out / "sweep.png",
    )
    return _finish(out, command, config, args, ["sweep.csv", "sweep.png"])


# ------------------------------------------------------------------- main


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    command = " ".join(["swapsim", *argv])
    try:
        return args.handler(args, command)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
