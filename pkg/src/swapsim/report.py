"""Figure and table rendering for CLI runs.

All figures render through the Agg backend straight to files, so runs
work headless.  Tables are plain CSV with '#'-prefixed comment lines up
top (typically the manifest summary), one header row, then data rows;
read_table round-trips them.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .photonics import HomResult  # noqa: E402
from .tomography import FringeFit  # noqa: E402

_DPI = 150


# ------------------------------------------------------------------ tables


def write_table(
    path: str | Path,
    columns: dict[str, object],
    comments: tuple[str, ...] = (),
) -> None:
    """CSV with '#' comment lines, a header row, and aligned columns."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    lengths = {len(a) for a in arrays}
    if len(lengths) != 1:
        raise ValueError(f"columns have mismatched lengths: {sorted(lengths)}")
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for row in zip(*arrays):
        writer.writerow([_render_cell(v) for v in row])
    Path(path).write_text(buf.getvalue())


def _render_cell(value: object) -> str:
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def read_table(path: str | Path) -> tuple[tuple[str, ...], dict[str, np.ndarray]]:
    """Read a write_table file back: (comment lines, column arrays).

    Columns parse as float arrays when every cell is numeric, otherwise
    as string arrays.
    """
    comments: list[str] = []
    rows: list[list[str]] = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif line.strip():
                rows.append(next(csv.reader([line])))
    if not rows:
        raise ValueError(f"no table found in {path}")
    header, data = rows[0], rows[1:]
    columns: dict[str, np.ndarray] = {}
    for i, name in enumerate(header):
        cells = [row[i] for row in data]
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            columns[name] = np.array(cells)
    return tuple(comments), columns


# ----------------------------------------------------------------- figures


def save_hom_figure(result: HomResult, path: str | Path) -> None:
    """Matched vs distinguishable coincidence counts with the visibility."""
    fig, ax = plt.subplots(figsize=(5, 4))
    labels = ["matched", "distinguishable"]
    values = [result.matched_coincidences, result.reference_coincidences]
    ax.bar(labels, values, color=["tab:blue", "tab:gray"], width=0.6)
    for x, v in enumerate(values):
        ax.annotate(f"{v:,}", (x, v), ha="center", va="bottom")
    try:
        label = f"V = {result.visibility:.4f} ± {result.visibility_sigma:.4f}"
    except ValueError:
        label = "V undefined (no reference coincidences)"
    kind = "conditioned" if result.conditioned else "unconditioned"
    ax.set_title(f"Two-photon interference ({kind})\n{label}")
    ax.set_ylabel("coincidences")
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def save_scan_figure(
    phases: np.ndarray,
    counts: np.ndarray,
    fit: FringeFit | None,
    path: str | Path,
) -> None:
    """Heralded coincidences vs analyzer phase, with the fitted fringe."""
    phases = np.asarray(phases, dtype=float)
    counts = np.asarray(counts, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(
        phases,
        counts,
        yerr=np.sqrt(np.maximum(counts, 1.0)),
        fmt="o",
        ms=4,
        capsize=2,
        label="counts",
    )
    if fit is not None:
        dense = np.linspace(phases.min(), phases.max(), 400)
        ax.plot(
            dense,
            fit.predict(dense),
            "-",
            label=f"fit: V = {fit.visibility:.3f} ± {fit.visibility_sigma:.3f}",
        )
    ax.set_xlabel("analyzer phase (rad)")
    ax.set_ylabel("heralded coincidences")
    ax.set_title("Phase scan of the heralded pair")
    ax.legend()
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def save_state_figure(rho: np.ndarray, path: str | Path) -> None:
    """Real and imaginary parts of a two-qubit density matrix."""
    rho = np.asarray(rho)
    ticks = ["ee", "el", "le", "ll"]
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, part, name in (
        (axes[0], rho.real, "Re"),
        (axes[1], rho.imag, "Im"),
    ):
        im = ax.imshow(part, vmin=-0.5, vmax=0.5, cmap="RdBu_r")
        ax.set_xticks(range(4), ticks)
        ax.set_yticks(range(4), ticks)
        ax.set_title(f"{name}(rho)")
        for i in range(4):
            for j in range(4):
                ax.text(j, i, f"{part[i, j]:.2f}", ha="center", va="center",
                        fontsize=8)
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def save_herald_figure(
    arms: dict[str, dict[str, float]], path: str | Path
) -> None:
    """Grouped bars per arm: each named efficiency stage side by side.

    arms maps an arm name (e.g. '795 nm') to an ordered mapping of stage
    name -> efficiency.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    arm_names = list(arms)
    stage_names = list(next(iter(arms.values())))
    width = 0.8 / len(stage_names)
    for k, stage in enumerate(stage_names):
        xs = np.arange(len(arm_names)) + (k - (len(stage_names) - 1) / 2) * width
        ys = [arms[a][stage] for a in arm_names]
        bars = ax.bar(xs, ys, width=width, label=stage)
        ax.bar_label(bars, fmt="%.3f", fontsize=8)
    ax.set_xticks(range(len(arm_names)), arm_names)
    ax.set_ylabel("heralding efficiency")
    ax.set_title("Filter-limited heralding budget")
    ax.legend()
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def save_sweep_figure(
    mus: np.ndarray,
    values: np.ndarray,
    sigmas: np.ndarray | None,
    path: str | Path,
    ylabel: str = "concurrence",
) -> None:
    """Entanglement measure vs source brightness."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if sigmas is None:
        ax.plot(mus, values, "o-")
    else:
        ax.errorbar(mus, values, yerr=sigmas, fmt="o-", capsize=3)
    ax.set_xlabel("mean pairs per pulse")
    ax.set_ylabel(ylabel)
    ax.set_title(f"{ylabel} vs source brightness")
    ax.set_ylim(bottom=0.0)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
