"""Run manifests: enough provenance to reproduce any output file.

Every CLI run writes a manifest next to its outputs recording the
command, the configuration digest, the seed and pulse budget, and the
library versions.  Two runs with the same manifest fields (timestamps
aside) produce byte-identical outputs.
"""

from __future__ import annotations

import json
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import config_digest
from .photonics import ExperimentConfig


def _now_utc() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class RunManifest:
    """Provenance record for one CLI run."""

    command: str
    config_sha256: str
    seed: int
    n_pulses: int
    workers: int
    outputs: tuple[str, ...]
    package_version: str = __version__
    numpy_version: str = np.__version__
    python_version: str = platform.python_version()
    created_utc: str = field(default_factory=_now_utc)


def build_manifest(
    *,
    command: str,
    config: ExperimentConfig | None,
    seed: int,
    n_pulses: int,
    workers: int,
    outputs: tuple[str, ...],
    created_utc: str | None = None,
) -> RunManifest:
    """Config is None for commands that evaluate closed forms only."""
    extra = {} if created_utc is None else {"created_utc": created_utc}
    return RunManifest(
        command=command,
        config_sha256="" if config is None else config_digest(config),
        seed=seed,
        n_pulses=n_pulses,
        workers=workers,
        outputs=tuple(outputs),
        **extra,
    )


def manifest_json(manifest: RunManifest) -> str:
    """Stable JSON rendering: sorted keys, two-space indent."""
    payload = asdict(manifest)
    payload["outputs"] = list(payload["outputs"])
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_manifest(manifest: RunManifest, path: str | Path) -> None:
    Path(path).write_text(manifest_json(manifest))


def read_manifest(path: str | Path) -> RunManifest:
    payload = json.loads(Path(path).read_text())
    payload["outputs"] = tuple(payload["outputs"])
    return RunManifest(**payload)
