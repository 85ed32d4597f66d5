"""Run-manifest provenance records."""

import json

import numpy as np

import swapsim
from swapsim import (
    ExperimentConfig,
    build_manifest,
    config_digest,
    manifest_json,
    read_manifest,
    write_manifest,
)

_FIXED_TIME = "2026-01-01T00:00:00+00:00"


def _sample_manifest():
    return build_manifest(
        command="swapsim swap --pulses 1000 --seed 7",
        config=ExperimentConfig(),
        seed=7,
        n_pulses=1000,
        workers=2,
        outputs=("counts.csv", "state.png"),
        created_utc=_FIXED_TIME,
    )


def test_json_is_deterministic_with_a_fixed_timestamp():
    a = manifest_json(_sample_manifest())
    b = manifest_json(_sample_manifest())
    assert a == b
    payload = json.loads(a)
    assert list(payload) == sorted(payload)
    assert payload["outputs"] == ["counts.csv", "state.png"]
    assert payload["seed"] == 7
    assert payload["n_pulses"] == 1000


def test_config_digest_is_recorded():
    manifest = _sample_manifest()
    assert manifest.config_sha256 == config_digest(ExperimentConfig())
    closed_form = build_manifest(
        command="swapsim herald",
        config=None,
        seed=0,
        n_pulses=0,
        workers=1,
        outputs=("herald.csv",),
    )
    assert closed_form.config_sha256 == ""


def test_versions_are_recorded():
    manifest = _sample_manifest()
    assert manifest.package_version == swapsim.__version__
    assert manifest.numpy_version == np.__version__
    assert manifest.python_version.count(".") == 2


def test_file_round_trip(tmp_path):
    manifest = _sample_manifest()
    path = tmp_path / "manifest.json"
    write_manifest(manifest, path)
    assert read_manifest(path) == manifest
    assert path.read_text().endswith("\n")


def test_default_timestamp_is_utc_iso():
    manifest = build_manifest(
        command="swapsim hom",
        config=ExperimentConfig(),
        seed=0,
        n_pulses=10,
        workers=1,
        outputs=(),
    )
    assert "T" in manifest.created_utc
    assert manifest.created_utc.endswith("+00:00")
