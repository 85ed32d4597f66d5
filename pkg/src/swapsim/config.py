"""INI-file description of a bench configuration.

A config file carries one section per physical subsystem; every key is
optional and falls back to the deployed-hardware defaults baked into
ExperimentConfig.  Unknown sections or keys are rejected with the full
field path so typos cannot silently revert a parameter to its default.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import math
from dataclasses import asdict
from pathlib import Path

from .photonics import BsmParams, DetectorParams, ExperimentConfig, SourceParams

_FLOAT = "float"
_INT = "int"
_BOOL = "bool"
_STR = "str"

_SOURCE_FIELDS = {
    "mu": _FLOAT,
    "phase": _FLOAT,
    "state_fidelity": _FLOAT,
    "pair_statistics": _STR,
    "noise_channel": _STR,
}
_DETECTOR_FIELDS = {
    "efficiency": _FLOAT,
    "dark_rate_hz": _FLOAT,
    "window_s": _FLOAT,
    "jitter_fwhm_s": _FLOAT,
    "number_resolving": _BOOL,
}
_SCHEMA: dict[str, dict[str, str]] = {
    "source_ab": _SOURCE_FIELDS,
    "source_cd": _SOURCE_FIELDS,
    "bsm": {"overlap": _FLOAT, "accept_psi_plus": _BOOL},
    "detector_795": _DETECTOR_FIELDS,
    "detector_1533": _DETECTOR_FIELDS,
    "simulation": {"truncation": _INT, "bin_separation_ns": _FLOAT},
}

_SPECIAL_FLOATS = {"pi": math.pi}


def _parse_value(section: str, key: str, raw: str, kind: str):
    raw = raw.strip()
    try:
        if kind == _FLOAT:
            lowered = raw.lower()
            if lowered in _SPECIAL_FLOATS:
                return _SPECIAL_FLOATS[lowered]
            return float(raw)
        if kind == _INT:
            return int(raw)
        if kind == _BOOL:
            lowered = raw.lower()
            if lowered in ("true", "yes", "on", "1"):
                return True
            if lowered in ("false", "no", "off", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return raw
    except ValueError as err:
        raise ValueError(f"{section}.{key}: {err}") from None


def _section_kwargs(
    parser: configparser.ConfigParser, section: str
) -> dict[str, object]:
    fields = _SCHEMA[section]
    out: dict[str, object] = {}
    if not parser.has_section(section):
        return out
    for key, raw in parser.items(section):
        if key not in fields:
            known = ", ".join(sorted(fields))
            raise ValueError(
                f"unknown key {section}.{key}; known keys are: {known}"
            )
        out[key] = _parse_value(section, key, raw, fields[key])
    return out


def parse_config(text: str) -> ExperimentConfig:
    """Build a configuration from INI text, rejecting unknown fields."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as err:
        raise ValueError(f"malformed config: {err}") from None
    for section in parser.sections():
        if section not in _SCHEMA:
            known = ", ".join(sorted(_SCHEMA))
            raise ValueError(
                f"unknown section [{section}]; known sections are: {known}"
            )
    defaults = ExperimentConfig()
    source_ab = {**asdict(defaults.source_ab), **_section_kwargs(parser, "source_ab")}
    source_cd = {**asdict(defaults.source_cd), **_section_kwargs(parser, "source_cd")}
    bsm = {**asdict(defaults.bsm), **_section_kwargs(parser, "bsm")}
    det_795 = {**asdict(defaults.detector_795), **_section_kwargs(parser, "detector_795")}
    det_1533 = {**asdict(defaults.detector_1533), **_section_kwargs(parser, "detector_1533")}
    sim = _section_kwargs(parser, "simulation")
    return ExperimentConfig(
        source_ab=SourceParams(**source_ab),
        source_cd=SourceParams(**source_cd),
        bsm=BsmParams(**bsm),
        detector_795=DetectorParams(**det_795),
        detector_1533=DetectorParams(**det_1533),
        truncation=int(sim.get("truncation", defaults.truncation)),
        bin_separation_ns=float(
            sim.get("bin_separation_ns", defaults.bin_separation_ns)
        ),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    """Read a configuration file; see parse_config for the format."""
    return parse_config(Path(path).read_text())


def _format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(config: ExperimentConfig) -> str:
    """Canonical INI text for a configuration (round-trips exactly)."""
    groups: dict[str, dict[str, object]] = {
        "source_ab": asdict(config.source_ab),
        "source_cd": asdict(config.source_cd),
        "bsm": asdict(config.bsm),
        "detector_795": asdict(config.detector_795),
        "detector_1533": asdict(config.detector_1533),
        "simulation": {
            "truncation": config.truncation,
            "bin_separation_ns": config.bin_separation_ns,
        },
    }
    buf = io.StringIO()
    for section, fields in groups.items():
        buf.write(f"[{section}]\n")
        for key in _SCHEMA[section]:
            buf.write(f"{key} = {_format_value(fields[key])}\n")
        buf.write("\n")
    return buf.getvalue()


def save_config(config: ExperimentConfig, path: str | Path) -> None:
    Path(path).write_text(dump_config(config))


def config_digest(config: ExperimentConfig) -> str:
    """sha256 of the canonical INI form, for run manifests."""
    return hashlib.sha256(dump_config(config).encode()).hexdigest()
