"""Raw file formats: float32 streams, 16-bit PCM speech, JSON manifests.

Symbol streams, fading envelopes and baseband waveforms travel as raw 32-bit
little-endian floats.  Speech travels as signed 16-bit little-endian PCM
mono; full scale maps to amplitude 1.0.  Every generated artifact gets a
companion JSON manifest carrying the parameters and seeds needed to
reproduce it byte for byte.
"""

import json
from pathlib import Path

import numpy as np

MANIFEST_SCHEMA_VERSION = 1

_F32 = np.dtype("<f4")
_I16 = np.dtype("<i2")


def write_f32(path, values) -> None:
    np.asarray(values, dtype=_F32).tofile(path)


def read_f32(path) -> np.ndarray:
    data = np.fromfile(path, dtype=_F32)
    return data.astype(np.float64)


def read_f32_exact(path) -> np.ndarray:
    """Read without widening; use when bit-level comparison matters."""
    return np.fromfile(path, dtype=_F32)


def write_pcm16(path, samples) -> None:
    """Clip to [-1, 1) and store as little-endian int16."""
    scaled = np.clip(np.asarray(samples, dtype=float) * 32768.0,
                     -32768, 32767)
    np.round(scaled).astype(_I16).tofile(path)


def read_pcm16(path) -> np.ndarray:
    data = np.fromfile(path, dtype=_I16)
    return data.astype(np.float64) / 32768.0


def manifest_path(data_path) -> Path:
    return Path(str(data_path) + ".json")


def dump_manifest(path, record: dict) -> Path:
    """Write a manifest at an exact path.

    Keys are sorted and no timestamps are recorded, so re-running a command
    with identical inputs produces identical manifest bytes.
    """
    record = {"schema_version": MANIFEST_SCHEMA_VERSION, **record}
    path = Path(path)
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    return path


def write_manifest(data_path, record: dict) -> Path:
    """Write the companion manifest next to a data file."""
    return dump_manifest(manifest_path(data_path), record)


def read_manifest(data_path) -> dict:
    return json.loads(manifest_path(data_path).read_text())
