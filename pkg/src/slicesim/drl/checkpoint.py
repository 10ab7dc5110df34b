"""Single-file checkpoint format.

Layout: 4-byte magic, little-endian uint32 format version, little-endian
uint64 manifest length, UTF-8 JSON manifest, then every array's raw bytes
as little-endian float64 in manifest order.  The manifest lists array names
and shapes plus free-form metadata, so a checkpoint can be inspected
without loading any parameters.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"SLCK"
FORMAT_VERSION = 1


class CheckpointError(RuntimeError):
    pass


def save_checkpoint(path: str | Path, arrays: dict[str, np.ndarray], meta: dict) -> None:
    names = list(arrays.keys())
    manifest = {
        "format_version": FORMAT_VERSION,
        "meta": meta,
        "arrays": [{"name": n, "shape": list(arrays[n].shape)} for n in names],
    }
    blob = json.dumps(manifest, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for n in names:
            fh.write(np.ascontiguousarray(arrays[n], dtype="<f8").tobytes())


def read_manifest(path: str | Path) -> dict:
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != FORMAT_VERSION:
            raise CheckpointError(f"{path}: unsupported format version {version}")
        (blob_len,) = struct.unpack("<Q", fh.read(8))
        return json.loads(fh.read(blob_len).decode("utf-8"))


def load_checkpoint(path: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != FORMAT_VERSION:
            raise CheckpointError(f"{path}: unsupported format version {version}")
        (blob_len,) = struct.unpack("<Q", fh.read(8))
        manifest = json.loads(fh.read(blob_len).decode("utf-8"))
        arrays: dict[str, np.ndarray] = {}
        for entry in manifest["arrays"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            data = np.frombuffer(fh.read(count * 8), dtype="<f8", count=count)
            arrays[entry["name"]] = data.astype(float).reshape(shape)
        trailing = fh.read(1)
        if trailing:
            raise CheckpointError(f"{path}: trailing bytes after parameter block")
    return arrays, manifest["meta"]
