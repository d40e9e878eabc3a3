"""Binary checkpoint container for trained parameters.

Layout (all integers little-endian u32):

    magic "DFCK" | format version | descriptor length | descriptor (UTF-8)
    then, for each parameter until end of stream:
        name length | name (UTF-8) | rank | extent per axis | float32 payload

The descriptor is the canonical architecture string produced by
network.encode_descriptor; round-tripping a checkpoint is bit-exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .tensor import ParamStore

MAGIC = b"DFCK"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Raised for malformed or truncated checkpoint data."""


def save_checkpoint(path, params: ParamStore, descriptor: str):
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<I", FORMAT_VERSION)
    desc = descriptor.encode("utf-8")
    blob += struct.pack("<I", len(desc))
    blob += desc
    for name, t in params.items():
        nb = name.encode("utf-8")
        blob += struct.pack("<I", len(nb))
        blob += nb
        arr = np.ascontiguousarray(t.data, dtype="<f4")
        blob += struct.pack("<I", arr.ndim)
        for extent in arr.shape:
            blob += struct.pack("<I", extent)
        blob += arr.tobytes()
    Path(path).write_bytes(bytes(blob))


def load_checkpoint(path) -> tuple[ParamStore, str]:
    """Read a checkpoint; returns (ParamStore with float32 tensors, descriptor)."""
    data = Path(path).read_bytes()
    off = 0

    def take(n, what):
        nonlocal off
        if off + n > len(data):
            raise CheckpointError(f"truncated checkpoint while reading {what}")
        chunk = data[off:off + n]
        off += n
        return chunk

    if take(4, "magic") != MAGIC:
        raise CheckpointError("bad magic bytes; not a DFCK checkpoint")
    (version,) = struct.unpack("<I", take(4, "version"))
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    (dlen,) = struct.unpack("<I", take(4, "descriptor length"))
    descriptor = take(dlen, "descriptor").decode("utf-8")

    params = ParamStore()
    while off < len(data):
        (nlen,) = struct.unpack("<I", take(4, "name length"))
        name = take(nlen, "name").decode("utf-8")
        (rank,) = struct.unpack("<I", take(4, "rank"))
        shape = tuple(struct.unpack("<I", take(4, "extent"))[0] for _ in range(rank))
        count = int(np.prod(shape)) if shape else 1
        payload = take(4 * count, f"payload of {name}")
        arr = np.frombuffer(payload, dtype="<f4").reshape(shape).copy()
        params.add(name, arr)
    return params, descriptor
