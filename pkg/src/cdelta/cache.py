"""Binary Cayley-table cache.

Layout, all integers unsigned 32-bit little-endian::

    b"CDRL" | version 0x01 | order | zero | one | add[order*order] | mul[order*order] | checksum

The checksum is the first 8 bytes of SHA-256 over everything before it.  Loading
re-runs the ring axiom verification, so a file that passes the checksum but
holds bad tables still cannot produce a ring.
"""

from __future__ import annotations

import hashlib
import os
import struct
import tempfile

import numpy as np

from .errors import BadMagic, ChecksumMismatch, MalformedTable, VersionUnsupported
from .ring import FiniteRing

MAGIC = b"CDRL"
VERSION = 1
_HEADER = struct.Struct("<4sBIII")
CHECKSUM_BYTES = 8


def _checksum(payload: bytes) -> bytes:
    return hashlib.sha256(payload).digest()[:CHECKSUM_BYTES]


def encode(R: FiniteRing) -> bytes:
    head = _HEADER.pack(MAGIC, VERSION, R.order, R.zero, R.one)
    body = R.add.astype("<u4").tobytes() + R.mul.astype("<u4").tobytes()
    payload = head + body
    return payload + _checksum(payload)


def file_size(order: int) -> int:
    return _HEADER.size + 2 * order * order * 4 + CHECKSUM_BYTES


def decode(data: bytes, provenance: str = "cache") -> FiniteRing:
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagic("not a ring cache file (bad magic)")
    if len(data) < _HEADER.size + CHECKSUM_BYTES:
        raise ChecksumMismatch("file truncated")
    _, version, order, zero, one = _HEADER.unpack_from(data)
    if version != VERSION:
        raise VersionUnsupported(f"cache format version {version} is not supported")
    expected = file_size(order)
    if len(data) != expected:
        raise ChecksumMismatch(f"file has {len(data)} bytes, header implies {expected}")
    payload, check = data[:-CHECKSUM_BYTES], data[-CHECKSUM_BYTES:]
    if _checksum(payload) != check:
        raise ChecksumMismatch("checksum does not match contents")
    if order == 0:
        raise MalformedTable("order must be positive")
    n2 = order * order
    tables = np.frombuffer(payload, dtype="<u4", offset=_HEADER.size, count=2 * n2).astype(np.int64)
    add, mul = tables[:n2].reshape(order, order), tables[n2:].reshape(order, order)
    return FiniteRing(add, mul, zero, one, provenance)


def write(R: FiniteRing, path: str | os.PathLike) -> int:
    """Atomically write the cache file; returns the byte count."""
    data = encode(R)
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".cdrl-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return len(data)


def read(path: str | os.PathLike, provenance: str | None = None) -> FiniteRing:
    with open(path, "rb") as fh:
        data = fh.read()
    return decode(data, provenance or f"cache:{os.path.basename(os.fspath(path))}")
