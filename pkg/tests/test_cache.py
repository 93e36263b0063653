import hashlib
import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cdelta import cache
from cdelta.dsl import build
from cdelta.errors import AxiomViolation, BadMagic, ChecksumMismatch, VersionUnsupported
from cdelta.ring import zn


def _reference_bytes(R):
    """The file format written out by hand with struct, independent of the module."""
    n = R.order
    out = b"CDRL" + bytes([1]) + struct.pack("<III", n, R.zero, R.one)
    for table in (R.add, R.mul):
        out += struct.pack(f"<{n * n}I", *[int(v) for v in table.ravel()])
    return out + hashlib.sha256(out).digest()[:8]


def test_z6_file_size(tmp_path):
    p = tmp_path / "z6.cdrl"
    assert cache.write(zn(6), p) == 313
    assert p.stat().st_size == 313 == cache.file_size(6)


def test_encoding_is_bit_exact():
    for expr in ("Z 1", "Z 6", "M(2, Z 2)", "T(2, Z 3)"):
        R = build(expr)
        assert cache.encode(R) == _reference_bytes(R)


def test_m2z2_round_trip(tmp_path):
    M = build("M(2, Z 2)")
    p = tmp_path / "m.cdrl"
    cache.write(M, p)
    back = cache.read(p)
    assert back.add.tobytes() == M.add.tobytes() and back.mul.tobytes() == M.mul.tobytes()
    assert (back.zero, back.one) == (M.zero, M.one)


def test_write_leaves_no_temp_files(tmp_path):
    cache.write(zn(5), tmp_path / "a.cdrl")
    cache.write(zn(7), tmp_path / "a.cdrl")  # overwrite in place
    assert sorted(p.name for p in tmp_path.iterdir()) == ["a.cdrl"]
    assert cache.read(tmp_path / "a.cdrl").order == 7


def test_bad_magic():
    data = bytearray(cache.encode(zn(3)))
    data[:4] = b"XXXX"
    with pytest.raises(BadMagic):
        cache.decode(bytes(data))
    with pytest.raises(BadMagic):
        cache.decode(b"")


def test_unsupported_version():
    data = bytearray(cache.encode(zn(3)))
    data[4] = 2
    body = bytes(data[:-8])
    with pytest.raises(VersionUnsupported):
        cache.decode(body + hashlib.sha256(body).digest()[:8])


def test_flipped_byte_is_a_checksum_mismatch():
    data = bytearray(cache.encode(zn(4)))
    data[30] ^= 0x01
    with pytest.raises(ChecksumMismatch):
        cache.decode(bytes(data))


@given(st.integers(0, cache.file_size(4) - 1))
def test_every_truncation_is_rejected(cut):
    data = cache.encode(zn(4))[:cut]
    with pytest.raises((BadMagic, ChecksumMismatch)):
        cache.decode(data)


def test_consistent_checksum_but_bad_tables():
    # a well-formed file whose tables are not a ring still never yields one
    R = zn(4)
    mul = R.mul.copy()
    mul[2, 2] = 1
    n = R.order
    out = b"CDRL" + bytes([1]) + struct.pack("<III", n, 0, 1)
    out += R.add.astype("<u4").tobytes() + mul.astype("<u4").tobytes()
    out += hashlib.sha256(out).digest()[:8]
    with pytest.raises(AxiomViolation):
        cache.decode(out)


def test_round_trip_preserves_analysis():
    from cdelta import analysis as an

    R = build("K(0, Z 3)")
    back = cache.decode(cache.encode(R))
    assert np.array_equal(an.delta_set(back).mask, an.delta_set(R).mask)
    assert an.is_cdelta(back) == an.is_cdelta(R)
