import hashlib
import struct

import pytest
from hypothesis import given, settings, strategies as st

from frobclt.cubic import enumerate_fields
from frobclt.errors import CacheError, CacheVersionError, ChecksumError, ParseError, ValidationError
from frobclt.fieldstore import (
    FieldTableRecord,
    atomic_write,
    decode_trace_cache,
    encode_trace_cache,
    export_trace_text,
    git_blob_hash,
    ingest,
    parse_field_table,
    read_trace_cache,
    serialize_field_table,
    write_trace_cache,
)
from frobclt.frobenius import cubic_trace_family, trace_series


@pytest.fixture(scope="module")
def table_1e4():
    fields = enumerate_fields(10**4)
    return [f"3,{','.join(map(str, f.poly[:3]))},1,{f.d_K},{int(f.d_K < 0)}" for f in fields]


def test_parse_examples():
    (rec,) = parse_field_table(["3,-1,-1,0,1,-23,1"])
    assert rec.poly == (-1, -1, 0, 1) and rec.d_K == -23 and rec.signature == (1, 1)
    assert rec.form is not None and rec.lineno == 1
    assert parse_field_table([]) == []
    assert parse_field_table(["# only a comment", ""]) == []


def test_parse_errors():
    with pytest.raises(ValidationError, match="line 1"):
        parse_field_table(["3,-1,-1,0,1,-23,2"])
    with pytest.raises(ParseError, match="line 2"):
        parse_field_table(["# c", "3,-1,x,0,1,-23,1"])
    with pytest.raises(ParseError):
        parse_field_table(["3,-1,0,1,-23,1"])
    with pytest.raises(ValidationError):
        parse_field_table(["3,-1,-1,0,2,-23,1"])  # not monic
    with pytest.raises(ValidationError):
        parse_field_table(["3,-1,-1,0,1,23,0"])  # disc/d_K not a square
    with pytest.raises(ValidationError):
        parse_field_table(["3,-1,-1,0,1,-23,1"], group="s5")
    with pytest.raises(ValidationError):
        parse_field_table(["3,-1,-1,0,1,-23,0"])  # sign vs r2


def test_quintic_record():
    # x^5 - x - 1 has squarefree discriminant 2869 = 19 * 151
    (rec,) = parse_field_table(["5,-1,-1,0,0,0,1,2869,0"], group="s5")
    assert rec.group == "S5" and rec.form is None
    s = trace_series(rec, 100)
    assert s.unresolved_count == 0
    assert s.degree == 5


def test_index_primes_resolved_through_form():
    # x^3 - 12 has index 3 over its maximal order
    (rec,) = parse_field_table(["3,-12,0,0,1,-972,1"])
    s = trace_series(rec, 50)
    assert s.unresolved_count == 0


def test_round_trip(table_1e4):
    recs = parse_field_table(table_1e4)
    text = serialize_field_table(recs, header="cubic fields\n|d_K| < 10^4")
    assert parse_field_table(text.splitlines()) == recs
    assert text.splitlines()[2:] == table_1e4


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(["3,-1,-1,0,1,-23,1", "3,1,1,0,1,-31,1", "3,-1,-1,2,1,49,0"]), max_size=6))
def test_round_trip_property(lines):
    recs = parse_field_table(lines)
    assert parse_field_table(serialize_field_table(recs).splitlines()) == recs


def test_ingest_dedup():
    # x^3 - x - 1 and x^3 + x^2 - 1 define the same field
    recs = parse_field_table(["3,-1,-1,0,1,-23,1", "3,-1,0,1,1,-23,1", "3,1,1,0,1,-31,1"])
    kept, collisions = ingest(recs)
    assert [r.d_K for r in kept] == [-23, -31]
    assert collisions[0][1].lineno == 2


def _series(n=3, x=30):
    recs = parse_field_table(["3,-1,-1,0,1,-23,1", "3,-12,0,0,1,-972,1", "3,-1,-1,2,1,49,0"][:n])
    return [trace_series(r, x) for r in recs]


def test_cache_round_trip(tmp_path):
    series = _series(1, 10)
    write_trace_cache(tmp_path / "c.bin", series, 10)
    group, x, back = read_trace_cache(tmp_path / "c.bin")
    assert (group, x) == ("S3", 10) and back == series


def test_cache_rejects_damage(tmp_path):
    data = encode_trace_cache(_series(), 30, "S3")
    with pytest.raises(ChecksumError):
        decode_trace_cache(data[:-5])
    flipped = bytearray(data)
    flipped[-3] ^= 1
    with pytest.raises(ChecksumError):
        decode_trace_cache(bytes(flipped))
    with pytest.raises(CacheVersionError):
        decode_trace_cache(data[:4] + struct.pack("<H", 99) + data[6:])
    with pytest.raises(CacheError):
        decode_trace_cache(b"NOPE" + data[4:])
    with pytest.raises(ChecksumError):
        decode_trace_cache(data[:20])


def test_cache_digest_1e4(tmp_path):
    fields = enumerate_fields(10**4)
    fam = cubic_trace_family([f.form.coeffs for f in fields], [f.d_K for f in fields], 100, field_ids=[f.field_id for f in fields])
    series = list(fam)
    path = tmp_path / "fam.bin"
    write_trace_cache(path, series, 100)
    _, _, back = read_trace_cache(path)
    digest = lambda ss: hashlib.sha256(export_trace_text(ss).encode()).hexdigest()
    assert len(back) == 1902
    assert digest(back) == digest(series)
    assert back == series


def test_text_export():
    text = export_trace_text(_series(1, 10))
    assert text.splitlines() == [
        "field_id,p,symbol,a",
        "3:-23:-1/-1/0/1,2,3,-1",
        "3:-23:-1/-1/0/1,3,3,-1",
        "3:-23:-1/-1/0/1,5,1 2,0",
        "3:-23:-1/-1/0/1,7,1 2,0",
    ]
    assert all(line.count(",") == 3 for line in text.splitlines())


def test_atomic_write_and_hash(tmp_path):
    path = tmp_path / "sub" / "f.txt"
    atomic_write(path, "hello\n")
    assert path.read_text() == "hello\n"
    assert list(path.parent.iterdir()) == [path]
    # matches `git hash-object` on the same bytes
    assert git_blob_hash(b"hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a"


def test_record_line():
    rec = FieldTableRecord(3, (-1, -1, 0, 1), -23, 1)
    assert rec.to_line() == "3,-1,-1,0,1,-23,1"
    assert rec.field_id == "3:-23:-1/-1/0/1"
