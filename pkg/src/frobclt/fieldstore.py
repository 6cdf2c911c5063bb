"""Field tables, the binary trace cache, and atomic file output.

Field table lines are ``degree,c0,c1,...,c_{deg-1},1,d_K,r2`` with ``#``
comments.  Coefficients are ascending and the polynomial is monic.

Trace cache layout (all little-endian)::

    magic    4s   b"FCTC"
    version  u16
    group    u8 length + ASCII tag
    x        u64
    count    u32  number of series
    size     u64  payload bytes
    sha256   32s  digest of the payload
    payload  per series: id (u16 length + UTF-8), degree u8, entries u32,
             then per entry: p u64, k u8, k pairs (e u8, f u8), a i8

An unresolved entry has k = 0 and a = -128.
"""

from __future__ import annotations

import hashlib
import io
import logging
import os
import struct
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .densities import GROUP_DEGREE, SplittingSymbol, normalize_group
from .errors import CacheError, CacheVersionError, ChecksumError, ParseError, ValidationError
from .fpoly import factor_degrees, is_square, poly_discriminant
from .frobenius import TraceSeries, artin_trace, sieve_primes

log = logging.getLogger(__name__)

CACHE_MAGIC = b"FCTC"
CACHE_VERSION = 1
UNRESOLVED_A = -128
FINGERPRINT_PRIMES = 20


@dataclass(frozen=True)
class FieldTableRecord:
    degree: int
    poly: tuple[int, ...]
    d_K: int
    r2: int
    group: str | None = None
    lineno: int | None = field(default=None, compare=False)
    form: tuple[int, int, int, int] | None = field(default=None, compare=False)

    @property
    def signature(self) -> tuple[int, int]:
        return (self.degree - 2 * self.r2, self.r2)

    @property
    def field_id(self) -> str:
        return f"{self.degree}:{self.d_K}:" + "/".join(map(str, self.poly))

    def to_line(self) -> str:
        return ",".join(map(str, (self.degree, *self.poly, self.d_K, self.r2)))


def atomic_write(path, data: bytes | str) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "w" if isinstance(data, str) else "wb"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, mode, encoding="utf-8" if mode == "w" else None) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def git_blob_hash(data: bytes) -> str:
    """Content hash as computed by ``git hash-object``."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


# ---------------------------------------------------------------------------
# field tables


def validate_record(rec: FieldTableRecord, check_index: bool = True) -> FieldTableRecord:
    n = rec.degree
    ln = rec.lineno
    if n < 1:
        raise ValidationError(f"degree must be positive, got {n}", ln)
    if len(rec.poly) != n + 1 or rec.poly[-1] != 1:
        raise ValidationError("polynomial must be monic of the stated degree", ln)
    r1 = n - 2 * rec.r2
    if rec.r2 < 0 or r1 < 0:
        raise ValidationError(f"signature (r1, r2) = ({r1}, {rec.r2}) does not satisfy r1 + 2 r2 = {n}", ln)
    if rec.d_K == 0:
        raise ValidationError("d_K must be nonzero", ln)
    if (rec.d_K < 0) != (rec.r2 % 2 == 1):
        raise ValidationError(f"sign of d_K={rec.d_K} inconsistent with r2={rec.r2}", ln)
    if rec.group is not None and GROUP_DEGREE[rec.group] != n:
        raise ValidationError(f"group {rec.group} needs degree {GROUP_DEGREE[rec.group]}, got {n}", ln)
    if check_index:
        disc = poly_discriminant(rec.poly)
        if disc % rec.d_K or not is_square(disc // rec.d_K):
            raise ValidationError(f"disc(f)={disc} is not d_K={rec.d_K} times a square", ln)
    return rec


def _attach_form(rec: FieldTableRecord) -> FieldTableRecord:
    if rec.degree != 3:
        return rec
    from .cubic import maximal_form

    c0, c1, c2, _ = rec.poly
    form = maximal_form((1, c2, c1, c0))
    if form.disc != rec.d_K:
        raise ValidationError(f"maximal order has discriminant {form.disc}, table says {rec.d_K}", rec.lineno)
    return FieldTableRecord(rec.degree, rec.poly, rec.d_K, rec.r2, rec.group, rec.lineno, form.coeffs)


def parse_field_table(lines: Iterable[str], group=None, check_index: bool = True) -> list[FieldTableRecord]:
    tag = normalize_group(group) if group is not None else None
    out = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values = [int(tok) for tok in line.split(",")]
        except ValueError:
            raise ParseError(f"non-integer field in {line!r}", lineno) from None
        if len(values) < 4:
            raise ParseError(f"too few fields in {line!r}", lineno)
        n = values[0]
        if n < 1 or len(values) != n + 4:
            raise ParseError(f"degree {n} needs {n + 4} comma-separated fields, got {len(values)}", lineno)
        rec = FieldTableRecord(n, tuple(values[1 : n + 2]), values[n + 2], values[n + 3], tag, lineno)
        rec = validate_record(rec, check_index)
        if check_index:
            rec = _attach_form(rec)
        out.append(rec)
    return out


def serialize_field_table(records: Sequence[FieldTableRecord], header: str | None = None) -> str:
    buf = io.StringIO()
    if header:
        for line in header.splitlines():
            buf.write(f"# {line}\n")
    for rec in records:
        buf.write(rec.to_line() + "\n")
    return buf.getvalue()


def splitting_fingerprint(rec, count: int = FINGERPRINT_PRIMES) -> tuple:
    """Factor-degree patterns of f at the first primes not dividing disc(f)."""
    disc = poly_discriminant(rec.poly)
    out, p = [], 2
    while len(out) < count:
        if all(p % q for q in range(2, int(p**0.5) + 1)) and disc % p:
            out.append(tuple(factor_degrees(rec.poly, p)))
        p += 1
    return tuple(out)


def ingest(records: Sequence[FieldTableRecord], count: int = FINGERPRINT_PRIMES):
    """Drop records repeating (degree, d_K, fingerprint); returns (kept, collisions)."""
    seen: dict = {}
    kept, collisions = [], []
    for rec in records:
        key = (rec.degree, rec.d_K, splitting_fingerprint(rec, count))
        if key in seen:
            collisions.append((seen[key], rec))
            log.info("duplicate field: line %s repeats line %s (d_K=%s)", rec.lineno, seen[key].lineno, rec.d_K)
            continue
        seen[key] = rec
        kept.append(rec)
    return kept, collisions


# ---------------------------------------------------------------------------
# trace cache


def _encode_series(s: TraceSeries) -> bytes:
    buf = io.BytesIO()
    fid = s.field_id.encode("utf-8")
    buf.write(struct.pack("<H", len(fid)))
    buf.write(fid)
    buf.write(struct.pack("<BI", s.degree, len(s)))
    for p, sym, a in s.entries():
        if sym is None:
            buf.write(struct.pack("<QBb", p, 0, UNRESOLVED_A))
            continue
        pairs = sym.pairs
        buf.write(struct.pack("<QB", p, len(pairs)))
        for e, f in pairs:
            buf.write(struct.pack("<BB", e, f))
        buf.write(struct.pack("<b", a))
    return buf.getvalue()


def encode_trace_cache(series: Sequence[TraceSeries], x: int, group: str) -> bytes:
    payload = b"".join(_encode_series(s) for s in series)
    tag = group.encode("ascii")
    header = CACHE_MAGIC + struct.pack("<HB", CACHE_VERSION, len(tag)) + tag
    header += struct.pack("<QIQ", int(x), len(series), len(payload)) + hashlib.sha256(payload).digest()
    return header + payload


def write_trace_cache(path, series: Sequence[TraceSeries], x: int, group: str = "S3") -> None:
    atomic_write(path, encode_trace_cache(series, x, normalize_group(group)))


def decode_trace_cache(data: bytes):
    """(group, x, series) from cache bytes; checksum and version are enforced."""
    view = memoryview(data)
    if len(data) < 7 or bytes(view[:4]) != CACHE_MAGIC:
        raise CacheError("not a trace cache (bad magic)")
    version, glen = struct.unpack_from("<HB", data, 4)
    if version != CACHE_VERSION:
        raise CacheVersionError(f"cache version {version}, expected {CACHE_VERSION}")
    pos = 7
    head = pos + glen + struct.calcsize("<QIQ") + 32
    if len(data) < head:
        raise ChecksumError("truncated cache header")
    group = bytes(view[pos : pos + glen]).decode("ascii")
    pos += glen
    x, count, size = struct.unpack_from("<QIQ", data, pos)
    pos += struct.calcsize("<QIQ")
    digest = bytes(view[pos : pos + 32])
    pos += 32
    payload = bytes(view[pos:])
    if len(payload) != size or hashlib.sha256(payload).digest() != digest:
        raise ChecksumError("cache payload does not match its checksum")
    series, pos = [], 0
    try:
        for _ in range(count):
            (n,) = struct.unpack_from("<H", payload, pos)
            pos += 2
            fid = payload[pos : pos + n].decode("utf-8")
            pos += n
            degree, m = struct.unpack_from("<BI", payload, pos)
            pos += 5
            entries = []
            for _ in range(m):
                p, k = struct.unpack_from("<QB", payload, pos)
                pos += 9
                pairs = struct.unpack_from("<" + "B" * (2 * k), payload, pos)
                pos += 2 * k
                (a,) = struct.unpack_from("<b", payload, pos)
                pos += 1
                if k == 0:
                    entries.append((p, None))
                else:
                    sym = SplittingSymbol(tuple(zip(pairs[0::2], pairs[1::2])))
                    if artin_trace(sym) != a:
                        raise CacheError(f"stored a={a} disagrees with symbol {sym} at p={p}")
                    entries.append((p, sym))
            series.append(TraceSeries.from_entries(fid, x, degree, entries))
    except struct.error as exc:
        raise CacheError(f"malformed cache payload: {exc}") from None
    if pos != len(payload):
        raise CacheError("trailing bytes in cache payload")
    return group, x, series


def read_trace_cache(path):
    return decode_trace_cache(Path(path).read_bytes())


def export_trace_text(series: Sequence[TraceSeries]) -> str:
    """Comma-separated mirror of the cache: field_id,p,symbol,a (blank a when unresolved)."""
    buf = io.StringIO()
    buf.write("field_id,p,symbol,a\n")
    for s in series:
        for p, sym, a in s.entries():
            if sym is None:
                buf.write(f"{s.field_id},{p},?,\n")
            else:
                buf.write(f"{s.field_id},{p},{sym},{a}\n")
    return buf.getvalue()


def compute_series(records: Sequence, x: int) -> list[TraceSeries]:
    from .frobenius import trace_series

    primes = sieve_primes(x)
    return [trace_series(r, x, primes) for r in records]
