"""Binary array files with a short text header.

Layout::

    SHEARCT1
    kind=<image|linogram|spectrum|coeffs|mask>
    N=<int>
    J=<int>                      (coeffs and mask only)
    dtype=<float64|complex128>
    endian=little
    order=row-major
    shape=<d0>,<d1>,...
    end
    <raw payload bytes>

Axis order per kind:

* ``image``: ``(N, N)``, ``[u + N/2, v + N/2]``.
* ``linogram``: ``(2, N, 2N + 1)``, ``[sector, m + N/2, t + N]``; the last
  column holds the Nyquist quadrature channel.
* ``spectrum``: ``(2, N, 2N)`` complex, ``[sector, m + N/2, n + N]``.
* ``coeffs``: ``(S + 1, N, N)`` complex, subbands in mask-set order, then the
  low-pass array; ``S`` follows from ``N`` and ``J``.
* ``mask``: ``(S + 1, 2, N, 2N)``, subband masks in mask-set order, then the
  low-pass mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .frame import MaskSet
from .radon import Linogram
from .shearlets import CoefficientSet

__all__ = [
    "MAGIC",
    "KINDS",
    "ArrayFile",
    "ArrayFileError",
    "MalformedHeaderError",
    "TruncatedPayloadError",
    "MagicMismatchError",
    "UnsupportedKindError",
    "read_array",
    "write_array",
    "encode",
    "decode",
    "linogram_to_array",
    "array_to_linogram",
    "coeffs_to_array",
    "array_to_coeffs",
    "masks_to_array",
]

MAGIC = "SHEARCT1"
KINDS = {"image": "float64", "linogram": "float64", "spectrum": "complex128",
         "coeffs": "complex128", "mask": "float64"}
_DTYPES = {"float64": np.dtype("<f8"), "complex128": np.dtype("<c16")}
_MAX_HEADER = 4096


class ArrayFileError(ValueError):
    code = "E_FORMAT"


class MalformedHeaderError(ArrayFileError):
    code = "E_HEADER"


class TruncatedPayloadError(ArrayFileError):
    code = "E_TRUNCATED"


class MagicMismatchError(ArrayFileError):
    code = "E_MAGIC"


class UnsupportedKindError(ArrayFileError):
    code = "E_KIND"


@dataclass(frozen=True)
class ArrayFile:
    kind: str
    data: np.ndarray
    N: int
    J: int | None = None

    def header(self) -> bytes:
        lines = [MAGIC, f"kind={self.kind}", f"N={self.N}"]
        if self.J is not None:
            lines.append(f"J={self.J}")
        lines += [f"dtype={KINDS[self.kind]}", "endian=little", "order=row-major",
                  "shape=" + ",".join(str(d) for d in self.data.shape), "end"]
        return ("\n".join(lines) + "\n").encode("ascii")


def _expected_shape(kind: str, N: int) -> tuple | None:
    return {"image": (N, N), "linogram": (2, N, 2 * N + 1),
            "spectrum": (2, N, 2 * N)}.get(kind)


def encode(af: ArrayFile) -> bytes:
    if af.kind not in KINDS:
        raise UnsupportedKindError(f"unsupported kind {af.kind!r}")
    data = np.ascontiguousarray(af.data, dtype=_DTYPES[KINDS[af.kind]])
    want = _expected_shape(af.kind, af.N)
    if want is not None and data.shape != want:
        raise ValueError(f"{af.kind} with N={af.N} needs shape {want}, got {data.shape}")
    af = ArrayFile(af.kind, data, af.N, af.J)
    return af.header() + data.tobytes()


def _parse_header(blob: bytes) -> tuple[dict, int]:
    nl = blob.find(b"\n")
    first = blob[:nl] if nl >= 0 else blob[:len(MAGIC)]
    if first != MAGIC.encode():
        raise MagicMismatchError(f"bad magic {first[:16]!r}")
    end = blob.find(b"\nend\n", 0, _MAX_HEADER)
    if end < 0:
        raise MalformedHeaderError("header terminator not found")
    try:
        text = blob[:end].decode("ascii")
    except UnicodeDecodeError as exc:
        raise MalformedHeaderError("header is not ASCII") from exc
    fields = {}
    for line in text.split("\n")[1:]:
        key, sep, value = line.partition("=")
        if not sep or not key or key in fields:
            raise MalformedHeaderError(f"bad header line {line!r}")
        fields[key] = value
    return fields, end + len(b"\nend\n")


def _int_field(fields: dict, key: str) -> int:
    try:
        val = int(fields[key])
    except (KeyError, ValueError) as exc:
        raise MalformedHeaderError(f"missing or bad {key}") from exc
    if val < 0:
        raise MalformedHeaderError(f"negative {key}")
    return val


def decode(blob: bytes) -> ArrayFile:
    fields, offset = _parse_header(blob)
    kind = fields.get("kind")
    if kind is None:
        raise MalformedHeaderError("missing kind")
    if kind not in KINDS:
        raise UnsupportedKindError(f"unsupported kind {kind!r}")
    N = _int_field(fields, "N")
    J = _int_field(fields, "J") if "J" in fields else None
    if fields.get("dtype") != KINDS[kind]:
        raise MalformedHeaderError(f"dtype for {kind} must be {KINDS[kind]}")
    if fields.get("endian") != "little" or fields.get("order") != "row-major":
        raise MalformedHeaderError("only little-endian row-major payloads are supported")
    try:
        shape = tuple(int(d) for d in fields["shape"].split(","))
    except (KeyError, ValueError) as exc:
        raise MalformedHeaderError("missing or bad shape") from exc
    if any(d < 0 for d in shape):
        raise MalformedHeaderError("negative dimension")
    want = _expected_shape(kind, N)
    if want is not None and shape != want:
        raise MalformedHeaderError(f"shape {shape} inconsistent with {kind}, N={N}")
    extra = set(fields) - {"kind", "N", "J", "dtype", "endian", "order", "shape"}
    if extra:
        raise MalformedHeaderError(f"unknown header keys {sorted(extra)}")
    dtype = _DTYPES[KINDS[kind]]
    nbytes = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
    payload = blob[offset:]
    if len(payload) < nbytes:
        raise TruncatedPayloadError(f"payload has {len(payload)} of {nbytes} bytes")
    if len(payload) > nbytes:
        raise ArrayFileError(f"{len(payload) - nbytes} trailing bytes after payload")
    data = np.frombuffer(payload, dtype=dtype).reshape(shape).astype(dtype.newbyteorder("="))
    return ArrayFile(kind, data, N, J)


def write_array(path, af: ArrayFile) -> None:
    Path(path).write_bytes(encode(af))


def read_array(path, kind: str | None = None) -> ArrayFile:
    """Read an array file; with ``kind`` the file must be of that kind."""
    af = decode(Path(path).read_bytes())
    if kind is not None and af.kind != kind:
        raise UnsupportedKindError(f"expected a {kind} file, got {af.kind}")
    return af


def linogram_to_array(lin: Linogram) -> ArrayFile:
    data = np.concatenate([lin.data, lin.nyquist[..., None]], axis=-1)
    return ArrayFile("linogram", data, lin.N)


def array_to_linogram(af: ArrayFile) -> Linogram:
    if af.kind != "linogram":
        raise UnsupportedKindError(f"expected a linogram file, got {af.kind}")
    return Linogram(af.data[..., :-1], af.data[..., -1])


def coeffs_to_array(cs: CoefficientSet, ms: MaskSet) -> ArrayFile:
    data = np.stack([cs.subbands[k] for k in ms.keys] + [cs.lowpass])
    return ArrayFile("coeffs", data, cs.N, cs.J)


def array_to_coeffs(af: ArrayFile, ms: MaskSet) -> CoefficientSet:
    if af.kind != "coeffs":
        raise UnsupportedKindError(f"expected a coeffs file, got {af.kind}")
    if af.N != ms.N or af.J != ms.J or af.data.shape != (len(ms.keys) + 1, ms.N, ms.N):
        raise ValueError("coefficient file does not match the mask set")
    subbands = {k: af.data[i].copy() for i, k in enumerate(ms.keys)}
    return CoefficientSet(subbands, af.data[-1].copy(), ms.N, ms.J)


def masks_to_array(ms: MaskSet) -> ArrayFile:
    data = np.stack([sb.mask() for sb in ms.subbands] + [ms.lowpass_mask()])
    return ArrayFile("mask", data, ms.N, ms.J)
