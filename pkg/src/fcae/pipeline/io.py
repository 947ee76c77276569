"""Checkpoint, metadata and CSV file formats.

Checkpoint layout (all integers unsigned 32-bit, all reals float64, little
endian)::

    b"FCAE1" | N | N_h | N_e | alpha | layer count (4)
    per layer: rows | cols | W row-major | len | B
"""
import json
import struct
from pathlib import Path

import numpy as np

from ..autoencoder import N_LAYERS, NetworkParams
from ..errors import CheckpointError, EmptyDatasetError, IngestError
from ..signal import Signal

MAGIC = b"FCAE1"
_HEADER = struct.Struct("<IIIdI")
_U32 = struct.Struct("<I")
_F64 = np.dtype("<f8")


def encode_checkpoint(params, alpha):
    spec = params.validate().spec
    parts = [MAGIC, _HEADER.pack(spec.n_in, spec.n_h, spec.n_e, float(alpha), N_LAYERS)]
    for W, B in zip(params.W, params.B):
        parts.append(struct.pack("<II", *W.shape))
        parts.append(np.ascontiguousarray(W, dtype=_F64).tobytes())
        parts.append(_U32.pack(B.size))
        parts.append(np.ascontiguousarray(B, dtype=_F64).tobytes())
    return b"".join(parts)


def decode_checkpoint(blob):
    """Return ``(params, header)`` where header holds N, N_h, N_e, alpha, layers."""
    if blob[:len(MAGIC)] != MAGIC:
        raise CheckpointError("not an FCAE1 checkpoint (bad magic)")
    pos = len(MAGIC)
    try:
        n_in, n_h, n_e, alpha, layers = _HEADER.unpack_from(blob, pos)
        pos += _HEADER.size
        if layers != N_LAYERS:
            raise CheckpointError(f"expected {N_LAYERS} layers, header says {layers}")
        W, B = [], []
        for _ in range(layers):
            rows, cols = struct.unpack_from("<II", blob, pos)
            pos += 8
            W.append(np.frombuffer(blob, _F64, rows * cols, pos).reshape(rows, cols).astype(float))
            pos += 8 * rows * cols
            (length,) = _U32.unpack_from(blob, pos)
            pos += 4
            B.append(np.frombuffer(blob, _F64, length, pos).astype(float))
            pos += 8 * length
    except (struct.error, ValueError) as exc:
        raise CheckpointError(f"truncated or corrupt checkpoint: {exc}") from exc
    if pos != len(blob):
        raise CheckpointError(f"{len(blob) - pos} trailing bytes after last layer")
    params = NetworkParams(W, B).validate()
    if params.spec.widths != (n_in, n_h, n_e, n_h, n_in):
        raise CheckpointError("layer shapes disagree with checkpoint header")
    header = {"N": n_in, "N_h": n_h, "N_e": n_e, "alpha": alpha, "layers": layers}
    return params, header


def write_checkpoint(path, params, alpha):
    Path(path).write_bytes(encode_checkpoint(params, alpha))


def read_checkpoint(path):
    return decode_checkpoint(Path(path).read_bytes())


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())


def ingest_csv(path, sample_rate_hz=250.0):
    """One signal per line; ``#`` lines are headers (``# rate=<hz>`` is honoured)."""
    path = Path(path)
    signals = []
    with path.open() as fh:
        for row, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].replace(",", " ").split():
                    key, _, value = token.partition("=")
                    if key.strip() == "rate" and value:
                        sample_rate_hz = float(value)
                continue
            values = []
            for col, token in enumerate(line.split(","), start=1):
                try:
                    values.append(float(token))
                except ValueError:
                    raise IngestError(f"{path}: cannot parse {token.strip()!r}", row, col) from None
            try:
                signals.append(Signal(np.array(values), sample_rate_hz))
            except ValueError as exc:
                raise IngestError(f"{path}: {exc}", row, 1) from None
    if not signals:
        raise EmptyDatasetError(f"{path}: no signals found")
    return signals


def format_float(x):
    return repr(float(x))


def write_signals_csv(path, signals, sample_rate_hz=None):
    rate = sample_rate_hz if sample_rate_hz is not None else (signals[0].sample_rate_hz if signals else 250.0)
    lines = [f"# rate={format_float(rate)}"]
    for s in signals:
        samples = s.samples if isinstance(s, Signal) else s
        lines.append(",".join(format_float(v) for v in samples))
    Path(path).write_text("\n".join(lines) + "\n")
