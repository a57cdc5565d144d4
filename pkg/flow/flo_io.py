# flow/flo_io.py - Middlebury .flo reader and writer
import logging
from pathlib import Path
from typing import Union

import numpy as np

from errors import BadMagic, FlowFormatError, InvalidParams, IoError, TruncatedFile
from flow.field import FlowField

logger = logging.getLogger(__name__)

# float32 202021.25 little-endian, reads "PIEH"
FLO_MAGIC = 202021.25
HEADER_BYTES = 12
PAIR_FLOW_NAME = "pair_{index:06d}.flo"


def encode_flo(field: FlowField) -> bytes:
    """Serialize a field: magic, int32 width, int32 height, interleaved float32 (u, v)"""
    header = np.array([FLO_MAGIC], dtype="<f4").tobytes()
    header += np.array([field.width, field.height], dtype="<i4").tobytes()
    body = np.stack([field.u, field.v], axis=-1).astype("<f4")
    return header + body.tobytes(order="C")


def decode_flo(raw: bytes, name: str = "<bytes>") -> FlowField:
    if len(raw) < HEADER_BYTES:
        raise TruncatedFile(f"{name}: {len(raw)} bytes is shorter than the .flo header")

    magic = np.frombuffer(raw, dtype="<f4", count=1)[0]
    if magic != np.float32(FLO_MAGIC):
        raise BadMagic(f"{name}: magic {float(magic)!r} is not {FLO_MAGIC}")

    width, height = (int(x) for x in np.frombuffer(raw, dtype="<i4", count=2, offset=4))
    if width <= 0 or height <= 0:
        raise FlowFormatError(f"{name}: invalid size {width}x{height}")

    count = 2 * width * height
    if len(raw) < HEADER_BYTES + 4 * count:
        raise TruncatedFile(f"{name}: expected {HEADER_BYTES + 4 * count} bytes, found {len(raw)}")

    data = np.frombuffer(raw, dtype="<f4", count=count, offset=HEADER_BYTES).reshape(height, width, 2)
    try:
        return FlowField(data[:, :, 0], data[:, :, 1])
    except InvalidParams as e:
        raise FlowFormatError(f"{name}: {e}") from e


def write_flo(field: FlowField, path: Union[str, Path]):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_flo(field))
    except OSError as e:
        raise IoError(f"could not write {path}: {e}") from e


def read_flo(path: Union[str, Path]) -> FlowField:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise IoError(f"could not read {path}: {e}") from e
    return decode_flo(raw, path.name)


def pair_flow_path(directory: Union[str, Path], index: int) -> Path:
    """External flow file holding the flow onto frame `index`"""
    return Path(directory) / PAIR_FLOW_NAME.format(index=index)


def write_pair_flows(flows, directory: Union[str, Path], first_index: int = 1):
    """Dump flows as pair_%06d.flo, the first one numbered first_index"""
    paths = []
    for offset, field in enumerate(flows):
        path = pair_flow_path(directory, first_index + offset)
        write_flo(field, path)
        paths.append(path)
    logger.debug("💾 Wrote %d flow files to %s", len(paths), directory)
    return paths
