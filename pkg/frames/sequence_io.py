# frames/sequence_io.py - Frame directory reading and writing
import logging
import re
from pathlib import Path
from typing import List, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from errors import DecodeError, InvalidParams, IoError, NoFrames
from frames.frame import Frame, SequenceHandle, quantize_samples

logger = logging.getLogger(__name__)

FRAME_NAME = "frame_{index:06d}.{ext}"
INDEX_PATTERN = re.compile(r"(\d+)\.(pgm|ppm|png)$", re.IGNORECASE)

# format name -> Pillow writer; Netpbm extension is picked per channel count
WRITE_FORMATS = {
    "pgm": "PPM",
    "ppm": "PPM",
    "png": "PNG",
}


def _frame_extension(fmt: str, channels: int) -> str:
    if fmt == "png":
        return "png"
    return "pgm" if channels == 1 else "ppm"


def decode_frame(path: Union[str, Path]) -> Frame:
    """Decode one 8-bit PGM (P5), PPM (P6) or PNG file into a Frame"""
    path = Path(path)
    try:
        with Image.open(path) as img:
            img.load()
            if img.mode not in ("L", "RGB"):
                raise DecodeError(f"{path.name}: unsupported image mode {img.mode!r} (need 8-bit gray or RGB)")
            data = np.asarray(img, dtype=np.uint8)
    except DecodeError:
        raise
    except FileNotFoundError as e:
        raise IoError(f"{path}: {e}") from e
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise DecodeError(f"{path.name}: {e}") from e
    return Frame(data.astype(np.float64))


def list_frame_files(directory: Union[str, Path], pattern: str = "frame_*") -> List[Path]:
    """Frame files matching pattern, ordered by the numeric index in their name"""
    directory = Path(directory)
    if not directory.is_dir():
        raise IoError(f"input directory not found: {directory}")

    indexed = []
    for path in directory.glob(pattern):
        match = INDEX_PATTERN.search(path.name)
        if path.is_file() and match:
            indexed.append((int(match.group(1)), path.name, path))

    indexed.sort(key=lambda item: (item[0], item[1]))
    return [path for _, _, path in indexed]


def load_sequence(directory: Union[str, Path], pattern: str = "frame_*") -> SequenceHandle:
    """
    Load a frame directory as a SequenceHandle

    Args:
        directory: Folder holding the frames
        pattern: Glob pattern selecting the frame files

    Returns:
        SequenceHandle with frames ordered by their zero-padded index
    """
    files = list_frame_files(directory, pattern)
    if not files:
        raise NoFrames(f"no frames matching {pattern!r} in {directory}")

    frames = [decode_frame(path) for path in files]
    sequence = SequenceHandle(frames, [path.name for path in files])
    logger.info(
        "✅ Loaded %d frames (%dx%d, %d ch) from %s",
        len(sequence), sequence.width, sequence.height, sequence.channels, directory,
    )
    return sequence


def write_sequence(sequence: SequenceHandle, directory: Union[str, Path], fmt: str = "pgm") -> List[Path]:
    """Write one file per frame as frame_%06d.<ext>; returns the written paths in order"""
    if fmt not in WRITE_FORMATS:
        raise InvalidParams(f"unknown frame format {fmt!r}, expected one of {sorted(WRITE_FORMATS)}")

    directory = Path(directory)
    ext = _frame_extension(fmt, sequence.channels)
    written = []
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for index, frame in enumerate(sequence):
            samples = quantize_samples(frame.data)
            img = Image.fromarray(samples[:, :, 0] if frame.channels == 1 else samples)
            path = directory / FRAME_NAME.format(index=index, ext=ext)
            img.save(path, format=WRITE_FORMATS[fmt])
            written.append(path)
    except OSError as e:
        raise IoError(f"could not write frames to {directory}: {e}") from e

    logger.info("💾 Wrote %d %s frames to %s", len(written), ext.upper(), directory)
    return written
