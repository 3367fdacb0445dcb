"""Image file I/O: bit-exact PGM (P5) read/write, optional PNG, histogram dumps.

Grayscale pages are plain ``uint8`` numpy arrays of shape (height, width),
0 = black ink, 255 = white paper. Binary images are boolean arrays with
True = foreground ink.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import OcrError


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary (P5) PGM file into a uint8 array of shape (h, w)."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise OcrError(f"{path}: not a P5 PGM file")
    # Header: magic, width, height, maxval; '#' comments allowed between tokens.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        m = re.compile(rb"\s*(?:#[^\n]*\n)*\s*(\d+)").match(data, pos)
        if m is None:
            raise OcrError(f"{path}: malformed PGM header")
        tokens.append(int(m.group(1)))
        pos = m.end()
    width, height, maxval = tokens
    if maxval > 255:
        raise OcrError(f"{path}: 16-bit PGM not supported (maxval={maxval})")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos:pos + width * height]
    if len(raster) != width * height:
        raise OcrError(f"{path}: truncated raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path: str | Path, image: np.ndarray) -> None:
    """Write a uint8 grayscale array as binary PGM (P5)."""
    img = np.asarray(image, dtype=np.uint8)
    if img.ndim != 2:
        raise OcrError("PGM writer expects a 2-D array")
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.tobytes())


def read_image(path: str | Path) -> np.ndarray:
    """Read a page image. PGM natively; PNG through Pillow when installed."""
    p = Path(path)
    suffix = p.suffix.lower()
    if suffix == ".pgm":
        return read_pgm(p)
    if suffix == ".png":
        try:
            from PIL import Image
        except ImportError as exc:  # pragma: no cover - depends on extras
            raise OcrError("PNG support needs Pillow (pip install kannada-ocr[png])") from exc
        with Image.open(p) as im:
            return np.asarray(im.convert("L"), dtype=np.uint8)
    raise OcrError(f"{path}: unsupported image format (use .pgm or .png)")


def write_histogram(path: str | Path, histogram: np.ndarray) -> None:
    """Serialize a 256-bin intensity histogram, one count per line."""
    hist = np.asarray(histogram, dtype=np.int64)
    if hist.shape != (256,):
        raise OcrError("histogram must have exactly 256 bins")
    Path(path).write_text("\n".join(str(int(c)) for c in hist) + "\n", encoding="ascii")


def read_histogram(path: str | Path) -> np.ndarray:
    """Read a histogram written by :func:`write_histogram`."""
    lines = Path(path).read_text(encoding="ascii").split()
    if len(lines) != 256:
        raise OcrError(f"{path}: expected 256 histogram bins, got {len(lines)}")
    return np.array([int(v) for v in lines], dtype=np.int64)
