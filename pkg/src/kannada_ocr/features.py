"""Symbol feature extraction: 3072 values per glyph.

A symbol raster is tight-cropped, area-resampled to a 32x32 coverage grid,
and described by three 1024-value blocks: a one-level orthonormal Haar
transform (LL|LH|HL|HH quadrants, each 16x16), per-row circular
autocorrelations (32 rows x 32 lags), and per-column circular
autocorrelations. Everything is deterministic: the same raster bytes give
a bit-identical vector.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import EmptySymbol

GRID = 32
FEATURE_DIM = 3 * GRID * GRID  # 3072


def _overlap_matrix(src: int, dst: int) -> np.ndarray:
    """dst x src matrix averaging src cells into dst equal-width intervals."""
    m = np.zeros((dst, src), dtype=np.float64)
    scale = src / dst
    for o in range(dst):
        lo = o * scale
        hi = (o + 1) * scale
        first = int(np.floor(lo))
        last = int(np.ceil(hi))
        for s in range(first, min(last, src)):
            m[o, s] = min(hi, s + 1) - max(lo, s)
    return m / scale


def normalize_32(raster: np.ndarray) -> np.ndarray:
    """Tight-crop a binary raster and area-resample it to a 32x32 grid.

    Cell values are the foreground coverage fraction in [0, 1], so thin
    strokes survive downsampling. Raises EmptySymbol for blank input.
    """
    fg = np.asarray(raster, dtype=bool)
    rows = np.flatnonzero(fg.any(axis=1))
    cols = np.flatnonzero(fg.any(axis=0))
    if rows.size == 0:
        raise EmptySymbol("symbol raster has no foreground pixels")
    tight = fg[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1].astype(np.float64)
    h, w = tight.shape
    return _overlap_matrix(h, GRID) @ tight @ _overlap_matrix(w, GRID).T


def haar_dwt(glyph: np.ndarray) -> np.ndarray:
    """One-level 2-D orthonormal Haar transform, flattened LL|LH|HL|HH.

    Each quadrant is 16x16 row-major; the transform preserves energy
    (Parseval), so the sum of squared coefficients equals that of the
    input grid.
    """
    g = np.asarray(glyph, dtype=np.float64)
    if g.shape != (GRID, GRID):
        raise ValueError(f"expected {GRID}x{GRID} grid, got {g.shape}")
    a = g[0::2, 0::2]
    b = g[0::2, 1::2]
    c = g[1::2, 0::2]
    d = g[1::2, 1::2]
    ll = (a + b + c + d) / 2.0
    lh = (a - b + c - d) / 2.0  # horizontal detail
    hl = (a + b - c - d) / 2.0  # vertical detail
    hh = (a - b - c + d) / 2.0
    return np.concatenate([ll.ravel(), lh.ravel(), hl.ravel(), hh.ravel()])


def _circular_autocorr(lines: np.ndarray) -> np.ndarray:
    """Circular autocorrelation of each row at lags 0..n-1, lag-0 normalized."""
    spec = np.fft.rfft(lines, axis=1)
    corr = np.fft.irfft(spec * np.conj(spec), n=lines.shape[1], axis=1)
    energy = corr[:, :1].copy()
    nonzero = energy[:, 0] > 0
    out = np.zeros_like(corr)
    out[nonzero] = corr[nonzero] / energy[nonzero]
    return out


def autocorrelation_features(glyph: np.ndarray) -> np.ndarray:
    """Row-wise then column-wise circular autocorrelations (2048 values)."""
    g = np.asarray(glyph, dtype=np.float64)
    if g.shape != (GRID, GRID):
        raise ValueError(f"expected {GRID}x{GRID} grid, got {g.shape}")
    horizontal = _circular_autocorr(g)
    vertical = _circular_autocorr(g.T)
    return np.concatenate([horizontal.ravel(), vertical.ravel()])


def feature_vector(raster: np.ndarray) -> np.ndarray:
    """Full 3072-value descriptor of a symbol raster."""
    glyph = normalize_32(raster)
    return np.concatenate([haar_dwt(glyph), autocorrelation_features(glyph)])


def dump_features(path: str | Path, vectors: list[np.ndarray]) -> None:
    """Write one symbol per line, 3072 space-separated decimals."""
    with open(path, "w", encoding="ascii") as fh:
        for vec in vectors:
            v = np.asarray(vec, dtype=np.float64)
            if v.shape != (FEATURE_DIM,):
                raise ValueError(f"expected {FEATURE_DIM} values, got {v.shape}")
            fh.write(" ".join(repr(float(x)) for x in v) + "\n")
