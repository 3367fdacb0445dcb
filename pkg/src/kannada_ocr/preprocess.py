"""Page preprocessing: global binarization, skew detection and correction.

Foreground (ink) is every pixel at or below the Otsu threshold. Skew is
estimated from the bottom edge of the ink: for each connected component,
the lowest foreground pixel of every column votes in a Hough-style
accumulator over candidate angles; the strongest aligned row of bottom
points wins. Correction rotates the gray image by the opposite angle with
bilinear interpolation on an expanded, white-filled canvas; the caller is
expected to re-binarize the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import NoContent, ZeroVariance

# Skew search range and resolution (degrees). The correction threshold of
# 0.5 degrees is the pipeline's acceptance limit for leaving a page alone.
SKEW_RANGE_DEG = 15.0
SKEW_STEP_DEG = 0.1
SKEW_ACCEPT_DEG = 0.5

_EIGHT_CONN = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class SkewEstimate:
    """Detected page skew: signed angle and a peak-strength confidence."""

    angle_degrees: float
    confidence: float


def histogram(gray: np.ndarray) -> np.ndarray:
    """256-bin intensity histogram of a uint8 image."""
    return np.bincount(np.asarray(gray, dtype=np.uint8).ravel(), minlength=256).astype(np.int64)


def otsu_threshold(hist: np.ndarray) -> int:
    """Threshold maximizing between-class variance; ink is intensity <= t.

    Ties resolve to the smallest threshold so output is deterministic.
    Raises ZeroVariance when the histogram has all its mass in one bin.
    """
    h = np.asarray(hist, dtype=np.float64)
    if h.shape != (256,):
        raise ValueError("otsu_threshold expects a 256-bin histogram")
    total = h.sum()
    if total <= 0:
        raise ZeroVariance("empty histogram")
    if np.count_nonzero(h) < 2:
        raise ZeroVariance("constant image: no foreground/background separation")

    levels = np.arange(256, dtype=np.float64)
    w0 = np.cumsum(h)                     # mass of class [0..t]
    m0 = np.cumsum(h * levels)            # first moment of class [0..t]
    w1 = total - w0
    mu_total = m0[-1]
    # Between-class variance for every candidate t; invalid (empty-class)
    # candidates get -inf so they never win.
    with np.errstate(divide="ignore", invalid="ignore"):
        mean0 = m0 / w0
        mean1 = (mu_total - m0) / w1
        sigma_b = w0 * w1 * (mean0 - mean1) ** 2
    sigma_b[(w0 == 0) | (w1 == 0)] = -np.inf
    return int(np.argmax(sigma_b))  # argmax returns the first (smallest) maximizer


def binarize(gray: np.ndarray, threshold: int) -> np.ndarray:
    """Foreground mask: True where intensity <= threshold."""
    return np.asarray(gray, dtype=np.uint8) <= threshold


def binarize_otsu(gray: np.ndarray) -> np.ndarray:
    """Otsu-threshold a gray page. Constant pages come back all-background."""
    try:
        t = otsu_threshold(histogram(gray))
    except ZeroVariance:
        return np.zeros(gray.shape, dtype=bool)
    return binarize(gray, t)


def _bottom_edge_points(binary: np.ndarray) -> np.ndarray:
    """(x, y) of the lowest foreground pixel per column of each component."""
    labels, count = ndimage.label(binary, structure=_EIGHT_CONN)
    if count == 0:
        return np.empty((0, 2), dtype=np.int64)
    points = []
    for comp_id, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        rs, cs = sl
        region = labels[sl] == comp_id
        h = region.shape[0]
        # Lowest True per column: flip rows, argmax finds first True.
        has_ink = region.any(axis=0)
        bottom = h - 1 - np.argmax(region[::-1, :], axis=0)
        cols = np.nonzero(has_ink)[0]
        xs = cols + cs.start
        ys = bottom[cols] + rs.start
        points.append(np.stack([xs, ys], axis=1))
    return np.concatenate(points, axis=0)


def detect_skew(binary: np.ndarray) -> SkewEstimate:
    """Estimate page skew in [-15, +15] degrees at 0.1-degree resolution.

    Positive angles mean the text lines of ``rotate_gray(page, +a)`` --
    i.e. the estimate composes with :func:`deskew` to undo the rotation.
    Raises NoContent when the image has no foreground at all.
    """
    binary = np.asarray(binary, dtype=bool)
    if not binary.any():
        raise NoContent("cannot estimate skew of an empty image")
    pts = _bottom_edge_points(binary)
    xs = pts[:, 0].astype(np.float64)
    ys = pts[:, 1].astype(np.float64)

    n_steps = int(round(2 * SKEW_RANGE_DEG / SKEW_STEP_DEG)) + 1
    angles = -SKEW_RANGE_DEG + SKEW_STEP_DEG * np.arange(n_steps)
    best_angle = 0.0
    best_peak = -1
    # Rotating the image by +a moves a text baseline to slope +a in (x, y-down)
    # coordinates; projecting on y*cos - x*sin(+a) re-aligns it to one row bin.
    for a in angles:
        rad = np.deg2rad(a)
        r = ys * np.cos(rad) - xs * np.sin(rad)
        r_idx = np.round(r).astype(np.int64)
        r_idx -= r_idx.min()
        peak = int(np.bincount(r_idx).max())
        if peak > best_peak:
            best_peak = peak
            best_angle = float(a)
    confidence = min(1.0, best_peak / len(pts))
    return SkewEstimate(angle_degrees=round(best_angle, 1), confidence=confidence)


def rotate_gray(gray: np.ndarray, angle_degrees: float, fill: int = 255) -> np.ndarray:
    """Rotate a gray image by the given angle (bilinear, expanded canvas).

    Positive angles rotate image content clockwise on screen (y grows down).
    Out-of-canvas samples read as ``fill`` (white paper by default).
    """
    gray = np.asarray(gray, dtype=np.uint8)
    h, w = gray.shape
    rad = np.deg2rad(angle_degrees)
    c, s = np.cos(rad), np.sin(rad)
    # Expanded canvas holding the whole rotated rectangle.
    new_w = int(np.ceil(abs(w * c) + abs(h * s)))
    new_h = int(np.ceil(abs(w * s) + abs(h * c)))
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    ncy, ncx = (new_h - 1) / 2.0, (new_w - 1) / 2.0

    yy, xx = np.meshgrid(np.arange(new_h, dtype=np.float64),
                         np.arange(new_w, dtype=np.float64), indexing="ij")
    # Inverse map: rotate output coords back into source coords.
    dx = xx - ncx
    dy = yy - ncy
    sx = c * dx + s * dy + cx
    sy = -s * dx + c * dy + cy

    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    fx = sx - x0
    fy = sy - y0

    def sample(yi, xi):
        inside = (yi >= 0) & (yi < h) & (xi >= 0) & (xi < w)
        out = np.full(yi.shape, float(fill))
        out[inside] = gray[yi[inside], xi[inside]]
        return out

    v00 = sample(y0, x0)
    v01 = sample(y0, x0 + 1)
    v10 = sample(y0 + 1, x0)
    v11 = sample(y0 + 1, x0 + 1)
    top = v00 * (1 - fx) + v01 * fx
    bot = v10 * (1 - fx) + v11 * fx
    val = top * (1 - fy) + bot * fy
    return np.clip(np.rint(val), 0, 255).astype(np.uint8)


def deskew(gray: np.ndarray, estimate: SkewEstimate) -> np.ndarray:
    """Undo detected skew. Below the 0.5-degree threshold the input is
    returned unchanged; otherwise the page is rotated by the opposite angle.
    """
    angle = estimate.angle_degrees
    if abs(angle) > SKEW_RANGE_DEG:
        raise ValueError(f"skew angle {angle} outside the +/-{SKEW_RANGE_DEG} search range")
    if abs(angle) < SKEW_ACCEPT_DEG:
        return gray
    return rotate_gray(gray, -angle)
