"""Page layout analysis: zones, lines, words, symbols, ottu separation.

The layout hierarchy is built bottom-up from 8-connected components.
Components cluster into text lines by vertical-interval overlap; short
strips made only of below-baseline conjuncts merge into the line above.
Each line gets reference rows (foreline/baseline) from its horizontal
projection profile, an italic-correction shear, word splits from gaps in
the vertical projection profile, and finally symbols: above-baseline
components with significant horizontal overlap merge into one symbol,
below-baseline components become ottu symbols ordered right after their
base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import DegenerateLine, MalformedZone

_EIGHT_CONN = np.ones((3, 3), dtype=bool)

# Tunable layout constants (overridable through PipelineConfig).
WORD_GAP_RATIO = 0.25       # zero-run wider than this x line height splits words
OVERLAP_MERGE_RATIO = 0.5   # horizontal overlap (of the narrower box) merging symbols
OTTU_MASS_RATIO = 0.7       # pixel-mass fraction below baseline marking an ottu
SHEAR_LIMIT_DEG = 20        # italic search range, 1-degree steps
LINE_MERGE_HEIGHT_RATIO = 0.4  # strips shorter than this x median height merge up
MIN_COMPONENT_AREA = 4      # specks below this many pixels are dropped as noise


@dataclass(frozen=True)
class Component:
    """One 8-connected foreground component."""

    id: int
    left: int
    top: int
    width: int
    height: int
    pixel_count: int
    mask: np.ndarray  # bbox-local boolean raster

    @property
    def right(self) -> int:
        return self.left + self.width

    @property
    def bottom(self) -> int:
        return self.top + self.height


@dataclass(frozen=True)
class Zone:
    left: int
    top: int
    width: int
    height: int
    kind: str = "text"


@dataclass
class TextLine:
    left: int
    top: int
    width: int
    height: int
    component_ids: list[int]
    foreline: int = -1
    baseline: int = -1
    shear_degrees: float = 0.0

    @property
    def body_height(self) -> int:
        return max(1, self.baseline - self.foreline + 1)


@dataclass
class Word:
    line_index: int
    col_start: int  # inclusive, line-local columns
    col_end: int    # exclusive
    symbols: list["SymbolImage"] = field(default_factory=list)


@dataclass
class SymbolImage:
    raster: np.ndarray          # cropped binary raster (union of members)
    left: int                   # line-local bounding box
    top: int
    width: int
    height: int
    is_ottu: bool
    component_ids: list[int]


def connected_components(binary: np.ndarray, min_area: int = 1) -> list[Component]:
    """8-connected components with bounding boxes and local masks."""
    labels, count = ndimage.label(np.asarray(binary, dtype=bool), structure=_EIGHT_CONN)
    comps: list[Component] = []
    if count == 0:
        return comps
    for comp_id, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        rs, cs = sl
        mask = labels[sl] == comp_id
        pixels = int(mask.sum())
        if pixels < min_area:
            continue
        comps.append(Component(
            id=comp_id, left=cs.start, top=rs.start,
            width=cs.stop - cs.start, height=rs.stop - rs.start,
            pixel_count=pixels, mask=mask))
    return comps


def read_zones(path: str | Path, page_width: int, page_height: int) -> list[Zone]:
    """Parse a uzn zone file: 'left top width height kind' per line."""
    zones: list[Zone] = []
    for line_no, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 4)
        if len(parts) < 4:
            raise MalformedZone(f"{path}:{line_no}: expected 'left top width height kind'")
        try:
            left, top, width, height = (int(v) for v in parts[:4])
        except ValueError as exc:
            raise MalformedZone(f"{path}:{line_no}: non-integer zone geometry") from exc
        kind = parts[4] if len(parts) == 5 else "text"
        if left < 0 or top < 0 or width <= 0 or height <= 0 \
                or left + width > page_width or top + height > page_height:
            raise MalformedZone(f"{path}:{line_no}: zone outside page bounds")
        zones.append(Zone(left=left, top=top, width=width, height=height, kind=kind))
    return zones


def write_zones(path: str | Path, zones: list[Zone]) -> None:
    lines = [f"{z.left} {z.top} {z.width} {z.height} {z.kind}" for z in zones]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def full_page_zone(binary: np.ndarray) -> Zone:
    h, w = binary.shape
    return Zone(left=0, top=0, width=w, height=h)


def components_in_zone(comps: list[Component], zone: Zone) -> list[Component]:
    """Components whose bbox center falls inside the zone."""
    out = []
    for c in comps:
        cx = c.left + c.width / 2.0
        cy = c.top + c.height / 2.0
        if zone.left <= cx < zone.left + zone.width and zone.top <= cy < zone.top + zone.height:
            out.append(c)
    return out


def segment_lines(comps: list[Component], zone: Zone) -> list[TextLine]:
    """Cluster components into text lines, merging detached ottu strips up."""
    if not comps:
        return []
    order = sorted(comps, key=lambda c: (c.top, c.left))
    clusters: list[list[Component]] = []
    spans: list[tuple[int, int]] = []  # running (top, bottom) per cluster
    for c in order:
        placed = False
        for idx, (top, bottom) in enumerate(spans):
            if c.top < bottom and c.bottom > top:  # vertical intervals overlap
                clusters[idx].append(c)
                spans[idx] = (min(top, c.top), max(bottom, c.bottom))
                placed = True
                break
        if not placed:
            clusters.append([c])
            spans.append((c.top, c.bottom))

    # Transitive closure: growing spans can newly overlap earlier clusters.
    merged = True
    while merged:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                (t1, b1), (t2, b2) = spans[i], spans[j]
                if t1 < b2 and t2 < b1:
                    clusters[i].extend(clusters[j])
                    spans[i] = (min(t1, t2), max(b1, b2))
                    del clusters[j], spans[j]
                    merged = True
                    break
            if merged:
                break

    ordered = sorted(range(len(clusters)), key=lambda k: spans[k][0])
    clusters = [clusters[k] for k in ordered]
    spans = [spans[k] for k in ordered]

    heights = sorted(b - t for t, b in spans)
    median_height = heights[len(heights) // 2]

    # Short strips sitting just below a taller line are detached conjuncts.
    final_clusters: list[list[Component]] = []
    final_spans: list[tuple[int, int]] = []
    for cluster, (top, bottom) in zip(clusters, spans):
        height = bottom - top
        if (final_clusters
                and height < LINE_MERGE_HEIGHT_RATIO * median_height
                and top >= final_spans[-1][0] + 0.5 * (final_spans[-1][1] - final_spans[-1][0])
                and top - final_spans[-1][1] < median_height):
            final_clusters[-1].extend(cluster)
            final_spans[-1] = (final_spans[-1][0], max(final_spans[-1][1], bottom))
        else:
            final_clusters.append(list(cluster))
            final_spans.append((top, bottom))

    lines = []
    for cluster in final_clusters:
        left = min(c.left for c in cluster)
        right = max(c.right for c in cluster)
        top = min(c.top for c in cluster)
        bottom = max(c.bottom for c in cluster)
        lines.append(TextLine(
            left=left, top=top, width=right - left, height=bottom - top,
            component_ids=[c.id for c in sorted(cluster, key=lambda c: (c.left, c.top))]))
    return lines


def render_components(comps: list[Component], left: int, top: int,
                      width: int, height: int) -> np.ndarray:
    """Paint components into a window given in page coordinates."""
    out = np.zeros((height, width), dtype=bool)
    for c in comps:
        r0 = c.top - top
        c0 = c.left - left
        out[r0:r0 + c.height, c0:c0 + c.width] |= c.mask
    return out


def estimate_reference_rows(line_image: np.ndarray) -> tuple[int, int]:
    """(foreline, baseline) from the horizontal projection profile.

    The baseline is the strongest mass drop in the lower half of the
    profile (below it only conjunct ink remains); the foreline is the
    strongest rise in the upper half.
    """
    img = np.asarray(line_image, dtype=bool)
    hpp = img.sum(axis=1).astype(np.int64)
    occupied = np.flatnonzero(hpp)
    if occupied.size == 0 or occupied[-1] - occupied[0] + 1 < 4:
        raise DegenerateLine("line shorter than 4 rows")
    first, last = int(occupied[0]), int(occupied[-1])
    mid = (first + last) // 2

    padded = np.concatenate([[0], hpp, [0]])  # virtual empty rows at both ends
    drop = padded[1:-1] - padded[2:]   # drop[r] = hpp[r] - hpp[r+1]
    rise = padded[1:-1] - padded[:-2]  # rise[r] = hpp[r] - hpp[r-1]

    lower = np.arange(mid, last + 1)
    baseline = int(lower[np.argmax(drop[lower])])
    upper = np.arange(first, mid + 1)
    foreline = int(upper[np.argmax(rise[upper])])

    if foreline >= baseline:
        foreline, baseline = first, last
    return foreline, baseline


def shear_image(image: np.ndarray, degrees: float) -> np.ndarray:
    """Shear rows horizontally about the bottom row (integer pixel shifts)."""
    img = np.asarray(image, dtype=bool)
    h, w = img.shape
    shift_per_row = np.tan(np.deg2rad(degrees))
    shifts = np.rint((h - 1 - np.arange(h)) * shift_per_row).astype(np.int64)
    pad_left = max(0, int(shifts.max()))
    pad_right = max(0, -int(shifts.min()))
    out = np.zeros((h, w + pad_left + pad_right), dtype=bool)
    for r in range(h):
        s = pad_left + shifts[r]
        out[r, s:s + w] = img[r]
    cols = np.flatnonzero(out.any(axis=0))
    if cols.size == 0:
        return img.copy()
    return out[:, cols[0]:cols[-1] + 1]


def correct_italics(line_image: np.ndarray) -> tuple[np.ndarray, int]:
    """Find the shear (1-degree steps, +/-20) maximizing zero columns in the
    vertical projection profile; ties break toward the upright angle."""
    img = np.asarray(line_image, dtype=bool)
    best_angle = 0
    best_score = -1
    for mag in range(0, SHEAR_LIMIT_DEG + 1):
        for angle in ([0] if mag == 0 else [-mag, mag]):
            sheared = shear_image(img, angle)
            score = int((~sheared.any(axis=0)).sum())
            if score > best_score:
                best_score = score
                best_angle = angle
    return shear_image(img, best_angle), best_angle


def segment_words(line_image: np.ndarray, body_height: int,
                  gap_ratio: float = WORD_GAP_RATIO) -> list[tuple[int, int]]:
    """Column spans of words: zero-runs wider than gap_ratio x body height split."""
    img = np.asarray(line_image, dtype=bool)
    vpp = img.sum(axis=0)
    occupied = np.flatnonzero(vpp)
    if occupied.size == 0:
        return []
    threshold = gap_ratio * body_height
    words: list[tuple[int, int]] = []
    start = int(occupied[0])
    prev = int(occupied[0])
    for col in occupied[1:]:
        col = int(col)
        if col - prev - 1 > threshold:
            words.append((start, prev + 1))
            start = col
        prev = col
    words.append((start, prev + 1))
    return words


def is_ottu(component_mask: np.ndarray, top: int, baseline: int,
            mass_ratio: float = OTTU_MASS_RATIO) -> bool:
    """True when at least ``mass_ratio`` of the pixel mass lies below baseline."""
    mask = np.asarray(component_mask, dtype=bool)
    rows = np.arange(top, top + mask.shape[0])
    per_row = mask.sum(axis=1)
    total = per_row.sum()
    if total == 0:
        return False
    below = per_row[rows > baseline].sum()
    return below >= mass_ratio * total


def _overlap_ratio(a: Component, b: Component) -> float:
    inter = min(a.right, b.right) - max(a.left, b.left)
    if inter <= 0:
        return 0.0
    return inter / min(a.width, b.width)


def segment_symbols(comps: list[Component], baseline: int,
                    merge_ratio: float = OVERLAP_MERGE_RATIO,
                    mass_ratio: float = OTTU_MASS_RATIO) -> list[SymbolImage]:
    """Group one word's components into symbols.

    Above-baseline components with horizontal overlap >= merge_ratio of the
    narrower box merge into one symbol; below-baseline components become
    ottu symbols placed right after the base symbol they overlap most.
    """
    if not comps:
        return []
    base_comps = []
    ottu_comps = []
    for c in comps:
        if is_ottu(c.mask, c.top, baseline, mass_ratio):
            ottu_comps.append(c)
        else:
            base_comps.append(c)

    # Union-find merge of overlapping base components.
    parent = list(range(len(base_comps)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(base_comps)):
        for j in range(i + 1, len(base_comps)):
            if _overlap_ratio(base_comps[i], base_comps[j]) >= merge_ratio:
                parent[find(i)] = find(j)

    groups: dict[int, list[Component]] = {}
    for i, c in enumerate(base_comps):
        groups.setdefault(find(i), []).append(c)

    def build(members: list[Component], ottu: bool) -> SymbolImage:
        left = min(c.left for c in members)
        top = min(c.top for c in members)
        right = max(c.right for c in members)
        bottom = max(c.bottom for c in members)
        raster = render_components(members, left, top, right - left, bottom - top)
        return SymbolImage(raster=raster, left=left, top=top,
                           width=right - left, height=bottom - top,
                           is_ottu=ottu,
                           component_ids=[c.id for c in members])

    bases = sorted((build(m, False) for m in groups.values()), key=lambda s: (s.left, s.top))
    ottus = [build([c], True) for c in ottu_comps]

    def base_for(o: SymbolImage) -> int:
        best, best_overlap = 0, -1.0
        for idx, b in enumerate(bases):
            inter = min(o.left + o.width, b.left + b.width) - max(o.left, b.left)
            if inter > best_overlap:
                best_overlap = inter
                best = idx
        return best

    attached: dict[int, list[SymbolImage]] = {i: [] for i in range(len(bases))}
    stray: list[SymbolImage] = []
    if bases:
        for o in sorted(ottus, key=lambda s: (s.left, s.top)):
            attached[base_for(o)].append(o)
    else:
        stray = sorted(ottus, key=lambda s: (s.left, s.top))

    out: list[SymbolImage] = []
    for idx, b in enumerate(bases):
        out.append(b)
        out.extend(sorted(attached[idx], key=lambda s: (s.top, s.left)))
    out.extend(stray)
    return out


def classify_by_geometry(symbol: SymbolImage, foreline: int, baseline: int) -> str | None:
    """Geometric punctuation rules; None defers to the trained classifier.

    Only unambiguous cases fire: the dot, the comma and the hyphen. Small
    marks near the foreline (quotes, apostrophes) share too much geometry
    to separate reliably and are left to the classifier.
    """
    body = max(1, baseline - foreline + 1)
    if symbol.height >= 0.4 * body:
        return None
    bottom = symbol.top + symbol.height
    near_baseline = abs(bottom - (baseline + 1)) <= 0.15 * body
    below = bottom - (baseline + 1)
    if symbol.height < 0.22 * body and symbol.width <= 1.3 * symbol.height and near_baseline:
        return "."
    if symbol.height < 0.3 * body and below > 0.05 * body and symbol.top > foreline + 0.5 * body:
        return ","
    if (symbol.width >= 2.0 * symbol.height
            and symbol.top > foreline + 0.25 * body and bottom < baseline - 0.15 * body):
        return "-"
    return None
