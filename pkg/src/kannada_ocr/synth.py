"""Synthetic fixtures: procedural glyph atlas, page composition, lexicon.

No Kannada font or shaping engine is assumed. Each recognition class gets
a deterministic procedural glyph whose geometry matches its layout role
(base symbols fill the line body, ottus hang below the baseline with a
small protrusion above it, marks are short mid-band shapes, punctuation
follows the geometric rules the layout stage relies on). Pages composed
from the atlas come with exact ground truth, which is what the end-to-end
accuracy tests measure against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MissingGlyph
from .image_io import read_pgm, write_pgm
from .layout import Zone
from .preprocess import rotate_gray
from .script.codec import decompose_letterpress, fuse_complexes, unicode_to_symbols
from .script.registry import SymbolRegistry

BODY = 32          # line body height: foreline..baseline inclusive
INK = 40           # gray level of ink
PAPER = 245        # gray level of paper

# Vertical anchoring per glyph family; the baseline is body row BODY-1.
_ANCHOR_BASELINE = "baseline"      # bottom row sits on the baseline
_ANCHOR_OTTU = "ottu"              # top protrudes slightly above the baseline
_ANCHOR_TOP = "top"                # hangs from the foreline (quotes)
_ANCHOR_MID = "mid"                # centered in the body (hyphen)
_ANCHOR_DESCEND = "descend"        # crosses the baseline a little (comma)

OTTU_PROTRUSION = 3


@dataclass(frozen=True)
class GlyphSpec:
    width: int
    height: int
    anchor: str


def _glyph_spec(name: str, role: str, rng: np.random.Generator) -> GlyphSpec:
    if name == "dot":
        return GlyphSpec(5, 5, _ANCHOR_BASELINE)
    if name == "comma":
        return GlyphSpec(5, 9, _ANCHOR_DESCEND)
    if name == "hyphen":
        return GlyphSpec(12, 4, _ANCHOR_MID)
    if name in ("lquote", "rquote", "apostrophe"):
        return GlyphSpec(int(rng.integers(4, 6)), int(rng.integers(7, 9)), _ANCHOR_TOP)
    if role in ("ottu", "ottu_complex"):
        return GlyphSpec(int(rng.integers(16, 23)), int(rng.integers(18, 22)), _ANCHOR_OTTU)
    if role in ("vowel_modifier_part", "dheergha"):
        return GlyphSpec(int(rng.integers(9, 14)), int(rng.integers(15, 21)), _ANCHOR_BASELINE)
    if role == "arkaa_mark":  # resolved-only, not drawn; keep a spec anyway
        return GlyphSpec(10, 16, _ANCHOR_BASELINE)
    if role == "punctuation":
        return GlyphSpec(int(rng.integers(6, 10)), int(rng.integers(24, 29)), _ANCHOR_BASELINE)
    # Base symbols: vowels, consonant units, digits, specials.
    return GlyphSpec(int(rng.integers(18, 29)), int(rng.integers(26, 32)), _ANCHOR_BASELINE)


def _stamp_segment(canvas: np.ndarray, p0: tuple[float, float],
                   p1: tuple[float, float], radius: int) -> None:
    h, w = canvas.shape
    steps = int(max(abs(p1[0] - p0[0]), abs(p1[1] - p0[1]))) + 1
    xs = np.rint(np.linspace(p0[0], p1[0], steps)).astype(int)
    ys = np.rint(np.linspace(p0[1], p1[1], steps)).astype(int)
    for dx in range(-radius, radius + 1):
        for dy in range(-radius, radius + 1):
            if dx * dx + dy * dy > radius * radius:
                continue
            cx = np.clip(xs + dx, 0, w - 1)
            cy = np.clip(ys + dy, 0, h - 1)
            canvas[cy, cx] = True


def _draw_glyph(spec: GlyphSpec, rng: np.random.Generator, name: str) -> np.ndarray:
    canvas = np.zeros((spec.height, spec.width), dtype=bool)
    if name == "dot":
        canvas[:] = True
        return canvas
    if name == "hyphen":
        canvas[:] = True
        return canvas
    if name == "comma":
        canvas[:4, :] = True
        canvas[4:, 1:4] = True
        return canvas
    # Connected random polyline: distinct, reproducible, one component.
    w, h = spec.width, spec.height
    n_points = int(rng.integers(5, 8))
    px = rng.uniform(1, w - 2, size=n_points)
    py = rng.uniform(1, h - 2, size=n_points)
    # Spread anchor points so the glyph spans its box.
    px[0], py[0] = 1.0, 1.0
    px[1], py[1] = w - 2.0, h - 2.0
    px[2], py[2] = w - 2.0, 1.0
    radius = 1 if min(w, h) <= 6 else 2 if min(w, h) <= 14 else 2
    order = rng.permutation(n_points)
    pts = [(px[i], py[i]) for i in order]
    for p0, p1 in zip(pts, pts[1:]):
        _stamp_segment(canvas, p0, p1, radius)
    return canvas


@dataclass
class GlyphAtlas:
    """Deterministic glyph shapes plus per-class placement metadata."""

    registry: SymbolRegistry
    seed: int = 0
    shapes: dict[int, np.ndarray] = field(default_factory=dict)
    specs: dict[int, GlyphSpec] = field(default_factory=dict)

    def labels(self) -> list[int]:
        return sorted(self.shapes)

    def sample(self, label_id: int, variant: int,
               dropout: float = 0.0, scale_jitter: float = 0.0,
               speckle: float = 0.0) -> np.ndarray:
        """A jittered rendering of one glyph; variant 0 with zero noise is
        the clean shape itself."""
        if label_id not in self.shapes:
            raise MissingGlyph(f"atlas has no glyph for label {label_id}")
        shape = self.shapes[label_id]
        if variant == 0 and not (dropout or scale_jitter or speckle):
            return shape.copy()
        rng = np.random.default_rng((self.seed, label_id, variant))
        out = shape
        if scale_jitter:
            f = 1.0 + rng.uniform(-scale_jitter, scale_jitter)
            nh = max(4, int(round(shape.shape[0] * f)))
            nw = max(4, int(round(shape.shape[1] * f)))
            out = _resize_binary(shape, nh, nw)
        out = out.copy()
        if dropout:
            out &= rng.random(out.shape) >= dropout
        if speckle:
            out |= rng.random(out.shape) < speckle
        return out


def _resize_binary(mask: np.ndarray, nh: int, nw: int) -> np.ndarray:
    h, w = mask.shape
    rows = np.clip((np.arange(nh) * h / nh).astype(int), 0, h - 1)
    cols = np.clip((np.arange(nw) * w / nw).astype(int), 0, w - 1)
    return mask[np.ix_(rows, cols)]


def build_atlas(registry: SymbolRegistry, seed: int = 0,
                labels: list[int] | None = None) -> GlyphAtlas:
    """Glyphs for every classifier-visible label (resolved readings have no
    printed shape of their own and are skipped)."""
    atlas = GlyphAtlas(registry=registry, seed=seed)
    wanted = labels if labels is not None else registry.trainable_ids()
    for lid in wanted:
        lab = registry.label(lid)
        if not lab.trainable:
            continue
        rng = np.random.default_rng((seed, lid))
        spec = _glyph_spec(lab.name, lab.role, rng)
        atlas.specs[lid] = spec
        atlas.shapes[lid] = _draw_glyph(spec, rng, lab.name)
    return atlas


def save_atlas(atlas: GlyphAtlas, directory: str | Path,
               samples_per_label: int = 1, dropout: float = 0.0,
               scale_jitter: float = 0.0, speckle: float = 0.0) -> None:
    """Materialize the atlas: one subdirectory per label id, PGM glyphs."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for lid in atlas.labels():
        sub = root / str(lid)
        sub.mkdir(exist_ok=True)
        for k in range(samples_per_label):
            bitmap = atlas.sample(lid, k, dropout=dropout,
                                  scale_jitter=scale_jitter, speckle=speckle)
            gray = np.where(bitmap, np.uint8(0), np.uint8(255))
            write_pgm(sub / f"{k:03d}.pgm", gray)


def load_atlas_samples(directory: str | Path) -> list[tuple[np.ndarray, int]]:
    """(binary raster, label id) pairs from a materialized atlas directory."""
    root = Path(directory)
    out: list[tuple[np.ndarray, int]] = []
    for sub in sorted(root.iterdir(), key=lambda p: int(p.name) if p.name.isdigit() else 1 << 30):
        if not sub.is_dir() or not sub.name.isdigit():
            continue
        lid = int(sub.name)
        for pgm in sorted(sub.glob("*.pgm")):
            gray = read_pgm(pgm)
            out.append((gray < 128, lid))
    return out


@dataclass(frozen=True)
class PageParams:
    max_width: int = 900
    margin: int = 40
    intra_gap: int = 3
    word_gap: int = 18          # > WORD_GAP_RATIO * BODY so words split
    line_gap: int = 30          # white rows between line extents
    letterpress: bool = False   # write separated vowel parts
    fuse_ottu_complexes: bool = False
    detached_ottus: bool = False  # drop ottus fully below the baseline


@dataclass(frozen=True)
class NoiseParams:
    rotate_degrees: float = 0.0
    shear_degrees: float = 0.0
    salt_pepper: float = 0.0
    seed: int = 0


def _word_stream(registry: SymbolRegistry, atlas: GlyphAtlas, word: str,
                 params: PageParams) -> list[int]:
    ids = unicode_to_symbols(registry, word)
    if params.fuse_ottu_complexes:
        ids = fuse_complexes(registry, ids)
    if params.letterpress:
        ids = decompose_letterpress(registry, ids)
    for lid in ids:
        if lid not in atlas.shapes:
            raise MissingGlyph(
                f"atlas has no glyph for label {registry.label(lid).name!r} in {word!r}")
    return ids


def compose_synthetic_page(
        atlas: GlyphAtlas, text: str,
        params: PageParams | None = None,
        noise: NoiseParams | None = None) -> tuple[np.ndarray, str, list[Zone]]:
    """Render text into a gray page image with exact ground truth.

    Words wrap greedily at ``max_width``. Returns (gray image, truth text,
    zone list); the truth reflects the wrapped arrangement, one line of
    text per composed line.
    """
    params = params or PageParams()
    noise = noise or NoiseParams()
    registry = atlas.registry
    rng = np.random.default_rng(noise.seed)

    words = text.split()
    if not words:
        page = np.full((200, 200), PAPER, dtype=np.uint8)
        return page, "", [Zone(0, 0, 200, 200)]

    placed_lines: list[list[tuple[int, int, np.ndarray]]] = [[]]  # (x, y, bitmap)
    truth_lines: list[list[str]] = [[]]
    cursor_x = params.margin

    def place_word(stream: list[int], line_glyphs, x0: int) -> int:
        """Place one word with its line-local baseline at BODY-1; returns new x."""
        x = x0
        base_span: tuple[int, int] | None = None  # current base glyph x-range
        ottu_bottom = 0
        for lid in stream:
            bitmap = atlas.shapes[lid]
            h, w = bitmap.shape
            spec = atlas.specs[lid]
            baseline_row = BODY - 1
            if spec.anchor == _ANCHOR_OTTU and base_span is not None:
                if params.detached_ottus:
                    top = baseline_row + 3
                else:
                    top = baseline_row - OTTU_PROTRUSION + 1
                if ottu_bottom:
                    top = ottu_bottom + 1
                cx = (base_span[0] + base_span[1]) // 2
                gx = max(base_span[0] - 2, cx - w // 2)
                line_glyphs.append((gx, top, bitmap))
                ottu_bottom = top + h - 1
                x = max(x, gx + w + params.intra_gap)
                continue
            if spec.anchor == _ANCHOR_TOP:
                top = 1
            elif spec.anchor == _ANCHOR_MID:
                top = baseline_row - BODY // 2 - h // 2
            elif spec.anchor == _ANCHOR_DESCEND:
                top = baseline_row + 5 - h  # tail dips below the baseline
            elif spec.anchor == _ANCHOR_OTTU:  # ottu with no base yet
                top = baseline_row - OTTU_PROTRUSION + 1
            else:
                top = baseline_row - h + 1
            line_glyphs.append((x, top, bitmap))
            base_span = (x, x + w)
            ottu_bottom = 0
            x += w + params.intra_gap
        return x - params.intra_gap

    for word in words:
        stream = _word_stream(registry, atlas, word, params)
        width_guess = sum(atlas.shapes[lid].shape[1] + params.intra_gap for lid in stream)
        if cursor_x > params.margin and cursor_x + width_guess > params.max_width - params.margin:
            placed_lines.append([])
            truth_lines.append([])
            cursor_x = params.margin
        end_x = place_word(stream, placed_lines[-1], cursor_x)
        truth_lines[-1].append(word)
        cursor_x = end_x + params.word_gap

    # Paint lines onto the page, tracking each line's real vertical extent.
    strips = []
    for line_glyphs in placed_lines:
        if not line_glyphs:
            continue
        top_extent = min(y for _, y, _ in line_glyphs)
        bottom_extent = max(y + bm.shape[0] for _, y, bm in line_glyphs)
        strips.append((line_glyphs, top_extent, bottom_extent))

    width = params.max_width
    total_height = params.margin * 2 + sum(b - t for _, t, b in strips) \
        + params.line_gap * max(0, len(strips) - 1)
    page = np.zeros((total_height, width), dtype=bool)
    y_cursor = params.margin
    for line_glyphs, top_extent, bottom_extent in strips:
        shift = y_cursor - top_extent
        for x, y, bm in line_glyphs:
            h, w = bm.shape
            page[y + shift:y + shift + h, x:x + w] |= bm
        y_cursor += (bottom_extent - top_extent) + params.line_gap

    if noise.shear_degrees:
        page = _shear_page(page, noise.shear_degrees)

    gray = np.where(page, np.uint8(INK), np.uint8(PAPER))

    if noise.rotate_degrees:
        gray = rotate_gray(gray, noise.rotate_degrees)

    if noise.salt_pepper:
        u = rng.random(gray.shape)
        gray = gray.copy()
        gray[u < noise.salt_pepper / 2] = 0
        gray[u > 1 - noise.salt_pepper / 2] = 255

    truth = "\n".join(" ".join(line) for line in truth_lines if line)
    zones = [Zone(0, 0, gray.shape[1], gray.shape[0])]
    return gray, truth, zones


def _shear_page(page: np.ndarray, degrees: float) -> np.ndarray:
    h, w = page.shape
    shift_per_row = np.tan(np.deg2rad(degrees))
    shifts = np.rint((h - 1 - np.arange(h)) * shift_per_row).astype(np.int64)
    pad_left = max(0, int(shifts.max()))
    pad_right = max(0, -int(shifts.min()))
    out = np.zeros((h, w + pad_left + pad_right), dtype=bool)
    for r in range(h):
        s = pad_left + shifts[r]
        out[r, s:s + w] = page[r]
    return out


# --- lexicon ----------------------------------------------------------------

# A few genuinely common Kannada words for flavor; the bulk of the lexicon
# is generated from syllable patterns so it covers the whole inventory.
COMMON_WORDS = [
    "ಕನ್ನಡ",          # kannada
    "ಮನೆ",                      # mane (house)
    "ನೀರು",                # niiru (water)
    "ಪುಸ್ತಕ",    # pustaka (book)
    "ಶಾಲೆ",                # shaale (school)
    "ಸೂರ್ಯ",          # suurya (sun)
    "ಚಂದ್ರ",          # candra (moon)
    "ಹುಡುಗ",          # hudugа (boy)
    "ಅಮ್ಮ",                # amma (mother)
    "ಅಪ್ಪ",                # appa (father)
    "ರಾಷ್ಟ್ರಪತಿ",  # raastrapati
    "ಸಂಸ್ಕೃತಿ",              # samskRuti
    "ಕ್ರೈಸ್ತ",                    # kraista
]

_COMMON_CONSONANTS = ["ka", "ga", "ca", "ja", "ta", "da", "na", "pa", "ba",
                      "ma", "ya", "ra", "la", "va", "sha", "sa", "ha", "tta",
                      "dda", "nna", "kha", "tha", "dha", "bha", "lla"]
_RARE_CONSONANTS = ["gha", "nga", "cha", "jha", "nya", "ttha", "ddha", "pha",
                    "ssa", "rra", "llla"]
_VOWELS = ["a", "aa", "i", "ii", "u", "uu", "e", "ee", "ai", "o", "oo", "au", "Ru"]

_INDEP_CP = {"a": "ಅ", "aa": "ಆ", "i": "ಇ", "ii": "ಈ",
             "u": "ಉ", "uu": "ಊ", "Ru": "ಋ", "e": "ಎ",
             "ee": "ಏ", "ai": "ಐ", "o": "ಒ", "oo": "ಓ",
             "au": "ಔ"}
_SIGN_CP = {"aa": "ಾ", "i": "ಿ", "ii": "ೀ", "u": "ು",
            "uu": "ೂ", "Ru": "ೃ", "e": "ೆ", "ee": "ೇ",
            "ai": "ೈ", "o": "ೊ", "oo": "ೋ", "au": "ೌ"}
_CONS_CP = {
    "ka": "ಕ", "kha": "ಖ", "ga": "ಗ", "gha": "ಘ",
    "nga": "ಙ", "ca": "ಚ", "cha": "ಛ", "ja": "ಜ",
    "jha": "ಝ", "nya": "ಞ", "tta": "ಟ", "ttha": "ಠ",
    "dda": "ಡ", "ddha": "ಢ", "nna": "ಣ", "ta": "ತ",
    "tha": "ಥ", "da": "ದ", "dha": "ಧ", "na": "ನ",
    "pa": "ಪ", "pha": "ಫ", "ba": "ಬ", "bha": "ಭ",
    "ma": "ಮ", "ya": "ಯ", "ra": "ರ", "rra": "ಱ",
    "la": "ಲ", "lla": "ಳ", "llla": "ೞ", "va": "ವ",
    "sha": "ಶ", "ssa": "ಷ", "sa": "ಸ", "ha": "ಹ",
}
VIRAMA_CP = "್"
ANUSVARA_CP = "ಂ"
VISARGA_CP = "ಃ"


def _syllable(rng: np.random.Generator) -> str:
    cons = _COMMON_CONSONANTS if rng.random() < 0.85 else _RARE_CONSONANTS
    c1 = cons[int(rng.integers(len(cons)))]
    vowel = _VOWELS[int(rng.integers(len(_VOWELS)))]
    out = _CONS_CP[c1]
    r = rng.random()
    if r < 0.18:  # conjunct cluster: one ottu
        c2 = _COMMON_CONSONANTS[int(rng.integers(len(_COMMON_CONSONANTS)))]
        out += VIRAMA_CP + _CONS_CP[c2]
    elif r < 0.24:  # cluster-initial ra: the arkaa form
        c2 = _COMMON_CONSONANTS[int(rng.integers(len(_COMMON_CONSONANTS)))]
        out = _CONS_CP["ra"] + VIRAMA_CP + _CONS_CP[c2]
    if vowel != "a":
        out += _SIGN_CP[vowel]
    return out


def generate_lexicon(count: int = 1200, seed: int = 7) -> list[str]:
    """Deterministic, phonotactically plausible word list covering the
    inventory: CV syllables, conjuncts, arkaa forms, vowel-initial words,
    anusvara/visarga, word-final pure consonants."""
    rng = np.random.default_rng(seed)
    words: list[str] = []
    seen: set[str] = set(COMMON_WORDS)
    words.extend(COMMON_WORDS)
    while len(words) < count:
        n_syll = int(rng.integers(1, 5))
        parts: list[str] = []
        if rng.random() < 0.12:  # vowel-initial word
            parts.append(_INDEP_CP[_VOWELS[int(rng.integers(len(_VOWELS)))]])
        for _ in range(n_syll):
            parts.append(_syllable(rng))
            if rng.random() < 0.08:
                parts.append(ANUSVARA_CP)
        if rng.random() < 0.05:
            parts.append(VISARGA_CP)
        elif rng.random() < 0.08:  # word-final pure consonant
            c = _COMMON_CONSONANTS[int(rng.integers(len(_COMMON_CONSONANTS)))]
            parts.append(_CONS_CP[c] + VIRAMA_CP)
        word = "".join(parts)
        if len(word) < 2 or word in seen:
            continue
        seen.add(word)
        words.append(word)
    return words[:count]


def generate_corpus(words: list[str], repeats: int = 3, seed: int = 11) -> str:
    """Shuffled corpus text from a lexicon, for bigram training."""
    rng = np.random.default_rng(seed)
    bag = []
    for _ in range(repeats):
        order = rng.permutation(len(words))
        bag.extend(words[i] for i in order)
    return " ".join(bag)
