"""End-to-end recognition: gray page image -> Unicode text.

Chain per page: binarize (Otsu) -> detect skew -> deskew + re-binarize ->
zones -> connected components -> lines -> italic correction -> reference
rows -> words -> symbols -> features -> top-k classification -> bigram
Viterbi -> script codec -> text. Failures carry page/line/word coordinates
and never silently vanish; a batch isolates failures per page.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classify, decode, layout, preprocess
from .errors import ConfigError, DegenerateLine, ManifestError, OcrError
from .evaluate import EvalReport, eval_page
from .features import feature_vector
from .image_io import read_image
from .script import codec
from .script.registry import SymbolRegistry, load_registry


@dataclass
class PipelineConfig:
    base_model: str = ""
    ottu_model: str = ""
    bigram: str = ""
    registry: str | None = None     # None -> shipped registry
    topk: int = 5
    skew_threshold: float = preprocess.SKEW_ACCEPT_DEG
    word_gap_ratio: float = layout.WORD_GAP_RATIO
    overlap_merge_ratio: float = layout.OVERLAP_MERGE_RATIO
    ottu_mass_ratio: float = layout.OTTU_MASS_RATIO
    min_component_area: int = layout.MIN_COMPONENT_AREA

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg = cls(**{k: v for k, v in raw.items() if k in cls.__dataclass_fields__})
        base = path.parent
        for attr in ("base_model", "ottu_model", "bigram", "registry"):
            value = getattr(cfg, attr)
            if value:
                setattr(cfg, attr, str((base / value).resolve()))
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for attr in ("base_model", "ottu_model", "bigram"):
            value = getattr(self, attr)
            if not value:
                raise ConfigError(f"config is missing required path {attr!r}")
            if not Path(value).is_file():
                raise ConfigError(f"{attr} file not found: {value}")
        if self.registry and not Path(self.registry).is_file():
            raise ConfigError(f"registry file not found: {self.registry}")
        if not 0 < self.word_gap_ratio < 2:
            raise ConfigError("word_gap_ratio out of range (0, 2)")
        if not 0 < self.overlap_merge_ratio <= 1:
            raise ConfigError("overlap_merge_ratio out of range (0, 1]")
        if not 0 < self.ottu_mass_ratio <= 1:
            raise ConfigError("ottu_mass_ratio out of range (0, 1]")
        if self.topk < 1:
            raise ConfigError("topk must be >= 1")


@dataclass
class WordResult:
    line_index: int
    word_index: int
    text: str
    confidence: float          # mean confidence of the chosen candidates
    col_start: int             # sheared-line-local column span
    col_end: int


@dataclass
class PageResult:
    text: str
    words: list[WordResult] = field(default_factory=list)
    line_boxes: list[tuple[int, int, int, int]] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    skew_degrees: float = 0.0
    seconds: float = 0.0


class Engine:
    """Loaded models + registry; stateless per-page recognition."""

    def __init__(self, registry: SymbolRegistry, base_model: classify.LinearModel,
                 ottu_model: classify.LinearModel, bigram: decode.BigramModel,
                 config: PipelineConfig | None = None):
        self.registry = registry
        self.base_model = base_model
        self.ottu_model = ottu_model
        self.bigram = bigram
        self.config = config or PipelineConfig()

    @classmethod
    def from_config(cls, config: PipelineConfig) -> "Engine":
        config.validate()
        registry = load_registry(config.registry)
        return cls(registry=registry,
                   base_model=classify.load_model(config.base_model),
                   ottu_model=classify.load_model(config.ottu_model),
                   bigram=decode.load_bigram(config.bigram),
                   config=config)

    # -- per-page recognition -------------------------------------------

    def ocr_image(self, gray: np.ndarray,
                  zones: list[layout.Zone] | None = None) -> PageResult:
        start = time.perf_counter()
        cfg = self.config
        result = PageResult(text="")

        binary = preprocess.binarize_otsu(gray)
        if binary.any():
            estimate = preprocess.detect_skew(binary)
            result.skew_degrees = estimate.angle_degrees
            if abs(estimate.angle_degrees) >= cfg.skew_threshold:
                gray = preprocess.deskew(gray, estimate)
                binary = preprocess.binarize_otsu(gray)

        if zones is None:
            zones = [layout.full_page_zone(binary)]

        comps = layout.connected_components(binary, min_area=cfg.min_component_area)
        zone_texts = []
        for zone in zones:
            zone_texts.append(self._recognize_zone(comps, zone, result))
        result.text = "\n".join(t for t in zone_texts if t)
        result.seconds = time.perf_counter() - start
        return result

    def _recognize_zone(self, comps: list[layout.Component], zone: layout.Zone,
                        result: PageResult) -> str:
        zone_comps = layout.components_in_zone(comps, zone)
        lines = layout.segment_lines(zone_comps, zone)
        line_texts: list[str] = []
        for li, line in enumerate(lines):
            comp_by_id = {c.id: c for c in zone_comps}
            members = [comp_by_id[cid] for cid in line.component_ids]
            line_img = layout.render_components(members, line.left, line.top,
                                                line.width, line.height)
            sheared, shear = layout.correct_italics(line_img)
            line.shear_degrees = float(shear)
            try:
                foreline, baseline = layout.estimate_reference_rows(sheared)
            except DegenerateLine:
                continue  # speck strip, not text
            line.foreline, line.baseline = foreline, baseline
            result.line_boxes.append((line.left, line.top, line.width, line.height))
            body = baseline - foreline + 1
            spans = layout.segment_words(sheared, body, self.config.word_gap_ratio)
            sheared_comps = layout.connected_components(
                sheared, min_area=self.config.min_component_area)
            words: list[str] = []
            for wi, (c0, c1) in enumerate(spans):
                in_span = [c for c in sheared_comps
                           if c0 <= c.left + c.width / 2.0 < c1]
                if not in_span:
                    continue
                word_text, mean_conf = self._recognize_word(
                    in_span, baseline, foreline, li, wi, result)
                if word_text:
                    words.append(word_text)
                    result.words.append(WordResult(
                        line_index=li, word_index=wi, text=word_text,
                        confidence=mean_conf, col_start=c0, col_end=c1))
            if words:
                line_texts.append(" ".join(words))
        return "\n".join(line_texts)

    def _recognize_word(self, comps: list[layout.Component], baseline: int,
                        foreline: int, line_idx: int, word_idx: int,
                        result: PageResult) -> tuple[str, float]:
        symbols = layout.segment_symbols(
            comps, baseline,
            merge_ratio=self.config.overlap_merge_ratio,
            mass_ratio=self.config.ottu_mass_ratio)
        if not symbols:
            return "", 0.0
        positions: list[list[tuple[int, float]]] = []
        for sym in symbols:
            geometric = layout.classify_by_geometry(sym, foreline, baseline)
            geo_label = None
            if geometric is not None:
                lab = self.registry.punctuation_label(geometric)
                geo_label = lab.id if lab is not None else None
            candidates = classify.classify_symbol(
                sym.is_ottu, feature_vector(sym.raster) if geo_label is None else np.empty(0),
                self.base_model, self.ottu_model, self.config.topk,
                geometric_label=geo_label)
            positions.append([(c.label, c.confidence) for c in candidates])
        lattice = decode.CandidateLattice(positions=positions, k=self.config.topk)
        labels = decode.viterbi_decode(lattice, self.bigram)
        confs = []
        for (pos, label) in zip(positions, labels):
            confs.extend(conf for lab, conf in pos if lab == label)
        mean_conf = float(np.mean(confs)) if confs else 0.0
        try:
            text = codec.word_unicode(self.registry, labels)
        except OcrError as exc:
            # Surface with coordinates; emit the raw per-label reading so
            # the page keeps its shape.
            result.errors.append(
                f"line {line_idx} word {word_idx}: {type(exc).__name__}: {exc}")
            text = "".join(self.registry.label(l).unicode_seq for l in labels)
        return text, mean_conf

    def ocr_page(self, image_path: str | Path,
                 zone_path: str | Path | None = None) -> PageResult:
        gray = read_image(image_path)
        zones = None
        if zone_path is not None:
            zones = layout.read_zones(zone_path, gray.shape[1], gray.shape[0])
        return self.ocr_image(gray, zones)


# --- batch driver -----------------------------------------------------------


@dataclass
class ManifestEntry:
    image: Path
    truth: Path | None = None
    zones: Path | None = None


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    """One page per line: image path, optional truth path, optional zone path."""
    path = Path(path)
    try:
        lines = path.read_text("utf-8").splitlines()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    entries: list[ManifestEntry] = []
    base = path.parent
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) > 3:
            raise ManifestError(f"{path}:{line_no}: expected 'image [truth [zones]]'")
        entry = ManifestEntry(image=base / parts[0])
        if len(parts) > 1:
            entry.truth = base / parts[1]
        if len(parts) > 2:
            entry.zones = base / parts[2]
        entries.append(entry)
    if not entries:
        raise ManifestError(f"{path}: manifest has no pages")
    return entries


@dataclass
class BatchResult:
    page_texts: dict[str, str] = field(default_factory=dict)
    failures: dict[str, str] = field(default_factory=dict)
    report: EvalReport = field(default_factory=EvalReport)
    seconds: float = 0.0


def run_batch(engine: Engine, entries: list[ManifestEntry],
              jobs: int = 1) -> BatchResult:
    """Process manifest pages independently; one bad page never aborts the run."""
    start = time.perf_counter()
    result = BatchResult()

    def process(entry: ManifestEntry) -> tuple[str, str | None, str | None]:
        page_id = str(entry.image)
        try:
            page = engine.ocr_page(entry.image, entry.zones)
            return page_id, page.text, None
        except (OcrError, OSError) as exc:
            return page_id, None, f"{type(exc).__name__}: {exc}"

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(process, entries))
    else:
        outputs = [process(e) for e in entries]

    for entry, (page_id, text, failure) in zip(entries, outputs):
        if failure is not None:
            result.failures[page_id] = failure
            continue
        result.page_texts[page_id] = text
        if entry.truth is not None:
            try:
                truth_text = Path(entry.truth).read_text("utf-8")
                result.report.add(page_id, eval_page(text, truth_text))
            except (OSError, OcrError) as exc:
                result.failures[page_id] = f"evaluation: {exc}"
    result.seconds = time.perf_counter() - start
    return result
