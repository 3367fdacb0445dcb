"""Command-line driver.

Subcommands: ocr, batch, train-classifier, train-bigram, eval, synth.
Exit codes: 0 success, 2 configuration error, 3 input error,
4 processing error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import classify, decode, synth
from .errors import (
    ConfigError,
    ManifestError,
    MalformedZone,
    OcrError,
    ZeroGroundTruth,
)
from .evaluate import EvalReport, eval_page, write_report
from .features import feature_vector
from .image_io import write_pgm
from .layout import write_zones
from .pipeline import Engine, PipelineConfig, read_manifest, run_batch
from .script.registry import load_registry

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_PROCESSING = 4


def _engine_from_args(args) -> Engine:
    if args.config:
        config = PipelineConfig.from_file(args.config)
    else:
        config = PipelineConfig(base_model=args.base_model or "",
                                ottu_model=args.ottu_model or "",
                                bigram=args.bigram or "")
    if getattr(args, "topk", None):
        config.topk = args.topk
    config.validate()
    return Engine.from_config(config)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="pipeline config file (json)")
    p.add_argument("--base-model", help="base symbol model path")
    p.add_argument("--ottu-model", help="ottu symbol model path")
    p.add_argument("--bigram", help="bigram table path")
    p.add_argument("--topk", type=int, default=None, help="candidates per symbol")


def cmd_ocr(args) -> int:
    engine = _engine_from_args(args)
    page = engine.ocr_page(args.image, args.zones)
    out_text = page.text + ("\n" if page.text else "")
    if args.out:
        Path(args.out).write_text(out_text, encoding="utf-8")
    else:
        sys.stdout.write(out_text)
    if args.boxes:
        lines = [f"line\t{i}\t{x}\t{y}\t{w}\t{h}"
                 for i, (x, y, w, h) in enumerate(page.line_boxes)]
        lines += [f"word\t{w.line_index}\t{w.word_index}\t{w.col_start}"
                  f"\t{w.col_end}\t{w.confidence:.4f}\t{w.text}"
                  for w in page.words]
        Path(args.boxes).write_text("\n".join(lines) + "\n", encoding="utf-8")
    for err in page.errors:
        print(f"warning: {args.image}: {err}", file=sys.stderr)
    print(f"page time: {page.seconds:.3f}s  skew: {page.skew_degrees:+.1f} deg",
          file=sys.stderr)
    return EXIT_OK


def cmd_batch(args) -> int:
    engine = _engine_from_args(args)
    entries = read_manifest(args.manifest)
    result = run_batch(engine, entries, jobs=args.jobs)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for page_id, text in result.page_texts.items():
        name = Path(page_id).stem + ".txt"
        (out_dir / name).write_text(text + ("\n" if text else ""), encoding="utf-8")
    for page_id, failure in result.failures.items():
        print(f"failed: {page_id}: {failure}", file=sys.stderr)
    if result.report.pages:
        write_report(out_dir / "report.tsv", result.report)
        agg = result.report.aggregate()
        print(f"pages: {len(result.report.pages)}  "
              f"UA: {agg.unicode_accuracy:.4f}  WA: {agg.word_accuracy:.4f}")
    print(f"batch time: {result.seconds:.2f}s "
          f"({result.seconds / max(1, len(entries)):.2f}s per page)", file=sys.stderr)
    return EXIT_OK if not result.failures else EXIT_PROCESSING


def cmd_train_classifier(args) -> int:
    registry = load_registry(args.registry)
    samples = synth.load_atlas_samples(args.atlas)
    if not samples:
        raise ManifestError(f"no atlas samples under {args.atlas}")
    ottu_roles = {"ottu", "ottu_complex"}
    base_samples = []
    ottu_samples = []
    for raster, lid in samples:
        vec = feature_vector(raster)
        if registry.label(lid).role in ottu_roles:
            ottu_samples.append((vec, lid))
        else:
            base_samples.append((vec, lid))
    config = classify.TrainingConfig(
        c_grid=tuple(float(c) for c in args.c_grid.split(",")),
        folds=args.folds, seed=args.seed, epochs=args.epochs)
    base_model = classify.train(base_samples, config)
    ottu_model = classify.train(ottu_samples, config)
    classify.save_model(base_model, args.out_base)
    classify.save_model(ottu_model, args.out_ottu)
    print(f"base: {len(base_model.labels)} classes, C={base_model.c_value}, "
          f"cv={base_model.cv_accuracy:.4f}")
    print(f"ottu: {len(ottu_model.labels)} classes, C={ottu_model.c_value}, "
          f"cv={ottu_model.cv_accuracy:.4f}")
    return EXIT_OK


def cmd_train_bigram(args) -> int:
    registry = load_registry(args.registry)
    corpus = Path(args.corpus).read_text("utf-8")
    model = decode.train_bigram(corpus, registry)
    decode.save_bigram(model, args.out)
    print(f"bigram rows: {len(model.row_totals)}  pairs: {len(model.counts)}  "
          f"skipped words: {model.skipped_words}")
    return EXIT_OK


def cmd_eval(args) -> int:
    report = EvalReport()
    if args.pairs:
        base = Path(args.pairs).parent
        for line_no, line in enumerate(Path(args.pairs).read_text("utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ManifestError(f"{args.pairs}:{line_no}: expected 'id ocr truth'")
            page_id, ocr_path, truth_path = parts
            counts = eval_page((base / ocr_path).read_text("utf-8"),
                               (base / truth_path).read_text("utf-8"))
            report.add(page_id, counts)
    else:
        if not (args.ocr and args.truth):
            raise ConfigError("eval needs --pairs or both --ocr and --truth")
        counts = eval_page(Path(args.ocr).read_text("utf-8"),
                           Path(args.truth).read_text("utf-8"))
        report.add(Path(args.ocr).name, counts)
    agg = report.aggregate()
    print(f"N={agg.n} M={agg.m} S={agg.s} I={agg.i} D={agg.d} "
          f"UA={agg.unicode_accuracy * 100:.2f}%")
    print(f"N_W={agg.n_w} M_W={agg.m_w} S_W={agg.s_w} I_W={agg.i_w} D_W={agg.d_w} "
          f"WA={agg.word_accuracy * 100:.2f}%")
    if args.report:
        write_report(args.report, report)
    return EXIT_OK


def cmd_synth(args) -> int:
    registry = load_registry(args.registry)
    atlas = synth.build_atlas(registry, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.atlas_dir:
        synth.save_atlas(atlas, args.atlas_dir, samples_per_label=args.samples_per_label,
                         dropout=0.02, scale_jitter=0.08, speckle=0.005)
        print(f"atlas: {len(atlas.labels())} classes x {args.samples_per_label} samples")
    lexicon = synth.generate_lexicon(seed=args.seed)
    if args.corpus:
        Path(args.corpus).write_text(synth.generate_corpus(lexicon), encoding="utf-8")
    rng = np.random.default_rng(args.seed)
    manifest_lines = []
    params = synth.PageParams(letterpress=args.letterpress)
    for p in range(args.pages):
        words = [lexicon[int(i)] for i in rng.integers(0, len(lexicon), size=args.words)]
        noise = synth.NoiseParams(rotate_degrees=args.rotate, shear_degrees=args.shear,
                                  salt_pepper=args.salt_pepper, seed=args.seed + p)
        gray, truth, zones = synth.compose_synthetic_page(atlas, " ".join(words),
                                                          params, noise)
        stem = f"page_{p:03d}"
        write_pgm(out / f"{stem}.pgm", gray)
        (out / f"{stem}.txt").write_text(truth + "\n", encoding="utf-8")
        write_zones(out / f"{stem}.uzn", zones)
        manifest_lines.append(f"{stem}.pgm {stem}.txt {stem}.uzn")
    (out / "manifest.txt").write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")
    print(f"wrote {args.pages} page(s) under {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kannada-ocr",
                                     description="OCR for Kannada-script documents")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ocr", help="recognize one page")
    p.add_argument("image")
    p.add_argument("--zones", help="uzn zone file")
    p.add_argument("--out", help="output text path (default stdout)")
    p.add_argument("--boxes", help="write line/word boxes to this path")
    _add_model_flags(p)
    p.set_defaults(func=cmd_ocr)

    p = sub.add_parser("batch", help="recognize a manifest of pages")
    p.add_argument("manifest")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    _add_model_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("train-classifier", help="train base + ottu models from an atlas directory")
    p.add_argument("--atlas", required=True, help="directory: one subdir per label id")
    p.add_argument("--out-base", required=True)
    p.add_argument("--out-ottu", required=True)
    p.add_argument("--registry", default=None)
    p.add_argument("--c-grid", default="0.01,0.1,1,10")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=120)
    p.set_defaults(func=cmd_train_classifier)

    p = sub.add_parser("train-bigram", help="train the symbol bigram table")
    p.add_argument("--corpus", required=True, help="UTF-8 text corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--registry", default=None)
    p.set_defaults(func=cmd_train_bigram)

    p = sub.add_parser("eval", help="score OCR output against ground truth")
    p.add_argument("--ocr")
    p.add_argument("--truth")
    p.add_argument("--pairs", help="manifest: 'id ocr_path truth_path' per line")
    p.add_argument("--report", help="write per-page tsv report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="compose synthetic fixture pages")
    p.add_argument("--out", required=True)
    p.add_argument("--pages", type=int, default=1)
    p.add_argument("--words", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rotate", type=float, default=0.0)
    p.add_argument("--shear", type=float, default=0.0)
    p.add_argument("--salt-pepper", type=float, default=0.0)
    p.add_argument("--letterpress", action="store_true")
    p.add_argument("--registry", default=None)
    p.add_argument("--atlas-dir", help="materialize the glyph atlas here")
    p.add_argument("--samples-per-label", type=int, default=12)
    p.add_argument("--corpus", help="write a bigram training corpus here")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ManifestError, MalformedZone, ZeroGroundTruth, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OcrError as exc:
        print(f"processing error: {exc}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    sys.exit(main())
