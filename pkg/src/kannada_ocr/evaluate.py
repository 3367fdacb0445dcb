"""Recognition accuracy: Levenshtein alignment and the N/M/S/I/D arithmetic.

Accuracy = (N - S - I - D) / N with N the ground-truth unit count, at both
the Unicode (code point) and word level. Among minimal-cost alignments the
substitution-maximal one is reported, which makes the (S, I, D) split
unique and symmetric: swapping reference and hypothesis swaps I and D and
leaves S unchanged.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ZeroGroundTruth


@dataclass(frozen=True)
class EvalCounts:
    """Unit and word level alignment counts for one page."""

    n: int
    m: int
    s: int
    i: int
    d: int
    n_w: int
    m_w: int
    s_w: int
    i_w: int
    d_w: int

    @property
    def unicode_accuracy(self) -> float:
        return accuracy(self.n, self.s, self.i, self.d)

    @property
    def word_accuracy(self) -> float:
        return accuracy(self.n_w, self.s_w, self.i_w, self.d_w)


@dataclass
class EvalReport:
    pages: list[tuple[str, EvalCounts]] = field(default_factory=list)

    def add(self, page_id: str, counts: EvalCounts) -> None:
        self.pages.append((page_id, counts))

    def aggregate(self) -> EvalCounts:
        fields = ["n", "m", "s", "i", "d", "n_w", "m_w", "s_w", "i_w", "d_w"]
        sums = {f: sum(getattr(c, f) for _, c in self.pages) for f in fields}
        return EvalCounts(**sums)

    def error_rate_series(self) -> list[tuple[str, float, float]]:
        """Per-page (id, unicode error rate, word error rate) for plotting."""
        out = []
        for page_id, c in self.pages:
            out.append((page_id, 1.0 - c.unicode_accuracy, 1.0 - c.word_accuracy))
        return out


def levenshtein_align(reference: Sequence, hypothesis: Sequence) -> tuple[int, int, int]:
    """(S, I, D) of a minimal-cost unit alignment.

    Costs are 1 per substitution, insertion or deletion; among equal-cost
    alignments the one with the most substitutions (fewest indels) is
    chosen, making the split canonical.
    """
    n, m = len(reference), len(hypothesis)
    # Two DP layers: minimal edit distance, then minimal indel count among
    # distance-minimal alignments (lexicographic cost).
    dist = np.zeros((n + 1, m + 1), dtype=np.int64)
    indel = np.zeros((n + 1, m + 1), dtype=np.int64)
    dist[:, 0] = np.arange(n + 1)
    indel[:, 0] = np.arange(n + 1)
    dist[0, :] = np.arange(m + 1)
    indel[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        ref_unit = reference[i - 1]
        for j in range(1, m + 1):
            sub_cost = 0 if ref_unit == hypothesis[j - 1] else 1
            cand = (
                (dist[i - 1, j - 1] + sub_cost, indel[i - 1, j - 1]),
                (dist[i - 1, j] + 1, indel[i - 1, j] + 1),
                (dist[i, j - 1] + 1, indel[i, j - 1] + 1),
            )
            best = min(cand)
            dist[i, j] = best[0]
            indel[i, j] = best[1]
    total = int(dist[n, m])
    indels = int(indel[n, m])
    delta = m - n                    # I - D is fixed by the lengths
    ins = (indels + delta) // 2
    dele = (indels - delta) // 2
    subs = total - indels
    return subs, ins, dele


def accuracy(n: int, s: int, i: int, d: int) -> float:
    """(N - S - I - D) / N; negative results are reported as-is."""
    if n <= 0:
        raise ZeroGroundTruth("accuracy undefined for empty ground truth")
    return (n - s - i - d) / n


def _normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def tokenize_words(text: str) -> list[str]:
    """Whitespace tokenization; punctuation stays attached to its word."""
    return _normalize(text).split()


def eval_page(ocr_text: str, truth_text: str) -> EvalCounts:
    """Align one page at Unicode and word level after NFC normalization."""
    truth_words = tokenize_words(truth_text)
    ocr_words = tokenize_words(ocr_text)
    truth_units = list(" ".join(truth_words))
    ocr_units = list(" ".join(ocr_words))
    if not truth_units:
        raise ZeroGroundTruth("empty ground truth page")
    s, i, d = levenshtein_align(truth_units, ocr_units)
    s_w, i_w, d_w = levenshtein_align(truth_words, ocr_words)
    return EvalCounts(
        n=len(truth_units), m=len(ocr_units), s=s, i=i, d=d,
        n_w=len(truth_words), m_w=len(ocr_words), s_w=s_w, i_w=i_w, d_w=d_w)


REPORT_COLUMNS = ["page", "N", "M", "S", "I", "D",
                  "N_W", "M_W", "S_W", "I_W", "D_W", "UA", "WA"]


def write_report(path: str | Path, report: EvalReport) -> None:
    """Tab-delimited per-page table plus a JSON summary next to it."""
    lines = ["\t".join(REPORT_COLUMNS)]
    for page_id, c in report.pages:
        lines.append("\t".join([
            page_id, str(c.n), str(c.m), str(c.s), str(c.i), str(c.d),
            str(c.n_w), str(c.m_w), str(c.s_w), str(c.i_w), str(c.d_w),
            f"{c.unicode_accuracy:.6f}", f"{c.word_accuracy:.6f}"]))
    agg = report.aggregate()
    lines.append("\t".join([
        "TOTAL", str(agg.n), str(agg.m), str(agg.s), str(agg.i), str(agg.d),
        str(agg.n_w), str(agg.m_w), str(agg.s_w), str(agg.i_w), str(agg.d_w),
        f"{agg.unicode_accuracy:.6f}", f"{agg.word_accuracy:.6f}"]))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    summary = {
        "pages": len(report.pages),
        "unicode_accuracy": agg.unicode_accuracy,
        "word_accuracy": agg.word_accuracy,
        "counts": {"N": agg.n, "M": agg.m, "S": agg.s, "I": agg.i, "D": agg.d,
                   "N_W": agg.n_w, "M_W": agg.m_w, "S_W": agg.s_w,
                   "I_W": agg.i_w, "D_W": agg.d_w},
    }
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8")
