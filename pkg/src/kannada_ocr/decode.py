"""Symbol-level bigram model and Viterbi word formation.

Transition probabilities are add-one-smoothed bigram counts over symbol
label streams extracted from a Unicode corpus (words mapped through the
script codec). Decoding picks the label sequence maximizing the sum of
log candidate confidence and log transition probability, including the
start and end transitions; ties resolve to the lexicographically smallest
label-id sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyCorpus, UnknownLabel, UnsupportedCodePoint, VersionMismatch
from .script.codec import DIGIT_ROLES, unicode_to_symbols
from .script.registry import SymbolRegistry

BIGRAM_FORMAT_VERSION = 1
START = -1  # pseudo-label before the first symbol
END = -2    # pseudo-label after the last symbol


@dataclass
class BigramModel:
    vocabulary: list[int]                      # label ids
    counts: dict[tuple[int, int], int]         # (prev, cur) observed counts
    row_totals: dict[int, int]                 # prev -> total outgoing count
    skipped_words: int = 0
    vocab_set: set[int] = field(init=False)

    def __post_init__(self) -> None:
        self.vocab_set = set(self.vocabulary)

    @property
    def smoothing_denominator_extra(self) -> int:
        # Add-one smoothing over every possible successor: vocabulary + END.
        return len(self.vocabulary) + 1

    def probability(self, prev: int, cur: int) -> float:
        total = self.row_totals.get(prev, 0)
        count = self.counts.get((prev, cur), 0)
        return (count + 1) / (total + self.smoothing_denominator_extra)

    def log_probability(self, prev: int, cur: int) -> float:
        return math.log(self.probability(prev, cur))


@dataclass(frozen=True)
class CandidateLattice:
    """Per-position candidate lists for one word: (label id, confidence)."""

    positions: list[list[tuple[int, float]]]
    k: int = 5

    def __post_init__(self) -> None:
        if any(not p for p in self.positions):
            raise ValueError("every lattice position needs at least one candidate")


def _word_segments(registry: SymbolRegistry, ids: list[int]) -> list[list[int]]:
    """Split a symbol stream so punctuation and digits stand alone."""
    segments: list[list[int]] = []
    run: list[int] = []
    for lid in ids:
        role = registry.label(lid).role
        if role == "punctuation" or role in DIGIT_ROLES:
            if run:
                segments.append(run)
                run = []
            segments.append([lid])
        else:
            run.append(lid)
    if run:
        segments.append(run)
    return segments


def train_bigram(corpus_text: str, registry: SymbolRegistry) -> BigramModel:
    """Count symbol bigrams over a corpus; words the codec rejects are
    skipped and counted, not silently dropped."""
    counts: dict[tuple[int, int], int] = {}
    row_totals: dict[int, int] = {}
    skipped = 0
    used = 0
    for token in corpus_text.split():
        try:
            ids = unicode_to_symbols(registry, token)
        except UnsupportedCodePoint:
            skipped += 1
            continue
        if not ids:
            continue
        used += 1
        for segment in _word_segments(registry, ids):
            seq = [START] + segment + [END]
            for prev, cur in zip(seq, seq[1:]):
                counts[(prev, cur)] = counts.get((prev, cur), 0) + 1
                row_totals[prev] = row_totals.get(prev, 0) + 1
    if used == 0:
        raise EmptyCorpus("no usable words in corpus")
    vocabulary = registry.ids()
    return BigramModel(vocabulary=vocabulary, counts=counts,
                       row_totals=row_totals, skipped_words=skipped)


def viterbi_decode(lattice: CandidateLattice, model: BigramModel) -> list[int]:
    """Best label sequence through the lattice under emission + transition
    log scores. Deterministic: score ties break toward the
    lexicographically smallest label-id sequence."""
    for pos in lattice.positions:
        for label, _ in pos:
            if label not in model.vocab_set:
                raise UnknownLabel(f"lattice label {label} not in bigram vocabulary")

    # states: label -> (score, path); paths kept whole (words are short).
    states: dict[int, tuple[float, tuple[int, ...]]] = {}
    first = lattice.positions[0]
    for label, conf in first:
        score = model.log_probability(START, label) + _log_conf(conf)
        _keep_best(states, label, score, (label,))

    for position in lattice.positions[1:]:
        next_states: dict[int, tuple[float, tuple[int, ...]]] = {}
        for label, conf in position:
            emit = _log_conf(conf)
            for prev_label, (prev_score, prev_path) in states.items():
                score = prev_score + model.log_probability(prev_label, label) + emit
                _keep_best(next_states, label, score, prev_path + (label,))
        states = next_states

    best_score = -math.inf
    best_path: tuple[int, ...] | None = None
    for label, (score, path) in states.items():
        final = score + model.log_probability(label, END)
        if final > best_score or (final == best_score and best_path is not None
                                  and path < best_path):
            best_score = final
            best_path = path
    assert best_path is not None
    return list(best_path)


def _log_conf(confidence: float) -> float:
    return math.log(confidence) if confidence > 0 else -1e30


def _keep_best(states: dict, label: int, score: float, path: tuple[int, ...]) -> None:
    cur = states.get(label)
    if cur is None or score > cur[0] or (score == cur[0] and path < cur[1]):
        states[label] = (score, path)


def save_bigram(model: BigramModel, path: str | Path) -> None:
    """Versioned plain-text table of observed (prev, cur, log-prob) rows.

    Unseen pairs are derivable from the header (row totals + vocabulary
    size under add-one smoothing), so the file stays compact.
    """
    lines = [f"version {BIGRAM_FORMAT_VERSION}",
             f"vocabulary {' '.join(str(v) for v in model.vocabulary)}",
             f"skipped {model.skipped_words}"]
    for prev in sorted(model.row_totals):
        lines.append(f"row {prev} {model.row_totals[prev]}")
    for (prev, cur), count in sorted(model.counts.items()):
        logp = math.log((count + 1) / (model.row_totals[prev] + model.smoothing_denominator_extra))
        lines.append(f"pair {prev} {cur} {count} {logp!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_bigram(path: str | Path) -> BigramModel:
    vocabulary: list[int] = []
    counts: dict[tuple[int, int], int] = {}
    row_totals: dict[int, int] = {}
    skipped = 0
    version = None
    for line in Path(path).read_text("ascii").splitlines():
        tokens = line.split()
        if not tokens:
            continue
        if tokens[0] == "version":
            version = int(tokens[1])
        elif tokens[0] == "vocabulary":
            vocabulary = [int(v) for v in tokens[1:]]
        elif tokens[0] == "skipped":
            skipped = int(tokens[1])
        elif tokens[0] == "row":
            row_totals[int(tokens[1])] = int(tokens[2])
        elif tokens[0] == "pair":
            counts[(int(tokens[1]), int(tokens[2]))] = int(tokens[3])
    if version != BIGRAM_FORMAT_VERSION:
        raise VersionMismatch(f"bigram table version {version}; expected {BIGRAM_FORMAT_VERSION}")
    return BigramModel(vocabulary=vocabulary, counts=counts,
                       row_totals=row_totals, skipped_words=skipped)
