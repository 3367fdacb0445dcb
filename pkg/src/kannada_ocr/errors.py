"""Exception hierarchy for the OCR pipeline.

Every stage raises a dedicated subclass of :class:`OcrError` so callers can
tell configuration problems from bad input from genuine processing failures.
"""


class OcrError(Exception):
    """Base class for all errors raised by this package."""


# --- preprocessing ---------------------------------------------------------

class ZeroVariance(OcrError):
    """Otsu thresholding got a histogram with all mass in one bin."""


class NoContent(OcrError):
    """Skew detection needs at least one foreground pixel."""


# --- layout ----------------------------------------------------------------

class DegenerateLine(OcrError):
    """A text line too short to carry reference rows (< 4 rows tall)."""


class MalformedZone(OcrError):
    """A zone rectangle falls outside the page or cannot be parsed."""


# --- features --------------------------------------------------------------

class EmptySymbol(OcrError):
    """A symbol raster with no foreground pixels cannot be normalized."""


# --- classification --------------------------------------------------------

class InsufficientSamples(OcrError):
    """Training requires at least two samples for every label."""


class SingleLabel(OcrError):
    """Training requires at least two distinct labels."""


class DimensionMismatch(OcrError):
    """Feature vector length differs from the model's expected dimension."""


class CorruptModel(OcrError):
    """Model file is truncated or structurally invalid."""


class VersionMismatch(OcrError):
    """Model or table file carries an unsupported format version."""


# --- script codec ----------------------------------------------------------

class MalformedRegistry(OcrError):
    """Registry file is empty, unparseable, or violates its schema."""


class DanglingReference(OcrError):
    """Registry entry points at a label id that does not exist."""


class OrphanAttacher(OcrError):
    """An attaching symbol (ottu, mark) appeared with no akshara to join."""


class UnresolvablePair(OcrError):
    """A vowel-sign combination absent from the resolution table."""


class UnsupportedCodePoint(OcrError):
    """Text contains a code point or sequence outside the supported script."""

    def __init__(self, message, codepoint=None, position=None):
        super().__init__(message)
        self.codepoint = codepoint
        self.position = position


# --- decoding --------------------------------------------------------------

class EmptyCorpus(OcrError):
    """Bigram training saw no usable words."""


class UnknownLabel(OcrError):
    """A lattice candidate label is missing from the bigram vocabulary."""


# --- evaluation / synthesis ------------------------------------------------

class ZeroGroundTruth(OcrError):
    """Accuracy is undefined for an empty ground truth."""


class MissingGlyph(OcrError):
    """Page composition needs a glyph the atlas does not provide."""


# --- driver ----------------------------------------------------------------

class ManifestError(OcrError):
    """Batch manifest is empty or malformed."""


class ConfigError(OcrError):
    """Pipeline configuration references missing files or bad values."""
