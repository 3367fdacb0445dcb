"""OCR engine for documents printed in Kannada script.

Pipeline: binarize -> deskew -> re-binarize -> lines -> italic correction
-> words -> symbols -> features -> classification -> bigram Viterbi ->
Unicode generation, plus an evaluation harness and a synthetic-page
composer for desk-scale end-to-end testing.
"""

__version__ = "0.1.0"
