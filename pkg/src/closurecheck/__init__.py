"""Word-closure output-relation checking for metamorphic testing of machine translation.

The pipeline: build the input-side token map for a test-case pair, refine the
word alignments (phrase-tree pass, then shared-unique-token pass), partition the
pair's tokens into word closures, compare the translation fragments each closure
links, and report violations with token-level locations.
"""

from closurecheck.model import (
    AlignmentMap,
    FineGrainedViolation,
    InputMap,
    TestCasePair,
    TokenizedText,
    TransformationMeta,
    Verdict,
    WordClosure,
    validate_pair,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentMap",
    "FineGrainedViolation",
    "InputMap",
    "TestCasePair",
    "TokenizedText",
    "TransformationMeta",
    "Verdict",
    "WordClosure",
    "validate_pair",
    "__version__",
]
