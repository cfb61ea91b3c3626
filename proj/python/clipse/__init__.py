"""Clinical-note deidentification toolkit.

Everything lives in the compiled extension; this package re-exports the
public surface so callers write `import clipse` rather than reach into
`clipse._clipse`.
"""

from ._clipse import (
    CATEGORIES,
    Annotation,
    Corpus,
    DetachedCorpus,
    Document,
    Error,
    Gazetteer,
    detach_corpus,
    evaluate_corpus,
    evaluate_detached,
    generate_corpus,
    ingest_i2b2_dir,
    ingest_predictions,
    ingest_standoff_dir,
    merge_annotations,
    read_corpus,
    read_detached,
    render_report,
    scrub_document,
    tag_corpus,
    tokenize,
    validate_corpus,
    write_corpus,
    write_detached,
)
from ._clipse import __version__  # noqa: F401

__all__ = [
    "CATEGORIES",
    "Annotation",
    "Corpus",
    "DetachedCorpus",
    "Document",
    "Error",
    "Gazetteer",
    "detach_corpus",
    "evaluate_corpus",
    "evaluate_detached",
    "generate_corpus",
    "ingest_i2b2_dir",
    "ingest_predictions",
    "ingest_standoff_dir",
    "merge_annotations",
    "read_corpus",
    "read_detached",
    "render_report",
    "scrub_document",
    "tag_corpus",
    "tokenize",
    "validate_corpus",
    "write_corpus",
    "write_detached",
]
