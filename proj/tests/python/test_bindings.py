"""Smoke tests for the _clipse extension module.

CLIPSE_MODULE_DIR (set by the ctest wrapper) points at the build directory
holding the compiled module. The parquet tests cross-validate the store
against pyarrow in both directions.
"""

import os
import sys

import pytest

if "CLIPSE_MODULE_DIR" in os.environ:
    sys.path.insert(0, os.environ["CLIPSE_MODULE_DIR"])

clipse = pytest.importorskip("_clipse")
pa = pytest.importorskip("pyarrow")
pq = pytest.importorskip("pyarrow.parquet")


@pytest.fixture()
def corpus():
    return clipse.generate_corpus(seed=11, n_docs=8, templates="mixed")


def test_module_surface():
    assert clipse.CATEGORIES == (
        "name", "profession", "location", "age", "date", "id", "contact",
    )
    assert issubclass(clipse.Error, ValueError)


def test_generate_is_deterministic(corpus):
    again = clipse.generate_corpus(seed=11, n_docs=8, templates="mixed")
    assert corpus == again
    assert len(corpus) == 8
    assert corpus.annotators() == ["gold"]
    with pytest.raises(clipse.Error):
        clipse.generate_corpus(seed=1, n_docs=0)


def test_tokenize_offsets():
    spans = clipse.tokenize("Dr. Smith, 45yo")
    assert spans == [
        (0, 2, "Dr"), (2, 3, "."), (4, 9, "Smith"), (9, 10, ","),
        (11, 15, "45yo"),
    ]
    # Offsets count code points, not bytes.
    assert clipse.tokenize("José x")[1] == (5, 6, "x")
    with pytest.raises(clipse.Error):
        clipse.tokenize("x", tokenizer="bogus")


def test_annotation_round_trip():
    ann = clipse.Annotation(
        "d1", 0, 5, "Smith", raw_label="doctor", category="name",
        annotator="gold",
    )
    assert ann.category == "name"
    ann.category = None
    assert ann.category is None
    with pytest.raises(clipse.Error):
        clipse.Annotation("d1", 0, 5, "Smith", category="shoe")


def test_hand_built_corpus_evaluates():
    corpus = clipse.Corpus()
    corpus.add_document(clipse.Document("d1", "Call Dr Smith now"))
    gold = [clipse.Annotation("d1", 8, 13, "Smith", "doctor", "name", "gold")]
    corpus.set_annotations("gold", gold)
    corpus.set_annotations("pred", [])
    clipse.validate_corpus(corpus)
    result = clipse.evaluate_corpus(corpus, pred="pred")
    assert result["micro"]["recall"] == 0.0
    assert result["per_class"]["PHI"]["fn"] == 1
    result = clipse.evaluate_corpus(corpus, pred="gold")
    assert result["micro"]["f1"] == 1.0


def test_tag_and_report(corpus):
    tagged = clipse.tag_corpus(corpus, annotator="auto")
    assert tagged.annotators() == ["auto", "gold"]
    assert corpus.annotators() == ["gold"]  # input untouched
    result = clipse.evaluate_corpus(tagged, pred="auto", scenario="multiclass")
    assert result["per_class"]["date"]["recall"] > 0.5
    html = clipse.render_report(tagged, pred="auto", scenario="multiclass")
    assert html.startswith("<!DOCTYPE html>") and 'class="tok' in html


def test_merge_union_recalls_gold(corpus):
    tagged = clipse.tag_corpus(corpus, annotator="auto")
    merged = clipse.merge_annotations(tagged, ["gold", "auto"])
    assert clipse.evaluate_corpus(merged, pred="merged")["micro"]["recall"] == 1.0


def test_scrub_document(corpus):
    doc_id, doc = next(iter(corpus.documents.items()))
    anns = [a for a in corpus.annotation_sets["gold"] if a.doc_id == doc_id]
    masked = clipse.scrub_document(doc, anns, style="mask")
    assert len(masked["text"]) >= len(anns)
    for ann in anns:
        if len(ann.literal) >= 4:
            assert ann.literal not in masked["text"]
    assert len(masked["offset_map"]) >= 1


def test_detach_round_trip(corpus, tmp_path):
    detached = clipse.detach_corpus(corpus, ["gold"], scenario="binary")
    assert len(detached) == 8
    assert detached.mode == "binary"
    direct = clipse.evaluate_corpus(corpus, pred="gold")
    assert clipse.evaluate_detached(detached, pred="gold") == direct

    path = tmp_path / "detached.jsonl"
    clipse.write_detached(detached, path)
    loaded = clipse.read_detached(path)
    assert loaded.fingerprint == detached.fingerprint
    assert clipse.evaluate_detached(loaded, pred="gold") == direct
    body = path.read_text()
    for doc in corpus.documents.values():
        for token_text in doc.text.split():
            # Words of the note text must not leak ("note" alone would match
            # the doc ids, so only non-trivial words are checked).
            if len(token_text) >= 5:
                assert token_text not in body


def test_store_round_trip(corpus, tmp_path):
    for store in ("parquet", "jsonl"):
        out = tmp_path / store
        clipse.write_corpus(corpus, out, store=store)
        assert clipse.read_corpus(out) == corpus


def test_pyarrow_reads_clipse_parquet(corpus, tmp_path):
    clipse.write_corpus(corpus, tmp_path / "c")

    docs = pq.read_table(tmp_path / "c" / "documents" / "part-0.parquet")
    by_id = {row["doc_id"]: row for row in docs.to_pylist()}
    assert len(by_id) == len(corpus)
    for doc_id, doc in corpus.documents.items():
        assert by_id[doc_id]["text"] == doc.text
        assert by_id[doc_id]["split"] == doc.split

    anns = pq.read_table(
        tmp_path / "c" / "annotations" / "annotator=gold" / "part-0.parquet"
    )
    gold = corpus.annotation_sets["gold"]
    assert anns.num_rows == len(gold)
    rows = anns.to_pylist()
    for row, ann in zip(rows, gold):
        assert row["doc_id"] == ann.doc_id
        assert row["start"] == ann.start
        assert row["stop"] == ann.stop
        assert row["literal"] == ann.literal
        assert row["category"] == ann.category

    gaz = pq.read_table(tmp_path / "c" / "gazetteers" / "part-0.parquet")
    total_entries = sum(len(g.entries) for g in corpus.gazetteers)
    assert gaz.num_rows == total_entries


def test_clipse_reads_pyarrow_parquet(tmp_path):
    base = tmp_path / "external"
    for sub in ("documents", "annotations/annotator=gold", "gazetteers"):
        (base / sub).mkdir(parents=True)
    opts = dict(compression="NONE", use_dictionary=False)

    docs = pa.table({
        "doc_id": ["d1", "d2"],
        "text": ["Dr Smith saw the patient.", "Visit on 2024-01-02, stable."],
        "source": ["unit", "unit"],
        "split": ["train", "test"],
    })
    pq.write_table(docs, base / "documents" / "part-0.parquet", **opts)
    anns = pa.table({
        "doc_id": pa.array(["d1", "d2"], pa.string()),
        "start": pa.array([3, 9], pa.int64()),
        "stop": pa.array([8, 19], pa.int64()),
        "literal": pa.array(["Smith", "2024-01-02"], pa.string()),
        "raw_label": pa.array(["doctor", "date"], pa.string()),
        "category": pa.array(["name", None], pa.string()),
    })
    pq.write_table(
        anns, base / "annotations" / "annotator=gold" / "part-0.parquet", **opts
    )
    gaz = pa.table({
        "name": ["surnames"], "category": ["name"], "entry": ["Smith"],
    })
    pq.write_table(gaz, base / "gazetteers" / "part-0.parquet", **opts)

    corpus = clipse.read_corpus(base)
    assert sorted(corpus.documents) == ["d1", "d2"]
    assert corpus.documents["d1"].split == "train"
    gold = corpus.annotation_sets["gold"]
    assert [(a.start, a.stop, a.literal) for a in gold] == [
        (3, 8, "Smith"), (9, 19, "2024-01-02"),
    ]
    assert gold[0].category == "name"
    assert gold[1].category is None
    assert corpus.gazetteers[0].entries == ["Smith"]
    assert clipse.evaluate_corpus(corpus, pred="gold")["micro"]["f1"] == 1.0


def test_ingest_predictions_and_errors(corpus, tmp_path):
    rows = tmp_path / "preds.tsv"
    doc_id = next(iter(corpus.documents))
    gold = [a for a in corpus.annotation_sets["gold"] if a.doc_id == doc_id]
    line = f"{doc_id}\t{gold[0].start}\t{gold[0].stop}\t{gold[0].raw_label}\t{gold[0].literal}\n"
    rows.write_text("doc_id\tstart\tstop\traw_label\tliteral\n" + line)
    with_preds = clipse.ingest_predictions(corpus, rows, "model")
    assert "model" in with_preds.annotators()
    with pytest.raises(clipse.Error):
        clipse.ingest_predictions(with_preds, rows, "model")  # duplicate
    assert clipse.ingest_predictions(with_preds, rows, "model", overwrite=True)
