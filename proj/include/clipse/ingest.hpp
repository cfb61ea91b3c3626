#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clipse/types.hpp"

namespace clipse {

// One row of the external standoff-table schema. Offsets are code points
// into the referenced document; a missing literal means "take the slice".
struct StandoffRow {
  std::string doc_id;
  int64_t start = 0;
  int64_t stop = 0;
  std::string raw_label;
  std::optional<std::string> literal;

  bool operator==(const StandoffRow&) const = default;
};

struct ParsedDocument {
  Document document;
  std::vector<Annotation> annotations;

  bool operator==(const ParsedDocument&) const = default;
};

// Parses one i2b2-style XML record: a root element holding a TEXT element
// (note body, CDATA verbatim) and a TAGS element of empty-element tags with
// start/end/text attributes. raw_label comes from the TYPE attribute,
// falling back to the element name; categories stay unset. Tag literals are
// verified against the text slice, retrying offsets shifted by -1 and +1
// before giving up — an unrecoverable mismatch throws naming the tag.
ParsedDocument parse_i2b2_xml(std::string_view xml_text,
                              const std::string& doc_id,
                              const std::string& annotator);

// Builds a document plus annotations from standoff rows, with the same
// literal verification and off-by-one recovery as parse_i2b2_xml. Rows
// without a literal take the slice. Rows must carry this doc_id (or none).
ParsedDocument parse_standoff(const std::string& text,
                              const std::vector<StandoffRow>& rows,
                              const std::string& doc_id,
                              const std::string& annotator);

// Standoff tables as tab-separated values (header row required, columns
// doc_id/start/stop/raw_label/literal, empty literal cell = absent; fields
// must not contain tabs or newlines) or as line-delimited JSON objects with
// the same keys. read_standoff_file dispatches on the extension
// (.tsv / .jsonl).
std::vector<StandoffRow> read_standoff_tsv(const std::filesystem::path& path);
std::vector<StandoffRow> read_standoff_jsonl(const std::filesystem::path& path);
std::vector<StandoffRow> read_standoff_file(const std::filesystem::path& path);

// Attaches external predictions to a copy of the corpus as a new annotation
// set built from the rows. Unknown doc_ids and duplicate annotators (unless
// overwrite is set) are errors; the result is canonicalized and validated.
Corpus ingest_predictions(const Corpus& corpus,
                          const std::vector<StandoffRow>& rows,
                          const std::string& annotator,
                          bool overwrite = false);

// Directory ingestion for the CLI. ingest_i2b2_dir reads every *.xml file as
// one record (doc_id = file stem); ingest_standoff_dir reads every *.txt
// file as a document and attaches rows from annotations.tsv or
// annotations.jsonl when exactly one of them is present. Document.source
// records the originating filename.
Corpus ingest_i2b2_dir(const std::filesystem::path& dir,
                       const std::string& annotator);
Corpus ingest_standoff_dir(const std::filesystem::path& dir,
                           const std::string& annotator);

}  // namespace clipse
