#pragma once

#include <filesystem>

#include "clipse/types.hpp"

namespace clipse {

// On-disk layout for a corpus directory.
//
// parquet (canonical):
//   <path>/documents/part-0.parquet
//   <path>/annotations/annotator=<value>/part-0.parquet   (hive partition)
//   <path>/gazetteers/part-0.parquet
//
// jsonl (fallback interchange, same field names, annotator inline):
//   <path>/documents.jsonl
//   <path>/annotations.jsonl
//   <path>/gazetteers.jsonl
enum class StoreFormat { parquet, jsonl };

// Canonicalizes annotation order, validates all invariants, then writes the
// three datasets under path (created if absent). Rejects invalid corpora
// rather than repairing them.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  StoreFormat format = StoreFormat::parquet);

// Loads a corpus directory in either layout (detected by file presence) and
// validates every invariant, including literal == text slice per annotation.
// A missing gazetteers dataset reads as an empty list.
Corpus read_corpus(const std::filesystem::path& path);

// Partition-value encoding for annotator directory names: keeps
// [A-Za-z0-9._-], percent-encodes everything else byte-wise.
std::string encode_partition_value(std::string_view value);
std::string decode_partition_value(std::string_view encoded);

}  // namespace clipse
