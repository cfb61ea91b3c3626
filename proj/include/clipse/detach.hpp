#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "clipse/evaluate.hpp"
#include "clipse/harmonize.hpp"
#include "clipse/types.hpp"

namespace clipse {

// Text-free remainder of one document: token offsets plus aligned label
// lists per annotator.
struct DetachedDoc {
  std::string doc_id;
  std::vector<std::pair<int64_t, int64_t>> offsets;
  std::map<std::string, std::vector<Label>> labels;

  bool operator==(const DetachedDoc&) const = default;
};

// Everything needed to re-run a token-level evaluation after the source
// documents are deleted. The fingerprint hashes tokenizer name, scenario,
// and label-map rules so artifacts from different configurations cannot be
// compared silently.
struct DetachedCorpus {
  std::string tokenizer;
  EvalMode mode = EvalMode::binary;
  Category target = Category::name;
  std::string fingerprint;
  std::map<std::string, DetachedDoc> docs;

  bool operator==(const DetachedCorpus&) const = default;
};

// Content hash (FNV-1a, hex) of the evaluation configuration.
std::string scenario_fingerprint(std::string_view tokenizer_name,
                                 const ScenarioConfig& cfg,
                                 const LabelMap& map);

// Tokenizes every document and stores per-annotator token labels computed
// exactly as evaluate_corpus would. Document text is not retained.
DetachedCorpus detach_corpus(const Corpus& corpus,
                             const std::vector<std::string>& annotators,
                             const ScenarioConfig& cfg,
                             const std::string& tokenizer_name,
                             const LabelMap& map = builtin_label_map(),
                             int jobs = 1);

// Token-level evaluation over detached labels; equals evaluate_corpus on
// the originating corpus under the same configuration, field for field.
EvalResult evaluate_detached(const DetachedCorpus& detached,
                             const std::string& gold_annotator,
                             const std::string& pred_annotator);

// JSONL serialization, one object per document:
// {doc_id, offsets: [[s,e],...], labels: {annotator: [...]}, fingerprint,
//  tokenizer, mode[, target]}. Reading rejects files whose rows carry
// different fingerprints.
void write_detached(const DetachedCorpus& detached,
                    const std::filesystem::path& path);
DetachedCorpus read_detached(const std::filesystem::path& path);

}  // namespace clipse
