#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clipse/types.hpp"

namespace clipse {

// How multiple annotation sets combine into one.
struct MergeStrategy {
  enum class Kind { union_recall_max, intersection, majority };

  Kind kind = Kind::union_recall_max;
  int k = 1;  // votes required; used by majority only

  static MergeStrategy union_recall_max() {
    return {Kind::union_recall_max, 1};
  }
  static MergeStrategy intersection() { return {Kind::intersection, 1}; }
  static MergeStrategy majority(int k) { return {Kind::majority, k}; }
};

// Parses "union", "intersection", or "majority:<k>".
MergeStrategy merge_strategy_from_string(std::string_view s);

// One maximal covered interval of a single annotation list.
struct MergedInterval {
  int64_t start = 0;
  int64_t stop = 0;
  std::optional<Category> category;  // plurality of covered positions

  bool operator==(const MergedInterval&) const = default;
};

// Collapses one (possibly overlapping) annotation list over a document of
// doc_length code points into maximal covered intervals. Each interval takes
// the category covering most of its positions, ties broken by category
// declaration order; intervals covered only by uncategorized annotations
// stay unset.
std::vector<MergedInterval> merge_intervals(
    const std::vector<Annotation>& annotations, int64_t doc_length);

// Merges the named annotators' sets by character coverage: a position is
// positive under union when any annotator covers it, under intersection when
// all do, under majority(k) when at least k do. Maximal positive runs become
// the merged annotations; each takes the category covering the most of its
// positions (ties by category declaration order; no categorized cover leaves
// it unset). Returns a copy of the corpus with the new set added under
// out_annotator.
Corpus merge_annotations(const Corpus& corpus,
                         const std::vector<std::string>& annotators,
                         const MergeStrategy& strategy,
                         const std::string& out_annotator);

}  // namespace clipse
