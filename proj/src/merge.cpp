#include "clipse/merge.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "clipse/harmonize.hpp"
#include "clipse/unicode.hpp"

namespace clipse {

MergeStrategy merge_strategy_from_string(std::string_view s) {
  if (s == "union") return MergeStrategy::union_recall_max();
  if (s == "intersection") return MergeStrategy::intersection();
  if (s.rfind("majority", 0) == 0) {
    if (s.size() > 9 && s[8] == ':') {
      int k = 0;
      for (char c : s.substr(9)) {
        if (c < '0' || c > '9') {
          throw Error("bad majority threshold in '" + std::string(s) + "'");
        }
        k = k * 10 + (c - '0');
      }
      if (k >= 1) return MergeStrategy::majority(k);
    }
    throw Error("majority strategy needs a threshold, e.g. majority:2");
  }
  throw Error("unknown merge strategy '" + std::string(s) +
              "' (known: union, intersection, majority:<k>)");
}

std::vector<MergedInterval> merge_intervals(
    const std::vector<Annotation>& annotations, int64_t doc_length) {
  auto length = static_cast<size_t>(doc_length);
  std::vector<uint8_t> covered(length, 0);
  std::vector<uint8_t> category_cover(length, 0);
  for (const auto& ann : annotations) {
    if (ann.start < 0 || ann.stop > doc_length || ann.start >= ann.stop) {
      throw Error("annotation [" + std::to_string(ann.start) + ", " +
                  std::to_string(ann.stop) + ") out of range for '" +
                  ann.doc_id + "' (" + std::to_string(doc_length) +
                  " code points)");
    }
    for (int64_t pos = ann.start; pos < ann.stop; ++pos) {
      auto p = static_cast<size_t>(pos);
      covered[p] = 1;
      if (ann.category) {
        category_cover[p] |= static_cast<uint8_t>(
            1u << static_cast<unsigned>(*ann.category));
      }
    }
  }
  std::vector<MergedInterval> intervals;
  size_t pos = 0;
  while (pos < length) {
    if (!covered[pos]) {
      ++pos;
      continue;
    }
    MergedInterval interval;
    interval.start = static_cast<int64_t>(pos);
    std::array<int64_t, kNumCategories> cover_count{};
    while (pos < length && covered[pos]) {
      for (int c = 0; c < kNumCategories; ++c) {
        if (category_cover[pos] & (1u << static_cast<unsigned>(c))) {
          ++cover_count[static_cast<size_t>(c)];
        }
      }
      ++pos;
    }
    interval.stop = static_cast<int64_t>(pos);
    int64_t best = 0;
    for (int c = 0; c < kNumCategories; ++c) {
      if (cover_count[static_cast<size_t>(c)] > best) {
        best = cover_count[static_cast<size_t>(c)];
        interval.category = static_cast<Category>(c);
      }
    }
    intervals.push_back(interval);
  }
  return intervals;
}

namespace {

struct DocVotes {
  // Per position: number of annotators covering it, and per category the
  // number of positions... category cover is tracked as a bitmask per
  // position so one annotator's duplicate spans do not double-count.
  std::vector<uint16_t> annotator_count;
  std::vector<uint8_t> category_cover;  // bit c set = category c covers

  explicit DocVotes(int64_t length)
      : annotator_count(static_cast<size_t>(length), 0),
        category_cover(static_cast<size_t>(length), 0) {}
};

}  // namespace

Corpus merge_annotations(const Corpus& corpus,
                         const std::vector<std::string>& annotators,
                         const MergeStrategy& strategy,
                         const std::string& out_annotator) {
  if (annotators.size() < 2) {
    throw Error("merge needs at least two annotators");
  }
  for (const auto& annotator : annotators) {
    if (!corpus.annotation_sets.count(annotator)) {
      throw Error("annotator '" + annotator + "' not present in corpus");
    }
  }
  if (corpus.annotation_sets.count(out_annotator)) {
    throw Error("output annotator '" + out_annotator + "' already exists");
  }
  int n = static_cast<int>(annotators.size());
  int threshold;
  switch (strategy.kind) {
    case MergeStrategy::Kind::union_recall_max:
      threshold = 1;
      break;
    case MergeStrategy::Kind::intersection:
      threshold = n;
      break;
    case MergeStrategy::Kind::majority:
      if (strategy.k < 1) {
        throw Error("majority threshold must be >= 1");
      }
      if (strategy.k > n) {
        throw Error("majority threshold " + std::to_string(strategy.k) +
                    " exceeds the " + std::to_string(n) +
                    " annotators being merged");
      }
      threshold = strategy.k;
      break;
    default:
      throw Error("unhandled merge strategy");
  }

  LabelMap fallback = builtin_label_map();
  fallback.unknown_policy = LabelMap::UnknownPolicy::pass_as_is;

  // Pass 1: per document, per position, count covering annotators (each at
  // most once per position) and record which categories cover it.
  std::map<std::string, DocVotes> votes;
  std::map<std::string, int64_t> doc_lengths;
  for (const auto& [id, doc] : corpus.documents) {
    doc_lengths[id] = uni::count_code_points(doc.text);
  }
  for (const auto& annotator : annotators) {
    // Within one annotator, overlapping spans must not double-count a
    // position, so mark a per-doc seen set for this annotator first.
    std::map<std::string, std::vector<uint8_t>> seen;
    for (const auto& ann :
         resolve_categories(corpus.annotation_sets.at(annotator), fallback)) {
      auto [vit, inserted] = votes.try_emplace(ann.doc_id,
                                               doc_lengths.at(ann.doc_id));
      auto& v = vit->second;
      auto& mask = seen[ann.doc_id];
      if (mask.empty()) mask.assign(v.annotator_count.size(), 0);
      for (int64_t pos = ann.start; pos < ann.stop; ++pos) {
        auto p = static_cast<size_t>(pos);
        if (!mask[p]) {
          mask[p] = 1;
          ++v.annotator_count[p];
        }
        if (ann.category) {
          v.category_cover[p] |= static_cast<uint8_t>(
              1u << static_cast<unsigned>(*ann.category));
        }
      }
    }
  }

  // Pass 2: emit maximal runs meeting the threshold.
  Corpus out = corpus;
  auto& merged = out.annotation_sets[out_annotator];
  for (const auto& [id, doc] : corpus.documents) {
    auto vit = votes.find(id);
    if (vit == votes.end()) continue;
    const auto& v = vit->second;
    uni::CodePointIndex index(doc.text);
    size_t length = v.annotator_count.size();
    size_t pos = 0;
    while (pos < length) {
      if (v.annotator_count[pos] < threshold) {
        ++pos;
        continue;
      }
      size_t run_start = pos;
      std::array<int64_t, kNumCategories> cover_count{};
      while (pos < length && v.annotator_count[pos] >= threshold) {
        for (int c = 0; c < kNumCategories; ++c) {
          if (v.category_cover[pos] & (1u << static_cast<unsigned>(c))) {
            ++cover_count[static_cast<size_t>(c)];
          }
        }
        ++pos;
      }
      Annotation ann;
      ann.doc_id = id;
      ann.start = static_cast<int64_t>(run_start);
      ann.stop = static_cast<int64_t>(pos);
      ann.literal = std::string(index.slice(ann.start, ann.stop));
      int64_t best = 0;
      for (int c = 0; c < kNumCategories; ++c) {
        if (cover_count[static_cast<size_t>(c)] > best) {
          best = cover_count[static_cast<size_t>(c)];
          ann.category = static_cast<Category>(c);
        }
      }
      ann.raw_label =
          ann.category ? std::string(to_string(*ann.category)) : "phi";
      ann.annotator = out_annotator;
      merged.push_back(std::move(ann));
    }
  }
  return out;
}

}  // namespace clipse
