#include "clipse/types.hpp"

#include <algorithm>
#include <set>

#include "clipse/unicode.hpp"

namespace clipse {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::name: return "name";
    case Category::profession: return "profession";
    case Category::location: return "location";
    case Category::age: return "age";
    case Category::date: return "date";
    case Category::id: return "id";
    case Category::contact: return "contact";
  }
  return "name";
}

std::optional<Category> category_from_string(std::string_view s) {
  for (int i = 0; i < kNumCategories; ++i) {
    auto c = static_cast<Category>(i);
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::unsplit: return "unsplit";
  }
  return "unsplit";
}

std::optional<Split> split_from_string(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  if (s == "unsplit") return Split::unsplit;
  return std::nullopt;
}

void canonicalize(Corpus& corpus) {
  for (auto& [annotator, anns] : corpus.annotation_sets) {
    std::stable_sort(anns.begin(), anns.end(), [](const Annotation& a, const Annotation& b) {
      return std::tie(a.doc_id, a.start, a.stop) < std::tie(b.doc_id, b.start, b.stop);
    });
  }
}

void validate_annotation(const Annotation& ann, const Document& doc) {
  auto where = [&] {
    return "annotation " + ann.doc_id + "[" + std::to_string(ann.start) + "," +
           std::to_string(ann.stop) + ") by '" + ann.annotator + "'";
  };
  if (ann.annotator.empty()) {
    throw Error(where() + ": empty annotator");
  }
  uni::CodePointIndex idx(doc.text);
  if (ann.start < 0 || ann.start >= ann.stop || ann.stop > idx.size()) {
    throw Error(where() + ": offsets out of range for document of length " +
                std::to_string(idx.size()));
  }
  auto slice = idx.slice(ann.start, ann.stop);
  if (slice != ann.literal) {
    throw Error(where() + ": literal \"" + ann.literal +
                "\" does not match text slice \"" + std::string(slice) + "\"");
  }
}

void validate_corpus(const Corpus& corpus) {
  for (const auto& [doc_id, doc] : corpus.documents) {
    if (doc_id.empty() || doc.doc_id.empty()) {
      throw Error("document with empty doc_id");
    }
    if (doc_id != doc.doc_id) {
      throw Error("document map key '" + doc_id + "' differs from doc_id '" + doc.doc_id + "'");
    }
  }
  for (const auto& [annotator, anns] : corpus.annotation_sets) {
    if (annotator.empty()) {
      throw Error("annotation set with empty annotator name");
    }
    const Annotation* prev = nullptr;
    // Cache the code point index per document; sets are sorted by doc_id.
    std::string cached_doc;
    std::optional<uni::CodePointIndex> idx;
    for (const auto& ann : anns) {
      if (ann.annotator != annotator) {
        throw Error("annotation in set '" + annotator + "' carries annotator '" +
                    ann.annotator + "'");
      }
      if (prev && std::tie(prev->doc_id, prev->start, prev->stop) >
                      std::tie(ann.doc_id, ann.start, ann.stop)) {
        throw Error("annotation set '" + annotator + "' not sorted by (doc_id, start, stop)");
      }
      prev = &ann;
      auto doc_it = corpus.documents.find(ann.doc_id);
      if (doc_it == corpus.documents.end()) {
        throw Error("annotation references unknown document '" + ann.doc_id + "'");
      }
      if (ann.doc_id != cached_doc || !idx) {
        idx.emplace(doc_it->second.text);
        cached_doc = ann.doc_id;
      }
      if (ann.start < 0 || ann.start >= ann.stop || ann.stop > idx->size()) {
        throw Error("annotation " + ann.doc_id + "[" + std::to_string(ann.start) + "," +
                    std::to_string(ann.stop) + ") by '" + annotator +
                    "': offsets out of range for document of length " +
                    std::to_string(idx->size()));
      }
      auto slice = idx->slice(ann.start, ann.stop);
      if (slice != ann.literal) {
        throw Error("annotation " + ann.doc_id + "[" + std::to_string(ann.start) + "," +
                    std::to_string(ann.stop) + ") by '" + annotator + "': literal \"" +
                    ann.literal + "\" does not match text slice \"" + std::string(slice) +
                    "\"");
      }
    }
  }
  for (const auto& gaz : corpus.gazetteers) {
    if (gaz.name.empty()) {
      throw Error("gazetteer with empty name");
    }
    std::set<std::u32string> seen;
    for (const auto& entry : gaz.entries) {
      if (entry.empty()) {
        throw Error("gazetteer '" + gaz.name + "' contains an empty entry");
      }
      uni::CodePointIndex idx(entry);
      if (uni::is_space(idx.at(0)) || uni::is_space(idx.at(idx.size() - 1))) {
        throw Error("gazetteer '" + gaz.name + "' entry \"" + entry +
                    "\" has leading or trailing whitespace");
      }
      if (!seen.insert(uni::fold_case(entry)).second) {
        throw Error("gazetteer '" + gaz.name + "' entry \"" + entry +
                    "\" duplicates another entry under case folding");
      }
    }
  }
}

}  // namespace clipse
