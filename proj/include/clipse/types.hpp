#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clipse {

// Data or validation problem. The CLI maps this to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// The seven canonical PHI categories. Declaration order doubles as the
// tie-break order wherever a deterministic category preference is needed.
enum class Category : uint8_t {
  name = 0,
  profession,
  location,
  age,
  date,
  id,
  contact,
};

inline constexpr int kNumCategories = 7;

std::string_view to_string(Category c);
std::optional<Category> category_from_string(std::string_view s);

enum class Split : uint8_t { train, test, unsplit };

std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

// One clinical note. Text is stored verbatim; offsets elsewhere refer to it
// in Unicode code points.
struct Document {
  std::string doc_id;
  std::string text;
  std::string source;
  Split split = Split::unsplit;

  bool operator==(const Document&) const = default;
};

// One standoff PHI span. [start, stop) counted in code points over the
// referenced document's text; literal must equal the code-point slice.
struct Annotation {
  std::string doc_id;
  int64_t start = 0;
  int64_t stop = 0;
  std::string literal;
  std::string raw_label;
  std::optional<Category> category;
  std::string annotator;

  bool operator==(const Annotation&) const = default;
};

// Dictionary of known entity strings for lookup-based tagging.
struct Gazetteer {
  std::string name;
  Category category = Category::name;
  std::vector<std::string> entries;

  bool operator==(const Gazetteer&) const = default;
};

struct Corpus {
  std::map<std::string, Document> documents;  // keyed by doc_id
  std::map<std::string, std::vector<Annotation>> annotation_sets;  // keyed by annotator
  std::vector<Gazetteer> gazetteers;

  bool operator==(const Corpus&) const = default;
};

// Sorts every annotation set by (doc_id, start, stop).
void canonicalize(Corpus& corpus);

// Checks all corpus invariants: document ids nonempty, annotations resolve
// to documents, offsets in range, literal equals the text slice, annotator
// nonempty, sets sorted, gazetteer entries trimmed and case-fold unique.
// Throws Error naming the offending record.
void validate_corpus(const Corpus& corpus);

// Validates a single annotation against its document.
void validate_annotation(const Annotation& ann, const Document& doc);

}  // namespace clipse
