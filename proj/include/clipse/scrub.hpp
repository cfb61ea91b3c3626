#pragma once

#include <string>
#include <vector>

#include "clipse/types.hpp"

namespace clipse {

enum class ScrubStyle { category_placeholder, mask_preserving_length };

ScrubStyle scrub_style_from_string(std::string_view s);  // placeholder|mask

// Where one replacement landed; all four offsets in code points.
struct ScrubSpan {
  int64_t original_start = 0;
  int64_t original_stop = 0;
  int64_t new_start = 0;
  int64_t new_stop = 0;

  bool operator==(const ScrubSpan&) const = default;
};

struct ScrubbedDocument {
  std::string text;
  std::vector<ScrubSpan> offset_map;  // one entry per replaced interval
};

// Replaces annotated spans: overlapping annotations first collapse into
// maximal intervals (category by plurality); category_placeholder writes
// "[**CATEGORY**]" (upper-case, "[**PHI**]" when unset), while
// mask_preserving_length writes one mask block per code point. Text outside
// the intervals is copied byte for byte.
ScrubbedDocument scrub_document(const Document& doc,
                                const std::vector<Annotation>& annotations,
                                ScrubStyle style);

}  // namespace clipse
