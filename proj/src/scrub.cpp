#include "clipse/scrub.hpp"

#include "clipse/harmonize.hpp"
#include "clipse/merge.hpp"
#include "clipse/unicode.hpp"

namespace clipse {

namespace {

constexpr std::string_view kMaskBlock = "█";  // U+2588 FULL BLOCK

std::string placeholder_for(const MergedInterval& interval) {
  std::string label = interval.category
                          ? std::string(to_string(*interval.category))
                          : std::string("phi");
  for (char& c : label) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return "[**" + label + "**]";
}

}  // namespace

ScrubStyle scrub_style_from_string(std::string_view s) {
  if (s == "placeholder") return ScrubStyle::category_placeholder;
  if (s == "mask") return ScrubStyle::mask_preserving_length;
  throw Error("unknown scrub style '" + std::string(s) +
              "' (known: placeholder, mask)");
}

ScrubbedDocument scrub_document(const Document& doc,
                                const std::vector<Annotation>& annotations,
                                ScrubStyle style) {
  for (const auto& ann : annotations) {
    if (ann.doc_id != doc.doc_id) {
      throw Error("annotation for '" + ann.doc_id +
                  "' passed to scrub of '" + doc.doc_id + "'");
    }
  }
  uni::CodePointIndex index(doc.text);

  // Known raw labels still produce informative placeholders when the stored
  // category is unset.
  LabelMap fallback = builtin_label_map();
  fallback.unknown_policy = LabelMap::UnknownPolicy::pass_as_is;
  auto intervals =
      merge_intervals(resolve_categories(annotations, fallback), index.size());

  ScrubbedDocument out;
  int64_t copied_to = 0;   // original code points emitted so far
  int64_t new_length = 0;  // scrubbed length in code points
  for (const auto& interval : intervals) {
    out.text += index.slice(copied_to, interval.start);
    new_length += interval.start - copied_to;

    ScrubSpan span;
    span.original_start = interval.start;
    span.original_stop = interval.stop;
    span.new_start = new_length;
    if (style == ScrubStyle::category_placeholder) {
      std::string placeholder = placeholder_for(interval);
      new_length += uni::count_code_points(placeholder);
      out.text += placeholder;
    } else {
      for (int64_t i = interval.start; i < interval.stop; ++i) {
        out.text += kMaskBlock;
      }
      new_length += interval.stop - interval.start;
    }
    span.new_stop = new_length;
    out.offset_map.push_back(span);
    copied_to = interval.stop;
  }
  out.text += index.slice(copied_to, index.size());
  return out;
}

}  // namespace clipse
