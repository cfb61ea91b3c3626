#pragma once

#include <cstdint>
#include <string_view>

#include "clipse/types.hpp"

namespace clipse {

// Which pool of note templates the generator draws from.
enum class TemplateSet {
  radiology,  // imaging reports: date, id, and contact slots only
  discharge,  // discharge summaries: date, id, and contact slots only
  mixed,      // intake/transfer/history notes covering every category
};

std::string_view to_string(TemplateSet templates);
// Throws Error on anything other than "radiology", "discharge", "mixed".
TemplateSet template_set_from_string(std::string_view name);

// Builds a deterministic synthetic corpus of n_docs documents. Each document
// is rendered from a note template whose slots are filled from fixed word and
// number pools; the gold annotations record the exact slot spans, so literal
// and offsets agree by construction. Every document draws its own generator
// stream from (seed, index), and the split is assigned 80/20 train/test by
// index. The radiology and discharge sets plant only date, contact, and id
// values shaped like the ones the builtin tagger profile recognizes; mixed
// additionally plants names (including multi-word and non-ASCII ones),
// professions, locations, organizations, ages on both sides of 90, and bare
// four-digit years. Throws Error when n_docs < 1.
Corpus generate_corpus(uint64_t seed, int64_t n_docs, TemplateSet templates);

}  // namespace clipse
