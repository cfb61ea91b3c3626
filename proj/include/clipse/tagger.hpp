#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "clipse/harmonize.hpp"
#include "clipse/types.hpp"

namespace clipse {

// One regex rule of the builtin tagger. Patterns use ECMAScript syntax and
// run over the document bytes; resulting spans are reported in code points.
// When the pattern contains capture groups and group 1 participates in a
// match, group 1 becomes the annotated span, otherwise the whole match does.
struct PatternRule {
  std::string rule_id;
  Category category = Category::name;
  std::string pattern;
  bool case_insensitive = false;

  bool operator==(const PatternRule&) const = default;
};

// Rule list plus gazetteers. protected_flags documents which optional
// attribute classes the profile tries to tag at all, in the same terms as
// the scenario switches (a profile with no profession rules reports
// include_profession = false).
struct TaggerProfile {
  std::vector<PatternRule> rules;
  std::vector<Gazetteer> gazetteers;
  ScenarioConfig protected_flags;

  bool operator==(const TaggerProfile&) const = default;
};

// Checks that rules are nonempty, rule ids are unique and nonempty, and
// every pattern compiles. Throws Error naming the offending rule.
void validate_profile(const TaggerProfile& profile);

// Runs every rule and gazetteer over the document and resolves overlaps
// deterministically: longest match wins, ties go to the earlier start, then
// to the earlier rule (all rules rank before all gazetteers). Gazetteer
// entries match case-insensitively at word boundaries; entries shorter than
// two code points are skipped. Output is sorted by (start, stop),
// non-overlapping, with raw_label set to the rule id or gazetteer name.
std::vector<Annotation> tag_document(
    const Document& doc, const TaggerProfile& profile,
    const std::string& annotator = "reference");

// Tags every document and returns a copy of the corpus with the result
// appended as a new annotation set. The annotator must not already exist.
Corpus tag_corpus(const Corpus& corpus, const TaggerProfile& profile,
                  const std::string& annotator, int jobs = 1);

// Patterns for ISO/numeric/month-name dates, times of day, US-style phone
// numbers, email addresses, medical record numbers, age expressions
// ("<n> year old", "<n> yo", "age <n>"), 5-digit ZIP codes, bare 6-9 digit
// numbers as id, and honorific-introduced names, plus name and location
// gazetteers drawn from the shared word pools.
TaggerProfile builtin_profile();

// Loads a profile from a JSON file of the form
//   {"rules": [{"rule_id": ..., "category": ..., "pattern": ...,
//               "case_insensitive": ...}, ...],
//    "gazetteers": [{"name": ..., "category": ...,
//                    "entries": [...] | "file": "entries.txt"}, ...]}
// Gazetteer files hold one entry per line and are resolved relative to the
// profile file. The loaded profile is validated before being returned.
TaggerProfile load_profile(const std::filesystem::path& path);

}  // namespace clipse
