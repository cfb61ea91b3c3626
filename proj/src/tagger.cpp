#include "clipse/tagger.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "clipse/parallel.hpp"
#include "clipse/unicode.hpp"
#include "wordlists.hpp"

namespace clipse {
namespace {

struct CompiledRule {
  std::regex regex;
  Category category = Category::name;
  std::string_view rule_id;
};

// Gazetteer entry ready for scanning. Entries rank after every rule, in
// gazetteer order.
struct FoldedEntry {
  std::u32string text;
  Category category = Category::name;
  std::string_view gazetteer;
  size_t priority = 0;
};

struct CompiledProfile {
  std::vector<CompiledRule> rules;
  std::vector<FoldedEntry> entries;
};

std::regex compile_pattern(const PatternRule& rule) {
  auto flags = std::regex::ECMAScript | std::regex::optimize;
  if (rule.case_insensitive) flags |= std::regex::icase;
  try {
    return std::regex(rule.pattern, flags);
  } catch (const std::regex_error& e) {
    throw Error("tagger rule '" + rule.rule_id +
                "': pattern does not compile: " + e.what());
  }
}

CompiledProfile compile_profile(const TaggerProfile& profile) {
  if (profile.rules.empty()) throw Error("tagger profile has no rules");
  CompiledProfile out;
  out.rules.reserve(profile.rules.size());
  std::set<std::string_view> ids;
  for (const PatternRule& rule : profile.rules) {
    if (rule.rule_id.empty()) throw Error("tagger rule with empty rule_id");
    if (!ids.insert(rule.rule_id).second) {
      throw Error("duplicate tagger rule id '" + rule.rule_id + "'");
    }
    out.rules.push_back({compile_pattern(rule), rule.category, rule.rule_id});
  }
  for (size_t g = 0; g < profile.gazetteers.size(); ++g) {
    const Gazetteer& gaz = profile.gazetteers[g];
    for (const std::string& entry : gaz.entries) {
      std::u32string folded = uni::fold_case(entry);
      // One-letter entries would blanket the text; skip them.
      if (folded.size() < 2) continue;
      out.entries.push_back(
          {std::move(folded), gaz.category, gaz.name, profile.rules.size() + g});
    }
  }
  return out;
}

struct Candidate {
  int64_t start = 0;
  int64_t stop = 0;
  Category category = Category::name;
  std::string_view label;
  size_t priority = 0;
};

// Code point offset one past the last byte of a match. Matches of the
// byte-oriented patterns end on code point boundaries; round up defensively
// in case a pattern ever splits a multibyte sequence.
int64_t cp_end(const uni::CodePointIndex& index, size_t byte) {
  int64_t cp = index.cp_at_byte(byte);
  return index.byte_offset(cp) == byte ? cp : cp + 1;
}

std::vector<Annotation> run_tagger(const Document& doc,
                                   const CompiledProfile& compiled,
                                   const std::string& annotator) {
  uni::CodePointIndex index(doc.text);
  std::vector<Candidate> candidates;

  const char* base = doc.text.data();
  const auto done = std::cregex_iterator();
  for (size_t r = 0; r < compiled.rules.size(); ++r) {
    const CompiledRule& rule = compiled.rules[r];
    for (auto it = std::cregex_iterator(base, base + doc.text.size(), rule.regex);
         it != done; ++it) {
      const std::cmatch& m = *it;
      size_t group = m.size() > 1 && m[1].matched ? 1 : 0;
      if (m.length(group) == 0) continue;
      size_t lo = static_cast<size_t>(m.position(group));
      size_t hi = lo + static_cast<size_t>(m.length(group));
      candidates.push_back({index.cp_at_byte(lo), cp_end(index, hi),
                            rule.category, rule.rule_id, r});
    }
  }

  if (!compiled.entries.empty()) {
    std::u32string folded(index.points());
    for (char32_t& cp : folded) cp = uni::to_lower(cp);
    for (const FoldedEntry& entry : compiled.entries) {
      for (size_t pos = folded.find(entry.text); pos != std::u32string::npos;
           pos = folded.find(entry.text, pos + 1)) {
        size_t end = pos + entry.text.size();
        bool left_boundary = pos == 0 || !uni::is_word(folded[pos - 1]) ||
                             !uni::is_word(entry.text.front());
        bool right_boundary = end == folded.size() ||
                              !uni::is_word(folded[end]) ||
                              !uni::is_word(entry.text.back());
        if (!left_boundary || !right_boundary) continue;
        candidates.push_back({static_cast<int64_t>(pos),
                              static_cast<int64_t>(end), entry.category,
                              entry.gazetteer, entry.priority});
      }
    }
  }

  // Longest match wins; ties go to the earlier start, then the earlier rule.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     int64_t la = a.stop - a.start;
                     int64_t lb = b.stop - b.start;
                     if (la != lb) return la > lb;
                     if (a.start != b.start) return a.start < b.start;
                     return a.priority < b.priority;
                   });

  std::vector<char> taken(static_cast<size_t>(index.size()), 0);
  std::vector<const Candidate*> accepted;
  for (const Candidate& cand : candidates) {
    bool free = true;
    for (int64_t i = cand.start; i < cand.stop && free; ++i) {
      free = taken[static_cast<size_t>(i)] == 0;
    }
    if (!free) continue;
    std::fill(taken.begin() + cand.start, taken.begin() + cand.stop, char(1));
    accepted.push_back(&cand);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate* a, const Candidate* b) {
              return std::pair(a->start, a->stop) <
                     std::pair(b->start, b->stop);
            });

  std::vector<Annotation> out;
  out.reserve(accepted.size());
  for (const Candidate* cand : accepted) {
    Annotation ann;
    ann.doc_id = doc.doc_id;
    ann.start = cand->start;
    ann.stop = cand->stop;
    ann.literal = std::string(index.slice(cand->start, cand->stop));
    ann.raw_label = std::string(cand->label);
    ann.category = cand->category;
    ann.annotator = annotator;
    out.push_back(std::move(ann));
  }
  return out;
}

std::string month_alternation() {
  std::string alt = "(?:";
  const char* sep = "";
  for (std::string_view m : words::kMonths) {
    alt += sep;
    alt += m;
    sep = "|";
  }
  for (std::string_view m : words::kMonthAbbrevs) {
    alt += sep;
    alt += m;
  }
  alt += ")";
  return alt;
}

template <size_t N>
std::vector<std::string> pool_entries(
    const std::array<std::string_view, N>& pool) {
  return {pool.begin(), pool.end()};
}

}  // namespace

void validate_profile(const TaggerProfile& profile) { compile_profile(profile); }

std::vector<Annotation> tag_document(const Document& doc,
                                     const TaggerProfile& profile,
                                     const std::string& annotator) {
  return run_tagger(doc, compile_profile(profile), annotator);
}

Corpus tag_corpus(const Corpus& corpus, const TaggerProfile& profile,
                  const std::string& annotator, int jobs) {
  if (annotator.empty()) throw Error("annotator name is empty");
  if (corpus.annotation_sets.count(annotator) != 0) {
    throw Error("annotator '" + annotator + "' already present in corpus");
  }
  CompiledProfile compiled = compile_profile(profile);

  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& [id, doc] : corpus.documents) docs.push_back(&doc);

  std::vector<std::vector<Annotation>> results(docs.size());
  parallel_for(docs.size(), jobs, [&](size_t i) {
    results[i] = run_tagger(*docs[i], compiled, annotator);
  });

  Corpus out = corpus;
  std::vector<Annotation>& merged = out.annotation_sets[annotator];
  for (std::vector<Annotation>& part : results) {
    merged.insert(merged.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return out;
}

TaggerProfile builtin_profile() {
  const std::string month = month_alternation();
  const std::string year = "(?:\\d{4}|\\d{2})";

  TaggerProfile p;
  p.rules = {
      {"date_iso", Category::date, R"(\b\d{4}-\d{1,2}-\d{1,2}(?!\d))", false},
      {"date_numeric", Category::date,
       R"(\b\d{1,2}[/.-]\d{1,2}[/.-](?:\d{4}|\d{2})(?!\d))", false},
      {"date_month_first", Category::date,
       "\\b" + month + "\\.?\\s+\\d{1,2}(?:st|nd|rd|th)?(?:,?\\s+" + year +
           ")?(?!\\d)",
       true},
      {"date_day_first", Category::date,
       "\\b\\d{1,2}(?:st|nd|rd|th)?\\s+" + month + "(?:\\.|\\b)(?:,?\\s+" +
           year + "(?!\\d))?",
       true},
      {"date_month_year", Category::date,
       "\\b" + month + "\\.?,?\\s+\\d{4}(?!\\d)", true},
      {"time_of_day", Category::date,
       R"(\b\d{1,2}:\d{2}(?!\d)(?::\d{2}(?!\d))?(?:\s?[ap]\.?m\.?)?)", true},
      {"phone_us", Category::contact, R"(\(?\b\d{3}\)?[-. ]?\d{3}[-. ]?\d{4}\b)",
       false},
      {"email", Category::contact,
       R"(\b[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}\b)", false},
      {"mrn", Category::id, R"(\bMRN[:#]?\s*(\d{4,10})(?!\d))", true},
      {"age_year_old", Category::age, R"(\b(\d{1,3})[\s-](?:year|yr)s?[\s-]old\b)",
       true},
      {"age_yo", Category::age, R"(\b(\d{1,3})\s*(?:yo|y/o|y\.o\.)(?!\w))", true},
      {"age_prefix", Category::age, R"(\bage[:d]?\s*(\d{1,3})(?!\d))", true},
      {"zip", Category::location, R"(\b\d{5}(?:-\d{4})?\b)", false},
      {"id_number", Category::id, R"(\b\d{6,9}\b)", false},
      {"honorific_name", Category::name,
       R"(\b(?:Dr|Mrs|Ms|Mr|Prof)\.?\s+([A-Z][a-z]+(?:\s+[A-Z][a-z]+)?))",
       false},
  };

  p.gazetteers = {
      {"surnames", Category::name, pool_entries(words::kSurnames)},
      {"given_names", Category::name, pool_entries(words::kGivenNames)},
      {"cities", Category::location, pool_entries(words::kCities)},
      {"states", Category::location, pool_entries(words::kStates)},
      {"countries", Category::location, pool_entries(words::kCountries)},
      {"hospitals", Category::location, pool_entries(words::kHospitals)},
  };

  // What this profile attempts to tag at all: every age, clinician names via
  // honorifics, and large geographic units via the state/country lists — but
  // no professions, no bare years, and no organizations.
  p.protected_flags.include_profession = false;
  p.protected_flags.include_lone_year = false;
  p.protected_flags.include_organization = false;
  return p;
}

TaggerProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile file " + path.string());
  nlohmann::json doc;
  TaggerProfile profile;
  try {
    in >> doc;
    if (!doc.is_object()) throw Error("expected a JSON object");
    for (const nlohmann::json& row :
         doc.value("rules", nlohmann::json::array())) {
      PatternRule rule;
      rule.rule_id = row.at("rule_id").get<std::string>();
      rule.pattern = row.at("pattern").get<std::string>();
      rule.case_insensitive = row.value("case_insensitive", false);
      const std::string cat = row.at("category").get<std::string>();
      auto parsed = category_from_string(cat);
      if (!parsed) {
        throw Error("rule '" + rule.rule_id + "': unknown category '" + cat +
                    "'");
      }
      rule.category = *parsed;
      profile.rules.push_back(std::move(rule));
    }
    for (const nlohmann::json& row :
         doc.value("gazetteers", nlohmann::json::array())) {
      Gazetteer gaz;
      gaz.name = row.at("name").get<std::string>();
      const std::string cat = row.at("category").get<std::string>();
      auto parsed = category_from_string(cat);
      if (!parsed) {
        throw Error("gazetteer '" + gaz.name + "': unknown category '" + cat +
                    "'");
      }
      gaz.category = *parsed;
      if (row.contains("file")) {
        std::filesystem::path file =
            path.parent_path() / row.at("file").get<std::string>();
        std::ifstream entries(file);
        if (!entries) {
          throw Error("cannot open gazetteer file " + file.string());
        }
        std::string line;
        while (std::getline(entries, line)) {
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) gaz.entries.push_back(line);
        }
      }
      if (row.contains("entries")) {
        for (const nlohmann::json& entry : row.at("entries")) {
          gaz.entries.push_back(entry.get<std::string>());
        }
      }
      profile.gazetteers.push_back(std::move(gaz));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("profile " + path.string() + ": " + e.what());
  }
  validate_profile(profile);
  return profile;
}

}  // namespace clipse
