#include "clipse/harmonize.hpp"

#include <fstream>

#include "clipse/unicode.hpp"

namespace clipse {

namespace {

std::string fold(std::string_view s) {
  return uni::encode_utf8(uni::fold_case(s));
}

// True when literal is a nonempty all-ASCII-digit string that parses to a
// value below limit. Anything with extra characters does not count.
bool parses_below(std::string_view literal, long limit) {
  if (literal.empty() || literal.size() > 9) return false;
  long value = 0;
  for (char c : literal) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  return value < limit;
}

bool is_four_digits(std::string_view literal) {
  if (literal.size() != 4) return false;
  for (char c : literal) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

MappedLabel map_label(const LabelMap& map, std::string_view raw) {
  std::string key = fold(raw);
  auto it = map.rules.find(key);
  if (it != map.rules.end()) {
    return {LabelDisposition::mapped, it->second};
  }
  // Canonical category names always map to themselves, independent of the
  // rule set, so harmonizing already-harmonized labels is a no-op.
  if (auto cat = category_from_string(key)) {
    return {LabelDisposition::mapped, *cat};
  }
  switch (map.unknown_policy) {
    case LabelMap::UnknownPolicy::drop:
      return {LabelDisposition::dropped, std::nullopt};
    case LabelMap::UnknownPolicy::pass_as_is:
      return {LabelDisposition::passed, std::nullopt};
    case LabelMap::UnknownPolicy::error:
      break;
  }
  throw Error("unknown raw label '" + std::string(raw) +
              "' (policy is error; extend the label map or choose another "
              "unknown policy)");
}

LabelMap builtin_label_map() {
  LabelMap map;
  auto add = [&map](Category cat, std::initializer_list<const char*> labels) {
    for (const char* label : labels) {
      map.rules.emplace(label, cat);
    }
  };
  add(Category::name, {"name", "doctor", "patient", "username", "hcpname",
                       "relativeproxyname", "ptname", "ptnameinitial",
                       "misc"});
  add(Category::profession, {"profession"});
  add(Category::location,
      {"location", "loc", "department", "hospital", "organization", "org",
       "street", "state", "city", "country", "zip", "location-other"});
  add(Category::age, {"age"});
  add(Category::date, {"date", "dateyear", "time"});
  add(Category::id, {"id", "idnum", "medicalrecord", "medicalrecordnumber",
                     "device", "other"});
  add(Category::contact, {"contact", "phone", "fax", "email"});
  return map;
}

LabelMap load_label_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open label map " + path.string());
  }
  LabelMap map;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("label map " + path.string() + ":" + std::to_string(lineno) +
                  ": expected raw_label<TAB>category");
    }
    std::string raw = line.substr(0, tab);
    std::string cat_str = line.substr(tab + 1);
    if (lineno == 1) {
      if (raw != "raw_label" || cat_str != "category") {
        throw Error("label map " + path.string() +
                    ": first line must be the header raw_label<TAB>category");
      }
      continue;
    }
    auto cat = category_from_string(cat_str);
    if (!cat) {
      throw Error("label map " + path.string() + ":" + std::to_string(lineno) +
                  ": unknown category '" + cat_str + "'");
    }
    auto [it, inserted] = map.rules.emplace(fold(raw), *cat);
    if (!inserted && it->second != *cat) {
      throw Error("label map " + path.string() + ":" + std::to_string(lineno) +
                  ": conflicting rule for '" + raw + "'");
    }
  }
  return map;
}

std::vector<Annotation> harmonize_annotations(
    const std::vector<Annotation>& annotations, const LabelMap& map) {
  std::vector<Annotation> out;
  out.reserve(annotations.size());
  for (const auto& ann : annotations) {
    MappedLabel mapped = map_label(map, ann.raw_label);
    if (mapped.disposition == LabelDisposition::dropped) continue;
    Annotation next = ann;
    next.category = mapped.category;
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<Annotation> resolve_categories(
    const std::vector<Annotation>& annotations, const LabelMap& map) {
  std::vector<Annotation> out;
  out.reserve(annotations.size());
  for (const auto& ann : annotations) {
    if (ann.category) {
      out.push_back(ann);
      continue;
    }
    MappedLabel mapped = map_label(map, ann.raw_label);
    if (mapped.disposition == LabelDisposition::dropped) continue;
    Annotation next = ann;
    next.category = mapped.category;
    out.push_back(std::move(next));
  }
  return out;
}

std::string_view to_string(EvalMode mode) {
  switch (mode) {
    case EvalMode::binary:
      return "binary";
    case EvalMode::multiclass:
      return "multiclass";
    case EvalMode::per_entity:
      return "per_entity";
  }
  return "?";
}

ScenarioConfig scenario_preset(std::string_view name) {
  ScenarioConfig cfg;
  if (name == "binary") {
    cfg.mode = EvalMode::binary;
    return cfg;
  }
  if (name == "multiclass") {
    cfg.mode = EvalMode::multiclass;
    return cfg;
  }
  if (name == "hipaa-strict") {
    cfg.mode = EvalMode::binary;
    cfg.include_profession = false;
    cfg.include_age_under_90 = false;
    cfg.include_nonpatient_names = false;
    cfg.include_large_geo = false;
    cfg.include_lone_year = false;
    cfg.include_organization = false;
    return cfg;
  }
  if (name == "name-only") {
    cfg.mode = EvalMode::per_entity;
    cfg.target = Category::name;
    return cfg;
  }
  throw Error("unknown scenario '" + std::string(name) +
              "' (known: binary, multiclass, hipaa-strict, name-only)");
}

ScenarioFlags derive_flags(const Annotation& ann) {
  ScenarioFlags flags;
  std::string raw = fold(ann.raw_label);
  flags.profession =
      ann.category == Category::profession || raw == "profession";
  flags.age_under_90 =
      ann.category == Category::age && parses_below(ann.literal, 90);
  flags.nonpatient_name =
      raw == "doctor" || raw == "hcpname" || raw == "username";
  flags.large_geo = raw == "country" || raw == "state";
  flags.lone_year =
      ann.category == Category::date && is_four_digits(ann.literal);
  flags.organization = raw == "organization" || raw == "org";
  return flags;
}

std::vector<Annotation> apply_scenario(
    const std::vector<Annotation>& annotations, const ScenarioConfig& cfg) {
  std::vector<ScenarioFlags> flags;
  flags.reserve(annotations.size());
  for (const auto& ann : annotations) {
    flags.push_back(derive_flags(ann));
  }
  return apply_scenario(annotations, cfg, flags);
}

std::vector<Annotation> apply_scenario(
    const std::vector<Annotation>& annotations, const ScenarioConfig& cfg,
    const std::vector<ScenarioFlags>& flags) {
  if (flags.size() != annotations.size()) {
    throw Error("apply_scenario: flags/annotations size mismatch");
  }
  std::vector<Annotation> out;
  out.reserve(annotations.size());
  for (size_t i = 0; i < annotations.size(); ++i) {
    const Annotation& ann = annotations[i];
    if (!ann.category) {
      throw Error("apply_scenario: annotation '" + ann.doc_id + "' [" +
                  std::to_string(ann.start) + ", " + std::to_string(ann.stop) +
                  ") has no canonical category; harmonize labels first");
    }
    const ScenarioFlags& f = flags[i];
    bool removed = (f.profession && !cfg.include_profession) ||
                   (f.age_under_90 && !cfg.include_age_under_90) ||
                   (f.nonpatient_name && !cfg.include_nonpatient_names) ||
                   (f.large_geo && !cfg.include_large_geo) ||
                   (f.lone_year && !cfg.include_lone_year) ||
                   (f.organization && !cfg.include_organization);
    if (!removed) {
      out.push_back(ann);
    }
  }
  return out;
}

}  // namespace clipse
