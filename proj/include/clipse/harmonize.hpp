#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clipse/types.hpp"

namespace clipse {

// Raw-label -> canonical category mapping. Rule keys are case-folded.
struct LabelMap {
  enum class UnknownPolicy { error, drop, pass_as_is };

  std::map<std::string, Category> rules;
  UnknownPolicy unknown_policy = UnknownPolicy::error;
};

enum class LabelDisposition { mapped, dropped, passed };

struct MappedLabel {
  LabelDisposition disposition = LabelDisposition::mapped;
  std::optional<Category> category;  // set iff disposition == mapped
};

// Case-folded lookup with a fallback that maps canonical category names to
// themselves, so mapping is idempotent under any rule set. Unknown labels
// follow map.unknown_policy; policy error throws.
MappedLabel map_label(const LabelMap& map, std::string_view raw);

// Covers every raw subtype label of the common corpora (doctor, hcpname,
// hospital, zip, dateyear, medicalrecord, phone, ...).
LabelMap builtin_label_map();

// TSV with header "raw_label<TAB>category", one rule per line.
LabelMap load_label_map(const std::filesystem::path& path);

// Applies a LabelMap to every annotation: sets category on mapped labels,
// removes dropped ones, leaves passed ones with category unset.
std::vector<Annotation> harmonize_annotations(
    const std::vector<Annotation>& annotations, const LabelMap& map);

// Evaluation-time resolution: annotations that already carry a category keep
// it (e.g., merged or previously harmonized sets); only unset ones go
// through the map.
std::vector<Annotation> resolve_categories(
    const std::vector<Annotation>& annotations, const LabelMap& map);

enum class EvalMode { binary, multiclass, per_entity };

std::string_view to_string(EvalMode mode);

// Evaluation scenario: mode plus protected-entity filter switches. A false
// include_* drops annotations carrying that attribute before scoring.
struct ScenarioConfig {
  EvalMode mode = EvalMode::binary;
  Category target = Category::name;  // used by per_entity only
  bool include_profession = true;
  bool include_age_under_90 = true;
  bool include_nonpatient_names = true;
  bool include_large_geo = true;
  bool include_lone_year = true;
  bool include_organization = true;

  bool operator==(const ScenarioConfig&) const = default;
};

// Presets: binary, multiclass, hipaa-strict (binary mode, all six filters
// off), name-only (per_entity on name). Throws on unknown names.
ScenarioConfig scenario_preset(std::string_view name);

// Protected-entity attributes of one annotation, matched against the
// ScenarioConfig include_* switches.
struct ScenarioFlags {
  bool profession = false;
  bool age_under_90 = false;
  bool nonpatient_name = false;
  bool large_geo = false;
  bool lone_year = false;
  bool organization = false;
};

// Derives attributes where possible: lone_year = date whose literal is
// exactly four digits; age_under_90 = age literal parsing fully to an
// integer < 90; nonpatient_name by raw label {doctor, hcpname, username};
// large_geo by raw label {country, state}; organization by raw label
// {organization, org}; profession by category or raw label.
ScenarioFlags derive_flags(const Annotation& ann);

// Removes annotations whose flagged attribute is excluded by cfg. Every
// annotation must already carry a canonical category. The two-argument form
// derives flags itself; the three-argument form takes them precomputed
// (flags.size() must equal annotations.size()).
std::vector<Annotation> apply_scenario(
    const std::vector<Annotation>& annotations, const ScenarioConfig& cfg);
std::vector<Annotation> apply_scenario(
    const std::vector<Annotation>& annotations, const ScenarioConfig& cfg,
    const std::vector<ScenarioFlags>& flags);

}  // namespace clipse
