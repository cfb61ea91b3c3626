#include "clipse/harmonize.hpp"

#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "test_support.hpp"

using namespace clipse;

namespace {

Annotation make_ann(std::string raw_label, std::optional<Category> cat,
                    std::string literal = "x") {
  Annotation ann;
  ann.doc_id = "d";
  ann.start = 0;
  ann.stop = 1;
  ann.literal = std::move(literal);
  ann.raw_label = std::move(raw_label);
  ann.category = cat;
  ann.annotator = "gold";
  return ann;
}

}  // namespace

TEST_CASE("builtin map covers the common corpus subtype labels") {
  LabelMap map = builtin_label_map();
  // Frozen (label, category) pairs for every subtype the common datasets use.
  const std::vector<std::pair<std::string, Category>> expected = {
      {"name", Category::name},
      {"doctor", Category::name},
      {"patient", Category::name},
      {"username", Category::name},
      {"hcpname", Category::name},
      {"relativeproxyname", Category::name},
      {"ptname", Category::name},
      {"ptnameinitial", Category::name},
      {"misc", Category::name},
      {"profession", Category::profession},
      {"location", Category::location},
      {"loc", Category::location},
      {"department", Category::location},
      {"hospital", Category::location},
      {"organization", Category::location},
      {"org", Category::location},
      {"street", Category::location},
      {"state", Category::location},
      {"city", Category::location},
      {"country", Category::location},
      {"zip", Category::location},
      {"location-other", Category::location},
      {"age", Category::age},
      {"date", Category::date},
      {"dateyear", Category::date},
      {"time", Category::date},
      {"id", Category::id},
      {"idnum", Category::id},
      {"medicalrecord", Category::id},
      {"medicalrecordnumber", Category::id},
      {"device", Category::id},
      {"other", Category::id},
      {"contact", Category::contact},
      {"phone", Category::contact},
      {"fax", Category::contact},
      {"email", Category::contact},
  };
  for (const auto& [raw, cat] : expected) {
    CAPTURE(raw);
    MappedLabel got = map_label(map, raw);
    CHECK(got.disposition == LabelDisposition::mapped);
    CHECK(got.category == cat);
  }
}

TEST_CASE("map_label folds case") {
  LabelMap map = builtin_label_map();
  CHECK(map_label(map, "DOCTOR").category == Category::name);
  CHECK(map_label(map, "MedicalRecord").category == Category::id);
  CHECK(map_label(map, "Date").category == Category::date);
}

TEST_CASE("canonical names map to themselves under any rule set") {
  LabelMap empty;  // no rules, policy error
  for (int c = 0; c < kNumCategories; ++c) {
    auto cat = static_cast<Category>(c);
    MappedLabel got = map_label(empty, to_string(cat));
    CHECK(got.disposition == LabelDisposition::mapped);
    CHECK(got.category == cat);
  }
  // Idempotence through a full harmonize pass, too.
  LabelMap builtin = builtin_label_map();
  auto once = map_label(builtin, "hcpname");
  auto twice = map_label(builtin, to_string(*once.category));
  CHECK(twice.category == once.category);
}

TEST_CASE("unknown labels follow the configured policy") {
  LabelMap map;
  map.unknown_policy = LabelMap::UnknownPolicy::error;
  CHECK_THROWS_WITH_AS(map_label(map, "mystery"), doctest::Contains("mystery"),
                       Error);

  map.unknown_policy = LabelMap::UnknownPolicy::drop;
  CHECK(map_label(map, "mystery").disposition == LabelDisposition::dropped);

  map.unknown_policy = LabelMap::UnknownPolicy::pass_as_is;
  MappedLabel passed = map_label(map, "mystery");
  CHECK(passed.disposition == LabelDisposition::passed);
  CHECK_FALSE(passed.category.has_value());
}

TEST_CASE("harmonize_annotations applies dispositions") {
  LabelMap map = builtin_label_map();
  map.unknown_policy = LabelMap::UnknownPolicy::drop;
  std::vector<Annotation> anns = {make_ann("DOCTOR", std::nullopt),
                                  make_ann("gibberish", std::nullopt),
                                  make_ann("zip", std::nullopt)};
  auto out = harmonize_annotations(anns, map);
  REQUIRE(out.size() == 2);
  CHECK(out[0].category == Category::name);
  CHECK(out[0].raw_label == "DOCTOR");  // raw label preserved
  CHECK(out[1].category == Category::location);

  map.unknown_policy = LabelMap::UnknownPolicy::pass_as_is;
  out = harmonize_annotations(anns, map);
  REQUIRE(out.size() == 3);
  CHECK_FALSE(out[1].category.has_value());
}

TEST_CASE("label map TSV loading") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "clipse_harmonize_tests";
  fs::create_directories(dir);
  fs::path good = dir / "map.tsv";
  std::ofstream(good) << "raw_label\tcategory\n"
                      << "Occupation\tprofession\n"
                      << "pager\tcontact\n";
  LabelMap map = load_label_map(good);
  CHECK(map_label(map, "OCCUPATION").category == Category::profession);
  CHECK(map_label(map, "pager").category == Category::contact);

  fs::path bad_header = dir / "bad_header.tsv";
  std::ofstream(bad_header) << "label\tcategory\nx\tname\n";
  CHECK_THROWS_AS(load_label_map(bad_header), Error);

  fs::path bad_cat = dir / "bad_cat.tsv";
  std::ofstream(bad_cat) << "raw_label\tcategory\nx\tnonsense\n";
  CHECK_THROWS_WITH_AS(load_label_map(bad_cat), doctest::Contains("nonsense"),
                       Error);
}

TEST_CASE("derive_flags computes the six protected-entity attributes") {
  // lone year: a date whose literal is exactly four digits
  CHECK(derive_flags(make_ann("date", Category::date, "1998")).lone_year);
  CHECK_FALSE(
      derive_flags(make_ann("date", Category::date, "03/1998")).lone_year);
  CHECK_FALSE(derive_flags(make_ann("idnum", Category::id, "1998")).lone_year);

  // ages under 90 by literal value
  CHECK(derive_flags(make_ann("age", Category::age, "89")).age_under_90);
  CHECK_FALSE(derive_flags(make_ann("age", Category::age, "90")).age_under_90);
  CHECK_FALSE(
      derive_flags(make_ann("age", Category::age, "102")).age_under_90);
  CHECK_FALSE(
      derive_flags(make_ann("age", Category::age, "89 years")).age_under_90);

  // non-patient names by raw label; patient labels never flagged
  CHECK(derive_flags(make_ann("doctor", Category::name)).nonpatient_name);
  CHECK(derive_flags(make_ann("HCPName", Category::name)).nonpatient_name);
  CHECK(derive_flags(make_ann("username", Category::name)).nonpatient_name);
  CHECK_FALSE(derive_flags(make_ann("patient", Category::name)).nonpatient_name);
  CHECK_FALSE(derive_flags(make_ann("ptname", Category::name)).nonpatient_name);
  CHECK_FALSE(derive_flags(make_ann("name", Category::name)).nonpatient_name);

  // large-granularity geography by raw label
  CHECK(derive_flags(make_ann("country", Category::location)).large_geo);
  CHECK(derive_flags(make_ann("state", Category::location)).large_geo);
  CHECK_FALSE(derive_flags(make_ann("city", Category::location)).large_geo);

  // organizations
  CHECK(derive_flags(make_ann("organization", Category::location)).organization);
  CHECK(derive_flags(make_ann("org", Category::location)).organization);
  CHECK_FALSE(derive_flags(make_ann("hospital", Category::location)).organization);

  // professions by category or raw label
  CHECK(derive_flags(make_ann("profession", Category::profession)).profession);
  CHECK(derive_flags(make_ann("job", Category::profession)).profession);
  CHECK_FALSE(derive_flags(make_ann("name", Category::name)).profession);
}

TEST_CASE("scenario presets") {
  ScenarioConfig binary = scenario_preset("binary");
  CHECK(binary.mode == EvalMode::binary);
  CHECK(binary.include_profession);
  CHECK(binary == ScenarioConfig{});

  ScenarioConfig multi = scenario_preset("multiclass");
  CHECK(multi.mode == EvalMode::multiclass);

  ScenarioConfig strict = scenario_preset("hipaa-strict");
  CHECK(strict.mode == EvalMode::binary);
  CHECK_FALSE(strict.include_profession);
  CHECK_FALSE(strict.include_age_under_90);
  CHECK_FALSE(strict.include_nonpatient_names);
  CHECK_FALSE(strict.include_large_geo);
  CHECK_FALSE(strict.include_lone_year);
  CHECK_FALSE(strict.include_organization);

  ScenarioConfig name_only = scenario_preset("name-only");
  CHECK(name_only.mode == EvalMode::per_entity);
  CHECK(name_only.target == Category::name);

  CHECK_THROWS_AS(scenario_preset("strict"), Error);
}

TEST_CASE("apply_scenario filters exactly the excluded attributes") {
  std::vector<Annotation> anns = {
      make_ann("profession", Category::profession, "chef"),
      make_ann("age", Category::age, "45"),
      make_ann("doctor", Category::name, "Smith"),
      make_ann("country", Category::location, "France"),
      make_ann("date", Category::date, "2019"),
      make_ann("org", Category::location, "Acme"),
  };

  SUBCASE("single flag off removes only its annotations") {
    ScenarioConfig cfg;  // all include
    cfg.include_profession = false;
    auto out = apply_scenario(anns, cfg);
    REQUIRE(out.size() == 5);
    CHECK(out[0].raw_label == "age");
  }

  SUBCASE("all flags on is the identity") {
    CHECK(apply_scenario(anns, ScenarioConfig{}) == anns);
  }

  SUBCASE("hipaa-strict removes one annotation per flag") {
    auto out = apply_scenario(anns, scenario_preset("hipaa-strict"));
    CHECK(out.empty());
  }

  SUBCASE("survivors: unflagged annotations always pass") {
    std::vector<Annotation> extra = anns;
    extra.push_back(make_ann("patient", Category::name, "Jones"));
    extra.push_back(make_ann("age", Category::age, "91"));
    extra.push_back(make_ann("date", Category::date, "01/02/2019"));
    auto out = apply_scenario(extra, scenario_preset("hipaa-strict"));
    REQUIRE(out.size() == 3);
    CHECK(out[0].raw_label == "patient");
    CHECK(out[1].raw_label == "age");
    CHECK(out[2].raw_label == "date");
  }
}

TEST_CASE("apply_scenario requires harmonized categories") {
  std::vector<Annotation> anns = {make_ann("date", std::nullopt, "2019")};
  CHECK_THROWS_WITH_AS(apply_scenario(anns, ScenarioConfig{}),
                       doctest::Contains("category"), Error);
}

TEST_CASE("relaxing a flag never removes a previous survivor") {
  std::mt19937_64 rng(4242);
  LabelMap builtin = builtin_label_map();
  builtin.unknown_policy = LabelMap::UnknownPolicy::pass_as_is;
  for (int trial = 0; trial < 50; ++trial) {
    Corpus corpus = testsupport::random_corpus(rng(), 5);
    for (const auto& [annotator, set] : corpus.annotation_sets) {
      // Harmonize, then drop anything the builtin map does not know.
      std::vector<Annotation> anns;
      for (const auto& ann : harmonize_annotations(set, builtin)) {
        if (ann.category) anns.push_back(ann);
      }
      ScenarioConfig tight = scenario_preset("hipaa-strict");
      std::uniform_int_distribution<int> coin(0, 1);
      tight.include_profession = coin(rng);
      tight.include_age_under_90 = coin(rng);
      tight.include_lone_year = coin(rng);

      ScenarioConfig relaxed = tight;
      relaxed.include_nonpatient_names = true;
      relaxed.include_large_geo = coin(rng) || tight.include_large_geo;

      auto tight_out = apply_scenario(anns, tight);
      auto relaxed_out = apply_scenario(anns, relaxed);
      // Every survivor of the tighter scenario survives the relaxed one.
      for (const auto& ann : tight_out) {
        CHECK(std::find(relaxed_out.begin(), relaxed_out.end(), ann) !=
              relaxed_out.end());
      }
    }
  }
}
