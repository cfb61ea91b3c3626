#include "clipse/detach.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "clipse/unicode.hpp"
#include "test_support.hpp"

using namespace clipse;
namespace fs = std::filesystem;

namespace {

Corpus five_token_corpus() {
  Corpus corpus;
  corpus.documents["d"] = {"d", "Ann saw MRN 12345 today", "unit",
                           Split::unsplit};
  Annotation gold{"d", 0, 3, "Ann", "name", Category::name, "gold"};
  Annotation gold2{"d", 12, 17, "12345", "medicalrecord", Category::id,
                   "gold"};
  Annotation pred{"d", 12, 17, "12345", "idnum", Category::id, "model"};
  corpus.annotation_sets["gold"] = {gold, gold2};
  corpus.annotation_sets["model"] = {pred};
  validate_corpus(corpus);
  return corpus;
}

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "clipse_detach_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("detached corpus stores offsets and aligned labels, no text") {
  Corpus corpus = five_token_corpus();
  ScenarioConfig cfg = scenario_preset("multiclass");
  DetachedCorpus d =
      detach_corpus(corpus, {"gold", "model"}, cfg, "wordpunct");

  REQUIRE(d.docs.count("d") == 1);
  const DetachedDoc& dd = d.docs.at("d");
  REQUIRE(dd.offsets.size() == 5);  // Ann saw MRN 12345 today
  REQUIRE(dd.labels.at("gold").size() == 5);
  REQUIRE(dd.labels.at("model").size() == 5);
  CHECK(dd.labels.at("gold")[0] == Label::of(Category::name));
  CHECK(dd.labels.at("gold")[3] == Label::of(Category::id));
  CHECK(dd.labels.at("model")[0] == Label::none());
  CHECK(dd.labels.at("model")[3] == Label::of(Category::id));
  CHECK(d.tokenizer == "wordpunct");
  CHECK(d.mode == EvalMode::multiclass);
  CHECK_FALSE(d.fingerprint.empty());
}

TEST_CASE("detach validates annotators and tokenizer") {
  Corpus corpus = five_token_corpus();
  ScenarioConfig cfg;
  CHECK_THROWS_WITH_AS(detach_corpus(corpus, {"ghost"}, cfg, "wordpunct"),
                       doctest::Contains("ghost"), Error);
  CHECK_THROWS_AS(detach_corpus(corpus, {"gold"}, cfg, "bert"), Error);
}

TEST_CASE("empty corpus detaches to an empty artifact") {
  Corpus corpus;
  DetachedCorpus d = detach_corpus(corpus, {}, ScenarioConfig{}, "wordpunct");
  CHECK(d.docs.empty());
  CHECK_THROWS_AS(evaluate_detached(d, "gold", "model"), Error);
}

TEST_CASE("detached evaluation equals full evaluation") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 8; ++trial) {
    Corpus corpus = testsupport::random_corpus(rng(), 8);
    if (!corpus.annotation_sets.count("gold")) continue;
    std::string pred = corpus.annotation_sets.size() > 1
                           ? std::next(corpus.annotation_sets.begin())->first
                           : "gold";
    for (const char* preset :
         {"binary", "multiclass", "hipaa-strict", "name-only"}) {
      CAPTURE(trial);
      CAPTURE(preset);
      ScenarioConfig cfg = scenario_preset(preset);
      EvalResult full = evaluate_corpus(corpus, "gold", pred, cfg,
                                        get_tokenizer("wordpunct"));
      DetachedCorpus d =
          detach_corpus(corpus, {"gold", pred}, cfg, "wordpunct");
      EvalResult detached = evaluate_detached(d, "gold", pred);
      CHECK(detached == full);
    }
  }
}

TEST_CASE("gold versus gold on detached labels is perfect") {
  Corpus corpus = five_token_corpus();
  DetachedCorpus d = detach_corpus(corpus, {"gold"},
                                   scenario_preset("binary"), "wordpunct");
  EvalResult r = evaluate_detached(d, "gold", "gold");
  CHECK(r.micro.precision == 1.0);
  CHECK(r.micro.recall == 1.0);
  CHECK(r.micro.fn_per_1000 == 0.0);
}

TEST_CASE("fingerprint changes with any configuration ingredient") {
  LabelMap map = builtin_label_map();
  ScenarioConfig cfg = scenario_preset("binary");
  std::string base = scenario_fingerprint("wordpunct", cfg, map);
  CHECK(base == scenario_fingerprint("wordpunct", cfg, map));  // stable

  CHECK(scenario_fingerprint("whitespace", cfg, map) != base);

  ScenarioConfig multi = scenario_preset("multiclass");
  CHECK(scenario_fingerprint("wordpunct", multi, map) != base);

  ScenarioConfig flag = cfg;
  flag.include_lone_year = false;
  CHECK(scenario_fingerprint("wordpunct", flag, map) != base);

  LabelMap extended = builtin_label_map();
  extended.rules.emplace("pager", Category::contact);
  CHECK(scenario_fingerprint("wordpunct", cfg, extended) != base);

  // per-entity targets are part of the hash
  ScenarioConfig name_only = scenario_preset("name-only");
  ScenarioConfig date_only = name_only;
  date_only.target = Category::date;
  CHECK(scenario_fingerprint("wordpunct", name_only, map) !=
        scenario_fingerprint("wordpunct", date_only, map));
}

TEST_CASE("detached JSONL round trips") {
  Corpus corpus = testsupport::random_corpus(99, 6);
  std::vector<std::string> annotators;
  for (const auto& [annotator, set] : corpus.annotation_sets) {
    annotators.push_back(annotator);
  }
  DetachedCorpus d = detach_corpus(corpus, annotators,
                                   scenario_preset("multiclass"), "wordpunct");
  fs::path path = temp_file("roundtrip.jsonl");
  write_detached(d, path);
  CHECK(read_detached(path) == d);
}

TEST_CASE("serialized artifact leaks no document text") {
  Corpus corpus = testsupport::random_corpus(123, 10);
  std::vector<std::string> annotators;
  for (const auto& [annotator, set] : corpus.annotation_sets) {
    annotators.push_back(annotator);
  }
  DetachedCorpus d = detach_corpus(corpus, annotators,
                                   scenario_preset("binary"), "wordpunct");
  fs::path path = temp_file("leakcheck.jsonl");
  write_detached(d, path);

  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string serialized = buffer.str();
  for (const auto& [annotator, set] : corpus.annotation_sets) {
    for (const auto& ann : set) {
      // Alphabetic literals of useful length must not appear; short or
      // digit-only literals collide with offsets and label names by chance.
      bool has_letter = false;
      for (char c : ann.literal) {
        if (std::isalpha(static_cast<unsigned char>(c)) || (c & 0x80)) {
          has_letter = true;
        }
      }
      if (!has_letter || uni::count_code_points(ann.literal) < 4) continue;
      if (ann.literal == "NONE" || ann.literal == "PHI") continue;
      CAPTURE(ann.literal);
      CHECK(serialized.find(ann.literal) == std::string::npos);
    }
  }
}

TEST_CASE("reading mixed fingerprints fails") {
  Corpus corpus = five_token_corpus();
  DetachedCorpus a = detach_corpus(corpus, {"gold"},
                                   scenario_preset("binary"), "wordpunct");
  DetachedCorpus b = detach_corpus(corpus, {"gold"},
                                   scenario_preset("binary"), "whitespace");
  fs::path pa = temp_file("a.jsonl");
  fs::path pb = temp_file("b.jsonl");
  write_detached(a, pa);
  write_detached(b, pb);

  // Staple the two artifacts together (with distinct doc ids).
  fs::path mixed = temp_file("mixed.jsonl");
  std::ofstream out(mixed);
  std::ifstream ia(pa), ib(pb);
  std::string line;
  while (std::getline(ia, line)) out << line << '\n';
  while (std::getline(ib, line)) {
    auto row = nlohmann::json::parse(line);
    row["doc_id"] = "other";
    out << row.dump() << '\n';
  }
  out.close();
  CHECK_THROWS_WITH_AS(read_detached(mixed),
                       doctest::Contains("fingerprint"), Error);
}

TEST_CASE("missing annotator in detached evaluation names it") {
  Corpus corpus = five_token_corpus();
  DetachedCorpus d = detach_corpus(corpus, {"gold"},
                                   scenario_preset("binary"), "wordpunct");
  CHECK_THROWS_WITH_AS(evaluate_detached(d, "gold", "model"),
                       doctest::Contains("model"), Error);
}
