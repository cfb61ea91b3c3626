#include "clipse/evaluate.hpp"

#include <doctest.h>

#include "test_support.hpp"

using namespace clipse;

namespace {

Annotation span(int64_t start, int64_t stop, Category cat,
                std::string doc_id = "d", std::string raw_label = "") {
  Annotation ann;
  ann.doc_id = std::move(doc_id);
  ann.start = start;
  ann.stop = stop;
  ann.literal = std::string(static_cast<size_t>(stop - start), 'x');
  ann.raw_label = raw_label.empty() ? std::string(to_string(cat)) : raw_label;
  ann.category = cat;
  ann.annotator = "gold";
  return ann;
}

// Tokens at (0,2),(3,5),(6,8),... : "t0 t1 t2 ...".
std::vector<Token> uniform_tokens(int n) {
  std::vector<Token> tokens;
  for (int i = 0; i < n; ++i) {
    int64_t start = 3 * i;
    tokens.push_back({start, start + 2, "t" + std::to_string(i % 10)});
  }
  return tokens;
}

ScenarioConfig multiclass() { return scenario_preset("multiclass"); }

}  // namespace

TEST_CASE("label strings round trip") {
  CHECK(to_string(Label::none()) == "NONE");
  CHECK(to_string(Label::phi()) == "PHI");
  CHECK(to_string(Label::of(Category::date)) == "date");
  CHECK(label_from_string("PHI") == Label::phi());
  CHECK(label_from_string("age") == Label::of(Category::age));
  CHECK_THROWS_AS(label_from_string("bogus"), Error);
}

TEST_CASE("label_tokens applies the overlap rule") {
  std::vector<Token> one_token = {{5, 10, "xxxxx"}};

  SUBCASE("one code point of overlap is enough") {
    auto labeling =
        label_tokens(one_token, {span(0, 6, Category::name)}, multiclass());
    CHECK(labeling.labels[0] == Label::of(Category::name));
  }
  SUBCASE("no annotations means NONE") {
    auto labeling = label_tokens(one_token, {}, multiclass());
    CHECK(labeling.labels[0] == Label::none());
  }
  SUBCASE("adjacent annotation does not overlap") {
    auto labeling =
        label_tokens(one_token, {span(0, 5, Category::name)}, multiclass());
    CHECK(labeling.labels[0] == Label::none());
  }
  SUBCASE("largest overlap wins") {
    // date overlaps tokens [5,8) = 3 points, id overlaps [8,10) = 2.
    auto labeling = label_tokens(
        one_token, {span(8, 10, Category::id), span(2, 8, Category::date)},
        multiclass());
    CHECK(labeling.labels[0] == Label::of(Category::date));
  }
  SUBCASE("overlap ties break by earlier start") {
    auto labeling = label_tokens(
        one_token, {span(6, 8, Category::id), span(5, 7, Category::contact)},
        multiclass());
    CHECK(labeling.labels[0] == Label::of(Category::contact));
  }
  SUBCASE("full ties break by category order") {
    auto labeling = label_tokens(
        one_token, {span(5, 7, Category::id), span(5, 7, Category::date)},
        multiclass());
    CHECK(labeling.labels[0] == Label::of(Category::date));  // date < id
  }
  SUBCASE("binary mode collapses to PHI") {
    auto labeling = label_tokens(one_token, {span(0, 6, Category::name)},
                                 scenario_preset("binary"));
    CHECK(labeling.labels[0] == Label::phi());
  }
  SUBCASE("uncategorized annotations are rejected") {
    Annotation raw = span(0, 6, Category::name);
    raw.category.reset();
    CHECK_THROWS_WITH_AS(label_tokens(one_token, {raw}, multiclass()),
                         doctest::Contains("category"), Error);
  }
}

TEST_CASE("evaluate_pair counts and metrics") {
  auto tokens = uniform_tokens(10);
  ScenarioConfig cfg = scenario_preset("binary");

  SUBCASE("worked 10-token example") {
    // gold marks tokens 2,3; pred marks tokens 3,4.
    TokenLabeling gold = label_tokens(
        tokens, {span(6, 8, Category::name), span(9, 11, Category::name)},
        cfg);
    TokenLabeling pred = label_tokens(
        tokens, {span(9, 11, Category::name), span(12, 14, Category::name)},
        cfg);
    EvalResult r = evaluate_pair(gold, pred);
    const auto& phi = r.counts.per_class.at(Label::phi());
    CHECK(phi.tp == 1);
    CHECK(phi.fp == 1);
    CHECK(phi.fn == 1);
    CHECK(r.micro.precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.micro.recall == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.micro.f1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.micro.fn_per_1000 == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(r.counts.total_tokens == 10);
  }
  SUBCASE("identical labelings are perfect") {
    TokenLabeling gold =
        label_tokens(tokens, {span(0, 5, Category::date)}, cfg);
    EvalResult r = evaluate_pair(gold, gold);
    CHECK(r.micro.precision == 1.0);
    CHECK(r.micro.recall == 1.0);
    CHECK(r.micro.f1 == 1.0);
    CHECK(r.micro.fn_per_1000 == 0.0);
  }
  SUBCASE("empty prediction yields zeros, not NaN") {
    TokenLabeling gold =
        label_tokens(tokens, {span(0, 5, Category::date)}, cfg);
    TokenLabeling pred = label_tokens(tokens, {}, cfg);
    EvalResult r = evaluate_pair(gold, pred);
    CHECK(r.micro.precision == 0.0);
    CHECK(r.micro.recall == 0.0);
    CHECK(r.micro.f1 == 0.0);
  }
  SUBCASE("mismatched token lists are rejected") {
    TokenLabeling gold = label_tokens(tokens, {}, cfg);
    TokenLabeling pred = label_tokens(uniform_tokens(9), {}, cfg);
    CHECK_THROWS_AS(evaluate_pair(gold, pred), Error);
  }
}

TEST_CASE("multiclass mismatches charge both classes") {
  auto tokens = uniform_tokens(3);
  TokenLabeling gold =
      label_tokens(tokens, {span(0, 2, Category::name)}, multiclass());
  TokenLabeling pred =
      label_tokens(tokens, {span(0, 2, Category::date)}, multiclass());
  EvalResult r = evaluate_pair(gold, pred);
  CHECK(r.counts.per_class.at(Label::of(Category::name)).fn == 1);
  CHECK(r.counts.per_class.at(Label::of(Category::date)).fp == 1);
  CHECK(r.micro.precision == 0.0);
  CHECK(r.micro.recall == 0.0);
}

TEST_CASE("per-entity mode scores any-PHI predictions on target tokens") {
  auto tokens = uniform_tokens(5);
  ScenarioConfig cfg = scenario_preset("name-only");
  // gold: token0 name, token1 date, rest NONE.
  TokenLabeling gold = label_tokens(
      tokens, {span(0, 2, Category::name), span(3, 5, Category::date)}, cfg);
  // pred: token0 tagged as date (wrong class, still PHI), token1 date,
  // token2 spurious PHI.
  TokenLabeling pred = label_tokens(
      tokens,
      {span(0, 2, Category::date), span(3, 5, Category::date),
       span(6, 8, Category::id)},
      cfg);
  EvalResult r = evaluate_pair(gold, pred);
  const auto& name = r.counts.per_class.at(Label::of(Category::name));
  CHECK(name.tp == 1);  // any-PHI on a gold name token counts
  CHECK(name.fn == 0);
  CHECK(name.fp == 1);  // spurious PHI on a clean token
  REQUIRE(r.counts.per_class.size() == 1);

  // Missed name token becomes fn.
  TokenLabeling nothing = label_tokens(tokens, {}, cfg);
  EvalResult miss = evaluate_pair(gold, nothing);
  CHECK(miss.counts.per_class.at(Label::of(Category::name)).fn == 1);
  CHECK(miss.counts.per_class.at(Label::of(Category::name)).tp == 0);
}

TEST_CASE("evaluate_corpus pools counts across documents") {
  Corpus corpus;
  corpus.documents["a"] = {"a", "t0 t1 t2 t3", "unit", Split::unsplit};
  corpus.documents["b"] = {"b", "u0 u1 u2 u3 u4 u5", "unit", Split::unsplit};
  // doc a: gold tokens {0,1}, pred {0}        -> tp=1 fp=0 fn=1
  // doc b: gold tokens {0,1,2}, pred {0..4}   -> tp=3 fp=2 fn=0
  corpus.annotation_sets["gold"] = {
      span(0, 5, Category::name, "a"),
      span(0, 8, Category::name, "b"),
  };
  corpus.annotation_sets["model"] = {
      span(0, 2, Category::name, "a"),
      span(0, 14, Category::name, "b"),
  };
  for (auto& [annotator, set] : corpus.annotation_sets) {
    for (auto& ann : set) {
      ann.annotator = annotator;
      // Rebuild literals so the corpus is valid against the real text.
      const auto& text = corpus.documents[ann.doc_id].text;
      ann.literal = text.substr(static_cast<size_t>(ann.start),
                                static_cast<size_t>(ann.stop - ann.start));
    }
  }
  validate_corpus(corpus);

  EvalResult r =
      evaluate_corpus(corpus, "gold", "model", scenario_preset("binary"),
                      get_tokenizer("wordpunct"));
  const auto& phi = r.counts.per_class.at(Label::phi());
  CHECK(phi.tp == 4);
  CHECK(phi.fp == 2);
  CHECK(phi.fn == 1);
  CHECK(r.micro.precision == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
  CHECK(r.micro.recall == doctest::Approx(4.0 / 5.0).epsilon(1e-12));
  CHECK(r.counts.total_tokens == 10);
  CHECK(r.counts.total_documents == 2);
  CHECK(r.micro.fn_per_1000 == doctest::Approx(100.0).epsilon(1e-12));

  REQUIRE(r.per_document.size() == 2);
  CHECK(r.per_document[0] == DocCounts{"a", 1, 0, 1, 4});
  CHECK(r.per_document[1] == DocCounts{"b", 3, 2, 0, 6});

  SUBCASE("missing annotator names the culprit") {
    CHECK_THROWS_WITH_AS(
        evaluate_corpus(corpus, "gold", "absent", scenario_preset("binary"),
                        get_tokenizer("wordpunct")),
        doctest::Contains("absent"), Error);
  }
  SUBCASE("empty corpus is an error") {
    Corpus empty;
    empty.annotation_sets["gold"] = {};
    empty.annotation_sets["model"] = {};
    CHECK_THROWS_AS(evaluate_corpus(empty, "gold", "model",
                                    scenario_preset("binary"),
                                    get_tokenizer("wordpunct")),
                    Error);
  }
}

TEST_CASE("gold versus gold is perfect under every preset") {
  for (uint64_t seed : {11u, 12u, 13u}) {
    Corpus corpus = testsupport::random_corpus(seed, 6);
    for (const char* preset :
         {"binary", "multiclass", "hipaa-strict", "name-only"}) {
      CAPTURE(seed);
      CAPTURE(preset);
      EvalResult r = evaluate_corpus(corpus, "gold", "gold",
                                     scenario_preset(preset),
                                     get_tokenizer("wordpunct"));
      int64_t positives = 0;
      for (const auto& [label, c] : r.counts.per_class) {
        positives += c.tp;
        CHECK(c.fp == 0);
        CHECK(c.fn == 0);
      }
      if (positives > 0) {
        CHECK(r.micro.precision == 1.0);
        CHECK(r.micro.recall == 1.0);
        CHECK(r.micro.f1 == 1.0);
      }
      CHECK(r.micro.fn_per_1000 == 0.0);
    }
  }
}

TEST_CASE("class count identities hold on random corpora") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    Corpus corpus = testsupport::random_corpus(rng(), 8);
    if (corpus.annotation_sets.size() < 2) continue;
    auto it = corpus.annotation_sets.begin();
    std::string gold = it->first;
    std::string pred = std::next(it)->first;
    ScenarioConfig cfg = multiclass();
    EvalResult r = evaluate_corpus(corpus, gold, pred, cfg,
                                   get_tokenizer("wordpunct"));

    // Recompute gold/pred per-class token totals directly.
    std::map<Label, int64_t> gold_tokens, pred_tokens;
    LabelMap map = builtin_label_map();
    for (const auto& [id, doc] : corpus.documents) {
      auto tokens = tokenize_wordpunct(doc.text);
      auto collect = [&](const std::string& annotator,
                         std::map<Label, int64_t>& totals) {
        std::vector<Annotation> doc_anns;
        for (const auto& ann : corpus.annotation_sets.at(annotator)) {
          if (ann.doc_id == id) doc_anns.push_back(ann);
        }
        auto labeling = label_tokens(
            tokens, apply_scenario(resolve_categories(doc_anns, map), cfg),
            cfg, id);
        for (Label l : labeling.labels) {
          if (!l.is_none()) ++totals[l];
        }
      };
      collect(gold, gold_tokens);
      collect(pred, pred_tokens);
    }
    for (const auto& [label, c] : r.counts.per_class) {
      CHECK(c.tp + c.fn == gold_tokens[label]);
      CHECK(c.tp + c.fp == pred_tokens[label]);
    }
  }
}

TEST_CASE("evaluation is independent of the worker count") {
  Corpus corpus = testsupport::random_corpus(31337, 12);
  if (corpus.annotation_sets.size() < 2) {
    corpus.annotation_sets["alpha"] = corpus.annotation_sets.begin()->second;
    for (auto& ann : corpus.annotation_sets["alpha"]) ann.annotator = "alpha";
  }
  auto it = corpus.annotation_sets.begin();
  std::string gold = it->first;
  std::string pred = std::next(it)->first;
  for (const char* preset : {"binary", "multiclass"}) {
    EvalResult serial =
        evaluate_corpus(corpus, gold, pred, scenario_preset(preset),
                        get_tokenizer("wordpunct"), builtin_label_map(), 1);
    EvalResult parallel =
        evaluate_corpus(corpus, gold, pred, scenario_preset(preset),
                        get_tokenizer("wordpunct"), builtin_label_map(), 4);
    CHECK(serial == parallel);
  }
}

TEST_CASE("entity-level exact cover scoring") {
  std::vector<Annotation> gold = {span(0, 5, Category::name),
                                  span(10, 14, Category::date)};

  SUBCASE("exact equality is perfect") {
    EntityMetrics m = evaluate_entities(gold, gold);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
  SUBCASE("half coverage misses the gold entity") {
    std::vector<Annotation> pred = {span(0, 3, Category::name)};
    EntityMetrics m = evaluate_entities(gold, pred);
    CHECK(m.recall == 0.0);
    CHECK(m.precision == 1.0);  // the prediction lies inside a gold span
  }
  SUBCASE("overshooting prediction recalls gold but is itself wrong") {
    std::vector<Annotation> pred = {span(0, 7, Category::name)};
    EntityMetrics m = evaluate_entities(gold, pred);
    CHECK(m.recall == doctest::Approx(0.5));
    CHECK(m.precision == 0.0);
  }
  SUBCASE("empty sides give zero metrics") {
    EntityMetrics m = evaluate_entities(gold, {});
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
  }
}
