#include "clipse/merge.hpp"

#include <doctest.h>

#include "clipse/evaluate.hpp"
#include "test_support.hpp"

using namespace clipse;

namespace {

// Corpus over one 40-char document with two annotators' spans injected.
Corpus two_annotator_corpus(const std::vector<std::pair<int64_t, int64_t>>& a,
                            const std::vector<std::pair<int64_t, int64_t>>& b,
                            Category cat_a = Category::name,
                            Category cat_b = Category::name) {
  Corpus corpus;
  std::string text = "0123456789abcdefghijklmnopqrstuvwxyzABCD";
  corpus.documents["d"] = {"d", text, "unit", Split::unsplit};
  auto build = [&](const std::vector<std::pair<int64_t, int64_t>>& spans,
                   const std::string& annotator, Category cat) {
    std::vector<Annotation> set;
    for (auto [start, stop] : spans) {
      Annotation ann;
      ann.doc_id = "d";
      ann.start = start;
      ann.stop = stop;
      ann.literal = text.substr(static_cast<size_t>(start),
                                static_cast<size_t>(stop - start));
      ann.raw_label = std::string(to_string(cat));
      ann.category = cat;
      ann.annotator = annotator;
      set.push_back(std::move(ann));
    }
    return set;
  };
  corpus.annotation_sets["A"] = build(a, "A", cat_a);
  corpus.annotation_sets["B"] = build(b, "B", cat_b);
  validate_corpus(corpus);
  return corpus;
}

const std::vector<Annotation>& merged_set(const Corpus& corpus) {
  return corpus.annotation_sets.at("merged");
}

}  // namespace

TEST_CASE("merge strategy parsing") {
  CHECK(merge_strategy_from_string("union").kind ==
        MergeStrategy::Kind::union_recall_max);
  CHECK(merge_strategy_from_string("intersection").kind ==
        MergeStrategy::Kind::intersection);
  MergeStrategy maj = merge_strategy_from_string("majority:2");
  CHECK(maj.kind == MergeStrategy::Kind::majority);
  CHECK(maj.k == 2);
  CHECK_THROWS_AS(merge_strategy_from_string("majority"), Error);
  CHECK_THROWS_AS(merge_strategy_from_string("majority:x"), Error);
  CHECK_THROWS_AS(merge_strategy_from_string("vote"), Error);
}

TEST_CASE("union joins overlapping spans into one interval") {
  Corpus corpus = two_annotator_corpus({{0, 5}}, {{3, 8}});
  Corpus out = merge_annotations(corpus, {"A", "B"},
                                 MergeStrategy::union_recall_max(), "merged");
  REQUIRE(merged_set(out).size() == 1);
  const Annotation& ann = merged_set(out)[0];
  CHECK(ann.start == 0);
  CHECK(ann.stop == 8);
  CHECK(ann.literal == "01234567");
  CHECK(ann.annotator == "merged");
  // Inputs are untouched.
  CHECK(out.annotation_sets.at("A") == corpus.annotation_sets.at("A"));
}

TEST_CASE("union with one empty side equals the other side's coverage") {
  Corpus corpus = two_annotator_corpus({{2, 6}, {10, 14}}, {});
  Corpus out = merge_annotations(corpus, {"A", "B"},
                                 MergeStrategy::union_recall_max(), "merged");
  REQUIRE(merged_set(out).size() == 2);
  CHECK(merged_set(out)[0].start == 2);
  CHECK(merged_set(out)[0].stop == 6);
  CHECK(merged_set(out)[1].start == 10);
  CHECK(merged_set(out)[1].stop == 14);
}

TEST_CASE("intersection keeps positions covered by everyone") {
  Corpus corpus = two_annotator_corpus({{0, 5}}, {{3, 8}});
  Corpus out = merge_annotations(corpus, {"A", "B"},
                                 MergeStrategy::intersection(), "merged");
  REQUIRE(merged_set(out).size() == 1);
  CHECK(merged_set(out)[0].start == 3);
  CHECK(merged_set(out)[0].stop == 5);

  Corpus disjoint = two_annotator_corpus({{0, 4}}, {{6, 9}});
  Corpus none = merge_annotations(disjoint, {"A", "B"},
                                  MergeStrategy::intersection(), "merged");
  CHECK(merged_set(none).empty());
}

TEST_CASE("majority threshold counts distinct annotators per position") {
  Corpus corpus = two_annotator_corpus({{0, 6}, {2, 4}}, {{4, 9}});
  // A covers [0,6) (twice over [2,4), which must count once); B covers [4,9).
  Corpus out = merge_annotations(corpus, {"A", "B"},
                                 MergeStrategy::majority(2), "merged");
  REQUIRE(merged_set(out).size() == 1);
  CHECK(merged_set(out)[0].start == 4);
  CHECK(merged_set(out)[0].stop == 6);
}

TEST_CASE("merged interval takes the plurality category") {
  SUBCASE("clear winner") {
    Corpus corpus = two_annotator_corpus({{0, 5}}, {{3, 9}}, Category::name,
                                         Category::date);
    Corpus out = merge_annotations(
        corpus, {"A", "B"}, MergeStrategy::union_recall_max(), "merged");
    REQUIRE(merged_set(out).size() == 1);
    CHECK(merged_set(out)[0].category == Category::date);  // 6 > 5 positions
    CHECK(merged_set(out)[0].raw_label == "date");
  }
  SUBCASE("exact tie falls back to declaration order") {
    Corpus corpus = two_annotator_corpus({{0, 5}}, {{5, 10}}, Category::date,
                                         Category::name);
    Corpus out = merge_annotations(
        corpus, {"A", "B"}, MergeStrategy::union_recall_max(), "merged");
    REQUIRE(merged_set(out).size() == 1);
    CHECK(merged_set(out)[0].category == Category::name);  // name < date
  }
  SUBCASE("no categorized cover leaves the category unset") {
    Corpus corpus = two_annotator_corpus({{0, 5}}, {{3, 8}});
    for (auto& ann : corpus.annotation_sets["A"]) {
      ann.raw_label = "mystery";
      ann.category.reset();
    }
    for (auto& ann : corpus.annotation_sets["B"]) {
      ann.raw_label = "enigma";
      ann.category.reset();
    }
    Corpus out = merge_annotations(
        corpus, {"A", "B"}, MergeStrategy::union_recall_max(), "merged");
    REQUIRE(merged_set(out).size() == 1);
    CHECK_FALSE(merged_set(out)[0].category.has_value());
    CHECK(merged_set(out)[0].raw_label == "phi");
  }
  SUBCASE("known raw labels vote even without a stored category") {
    Corpus corpus = two_annotator_corpus({{0, 5}}, {{3, 8}});
    for (auto& ann : corpus.annotation_sets["B"]) {
      ann.raw_label = "hospital";  // builtin-mapped to location
      ann.category.reset();
    }
    Corpus out = merge_annotations(
        corpus, {"A", "B"}, MergeStrategy::union_recall_max(), "merged");
    REQUIRE(merged_set(out).size() == 1);
    CHECK(merged_set(out)[0].category == Category::name);  // 5 vs 5 tie
  }
}

TEST_CASE("merge validates its inputs") {
  Corpus corpus = two_annotator_corpus({{0, 5}}, {{3, 8}});
  CHECK_THROWS_WITH_AS(
      merge_annotations(corpus, {"A", "ghost"},
                        MergeStrategy::union_recall_max(), "merged"),
      doctest::Contains("ghost"), Error);
  CHECK_THROWS_AS(merge_annotations(corpus, {"A"},
                                    MergeStrategy::union_recall_max(),
                                    "merged"),
                  Error);
  CHECK_THROWS_AS(merge_annotations(corpus, {"A", "B"},
                                    MergeStrategy::majority(3), "merged"),
                  Error);
  CHECK_THROWS_AS(merge_annotations(corpus, {"A", "B"},
                                    MergeStrategy::majority(0), "merged"),
                  Error);
  CHECK_THROWS_WITH_AS(merge_annotations(corpus, {"A", "B"},
                                         MergeStrategy::union_recall_max(),
                                         "A"),
                       doctest::Contains("already exists"), Error);
}

TEST_CASE("merged output is sorted, non-overlapping, and valid") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus corpus = testsupport::random_corpus(rng(), 6);
    const auto& gold = corpus.annotation_sets.begin()->second;
    corpus.annotation_sets["n1"] = testsupport::degrade(corpus, gold, "n1", rng);
    corpus.annotation_sets["n2"] = testsupport::degrade(corpus, gold, "n2", rng);
    for (const char* strategy : {"union", "intersection", "majority:2"}) {
      Corpus out = merge_annotations(corpus, {"n1", "n2"},
                                     merge_strategy_from_string(strategy),
                                     "merged");
      validate_corpus(out);
      const auto& merged = out.annotation_sets.at("merged");
      for (size_t i = 1; i < merged.size(); ++i) {
        if (merged[i - 1].doc_id == merged[i].doc_id) {
          CHECK(merged[i - 1].stop < merged[i].start);  // maximal runs
        }
      }
    }
  }
}

TEST_CASE("union binary recall is at least each input's recall") {
  std::mt19937_64 rng(616);
  ScenarioConfig cfg = scenario_preset("binary");
  int checked = 0;
  for (int trial = 0; trial < 15; ++trial) {
    Corpus corpus = testsupport::random_corpus(rng(), 5);
    if (!corpus.annotation_sets.count("gold")) continue;
    const auto& gold = corpus.annotation_sets.at("gold");
    corpus.annotation_sets["n1"] = testsupport::degrade(corpus, gold, "n1", rng);
    corpus.annotation_sets["n2"] = testsupport::degrade(corpus, gold, "n2", rng);
    Corpus out = merge_annotations(corpus, {"n1", "n2"},
                                   MergeStrategy::union_recall_max(), "merged");
    auto recall_counts = [&](const std::string& pred) {
      EvalResult r = evaluate_corpus(out, "gold", pred, cfg,
                                     get_tokenizer("wordpunct"));
      const auto& phi = r.counts.per_class[Label::phi()];
      return std::pair<int64_t, int64_t>(phi.tp, phi.tp + phi.fn);
    };
    auto [tp_m, gold_m] = recall_counts("merged");
    auto [tp_1, gold_1] = recall_counts("n1");
    auto [tp_2, gold_2] = recall_counts("n2");
    // Same gold everywhere, so comparing tp compares recall exactly.
    CHECK(gold_m == gold_1);
    CHECK(gold_m == gold_2);
    CHECK(tp_m >= tp_1);
    CHECK(tp_m >= tp_2);
    ++checked;
  }
  CHECK(checked > 5);
}
