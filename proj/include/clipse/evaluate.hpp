#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clipse/harmonize.hpp"
#include "clipse/tokenize.hpp"
#include "clipse/types.hpp"

namespace clipse {

// A token's label: NONE, one of the seven categories, or the collapsed
// binary PHI class.
struct Label {
  static constexpr int8_t kNone = -1;
  static constexpr int8_t kPhi = kNumCategories;

  int8_t value = kNone;

  static Label none() { return {kNone}; }
  static Label phi() { return {kPhi}; }
  static Label of(Category c) { return {static_cast<int8_t>(c)}; }

  bool is_none() const { return value == kNone; }
  bool is_phi_class() const { return value == kPhi; }

  auto operator<=>(const Label&) const = default;
};

std::string to_string(Label label);
Label label_from_string(std::string_view s);  // throws on unknown

// Token stream of one document plus one label per token. Labels are
// per-category except in binary mode, where they are NONE/PHI.
struct TokenLabeling {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<Label> labels;
  EvalMode mode = EvalMode::binary;
  Category target = Category::name;  // meaningful in per_entity mode

  bool operator==(const TokenLabeling&) const = default;
};

// Assigns each token the category of the annotation overlapping it by >= 1
// code point; when annotations of different categories overlap one token,
// the largest overlap wins, ties broken by earlier annotation start, then by
// category declaration order. Binary mode collapses categories to PHI.
// Annotations must carry categories (harmonize first).
TokenLabeling label_tokens(const std::vector<Token>& tokens,
                           const std::vector<Annotation>& annotations,
                           const ScenarioConfig& cfg,
                           const std::string& doc_id = {});

struct ClassCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;

  bool operator==(const ClassCounts&) const = default;
};

struct ConfusionCounts {
  std::map<Label, ClassCounts> per_class;
  int64_t total_tokens = 0;
  int64_t total_documents = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

// Outcome of comparing one token's gold and predicted labels: which class,
// if any, is credited a true positive or charged a false positive / false
// negative. At most one of each; a multiclass mismatch between two PHI
// classes sets both fn (the gold class) and fp (the predicted class).
struct TokenOutcome {
  std::optional<Label> tp;
  std::optional<Label> fp;
  std::optional<Label> fn;

  bool operator==(const TokenOutcome&) const = default;
};

// The per-token scoring rule, given gold label g and predicted label p:
//   binary      — single PHI class; positive = label not NONE.
//   multiclass  — per category c: tp when g == p == c; a mismatch charges
//                 fn to g's class and fp to p's class.
//   per_entity  — single target class; tp = gold target token predicted as
//                 any PHI; fn = gold target token predicted NONE; fp = PHI
//                 prediction on a token with no gold PHI at all. Tokens whose
//                 gold is a different PHI category are not scored, so correct
//                 other-category predictions are not punished.
TokenOutcome classify_token(Label gold, Label pred, EvalMode mode,
                            Category target);

// Adds one document's token-level counts to `counts`, applying
// classify_token to every token.
void count_labels(const TokenLabeling& gold, const TokenLabeling& pred,
                  ConfusionCounts& counts);

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double fn_per_1000 = 0;

  bool operator==(const Metrics&) const = default;
};

struct DocCounts {
  std::string doc_id;
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  int64_t tokens = 0;

  bool operator==(const DocCounts&) const = default;
};

struct EvalResult {
  ConfusionCounts counts;
  std::map<Label, Metrics> per_class;
  Metrics micro;  // metrics over counts pooled across classes
  std::vector<DocCounts> per_document;

  bool operator==(const EvalResult&) const = default;
};

// Derives all metrics from counts. Zero-denominator metrics are 0.
// fn_per_1000 = 1000 * fn / total_tokens.
EvalResult compute_metrics(ConfusionCounts counts,
                           std::vector<DocCounts> per_document = {});

// Scores one document's predicted labeling against gold. Token lists and
// modes must match exactly.
EvalResult evaluate_pair(const TokenLabeling& gold, const TokenLabeling& pred);

// Whole-corpus evaluation: resolves categories through `map`, applies the
// scenario filters, labels every document's tokens, pools counts across
// documents (micro-averaging), and derives metrics. `jobs` > 1 labels
// documents in parallel; results are independent of the worker count.
EvalResult evaluate_corpus(const Corpus& corpus,
                           const std::string& gold_annotator,
                           const std::string& pred_annotator,
                           const ScenarioConfig& cfg, Tokenizer tokenizer,
                           const LabelMap& map = builtin_label_map(),
                           int jobs = 1);

struct EntityMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  bool operator==(const EntityMetrics&) const = default;
};

// Exact-cover entity scoring for one document, binary PHI status: a gold
// entity is recalled iff one prediction covers its whole range; a prediction
// is correct iff it lies fully inside some gold entity.
EntityMetrics evaluate_entities(const std::vector<Annotation>& gold,
                                const std::vector<Annotation>& pred);

}  // namespace clipse
