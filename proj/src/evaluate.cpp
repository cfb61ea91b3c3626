#include "clipse/evaluate.hpp"

#include <algorithm>

#include "clipse/parallel.hpp"

namespace clipse {

std::string to_string(Label label) {
  if (label.is_none()) return "NONE";
  if (label.is_phi_class()) return "PHI";
  return std::string(to_string(static_cast<Category>(label.value)));
}

Label label_from_string(std::string_view s) {
  if (s == "NONE") return Label::none();
  if (s == "PHI") return Label::phi();
  if (auto cat = category_from_string(s)) return Label::of(*cat);
  throw Error("unknown token label '" + std::string(s) + "'");
}

TokenLabeling label_tokens(const std::vector<Token>& tokens,
                           const std::vector<Annotation>& annotations,
                           const ScenarioConfig& cfg,
                           const std::string& doc_id) {
  // Sorted by start so a sliding window over annotations covers each token.
  std::vector<const Annotation*> sorted;
  sorted.reserve(annotations.size());
  for (const auto& ann : annotations) {
    if (!ann.category) {
      throw Error("label_tokens: annotation '" + ann.doc_id +
                  "' has no category; harmonize labels first");
    }
    sorted.push_back(&ann);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Annotation* a, const Annotation* b) {
              return a->start < b->start;
            });

  TokenLabeling out;
  out.doc_id = doc_id;
  out.tokens = tokens;
  out.labels.assign(tokens.size(), Label::none());
  out.mode = cfg.mode;
  out.target = cfg.target;

  size_t window_lo = 0;
  for (size_t t = 0; t < tokens.size(); ++t) {
    const Token& token = tokens[t];
    // Annotations ending at or before this token can never overlap again;
    // token starts are non-decreasing.
    while (window_lo < sorted.size() &&
           sorted[window_lo]->stop <= token.start) {
      ++window_lo;
    }
    const Annotation* best = nullptr;
    int64_t best_overlap = 0;
    for (size_t i = window_lo; i < sorted.size(); ++i) {
      const Annotation* ann = sorted[i];
      if (ann->start >= token.stop) break;
      int64_t overlap = std::min(ann->stop, token.stop) -
                        std::max(ann->start, token.start);
      if (overlap < 1) continue;
      if (!best || overlap > best_overlap ||
          (overlap == best_overlap &&
           (ann->start < best->start ||
            (ann->start == best->start &&
             ann->category < best->category)))) {
        best = ann;
        best_overlap = overlap;
      }
    }
    if (best) {
      out.labels[t] = cfg.mode == EvalMode::binary ? Label::phi()
                                                   : Label::of(*best->category);
    }
  }
  return out;
}

namespace {

void check_comparable(const TokenLabeling& gold, const TokenLabeling& pred) {
  if (gold.doc_id != pred.doc_id) {
    throw Error("token labelings disagree on document: '" + gold.doc_id +
                "' vs '" + pred.doc_id + "'");
  }
  if (gold.tokens != pred.tokens) {
    throw Error("token lists differ for document '" + gold.doc_id +
                "'; both sides must use the same tokenizer and text");
  }
  if (gold.mode != pred.mode || gold.target != pred.target) {
    throw Error("token labelings computed under different scenarios for '" +
                gold.doc_id + "'");
  }
}

double ratio(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Metrics metrics_from(int64_t tp, int64_t fp, int64_t fn,
                     int64_t total_tokens) {
  Metrics m;
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = (m.precision + m.recall) == 0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.fn_per_1000 = total_tokens == 0
                      ? 0.0
                      : 1000.0 * static_cast<double>(fn) /
                            static_cast<double>(total_tokens);
  return m;
}

}  // namespace

TokenOutcome classify_token(Label gold, Label pred, EvalMode mode,
                            Category target) {
  TokenOutcome out;
  switch (mode) {
    case EvalMode::binary: {
      bool g = !gold.is_none();
      bool p = !pred.is_none();
      if (g && p) out.tp = Label::phi();
      else if (!g && p) out.fp = Label::phi();
      else if (g && !p) out.fn = Label::phi();
      break;
    }
    case EvalMode::multiclass: {
      if (gold == pred) {
        if (!gold.is_none()) out.tp = gold;
        break;
      }
      if (!gold.is_none()) out.fn = gold;
      if (!pred.is_none()) out.fp = pred;
      break;
    }
    case EvalMode::per_entity: {
      Label t = Label::of(target);
      if (gold == t) {
        if (!pred.is_none()) out.tp = t;
        else out.fn = t;
      } else if (gold.is_none() && !pred.is_none()) {
        out.fp = t;
      }
      // Tokens whose gold is another PHI category are not scored.
      break;
    }
  }
  return out;
}

void count_labels(const TokenLabeling& gold, const TokenLabeling& pred,
                  ConfusionCounts& counts) {
  check_comparable(gold, pred);
  counts.total_tokens += static_cast<int64_t>(gold.tokens.size());
  counts.total_documents += 1;
  for (size_t i = 0; i < gold.labels.size(); ++i) {
    TokenOutcome o =
        classify_token(gold.labels[i], pred.labels[i], gold.mode, gold.target);
    if (o.tp) ++counts.per_class[*o.tp].tp;
    if (o.fp) ++counts.per_class[*o.fp].fp;
    if (o.fn) ++counts.per_class[*o.fn].fn;
  }
}

EvalResult compute_metrics(ConfusionCounts counts,
                           std::vector<DocCounts> per_document) {
  EvalResult result;
  int64_t tp = 0, fp = 0, fn = 0;
  for (const auto& [label, c] : counts.per_class) {
    result.per_class[label] = metrics_from(c.tp, c.fp, c.fn,
                                           counts.total_tokens);
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  result.micro = metrics_from(tp, fp, fn, counts.total_tokens);
  result.counts = std::move(counts);
  result.per_document = std::move(per_document);
  return result;
}

EvalResult evaluate_pair(const TokenLabeling& gold,
                         const TokenLabeling& pred) {
  ConfusionCounts counts;
  count_labels(gold, pred, counts);
  ConfusionCounts pooled = counts;
  int64_t tp = 0, fp = 0, fn = 0;
  for (const auto& [label, c] : counts.per_class) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  std::vector<DocCounts> docs = {
      {gold.doc_id, tp, fp, fn, static_cast<int64_t>(gold.tokens.size())}};
  return compute_metrics(std::move(pooled), std::move(docs));
}

namespace {

// Annotations of one annotator grouped per document. Sets are sorted by
// (doc_id, start, stop), so groups are contiguous runs.
std::map<std::string, std::vector<Annotation>> group_by_doc(
    const std::vector<Annotation>& set) {
  std::map<std::string, std::vector<Annotation>> by_doc;
  for (const auto& ann : set) {
    by_doc[ann.doc_id].push_back(ann);
  }
  return by_doc;
}

}  // namespace

EvalResult evaluate_corpus(const Corpus& corpus,
                           const std::string& gold_annotator,
                           const std::string& pred_annotator,
                           const ScenarioConfig& cfg, Tokenizer tokenizer,
                           const LabelMap& map, int jobs) {
  if (corpus.documents.empty()) {
    throw Error("evaluate_corpus: corpus has no documents");
  }
  for (const std::string& annotator : {gold_annotator, pred_annotator}) {
    if (!corpus.annotation_sets.count(annotator)) {
      throw Error("annotator '" + annotator + "' not present in corpus");
    }
  }

  auto prepare = [&](const std::string& annotator) {
    return group_by_doc(apply_scenario(
        resolve_categories(corpus.annotation_sets.at(annotator), map), cfg));
  };
  auto gold_by_doc = prepare(gold_annotator);
  auto pred_by_doc = prepare(pred_annotator);

  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& [id, doc] : corpus.documents) {
    docs.push_back(&doc);
  }

  static const std::vector<Annotation> kNoAnnotations;
  std::vector<ConfusionCounts> doc_counts(docs.size());
  std::vector<DocCounts> doc_totals(docs.size());
  parallel_for(docs.size(), jobs, [&](size_t i) {
    const Document& doc = *docs[i];
    auto tokens = tokenizer(doc.text);
    auto gold_it = gold_by_doc.find(doc.doc_id);
    auto pred_it = pred_by_doc.find(doc.doc_id);
    const auto& gold_anns =
        gold_it == gold_by_doc.end() ? kNoAnnotations : gold_it->second;
    const auto& pred_anns =
        pred_it == pred_by_doc.end() ? kNoAnnotations : pred_it->second;
    TokenLabeling gold = label_tokens(tokens, gold_anns, cfg, doc.doc_id);
    TokenLabeling pred = label_tokens(tokens, pred_anns, cfg, doc.doc_id);
    count_labels(gold, pred, doc_counts[i]);
    int64_t tp = 0, fp = 0, fn = 0;
    for (const auto& [label, c] : doc_counts[i].per_class) {
      tp += c.tp;
      fp += c.fp;
      fn += c.fn;
    }
    doc_totals[i] = {doc.doc_id, tp, fp, fn,
                     static_cast<int64_t>(tokens.size())};
  });

  // Deterministic reduction in document order, whatever the worker count.
  ConfusionCounts pooled;
  for (const auto& dc : doc_counts) {
    for (const auto& [label, c] : dc.per_class) {
      auto& acc = pooled.per_class[label];
      acc.tp += c.tp;
      acc.fp += c.fp;
      acc.fn += c.fn;
    }
    pooled.total_tokens += dc.total_tokens;
    pooled.total_documents += dc.total_documents;
  }
  return compute_metrics(std::move(pooled), std::move(doc_totals));
}

EntityMetrics evaluate_entities(const std::vector<Annotation>& gold,
                                const std::vector<Annotation>& pred) {
  int64_t gold_tp = 0;
  for (const auto& g : gold) {
    for (const auto& p : pred) {
      if (p.start <= g.start && p.stop >= g.stop) {
        ++gold_tp;
        break;
      }
    }
  }
  int64_t pred_ok = 0;
  for (const auto& p : pred) {
    for (const auto& g : gold) {
      if (g.start <= p.start && p.stop <= g.stop) {
        ++pred_ok;
        break;
      }
    }
  }
  EntityMetrics m;
  m.recall = ratio(gold_tp, static_cast<int64_t>(gold.size()));
  m.precision = ratio(pred_ok, static_cast<int64_t>(pred.size()));
  m.f1 = (m.precision + m.recall) == 0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace clipse
