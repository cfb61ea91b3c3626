#include "clipse/detach.hpp"

#include <cinttypes>
#include <cstdio>

#include "clipse/jsonl.hpp"
#include "clipse/parallel.hpp"
#include "clipse/tokenize.hpp"

namespace clipse {

namespace {

struct Fnv1a {
  uint64_t state = 1469598103934665603ull;

  void feed(std::string_view s) {
    for (unsigned char c : s) {
      state ^= c;
      state *= 1099511628211ull;
    }
    // Separator byte so adjacent fields cannot alias.
    state ^= 0xFF;
    state *= 1099511628211ull;
  }
};

}  // namespace

std::string scenario_fingerprint(std::string_view tokenizer_name,
                                 const ScenarioConfig& cfg,
                                 const LabelMap& map) {
  Fnv1a hash;
  hash.feed(tokenizer_name);
  hash.feed(to_string(cfg.mode));
  if (cfg.mode == EvalMode::per_entity) {
    hash.feed(to_string(cfg.target));
  }
  char flags[7] = {
      cfg.include_profession ? '1' : '0',
      cfg.include_age_under_90 ? '1' : '0',
      cfg.include_nonpatient_names ? '1' : '0',
      cfg.include_large_geo ? '1' : '0',
      cfg.include_lone_year ? '1' : '0',
      cfg.include_organization ? '1' : '0',
      '\0',
  };
  hash.feed(flags);
  switch (map.unknown_policy) {
    case LabelMap::UnknownPolicy::error:
      hash.feed("error");
      break;
    case LabelMap::UnknownPolicy::drop:
      hash.feed("drop");
      break;
    case LabelMap::UnknownPolicy::pass_as_is:
      hash.feed("pass_as_is");
      break;
  }
  for (const auto& [raw, cat] : map.rules) {  // std::map iterates sorted
    hash.feed(raw);
    hash.feed(to_string(cat));
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016" PRIx64, hash.state);
  return out;
}

DetachedCorpus detach_corpus(const Corpus& corpus,
                             const std::vector<std::string>& annotators,
                             const ScenarioConfig& cfg,
                             const std::string& tokenizer_name,
                             const LabelMap& map, int jobs) {
  Tokenizer tokenizer = get_tokenizer(tokenizer_name);
  for (const auto& annotator : annotators) {
    if (!corpus.annotation_sets.count(annotator)) {
      throw Error("annotator '" + annotator + "' not present in corpus");
    }
  }

  DetachedCorpus out;
  out.tokenizer = tokenizer_name;
  out.mode = cfg.mode;
  out.target = cfg.target;
  out.fingerprint = scenario_fingerprint(tokenizer_name, cfg, map);

  // Prepared per-annotator, per-document annotation lists.
  std::map<std::string, std::map<std::string, std::vector<Annotation>>>
      prepared;
  for (const auto& annotator : annotators) {
    auto harmonized = apply_scenario(
        resolve_categories(corpus.annotation_sets.at(annotator), map), cfg);
    auto& by_doc = prepared[annotator];
    for (auto& ann : harmonized) {
      by_doc[ann.doc_id].push_back(std::move(ann));
    }
  }

  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& [id, doc] : corpus.documents) docs.push_back(&doc);

  static const std::vector<Annotation> kNoAnnotations;
  std::vector<DetachedDoc> detached(docs.size());
  parallel_for(docs.size(), jobs, [&](size_t i) {
    const Document& doc = *docs[i];
    auto tokens = tokenizer(doc.text);
    DetachedDoc& dd = detached[i];
    dd.doc_id = doc.doc_id;
    dd.offsets.reserve(tokens.size());
    for (const auto& t : tokens) {
      dd.offsets.emplace_back(t.start, t.stop);
    }
    for (const auto& annotator : annotators) {
      const auto& by_doc = prepared.at(annotator);
      auto it = by_doc.find(doc.doc_id);
      const auto& anns = it == by_doc.end() ? kNoAnnotations : it->second;
      dd.labels[annotator] =
          label_tokens(tokens, anns, cfg, doc.doc_id).labels;
    }
  });
  for (auto& dd : detached) {
    std::string id = dd.doc_id;
    out.docs.emplace(std::move(id), std::move(dd));
  }
  return out;
}

EvalResult evaluate_detached(const DetachedCorpus& detached,
                             const std::string& gold_annotator,
                             const std::string& pred_annotator) {
  if (detached.docs.empty()) {
    throw Error("evaluate_detached: no documents");
  }
  ConfusionCounts pooled;
  std::vector<DocCounts> per_document;
  per_document.reserve(detached.docs.size());
  for (const auto& [id, dd] : detached.docs) {
    TokenLabeling gold, pred;
    gold.doc_id = pred.doc_id = id;
    gold.mode = pred.mode = detached.mode;
    gold.target = pred.target = detached.target;
    for (auto [start, stop] : dd.offsets) {
      gold.tokens.push_back({start, stop, {}});
    }
    pred.tokens = gold.tokens;
    for (const std::string& annotator : {gold_annotator, pred_annotator}) {
      if (!dd.labels.count(annotator)) {
        throw Error("annotator '" + annotator +
                    "' not present in detached corpus (document '" + id +
                    "')");
      }
    }
    gold.labels = dd.labels.at(gold_annotator);
    pred.labels = dd.labels.at(pred_annotator);
    if (gold.labels.size() != gold.tokens.size() ||
        pred.labels.size() != pred.tokens.size()) {
      throw Error("detached label list misaligned for document '" + id + "'");
    }
    ConfusionCounts doc_counts;
    count_labels(gold, pred, doc_counts);
    int64_t tp = 0, fp = 0, fn = 0;
    for (const auto& [label, c] : doc_counts.per_class) {
      auto& acc = pooled.per_class[label];
      acc.tp += c.tp;
      acc.fp += c.fp;
      acc.fn += c.fn;
      tp += c.tp;
      fp += c.fp;
      fn += c.fn;
    }
    pooled.total_tokens += doc_counts.total_tokens;
    pooled.total_documents += 1;
    per_document.push_back(
        {id, tp, fp, fn, static_cast<int64_t>(dd.offsets.size())});
  }
  return compute_metrics(std::move(pooled), std::move(per_document));
}

void write_detached(const DetachedCorpus& detached,
                    const std::filesystem::path& path) {
  std::vector<nlohmann::json> rows;
  rows.reserve(detached.docs.size());
  for (const auto& [id, dd] : detached.docs) {
    nlohmann::json offsets = nlohmann::json::array();
    for (auto [start, stop] : dd.offsets) {
      offsets.push_back({start, stop});
    }
    nlohmann::json labels = nlohmann::json::object();
    for (const auto& [annotator, list] : dd.labels) {
      nlohmann::json strings = nlohmann::json::array();
      for (Label l : list) strings.push_back(to_string(l));
      labels[annotator] = std::move(strings);
    }
    nlohmann::json row = {{"doc_id", id},
                          {"offsets", std::move(offsets)},
                          {"labels", std::move(labels)},
                          {"fingerprint", detached.fingerprint},
                          {"tokenizer", detached.tokenizer},
                          {"mode", std::string(to_string(detached.mode))}};
    if (detached.mode == EvalMode::per_entity) {
      row["target"] = std::string(to_string(detached.target));
    }
    rows.push_back(std::move(row));
  }
  jsonl::write_file(path, rows);
}

DetachedCorpus read_detached(const std::filesystem::path& path) {
  DetachedCorpus out;
  bool first = true;
  for (const auto& row : jsonl::read_file(path)) {
    std::string fingerprint = row.at("fingerprint").get<std::string>();
    std::string tokenizer = row.at("tokenizer").get<std::string>();
    std::string mode_str = row.at("mode").get<std::string>();
    EvalMode mode;
    if (mode_str == "binary") mode = EvalMode::binary;
    else if (mode_str == "multiclass") mode = EvalMode::multiclass;
    else if (mode_str == "per_entity") mode = EvalMode::per_entity;
    else throw Error("unknown mode '" + mode_str + "' in " + path.string());
    Category target = Category::name;
    if (auto it = row.find("target"); it != row.end()) {
      auto cat = category_from_string(it->get<std::string>());
      if (!cat) {
        throw Error("unknown target category in " + path.string());
      }
      target = *cat;
    }
    if (first) {
      out.fingerprint = fingerprint;
      out.tokenizer = tokenizer;
      out.mode = mode;
      out.target = target;
      first = false;
    } else if (fingerprint != out.fingerprint) {
      throw Error("mixed scenario fingerprints in " + path.string() +
                  " ('" + out.fingerprint + "' vs '" + fingerprint +
                  "'); these labelings are not comparable");
    }

    DetachedDoc dd;
    dd.doc_id = row.at("doc_id").get<std::string>();
    for (const auto& pair : row.at("offsets")) {
      dd.offsets.emplace_back(pair.at(0).get<int64_t>(),
                              pair.at(1).get<int64_t>());
    }
    for (const auto& [annotator, list] : row.at("labels").items()) {
      auto& labels = dd.labels[annotator];
      labels.reserve(list.size());
      for (const auto& s : list) {
        labels.push_back(label_from_string(s.get<std::string>()));
      }
      if (labels.size() != dd.offsets.size()) {
        throw Error("label list for '" + annotator + "' misaligned in " +
                    path.string() + " (document '" + dd.doc_id + "')");
      }
    }
    std::string id = dd.doc_id;
    if (!out.docs.emplace(std::move(id), std::move(dd)).second) {
      throw Error("duplicate doc_id in " + path.string());
    }
  }
  return out;
}

}  // namespace clipse
