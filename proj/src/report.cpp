#include "clipse/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <utility>
#include <vector>

#include "clipse/unicode.hpp"

namespace clipse {
namespace {

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double value, int digits) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

nlohmann::json metrics_json(const Metrics& m, const ClassCounts& c) {
  return {{"precision", m.precision}, {"recall", m.recall},     {"f1", m.f1},
          {"fn_per_1000", m.fn_per_1000}, {"tp", c.tp},         {"fp", c.fp},
          {"fn", c.fn}};
}

ClassCounts pooled_counts(const ConfusionCounts& counts) {
  ClassCounts pooled;
  for (const auto& [label, c] : counts.per_class) {
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
  }
  return pooled;
}

// One table row shared by the HTML table; mirrors metrics_json fields.
void metrics_row(std::string& html, const std::string& name, const Metrics& m,
                 const ClassCounts& c) {
  html += "<tr><td>" + escape_html(name) + "</td><td>" +
          fixed(m.precision, 4) + "</td><td>" + fixed(m.recall, 4) +
          "</td><td>" + fixed(m.f1, 4) + "</td><td>" +
          fixed(m.fn_per_1000, 2) + "</td><td>" + std::to_string(c.tp) +
          "</td><td>" + std::to_string(c.fp) + "</td><td>" +
          std::to_string(c.fn) + "</td></tr>\n";
}

std::string scenario_line(const ScenarioConfig& cfg) {
  std::string line = "mode " + std::string(to_string(cfg.mode));
  if (cfg.mode == EvalMode::per_entity) {
    line += ", target " + std::string(to_string(cfg.target));
  }
  std::vector<std::string> excluded;
  if (!cfg.include_profession) excluded.push_back("profession");
  if (!cfg.include_age_under_90) excluded.push_back("ages under 90");
  if (!cfg.include_nonpatient_names) excluded.push_back("non-patient names");
  if (!cfg.include_large_geo) excluded.push_back("large geography");
  if (!cfg.include_lone_year) excluded.push_back("lone years");
  if (!cfg.include_organization) excluded.push_back("organizations");
  if (excluded.empty()) {
    line += ", no entity filters";
  } else {
    line += ", excluding";
    for (size_t i = 0; i < excluded.size(); ++i) {
      line += (i == 0 ? " " : ", ") + excluded[i];
    }
  }
  return line;
}

std::map<std::string, std::vector<Annotation>> group_by_doc(
    const std::vector<Annotation>& set) {
  std::map<std::string, std::vector<Annotation>> by_doc;
  for (const auto& ann : set) {
    by_doc[ann.doc_id].push_back(ann);
  }
  return by_doc;
}

constexpr std::string_view kStyle = R"(body { font-family: sans-serif; margin: 1.5em; color: #222; }
h1 { font-size: 1.4em; }
h2 { font-size: 1.0em; margin: 0 0 0.3em 0; }
table.metrics { border-collapse: collapse; margin: 0.8em 0; }
table.metrics th, table.metrics td { border: 1px solid #bbb; padding: 0.25em 0.6em; text-align: right; }
table.metrics td:first-child, table.metrics th:first-child { text-align: left; }
p.legend .key { padding: 0.1em 0.4em; border-radius: 3px; margin-right: 0.4em; }
.key-tp, .tok.tp { background: #b5e0b2; }
.key-fp, .tok.fp { background: #f7d795; }
.key-fn, .tok.fn { background: #f5b3bd; }
.key-fnfp, .tok.fn.fp { background: #d9b8f0; }
section.doc { margin: 1.2em 0; padding: 0.8em; border: 1px solid #ccc; border-radius: 4px; }
section.doc pre { white-space: pre-wrap; word-wrap: break-word; font-size: 0.95em; line-height: 1.6; }
)";

}  // namespace

nlohmann::json result_to_json(const EvalResult& result) {
  nlohmann::json out;
  out["documents"] = result.counts.total_documents;
  out["tokens"] = result.counts.total_tokens;

  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [label, metrics] : result.per_class) {
    per_class[to_string(label)] =
        metrics_json(metrics, result.counts.per_class.at(label));
  }
  out["per_class"] = std::move(per_class);
  out["micro"] = metrics_json(result.micro, pooled_counts(result.counts));

  nlohmann::json docs = nlohmann::json::array();
  for (const DocCounts& doc : result.per_document) {
    docs.push_back({{"doc_id", doc.doc_id},
                    {"tp", doc.tp},
                    {"fp", doc.fp},
                    {"fn", doc.fn},
                    {"tokens", doc.tokens}});
  }
  out["per_document"] = std::move(docs);
  return out;
}

std::string render_report(const Corpus& corpus,
                          const std::string& gold_annotator,
                          const std::string& pred_annotator,
                          const ScenarioConfig& cfg, const EvalResult& result,
                          Tokenizer tokenizer, const LabelMap& map) {
  auto prepare = [&](const std::string& annotator) {
    auto it = corpus.annotation_sets.find(annotator);
    if (it == corpus.annotation_sets.end()) {
      return std::map<std::string, std::vector<Annotation>>{};
    }
    return group_by_doc(apply_scenario(resolve_categories(it->second, map),
                                       cfg));
  };
  auto gold_by_doc = prepare(gold_annotator);
  auto pred_by_doc = prepare(pred_annotator);

  struct DocSection {
    std::string doc_id;
    int64_t tp = 0;
    int64_t fp = 0;
    int64_t fn = 0;
    std::string body;
  };
  static const std::vector<Annotation> kNoAnnotations;
  std::vector<DocSection> sections;
  sections.reserve(corpus.documents.size());

  for (const auto& [id, doc] : corpus.documents) {
    auto tokens = tokenizer(doc.text);
    auto gold_it = gold_by_doc.find(id);
    auto pred_it = pred_by_doc.find(id);
    TokenLabeling gold = label_tokens(
        tokens,
        gold_it == gold_by_doc.end() ? kNoAnnotations : gold_it->second, cfg,
        id);
    TokenLabeling pred = label_tokens(
        tokens,
        pred_it == pred_by_doc.end() ? kNoAnnotations : pred_it->second, cfg,
        id);

    DocSection section;
    section.doc_id = id;
    uni::CodePointIndex index(doc.text);
    int64_t cursor = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
      const Token& token = tokens[i];
      section.body += escape_html(index.slice(cursor, token.start));
      cursor = token.stop;

      TokenOutcome o =
          classify_token(gold.labels[i], pred.labels[i], cfg.mode, cfg.target);
      if (!o.tp && !o.fp && !o.fn) {
        section.body += escape_html(token.text);
        continue;
      }
      std::string classes = "tok";
      if (o.tp) {
        classes += " tp";
        ++section.tp;
      }
      if (o.fn) {
        classes += " fn";
        ++section.fn;
      }
      if (o.fp) {
        classes += " fp";
        ++section.fp;
      }
      section.body += "<span class=\"" + classes + "\" title=\"gold " +
                      to_string(gold.labels[i]) + ", predicted " +
                      to_string(pred.labels[i]) + "\">" +
                      escape_html(token.text) + "</span>";
    }
    section.body += escape_html(index.slice(cursor, index.size()));
    sections.push_back(std::move(section));
  }

  // Worst leaks first: most missed tokens at the top.
  std::stable_sort(sections.begin(), sections.end(),
                   [](const DocSection& a, const DocSection& b) {
                     if (a.fn != b.fn) return a.fn > b.fn;
                     return a.doc_id < b.doc_id;
                   });

  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>deidentification review: " + escape_html(pred_annotator) +
          " vs " + escape_html(gold_annotator) + "</title>\n";
  html += "<style>\n";
  html += kStyle;
  html += "</style>\n</head>\n<body>\n";
  html += "<h1>Predicted set &ldquo;" + escape_html(pred_annotator) +
          "&rdquo; against gold &ldquo;" + escape_html(gold_annotator) +
          "&rdquo;</h1>\n";
  html += "<p>" + escape_html(scenario_line(cfg)) + " &mdash; " +
          std::to_string(result.counts.total_documents) + " documents, " +
          std::to_string(result.counts.total_tokens) + " tokens</p>\n";

  html += "<table class=\"metrics\">\n<tr><th>class</th><th>precision</th>"
          "<th>recall</th><th>f1</th><th>fn/1000</th><th>tp</th><th>fp</th>"
          "<th>fn</th></tr>\n";
  for (const auto& [label, metrics] : result.per_class) {
    metrics_row(html, to_string(label), metrics,
                result.counts.per_class.at(label));
  }
  metrics_row(html, "micro", result.micro, pooled_counts(result.counts));
  html += "</table>\n";

  html += "<p class=\"legend\"><span class=\"key key-tp\">true positive</span>"
          "<span class=\"key key-fp\">false positive</span>"
          "<span class=\"key key-fn\">false negative</span>"
          "<span class=\"key key-fnfp\">missed and mislabeled</span></p>\n";

  for (const DocSection& section : sections) {
    html += "<section class=\"doc\" id=\"doc-" + escape_html(section.doc_id) +
            "\">\n<h2>" + escape_html(section.doc_id) + " &mdash; tp " +
            std::to_string(section.tp) + ", fp " +
            std::to_string(section.fp) + ", fn " +
            std::to_string(section.fn) + "</h2>\n<pre>" + section.body +
            "</pre>\n</section>\n";
  }

  html += "</body>\n</html>\n";
  return html;
}

}  // namespace clipse
