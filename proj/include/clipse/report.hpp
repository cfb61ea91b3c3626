#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "clipse/evaluate.hpp"
#include "clipse/harmonize.hpp"
#include "clipse/tokenize.hpp"
#include "clipse/types.hpp"

namespace clipse {

// JSON form of an EvalResult as printed by the CLI: document/token totals,
// per-class and micro metrics with their confusion counts, and per-document
// counts.
nlohmann::json result_to_json(const EvalResult& result);

// Renders a self-contained HTML review page (inline styles, no external
// assets): a metrics table mirroring result_to_json, a legend, and each
// document's text with token spans classed tp/fp/fn — a multiclass mismatch
// carries both fn and fp. The bare class tokens tp/fp/fn appear only on
// token spans, so counting them reproduces the confusion counts. Documents
// are ordered by descending false-negative count, then doc_id. Rendering is
// deterministic; identical inputs give identical bytes.
std::string render_report(const Corpus& corpus,
                          const std::string& gold_annotator,
                          const std::string& pred_annotator,
                          const ScenarioConfig& cfg, const EvalResult& result,
                          Tokenizer tokenizer,
                          const LabelMap& map = builtin_label_map());

}  // namespace clipse
