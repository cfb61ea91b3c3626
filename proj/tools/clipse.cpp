#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "clipse/detach.hpp"
#include "clipse/evaluate.hpp"
#include "clipse/harmonize.hpp"
#include "clipse/ingest.hpp"
#include "clipse/jsonl.hpp"
#include "clipse/merge.hpp"
#include "clipse/parallel.hpp"
#include "clipse/report.hpp"
#include "clipse/scrub.hpp"
#include "clipse/store.hpp"
#include "clipse/synth.hpp"
#include "clipse/tagger.hpp"
#include "clipse/tokenize.hpp"
#include "clipse/types.hpp"

namespace fs = std::filesystem;
using namespace clipse;

namespace {

StoreFormat store_format(const std::string& name) {
  return name == "jsonl" ? StoreFormat::jsonl : StoreFormat::parquet;
}

// Adds the shared --store flag for subcommands that write a corpus directory.
void add_store_flag(CLI::App* sub, std::shared_ptr<std::string> store) {
  sub->add_option("--store", *store, "Output layout: parquet or jsonl")
      ->default_val("parquet")
      ->check(CLI::IsMember({"parquet", "jsonl"}));
}

void add_jobs_flag(CLI::App* sub, std::shared_ptr<int> jobs) {
  sub->add_option("--jobs", *jobs,
                  "Worker threads (default 1; CLIPSE_JOBS as fallback)");
}

// Subcommands never modify their inputs, so refuse to write a corpus over
// the directory it was read from.
void require_distinct(const std::string& in, const std::string& out) {
  if (fs::weakly_canonical(in) == fs::weakly_canonical(out)) {
    throw CLI::ValidationError("--out must differ from the input directory");
  }
}

LabelMap label_map_from_flag(const std::string& path) {
  return path.empty() ? builtin_label_map() : load_label_map(path);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) {
    throw Error("cannot write " + path.string());
  }
}

void add_convert(CLI::App& app) {
  struct Opts {
    std::string format, in, out, annotator, corpus, store;
    bool overwrite = false;
  };
  auto opts = std::make_shared<Opts>();
  auto store = std::shared_ptr<std::string>(opts, &opts->store);
  CLI::App* sub = app.add_subcommand(
      "convert", "Convert external annotation formats into a corpus");
  sub->add_option("--format", opts->format,
                  "Input format: i2b2-xml, standoff, predictions, or corpus")
      ->required()
      ->check(CLI::IsMember({"i2b2-xml", "standoff", "predictions", "corpus"}));
  sub->add_option("--in", opts->in, "Input directory (or file for predictions)")
      ->required();
  sub->add_option("--out", opts->out, "Corpus directory to write")->required();
  sub->add_option("--annotator", opts->annotator,
                  "Annotation set to create (default gold; required for "
                  "predictions)");
  sub->add_option("--corpus", opts->corpus,
                  "Existing corpus to attach predictions to");
  sub->add_flag("--overwrite", opts->overwrite,
                "Replace the annotator if it already exists (predictions)");
  add_store_flag(sub, store);
  sub->callback([opts] {
    require_distinct(opts->in, opts->out);
    Corpus corpus;
    if (opts->format == "predictions") {
      if (opts->corpus.empty() || opts->annotator.empty()) {
        throw CLI::ValidationError(
            "--format predictions requires --corpus and --annotator");
      }
      require_distinct(opts->corpus, opts->out);
      corpus = ingest_predictions(read_corpus(opts->corpus),
                                  read_standoff_file(opts->in),
                                  opts->annotator, opts->overwrite);
    } else if (opts->format == "corpus") {
      corpus = read_corpus(opts->in);
    } else {
      std::string annotator =
          opts->annotator.empty() ? "gold" : opts->annotator;
      corpus = opts->format == "i2b2-xml"
                   ? ingest_i2b2_dir(opts->in, annotator)
                   : ingest_standoff_dir(opts->in, annotator);
    }
    write_corpus(corpus, opts->out, store_format(opts->store));
  });
}

void add_tag(CLI::App& app) {
  struct Opts {
    std::string corpus, out, profile, annotator = "reference", store;
    int jobs = 0;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "tag", "Run a tagger profile and store the result as a new annotator");
  sub->add_option("--corpus", opts->corpus, "Corpus directory to read")
      ->required();
  sub->add_option("--out", opts->out, "Corpus directory to write")->required();
  sub->add_option("--profile", opts->profile,
                  "Tagger profile file (default: builtin rules)");
  sub->add_option("--annotator", opts->annotator,
                  "Name for the produced annotation set");
  add_store_flag(sub, std::shared_ptr<std::string>(opts, &opts->store));
  add_jobs_flag(sub, std::shared_ptr<int>(opts, &opts->jobs));
  sub->callback([opts] {
    require_distinct(opts->corpus, opts->out);
    TaggerProfile profile = opts->profile.empty()
                                ? builtin_profile()
                                : load_profile(opts->profile);
    Corpus tagged = tag_corpus(read_corpus(opts->corpus), profile,
                               opts->annotator, effective_jobs(opts->jobs));
    write_corpus(tagged, opts->out, store_format(opts->store));
  });
}

void add_eval(CLI::App& app) {
  struct Opts {
    std::string corpus, detached, gold = "gold", pred, scenario = "binary";
    std::string tokenizer = std::string(kDefaultTokenizer), label_map, out;
    int jobs = 0;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "eval", "Score one annotator against another token by token");
  CLI::Option* corpus_opt =
      sub->add_option("--corpus", opts->corpus, "Corpus directory to read");
  CLI::Option* detached_opt = sub->add_option(
      "--detached", opts->detached, "Detached JSONL artifact to read instead");
  sub->add_option("--gold", opts->gold, "Reference annotator");
  sub->add_option("--pred", opts->pred, "Annotator under evaluation")
      ->required();
  CLI::Option* scenario_opt = sub->add_option(
      "--scenario", opts->scenario,
      "Preset: binary, multiclass, hipaa-strict, or name-only");
  CLI::Option* tokenizer_opt =
      sub->add_option("--tokenizer", opts->tokenizer, "Tokenizer name");
  CLI::Option* map_opt = sub->add_option(
      "--label-map", opts->label_map, "Label map TSV overriding the builtin");
  auto jobs = std::shared_ptr<int>(opts, &opts->jobs);
  add_jobs_flag(sub, jobs);
  sub->add_option("--out", opts->out,
                  "Write the JSON report here instead of stdout");
  detached_opt->excludes(corpus_opt, scenario_opt, tokenizer_opt, map_opt);
  sub->callback([opts] {
    EvalResult result;
    if (!opts->detached.empty()) {
      result = evaluate_detached(read_detached(opts->detached), opts->gold,
                                 opts->pred);
    } else if (opts->corpus.empty()) {
      throw CLI::ValidationError("eval needs --corpus or --detached");
    } else {
      result = evaluate_corpus(
          read_corpus(opts->corpus), opts->gold, opts->pred,
          scenario_preset(opts->scenario), get_tokenizer(opts->tokenizer),
          label_map_from_flag(opts->label_map), effective_jobs(opts->jobs));
    }
    std::string json = result_to_json(result).dump(2) + "\n";
    if (opts->out.empty()) {
      std::cout << json;
    } else {
      write_text_file(opts->out, json);
    }
  });
}

void add_merge(CLI::App& app) {
  struct Opts {
    std::string corpus, out, strategy = "union", out_annotator = "merged";
    std::string store;
    std::vector<std::string> annotators;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "merge", "Combine annotation sets by character coverage");
  sub->add_option("--corpus", opts->corpus, "Corpus directory to read")
      ->required();
  sub->add_option("--out", opts->out, "Corpus directory to write")->required();
  sub->add_option("--annotators", opts->annotators,
                  "Comma-separated annotation sets to combine")
      ->required()
      ->delimiter(',');
  sub->add_option("--strategy", opts->strategy,
                  "union, intersection, or majority:<k>");
  sub->add_option("--out-annotator", opts->out_annotator,
                  "Name for the merged set");
  add_store_flag(sub, std::shared_ptr<std::string>(opts, &opts->store));
  sub->callback([opts] {
    require_distinct(opts->corpus, opts->out);
    Corpus merged = merge_annotations(
        read_corpus(opts->corpus), opts->annotators,
        merge_strategy_from_string(opts->strategy), opts->out_annotator);
    write_corpus(merged, opts->out, store_format(opts->store));
  });
}

void add_scrub(CLI::App& app) {
  struct Opts {
    std::string corpus, out, annotator = "gold", style = "placeholder";
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "scrub", "Replace annotated spans in every document text");
  sub->add_option("--corpus", opts->corpus, "Corpus directory to read")
      ->required();
  sub->add_option("--out", opts->out, "Directory for scrubbed text files")
      ->required();
  sub->add_option("--annotator", opts->annotator,
                  "Annotation set marking the spans to replace");
  sub->add_option("--style", opts->style, "placeholder or mask");
  sub->callback([opts] {
    require_distinct(opts->corpus, opts->out);
    Corpus corpus = read_corpus(opts->corpus);
    auto set = corpus.annotation_sets.find(opts->annotator);
    if (set == corpus.annotation_sets.end()) {
      throw Error("annotator '" + opts->annotator +
                  "' not present in corpus");
    }
    ScrubStyle style = scrub_style_from_string(opts->style);
    std::map<std::string, std::vector<Annotation>> by_doc;
    for (const auto& ann : set->second) {
      by_doc[ann.doc_id].push_back(ann);
    }
    fs::create_directories(opts->out);
    std::vector<nlohmann::json> offset_rows;
    for (const auto& [doc_id, doc] : corpus.documents) {
      static const std::vector<Annotation> kNone;
      auto rows = by_doc.find(doc_id);
      ScrubbedDocument scrubbed = scrub_document(
          doc, rows == by_doc.end() ? kNone : rows->second, style);
      write_text_file(
          fs::path(opts->out) / (encode_partition_value(doc_id) + ".txt"),
          scrubbed.text);
      for (const ScrubSpan& span : scrubbed.offset_map) {
        offset_rows.push_back({{"doc_id", doc_id},
                               {"original_start", span.original_start},
                               {"original_stop", span.original_stop},
                               {"new_start", span.new_start},
                               {"new_stop", span.new_stop}});
      }
    }
    jsonl::write_file(fs::path(opts->out) / "offset_map.jsonl", offset_rows);
  });
}

void add_detach(CLI::App& app) {
  struct Opts {
    std::string corpus, out, scenario = "binary";
    std::string tokenizer = std::string(kDefaultTokenizer), label_map;
    std::vector<std::string> annotators;
    int jobs = 0;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "detach", "Save a text-free evaluation artifact as JSONL");
  sub->add_option("--corpus", opts->corpus, "Corpus directory to read")
      ->required();
  sub->add_option("--annotators", opts->annotators,
                  "Comma-separated annotation sets to retain")
      ->required()
      ->delimiter(',');
  sub->add_option("--scenario", opts->scenario,
                  "Preset: binary, multiclass, hipaa-strict, or name-only");
  sub->add_option("--tokenizer", opts->tokenizer, "Tokenizer name");
  sub->add_option("--label-map", opts->label_map,
                  "Label map TSV overriding the builtin");
  add_jobs_flag(sub, std::shared_ptr<int>(opts, &opts->jobs));
  sub->add_option("--out", opts->out, "Artifact file to write")->required();
  sub->callback([opts] {
    DetachedCorpus detached = detach_corpus(
        read_corpus(opts->corpus), opts->annotators,
        scenario_preset(opts->scenario), opts->tokenizer,
        label_map_from_flag(opts->label_map), effective_jobs(opts->jobs));
    write_detached(detached, opts->out);
  });
}

void add_report(CLI::App& app) {
  struct Opts {
    std::string corpus, gold = "gold", pred, scenario = "binary";
    std::string tokenizer = std::string(kDefaultTokenizer), label_map, out;
    int jobs = 0;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub = app.add_subcommand(
      "report", "Render an HTML review page of predictions against gold");
  sub->add_option("--corpus", opts->corpus, "Corpus directory to read")
      ->required();
  sub->add_option("--gold", opts->gold, "Reference annotator");
  sub->add_option("--pred", opts->pred, "Annotator under evaluation")
      ->required();
  sub->add_option("--scenario", opts->scenario,
                  "Preset: binary, multiclass, hipaa-strict, or name-only");
  sub->add_option("--tokenizer", opts->tokenizer, "Tokenizer name");
  sub->add_option("--label-map", opts->label_map,
                  "Label map TSV overriding the builtin");
  add_jobs_flag(sub, std::shared_ptr<int>(opts, &opts->jobs));
  sub->add_option("--out", opts->out,
                  "Write the HTML here instead of stdout");
  sub->callback([opts] {
    Corpus corpus = read_corpus(opts->corpus);
    ScenarioConfig cfg = scenario_preset(opts->scenario);
    Tokenizer tokenizer = get_tokenizer(opts->tokenizer);
    LabelMap map = label_map_from_flag(opts->label_map);
    EvalResult result =
        evaluate_corpus(corpus, opts->gold, opts->pred, cfg, tokenizer, map,
                        effective_jobs(opts->jobs));
    std::string html = render_report(corpus, opts->gold, opts->pred, cfg,
                                     result, tokenizer, map);
    if (opts->out.empty()) {
      std::cout << html;
    } else {
      write_text_file(opts->out, html);
    }
  });
}

void add_synth(CLI::App& app) {
  struct Opts {
    uint64_t seed = 0;
    int64_t n = 100;
    std::string templates = "mixed", out, store;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* sub =
      app.add_subcommand("synth", "Generate a synthetic gold corpus");
  sub->add_option("--seed", opts->seed, "Generator seed");
  sub->add_option("--n", opts->n, "Number of documents");
  sub->add_option("--templates", opts->templates,
                  "Template set: radiology, discharge, or mixed");
  sub->add_option("--out", opts->out, "Corpus directory to write")->required();
  add_store_flag(sub, std::shared_ptr<std::string>(opts, &opts->store));
  sub->callback([opts] {
    Corpus corpus = generate_corpus(opts->seed, opts->n,
                                    template_set_from_string(opts->templates));
    write_corpus(corpus, opts->out, store_format(opts->store));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clipse: clinical note deidentification toolkit"};
  app.require_subcommand(1);
  add_convert(app);
  add_tag(app);
  add_eval(app);
  add_merge(app);
  add_scrub(app);
  add_detach(app);
  add_report(app);
  add_synth(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    std::cerr << "clipse: " << e.what() << "\n"
              << "Run 'clipse --help' or 'clipse <subcommand> --help' for "
                 "usage.\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "clipse: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
