#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clipse/detach.hpp"
#include "clipse/evaluate.hpp"
#include "clipse/harmonize.hpp"
#include "clipse/ingest.hpp"
#include "clipse/merge.hpp"
#include "clipse/report.hpp"
#include "clipse/scrub.hpp"
#include "clipse/store.hpp"
#include "clipse/synth.hpp"
#include "clipse/tagger.hpp"
#include "clipse/tokenize.hpp"
#include "clipse/types.hpp"

namespace py = pybind11;
using namespace clipse;

namespace {

// The Python surface uses plain strings for categories, splits, and other
// enumerations so results stay JSON-shaped; these convert and validate.
Category category_arg(const std::string& name) {
  if (auto cat = category_from_string(name)) return *cat;
  throw Error("unknown category '" + name + "'");
}

Split split_arg(const std::string& name) {
  if (auto split = split_from_string(name)) return *split;
  throw Error("unknown split '" + name + "'");
}

StoreFormat store_arg(const std::string& name) {
  if (name == "parquet") return StoreFormat::parquet;
  if (name == "jsonl") return StoreFormat::jsonl;
  throw Error("unknown store format '" + name + "' (parquet or jsonl)");
}

LabelMap label_map_arg(const std::string& path) {
  return path.empty() ? builtin_label_map() : load_label_map(path);
}

py::object json_to_py(const nlohmann::json& value) {
  using value_t = nlohmann::json::value_t;
  switch (value.type()) {
    case value_t::boolean:
      return py::bool_(value.get<bool>());
    case value_t::number_integer:
      return py::int_(value.get<int64_t>());
    case value_t::number_unsigned:
      return py::int_(value.get<uint64_t>());
    case value_t::number_float:
      return py::float_(value.get<double>());
    case value_t::string:
      return py::str(value.get<std::string>());
    case value_t::array: {
      py::list out;
      for (const auto& element : value) out.append(json_to_py(element));
      return out;
    }
    case value_t::object: {
      py::dict out;
      for (const auto& [key, element] : value.items()) {
        out[py::str(key)] = json_to_py(element);
      }
      return out;
    }
    default:
      return py::none();
  }
}

py::dict eval_result_to_py(const EvalResult& result) {
  return json_to_py(result_to_json(result));
}

}  // namespace

PYBIND11_MODULE(_clipse, m) {
  m.doc() = "clinical note deidentification core";
  m.attr("__version__") = "0.1.0";
  {
    py::list names;
    for (int i = 0; i < kNumCategories; ++i) {
      names.append(py::str(std::string(to_string(static_cast<Category>(i)))));
    }
    m.attr("CATEGORIES") = py::tuple(names);
  }

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Document>(m, "Document")
      .def(py::init([](std::string doc_id, std::string text,
                       std::string source, const std::string& split) {
             Document doc{std::move(doc_id), std::move(text),
                          std::move(source), split_arg(split)};
             return doc;
           }),
           py::arg("doc_id"), py::arg("text"), py::arg("source") = "",
           py::arg("split") = "unsplit")
      .def_readwrite("doc_id", &Document::doc_id)
      .def_readwrite("text", &Document::text)
      .def_readwrite("source", &Document::source)
      .def_property(
          "split",
          [](const Document& doc) { return std::string(to_string(doc.split)); },
          [](Document& doc, const std::string& value) {
            doc.split = split_arg(value);
          })
      .def(py::self == py::self)
      .def("__repr__", [](const Document& doc) {
        return "Document(doc_id='" + doc.doc_id + "', " +
               std::to_string(doc.text.size()) + " bytes)";
      });

  py::class_<Annotation>(m, "Annotation")
      .def(py::init([](std::string doc_id, int64_t start, int64_t stop,
                       std::string literal, std::string raw_label,
                       const std::optional<std::string>& category,
                       std::string annotator) {
             Annotation ann{std::move(doc_id), start,
                            stop,              std::move(literal),
                            std::move(raw_label), std::nullopt,
                            std::move(annotator)};
             if (category) ann.category = category_arg(*category);
             return ann;
           }),
           py::arg("doc_id"), py::arg("start"), py::arg("stop"),
           py::arg("literal"), py::arg("raw_label") = "",
           py::arg("category") = py::none(), py::arg("annotator") = "")
      .def_readwrite("doc_id", &Annotation::doc_id)
      .def_readwrite("start", &Annotation::start)
      .def_readwrite("stop", &Annotation::stop)
      .def_readwrite("literal", &Annotation::literal)
      .def_readwrite("raw_label", &Annotation::raw_label)
      .def_readwrite("annotator", &Annotation::annotator)
      .def_property(
          "category",
          [](const Annotation& ann) -> std::optional<std::string> {
            if (!ann.category) return std::nullopt;
            return std::string(to_string(*ann.category));
          },
          [](Annotation& ann, const std::optional<std::string>& value) {
            ann.category =
                value ? std::optional(category_arg(*value)) : std::nullopt;
          })
      .def(py::self == py::self)
      .def("__repr__", [](const Annotation& ann) {
        return "Annotation('" + ann.doc_id + "', [" +
               std::to_string(ann.start) + ", " + std::to_string(ann.stop) +
               "), '" + ann.literal + "')";
      });

  py::class_<Gazetteer>(m, "Gazetteer")
      .def(py::init([](std::string name, const std::string& category,
                       std::vector<std::string> entries) {
             return Gazetteer{std::move(name), category_arg(category),
                              std::move(entries)};
           }),
           py::arg("name"), py::arg("category"), py::arg("entries"))
      .def_readwrite("name", &Gazetteer::name)
      .def_readwrite("entries", &Gazetteer::entries)
      .def_property(
          "category",
          [](const Gazetteer& g) { return std::string(to_string(g.category)); },
          [](Gazetteer& g, const std::string& value) {
            g.category = category_arg(value);
          })
      .def(py::self == py::self);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<>())
      .def_readwrite("documents", &Corpus::documents)
      .def_readwrite("annotation_sets", &Corpus::annotation_sets)
      .def_readwrite("gazetteers", &Corpus::gazetteers)
      .def("add_document",
           [](Corpus& corpus, const Document& doc) {
             corpus.documents[doc.doc_id] = doc;
           })
      .def("set_annotations",
           [](Corpus& corpus, const std::string& annotator,
              std::vector<Annotation> annotations) {
             corpus.annotation_sets[annotator] = std::move(annotations);
             canonicalize(corpus);
           })
      .def("annotators",
           [](const Corpus& corpus) {
             std::vector<std::string> names;
             for (const auto& [name, set] : corpus.annotation_sets) {
               names.push_back(name);
             }
             return names;
           })
      .def("__len__", [](const Corpus& corpus) { return corpus.documents.size(); })
      .def(py::self == py::self);

  py::class_<DetachedCorpus>(m, "DetachedCorpus")
      .def_readonly("tokenizer", &DetachedCorpus::tokenizer)
      .def_readonly("fingerprint", &DetachedCorpus::fingerprint)
      .def_property_readonly(
          "mode",
          [](const DetachedCorpus& d) { return std::string(to_string(d.mode)); })
      .def("__len__",
           [](const DetachedCorpus& d) { return d.docs.size(); });

  m.def(
      "generate_corpus",
      [](uint64_t seed, int64_t n_docs, const std::string& templates) {
        return generate_corpus(seed, n_docs,
                               template_set_from_string(templates));
      },
      py::arg("seed") = 0, py::arg("n_docs") = 100,
      py::arg("templates") = "mixed");

  m.def("read_corpus",
        [](const std::filesystem::path& path) { return read_corpus(path); },
        py::arg("path"));
  m.def(
      "write_corpus",
      [](const Corpus& corpus, const std::filesystem::path& path,
         const std::string& store) {
        write_corpus(corpus, path, store_arg(store));
      },
      py::arg("corpus"), py::arg("path"), py::arg("store") = "parquet");
  m.def("validate_corpus",
        [](const Corpus& corpus) { validate_corpus(corpus); },
        py::arg("corpus"));

  m.def("ingest_i2b2_dir",
        [](const std::filesystem::path& dir, const std::string& annotator) {
          return ingest_i2b2_dir(dir, annotator);
        },
        py::arg("dir"), py::arg("annotator") = "gold");
  m.def("ingest_standoff_dir",
        [](const std::filesystem::path& dir, const std::string& annotator) {
          return ingest_standoff_dir(dir, annotator);
        },
        py::arg("dir"), py::arg("annotator") = "gold");
  m.def(
      "ingest_predictions",
      [](const Corpus& corpus, const std::filesystem::path& rows_file,
         const std::string& annotator, bool overwrite) {
        return ingest_predictions(corpus, read_standoff_file(rows_file),
                                  annotator, overwrite);
      },
      py::arg("corpus"), py::arg("rows_file"), py::arg("annotator"),
      py::arg("overwrite") = false);

  m.def(
      "tokenize",
      [](const std::string& text, const std::string& tokenizer) {
        std::vector<std::tuple<int64_t, int64_t, std::string>> out;
        for (const Token& token : get_tokenizer(tokenizer)(text)) {
          out.emplace_back(token.start, token.stop, token.text);
        }
        return out;
      },
      py::arg("text"), py::arg("tokenizer") = std::string(kDefaultTokenizer));

  m.def(
      "tag_corpus",
      [](const Corpus& corpus, const std::string& annotator,
         const std::string& profile, int jobs) {
        TaggerProfile p =
            profile.empty() ? builtin_profile() : load_profile(profile);
        return tag_corpus(corpus, p, annotator, jobs);
      },
      py::arg("corpus"), py::arg("annotator") = "reference",
      py::arg("profile") = "", py::arg("jobs") = 1);

  m.def(
      "evaluate_corpus",
      [](const Corpus& corpus, const std::string& pred,
         const std::string& gold, const std::string& scenario,
         const std::string& tokenizer, const std::string& label_map,
         int jobs) {
        return eval_result_to_py(evaluate_corpus(
            corpus, gold, pred, scenario_preset(scenario),
            get_tokenizer(tokenizer), label_map_arg(label_map), jobs));
      },
      py::arg("corpus"), py::arg("pred"), py::arg("gold") = "gold",
      py::arg("scenario") = "binary",
      py::arg("tokenizer") = std::string(kDefaultTokenizer),
      py::arg("label_map") = "", py::arg("jobs") = 1);

  m.def(
      "merge_annotations",
      [](const Corpus& corpus, const std::vector<std::string>& annotators,
         const std::string& strategy, const std::string& out_annotator) {
        return merge_annotations(corpus, annotators,
                                 merge_strategy_from_string(strategy),
                                 out_annotator);
      },
      py::arg("corpus"), py::arg("annotators"),
      py::arg("strategy") = "union", py::arg("out_annotator") = "merged");

  m.def(
      "scrub_document",
      [](const Document& doc, const std::vector<Annotation>& annotations,
         const std::string& style) {
        ScrubbedDocument scrubbed =
            scrub_document(doc, annotations, scrub_style_from_string(style));
        py::list offset_map;
        for (const ScrubSpan& span : scrubbed.offset_map) {
          offset_map.append(py::make_tuple(span.original_start,
                                           span.original_stop, span.new_start,
                                           span.new_stop));
        }
        py::dict out;
        out["text"] = scrubbed.text;
        out["offset_map"] = offset_map;
        return out;
      },
      py::arg("document"), py::arg("annotations"),
      py::arg("style") = "placeholder");

  m.def(
      "detach_corpus",
      [](const Corpus& corpus, const std::vector<std::string>& annotators,
         const std::string& scenario, const std::string& tokenizer,
         const std::string& label_map, int jobs) {
        return detach_corpus(corpus, annotators, scenario_preset(scenario),
                             tokenizer, label_map_arg(label_map), jobs);
      },
      py::arg("corpus"), py::arg("annotators"),
      py::arg("scenario") = "binary",
      py::arg("tokenizer") = std::string(kDefaultTokenizer),
      py::arg("label_map") = "", py::arg("jobs") = 1);

  m.def(
      "evaluate_detached",
      [](const DetachedCorpus& detached, const std::string& pred,
         const std::string& gold) {
        return eval_result_to_py(evaluate_detached(detached, gold, pred));
      },
      py::arg("detached"), py::arg("pred"), py::arg("gold") = "gold");

  m.def("write_detached",
        [](const DetachedCorpus& detached,
           const std::filesystem::path& path) { write_detached(detached, path); },
        py::arg("detached"), py::arg("path"));
  m.def("read_detached",
        [](const std::filesystem::path& path) { return read_detached(path); },
        py::arg("path"));

  m.def(
      "render_report",
      [](const Corpus& corpus, const std::string& pred,
         const std::string& gold, const std::string& scenario,
         const std::string& tokenizer, const std::string& label_map,
         int jobs) {
        ScenarioConfig cfg = scenario_preset(scenario);
        Tokenizer tok = get_tokenizer(tokenizer);
        LabelMap map = label_map_arg(label_map);
        EvalResult result =
            evaluate_corpus(corpus, gold, pred, cfg, tok, map, jobs);
        return render_report(corpus, gold, pred, cfg, result, tok, map);
      },
      py::arg("corpus"), py::arg("pred"), py::arg("gold") = "gold",
      py::arg("scenario") = "binary",
      py::arg("tokenizer") = std::string(kDefaultTokenizer),
      py::arg("label_map") = "", py::arg("jobs") = 1);
}
