#include "clipse/store.hpp"

#include <algorithm>
#include <cstdio>

#include "clipse/jsonl.hpp"
#include "clipse/parquet.hpp"

namespace clipse {

namespace fs = std::filesystem;

namespace {

constexpr char kHexDigits[] = "0123456789ABCDEF";

bool partition_safe(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

parquet::Column string_column(std::string name, bool nullable = false) {
  parquet::Column col;
  col.name = std::move(name);
  col.type = parquet::PhysicalType::byte_array;
  col.nullable = nullable;
  return col;
}

parquet::Column int_column(std::string name) {
  parquet::Column col;
  col.name = std::move(name);
  col.type = parquet::PhysicalType::int64;
  return col;
}

parquet::Table documents_table(const Corpus& corpus) {
  parquet::Table table;
  auto doc_id = string_column("doc_id");
  auto text = string_column("text");
  auto source = string_column("source");
  auto split = string_column("split");
  for (const auto& [id, doc] : corpus.documents) {
    doc_id.strings.push_back(doc.doc_id);
    text.strings.push_back(doc.text);
    source.strings.push_back(doc.source);
    split.strings.emplace_back(to_string(doc.split));
  }
  table.num_rows = static_cast<int64_t>(corpus.documents.size());
  table.columns = {std::move(doc_id), std::move(text), std::move(source),
                   std::move(split)};
  return table;
}

// One partition's annotation rows; the annotator column lives in the
// directory name, not the file.
parquet::Table annotations_table(const std::vector<Annotation>& anns) {
  parquet::Table table;
  auto doc_id = string_column("doc_id");
  auto start = int_column("start");
  auto stop = int_column("stop");
  auto literal = string_column("literal");
  auto raw_label = string_column("raw_label");
  auto category = string_column("category", /*nullable=*/true);
  for (const auto& ann : anns) {
    doc_id.strings.push_back(ann.doc_id);
    start.ints.push_back(ann.start);
    stop.ints.push_back(ann.stop);
    literal.strings.push_back(ann.literal);
    raw_label.strings.push_back(ann.raw_label);
    if (ann.category) {
      category.strings.emplace_back(to_string(*ann.category));
      category.defined.push_back(1);
    } else {
      category.strings.emplace_back();
      category.defined.push_back(0);
    }
  }
  table.num_rows = static_cast<int64_t>(anns.size());
  table.columns = {std::move(doc_id),  std::move(start),
                   std::move(stop),    std::move(literal),
                   std::move(raw_label), std::move(category)};
  return table;
}

parquet::Table gazetteers_table(const std::vector<Gazetteer>& gazetteers) {
  parquet::Table table;
  auto name = string_column("name");
  auto category = string_column("category");
  auto entry = string_column("entry");
  int64_t rows = 0;
  for (const auto& gaz : gazetteers) {
    for (const auto& e : gaz.entries) {
      name.strings.push_back(gaz.name);
      category.strings.emplace_back(to_string(gaz.category));
      entry.strings.push_back(e);
      ++rows;
    }
  }
  table.num_rows = rows;
  table.columns = {std::move(name), std::move(category), std::move(entry)};
  return table;
}

Split parse_split(const std::string& s, const std::string& doc_id) {
  auto split = split_from_string(s);
  if (!split) {
    throw Error("unknown split '" + s + "' for document '" + doc_id + "'");
  }
  return *split;
}

Category parse_category(const std::string& s, const std::string& context) {
  auto cat = category_from_string(s);
  if (!cat) {
    throw Error("unknown category '" + s + "' in " + context);
  }
  return *cat;
}

void add_document_rows(Corpus& corpus, const parquet::Table& table,
                       const fs::path& origin) {
  const auto& doc_id = table.require("doc_id");
  const auto& text = table.require("text");
  const auto& source = table.require("source");
  const auto& split = table.require("split");
  for (int64_t i = 0; i < table.num_rows; ++i) {
    auto idx = static_cast<size_t>(i);
    Document doc;
    doc.doc_id = doc_id.strings[idx];
    doc.text = text.strings[idx];
    doc.source = source.strings[idx];
    doc.split = parse_split(split.strings[idx], doc.doc_id);
    if (doc.doc_id.empty()) {
      throw Error("empty doc_id in " + origin.string());
    }
    auto [_, inserted] = corpus.documents.emplace(doc.doc_id, std::move(doc));
    if (!inserted) {
      throw Error("duplicate doc_id '" + doc_id.strings[idx] + "' in " +
                  origin.string());
    }
  }
}

void add_annotation_rows(Corpus& corpus, const parquet::Table& table,
                         const std::string& annotator,
                         const fs::path& origin) {
  const auto& doc_id = table.require("doc_id");
  const auto& start = table.require("start");
  const auto& stop = table.require("stop");
  const auto& literal = table.require("literal");
  const auto& raw_label = table.require("raw_label");
  const auto& category = table.require("category");
  auto& set = corpus.annotation_sets[annotator];
  for (int64_t i = 0; i < table.num_rows; ++i) {
    auto idx = static_cast<size_t>(i);
    Annotation ann;
    ann.doc_id = doc_id.strings[idx];
    ann.start = start.ints[idx];
    ann.stop = stop.ints[idx];
    ann.literal = literal.strings[idx];
    ann.raw_label = raw_label.strings[idx];
    bool has_category = !category.nullable || category.defined[idx] != 0;
    if (has_category) {
      ann.category =
          parse_category(category.strings[idx],
                         origin.string() + " row " + std::to_string(i));
    }
    ann.annotator = annotator;
    set.push_back(std::move(ann));
  }
}

void add_gazetteer_rows(Corpus& corpus, const parquet::Table& table,
                        const fs::path& origin) {
  const auto& name = table.require("name");
  const auto& category = table.require("category");
  const auto& entry = table.require("entry");
  // Entries of one gazetteer are written contiguously; rebuild by run.
  for (int64_t i = 0; i < table.num_rows; ++i) {
    auto idx = static_cast<size_t>(i);
    Category cat = parse_category(category.strings[idx],
                                  origin.string() + " row " +
                                      std::to_string(i));
    if (corpus.gazetteers.empty() ||
        corpus.gazetteers.back().name != name.strings[idx]) {
      corpus.gazetteers.push_back({name.strings[idx], cat, {}});
    }
    corpus.gazetteers.back().entries.push_back(entry.strings[idx]);
  }
}

void write_parquet_layout(const Corpus& corpus, const fs::path& path) {
  fs::create_directories(path / "documents");
  fs::create_directories(path / "annotations");
  fs::create_directories(path / "gazetteers");
  parquet::write_file(documents_table(corpus),
                      path / "documents" / "part-0.parquet");
  for (const auto& [annotator, anns] : corpus.annotation_sets) {
    fs::path part = path / "annotations" /
                    ("annotator=" + encode_partition_value(annotator));
    fs::create_directories(part);
    parquet::write_file(annotations_table(anns), part / "part-0.parquet");
  }
  parquet::write_file(gazetteers_table(corpus.gazetteers),
                      path / "gazetteers" / "part-0.parquet");
}

void read_parquet_layout(Corpus& corpus, const fs::path& path) {
  fs::path documents_dir = path / "documents";
  bool found_documents = false;
  for (const auto& entry : fs::directory_iterator(documents_dir)) {
    if (entry.path().extension() != ".parquet") continue;
    add_document_rows(corpus, parquet::read_file(entry.path()), entry.path());
    found_documents = true;
  }
  if (!found_documents) {
    throw Error("no parquet files under " + documents_dir.string());
  }

  fs::path annotations_dir = path / "annotations";
  if (fs::is_directory(annotations_dir)) {
    // Collect partitions sorted by directory name for deterministic loads.
    std::vector<fs::path> partitions;
    for (const auto& entry : fs::directory_iterator(annotations_dir)) {
      if (entry.is_directory()) partitions.push_back(entry.path());
    }
    std::sort(partitions.begin(), partitions.end());
    for (const auto& part : partitions) {
      std::string dirname = part.filename().string();
      auto eq = dirname.find('=');
      if (eq == std::string::npos || dirname.substr(0, eq) != "annotator") {
        throw Error("unexpected partition directory " + part.string() +
                    " (want annotator=<value>)");
      }
      std::string annotator = decode_partition_value(dirname.substr(eq + 1));
      for (const auto& file : fs::directory_iterator(part)) {
        if (file.path().extension() != ".parquet") continue;
        add_annotation_rows(corpus, parquet::read_file(file.path()), annotator,
                            file.path());
      }
      // A partition directory with no rows still declares the annotator.
      corpus.annotation_sets.try_emplace(annotator);
    }
  }

  fs::path gazetteers_dir = path / "gazetteers";
  if (fs::is_directory(gazetteers_dir)) {
    for (const auto& entry : fs::directory_iterator(gazetteers_dir)) {
      if (entry.path().extension() != ".parquet") continue;
      add_gazetteer_rows(corpus, parquet::read_file(entry.path()),
                         entry.path());
    }
  }
}

void write_jsonl_layout(const Corpus& corpus, const fs::path& path) {
  std::vector<nlohmann::json> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& [id, doc] : corpus.documents) {
    docs.push_back({{"doc_id", doc.doc_id},
                    {"text", doc.text},
                    {"source", doc.source},
                    {"split", std::string(to_string(doc.split))}});
  }
  jsonl::write_file(path / "documents.jsonl", docs);

  std::vector<nlohmann::json> anns;
  for (const auto& [annotator, set] : corpus.annotation_sets) {
    for (const auto& ann : set) {
      nlohmann::json row = {{"doc_id", ann.doc_id},
                            {"start", ann.start},
                            {"stop", ann.stop},
                            {"literal", ann.literal},
                            {"raw_label", ann.raw_label},
                            {"annotator", annotator}};
      if (ann.category) {
        row["category"] = std::string(to_string(*ann.category));
      } else {
        row["category"] = nullptr;
      }
      anns.push_back(std::move(row));
    }
  }
  jsonl::write_file(path / "annotations.jsonl", anns);

  std::vector<nlohmann::json> gazetteers;
  for (const auto& gaz : corpus.gazetteers) {
    for (const auto& entry : gaz.entries) {
      gazetteers.push_back({{"name", gaz.name},
                            {"category", std::string(to_string(gaz.category))},
                            {"entry", entry}});
    }
  }
  jsonl::write_file(path / "gazetteers.jsonl", gazetteers);
}

std::string require_string(const nlohmann::json& row, const char* key,
                           const fs::path& origin) {
  auto it = row.find(key);
  if (it == row.end() || !it->is_string()) {
    throw Error("missing or non-string field '" + std::string(key) + "' in " +
                origin.string());
  }
  return it->get<std::string>();
}

int64_t require_int(const nlohmann::json& row, const char* key,
                    const fs::path& origin) {
  auto it = row.find(key);
  if (it == row.end() || !it->is_number_integer()) {
    throw Error("missing or non-integer field '" + std::string(key) +
                "' in " + origin.string());
  }
  return it->get<int64_t>();
}

void read_jsonl_layout(Corpus& corpus, const fs::path& path) {
  fs::path docs_file = path / "documents.jsonl";
  for (const auto& row : jsonl::read_file(docs_file)) {
    Document doc;
    doc.doc_id = require_string(row, "doc_id", docs_file);
    doc.text = require_string(row, "text", docs_file);
    doc.source = require_string(row, "source", docs_file);
    doc.split = parse_split(require_string(row, "split", docs_file),
                            doc.doc_id);
    auto [_, inserted] = corpus.documents.emplace(doc.doc_id, std::move(doc));
    if (!inserted) {
      throw Error("duplicate doc_id in " + docs_file.string());
    }
  }

  fs::path anns_file = path / "annotations.jsonl";
  if (fs::exists(anns_file)) {
    for (const auto& row : jsonl::read_file(anns_file)) {
      Annotation ann;
      ann.doc_id = require_string(row, "doc_id", anns_file);
      ann.start = require_int(row, "start", anns_file);
      ann.stop = require_int(row, "stop", anns_file);
      ann.literal = require_string(row, "literal", anns_file);
      ann.raw_label = require_string(row, "raw_label", anns_file);
      ann.annotator = require_string(row, "annotator", anns_file);
      auto cat = row.find("category");
      if (cat != row.end() && cat->is_string()) {
        ann.category =
            parse_category(cat->get<std::string>(), anns_file.string());
      }
      corpus.annotation_sets[ann.annotator].push_back(std::move(ann));
    }
  }

  fs::path gaz_file = path / "gazetteers.jsonl";
  if (fs::exists(gaz_file)) {
    for (const auto& row : jsonl::read_file(gaz_file)) {
      std::string name = require_string(row, "name", gaz_file);
      Category cat = parse_category(require_string(row, "category", gaz_file),
                                    gaz_file.string());
      if (corpus.gazetteers.empty() || corpus.gazetteers.back().name != name) {
        corpus.gazetteers.push_back({name, cat, {}});
      }
      corpus.gazetteers.back().entries.push_back(
          require_string(row, "entry", gaz_file));
    }
  }
}

}  // namespace

std::string encode_partition_value(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    if (partition_safe(c)) {
      out.push_back(c);
    } else {
      auto byte = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kHexDigits[byte >> 4]);
      out.push_back(kHexDigits[byte & 0xF]);
    }
  }
  return out;
}

std::string decode_partition_value(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] != '%') {
      out.push_back(encoded[i]);
      continue;
    }
    if (i + 2 >= encoded.size()) {
      throw Error("truncated percent escape in partition value '" +
                  std::string(encoded) + "'");
    }
    int hi = hex_value(encoded[i + 1]);
    int lo = hex_value(encoded[i + 2]);
    if (hi < 0 || lo < 0) {
      throw Error("invalid percent escape in partition value '" +
                  std::string(encoded) + "'");
    }
    out.push_back(static_cast<char>((hi << 4) | lo));
    i += 2;
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  StoreFormat format) {
  Corpus canonical = corpus;
  canonicalize(canonical);
  validate_corpus(canonical);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    throw Error("cannot create corpus directory " + path.string());
  }
  if (format == StoreFormat::parquet) {
    write_parquet_layout(canonical, path);
  } else {
    write_jsonl_layout(canonical, path);
  }
}

Corpus read_corpus(const std::filesystem::path& path) {
  if (!fs::is_directory(path)) {
    throw Error("corpus directory not found: " + path.string());
  }
  Corpus corpus;
  if (fs::exists(path / "documents.jsonl")) {
    read_jsonl_layout(corpus, path);
  } else if (fs::is_directory(path / "documents")) {
    read_parquet_layout(corpus, path);
  } else {
    throw Error("no documents dataset under " + path.string() +
                " (expected documents/ or documents.jsonl)");
  }
  canonicalize(corpus);
  validate_corpus(corpus);
  return corpus;
}

}  // namespace clipse
