#include "clipse/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "clipse/jsonl.hpp"
#include "clipse/unicode.hpp"

namespace clipse {
namespace {

// Just enough XML for the i2b2 record shape: prolog, comments, CDATA,
// character/numeric entities, and nested elements with attributes. No
// namespaces, no DTD content.
struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<XmlElement> children;
  std::string text;   // character data, entities decoded
  std::string cdata;  // CDATA content, verbatim
  bool has_cdata = false;
};

class XmlParser {
 public:
  explicit XmlParser(std::string_view input) : in_(input) {}

  XmlElement parse() {
    skip_misc();
    if (!starts_with("<")) fail("expected a root element");
    XmlElement root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after the root element");
    return root;
  }

 private:
  std::string_view in_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw Error("xml parse error at byte " + std::to_string(pos_) + ": " +
                what);
  }

  bool starts_with(std::string_view token) const {
    return in_.substr(pos_, token.size()) == token;
  }

  void expect(std::string_view token) {
    if (!starts_with(token)) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  // Consumes everything up to and including the terminator.
  void skip_until(std::string_view terminator) {
    size_t end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) {
      fail("unterminated '" + std::string(terminator) + "'");
    }
    pos_ = end + terminator.size();
  }

  void skip_whitespace() {
    while (pos_ < in_.size() &&
           (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\n' ||
            in_[pos_] == '\r')) {
      ++pos_;
    }
  }

  // Whitespace, <?...?>, <!--...-->, and <!DOCTYPE...> outside elements.
  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<!")) {
        skip_until(">");
      } else {
        return;
      }
    }
  }

  static bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.' ||
           c == ':';
  }

  std::string parse_name() {
    size_t begin = pos_;
    while (pos_ < in_.size() && is_name_char(in_[pos_])) ++pos_;
    if (pos_ == begin) fail("expected a name");
    return std::string(in_.substr(begin, pos_ - begin));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size();) {
      if (raw[i] != '&') {
        out += raw[i++];
        continue;
      }
      size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      std::string_view entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp") {
        out += '&';
      } else if (entity == "lt") {
        out += '<';
      } else if (entity == "gt") {
        out += '>';
      } else if (entity == "quot") {
        out += '"';
      } else if (entity == "apos") {
        out += '\'';
      } else if (!entity.empty() && entity[0] == '#') {
        bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
        std::string_view digits = entity.substr(hex ? 2 : 1);
        uint32_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(),
                                         digits.data() + digits.size(), value,
                                         hex ? 16 : 10);
        if (ec != std::errc() || ptr != digits.data() + digits.size()) {
          fail("bad numeric entity '&" + std::string(entity) + ";'");
        }
        uni::append_utf8(out, static_cast<char32_t>(value));
      } else {
        fail("unknown entity '&" + std::string(entity) + ";'");
      }
      i = semi + 1;
    }
    return out;
  }

  std::string parse_attr_value() {
    if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
      fail("expected a quoted attribute value");
    }
    char quote = in_[pos_++];
    size_t end = in_.find(quote, pos_);
    if (end == std::string_view::npos) fail("unterminated attribute value");
    std::string value = decode_entities(in_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return value;
  }

  // Parses attributes up to '>' or '/>'; returns true for an empty element.
  bool parse_attributes(XmlElement& el) {
    for (;;) {
      skip_whitespace();
      if (starts_with("/>")) {
        pos_ += 2;
        return true;
      }
      if (starts_with(">")) {
        ++pos_;
        return false;
      }
      std::string name = parse_name();
      skip_whitespace();
      expect("=");
      skip_whitespace();
      if (!el.attrs.emplace(name, parse_attr_value()).second) {
        fail("duplicate attribute '" + name + "'");
      }
    }
  }

  XmlElement parse_element() {
    expect("<");
    XmlElement el;
    el.name = parse_name();
    if (parse_attributes(el)) return el;

    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated element '" + el.name + "'");
      if (starts_with("<![CDATA[")) {
        pos_ += 9;
        size_t end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        el.cdata.append(in_.substr(pos_, end - pos_));
        el.has_cdata = true;
        pos_ = end + 3;
      } else if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("</")) {
        pos_ += 2;
        std::string name = parse_name();
        if (name != el.name) {
          fail("mismatched closing tag '" + name + "' for '" + el.name + "'");
        }
        skip_whitespace();
        expect(">");
        return el;
      } else if (starts_with("<")) {
        el.children.push_back(parse_element());
      } else {
        size_t end = in_.find('<', pos_);
        if (end == std::string_view::npos) {
          fail("unterminated element '" + el.name + "'");
        }
        el.text += decode_entities(in_.substr(pos_, end - pos_));
        pos_ = end;
      }
    }
  }
};

const XmlElement* find_child(const XmlElement& el, std::string_view name) {
  for (const XmlElement& child : el.children) {
    if (child.name == name) return &child;
  }
  return nullptr;
}

// Literal verification with the i2b2 off-by-one window: exact offsets first,
// then the whole span shifted by -1, then by +1.
std::pair<int64_t, int64_t> resolve_span(const uni::CodePointIndex& index,
                                         int64_t start, int64_t stop,
                                         std::string_view literal,
                                         const std::string& what) {
  for (int64_t shift : {int64_t{0}, int64_t{-1}, int64_t{1}}) {
    int64_t a = start + shift;
    int64_t b = stop + shift;
    if (a < 0 || b > index.size()) continue;
    if (index.slice(a, b) == literal) return {a, b};
  }
  throw Error(what + ": literal \"" + std::string(literal) +
              "\" does not match the text at [" + std::to_string(start) +
              ", " + std::to_string(stop) + ") or within the ±1 window");
}

int64_t parse_int(std::string_view field, const std::string& what) {
  int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(what + ": expected an integer, got \"" + std::string(field) +
                "\"");
  }
  return value;
}

void check_row(const StandoffRow& row, const std::string& what) {
  if (row.start >= row.stop) {
    throw Error(what + ": start " + std::to_string(row.start) +
                " is not before stop " + std::to_string(row.stop));
  }
  if (row.raw_label.empty()) throw Error(what + ": empty raw_label");
}

// Builds one annotation from a row, applying the literal rule: verify with
// off-by-one recovery when a literal is given, take the slice otherwise.
Annotation row_to_annotation(const StandoffRow& row,
                             const uni::CodePointIndex& index,
                             const std::string& doc_id,
                             const std::string& annotator,
                             const std::string& what) {
  check_row(row, what);
  Annotation ann;
  ann.doc_id = doc_id;
  ann.raw_label = row.raw_label;
  ann.annotator = annotator;
  if (row.literal) {
    std::tie(ann.start, ann.stop) =
        resolve_span(index, row.start, row.stop, *row.literal, what);
    ann.literal = *row.literal;
  } else {
    if (row.start < 0 || row.stop > index.size()) {
      throw Error(what + ": range [" + std::to_string(row.start) + ", " +
                  std::to_string(row.stop) + ") out of bounds for text of " +
                  std::to_string(index.size()) + " code points");
    }
    ann.start = row.start;
    ann.stop = row.stop;
    ann.literal = std::string(index.slice(row.start, row.stop));
  }
  return ann;
}

std::vector<std::filesystem::path> sorted_files(
    const std::filesystem::path& dir, std::string_view extension) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

}  // namespace

ParsedDocument parse_i2b2_xml(std::string_view xml_text,
                              const std::string& doc_id,
                              const std::string& annotator) {
  XmlElement root = XmlParser(xml_text).parse();

  const XmlElement* text_el = find_child(root, "TEXT");
  if (!text_el) {
    throw Error("document '" + doc_id + "': no TEXT element");
  }

  ParsedDocument out;
  out.document.doc_id = doc_id;
  out.document.text = text_el->has_cdata ? text_el->cdata : text_el->text;

  uni::CodePointIndex index(out.document.text);
  if (const XmlElement* tags_el = find_child(root, "TAGS")) {
    for (const XmlElement& tag : tags_el->children) {
      std::string tag_id = tag.attrs.count("id") ? tag.attrs.at("id")
                                                 : tag.name;
      std::string what = "document '" + doc_id + "' tag '" + tag_id + "'";
      for (const char* required : {"start", "end", "text"}) {
        if (!tag.attrs.count(required)) {
          throw Error(what + ": missing '" + std::string(required) +
                      "' attribute");
        }
      }
      Annotation ann;
      ann.doc_id = doc_id;
      ann.annotator = annotator;
      ann.raw_label = tag.attrs.count("TYPE") && !tag.attrs.at("TYPE").empty()
                          ? tag.attrs.at("TYPE")
                          : tag.name;
      int64_t start = parse_int(tag.attrs.at("start"), what);
      int64_t stop = parse_int(tag.attrs.at("end"), what);
      if (start >= stop) {
        throw Error(what + ": start " + std::to_string(start) +
                    " is not before end " + std::to_string(stop));
      }
      ann.literal = tag.attrs.at("text");
      std::tie(ann.start, ann.stop) =
          resolve_span(index, start, stop, ann.literal, what);
      out.annotations.push_back(std::move(ann));
    }
  }

  std::stable_sort(out.annotations.begin(), out.annotations.end(),
                   [](const Annotation& a, const Annotation& b) {
                     return std::pair(a.start, a.stop) <
                            std::pair(b.start, b.stop);
                   });
  return out;
}

ParsedDocument parse_standoff(const std::string& text,
                              const std::vector<StandoffRow>& rows,
                              const std::string& doc_id,
                              const std::string& annotator) {
  ParsedDocument out;
  out.document.doc_id = doc_id;
  out.document.text = text;

  uni::CodePointIndex index(out.document.text);
  for (size_t i = 0; i < rows.size(); ++i) {
    const StandoffRow& row = rows[i];
    std::string what = "document '" + doc_id + "' row " + std::to_string(i);
    if (!row.doc_id.empty() && row.doc_id != doc_id) {
      throw Error(what + ": doc_id '" + row.doc_id + "' does not match");
    }
    out.annotations.push_back(
        row_to_annotation(row, index, doc_id, annotator, what));
  }

  std::stable_sort(out.annotations.begin(), out.annotations.end(),
                   [](const Annotation& a, const Annotation& b) {
                     return std::pair(a.start, a.stop) <
                            std::pair(b.start, b.stop);
                   });
  return out;
}

std::vector<StandoffRow> read_standoff_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(path.string() + ": empty file (header row required)");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "doc_id\tstart\tstop\traw_label\tliteral") {
    throw Error(path.string() +
                ": expected header doc_id/start/stop/raw_label/literal");
  }

  std::vector<StandoffRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string what = path.string() + " line " + std::to_string(line_no);

    std::vector<std::string> fields;
    size_t begin = 0;
    for (;;) {
      size_t tab = line.find('\t', begin);
      fields.push_back(line.substr(begin, tab - begin));
      if (tab == std::string::npos) break;
      begin = tab + 1;
    }
    if (fields.size() != 5) {
      throw Error(what + ": expected 5 tab-separated fields, got " +
                  std::to_string(fields.size()));
    }

    StandoffRow row;
    row.doc_id = fields[0];
    row.start = parse_int(fields[1], what);
    row.stop = parse_int(fields[2], what);
    row.raw_label = fields[3];
    if (!fields[4].empty()) row.literal = fields[4];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<StandoffRow> read_standoff_jsonl(
    const std::filesystem::path& path) {
  std::vector<StandoffRow> rows;
  std::vector<nlohmann::json> lines = jsonl::read_file(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string what = path.string() + " row " + std::to_string(i);
    try {
      const nlohmann::json& obj = lines[i];
      StandoffRow row;
      row.doc_id = obj.at("doc_id").get<std::string>();
      row.start = obj.at("start").get<int64_t>();
      row.stop = obj.at("stop").get<int64_t>();
      row.raw_label = obj.at("raw_label").get<std::string>();
      if (obj.contains("literal") && !obj.at("literal").is_null()) {
        row.literal = obj.at("literal").get<std::string>();
      }
      rows.push_back(std::move(row));
    } catch (const nlohmann::json::exception& e) {
      throw Error(what + ": " + e.what());
    }
  }
  return rows;
}

std::vector<StandoffRow> read_standoff_file(
    const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  if (ext == ".tsv") return read_standoff_tsv(path);
  if (ext == ".jsonl") return read_standoff_jsonl(path);
  throw Error("unsupported standoff file extension '" + ext +
              "' (expected .tsv or .jsonl): " + path.string());
}

Corpus ingest_predictions(const Corpus& corpus,
                          const std::vector<StandoffRow>& rows,
                          const std::string& annotator, bool overwrite) {
  if (annotator.empty()) throw Error("annotator name is empty");
  if (!overwrite && corpus.annotation_sets.count(annotator) != 0) {
    throw Error("annotator '" + annotator +
                "' already present (pass overwrite to replace it)");
  }

  Corpus out = corpus;
  std::vector<Annotation>& anns = out.annotation_sets[annotator];
  anns.clear();

  std::map<std::string, uni::CodePointIndex> indexes;
  for (size_t i = 0; i < rows.size(); ++i) {
    const StandoffRow& row = rows[i];
    std::string what = "prediction row " + std::to_string(i);
    auto doc = out.documents.find(row.doc_id);
    if (doc == out.documents.end()) {
      throw Error(what + ": unknown doc_id '" + row.doc_id + "'");
    }
    auto index = indexes.try_emplace(row.doc_id, doc->second.text).first;
    anns.push_back(
        row_to_annotation(row, index->second, row.doc_id, annotator, what));
  }

  canonicalize(out);
  validate_corpus(out);
  return out;
}

Corpus ingest_i2b2_dir(const std::filesystem::path& dir,
                       const std::string& annotator) {
  Corpus corpus;
  for (const std::filesystem::path& path : sorted_files(dir, ".xml")) {
    std::string doc_id = path.stem().string();
    ParsedDocument parsed =
        parse_i2b2_xml(read_text_file(path), doc_id, annotator);
    parsed.document.source = path.filename().string();
    if (!corpus.documents.emplace(doc_id, parsed.document).second) {
      throw Error("duplicate doc_id '" + doc_id + "' in " + dir.string());
    }
    std::vector<Annotation>& anns = corpus.annotation_sets[annotator];
    anns.insert(anns.end(),
                std::make_move_iterator(parsed.annotations.begin()),
                std::make_move_iterator(parsed.annotations.end()));
  }
  if (corpus.documents.empty()) {
    throw Error("no .xml files found in " + dir.string());
  }
  canonicalize(corpus);
  validate_corpus(corpus);
  return corpus;
}

Corpus ingest_standoff_dir(const std::filesystem::path& dir,
                           const std::string& annotator) {
  std::vector<std::filesystem::path> texts = sorted_files(dir, ".txt");
  if (texts.empty()) throw Error("no .txt files found in " + dir.string());

  std::filesystem::path tsv = dir / "annotations.tsv";
  std::filesystem::path jsonl_path = dir / "annotations.jsonl";
  bool has_tsv = std::filesystem::exists(tsv);
  bool has_jsonl = std::filesystem::exists(jsonl_path);
  if (has_tsv && has_jsonl) {
    throw Error(dir.string() +
                " holds both annotations.tsv and annotations.jsonl");
  }

  std::map<std::string, std::vector<StandoffRow>> by_doc;
  if (has_tsv || has_jsonl) {
    for (StandoffRow& row : read_standoff_file(has_tsv ? tsv : jsonl_path)) {
      by_doc[row.doc_id].push_back(std::move(row));
    }
  }

  Corpus corpus;
  bool any_rows = has_tsv || has_jsonl;
  for (const std::filesystem::path& path : texts) {
    std::string doc_id = path.stem().string();
    auto rows = by_doc.find(doc_id);
    ParsedDocument parsed = parse_standoff(
        read_text_file(path),
        rows == by_doc.end() ? std::vector<StandoffRow>{} : rows->second,
        doc_id, annotator);
    if (rows != by_doc.end()) by_doc.erase(rows);
    parsed.document.source = path.filename().string();
    corpus.documents.emplace(doc_id, parsed.document);
    if (any_rows) {
      std::vector<Annotation>& anns = corpus.annotation_sets[annotator];
      anns.insert(anns.end(),
                  std::make_move_iterator(parsed.annotations.begin()),
                  std::make_move_iterator(parsed.annotations.end()));
    }
  }
  if (!by_doc.empty()) {
    throw Error("annotations reference unknown doc_id '" +
                by_doc.begin()->first + "' in " + dir.string());
  }
  canonicalize(corpus);
  validate_corpus(corpus);
  return corpus;
}

}  // namespace clipse
