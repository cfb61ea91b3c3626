#include "clipse/parquet.hpp"

#include <cstring>
#include <fstream>

#include "clipse/thrift.hpp"
#include "clipse/types.hpp"

namespace clipse::parquet {

namespace {

using thrift::CompactReader;
using thrift::CompactWriter;
using thrift::CType;

constexpr char kMagic[4] = {'P', 'A', 'R', '1'};

// parquet.thrift enum values
constexpr int32_t kTypeInt32 = 1;
constexpr int32_t kTypeInt64 = 2;
constexpr int32_t kTypeByteArray = 6;
constexpr int32_t kConvertedUtf8 = 0;
constexpr int32_t kRepetitionRequired = 0;
constexpr int32_t kRepetitionOptional = 1;
constexpr int32_t kEncodingPlain = 0;
constexpr int32_t kEncodingPlainDictionary = 2;
constexpr int32_t kEncodingRle = 3;
constexpr int32_t kEncodingRleDictionary = 8;
constexpr int32_t kCodecUncompressed = 0;
constexpr int32_t kPageData = 0;
constexpr int32_t kPageDictionary = 2;
constexpr int32_t kPageDataV2 = 3;

void put_le32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_le64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t get_le32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint64_t get_le64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

// RLE-encodes a run-length sequence of 0/1 definition levels (bit width 1).
std::string rle_encode_bits(const std::vector<uint8_t>& levels) {
  std::string out;
  size_t i = 0;
  while (i < levels.size()) {
    size_t j = i;
    while (j < levels.size() && levels[j] == levels[i]) ++j;
    uint64_t run = j - i;
    // RLE run header: length << 1 (low bit 0)
    uint64_t header = run << 1;
    while (header >= 0x80) {
      out.push_back(static_cast<char>((header & 0x7F) | 0x80));
      header >>= 7;
    }
    out.push_back(static_cast<char>(header));
    out.push_back(static_cast<char>(levels[i]));
    i = j;
  }
  return out;
}

// Decodes `count` values from an RLE/bit-packed hybrid stream.
class RleBitDecoder {
 public:
  RleBitDecoder(const uint8_t* data, size_t size, int bit_width)
      : data_(data), size_(size), bit_width_(bit_width) {}

  void decode(std::vector<uint32_t>& out, size_t count) {
    out.reserve(out.size() + count);
    while (out.size() < count) {
      uint64_t header = varint();
      if ((header & 1) == 0) {
        uint64_t run = header >> 1;
        uint32_t value = 0;
        int bytes = (bit_width_ + 7) / 8;
        for (int i = 0; i < bytes; ++i) value |= static_cast<uint32_t>(byte()) << (8 * i);
        for (uint64_t i = 0; i < run && out.size() < count; ++i) out.push_back(value);
      } else {
        uint64_t groups = header >> 1;
        uint64_t nvals = groups * 8;
        uint64_t nbytes = groups * static_cast<uint64_t>(bit_width_);
        uint64_t bitpos = 0;
        if (pos_ + nbytes > size_) throw Error("parquet: bit-packed run out of range");
        const uint8_t* base = data_ + pos_;
        pos_ += nbytes;
        for (uint64_t i = 0; i < nvals && out.size() < count; ++i) {
          uint32_t v = 0;
          for (int b = 0; b < bit_width_; ++b, ++bitpos) {
            v |= static_cast<uint32_t>((base[bitpos >> 3] >> (bitpos & 7)) & 1) << b;
          }
          out.push_back(v);
        }
      }
    }
  }

 private:
  uint8_t byte() {
    if (pos_ >= size_) throw Error("parquet: RLE stream truncated");
    return data_[pos_++];
  }
  uint64_t varint() {
    uint64_t v = 0;
    int shift = 0;
    while (true) {
      uint8_t b = byte();
      v |= static_cast<uint64_t>(b & 0x7F) << shift;
      if (!(b & 0x80)) break;
      shift += 7;
    }
    return v;
  }

  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  int bit_width_;
};

std::string encode_plain(const Column& col) {
  std::string out;
  size_t n = col.num_values();
  if (col.type == PhysicalType::byte_array) {
    for (size_t i = 0; i < n; ++i) {
      if (col.nullable && !col.defined[i]) continue;
      put_le32(out, static_cast<uint32_t>(col.strings[i].size()));
      out.append(col.strings[i]);
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      if (col.nullable && !col.defined[i]) continue;
      put_le64(out, static_cast<uint64_t>(col.ints[i]));
    }
  }
  return out;
}

struct ChunkInfo {
  int64_t data_page_offset = 0;
  int64_t total_size = 0;
  int64_t num_values = 0;
};

std::string page_header(int64_t num_values, size_t payload_size) {
  CompactWriter w;
  w.begin_struct();
  w.field_i32(1, kPageData);
  w.field_i32(2, static_cast<int32_t>(payload_size));
  w.field_i32(3, static_cast<int32_t>(payload_size));
  w.field_struct(5);
  w.begin_struct();
  w.field_i32(1, static_cast<int32_t>(num_values));
  w.field_i32(2, kEncodingPlain);
  w.field_i32(3, kEncodingRle);
  w.field_i32(4, kEncodingRle);
  w.end_struct();
  w.end_struct();
  return w.data();
}

void write_column_metadata(CompactWriter& w, const Column& col, const ChunkInfo& info) {
  w.field_struct(3);
  w.begin_struct();
  w.field_i32(1, col.type == PhysicalType::byte_array ? kTypeByteArray : kTypeInt64);
  w.field_list(2, CType::i32, 2);
  w.raw_i32(kEncodingPlain);
  w.raw_i32(kEncodingRle);
  w.field_list(3, CType::binary, 1);
  w.raw_binary(col.name);
  w.field_i32(4, kCodecUncompressed);
  w.field_i64(5, info.num_values);
  w.field_i64(6, info.total_size);
  w.field_i64(7, info.total_size);
  w.field_i64(9, info.data_page_offset);
  w.end_struct();
}

}  // namespace

const Column* Table::find(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Column& Table::require(std::string_view name) const {
  if (const Column* c = find(name)) return *c;
  throw Error("parquet: missing required column '" + std::string(name) + "'");
}

void write_file(const Table& table, const std::filesystem::path& path) {
  for (const auto& col : table.columns) {
    if (static_cast<int64_t>(col.num_values()) != table.num_rows) {
      throw Error("parquet: column '" + col.name + "' length does not match num_rows");
    }
    if (col.nullable && static_cast<int64_t>(col.defined.size()) != table.num_rows) {
      throw Error("parquet: column '" + col.name + "' defined mask length mismatch");
    }
  }

  std::string out(kMagic, 4);
  std::vector<ChunkInfo> chunks;
  for (const auto& col : table.columns) {
    ChunkInfo info;
    info.data_page_offset = static_cast<int64_t>(out.size());
    info.num_values = table.num_rows;

    std::string payload;
    if (col.nullable) {
      std::string levels = rle_encode_bits(col.defined);
      put_le32(payload, static_cast<uint32_t>(levels.size()));
      payload.append(levels);
    }
    payload.append(encode_plain(col));

    std::string header = page_header(table.num_rows, payload.size());
    out.append(header);
    out.append(payload);
    info.total_size = static_cast<int64_t>(header.size() + payload.size());
    chunks.push_back(info);
  }

  // FileMetaData footer
  CompactWriter w;
  w.begin_struct();
  w.field_i32(1, 1);  // version
  w.field_list(2, CType::strct, table.columns.size() + 1);
  {
    w.begin_struct();  // root schema element
    w.field_binary(4, "schema");
    w.field_i32(5, static_cast<int32_t>(table.columns.size()));
    w.end_struct();
    for (const auto& col : table.columns) {
      w.begin_struct();
      w.field_i32(1, col.type == PhysicalType::byte_array ? kTypeByteArray : kTypeInt64);
      w.field_i32(3, col.nullable ? kRepetitionOptional : kRepetitionRequired);
      w.field_binary(4, col.name);
      if (col.type == PhysicalType::byte_array) {
        w.field_i32(6, kConvertedUtf8);
      }
      w.end_struct();
    }
  }
  w.field_i64(3, table.num_rows);
  if (table.num_rows == 0 || table.columns.empty()) {
    w.field_list(4, CType::strct, 0);
  } else {
    int64_t total = 0;
    for (const auto& c : chunks) total += c.total_size;
    w.field_list(4, CType::strct, 1);
    w.begin_struct();  // RowGroup
    w.field_list(1, CType::strct, table.columns.size());
    for (size_t i = 0; i < table.columns.size(); ++i) {
      w.begin_struct();  // ColumnChunk
      w.field_i64(2, chunks[i].data_page_offset);
      write_column_metadata(w, table.columns[i], chunks[i]);
      w.end_struct();
    }
    w.field_i64(2, total);
    w.field_i64(3, table.num_rows);
    w.end_struct();
  }
  w.field_binary(6, "clipse");
  w.end_struct();

  out.append(w.data());
  put_le32(out, static_cast<uint32_t>(w.data().size()));
  out.append(kMagic, 4);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  f.flush();
  if (!f) throw Error("failed writing '" + path.string() + "'");
}

namespace {

struct SchemaColumn {
  std::string name;
  int32_t type = -1;
  bool optional = false;
};

struct ChunkMeta {
  std::string path;
  int32_t type = -1;
  int32_t codec = 0;
  int64_t num_values = 0;
  int64_t data_page_offset = -1;
  int64_t dictionary_page_offset = -1;
};

struct RowGroupMeta {
  std::vector<ChunkMeta> chunks;
  int64_t num_rows = 0;
};

struct FileMeta {
  std::vector<SchemaColumn> schema;
  int64_t num_rows = 0;
  std::vector<RowGroupMeta> row_groups;
};

void parse_schema(CompactReader& r, FileMeta& meta) {
  CType elem;
  uint32_t n;
  r.read_list_header(elem, n);
  int root_children = -1;
  for (uint32_t i = 0; i < n; ++i) {
    SchemaColumn col;
    int32_t num_children = 0;
    r.begin_struct();
    CompactReader::FieldHeader f;
    while (r.next_field(f)) {
      switch (f.id) {
        case 1: col.type = r.read_i32(); break;
        case 3: col.optional = (r.read_i32() == kRepetitionOptional); break;
        case 4: col.name = r.read_binary(); break;
        case 5: num_children = r.read_i32(); break;
        default: r.skip(f.type); break;
      }
    }
    r.end_struct();
    if (i == 0) {
      root_children = num_children;
      continue;
    }
    if (num_children > 0) {
      throw Error("parquet: nested schemas are not supported (element '" + col.name + "')");
    }
    meta.schema.push_back(col);
  }
  if (root_children >= 0 && static_cast<size_t>(root_children) != meta.schema.size()) {
    throw Error("parquet: schema tree does not match flat column list");
  }
}

ChunkMeta parse_column_chunk(CompactReader& r) {
  ChunkMeta chunk;
  r.begin_struct();
  CompactReader::FieldHeader f;
  while (r.next_field(f)) {
    if (f.id == 3 && f.type == CType::strct) {
      r.begin_struct();
      CompactReader::FieldHeader g;
      while (r.next_field(g)) {
        switch (g.id) {
          case 1: chunk.type = r.read_i32(); break;
          case 3: {
            CType elem;
            uint32_t n;
            r.read_list_header(elem, n);
            std::string path;
            for (uint32_t i = 0; i < n; ++i) {
              if (i) path.push_back('.');
              path += r.read_binary();
            }
            chunk.path = path;
            break;
          }
          case 4: chunk.codec = r.read_i32(); break;
          case 5: chunk.num_values = r.read_i64(); break;
          case 9: chunk.data_page_offset = r.read_i64(); break;
          case 11: chunk.dictionary_page_offset = r.read_i64(); break;
          default: r.skip(g.type); break;
        }
      }
      r.end_struct();
    } else {
      r.skip(f.type);
    }
  }
  r.end_struct();
  return chunk;
}

FileMeta parse_file_metadata(const uint8_t* data, size_t size) {
  FileMeta meta;
  CompactReader r(data, size);
  r.begin_struct();
  CompactReader::FieldHeader f;
  while (r.next_field(f)) {
    switch (f.id) {
      case 2:
        parse_schema(r, meta);
        break;
      case 3:
        meta.num_rows = r.read_i64();
        break;
      case 4: {
        CType elem;
        uint32_t n;
        r.read_list_header(elem, n);
        for (uint32_t i = 0; i < n; ++i) {
          RowGroupMeta rg;
          r.begin_struct();
          CompactReader::FieldHeader g;
          while (r.next_field(g)) {
            if (g.id == 1) {
              CType celem;
              uint32_t cn;
              r.read_list_header(celem, cn);
              for (uint32_t c = 0; c < cn; ++c) rg.chunks.push_back(parse_column_chunk(r));
            } else if (g.id == 3) {
              rg.num_rows = r.read_i64();
            } else {
              r.skip(g.type);
            }
          }
          r.end_struct();
          meta.row_groups.push_back(std::move(rg));
        }
        break;
      }
      default:
        r.skip(f.type);
        break;
    }
  }
  return meta;
}

struct PageHeaderInfo {
  int32_t type = -1;
  int32_t compressed_size = 0;
  // v1 and v2 data page fields
  int64_t num_values = 0;
  int32_t encoding = kEncodingPlain;
  // v2 only
  int32_t num_nulls = 0;
  int32_t def_levels_byte_length = 0;
  int32_t rep_levels_byte_length = 0;
  // dictionary page
  int64_t dict_num_values = 0;
};

size_t parse_page_header(const uint8_t* data, size_t size, PageHeaderInfo& out) {
  CompactReader r(data, size);
  r.begin_struct();
  CompactReader::FieldHeader f;
  while (r.next_field(f)) {
    switch (f.id) {
      case 1: out.type = r.read_i32(); break;
      case 3: out.compressed_size = r.read_i32(); break;
      case 5: {  // DataPageHeader
        r.begin_struct();
        CompactReader::FieldHeader g;
        while (r.next_field(g)) {
          if (g.id == 1) out.num_values = r.read_i32();
          else if (g.id == 2) out.encoding = r.read_i32();
          else r.skip(g.type);
        }
        r.end_struct();
        break;
      }
      case 7: {  // DictionaryPageHeader
        r.begin_struct();
        CompactReader::FieldHeader g;
        while (r.next_field(g)) {
          if (g.id == 1) out.dict_num_values = r.read_i32();
          else r.skip(g.type);
        }
        r.end_struct();
        break;
      }
      case 8: {  // DataPageHeaderV2
        out.type = kPageDataV2;
        r.begin_struct();
        CompactReader::FieldHeader g;
        while (r.next_field(g)) {
          switch (g.id) {
            case 1: out.num_values = r.read_i32(); break;
            case 2: out.num_nulls = r.read_i32(); break;
            case 4: out.encoding = r.read_i32(); break;
            case 5: out.def_levels_byte_length = r.read_i32(); break;
            case 6: out.rep_levels_byte_length = r.read_i32(); break;
            default: r.skip(g.type); break;
          }
        }
        r.end_struct();
        break;
      }
      default:
        r.skip(f.type);
        break;
    }
  }
  return r.pos();
}

class PlainDecoder {
 public:
  PlainDecoder(const uint8_t* data, size_t size, int32_t physical)
      : data_(data), size_(size), physical_(physical) {}

  void read_string(std::string& out) {
    need(4);
    uint32_t len = get_le32(data_ + pos_);
    pos_ += 4;
    need(len);
    out.assign(reinterpret_cast<const char*>(data_ + pos_), len);
    pos_ += len;
  }

  int64_t read_int() {
    if (physical_ == kTypeInt32) {
      need(4);
      auto v = static_cast<int32_t>(get_le32(data_ + pos_));
      pos_ += 4;
      return v;
    }
    need(8);
    auto v = static_cast<int64_t>(get_le64(data_ + pos_));
    pos_ += 8;
    return v;
  }

 private:
  void need(size_t n) {
    if (pos_ + n > size_) throw Error("parquet: PLAIN data truncated");
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  int32_t physical_;
};

// Accumulates decoded values for one column across pages and row groups.
struct ColumnAccumulator {
  Column* col = nullptr;
  int32_t physical = -1;
  std::vector<std::string> dict_strings;
  std::vector<int64_t> dict_ints;

  void append_null() {
    if (col->type == PhysicalType::byte_array) col->strings.emplace_back();
    else col->ints.push_back(0);
    col->defined.push_back(0);
    col->nullable = true;
  }

  void append_string(std::string&& s) {
    col->strings.push_back(std::move(s));
    col->defined.push_back(1);
  }

  void append_int(int64_t v) {
    col->ints.push_back(v);
    col->defined.push_back(1);
  }
};

void decode_data_payload(ColumnAccumulator& acc, const PageHeaderInfo& page,
                         const uint8_t* payload, size_t payload_size, bool optional) {
  size_t pos = 0;
  std::vector<uint32_t> def_levels;
  if (page.type == kPageDataV2) {
    // rep levels (none expected for flat) then def levels, no length prefixes
    pos += static_cast<size_t>(page.rep_levels_byte_length);
    if (optional) {
      RleBitDecoder dec(payload + pos, static_cast<size_t>(page.def_levels_byte_length), 1);
      dec.decode(def_levels, static_cast<size_t>(page.num_values));
    }
    pos += static_cast<size_t>(page.def_levels_byte_length);
  } else if (optional) {
    if (pos + 4 > payload_size) throw Error("parquet: definition levels truncated");
    uint32_t len = get_le32(payload + pos);
    pos += 4;
    if (pos + len > payload_size) throw Error("parquet: definition levels truncated");
    RleBitDecoder dec(payload + pos, len, 1);
    dec.decode(def_levels, static_cast<size_t>(page.num_values));
    pos += len;
  }

  size_t n_defined = 0;
  if (optional) {
    for (uint32_t d : def_levels) n_defined += (d != 0);
  } else {
    n_defined = static_cast<size_t>(page.num_values);
  }

  auto emit = [&](auto&& next_string, auto&& next_int) {
    size_t produced = 0;
    for (int64_t i = 0; i < page.num_values; ++i) {
      bool present = !optional || def_levels[static_cast<size_t>(i)] != 0;
      if (!present) {
        acc.append_null();
        continue;
      }
      if (acc.col->type == PhysicalType::byte_array) {
        acc.append_string(next_string(produced));
      } else {
        acc.append_int(next_int(produced));
      }
      ++produced;
    }
  };

  if (page.encoding == kEncodingPlain) {
    PlainDecoder dec(payload + pos, payload_size - pos, acc.physical);
    std::vector<std::string> vals_s;
    std::vector<int64_t> vals_i;
    if (acc.col->type == PhysicalType::byte_array) {
      vals_s.resize(n_defined);
      for (auto& s : vals_s) dec.read_string(s);
    } else {
      vals_i.resize(n_defined);
      for (auto& v : vals_i) v = dec.read_int();
    }
    emit([&](size_t i) { return std::move(vals_s[i]); }, [&](size_t i) { return vals_i[i]; });
  } else if (page.encoding == kEncodingRleDictionary ||
             page.encoding == kEncodingPlainDictionary) {
    if (pos >= payload_size) throw Error("parquet: dictionary-encoded page truncated");
    int bit_width = payload[pos];
    ++pos;
    std::vector<uint32_t> indices;
    RleBitDecoder dec(payload + pos, payload_size - pos, bit_width);
    dec.decode(indices, n_defined);
    auto check = [&](uint32_t idx, size_t dict_size) {
      if (idx >= dict_size) throw Error("parquet: dictionary index out of range");
    };
    emit(
        [&](size_t i) {
          check(indices[i], acc.dict_strings.size());
          return acc.dict_strings[indices[i]];
        },
        [&](size_t i) {
          check(indices[i], acc.dict_ints.size());
          return acc.dict_ints[indices[i]];
        });
  } else {
    throw Error("parquet: unsupported data encoding " + std::to_string(page.encoding));
  }
}

void read_chunk(const std::vector<uint8_t>& file, const ChunkMeta& chunk,
                ColumnAccumulator& acc, bool optional) {
  if (chunk.codec != kCodecUncompressed) {
    throw Error("parquet: unsupported compression codec " + std::to_string(chunk.codec) +
                " in column '" + chunk.path + "'");
  }
  int64_t start = chunk.data_page_offset;
  if (chunk.dictionary_page_offset >= 0 && chunk.dictionary_page_offset < start) {
    start = chunk.dictionary_page_offset;
  }
  if (start < 0 || static_cast<size_t>(start) >= file.size()) {
    throw Error("parquet: column chunk offset out of range");
  }
  size_t pos = static_cast<size_t>(start);
  int64_t values_read = 0;
  while (values_read < chunk.num_values) {
    PageHeaderInfo page;
    pos += parse_page_header(file.data() + pos, file.size() - pos, page);
    if (pos + static_cast<size_t>(page.compressed_size) > file.size()) {
      throw Error("parquet: page extends past end of file");
    }
    const uint8_t* payload = file.data() + pos;
    auto payload_size = static_cast<size_t>(page.compressed_size);
    pos += payload_size;
    if (page.type == kPageDictionary) {
      PlainDecoder dec(payload, payload_size, acc.physical);
      if (acc.col->type == PhysicalType::byte_array) {
        acc.dict_strings.resize(static_cast<size_t>(page.dict_num_values));
        for (auto& s : acc.dict_strings) dec.read_string(s);
      } else {
        acc.dict_ints.resize(static_cast<size_t>(page.dict_num_values));
        for (auto& v : acc.dict_ints) v = dec.read_int();
      }
    } else if (page.type == kPageData || page.type == kPageDataV2) {
      decode_data_payload(acc, page, payload, payload_size, optional);
      values_read += page.num_values;
    } else {
      throw Error("parquet: unsupported page type " + std::to_string(page.type));
    }
  }
}

}  // namespace

Table read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "'");
  std::vector<uint8_t> file((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (file.size() < 12 || std::memcmp(file.data(), kMagic, 4) != 0 ||
      std::memcmp(file.data() + file.size() - 4, kMagic, 4) != 0) {
    throw Error("'" + path.string() + "' is not a parquet file");
  }
  uint32_t footer_len = get_le32(file.data() + file.size() - 8);
  if (static_cast<size_t>(footer_len) + 12 > file.size()) {
    throw Error("parquet: footer length out of range in '" + path.string() + "'");
  }
  size_t footer_start = file.size() - 8 - footer_len;
  FileMeta meta = parse_file_metadata(file.data() + footer_start, footer_len);

  Table table;
  table.num_rows = meta.num_rows;
  std::vector<ColumnAccumulator> accs(meta.schema.size());
  for (size_t i = 0; i < meta.schema.size(); ++i) {
    const auto& sc = meta.schema[i];
    Column col;
    col.name = sc.name;
    col.nullable = sc.optional;
    switch (sc.type) {
      case kTypeByteArray: col.type = PhysicalType::byte_array; break;
      case kTypeInt64:
      case kTypeInt32: col.type = PhysicalType::int64; break;
      default:
        throw Error("parquet: unsupported physical type " + std::to_string(sc.type) +
                    " for column '" + sc.name + "'");
    }
    table.columns.push_back(std::move(col));
    accs[i].physical = sc.type;
  }
  for (size_t i = 0; i < table.columns.size(); ++i) accs[i].col = &table.columns[i];

  for (const auto& rg : meta.row_groups) {
    for (const auto& chunk : rg.chunks) {
      bool matched = false;
      for (size_t i = 0; i < meta.schema.size(); ++i) {
        if (chunk.path == meta.schema[i].name) {
          accs[i].dict_strings.clear();
          accs[i].dict_ints.clear();
          read_chunk(file, chunk, accs[i], meta.schema[i].optional);
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw Error("parquet: column chunk '" + chunk.path + "' not in schema");
      }
    }
  }

  for (auto& col : table.columns) {
    if (static_cast<int64_t>(col.num_values()) != table.num_rows) {
      throw Error("parquet: column '" + col.name + "' has " +
                  std::to_string(col.num_values()) + " values, expected " +
                  std::to_string(table.num_rows));
    }
    if (!col.nullable) {
      col.defined.assign(static_cast<size_t>(table.num_rows), 1);
    }
  }
  return table;
}

}  // namespace clipse::parquet
