#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace clipse::parquet {

enum class PhysicalType { byte_array, int64 };

// One flat column. Value vectors are row-aligned; undefined rows hold a
// default-constructed value and are marked in `defined` when nullable.
struct Column {
  std::string name;
  PhysicalType type = PhysicalType::byte_array;
  bool nullable = false;
  std::vector<std::string> strings;
  std::vector<int64_t> ints;
  std::vector<uint8_t> defined;  // consulted only when nullable

  size_t num_values() const {
    return type == PhysicalType::byte_array ? strings.size() : ints.size();
  }
};

struct Table {
  int64_t num_rows = 0;
  std::vector<Column> columns;

  const Column* find(std::string_view name) const;
  const Column& require(std::string_view name) const;  // throws on miss
};

// Writes a single-row-group parquet file: PLAIN encoding, uncompressed,
// v1 data pages, definition levels for nullable columns.
void write_file(const Table& table, const std::filesystem::path& path);

// Reads a flat parquet file. Supports uncompressed PLAIN and
// dictionary-encoded (PLAIN_DICTIONARY / RLE_DICTIONARY) BYTE_ARRAY and
// INT64/INT32 columns, v1 and v2 data pages, multiple row groups.
Table read_file(const std::filesystem::path& path);

}  // namespace clipse::parquet
