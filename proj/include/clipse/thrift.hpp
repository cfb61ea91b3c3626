#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace clipse::thrift {

// Thrift compact-protocol wire types.
enum class CType : uint8_t {
  stop = 0,
  bool_true = 1,
  bool_false = 2,
  i8 = 3,
  i16 = 4,
  i32 = 5,
  i64 = 6,
  dbl = 7,
  binary = 8,
  list = 9,
  set = 10,
  map = 11,
  strct = 12,
};

// Compact-protocol struct writer. Field ids must be written in increasing
// order within a struct.
class CompactWriter {
 public:
  void begin_struct();
  void end_struct();  // writes the stop field and pops the id context

  void field_i32(int16_t id, int32_t v);
  void field_i64(int16_t id, int64_t v);
  void field_binary(int16_t id, std::string_view v);
  void field_bool(int16_t id, bool v);
  // Writes the header for a struct-typed field; caller then begin_struct().
  void field_struct(int16_t id);
  // Writes the header for a list-typed field followed by the list header.
  void field_list(int16_t id, CType elem, size_t n);

  void raw_varint(uint64_t v);
  void raw_i32(int32_t v) { raw_varint(zigzag(v)); }
  void raw_i64(int64_t v) { raw_varint(zigzag(v)); }
  void raw_binary(std::string_view v);

  const std::string& data() const { return buf_; }

  static uint64_t zigzag(int64_t v) {
    return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
  }

 private:
  void field_header(int16_t id, CType type);

  std::string buf_;
  std::vector<int16_t> id_stack_;
  int16_t last_id_ = 0;
};

// Compact-protocol reader with skip support for unknown fields, enough to
// walk metadata written by other parquet implementations.
class CompactReader {
 public:
  CompactReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  struct FieldHeader {
    int16_t id = 0;
    CType type = CType::stop;
    bool bool_value = false;  // valid for bool fields
  };

  void begin_struct();
  void end_struct();
  // Returns false at the stop field.
  bool next_field(FieldHeader& out);
  void skip(CType type);
  void skip_element(CType type);

  uint64_t read_varint();
  int32_t read_i32() { return static_cast<int32_t>(unzigzag(read_varint())); }
  int64_t read_i64() { return static_cast<int64_t>(unzigzag(read_varint())); }
  std::string read_binary();
  void read_list_header(CType& elem, uint32_t& n);

  size_t pos() const { return pos_; }

  static int64_t unzigzag(uint64_t v) {
    return static_cast<int64_t>(v >> 1) ^ -static_cast<int64_t>(v & 1);
  }

 private:
  uint8_t byte();

  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
  std::vector<int16_t> id_stack_;
  int16_t last_id_ = 0;
};

}  // namespace clipse::thrift
