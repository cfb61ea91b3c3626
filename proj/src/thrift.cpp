#include "clipse/thrift.hpp"

#include "clipse/types.hpp"

namespace clipse::thrift {

void CompactWriter::begin_struct() {
  id_stack_.push_back(last_id_);
  last_id_ = 0;
}

void CompactWriter::end_struct() {
  buf_.push_back(0);  // stop
  last_id_ = id_stack_.back();
  id_stack_.pop_back();
}

void CompactWriter::field_header(int16_t id, CType type) {
  int delta = id - last_id_;
  if (delta > 0 && delta <= 15) {
    buf_.push_back(static_cast<char>((delta << 4) | static_cast<int>(type)));
  } else {
    buf_.push_back(static_cast<char>(type));
    raw_varint(zigzag(id));
  }
  last_id_ = id;
}

void CompactWriter::field_i32(int16_t id, int32_t v) {
  field_header(id, CType::i32);
  raw_i32(v);
}

void CompactWriter::field_i64(int16_t id, int64_t v) {
  field_header(id, CType::i64);
  raw_i64(v);
}

void CompactWriter::field_binary(int16_t id, std::string_view v) {
  field_header(id, CType::binary);
  raw_binary(v);
}

void CompactWriter::field_bool(int16_t id, bool v) {
  field_header(id, v ? CType::bool_true : CType::bool_false);
}

void CompactWriter::field_struct(int16_t id) { field_header(id, CType::strct); }

void CompactWriter::field_list(int16_t id, CType elem, size_t n) {
  field_header(id, CType::list);
  if (n < 15) {
    buf_.push_back(static_cast<char>((n << 4) | static_cast<size_t>(elem)));
  } else {
    buf_.push_back(static_cast<char>(0xF0 | static_cast<int>(elem)));
    raw_varint(n);
  }
}

void CompactWriter::raw_varint(uint64_t v) {
  while (v >= 0x80) {
    buf_.push_back(static_cast<char>((v & 0x7F) | 0x80));
    v >>= 7;
  }
  buf_.push_back(static_cast<char>(v));
}

void CompactWriter::raw_binary(std::string_view v) {
  raw_varint(v.size());
  buf_.append(v);
}

uint8_t CompactReader::byte() {
  if (pos_ >= size_) {
    throw Error("thrift: unexpected end of data");
  }
  return data_[pos_++];
}

void CompactReader::begin_struct() {
  id_stack_.push_back(last_id_);
  last_id_ = 0;
}

void CompactReader::end_struct() {
  last_id_ = id_stack_.back();
  id_stack_.pop_back();
}

bool CompactReader::next_field(FieldHeader& out) {
  uint8_t b = byte();
  if (b == 0) {
    return false;
  }
  auto type = static_cast<CType>(b & 0x0F);
  int delta = (b >> 4) & 0x0F;
  if (delta == 0) {
    last_id_ = static_cast<int16_t>(unzigzag(read_varint()));
  } else {
    last_id_ = static_cast<int16_t>(last_id_ + delta);
  }
  out.id = last_id_;
  out.type = type;
  out.bool_value = (type == CType::bool_true);
  if (type == CType::bool_true || type == CType::bool_false) {
    out.type = CType::bool_true;  // normalized; value is in bool_value
  }
  return true;
}

uint64_t CompactReader::read_varint() {
  uint64_t v = 0;
  int shift = 0;
  while (true) {
    uint8_t b = byte();
    v |= static_cast<uint64_t>(b & 0x7F) << shift;
    if (!(b & 0x80)) break;
    shift += 7;
    if (shift > 63) {
      throw Error("thrift: varint too long");
    }
  }
  return v;
}

std::string CompactReader::read_binary() {
  uint64_t n = read_varint();
  if (pos_ + n > size_) {
    throw Error("thrift: binary length out of range");
  }
  std::string out(reinterpret_cast<const char*>(data_ + pos_), n);
  pos_ += n;
  return out;
}

void CompactReader::read_list_header(CType& elem, uint32_t& n) {
  uint8_t b = byte();
  elem = static_cast<CType>(b & 0x0F);
  uint32_t size = (b >> 4) & 0x0F;
  if (size == 15) {
    size = static_cast<uint32_t>(read_varint());
  }
  n = size;
}

void CompactReader::skip(CType type) {
  switch (type) {
    case CType::bool_true:
    case CType::bool_false:
      return;  // value lives in the field header
    case CType::i8:
      byte();
      return;
    case CType::i16:
    case CType::i32:
    case CType::i64:
      read_varint();
      return;
    case CType::dbl:
      for (int i = 0; i < 8; ++i) byte();
      return;
    case CType::binary:
      read_binary();
      return;
    case CType::list:
    case CType::set: {
      CType elem;
      uint32_t n;
      read_list_header(elem, n);
      for (uint32_t i = 0; i < n; ++i) skip_element(elem);
      return;
    }
    case CType::map: {
      uint64_t n = read_varint();
      if (n > 0) {
        uint8_t kv = byte();
        auto kt = static_cast<CType>((kv >> 4) & 0x0F);
        auto vt = static_cast<CType>(kv & 0x0F);
        for (uint64_t i = 0; i < n; ++i) {
          skip_element(kt);
          skip_element(vt);
        }
      }
      return;
    }
    case CType::strct: {
      begin_struct();
      FieldHeader f;
      while (next_field(f)) skip(f.type);
      end_struct();
      return;
    }
    case CType::stop:
      return;
  }
}

void CompactReader::skip_element(CType type) {
  // Unlike struct fields, bool container elements occupy one byte.
  if (type == CType::bool_true || type == CType::bool_false) {
    byte();
    return;
  }
  skip(type);
}

}  // namespace clipse::thrift
