#include "clipse/unicode.hpp"

#include <algorithm>

#include "clipse/types.hpp"

namespace clipse::uni {

#include "unicode_tables.inc"

namespace {

template <size_t N>
bool in_ranges(const uint32_t (&table)[N][2], char32_t cp) {
  auto key = static_cast<uint32_t>(cp);
  size_t lo = 0, hi = N;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (key < table[mid][0]) {
      hi = mid;
    } else if (key > table[mid][1]) {
      lo = mid + 1;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_word(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9') || cp == '_';
  }
  return in_ranges(kAlnumRanges, cp);
}

bool is_space(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x20: case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  }
  auto key = static_cast<uint32_t>(cp);
  constexpr size_t n = sizeof(kLowerPairs) / sizeof(kLowerPairs[0]);
  size_t lo = 0, hi = n;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (kLowerPairs[mid][0] < key) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < n && kLowerPairs[lo][0] == key) {
    return kLowerPairs[lo][1];
  }
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  uint32_t c = cp;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode_utf8(const std::u32string& s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

namespace {

// Decodes one code point starting at byte i; returns its byte length.
// An invalid sequence decodes as a single byte with that byte's value.
size_t decode_one(std::string_view text, size_t i, char32_t& cp) {
  auto b = [&](size_t k) { return static_cast<uint8_t>(text[k]); };
  uint8_t b0 = b(i);
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  auto cont = [&](size_t k) {
    return k < text.size() && (b(k) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    char32_t v = (static_cast<char32_t>(b0 & 0x1F) << 6) | (b(i + 1) & 0x3F);
    if (v >= 0x80) {
      cp = v;
      return 2;
    }
  } else if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    char32_t v = (static_cast<char32_t>(b0 & 0x0F) << 12) |
                 (static_cast<char32_t>(b(i + 1) & 0x3F) << 6) | (b(i + 2) & 0x3F);
    if (v >= 0x800 && !(v >= 0xD800 && v <= 0xDFFF)) {
      cp = v;
      return 3;
    }
  } else if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    char32_t v = (static_cast<char32_t>(b0 & 0x07) << 18) |
                 (static_cast<char32_t>(b(i + 1) & 0x3F) << 12) |
                 (static_cast<char32_t>(b(i + 2) & 0x3F) << 6) | (b(i + 3) & 0x3F);
    if (v >= 0x10000 && v <= 0x10FFFF) {
      cp = v;
      return 4;
    }
  }
  cp = b0;
  return 1;
}

}  // namespace

CodePointIndex::CodePointIndex(std::string_view text) : text_(text) {
  points_.reserve(text.size());
  byte_starts_.reserve(text.size() + 1);
  size_t i = 0;
  while (i < text.size()) {
    byte_starts_.push_back(static_cast<uint32_t>(i));
    char32_t cp = 0;
    i += decode_one(text, i, cp);
    points_.push_back(cp);
    if (cp >= 0x80) ascii_only_ = false;
  }
  byte_starts_.push_back(static_cast<uint32_t>(text.size()));
}

std::string_view CodePointIndex::slice(int64_t start, int64_t stop) const {
  if (start < 0 || stop < start || stop > size()) {
    throw Error("code point range [" + std::to_string(start) + ", " +
                std::to_string(stop) + ") out of bounds for text of length " +
                std::to_string(size()));
  }
  size_t a = byte_starts_[static_cast<size_t>(start)];
  size_t b = byte_starts_[static_cast<size_t>(stop)];
  return text_.substr(a, b - a);
}

size_t CodePointIndex::byte_offset(int64_t cp) const {
  return byte_starts_[static_cast<size_t>(std::clamp<int64_t>(cp, 0, size()))];
}

int64_t CodePointIndex::cp_at_byte(size_t byte) const {
  if (byte >= text_.size()) return size();
  if (ascii_only_) return static_cast<int64_t>(byte);
  auto it = std::upper_bound(byte_starts_.begin(), byte_starts_.end(),
                             static_cast<uint32_t>(byte));
  return static_cast<int64_t>(it - byte_starts_.begin()) - 1;
}

int64_t count_code_points(std::string_view text) {
  int64_t n = 0;
  size_t i = 0;
  while (i < text.size()) {
    char32_t cp = 0;
    i += decode_one(text, i, cp);
    ++n;
  }
  return n;
}

std::u32string fold_case(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    char32_t cp = 0;
    i += decode_one(text, i, cp);
    out.push_back(to_lower(cp));
  }
  return out;
}

}  // namespace clipse::uni
