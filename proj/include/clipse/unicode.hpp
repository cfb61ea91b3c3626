#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace clipse::uni {

// Character classes used by the tokenizers and gazetteer matcher. Word
// characters are Unicode letters, numbers, and underscore.
bool is_word(char32_t cp);
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::u32string& s);

// Decoded view of a UTF-8 string with code-point addressing. Invalid bytes
// are treated as one code point each with their byte value, so slices always
// reproduce the original bytes verbatim.
class CodePointIndex {
 public:
  explicit CodePointIndex(std::string_view text);

  int64_t size() const { return static_cast<int64_t>(points_.size()); }
  bool ascii_only() const { return ascii_only_; }
  char32_t at(int64_t i) const { return points_[static_cast<size_t>(i)]; }

  // Byte-range view of the code-point range [start, stop). Bounds-checked.
  std::string_view slice(int64_t start, int64_t stop) const;

  size_t byte_offset(int64_t cp) const;  // cp in [0, size()]

  // Index of the code point containing the given byte offset; byte offsets
  // inside a multibyte sequence round down. byte == byte length maps to
  // size().
  int64_t cp_at_byte(size_t byte) const;

  const std::u32string& points() const { return points_; }

 private:
  std::string_view text_;
  std::u32string points_;
  std::vector<uint32_t> byte_starts_;  // byte offset of each code point, plus end
  bool ascii_only_ = true;
};

// Number of code points in a UTF-8 string.
int64_t count_code_points(std::string_view text);

// Lowercased copy, code point by code point (1:1, length preserving).
std::u32string fold_case(std::string_view text);

}  // namespace clipse::uni
