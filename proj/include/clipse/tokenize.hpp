#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace clipse {

// One text token. Offsets in code points; text equals the slice.
struct Token {
  int64_t start = 0;
  int64_t stop = 0;
  std::string text;

  bool operator==(const Token&) const = default;
};

// Maximal runs of word characters (letters, digits, underscore) or of
// non-word non-space characters. Whitespace never appears inside a token.
std::vector<Token> tokenize_wordpunct(std::string_view text);

// Maximal runs of non-whitespace.
std::vector<Token> tokenize_whitespace(std::string_view text);

using Tokenizer = std::vector<Token> (*)(std::string_view);

// Registry lookup; knows "wordpunct" (the default) and "whitespace".
// Throws Error on unknown names.
Tokenizer get_tokenizer(std::string_view name);

inline constexpr std::string_view kDefaultTokenizer = "wordpunct";

}  // namespace clipse
