#include "clipse/tokenize.hpp"

#include "clipse/types.hpp"
#include "clipse/unicode.hpp"

namespace clipse {

namespace {

enum class CharClass { space, word, punct };

CharClass classify(char32_t cp) {
  if (uni::is_space(cp)) return CharClass::space;
  if (uni::is_word(cp)) return CharClass::word;
  return CharClass::punct;
}

}  // namespace

std::vector<Token> tokenize_wordpunct(std::string_view text) {
  uni::CodePointIndex index(text);
  std::vector<Token> tokens;
  int64_t n = index.size();
  int64_t start = -1;
  CharClass run_class = CharClass::space;
  for (int64_t i = 0; i <= n; ++i) {
    CharClass cls = i < n ? classify(index.at(i)) : CharClass::space;
    if (start >= 0 && cls != run_class) {
      tokens.push_back({start, i, std::string(index.slice(start, i))});
      start = -1;
    }
    if (start < 0 && cls != CharClass::space) {
      start = i;
      run_class = cls;
    }
  }
  return tokens;
}

std::vector<Token> tokenize_whitespace(std::string_view text) {
  uni::CodePointIndex index(text);
  std::vector<Token> tokens;
  int64_t n = index.size();
  int64_t start = -1;
  for (int64_t i = 0; i <= n; ++i) {
    bool space = i == n || uni::is_space(index.at(i));
    if (start >= 0 && space) {
      tokens.push_back({start, i, std::string(index.slice(start, i))});
      start = -1;
    } else if (start < 0 && !space) {
      start = i;
    }
  }
  return tokens;
}

Tokenizer get_tokenizer(std::string_view name) {
  if (name == "wordpunct") return &tokenize_wordpunct;
  if (name == "whitespace") return &tokenize_whitespace;
  throw Error("unknown tokenizer '" + std::string(name) +
              "' (known: wordpunct, whitespace)");
}

}  // namespace clipse
