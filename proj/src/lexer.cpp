#include <array>
#include <algorithm>

#include "hts/dsl.hpp"

namespace hts {

namespace {

constexpr std::array<std::string_view, 27> kKeywords = {
    "all",      "any",        "actuator", "between",  "category", "causes",  "constraint",
    "controller",                 "controls",   "domain",   "enforces", "event",    "external", "for",
    "hazard",                     "interaction", "kind",    "level",    "loop",     "on",       "part_of",
    "recommend",                  "risk",       "sensor",   "system",   "target",   "violates",
};

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_word(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

// Length of the UTF-8 sequence introduced by `lead`; 1 for stray bytes.
std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0 && lead <= 0xF7) return 4;
  if (lead >= 0xE0) return lead <= 0xEF ? 3 : 1;
  if (lead >= 0xC0) return 2;
  return 1;
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : source_(source) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    if (source_.substr(0, 3) == "\xEF\xBB\xBF") {
      tokens.push_back(make(TokenKind::Error, 3, "P004"));
    }
    while (true) {
      skip_whitespace();
      if (pos_ >= source_.size()) break;
      tokens.push_back(next());
    }
    tokens.push_back(make(TokenKind::Eof, 0));
    return tokens;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < source_.size() ? source_[pos_ + ahead] : '\0';
  }

  // Builds a token of `length` bytes at the cursor and advances past it.
  Token make(TokenKind kind, std::size_t length, std::string_view error_code = {}) {
    Token token;
    token.kind = kind;
    token.text = source_.substr(pos_, length);
    token.span = SourceSpan{pos_, pos_ + length, line_, column_};
    token.error_code = error_code;
    advance(length);
    return token;
  }

  void advance(std::size_t length) {
    for (std::size_t i = 0; i < length && pos_ < source_.size(); ++i, ++pos_) {
      const auto c = static_cast<unsigned char>(source_[pos_]);
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column_;
      }
    }
  }

  void skip_whitespace() {
    while (pos_ < source_.size()) {
      const char c = source_[pos_];
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
      advance(1);
    }
  }

  Token next() {
    const char c = peek();
    if (c == '#') {
      std::size_t end = source_.find('\n', pos_);
      if (end == std::string_view::npos) end = source_.size();
      return make(TokenKind::Comment, end - pos_);
    }
    if (c == '"') return string_literal();
    if (is_alpha(c)) return word();
    if (c == '<' && peek(1) == '-') return make(TokenKind::Arrow, 2);
    if (c == '{' || c == '}' || c == '(' || c == ')' || c == ',' || c == ';') return make(TokenKind::Punct, 1);
    const std::size_t length = std::min(utf8_length(static_cast<unsigned char>(c)), source_.size() - pos_);
    return make(TokenKind::Error, length, "P001");
  }

  Token word() {
    std::size_t end = pos_;
    while (end < source_.size() && is_word(source_[end])) ++end;
    while (end + 1 < source_.size() && source_[end] == '.' && is_word(source_[end + 1])) {
      end += 1;
      while (end < source_.size() && is_word(source_[end])) ++end;
    }
    const std::string_view text = source_.substr(pos_, end - pos_);
    return make(is_keyword(text) ? TokenKind::Keyword : TokenKind::Ident, end - pos_);
  }

  // Strings end at the closing quote; a raw newline or end of input first
  // makes the literal unterminated.
  Token string_literal() {
    std::size_t end = pos_ + 1;
    while (end < source_.size()) {
      const char c = source_[end];
      if (c == '"') return make(TokenKind::String, end + 1 - pos_);
      if (c == '\n') break;
      if (c == '\\' && end + 1 < source_.size() && source_[end + 1] != '\n') {
        end += 2;
        continue;
      }
      ++end;
    }
    std::size_t length = end - pos_;
    if (length > 1 && source_[pos_ + length - 1] == '\r') --length;
    return make(TokenKind::Error, length, "P002");
  }

  std::string_view source_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t column_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Ident: return "Ident";
    case TokenKind::String: return "String";
    case TokenKind::Punct: return "Punct";
    case TokenKind::Arrow: return "Arrow";
    case TokenKind::Comment: return "Comment";
    case TokenKind::Error: return "Error";
    case TokenKind::Eof: return "Eof";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_identifier(std::string_view text) {
  if (text.empty() || !is_alpha(text.front()) || is_keyword(text)) return false;
  std::size_t i = 0;
  while (i < text.size() && is_word(text[i])) ++i;
  while (i < text.size()) {
    if (text[i] != '.' || i + 1 >= text.size() || !is_word(text[i + 1])) return false;
    ++i;
    while (i < text.size() && is_word(text[i])) ++i;
  }
  return true;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace hts
