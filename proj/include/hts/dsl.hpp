#pragma once

/// @file
/// The `.hts` modeling language: lexer, recursive-descent parser and the
/// canonical formatter.
///
///     model       := "system" IDENT "{" item* "}"
///     item        := entity | interaction | risk | constraint | event
///                  | cause | controller | loop | recommend
///     entity      := ("hazard" | "target") IDENT STRING? ("part_of" IDENT)? "external"?
///     interaction := "interaction" IDENT "between" IDENT ("," IDENT)+ STRING?
///     risk        := "risk" IDENT "kind" SEVERITY "on" IDENT STRING?
///     constraint  := "constraint" IDENT "kind" KIND "level" TIER "on" IDENT STRING
///     event       := "event" IDENT "violates" IDENT STRING?
///     cause       := "causes" IDENT "<-" ("all" | "any") "(" IDENT ("," IDENT)* ")"
///     controller  := "controller" IDENT "level" TIER "domain" ("social" | "technical") STRING?
///     loop        := "loop" IDENT "{" "controller" IDENT ";" "controls" IDENT ";"
///                    ("actuator" STRING ";")? ("sensor" STRING ";")?
///                    "enforces" IDENT ("," IDENT)* ";"? "}"
///     recommend   := "recommend" "for" IDENT "category" IDENT STRING
///
/// Identifiers may contain dots (SC1.1, E2.28). Comments run from `#` to the
/// end of the line. Sources must be UTF-8 without a byte-order mark.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hts/diagnostic.hpp"
#include "hts/model.hpp"

namespace hts {

enum class TokenKind { Keyword, Ident, String, Punct, Arrow, Comment, Error, Eof };

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string_view text;  // slice of the source
  SourceSpan span;
  /// For Error tokens: the diagnostic code the parser reports for it.
  std::string_view error_code;
};

/// Splits `source` into tokens. Never fails: bytes that cannot start a token
/// become Error tokens. The final token is always Eof.
std::vector<Token> tokenize(std::string_view source);

/// True for words the lexer reserves as keywords.
bool is_keyword(std::string_view word);

/// True when `text` matches the IDENT production exactly.
bool is_identifier(std::string_view text);

struct ParseResult {
  std::optional<Model> model;  // absent when any Error diagnostic was produced
  std::vector<Diagnostic> diagnostics;
};

/// Parses one `.hts` document. Recovers at declaration boundaries so that
/// independent errors are all reported in one call.
ParseResult parse(std::string_view source);

/// Canonical `.hts` text for `model`: two-space indent, one declaration per
/// line, groups in a fixed order, each sorted by id, LF endings.
std::string format_canonical(const Model& model);

/// The source spelling of a string literal, with quotes and escapes.
std::string quote_string(std::string_view text);

}  // namespace hts
