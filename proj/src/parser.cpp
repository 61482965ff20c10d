#include <algorithm>
#include <array>
#include <map>

#include "hts/dsl.hpp"

namespace hts {

namespace {

constexpr std::array<std::string_view, 10> kItemKeywords = {
    "hazard", "target", "interaction", "risk",  "constraint",
    "event",                    "causes", "controller",  "loop",  "recommend",
};

// Raised after a diagnostic has been recorded; unwinds to the nearest
// recovery point.
struct SyntaxError {};

template <typename E>
struct WordChoice {
  std::string_view word;
  E value;
};

constexpr WordChoice<Severity> kSeverities[] = {
    {"near_miss", Severity::NearMiss},
    {"incident", Severity::Incident},
    {"accident", Severity::Accident},
    {"major_accident", Severity::MajorAccident},
};
constexpr WordChoice<ConstraintKind> kKinds[] = {
    {"subsystem", ConstraintKind::Subsystem},
    {"interaction", ConstraintKind::Interaction},
    {"control", ConstraintKind::Control},
};
constexpr WordChoice<Tier> kTiers[] = {{"micro", Tier::Micro}, {"meso", Tier::Meso}, {"macro", Tier::Macro}};
constexpr WordChoice<Domain> kDomains[] = {{"social", Domain::Social}, {"technical", Domain::Technical}};
constexpr WordChoice<RecommendationCategory> kCategories[] = {
    {"legislative", RecommendationCategory::Legislative},
    {"government", RecommendationCategory::Government},
    {"corporate", RecommendationCategory::Corporate},
    {"intermediary", RecommendationCategory::Intermediary},
    {"social_media", RecommendationCategory::SocialMedia},
    {"technical", RecommendationCategory::Technical},
};

std::string unescape(std::string_view literal) {
  std::string out;
  out.reserve(literal.size());
  for (std::size_t i = 1; i + 1 < literal.size(); ++i) {
    char c = literal[i];
    if (c == '\\' && i + 2 < literal.size()) {
      c = literal[++i];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: out += c; break;
      }
      continue;
    }
    out += c;
  }
  return out;
}

std::string describe(const Token& token) {
  if (token.kind == TokenKind::Eof) return "end of input";
  return "'" + std::string(token.text) + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view source) {
    for (const Token& token : tokenize(source)) {
      if (token.kind == TokenKind::Comment) continue;
      if (token.kind == TokenKind::Error) {
        report_lex_error(token);
        continue;
      }
      tokens_.push_back(token);
    }
  }

  ParseResult run() {
    parse_model();
    ParseResult result;
    result.diagnostics = std::move(diagnostics_);
    if (error_count(result.diagnostics) == 0) {
      result.model.emplace(std::move(data_));
    }
    return result;
  }

 private:
  // ---------------------------------------------------------------- tokens

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() {
    const Token& token = tokens_[pos_];
    if (token.kind != TokenKind::Eof) ++pos_;
    return token;
  }

  bool at_keyword(std::string_view word) const {
    return peek().kind == TokenKind::Keyword && peek().text == word;
  }
  bool at_punct(char c) const {
    return peek().kind == TokenKind::Punct && peek().text.size() == 1 && peek().text[0] == c;
  }
  bool at_item_start() const {
    if (peek().kind != TokenKind::Keyword) return false;
    return std::find(kItemKeywords.begin(), kItemKeywords.end(), peek().text) != kItemKeywords.end();
  }

  [[noreturn]] void fail(std::string_view code, const std::string& message, const SourceSpan& span) {
    error(code, message, span);
    throw SyntaxError{};
  }

  [[noreturn]] void unexpected(const std::string& expected) {
    fail(codes::UnexpectedToken, "expected " + expected + ", found " + describe(peek()), peek().span);
  }

  void error(std::string_view code, const std::string& message, const SourceSpan& span) {
    diagnostics_.push_back(Diagnostic{std::string(code), DiagnosticSeverity::Error, message, span});
  }

  void report_lex_error(const Token& token) {
    if (token.error_code == codes::UnterminatedString) {
      error(codes::UnterminatedString, "unterminated string literal", token.span);
    } else if (token.error_code == codes::UnknownKeyword) {
      error(codes::UnknownKeyword, "byte-order mark is not allowed; sources must be plain UTF-8", token.span);
    } else {
      error(codes::UnexpectedToken, "unexpected character " + describe(token), token.span);
    }
  }

  void expect_keyword(std::string_view word) {
    if (!at_keyword(word)) unexpected("'" + std::string(word) + "'");
    take();
  }

  void expect_punct(char c) {
    if (!at_punct(c)) unexpected(std::string("'") + c + "'");
    take();
  }

  IdRef expect_ident(std::string_view what) {
    if (peek().kind != TokenKind::Ident) unexpected(std::string(what));
    const Token& token = take();
    return IdRef(std::string(token.text), token.span);
  }

  std::optional<std::string> optional_string() {
    if (peek().kind != TokenKind::String) return std::nullopt;
    return unescape(take().text);
  }

  std::string expect_string(std::string_view what) {
    if (peek().kind != TokenKind::String) unexpected(std::string(what));
    return unescape(take().text);
  }

  // Enumerated words are ordinary identifiers (or, for `interaction`, a
  // keyword) matched in context.
  template <typename E, std::size_t N>
  E expect_choice(const WordChoice<E> (&choices)[N], std::string_view what) {
    const Token& token = peek();
    if (token.kind == TokenKind::Ident || token.kind == TokenKind::Keyword) {
      for (const auto& choice : choices) {
        if (choice.word == token.text) {
          take();
          return choice.value;
        }
      }
      if (token.kind == TokenKind::Ident) {
        std::string options;
        for (const auto& choice : choices) {
          if (!options.empty()) options += ", ";
          options += choice.word;
        }
        fail(codes::UnknownKeyword,
             "unknown " + std::string(what) + " '" + std::string(token.text) + "' (expected one of: " + options + ")",
             token.span);
      }
    }
    unexpected(std::string(what));
  }

  std::vector<IdRef> ident_list(std::string_view what, std::string_view owner) {
    std::vector<IdRef> ids;
    ids.push_back(expect_ident(what));
    while (at_punct(',')) {
      take();
      ids.push_back(expect_ident(what));
    }
    check_distinct(ids, owner);
    return ids;
  }

  void check_distinct(const std::vector<IdRef>& ids, std::string_view owner) {
    IdSet seen;
    for (const auto& ref : ids) {
      if (!seen.insert(ref.id).second) {
        fail(codes::DuplicateDeclaration, "'" + ref.id + "' is listed twice in " + std::string(owner), ref.at.span);
      }
    }
  }

  void declare(const IdRef& id) {
    auto [it, inserted] = declared_.emplace(id.id, id.at.span);
    if (!inserted) {
      fail(codes::DuplicateDeclaration,
           "duplicate declaration of '" + id.id + "' (first declared at line " + std::to_string(it->second.line) +
               ")",
           id.at.span);
    }
  }

  // -------------------------------------------------------------- recovery

  // Skips to the next declaration keyword or the closing brace of the
  // system block, stepping over nested blocks.
  void synchronize(std::size_t item_start) {
    if (pos_ == item_start) take();
    int depth = 0;
    while (peek().kind != TokenKind::Eof) {
      if (at_punct('{')) {
        ++depth;
      } else if (at_punct('}')) {
        if (depth == 0) return;
        --depth;
      } else if (depth == 0 && at_item_start()) {
        return;
      }
      take();
    }
  }

  // Skips past the closing brace of a block whose opening brace was consumed.
  void skip_block() {
    int depth = 0;
    while (peek().kind != TokenKind::Eof) {
      if (at_punct('{')) {
        ++depth;
      } else if (at_punct('}')) {
        take();
        if (depth == 0) return;
        --depth;
        continue;
      }
      take();
    }
  }

  // ---------------------------------------------------------------- grammar

  void parse_model() {
    try {
      expect_keyword("system");
      data_.name = expect_ident("system name").id;
      expect_punct('{');
    } catch (const SyntaxError&) {
      return;
    }
    while (peek().kind != TokenKind::Eof && !at_punct('}')) {
      const std::size_t item_start = pos_;
      try {
        parse_item();
      } catch (const SyntaxError&) {
        synchronize(item_start);
      }
    }
    if (peek().kind == TokenKind::Eof) {
      error(codes::UnexpectedToken, "expected '}' closing the system block, found end of input", peek().span);
      return;
    }
    take();
    if (peek().kind != TokenKind::Eof) {
      error(codes::UnexpectedToken, "unexpected " + describe(peek()) + " after the end of the system block",
            peek().span);
    }
  }

  void parse_item() {
    const Token& head = peek();
    if (head.kind == TokenKind::Ident) {
      fail(codes::UnknownKeyword, "unknown keyword '" + std::string(head.text) + "'", head.span);
    }
    if (!at_item_start()) unexpected("a declaration");
    const std::string_view word = head.text;
    if (word == "hazard" || word == "target") return parse_entity();
    if (word == "interaction") return parse_interaction();
    if (word == "risk") return parse_risk();
    if (word == "constraint") return parse_constraint();
    if (word == "event") return parse_event();
    if (word == "causes") return parse_cause();
    if (word == "controller") return parse_controller();
    if (word == "loop") return parse_loop();
    return parse_recommendation();
  }

  void parse_entity() {
    Entity entity;
    entity.role = take().text == "hazard" ? SystemRole::Hazard : SystemRole::Target;
    IdRef id = expect_ident("entity id");
    entity.id = id.id;
    entity.at.span = id.at.span;
    entity.label = optional_string().value_or("");
    if (at_keyword("part_of")) {
      take();
      entity.parent = expect_ident("parent entity id");
    }
    if (at_keyword("external")) {
      take();
      entity.external = true;
    }
    declare(id);
    data_.entities.push_back(std::move(entity));
  }

  void parse_interaction() {
    take();
    Interaction interaction;
    IdRef id = expect_ident("interaction id");
    interaction.id = id.id;
    interaction.at.span = id.at.span;
    expect_keyword("between");
    interaction.participants.push_back(expect_ident("participant id"));
    do {
      expect_punct(',');
      interaction.participants.push_back(expect_ident("participant id"));
    } while (at_punct(','));
    check_distinct(interaction.participants, "participants of '" + interaction.id + "'");
    interaction.label = optional_string().value_or("");
    declare(id);
    data_.interactions.push_back(std::move(interaction));
  }

  void parse_risk() {
    take();
    Risk risk;
    IdRef id = expect_ident("risk id");
    risk.id = id.id;
    risk.at.span = id.at.span;
    expect_keyword("kind");
    risk.severity = expect_choice(kSeverities, "risk kind");
    expect_keyword("on");
    risk.subject = expect_ident("subject id");
    risk.text = optional_string().value_or("");
    declare(id);
    data_.risks.push_back(std::move(risk));
  }

  void parse_constraint() {
    take();
    SafetyConstraint constraint;
    IdRef id = expect_ident("constraint id");
    constraint.id = id.id;
    constraint.at.span = id.at.span;
    expect_keyword("kind");
    constraint.kind = expect_choice(kKinds, "constraint kind");
    expect_keyword("level");
    constraint.tier = expect_choice(kTiers, "level");
    expect_keyword("on");
    constraint.subject = expect_ident("subject id");
    constraint.text = expect_string("constraint text");
    declare(id);
    data_.constraints.push_back(std::move(constraint));
  }

  void parse_event() {
    take();
    AdverseEvent event;
    IdRef id = expect_ident("event id");
    event.id = id.id;
    event.at.span = id.at.span;
    expect_keyword("violates");
    event.violates = expect_ident("constraint id");
    event.text = optional_string().value_or("");
    declare(id);
    data_.events.push_back(std::move(event));
  }

  void parse_cause() {
    take();
    CauseDecl cause;
    cause.target = expect_ident("cause target id");
    cause.at.span = cause.target.at.span;
    if (peek().kind != TokenKind::Arrow) unexpected("'<-'");
    take();
    if (at_keyword("all")) {
      cause.gate = Gate::All;
    } else if (at_keyword("any")) {
      cause.gate = Gate::Any;
    } else {
      unexpected("'all' or 'any'");
    }
    take();
    expect_punct('(');
    cause.sources = ident_list("source id", "causes of '" + cause.target.id + "'");
    expect_punct(')');
    auto [it, inserted] = cause_targets_.emplace(cause.target.id, cause.target.at.span);
    if (!inserted) {
      fail(codes::DuplicateDeclaration,
           "second causes declaration for '" + cause.target.id + "' (first at line " +
               std::to_string(it->second.line) + ")",
           cause.target.at.span);
    }
    data_.causes.push_back(std::move(cause));
  }

  void parse_controller() {
    take();
    Controller controller;
    IdRef id = expect_ident("controller id");
    controller.id = id.id;
    controller.at.span = id.at.span;
    expect_keyword("level");
    controller.tier = expect_choice(kTiers, "level");
    expect_keyword("domain");
    controller.domain = expect_choice(kDomains, "domain");
    controller.label = optional_string().value_or("");
    declare(id);
    data_.controllers.push_back(std::move(controller));
  }

  void parse_loop() {
    take();
    ControlLoop loop;
    IdRef id = expect_ident("loop id");
    loop.id = id.id;
    loop.at.span = id.at.span;
    expect_punct('{');
    try {
      expect_keyword("controller");
      loop.controller = expect_ident("controller id");
      expect_punct(';');
      expect_keyword("controls");
      loop.controls = expect_ident("controlled subject id");
      expect_punct(';');
      if (at_keyword("actuator")) {
        take();
        loop.actuator = expect_string("actuator label");
        expect_punct(';');
      }
      if (at_keyword("sensor")) {
        take();
        loop.sensor = expect_string("sensor label");
        expect_punct(';');
      }
      expect_keyword("enforces");
      loop.enforces = ident_list("constraint id", "enforces of '" + loop.id + "'");
      if (at_punct(';')) take();
      expect_punct('}');
    } catch (const SyntaxError&) {
      skip_block();
      return;
    }
    declare(id);
    data_.loops.push_back(std::move(loop));
  }

  void parse_recommendation() {
    const Token& head = take();
    Recommendation recommendation;
    recommendation.at.span = head.span;
    expect_keyword("for");
    recommendation.for_controller = expect_ident("controller id");
    expect_keyword("category");
    recommendation.category = expect_choice(kCategories, "category");
    recommendation.text = expect_string("recommendation text");
    data_.recommendations.push_back(std::move(recommendation));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diagnostics_;
  ModelData data_;
  std::map<std::string, SourceSpan, std::less<>> declared_;
  std::map<std::string, SourceSpan, std::less<>> cause_targets_;
};

}  // namespace

ParseResult parse(std::string_view source) { return Parser(source).run(); }

}  // namespace hts
