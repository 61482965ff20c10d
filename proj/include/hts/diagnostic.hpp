#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hts/model.hpp"

namespace hts {

enum class DiagnosticSeverity { Error, Warning };

std::string_view to_string(DiagnosticSeverity severity);  // "error" / "warning"

/// A coded finding. Codes come from the registry in docs/codes.md:
/// P0xx for parse findings, V1xx for validation findings.
struct Diagnostic {
  std::string code;
  DiagnosticSeverity severity = DiagnosticSeverity::Error;
  std::string message;
  SourceSpan span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

namespace codes {
inline constexpr std::string_view UnexpectedToken = "P001";
inline constexpr std::string_view UnterminatedString = "P002";
inline constexpr std::string_view DuplicateDeclaration = "P003";
inline constexpr std::string_view UnknownKeyword = "P004";

inline constexpr std::string_view DanglingReference = "V101";
inline constexpr std::string_view SubjectMismatch = "V102";
inline constexpr std::string_view SharedViolation = "V110";
inline constexpr std::string_view UnviolatedConstraint = "V111";
inline constexpr std::string_view UpwardCausation = "V120";
inline constexpr std::string_view CausalCycle = "V130";
inline constexpr std::string_view UnenforcedConstraint = "V140";
inline constexpr std::string_view UncausedRisk = "V141";
}  // namespace codes

std::size_t error_count(const std::vector<Diagnostic>& diagnostics);

/// `CODE severity file:line:col message`
std::string format_diagnostic(const Diagnostic& diagnostic, std::string_view file);

}  // namespace hts
