#include "hts/diagnostic.hpp"

#include <algorithm>

namespace hts {

std::string_view to_string(DiagnosticSeverity severity) {
  return severity == DiagnosticSeverity::Error ? "error" : "warning";
}

std::size_t error_count(const std::vector<Diagnostic>& diagnostics) {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.severity == DiagnosticSeverity::Error;
  }));
}

std::string format_diagnostic(const Diagnostic& diagnostic, std::string_view file) {
  std::string line = diagnostic.code;
  line += ' ';
  line += to_string(diagnostic.severity);
  line += ' ';
  line += file;
  line += ':' + std::to_string(diagnostic.span.line) + ':' + std::to_string(diagnostic.span.column) + ' ';
  line += diagnostic.message;
  return line;
}

}  // namespace hts
