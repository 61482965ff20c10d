#pragma once

/// @file
/// Semantic validation passes. A model whose report has no Error
/// diagnostics is "validated" and may be turned into a flow graph.

#include <map>
#include <string>
#include <vector>

#include "hts/diagnostic.hpp"
#include "hts/model.hpp"

namespace hts {

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, std::size_t> pass_results;  // pass name -> findings

  std::size_t error_count() const { return hts::error_count(diagnostics); }
  std::size_t warning_count() const { return diagnostics.size() - error_count(); }
};

/// V101 dangling or wrongly-typed references; V102 subject mismatches
/// (loop subject does not cover an enforced constraint, constraint kind does
/// not fit its subject, part_of across roles); V130 part_of cycles.
std::vector<Diagnostic> check_references(const Model& model);

/// V110 two events violating one constraint; V111 (warning) constraint
/// without an event.
std::vector<Diagnostic> check_event_constraint_bijection(const Model& model);

/// V120 for each cause edge whose source sits on a lower tier than its target.
std::vector<Diagnostic> check_tier_monotonicity(const Model& model);

/// V130 with one representative cycle of the cause relation.
std::vector<Diagnostic> check_acyclicity(const Model& model);

/// V140 (warning) for a subsystem or interaction constraint that no loop enforces.
std::vector<Diagnostic> check_enforcement_coverage(const Model& model);

/// V141 (warning) for a risk without a cause declaration.
std::vector<Diagnostic> check_risk_causes(const Model& model);

struct ValidationPass {
  std::string_view name;
  std::vector<Diagnostic> (*run)(const Model&);
};

/// The passes in their reporting order.
const std::vector<ValidationPass>& validation_passes();

/// Runs every pass; diagnostics ordered by pass, then by span.
ValidationReport validate(const Model& model);

/// True when `subject` is `ancestor`, an entity below it on the part_of
/// chain, or an interaction whose participants all are.
bool subject_covered_by(const Model& model, std::string_view subject, std::string_view ancestor);

}  // namespace hts
