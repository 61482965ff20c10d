#include "hts/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace hts {

namespace {

Diagnostic error(std::string_view code, std::string message, const SourceSpan& span) {
  return Diagnostic{std::string(code), DiagnosticSeverity::Error, std::move(message), span};
}

Diagnostic warning(std::string_view code, std::string message, const SourceSpan& span) {
  return Diagnostic{std::string(code), DiagnosticSeverity::Warning, std::move(message), span};
}

std::string quoted(std::string_view id) { return "'" + std::string(id) + "'"; }

bool is_node(const Model& model, std::string_view id) {
  return model.event(id) != nullptr || model.risk(id) != nullptr;
}

bool is_subject(const Model& model, std::string_view id) {
  return model.entity(id) != nullptr || model.interaction(id) != nullptr;
}

// True when every entity the coverage of `subject` depends on, participants
// and part_of chains included, resolves. Coverage is not judged otherwise;
// the dangling reference is reported on its own.
bool coverage_decidable(const Model& model, std::string_view subject) {
  auto chain_resolves = [&](std::string_view id) {
    const Entity* at = model.entity(id);
    for (std::size_t steps = 0; at != nullptr && at->parent && steps <= model.entities().size(); ++steps) {
      at = model.entity(at->parent->id);
    }
    return at != nullptr;
  };
  if (model.entity(subject) != nullptr) return chain_resolves(subject);
  const Interaction* interaction = model.interaction(subject);
  return interaction != nullptr && std::all_of(interaction->participants.begin(), interaction->participants.end(),
                                               [&](const IdRef& p) { return chain_resolves(p.id); });
}

// V101 for `ref` unless the caller already accepted it.
void expect_ref(std::vector<Diagnostic>& out, const Model& model, const IdRef& ref, std::string_view expected,
                std::string_view context, bool accepted) {
  if (accepted) return;
  std::string message = context.empty() ? "" : std::string(context) + ": ";
  if (auto kind = kind_of(model, ref.id)) {
    message += quoted(ref.id) + " is a " + std::string(to_string(*kind)) + ", expected " + std::string(expected);
  } else {
    message += "dangling reference " + quoted(ref.id) + " (expected " + std::string(expected) + ")";
  }
  out.push_back(error(codes::DanglingReference, std::move(message), ref.at.span));
}

void sort_by_span(std::vector<Diagnostic>& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return a.span.byte_start < b.span.byte_start;
  });
}

// Adjacency of the cause relation, source -> targets, restricted to ids
// that resolve to events or risks.
std::map<std::string, IdSet, IdLess> cause_successors(const Model& model) {
  std::map<std::string, IdSet, IdLess> succ;
  for (const auto& cause : model.causes()) {
    if (!is_node(model, cause.target.id)) continue;
    succ.try_emplace(cause.target.id);
    for (const auto& source : cause.sources) {
      if (!is_node(model, source.id)) continue;
      succ[source.id].insert(cause.target.id);
    }
  }
  return succ;
}

}  // namespace

bool subject_covered_by(const Model& model, std::string_view subject, std::string_view ancestor) {
  if (subject == ancestor) return true;
  if (model.entity(subject) != nullptr) return is_within(model, subject, ancestor);
  if (const Interaction* interaction = model.interaction(subject)) {
    return !interaction->participants.empty() &&
           std::all_of(interaction->participants.begin(), interaction->participants.end(),
                       [&](const IdRef& p) { return is_within(model, p.id, ancestor); });
  }
  return false;
}

std::vector<Diagnostic> check_references(const Model& model) {
  std::vector<Diagnostic> out;

  for (const auto& entity : model.entities()) {
    if (!entity.parent) continue;
    const Entity* parent = model.entity(entity.parent->id);
    expect_ref(out, model, *entity.parent, "an entity", "part_of of " + quoted(entity.id), parent != nullptr);
    if (parent != nullptr && parent->role != entity.role) {
      out.push_back(error(codes::SubjectMismatch,
                          quoted(entity.id) + " is a " + std::string(to_string(entity.role)) + " but its parent " +
                              quoted(parent->id) + " is a " + std::string(to_string(parent->role)),
                          entity.parent->at.span));
    }
  }
  // part_of cycles, reported once at the smallest id on the cycle.
  for (const auto& entity : model.entities()) {
    std::vector<std::string> path{entity.id};
    IdSet seen{entity.id};
    bool cyclic = false;
    const Entity* current = &entity;
    while (current != nullptr && current->parent) {
      const std::string& up = current->parent->id;
      if (up == entity.id) {
        cyclic = true;
        break;
      }
      if (!seen.insert(up).second) break;
      path.push_back(up);
      current = model.entity(up);
    }
    if (!cyclic || std::any_of(path.begin(), path.end(), [&](const std::string& id) { return id_less(id, entity.id); })) {
      continue;
    }
    std::string text;
    for (const auto& id : path) text += id + " -> ";
    out.push_back(error(codes::CausalCycle, "part_of cycle: " + text + entity.id, entity.at.span));
  }

  for (const auto& interaction : model.interactions()) {
    for (const auto& participant : interaction.participants) {
      expect_ref(out, model, participant, "an entity", "participant of " + quoted(interaction.id),
                 model.entity(participant.id) != nullptr);
    }
  }

  for (const auto& constraint : model.constraints()) {
    const bool resolves = is_subject(model, constraint.subject.id);
    expect_ref(out, model, constraint.subject, "an entity or interaction", "subject of " + quoted(constraint.id),
               resolves);
    if (!resolves) continue;
    const bool on_interaction = model.interaction(constraint.subject.id) != nullptr;
    if (constraint.kind == ConstraintKind::Interaction && !on_interaction) {
      out.push_back(error(codes::SubjectMismatch,
                          "interaction constraint " + quoted(constraint.id) + " is on entity " +
                              quoted(constraint.subject.id) + ", expected an interaction",
                          constraint.subject.at.span));
    } else if (constraint.kind == ConstraintKind::Subsystem && on_interaction) {
      out.push_back(error(codes::SubjectMismatch,
                          "subsystem constraint " + quoted(constraint.id) + " is on interaction " +
                              quoted(constraint.subject.id) + ", expected an entity",
                          constraint.subject.at.span));
    }
  }

  for (const auto& event : model.events()) {
    expect_ref(out, model, event.violates, "a constraint", "event " + quoted(event.id),
               model.constraint(event.violates.id) != nullptr);
  }

  for (const auto& risk : model.risks()) {
    expect_ref(out, model, risk.subject, "an entity or interaction", "subject of " + quoted(risk.id),
               is_subject(model, risk.subject.id));
  }

  for (const auto& cause : model.causes()) {
    expect_ref(out, model, cause.target, "an event or risk", "cause target", is_node(model, cause.target.id));
    for (const auto& source : cause.sources) {
      expect_ref(out, model, source, "an event or risk", "cause of " + quoted(cause.target.id),
                 is_node(model, source.id));
    }
  }

  for (const auto& loop : model.loops()) {
    const std::string context = "loop " + quoted(loop.id);
    expect_ref(out, model, loop.controller, "a controller", context, model.controller(loop.controller.id) != nullptr);
    const bool controls_ok = is_subject(model, loop.controls.id);
    expect_ref(out, model, loop.controls, "an entity or interaction", context, controls_ok);
    for (const auto& enforced : loop.enforces) {
      const SafetyConstraint* constraint = model.constraint(enforced.id);
      expect_ref(out, model, enforced, "a constraint", context, constraint != nullptr);
      if (constraint == nullptr || !controls_ok || !coverage_decidable(model, constraint->subject.id)) continue;
      if (!subject_covered_by(model, constraint->subject.id, loop.controls.id)) {
        out.push_back(error(codes::SubjectMismatch,
                            context + " controls " + quoted(loop.controls.id) + " but enforces " +
                                quoted(constraint->id) + " whose subject is " + quoted(constraint->subject.id),
                            enforced.at.span));
      }
    }
  }

  for (const auto& recommendation : model.recommendations()) {
    expect_ref(out, model, recommendation.for_controller, "a controller", "recommendation",
               model.controller(recommendation.for_controller.id) != nullptr);
  }

  sort_by_span(out);
  return out;
}

std::vector<Diagnostic> check_event_constraint_bijection(const Model& model) {
  std::vector<Diagnostic> out;
  std::map<std::string, const AdverseEvent*, IdLess> first_event;
  for (const auto& event : model.events()) {
    if (model.constraint(event.violates.id) == nullptr) continue;
    auto [it, inserted] = first_event.emplace(event.violates.id, &event);
    if (!inserted) {
      out.push_back(error(codes::SharedViolation,
                          "events " + quoted(it->second->id) + " and " + quoted(event.id) + " both violate " +
                              quoted(event.violates.id),
                          event.at.span));
    }
  }
  for (const auto& constraint : model.constraints()) {
    if (first_event.count(constraint.id) == 0) {
      out.push_back(warning(codes::UnviolatedConstraint,
                            "constraint " + quoted(constraint.id) + " has no corresponding adverse event",
                            constraint.at.span));
    }
  }
  sort_by_span(out);
  return out;
}

std::vector<Diagnostic> check_tier_monotonicity(const Model& model) {
  std::vector<Diagnostic> out;
  auto tier_of = [&](std::string_view id) -> std::optional<Tier> {
    try {
      return node_tier(model, id);
    } catch (const AnalysisError&) {
      return std::nullopt;
    }
  };
  for (const auto& cause : model.causes()) {
    const auto target_tier = tier_of(cause.target.id);
    if (!target_tier) continue;
    for (const auto& source : cause.sources) {
      const auto source_tier = tier_of(source.id);
      if (source_tier && *source_tier < *target_tier) {
        out.push_back(error(codes::UpwardCausation,
                            "upward causation: " + quoted(source.id) + " (" + std::string(to_string(*source_tier)) +
                                ") cannot cause " + quoted(cause.target.id) + " (" +
                                std::string(to_string(*target_tier)) + ")",
                            source.at.span));
      }
    }
  }
  sort_by_span(out);
  return out;
}

std::vector<Diagnostic> check_acyclicity(const Model& model) {
  const auto succ = cause_successors(model);
  enum class Mark { Fresh, Active, Done };
  std::map<std::string, Mark, IdLess> mark;
  std::vector<std::string> stack;
  std::vector<std::string> cycle;

  std::function<bool(const std::string&)> visit = [&](const std::string& node) {
    mark[node] = Mark::Active;
    stack.push_back(node);
    if (auto it = succ.find(node); it != succ.end()) {
      for (const auto& next : it->second) {
        const Mark m = mark.count(next) ? mark[next] : Mark::Fresh;
        if (m == Mark::Active) {
          auto from = std::find(stack.begin(), stack.end(), next);
          cycle.assign(from, stack.end());
          cycle.push_back(next);
          return true;
        }
        if (m == Mark::Fresh && visit(next)) return true;
      }
    }
    stack.pop_back();
    mark[node] = Mark::Done;
    return false;
  };

  for (const auto& [node, _] : succ) {
    if (mark.count(node) == 0 && visit(node)) break;
  }
  if (cycle.empty()) return {};

  std::string path;
  for (const auto& id : cycle) {
    if (!path.empty()) path += " -> ";
    path += id;
  }
  SourceSpan span;
  if (const CauseDecl* decl = model.cause_of(cycle[1])) span = decl->at.span;
  return {error(codes::CausalCycle, "cause cycle: " + path, span)};
}

std::vector<Diagnostic> check_enforcement_coverage(const Model& model) {
  IdSet enforced;
  for (const auto& loop : model.loops()) {
    for (const auto& ref : loop.enforces) enforced.insert(ref.id);
  }
  std::vector<Diagnostic> out;
  for (const auto& constraint : model.constraints()) {
    if (constraint.kind == ConstraintKind::Control) continue;
    if (enforced.count(constraint.id) == 0) {
      out.push_back(warning(codes::UnenforcedConstraint,
                            std::string(constraint.kind == ConstraintKind::Subsystem ? "subsystem" : "interaction") +
                                " constraint " + quoted(constraint.id) + " is not enforced by any control loop",
                            constraint.at.span));
    }
  }
  sort_by_span(out);
  return out;
}

std::vector<Diagnostic> check_risk_causes(const Model& model) {
  std::vector<Diagnostic> out;
  for (const auto& risk : model.risks()) {
    if (model.cause_of(risk.id) == nullptr) {
      out.push_back(warning(codes::UncausedRisk, "risk " + quoted(risk.id) + " has no cause declaration",
                            risk.at.span));
    }
  }
  sort_by_span(out);
  return out;
}

const std::vector<ValidationPass>& validation_passes() {
  static const std::vector<ValidationPass> passes = {
      {"references", &check_references},
      {"event_constraint_bijection", &check_event_constraint_bijection},
      {"tier_monotonicity", &check_tier_monotonicity},
      {"acyclicity", &check_acyclicity},
      {"enforcement_coverage", &check_enforcement_coverage},
      {"risk_causes", &check_risk_causes},
  };
  return passes;
}

ValidationReport validate(const Model& model) {
  ValidationReport report;
  for (const auto& pass : validation_passes()) {
    auto findings = pass.run(model);
    report.pass_results[std::string(pass.name)] = findings.size();
    report.diagnostics.insert(report.diagnostics.end(), findings.begin(), findings.end());
  }
  return report;
}

}  // namespace hts
