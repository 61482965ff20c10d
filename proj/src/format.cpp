#include <sstream>

#include "hts/dsl.hpp"

namespace hts {

namespace {

std::string_view severity_word(Severity severity) {
  switch (severity) {
    case Severity::NearMiss: return "near_miss";
    case Severity::Incident: return "incident";
    case Severity::Accident: return "accident";
    case Severity::MajorAccident: return "major_accident";
    case Severity::Safe: break;
  }
  return "safe";
}

std::string_view kind_word(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Subsystem: return "subsystem";
    case ConstraintKind::Interaction: return "interaction";
    case ConstraintKind::Control: return "control";
  }
  return "?";
}

std::string_view tier_word(Tier tier) {
  switch (tier) {
    case Tier::Micro: return "micro";
    case Tier::Meso: return "meso";
    case Tier::Macro: return "macro";
    case Tier::Risk: break;
  }
  return "risk";
}

std::string_view category_word(RecommendationCategory category) {
  switch (category) {
    case RecommendationCategory::Legislative: return "legislative";
    case RecommendationCategory::Government: return "government";
    case RecommendationCategory::Corporate: return "corporate";
    case RecommendationCategory::Intermediary: return "intermediary";
    case RecommendationCategory::SocialMedia: return "social_media";
    case RecommendationCategory::Technical: return "technical";
  }
  return "?";
}

std::string join_ids(const std::vector<IdRef>& refs) {
  std::string out;
  for (const auto& ref : refs) {
    if (!out.empty()) out += ", ";
    out += ref.id;
  }
  return out;
}

void optional_label(std::ostream& out, const std::string& label) {
  if (!label.empty()) out << ' ' << quote_string(label);
}

// Emits one group of declarations, separated from the previous group by a
// blank line.
template <typename T, typename Fn>
void group(std::ostream& out, bool& first, const std::vector<T>& items, Fn&& line) {
  if (items.empty()) return;
  if (!first) out << '\n';
  first = false;
  for (const auto& item : items) {
    out << "  ";
    line(item);
    out << '\n';
  }
}

}  // namespace

std::string quote_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c; break;
    }
  }
  out += '"';
  return out;
}

std::string format_canonical(const Model& model) {
  std::ostringstream out;
  out << "system " << model.name() << " {\n";
  bool first = true;

  group(out, first, model.entities(), [&](const Entity& e) {
    out << (e.role == SystemRole::Hazard ? "hazard " : "target ") << e.id;
    optional_label(out, e.label);
    if (e.parent) out << " part_of " << e.parent->id;
    if (e.external) out << " external";
  });
  group(out, first, model.interactions(), [&](const Interaction& i) {
    out << "interaction " << i.id << " between " << join_ids(i.participants);
    optional_label(out, i.label);
  });
  group(out, first, model.risks(), [&](const Risk& r) {
    out << "risk " << r.id << " kind " << severity_word(r.severity) << " on " << r.subject.id;
    optional_label(out, r.text);
  });
  group(out, first, model.constraints(), [&](const SafetyConstraint& c) {
    out << "constraint " << c.id << " kind " << kind_word(c.kind) << " level " << tier_word(c.tier) << " on "
        << c.subject.id << ' ' << quote_string(c.text);
  });
  group(out, first, model.events(), [&](const AdverseEvent& e) {
    out << "event " << e.id << " violates " << e.violates.id;
    optional_label(out, e.text);
  });
  group(out, first, model.causes(), [&](const CauseDecl& c) {
    out << "causes " << c.target.id << " <- " << (c.gate == Gate::All ? "all" : "any") << '(' << join_ids(c.sources)
        << ')';
  });
  group(out, first, model.controllers(), [&](const Controller& c) {
    out << "controller " << c.id << " level " << tier_word(c.tier) << " domain "
        << (c.domain == Domain::Social ? "social" : "technical");
    optional_label(out, c.label);
  });
  group(out, first, model.loops(), [&](const ControlLoop& l) {
    out << "loop " << l.id << " { controller " << l.controller.id << "; controls " << l.controls.id << ";";
    if (l.actuator) out << " actuator " << quote_string(*l.actuator) << ";";
    if (l.sensor) out << " sensor " << quote_string(*l.sensor) << ";";
    out << " enforces " << join_ids(l.enforces) << "; }";
  });
  group(out, first, model.recommendations(), [&](const Recommendation& r) {
    out << "recommend for " << r.for_controller.id << " category " << category_word(r.category) << ' '
        << quote_string(r.text);
  });

  out << "}\n";
  return out.str();
}

}  // namespace hts
