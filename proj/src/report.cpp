#include "hts/report.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include <json.hpp>

namespace hts {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 6> kDotKeywords = {"node", "edge", "graph", "digraph", "subgraph", "strict"};

constexpr std::array kTierOrder = {Tier::Macro, Tier::Meso, Tier::Micro, Tier::Risk};

constexpr std::array kCategoryOrder = {
    RecommendationCategory::Legislative,  RecommendationCategory::Government,
    RecommendationCategory::Corporate,    RecommendationCategory::Intermediary,
    RecommendationCategory::SocialMedia,  RecommendationCategory::Technical,
};

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out += c; break;
    }
  }
  return out;
}

std::string dot_label(std::string_view id, std::string_view text) {
  std::string label = dot_escape(id);
  if (!text.empty()) label += "\\n" + dot_escape(text);
  return "\"" + label + "\"";
}

std::string_view rankdir_value(RankDir dir) { return dir == RankDir::TopToBottom ? "TB" : "LR"; }

std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

std::string join(const IdSet& ids, std::string_view separator = ", ") {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += separator;
    out += id;
  }
  return out;
}

Json ids_json(const std::vector<IdRef>& refs) {
  Json out = Json::array();
  for (const auto& ref : refs) out.push_back(ref.id);
  return out;
}

Json ids_json(const IdSet& ids) {
  Json out = Json::array();
  for (const auto& id : ids) out.push_back(id);
  return out;
}

Json optional_json(const std::optional<std::string>& value) { return value ? Json(*value) : Json(nullptr); }

Json span_json(const SourceSpan& span) {
  return Json{{"byte_start", span.byte_start}, {"byte_end", span.byte_end}, {"line", span.line}, {"column", span.column}};
}

Json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  Json out = Json::array();
  for (const auto& d : diagnostics) {
    out.push_back(Json{{"code", d.code},
                       {"severity", to_string(d.severity)},
                       {"message", d.message},
                       {"span", span_json(d.span)}});
  }
  return out;
}

}  // namespace

std::string dot_id(std::string_view id) {
  std::string out(id);
  std::replace(out.begin(), out.end(), '.', '_');
  const std::string folded = lower(out);
  if (std::find(kDotKeywords.begin(), kDotKeywords.end(), folded) != kDotKeywords.end()) return "\"" + out + "\"";
  return out;
}

std::string emit_dot_flow(const FlowGraph& graph, const EmitOptions& options) {
  if (options.tiers.empty()) throw AnalysisError(ErrorCode::InvalidOptions, "at least one tier must be selected");
  std::ostringstream out;
  out << "digraph event_flow {\n";
  out << "  rankdir=" << rankdir_value(options.rankdir) << ";\n";
  out << "  node [shape=box];\n";
  for (Tier tier : kTierOrder) {
    if (options.tiers.count(tier) == 0) continue;
    out << "  subgraph cluster_" << lower(to_string(tier)) << " {\n";
    out << "    label=\"" << to_string(tier) << "\";\n";
    for (const auto& node : graph.nodes()) {
      if (node.tier != tier) continue;
      out << "    " << dot_id(node.id) << " [label=" << dot_label(node.id, node.label);
      if (node.kind == ElementKind::Risk) out << ", shape=ellipse";
      if (options.highlight.count(node.id) != 0) out << ", style=filled, fillcolor=\"#f4cccc\"";
      out << "];\n";
    }
    out << "  }\n";
  }
  for (const auto& edge : graph.edges()) {
    if (options.tiers.count(graph.node(edge.source).tier) == 0 || options.tiers.count(graph.node(edge.target).tier) == 0) {
      continue;
    }
    out << "  " << dot_id(edge.source) << " -> " << dot_id(edge.target);
    if (graph.gate_of(edge.target) == Gate::Any) out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string emit_dot_control(const Model& model) {
  std::ostringstream out;
  out << "digraph control_structure {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box];\n";
  for (Tier tier : {Tier::Macro, Tier::Meso, Tier::Micro}) {
    const std::string tier_name = lower(to_string(tier));
    out << "  subgraph cluster_" << tier_name << " {\n";
    out << "    label=\"" << to_string(tier) << "\";\n";
    for (Domain domain : {Domain::Social, Domain::Technical}) {
      out << "    subgraph cluster_" << tier_name << '_' << lower(to_string(domain)) << " {\n";
      out << "      label=\"" << to_string(domain) << "\";\n";
      for (const auto& controller : model.controllers()) {
        if (controller.tier != tier || controller.domain != domain) continue;
        out << "      " << dot_id(controller.id) << " [label=" << dot_label(controller.id, controller.label) << "];\n";
      }
      out << "    }\n";
    }
    out << "  }\n";
  }
  out << "  subgraph cluster_controlled {\n";
  out << "    label=\"Controlled system\";\n";
  for (const auto& entity : model.entities()) {
    out << "    " << dot_id(entity.id) << " [label=" << dot_label(entity.id, entity.label) << ", shape=ellipse];\n";
  }
  for (const auto& interaction : model.interactions()) {
    out << "    " << dot_id(interaction.id) << " [label=" << dot_label(interaction.id, interaction.label)
        << ", shape=diamond];\n";
  }
  out << "  }\n";
  for (const auto& entity : model.entities()) {
    if (entity.parent) {
      out << "  " << dot_id(entity.id) << " -> " << dot_id(entity.parent->id) << " [style=dotted, arrowhead=none];\n";
    }
  }
  for (const auto& loop : model.loops()) {
    out << "  " << dot_id(loop.controller.id) << " -> " << dot_id(loop.controls.id) << " [label=" << dot_label(loop.id, "")
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string emit_json(const Model& model, const std::vector<Diagnostic>& diagnostics, const Analyses& analyses,
                      const FlowGraph* graph) {
  Json doc;
  doc["name"] = model.name();

  Json entities = Json::array();
  for (const auto& e : model.entities()) {
    entities.push_back(Json{{"id", e.id},
                            {"role", to_string(e.role)},
                            {"label", e.label},
                            {"parent", e.parent ? Json(e.parent->id) : Json(nullptr)},
                            {"external", e.external}});
  }
  doc["entities"] = std::move(entities);

  Json interactions = Json::array();
  for (const auto& i : model.interactions()) {
    interactions.push_back(Json{{"id", i.id}, {"participants", ids_json(i.participants)}, {"label", i.label}});
  }
  doc["interactions"] = std::move(interactions);

  Json risks = Json::array();
  for (const auto& r : model.risks()) {
    risks.push_back(
        Json{{"id", r.id}, {"severity", to_string(r.severity)}, {"subject", r.subject.id}, {"text", r.text}});
  }
  doc["risks"] = std::move(risks);

  Json constraints = Json::array();
  for (const auto& c : model.constraints()) {
    constraints.push_back(Json{{"id", c.id},
                               {"kind", to_string(c.kind)},
                               {"tier", to_string(c.tier)},
                               {"subject", c.subject.id},
                               {"text", c.text}});
  }
  doc["constraints"] = std::move(constraints);

  Json events = Json::array();
  for (const auto& e : model.events()) {
    events.push_back(Json{{"id", e.id}, {"violates", e.violates.id}, {"text", e.text}});
  }
  doc["events"] = std::move(events);

  Json causes = Json::array();
  for (const auto& c : model.causes()) {
    causes.push_back(Json{{"target", c.target.id}, {"gate", to_string(c.gate)}, {"sources", ids_json(c.sources)}});
  }
  doc["causes"] = std::move(causes);

  Json controllers = Json::array();
  for (const auto& c : model.controllers()) {
    controllers.push_back(
        Json{{"id", c.id}, {"tier", to_string(c.tier)}, {"domain", to_string(c.domain)}, {"label", c.label}});
  }
  doc["controllers"] = std::move(controllers);

  Json loops = Json::array();
  for (const auto& l : model.loops()) {
    loops.push_back(Json{{"id", l.id},
                         {"controller", l.controller.id},
                         {"controls", l.controls.id},
                         {"actuator", optional_json(l.actuator)},
                         {"sensor", optional_json(l.sensor)},
                         {"enforces", ids_json(l.enforces)}});
  }
  doc["loops"] = std::move(loops);

  Json recommendations = Json::array();
  for (const auto& r : model.recommendations()) {
    recommendations.push_back(
        Json{{"for_controller", r.for_controller.id}, {"category", to_string(r.category)}, {"text", r.text}});
  }
  doc["recommendations"] = std::move(recommendations);

  doc["diagnostics"] = diagnostics_json(diagnostics);

  Json analysis = Json::object();
  if (analyses.state) {
    Json per_hazard = Json::object();
    for (const auto& [id, severity] : analyses.state->per_hazard) per_hazard[id] = to_string(severity);
    analysis["state"] = Json{{"overall", to_string(analyses.state->overall)},
                             {"per_hazard", std::move(per_hazard)},
                             {"violated", ids_json(analyses.state->violated)}};
  }
  if (analyses.propagated) {
    analysis["propagation"] = Json{{"seed", ids_json(analyses.propagation_seed.value_or(IdSet{}))},
                                   {"active", ids_json(*analyses.propagated)}};
  }
  if (!analyses.cross_level.empty()) {
    Json maps = Json::array();
    for (const auto& m : analyses.cross_level) {
      maps.push_back(Json{{"macro_event", m.macro_event}, {"meso", ids_json(m.meso)}, {"micro", ids_json(m.micro)}});
    }
    analysis["cross_level"] = std::move(maps);
  }
  if (analyses.flow_graph_tiers && graph != nullptr) {
    const auto& tiers = *analyses.flow_graph_tiers;
    Json nodes = Json::array();
    for (const auto& node : graph->nodes()) {
      if (tiers.count(node.tier) == 0) continue;
      Json entry{{"id", node.id}, {"tier", to_string(node.tier)}};
      if (auto gate = graph->gate_of(node.id)) {
        entry["gate"] = to_string(*gate);
      } else {
        entry["gate"] = nullptr;
      }
      nodes.push_back(std::move(entry));
    }
    Json edges = Json::array();
    for (const auto& edge : graph->edges()) {
      if (tiers.count(graph->node(edge.source).tier) == 0 || tiers.count(graph->node(edge.target).tier) == 0) continue;
      edges.push_back(Json{{"source", edge.source}, {"target", edge.target}});
    }
    analysis["flow_graph"] = Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  }
  doc["analyses"] = std::move(analysis);

  return doc.dump(2) + "\n";
}

std::string emit_diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  const std::size_t errors = error_count(diagnostics);
  Json doc{{"diagnostics", diagnostics_json(diagnostics)},
           {"errors", errors},
           {"warnings", diagnostics.size() - errors}};
  return doc.dump(2) + "\n";
}

std::string_view category_heading(RecommendationCategory category) {
  switch (category) {
    case RecommendationCategory::Legislative: return "National laws, policies, regulations and standards";
    case RecommendationCategory::Government: return "Government and regulation bodies";
    case RecommendationCategory::Corporate: return "Companies";
    case RecommendationCategory::Intermediary: return "Intermediary agencies";
    case RecommendationCategory::SocialMedia: return "Social organizations and media";
    case RecommendationCategory::Technical: return "Technical aspects";
  }
  return "?";
}

std::string emit_report_markdown(const Model& model, const FlowGraph& graph) {
  std::ostringstream out;
  out << "# Accident analysis: " << model.name() << "\n\n";

  out << "## Summary\n\n";
  if (model.risks().empty()) {
    out << "_no risks recorded_\n\n";
  } else {
    out << "| Risk | Severity | Subject | Description |\n";
    out << "|---|---|---|---|\n";
    for (const auto& risk : model.risks()) {
      out << "| " << risk.id << " | " << to_string(risk.severity) << " | " << risk.subject.id << " | "
          << md_cell(risk.text) << " |\n";
    }
    out << '\n';
  }

  out << "## Event Flow\n\n";
  if (model.risks().empty()) out << "_no risks recorded_\n\n";
  for (const auto& risk : model.risks()) {
    out << "### " << risk.id << " (" << to_string(risk.severity) << ")\n\n";
    if (!risk.text.empty()) out << md_cell(risk.text) << "\n\n";
    const IdSet causes = direct_causes(graph, risk.id);
    if (causes.empty()) {
      out << "_no causes recorded_\n\n";
      continue;
    }
    const auto gate = graph.gate_of(risk.id);
    out << "Caused by " << (gate == Gate::All ? "all" : "any") << " of:\n\n";
    for (const auto& cause : causes) {
      const FlowNode& node = graph.node(cause);
      out << "- " << node.id << " (" << to_string(node.tier) << ")";
      if (!node.label.empty()) out << ": " << md_cell(node.label);
      out << '\n';
    }
    out << '\n';
  }

  out << "## Cross-Level Table\n\n";
  std::vector<CrossLevelMap> rows;
  for (const auto& node : graph.nodes()) {
    if (node.tier == Tier::Macro) rows.push_back(cross_level_map(graph, node.id));
  }
  if (rows.empty()) {
    out << "_no macro-level events recorded_\n\n";
  } else {
    out << "| Macro event | Meso-level events | Micro-level events |\n";
    out << "|---|---|---|\n";
    for (const auto& row : rows) {
      out << "| " << row.macro_event << " | " << (row.meso.empty() ? "-" : join(row.meso)) << " | "
          << (row.micro.empty() ? "-" : join(row.micro)) << " |\n";
    }
    out << '\n';
  }

  out << "## Recommendations\n";
  int number = 0;
  for (RecommendationCategory category : kCategoryOrder) {
    out << "\n### " << ++number << ". " << category_heading(category) << "\n\n";
    bool any = false;
    for (const auto& recommendation : model.recommendations()) {
      if (recommendation.category != category) continue;
      any = true;
      out << "- " << md_cell(recommendation.text) << " (controller: " << recommendation.for_controller.id;
      if (const Controller* controller = model.controller(recommendation.for_controller.id)) {
        if (!controller->label.empty()) out << ", " << md_cell(controller->label);
      }
      out << ")\n";
    }
    if (!any) out << "_none recorded_\n";
  }
  return out.str();
}

}  // namespace hts
