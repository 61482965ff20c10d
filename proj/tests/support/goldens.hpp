#pragma once

// Renders every golden-file artifact from a loaded model. Shared by the
// unit tests and the acceptance binary so both compare the same bytes.

#include <string>
#include <utility>
#include <vector>

#include "hts/dsl.hpp"
#include "hts/report.hpp"
#include "hts/validate.hpp"

namespace golden {

inline std::vector<std::pair<std::string, std::string>> render(const hts::Model& model, const hts::FlowGraph& graph) {
  using namespace hts;
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("tianjin_flow.dot", emit_dot_flow(graph));
  EmitOptions micro;
  micro.tiers = {Tier::Micro, Tier::Risk};
  micro.highlight = {"R1", "E1.1"};
  micro.rankdir = RankDir::LeftToRight;
  files.emplace_back("tianjin_micro_flow.dot", emit_dot_flow(graph, micro));
  files.emplace_back("tianjin_control.dot", emit_dot_control(model));

  Analyses analyses;
  analyses.state = classify_state(model, {"SC1.1", "SC1.2", "SC1.3", "SC1.4", "SC1.14"});
  analyses.propagation_seed = IdSet{"E1.2", "E1.4"};
  analyses.propagated = propagate(graph, *analyses.propagation_seed);
  analyses.cross_level = {cross_level_map(graph, "E3.1"), cross_level_map(graph, "E3.3")};
  analyses.flow_graph_tiers = std::set<Tier>{Tier::Micro, Tier::Risk};
  files.emplace_back("tianjin.json", emit_json(model, validate(model).diagnostics, analyses, &graph));
  files.emplace_back("tianjin_report.md", emit_report_markdown(model, graph));
  files.emplace_back("tianjin_canonical.hts", format_canonical(model));
  return files;
}

}  // namespace golden
