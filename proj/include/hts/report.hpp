#pragma once

/// @file
/// Deterministic emitters: Graphviz DOT for the event-flow graph and the
/// control structure, a JSON export, and a markdown accident report.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hts/diagnostic.hpp"
#include "hts/flowgraph.hpp"
#include "hts/model.hpp"

namespace hts {

enum class RankDir { TopToBottom, LeftToRight };

struct EmitOptions {
  std::set<Tier> tiers{Tier::Macro, Tier::Meso, Tier::Micro, Tier::Risk};
  IdSet highlight;
  RankDir rankdir = RankDir::TopToBottom;
};

/// DOT node identifier for a model id: dots become underscores, DOT
/// keywords are quoted.
std::string dot_id(std::string_view id);

/// Event-flow digraph with one cluster per selected tier. Edges with an
/// endpoint outside the selected tiers are dropped. Edges into Any-gated
/// nodes are dashed. Throws AnalysisError(InvalidOptions) for empty tiers.
std::string emit_dot_flow(const FlowGraph& graph, const EmitOptions& options = {});

/// Control-structure digraph: controllers clustered by tier, social before
/// technical, with one edge per loop to the controlled subject.
std::string emit_dot_control(const Model& model);

/// Optional analysis results carried into the JSON export.
struct Analyses {
  std::optional<SystemState> state;
  std::optional<IdSet> propagation_seed;
  std::optional<IdSet> propagated;
  std::vector<CrossLevelMap> cross_level;
  /// When set, a `flow_graph` object restricted to these tiers is added.
  std::optional<std::set<Tier>> flow_graph_tiers;
};

std::string emit_json(const Model& model, const std::vector<Diagnostic>& diagnostics = {},
                      const Analyses& analyses = {}, const FlowGraph* graph = nullptr);

/// `{"diagnostics": [...], "errors": n, "warnings": m}` using the same
/// diagnostic objects as emit_json.
std::string emit_diagnostics_json(const std::vector<Diagnostic>& diagnostics);

/// Headings of the recommendation categories, in reporting order.
std::string_view category_heading(RecommendationCategory category);

std::string emit_report_markdown(const Model& model, const FlowGraph& graph);

}  // namespace hts
