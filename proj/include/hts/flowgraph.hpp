#pragma once

/// @file
/// The event-flow graph: a tier-stratified cause DAG over adverse events and
/// risks, plus the causal queries answered over it.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hts/model.hpp"

namespace hts {

struct FlowNode {
  std::string id;
  Tier tier = Tier::Micro;
  ElementKind kind = ElementKind::Event;  // Event or Risk
  std::string label;
};

struct FlowEdge {
  std::string source;
  std::string target;

  friend bool operator==(const FlowEdge&, const FlowEdge&) = default;
};

/// Immutable once built. Nodes are ordered by id, edges by (source, target).
class FlowGraph {
 public:
  const std::vector<FlowNode>& nodes() const noexcept { return nodes_; }
  const std::vector<FlowEdge>& edges() const noexcept { return edges_; }

  bool contains(std::string_view id) const { return index_.count(id) != 0; }

  /// Throws AnalysisError(UnknownId) for ids that are not nodes.
  const FlowNode& node(std::string_view id) const;
  const IdSet& predecessors(std::string_view id) const;
  const IdSet& successors(std::string_view id) const;

  /// Gate of the node's cause declaration; absent for source nodes.
  std::optional<Gate> gate_of(std::string_view id) const;

 private:
  friend FlowGraph build_flow_graph(const Model& model);

  std::size_t position(std::string_view id) const;

  std::vector<FlowNode> nodes_;
  std::vector<FlowEdge> edges_;
  std::map<std::string, std::size_t, IdLess> index_;
  std::vector<IdSet> predecessors_;
  std::vector<IdSet> successors_;
  std::map<std::string, Gate, IdLess> gates_;
};

/// Requires a validated model; throws AnalysisError(NotValidated) otherwise.
FlowGraph build_flow_graph(const Model& model);

IdSet direct_causes(const FlowGraph& graph, std::string_view id);

/// Every node with a directed path to `id`, excluding `id`.
IdSet contributors(const FlowGraph& graph, std::string_view id);

/// Contributors that have no causes of their own.
IdSet root_causes(const FlowGraph& graph, std::string_view id);

/// The members of `ids` whose tier is `tier`.
IdSet in_tier(const FlowGraph& graph, const IdSet& ids, Tier tier);

using Path = std::vector<std::string>;

inline constexpr std::size_t kDefaultPathCap = 10000;

/// All simple paths from `from` to `to` in lexicographic order of their id
/// sequences. Throws AnalysisError(PathLimit) once more than `cap` exist.
std::vector<Path> enumerate_paths(const FlowGraph& graph, std::string_view from, std::string_view to,
                                  std::size_t cap = kDefaultPathCap);

/// Least fixed point of gate activation from `seed`: an All node fires when
/// every direct cause is active, an Any node when at least one is.
IdSet propagate(const FlowGraph& graph, const IdSet& seed);

/// Direct successors of a macro event, bucketed by tier. Only `meso` and
/// `micro` are populated by well-formed three-tier models; `macro` and
/// `risk` keep the buckets a partition of the successor set.
struct CrossLevelMap {
  std::string macro_event;
  IdSet macro;
  IdSet meso;
  IdSet micro;
  IdSet risk;
};

/// Throws UnknownId, or NotMacro when `macro_event` is not on the macro tier.
CrossLevelMap cross_level_map(const FlowGraph& graph, std::string_view macro_event);

struct SystemState {
  Severity overall = Severity::Safe;
  std::map<std::string, Severity, IdLess> per_hazard;
  IdSet violated;
};

/// Risk-ladder classification of each hazard entity given the violated
/// constraints. For a hazard H over its own subsystem constraints:
///   none violated -> Safe; some -> NearMiss; all -> Incident;
///   Incident plus a violated interaction constraint on an interaction
///   joining H (or a system containing H) with a target -> Accident;
///   Accident where that target reaches an external target -> MajorAccident.
/// The interaction-constraint condition stands in for a target system whose
/// capacity to bear the hazard is exceeded, which has no direct measure.
/// Throws UnknownId / NotAConstraint for bad ids in `violated`.
SystemState classify_state(const Model& model, const IdSet& violated);

struct LoopTrace {
  const ControlLoop* loop = nullptr;
  const Controller* controller = nullptr;  // null if the loop's controller is unresolved
};

struct EventTrace {
  const AdverseEvent* event = nullptr;
  const SafetyConstraint* constraint = nullptr;
  std::vector<LoopTrace> loops;  // loops enforcing the constraint, by loop id
};

/// Back-traces an event to its violated constraint and enforcing loops.
/// Pointers refer into `model`.
EventTrace trace_event(const Model& model, std::string_view event_id);

/// Kahn's algorithm with ties broken by id.
std::vector<std::string> topological_order(const FlowGraph& graph);

}  // namespace hts
