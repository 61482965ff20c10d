#include "hts/flowgraph.hpp"

#include <algorithm>
#include <deque>
#include <queue>

#include "hts/validate.hpp"

namespace hts {

namespace {

std::string quoted(std::string_view id) { return "'" + std::string(id) + "'"; }

void require_node(const FlowGraph& graph, std::string_view id) {
  if (!graph.contains(id)) throw AnalysisError(ErrorCode::UnknownId, quoted(id) + " is not a node of the flow graph");
}

}  // namespace

std::size_t FlowGraph::position(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw AnalysisError(ErrorCode::UnknownId, quoted(id) + " is not a node of the flow graph");
  return it->second;
}

const FlowNode& FlowGraph::node(std::string_view id) const { return nodes_[position(id)]; }
const IdSet& FlowGraph::predecessors(std::string_view id) const { return predecessors_[position(id)]; }
const IdSet& FlowGraph::successors(std::string_view id) const { return successors_[position(id)]; }

std::optional<Gate> FlowGraph::gate_of(std::string_view id) const {
  auto it = gates_.find(id);
  if (it == gates_.end()) return std::nullopt;
  return it->second;
}

FlowGraph build_flow_graph(const Model& model) {
  const ValidationReport report = validate(model);
  if (report.error_count() != 0) {
    throw AnalysisError(ErrorCode::NotValidated,
                        "model has " + std::to_string(report.error_count()) + " validation error(s)");
  }

  FlowGraph graph;
  for (const auto& event : model.events()) {
    graph.nodes_.push_back(FlowNode{event.id, node_tier(model, event.id), ElementKind::Event, event.text});
  }
  for (const auto& risk : model.risks()) {
    graph.nodes_.push_back(FlowNode{risk.id, Tier::Risk, ElementKind::Risk, risk.text});
  }
  std::sort(graph.nodes_.begin(), graph.nodes_.end(),
            [](const FlowNode& a, const FlowNode& b) { return id_less(a.id, b.id); });
  for (std::size_t i = 0; i < graph.nodes_.size(); ++i) graph.index_.emplace(graph.nodes_[i].id, i);
  graph.predecessors_.resize(graph.nodes_.size());
  graph.successors_.resize(graph.nodes_.size());

  for (const auto& cause : model.causes()) {
    graph.gates_.emplace(cause.target.id, cause.gate);
    for (const auto& source : cause.sources) {
      graph.predecessors_[graph.position(cause.target.id)].insert(source.id);
      graph.successors_[graph.position(source.id)].insert(cause.target.id);
      graph.edges_.push_back(FlowEdge{source.id, cause.target.id});
    }
  }
  std::sort(graph.edges_.begin(), graph.edges_.end(), [](const FlowEdge& a, const FlowEdge& b) {
    if (a.source != b.source) return id_less(a.source, b.source);
    return id_less(a.target, b.target);
  });
  return graph;
}

IdSet direct_causes(const FlowGraph& graph, std::string_view id) { return graph.predecessors(id); }

IdSet contributors(const FlowGraph& graph, std::string_view id) {
  require_node(graph, id);
  IdSet seen;
  std::deque<std::string> queue{std::string(id)};
  while (!queue.empty()) {
    const std::string current = queue.front();
    queue.pop_front();
    for (const auto& cause : graph.predecessors(current)) {
      if (seen.insert(cause).second) queue.push_back(cause);
    }
  }
  seen.erase(std::string(id));
  return seen;
}

IdSet root_causes(const FlowGraph& graph, std::string_view id) {
  IdSet roots;
  for (const auto& contributor : contributors(graph, id)) {
    if (graph.predecessors(contributor).empty()) roots.insert(contributor);
  }
  return roots;
}

IdSet in_tier(const FlowGraph& graph, const IdSet& ids, Tier tier) {
  IdSet out;
  for (const auto& id : ids) {
    if (graph.node(id).tier == tier) out.insert(id);
  }
  return out;
}

std::vector<Path> enumerate_paths(const FlowGraph& graph, std::string_view from, std::string_view to,
                                  std::size_t cap) {
  require_node(graph, from);
  require_node(graph, to);
  std::vector<Path> paths;
  Path current{std::string(from)};
  IdSet on_path{std::string(from)};

  // Successors are visited in id order, which yields the paths in
  // lexicographic order without a final sort.
  auto walk = [&](auto&& self, const std::string& node) -> void {
    if (node == to) {
      paths.push_back(current);
      if (paths.size() > cap) {
        throw AnalysisError(ErrorCode::PathLimit, "more than " + std::to_string(cap) + " paths from " +
                                                      quoted(from) + " to " + quoted(to));
      }
      return;
    }
    for (const auto& next : graph.successors(node)) {
      if (!on_path.insert(next).second) continue;
      current.push_back(next);
      self(self, next);
      current.pop_back();
      on_path.erase(next);
    }
  };
  walk(walk, std::string(from));
  return paths;
}

IdSet propagate(const FlowGraph& graph, const IdSet& seed) {
  for (const auto& id : seed) require_node(graph, id);
  IdSet active = seed;
  std::deque<std::string> queue(seed.begin(), seed.end());
  while (!queue.empty()) {
    const std::string current = queue.front();
    queue.pop_front();
    for (const auto& next : graph.successors(current)) {
      if (active.count(next) != 0) continue;
      bool fires = true;
      if (graph.gate_of(next) == Gate::All) {
        const auto& causes = graph.predecessors(next);
        fires = std::all_of(causes.begin(), causes.end(), [&](const std::string& c) { return active.count(c) != 0; });
      }
      if (fires) {
        active.insert(next);
        queue.push_back(next);
      }
    }
  }
  return active;
}

CrossLevelMap cross_level_map(const FlowGraph& graph, std::string_view macro_event) {
  const FlowNode& node = graph.node(macro_event);
  if (node.tier != Tier::Macro) {
    throw AnalysisError(ErrorCode::NotMacro,
                        quoted(macro_event) + " is on the " + std::string(to_string(node.tier)) + " tier");
  }
  CrossLevelMap map;
  map.macro_event = node.id;
  for (const auto& next : graph.successors(macro_event)) {
    switch (graph.node(next).tier) {
      case Tier::Macro: map.macro.insert(next); break;
      case Tier::Meso: map.meso.insert(next); break;
      case Tier::Micro: map.micro.insert(next); break;
      case Tier::Risk: map.risk.insert(next); break;
    }
  }
  return map;
}

SystemState classify_state(const Model& model, const IdSet& violated) {
  for (const auto& id : violated) {
    auto kind = kind_of(model, id);
    if (!kind) throw AnalysisError(ErrorCode::UnknownId, "no element named " + quoted(id));
    if (*kind != ElementKind::Constraint) {
      throw AnalysisError(ErrorCode::NotAConstraint,
                          quoted(id) + " is not a safety constraint (kind " + std::string(to_string(*kind)) + ")");
    }
  }

  // Violated interaction constraints whose interaction includes a target.
  struct Contact {
    const Interaction* interaction;
    bool reaches_external;
  };
  std::vector<Contact> contacts;
  for (const auto& id : violated) {
    const SafetyConstraint* constraint = model.constraint(id);
    if (constraint->kind != ConstraintKind::Interaction) continue;
    const Interaction* interaction = model.interaction(constraint->subject.id);
    if (interaction == nullptr) continue;
    bool has_target = false;
    bool reaches_external = false;
    for (const auto& participant : interaction->participants) {
      const Entity* entity = model.entity(participant.id);
      if (entity == nullptr || entity->role != SystemRole::Target) continue;
      has_target = true;
      for (const auto& other : model.entities()) {
        if (other.role == SystemRole::Target && is_within(model, other.id, entity->id) &&
            is_external(model, other.id)) {
          reaches_external = true;
        }
      }
    }
    if (has_target) contacts.push_back(Contact{interaction, reaches_external});
  }

  SystemState state;
  state.violated = violated;
  for (const auto& hazard : model.entities()) {
    if (hazard.role != SystemRole::Hazard) continue;
    std::size_t total = 0;
    std::size_t hit = 0;
    for (const auto& constraint : model.constraints()) {
      if (constraint.kind != ConstraintKind::Subsystem || constraint.subject.id != hazard.id) continue;
      ++total;
      if (violated.count(constraint.id) != 0) ++hit;
    }

    Severity severity = Severity::Safe;
    if (hit > 0) severity = hit < total ? Severity::NearMiss : Severity::Incident;
    if (severity == Severity::Incident) {
      for (const auto& contact : contacts) {
        const auto& participants = contact.interaction->participants;
        const bool involves = std::any_of(participants.begin(), participants.end(), [&](const IdRef& p) {
          const Entity* entity = model.entity(p.id);
          return entity != nullptr && entity->role == SystemRole::Hazard && is_within(model, hazard.id, p.id);
        });
        if (!involves) continue;
        severity = std::max(severity, contact.reaches_external ? Severity::MajorAccident : Severity::Accident);
      }
    }
    state.per_hazard.emplace(hazard.id, severity);
    state.overall = std::max(state.overall, severity);
  }
  return state;
}

EventTrace trace_event(const Model& model, std::string_view event_id) {
  const AdverseEvent* event = model.event(event_id);
  if (event == nullptr) throw AnalysisError(ErrorCode::UnknownId, "no event named " + quoted(event_id));
  EventTrace trace;
  trace.event = event;
  trace.constraint = model.constraint(event->violates.id);
  if (trace.constraint == nullptr) return trace;
  for (const auto& loop : model.loops()) {
    const bool enforces = std::any_of(loop.enforces.begin(), loop.enforces.end(),
                                      [&](const IdRef& ref) { return ref.id == trace.constraint->id; });
    if (enforces) trace.loops.push_back(LoopTrace{&loop, model.controller(loop.controller.id)});
  }
  return trace;
}

std::vector<std::string> topological_order(const FlowGraph& graph) {
  std::map<std::string, std::size_t, IdLess> in_degree;
  for (const auto& node : graph.nodes()) in_degree[node.id] = graph.predecessors(node.id).size();
  struct IdGreater {
    bool operator()(const std::string& a, const std::string& b) const { return id_less(b, a); }
  };
  std::priority_queue<std::string, std::vector<std::string>, IdGreater> ready;
  for (const auto& [id, degree] : in_degree) {
    if (degree == 0) ready.push(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string current = ready.top();
    ready.pop();
    for (const auto& next : graph.successors(current)) {
      if (--in_degree[next] == 0) ready.push(next);
    }
    order.push_back(std::move(current));
  }
  return order;
}

}  // namespace hts
