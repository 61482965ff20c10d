#include <doctest.h>

#include "hts/flowgraph.hpp"
#include "support/oracles.hpp"

using namespace hts;
using oracle::plain;
using oracle::StrSet;

namespace {

const Model& tianjin() {
  static const Model model = oracle::load("corpus/tianjin.hts");
  return model;
}

const FlowGraph& corpus_graph() {
  static const FlowGraph graph = build_flow_graph(tianjin());
  return graph;
}

const FlowGraph& slice_graph() {
  static const FlowGraph graph = build_flow_graph(oracle::load("fixtures/micro_slice.hts"));
  return graph;
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const AnalysisError& e) {
    return e.code();
  }
  FAIL("no AnalysisError raised");
  return ErrorCode::InvalidOptions;
}

bool has_edge(const FlowGraph& g, std::string_view s, std::string_view t) {
  const auto& edges = g.edges();
  return std::find(edges.begin(), edges.end(), FlowEdge{std::string(s), std::string(t)}) != edges.end();
}

}  // namespace

TEST_CASE("build_flow_graph") {
  const FlowGraph& g = slice_graph();
  CHECK(has_edge(g, "E1.6", "E1.2"));
  CHECK(has_edge(g, "E1.2", "E1.1"));
  CHECK(has_edge(g, "E1.1", "R1"));
  CHECK(has_edge(g, "E1.4", "R1"));
  CHECK(has_edge(g, "R1", "R2"));

  const FlowGraph bare = build_flow_graph(oracle::load("fixtures/unviolated_constraint_fixed.hts"));
  CHECK(bare.nodes().size() == 1);
  CHECK(bare.edges().empty());

  std::size_t sources = 0;
  for (const auto& c : tianjin().causes()) sources += c.sources.size();
  CHECK(corpus_graph().edges().size() == sources);
  CHECK(corpus_graph().nodes().size() == tianjin().events().size() + tianjin().risks().size());

  CHECK(code_of([] { build_flow_graph(oracle::load("fixtures/upward_edge.hts")); }) == ErrorCode::NotValidated);
  // Warnings do not block the graph.
  CHECK_NOTHROW(build_flow_graph(oracle::load("fixtures/uncaused_risk.hts")));
}

TEST_CASE("graph structure matches the declarations") {
  const FlowGraph& g = corpus_graph();
  const auto raw = oracle::raw_graph(tianjin());
  for (const auto& node : g.nodes()) {
    CHECK(plain(g.predecessors(node.id)) == raw.preds.at(node.id));
    CHECK(plain(g.successors(node.id)) == raw.succs.at(node.id));
    CHECK(node.tier == node_tier(tianjin(), node.id));
  }
  for (std::size_t i = 1; i < g.nodes().size(); ++i) CHECK(id_less(g.nodes()[i - 1].id, g.nodes()[i].id));
  for (std::size_t i = 1; i < g.edges().size(); ++i) {
    const auto& a = g.edges()[i - 1];
    const auto& b = g.edges()[i];
    CHECK((id_less(a.source, b.source) || (a.source == b.source && id_less(a.target, b.target))));
  }
  CHECK(g.gate_of("R1") == Gate::All);
  CHECK(g.gate_of("E1.1") == Gate::Any);
  CHECK_FALSE(g.gate_of("E1.4").has_value());
  CHECK(code_of([&] { g.node("HS1"); }) == ErrorCode::UnknownId);
}

TEST_CASE("direct_causes") {
  const FlowGraph& g = corpus_graph();
  CHECK(plain(direct_causes(g, "R2")) == StrSet{"R1", "E1.8", "E1.9"});
  CHECK(plain(direct_causes(g, "R4")) == StrSet{"R3", "E1.12", "E1.13", "E1.14"});
  CHECK(direct_causes(g, "E1.4").empty());
  CHECK(code_of([&] { direct_causes(g, "nope"); }) == ErrorCode::UnknownId);
}

TEST_CASE("contributors") {
  const FlowGraph& g = corpus_graph();
  const StrSet e11 = plain(contributors(g, "E1.1"));
  for (const char* id : {"E1.2", "E1.3", "E1.6", "E1.7"}) CHECK(e11.count(id) == 1);
  CHECK(contributors(g, "E3.1").empty());
  CHECK(contributors(g, "E1.4").empty());
  const auto closure = oracle::closure_contributors(oracle::raw_graph(tianjin()));
  CHECK(plain(contributors(g, "R4")) == closure.at("R4"));
  CHECK(code_of([&] { contributors(g, "nope"); }) == ErrorCode::UnknownId);
}

TEST_CASE("root_causes") {
  CHECK(plain(root_causes(slice_graph(), "E1.1")) == StrSet{"E1.6", "E1.7"});
  const StrSet roots = plain(root_causes(corpus_graph(), "R4"));
  CHECK(!roots.empty());
  for (const auto& id : roots) CHECK_MESSAGE((id == "E1.4" || id.rfind("E3.", 0) == 0), id);
  CHECK(roots.count("E1.4") == 1);
  CHECK(root_causes(corpus_graph(), "E1.4").empty());
}

TEST_CASE("in_tier") {
  const FlowGraph& g = corpus_graph();
  CHECK(plain(in_tier(g, direct_causes(g, "E1.5"), Tier::Meso)) == StrSet{"E2.2", "E2.3", "E2.16", "E2.17"});
  CHECK(plain(in_tier(g, direct_causes(g, "E1.5"), Tier::Macro)) == StrSet{"E3.1", "E3.14", "E3.21", "E3.22"});
  CHECK(in_tier(g, {}, Tier::Micro).empty());
}

TEST_CASE("enumerate_paths") {
  const FlowGraph& g = corpus_graph();
  CHECK(enumerate_paths(g, "E1.6", "R1") == std::vector<Path>{{"E1.6", "E1.2", "E1.1", "R1"}});
  CHECK(enumerate_paths(g, "E1.4", "E1.4") == std::vector<Path>{{"E1.4"}});
  CHECK(enumerate_paths(g, "R1", "E1.6").empty());

  const auto raw = oracle::raw_graph(tianjin());
  const auto paths = enumerate_paths(g, "E3.3", "R4");
  CHECK(paths.size() == oracle::count_paths(raw, "E3.3", "R4"));
  for (std::size_t i = 0; i < paths.size(); ++i) {
    CHECK(paths[i].front() == "E3.3");
    CHECK(paths[i].back() == "R4");
    if (i > 0) {
      CHECK(std::lexicographical_compare(paths[i - 1].begin(), paths[i - 1].end(), paths[i].begin(), paths[i].end(),
                                         [](const std::string& a, const std::string& b) { return id_less(a, b); }));
    }
  }
  CHECK(enumerate_paths(g, "E3.3", "R4", paths.size()).size() == paths.size());
  CHECK(code_of([&] { enumerate_paths(g, "E3.3", "R4", paths.size() - 1); }) == ErrorCode::PathLimit);
  CHECK(code_of([&] { enumerate_paths(g, "E3.3", "nope"); }) == ErrorCode::UnknownId);
}

TEST_CASE("path cap stops adversarial graphs") {
  // A ladder of diamonds: 2^n paths from the top to the bottom.
  std::string source = "system ladder {\n  hazard H\n";
  const int rungs = 16;
  auto event = [&](const std::string& id) {
    source += "  constraint SC_" + id + " kind control level micro on H \"c\"\n  event " + id + " violates SC_" + id + "\n";
  };
  event("N0");
  for (int i = 1; i <= rungs; ++i) {
    const std::string n = std::to_string(i);
    event("A" + n);
    event("B" + n);
    event("N" + n);
    const std::string prev = "N" + std::to_string(i - 1);
    source += "  causes A" + n + " <- any(" + prev + ")\n  causes B" + n + " <- any(" + prev + ")\n";
    source += "  causes N" + n + " <- any(A" + n + ", B" + n + ")\n";
  }
  source += "}\n";
  const FlowGraph g = build_flow_graph(oracle::parse_ok(source));
  CHECK(code_of([&] { enumerate_paths(g, "N0", "N16"); }) == ErrorCode::PathLimit);
  CHECK(enumerate_paths(g, "N0", "N10").size() == 1024);
}

TEST_CASE("propagate") {
  const FlowGraph& g = corpus_graph();
  CHECK(propagate(g, {}).empty());
  CHECK(plain(propagate(g, {"E1.2"})) == StrSet{"E1.2", "E1.1"});
  CHECK(plain(propagate(g, {"E1.2", "E1.4"})) == StrSet{"E1.2", "E1.1", "E1.4", "R1"});

  IdSet sources;
  for (const auto& node : g.nodes()) {
    if (g.predecessors(node.id).empty()) sources.insert(node.id);
  }
  const IdSet everything = propagate(g, sources);
  CHECK(everything.count("R4") == 1);
  CHECK(code_of([&] { propagate(g, {"nope"}); }) == ErrorCode::UnknownId);
}

TEST_CASE("cross_level_map") {
  const FlowGraph& g = corpus_graph();
  const CrossLevelMap e31 = cross_level_map(g, "E3.1");
  CHECK(plain(e31.meso) == StrSet{"E2.15", "E2.16", "E2.17"});
  CHECK(plain(e31.micro) == StrSet{"E1.5"});
  const CrossLevelMap e317 = cross_level_map(g, "E3.17");
  CHECK(plain(e317.meso) == StrSet{"E2.26", "E2.27"});
  CHECK(e317.micro.empty());
  const CrossLevelMap e322 = cross_level_map(g, "E3.22");
  CHECK(plain(e322.meso) == StrSet{"E2.20", "E2.21", "E2.22", "E2.23", "E2.24", "E2.25"});
  CHECK(plain(e322.micro) == StrSet{"E1.5"});
  CHECK(code_of([&] { cross_level_map(g, "E2.1"); }) == ErrorCode::NotMacro);
  CHECK(code_of([&] { cross_level_map(g, "E9"); }) == ErrorCode::UnknownId);
}

TEST_CASE("classify_state") {
  const Model& m = tianjin();
  CHECK(classify_state(m, {}).overall == Severity::Safe);
  const SystemState one = classify_state(m, {"SC1.1"});
  CHECK(one.per_hazard.at("HS1") == Severity::NearMiss);
  CHECK(one.overall == Severity::NearMiss);
  CHECK(plain(one.violated) == StrSet{"SC1.1"});
  CHECK(classify_state(m, {"SC1.1", "SC1.2", "SC1.3", "SC1.4"}).per_hazard.at("HS1") == Severity::Incident);
  CHECK(classify_state(m, {"SC1.1", "SC1.2", "SC1.3", "SC1.4", "SC1.14"}).overall == Severity::MajorAccident);

  // Control constraints do not move the ladder.
  CHECK(classify_state(m, {"SC1.5", "SC1.6", "SC2.1", "SC3.1"}).overall == Severity::Safe);
  // The interaction with HS1-HS2 reaches no target.
  CHECK(classify_state(m, {"SC1.1", "SC1.2", "SC1.3", "SC1.4", "SC1.9"}).overall == Severity::Incident);

  CHECK(code_of([&] { classify_state(m, {"SC9"}); }) == ErrorCode::UnknownId);
  CHECK(code_of([&] { classify_state(m, {"E1.1"}); }) == ErrorCode::NotAConstraint);

  SUBCASE("accident without an external target") {
    const Model local = oracle::parse_ok(R"(system s {
  hazard H
  target T
  target T2 part_of T
  interaction HT between H, T
  constraint S kind subsystem level micro on H "s"
  constraint X kind interaction level micro on HT "x"
})");
    CHECK(classify_state(local, {"S", "X"}).overall == Severity::Accident);
    CHECK(classify_state(local, {"X"}).overall == Severity::Safe);
    const Model wide = oracle::parse_ok(R"(system s {
  hazard H
  target T
  target T2 part_of T external
  interaction HT between H, T
  constraint S kind subsystem level micro on H "s"
  constraint X kind interaction level micro on HT "x"
})");
    CHECK(classify_state(wide, {"S", "X"}).overall == Severity::MajorAccident);
  }
  SUBCASE("a hazard with one subsystem constraint jumps to incident") {
    const Model single = oracle::parse_ok("system s { hazard H\n constraint S kind subsystem level micro on H \"s\" }");
    CHECK(classify_state(single, {"S"}).per_hazard.at("H") == Severity::Incident);
  }
  SUBCASE("no hazards is safe") {
    CHECK(classify_state(oracle::parse_ok("system s { target T }"), {}).overall == Severity::Safe);
    CHECK(classify_state(oracle::parse_ok("system s { target T }"), {}).per_hazard.empty());
  }
}

TEST_CASE("trace_event") {
  const Model& m = tianjin();
  const EventTrace e15 = trace_event(m, "E1.5");
  REQUIRE(e15.constraint != nullptr);
  CHECK(e15.constraint->id == "SC1.5");
  REQUIRE(!e15.loops.empty());
  for (const auto& [loop, controller] : e15.loops) {
    REQUIRE(controller != nullptr);
    CHECK(controller->tier == Tier::Micro);
    CHECK(controller->domain == Domain::Social);
  }
  const EventTrace e215 = trace_event(m, "E2.15");
  CHECK(e215.constraint->id == "SC2.15");
  REQUIRE(e215.loops.size() == 1);
  CHECK(e215.loops[0].controller->id == "tianjin_government");
  CHECK(e215.loops[0].controller->tier == Tier::Meso);

  const EventTrace e32 = trace_event(m, "E3.2");
  CHECK(e32.constraint->id == "SC3.2");
  CHECK(e32.loops.empty());
  CHECK(code_of([&] { trace_event(m, "R1"); }) == ErrorCode::UnknownId);
}

TEST_CASE("topological order agrees with a DFS oracle") {
  for (const char* file : {"corpus/tianjin.hts", "fixtures/micro_slice.hts", "fixtures/clean.hts"}) {
    const Model m = oracle::load(file);
    const FlowGraph g = build_flow_graph(m);
    const auto raw = oracle::raw_graph(m);
    bool cyclic = false;
    const auto dfs = oracle::dfs_topological(raw, cyclic);
    CHECK_FALSE(cyclic);
    CHECK(oracle::respects_edges(raw, dfs));
    const auto kahn = topological_order(g);
    CHECK(oracle::respects_edges(raw, kahn));
    CHECK(std::set<std::string>(kahn.begin(), kahn.end()) == std::set<std::string>(dfs.begin(), dfs.end()));
  }
  for (const auto& edge : corpus_graph().edges()) {
    CHECK(!(corpus_graph().node(edge.source).tier < corpus_graph().node(edge.target).tier));
  }
}
