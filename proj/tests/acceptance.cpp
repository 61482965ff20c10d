// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Expected values for criteria 1-5 are frozen from the case study;
// criterion 6 compares against the independent oracles.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "hts/dsl.hpp"
#include "hts/flowgraph.hpp"
#include "hts/report.hpp"
#include "hts/validate.hpp"
#include "support/goldens.hpp"
#include "support/oracles.hpp"

using namespace hts;
using oracle::StrSet;

namespace {

struct Failures {
  std::vector<std::string> items;

  void expect(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

std::string read_source(const std::string& relative) {
  std::ifstream in(oracle::source_path(relative), std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + relative);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Model load(const std::string& relative) {
  ParseResult result = parse(read_source(relative));
  if (!result.model) throw std::runtime_error(relative + " does not parse");
  return std::move(*result.model);
}

std::string show(const StrSet& ids) {
  std::string text = "{";
  for (const auto& id : ids) text += (text.size() > 1 ? ", " : "") + id;
  return text + "}";
}

std::string range(const std::string& prefix, int first, int last) {
  std::string text;
  for (int i = first; i <= last; ++i) text += (text.empty() ? "" : ",") + prefix + std::to_string(i);
  return text;
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) out.push_back(item);
  return out;
}

struct Corpus {
  Model model = load("corpus/tianjin.hts");
  FlowGraph graph = build_flow_graph(model);
  oracle::RawGraph raw = oracle::raw_graph(model);
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

void criterion_counts(Failures& f) {
  const Model& m = corpus().model;
  std::map<Tier, StrSet> constraints;
  for (const auto& c : m.constraints()) constraints[c.tier].insert(c.id);
  std::map<Tier, StrSet> events;
  for (const auto& e : m.events()) events[node_tier(m, e.id)].insert(e.id);
  const auto as_set = [](const std::string& list) {
    const auto items = split(list);
    return StrSet(items.begin(), items.end());
  };
  f.expect(constraints[Tier::Micro] == as_set(range("SC1.", 1, 14)), "micro constraints " + show(constraints[Tier::Micro]));
  f.expect(events[Tier::Micro] == as_set(range("E1.", 1, 14)), "micro events " + show(events[Tier::Micro]));
  f.expect(constraints[Tier::Meso] == as_set(range("SC2.", 1, 31)), "meso constraints " + show(constraints[Tier::Meso]));
  f.expect(events[Tier::Meso] == as_set(range("E2.", 1, 31)), "meso events " + show(events[Tier::Meso]));
  f.expect(events[Tier::Macro] == as_set(range("E3.", 1, 24)), "macro events " + show(events[Tier::Macro]));
  for (int i = 1; i <= 14; ++i) {
    const auto* e = m.event("E1." + std::to_string(i));
    f.expect(e != nullptr && e->violates.id == "SC1." + std::to_string(i), "E1." + std::to_string(i) + " pairing");
  }
  for (int i = 1; i <= 31; ++i) {
    const auto* e = m.event("E2." + std::to_string(i));
    f.expect(e != nullptr && e->violates.id == "SC2." + std::to_string(i), "E2." + std::to_string(i) + " pairing");
  }
  StrSet violated;
  for (const auto& e : m.events()) violated.insert(e.violates.id);
  f.expect(violated.size() == m.events().size(), "event to constraint map is not injective");
}

void criterion_event_flow(Failures& f) {
  const std::vector<std::pair<std::string, StrSet>> expected = {
      {"R1", {"E1.1", "E1.4"}},
      {"R2", {"R1", "E1.8", "E1.9"}},
      {"R3", {"R2", "E1.10", "E1.11"}},
      {"R4", {"R3", "E1.12", "E1.13", "E1.14"}},
      {"E1.1", {"E1.2", "E1.3"}},
  };
  for (const auto& [node, causes] : expected) {
    const StrSet got = oracle::plain(direct_causes(corpus().graph, node));
    f.expect(got == causes, node + " has causes " + show(got));
  }
}

void criterion_cross_level(Failures& f) {
  struct Row {
    std::string macro;
    StrSet meso;
    StrSet micro;
  };
  // Rows listed twice in the source table are merged by union.
  const std::vector<Row> table = {
      {"E3.1", {"E2.15", "E2.16", "E2.17"}, {"E1.5"}},
      {"E3.2", {"E2.1", "E2.8", "E2.9", "E2.10", "E2.11", "E2.12"}, {"E1.6", "E1.9", "E1.11", "E1.12", "E1.13"}},
      {"E3.3", {"E2.2", "E2.3", "E2.4", "E2.5", "E2.6", "E2.7", "E2.28"}, {"E1.7", "E1.11", "E1.12"}},
      {"E3.4", {"E2.3", "E2.4", "E2.5", "E2.6", "E2.7", "E2.13"}, {"E1.7", "E1.8", "E1.10", "E1.12", "E1.14"}},
      {"E3.5", {"E2.8", "E2.9", "E2.10", "E2.11", "E2.12", "E2.15", "E2.28", "E2.29", "E2.30", "E2.31"}, {"E1.14"}},
      {"E3.6", {"E2.9", "E2.10", "E2.11", "E2.14", "E2.31"}, {"E1.12", "E1.14"}},
      {"E3.7", {"E2.8", "E2.15"}, {}},
      {"E3.8", {"E2.8", "E2.15"}, {}},
      {"E3.9", {"E2.8", "E2.15"}, {}},
      {"E3.10", {"E2.8", "E2.12", "E2.15", "E2.23", "E2.24", "E2.25"}, {"E1.14"}},
      {"E3.11", {"E2.1", "E2.2", "E2.3", "E2.4", "E2.5", "E2.6", "E2.7"}, {"E1.6", "E1.7", "E1.9", "E1.11", "E1.12"}},
      {"E3.12", {"E2.8", "E2.9", "E2.15"}, {}},
      {"E3.13", {"E2.14", "E2.18", "E2.19"}, {}},
      {"E3.14", {"E2.8", "E2.9", "E2.10", "E2.12", "E2.15", "E2.16", "E2.17"}, {"E1.5"}},
      {"E3.15", {"E2.8", "E2.9", "E2.10", "E2.11", "E2.12", "E2.18"}, {}},
      {"E3.16", {"E2.8", "E2.9", "E2.10", "E2.11"}, {}},
      {"E3.17", {"E2.26", "E2.27"}, {}},
      {"E3.18", {"E2.18", "E2.19"}, {"E1.13"}},
      {"E3.19", {"E2.5", "E2.6"}, {}},
      {"E3.20", {"E2.23", "E2.24"}, {}},
      {"E3.21", {"E2.8", "E2.9", "E2.10", "E2.11", "E2.12", "E2.20", "E2.21", "E2.22", "E2.23", "E2.24", "E2.25"}, {"E1.5"}},
      {"E3.22", {"E2.20", "E2.21", "E2.22", "E2.23", "E2.24", "E2.25"}, {"E1.5"}},
      {"E3.23", {"E2.1", "E2.28", "E2.29", "E2.30"}, {}},
      {"E3.24", {"E2.13", "E2.14", "E2.18", "E2.29", "E2.30", "E2.31"}, {"E1.13"}},
  };
  f.expect(table.size() == 24, "table must have 24 rows");
  for (const auto& row : table) {
    const CrossLevelMap map = cross_level_map(corpus().graph, row.macro);
    f.expect(oracle::plain(map.meso) == row.meso, row.macro + " meso " + show(oracle::plain(map.meso)));
    f.expect(oracle::plain(map.micro) == row.micro, row.macro + " micro " + show(oracle::plain(map.micro)));
    f.expect(map.macro.empty() && map.risk.empty(), row.macro + " has macro or risk successors");
  }
}

// Macro events also point at E1.5-E1.7 (from the cross-level table), so the
// meso influences are compared on the meso-tier part of the direct causes.
void criterion_meso_influence(Failures& f) {
  const std::vector<std::pair<std::string, StrSet>> expected = {
      {"E1.5", {"E2.2", "E2.3", "E2.16", "E2.17"}},
      {"E1.6", {"E2.1", "E2.28"}},
      {"E1.7", {"E2.2", "E2.3", "E2.4"}},
  };
  for (const auto& [node, causes] : expected) {
    const IdSet direct = direct_causes(corpus().graph, node);
    const StrSet got = oracle::plain(in_tier(corpus().graph, direct, Tier::Meso));
    f.expect(got == causes, node + " meso causes " + show(got));
    for (const auto& c : direct) {
      const Tier t = corpus().graph.node(c).tier;
      f.expect(t == Tier::Meso || t == Tier::Macro, node + " has unexpected cause " + c);
    }
  }
}

void criterion_risk_ladder(Failures& f) {
  const Model& m = corpus().model;
  const auto overall = [&](const std::string& list) {
    const auto ids = split(list);
    return classify_state(m, IdSet(ids.begin(), ids.end())).overall;
  };
  f.expect(overall("") == Severity::Safe, "empty set is not Safe");
  f.expect(classify_state(m, {}).violated.empty(), "empty set echoes violations");
  f.expect(overall("SC1.1") == Severity::NearMiss, "{SC1.1} is not NearMiss");
  f.expect(overall("SC1.1,SC1.2,SC1.3,SC1.4") == Severity::Incident, "{SC1.1..SC1.4} is not Incident");
  f.expect(overall("SC1.1,SC1.2,SC1.3,SC1.4,SC1.14") == Severity::MajorAccident,
           "{SC1.1..SC1.4, SC1.14} is not MajorAccident");

  std::vector<std::string> universe;
  for (const auto& c : m.constraints()) universe.push_back(c.id);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 200; ++round) {
    const double p = u(rng) * 0.5;
    const double q = p + u(rng) * 0.5;
    IdSet small;
    IdSet large;
    for (const auto& id : universe) {
      const double x = u(rng);
      if (x < p) small.insert(id);
      if (x < q) large.insert(id);
    }
    const SystemState a = classify_state(m, small);
    const SystemState b = classify_state(m, large);
    bool ok = !(b.overall < a.overall);
    for (const auto& [hazard, severity] : a.per_hazard) ok = ok && !(b.per_hazard.at(hazard) < severity);
    f.expect(ok, "monotonicity fails in round " + std::to_string(round));
  }
}

void criterion_oracles(Failures& f) {
  const Corpus& c = corpus();
  const auto closure = oracle::closure_contributors(c.raw);
  for (const auto& n : c.graph.nodes()) {
    f.expect(oracle::plain(contributors(c.graph, n.id)) == closure.at(n.id), "contributors of " + n.id);
  }

  std::vector<std::string> sources;
  std::vector<std::string> risks;
  for (const auto& n : c.graph.nodes()) (n.tier == Tier::Risk ? risks : sources).push_back(n.id);
  std::mt19937 rng(2);
  int nonzero = 0;
  for (int i = 0; i < 10; ++i) {
    const std::string from = sources[std::uniform_int_distribution<std::size_t>(0, sources.size() - 1)(rng)];
    const std::string to = risks[std::uniform_int_distribution<std::size_t>(0, risks.size() - 1)(rng)];
    const std::size_t expected = oracle::count_paths(c.raw, from, to);
    nonzero += expected > 0;
    std::size_t got = 0;
    try {
      got = enumerate_paths(c.graph, from, to).size();
    } catch (const AnalysisError& e) {
      f.expect(e.code() == ErrorCode::PathLimit && expected > kDefaultPathCap, from + " -> " + to + ": " + e.what());
      continue;
    }
    f.expect(got == expected, from + " -> " + to + " has " + std::to_string(got) + " paths, oracle " +
                                  std::to_string(expected));
  }
  f.expect(nonzero > 0, "every sampled pair was disconnected");

  std::vector<std::string> nodes;
  for (const auto& n : c.graph.nodes()) nodes.push_back(n.id);
  for (unsigned seed = 0; seed < 100; ++seed) {
    std::mt19937 pick(seed + 1000);
    std::bernoulli_distribution take(0.1);
    IdSet start;
    for (const auto& id : nodes) {
      if (take(pick)) start.insert(id);
    }
    f.expect(oracle::plain(propagate(c.graph, start)) == oracle::naive_propagate(c.raw, oracle::plain(start)),
             "propagate seed " + std::to_string(seed));
  }
}

void criterion_validation(Failures& f) {
  const std::vector<std::pair<std::string, std::string>> fixtures = {
      {"P001", "unexpected_token"},     {"P002", "unterminated_string"},  {"P003", "duplicate_declaration"},
      {"P004", "unknown_keyword"},      {"V101", "dangling_reference"},   {"V102", "subject_mismatch"},
      {"V110", "shared_violation"},     {"V111", "unviolated_constraint"}, {"V120", "upward_edge"},
      {"V130", "causal_cycle"},         {"V140", "unenforced_constraint"}, {"V141", "uncaused_risk"},
  };
  const auto codes_of = [](const std::string& relative) {
    ParseResult result = parse(read_source(relative));
    std::vector<std::string> codes;
    for (const auto& d : result.diagnostics) codes.push_back(d.code);
    if (result.model) {
      for (const auto& d : validate(*result.model).diagnostics) codes.push_back(d.code);
    }
    return codes;
  };
  for (const auto& [code, name] : fixtures) {
    const auto broken = codes_of("fixtures/" + name + ".hts");
    f.expect(broken == std::vector<std::string>{code}, name + ".hts does not yield exactly " + code);
    const auto fixed = codes_of("fixtures/" + name + "_fixed.hts");
    f.expect(fixed.empty(), name + "_fixed.hts yields diagnostics");
  }
  const auto report = validate(corpus().model);
  f.expect(report.error_count() == 0, "corpus has " + std::to_string(report.error_count()) + " errors");
}

void criterion_determinism(Failures& f) {
  const Model& m = corpus().model;
  const std::string once = format_canonical(m);
  ParseResult again = parse(once);
  f.expect(again.model.has_value() && *again.model == m, "canonical form does not round-trip");
  f.expect(again.model.has_value() && format_canonical(*again.model) == once, "canonical form is not idempotent");

  for (const auto& [name, text] : golden::render(m, corpus().graph)) {
    std::string expected;
    try {
      expected = read_source("tests/golden/" + name);
    } catch (const std::exception& e) {
      f.expect(false, e.what());
      continue;
    }
    f.expect(expected == text, name + " differs from its golden file");
  }

  // Recommendations: six categories in order, every item under its own
  // heading and attributed to its controller.
  const std::string md = emit_report_markdown(m, corpus().graph);
  const auto section = md.find("\n## Recommendations\n");
  f.expect(section != std::string::npos, "report has no Recommendations section");
  if (section == std::string::npos) return;
  const std::vector<RecommendationCategory> order = {
      RecommendationCategory::Legislative,  RecommendationCategory::Government, RecommendationCategory::Corporate,
      RecommendationCategory::Intermediary, RecommendationCategory::SocialMedia, RecommendationCategory::Technical};
  std::vector<std::size_t> heads;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string heading =
        "\n### " + std::to_string(i + 1) + ". " + std::string(category_heading(order[i])) + "\n";
    heads.push_back(md.find(heading, section));
    f.expect(heads.back() != std::string::npos, "missing heading " + heading.substr(1, heading.size() - 2));
    if (i > 0 && heads[i] != std::string::npos && heads[i - 1] != std::string::npos) {
      f.expect(heads[i - 1] < heads[i], "headings out of order at " + std::to_string(i + 1));
    }
  }
  std::map<RecommendationCategory, std::size_t> counts;
  for (const auto& r : m.recommendations()) {
    ++counts[r.category];
    const auto* controller = m.controller(r.for_controller.id);
    std::string line = "- " + r.text + " (controller: " + r.for_controller.id;
    if (controller != nullptr && !controller->label.empty()) line += ", " + controller->label;
    line += ")\n";
    const auto at = md.find(line, section);
    const auto slot = static_cast<std::size_t>(std::find(order.begin(), order.end(), r.category) - order.begin());
    const std::size_t begin = heads[slot];
    const std::size_t end = slot + 1 < heads.size() ? heads[slot + 1] : md.size();
    f.expect(at != std::string::npos && begin != std::string::npos && at > begin && at < end,
             "recommendation not listed under its heading: " + r.text.substr(0, 40));
  }
  const std::map<RecommendationCategory, std::size_t> table = {
      {RecommendationCategory::Legislative, 3},  {RecommendationCategory::Government, 10},
      {RecommendationCategory::Corporate, 8},    {RecommendationCategory::Intermediary, 1},
      {RecommendationCategory::SocialMedia, 1},  {RecommendationCategory::Technical, 1}};
  f.expect(counts == table, "recommendation counts per category differ from the table");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Failures&)>>> criteria = {
      {"corpus fidelity counts", criterion_counts},
      {"event-flow reproduction", criterion_event_flow},
      {"cross-level reproduction", criterion_cross_level},
      {"meso-influence reproduction", criterion_meso_influence},
      {"risk ladder and classify monotonicity", criterion_risk_ladder},
      {"oracle equivalence", criterion_oracles},
      {"validation soundness", criterion_validation},
      {"determinism and round-trip", criterion_determinism},
  };
  const auto started = std::chrono::steady_clock::now();
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Failures f;
    try {
      criteria[i].second(f);
    } catch (const std::exception& e) {
      f.items.push_back(std::string("exception: ") + e.what());
    }
    const std::string label = "criterion " + std::to_string(i + 1) + ": " + criteria[i].first;
    if (f.items.empty()) {
      std::cout << "PASS " << label << '\n';
    } else {
      ++failed;
      std::cout << "FAIL " << label << " (" << f.items.front();
      if (f.items.size() > 1) std::cout << "; " << f.items.size() - 1 << " more";
      std::cout << ")\n";
    }
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed in " << elapsed << " ms\n";
  return failed == 0 ? 0 : 1;
}
