#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hts/dsl.hpp"
#include "hts/flowgraph.hpp"
#include "hts/report.hpp"
#include "hts/validate.hpp"

namespace hts::cli {

namespace {

constexpr std::string_view kVersion = "hts 1.0.0";

// Thrown to unwind to run() with a fixed exit code once the message has
// been written.
struct Exit {
  int code;
};

std::vector<std::string> split_ids(std::string_view list) {
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) ids.emplace_back(item);
    start = end + 1;
  }
  return ids;
}

IdSet id_set(std::string_view list) {
  auto ids = split_ids(list);
  return IdSet(ids.begin(), ids.end());
}

std::set<Tier> parse_tiers(std::string_view list, std::ostream& err) {
  std::set<Tier> tiers;
  for (const auto& word : split_ids(list)) {
    std::string lower = word;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "macro") {
      tiers.insert(Tier::Macro);
    } else if (lower == "meso") {
      tiers.insert(Tier::Meso);
    } else if (lower == "micro") {
      tiers.insert(Tier::Micro);
    } else if (lower == "risk") {
      tiers.insert(Tier::Risk);
    } else {
      err << "error: unknown tier '" << word << "' (expected macro, meso, micro or risk)\n";
      throw Exit{kExitUsage};
    }
  }
  if (tiers.empty()) {
    err << "error: --tiers needs at least one tier\n";
    throw Exit{kExitUsage};
  }
  return tiers;
}

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read '" << path << "'\n";
    throw Exit{kExitUsage};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    err << "error: cannot read '" << path << "'\n";
    throw Exit{kExitUsage};
  }
  return buffer.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, const std::string& path, std::ostream& os) {
  for (const auto& d : diagnostics) os << format_diagnostic(d, path) << '\n';
}

std::string summary_line(const std::vector<Diagnostic>& diagnostics) {
  const std::size_t errors = error_count(diagnostics);
  const std::size_t warnings = diagnostics.size() - errors;
  return std::to_string(errors) + (errors == 1 ? " error, " : " errors, ") + std::to_string(warnings) +
         (warnings == 1 ? " warning" : " warnings");
}

Model parse_or_exit(const std::string& path, std::ostream& err) {
  ParseResult result = parse(read_file(path, err));
  if (!result.model) {
    print_diagnostics(result.diagnostics, path, err);
    err << summary_line(result.diagnostics) << '\n';
    throw Exit{kExitErrors};
  }
  return std::move(*result.model);
}

struct Loaded {
  Model model;
  ValidationReport report;
  FlowGraph graph;
};

Loaded load_validated(const std::string& path, std::ostream& err) {
  Model model = parse_or_exit(path, err);
  ValidationReport report = validate(model);
  if (report.error_count() != 0) {
    print_diagnostics(report.diagnostics, path, err);
    err << summary_line(report.diagnostics) << '\n';
    throw Exit{kExitErrors};
  }
  FlowGraph graph = build_flow_graph(model);
  return Loaded{std::move(model), std::move(report), std::move(graph)};
}

void print_ids(const IdSet& ids, std::ostream& out) {
  for (const auto& id : ids) out << id << '\n';
}

std::string joined(const IdSet& ids) {
  std::string text;
  for (const auto& id : ids) {
    if (!text.empty()) text += ", ";
    text += id;
  }
  return text;
}

int cmd_check(const std::string& path, bool json, std::ostream& out, std::ostream& err) {
  ParseResult result = parse(read_file(path, err));
  std::vector<Diagnostic> diagnostics = result.diagnostics;
  if (result.model) {
    ValidationReport report = validate(*result.model);
    diagnostics.insert(diagnostics.end(), report.diagnostics.begin(), report.diagnostics.end());
  }
  if (json) {
    out << emit_diagnostics_json(diagnostics);
  } else {
    print_diagnostics(diagnostics, path, out);
    out << summary_line(diagnostics) << '\n';
  }
  return error_count(diagnostics) == 0 ? kExitOk : kExitErrors;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hazard-target system modeling and accident analysis", "hts"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string file;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "Model source (.hts)")->required(); };

  bool json = false;
  auto* check = app.add_subcommand("check", "Parse and validate a model, printing diagnostics");
  add_file(check);
  check->add_flag("--json", json, "Print diagnostics as JSON");

  std::string format = "dot";
  std::string tiers_arg;
  std::string highlight_arg;
  std::string rankdir = "TB";
  std::string view = "flow";
  auto* graph_cmd = app.add_subcommand("graph", "Emit the event-flow graph or the control structure");
  add_file(graph_cmd);
  graph_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"dot", "json"}));
  graph_cmd->add_option("--tiers", tiers_arg, "Comma-separated tiers to include (macro,meso,micro,risk)");
  graph_cmd->add_option("--highlight", highlight_arg, "Comma-separated node ids to highlight");
  graph_cmd->add_option("--rankdir", rankdir, "Layout direction")->check(CLI::IsMember({"TB", "LR"}));
  graph_cmd->add_option("--view", view, "Diagram to draw")->check(CLI::IsMember({"flow", "control"}));

  std::string from;
  std::string to;
  std::size_t max_paths = kDefaultPathCap;
  auto* paths_cmd = app.add_subcommand("paths", "List simple cause paths between two nodes");
  add_file(paths_cmd);
  paths_cmd->add_option("--from", from, "Start node")->required();
  paths_cmd->add_option("--to", to, "End node")->required();
  paths_cmd->add_option("--max", max_paths, "Path cap");

  std::string node;
  bool transitive = false;
  bool roots = false;
  auto* causes_cmd = app.add_subcommand("causes", "List the causes of a node");
  add_file(causes_cmd);
  causes_cmd->add_option("--node", node, "Node id")->required();
  auto* transitive_flag = causes_cmd->add_flag("--transitive", transitive, "Every contributor, not just direct causes");
  causes_cmd->add_flag("--roots", roots, "Only contributors without causes")->excludes(transitive_flag);

  std::string macro;
  auto* map_cmd = app.add_subcommand("map", "Cross-level map of a macro event");
  add_file(map_cmd);
  map_cmd->add_option("--macro", macro, "Macro event id")->required();

  std::string violated;
  auto* classify_cmd = app.add_subcommand("classify", "Classify the system state for violated constraints");
  add_file(classify_cmd);
  classify_cmd->add_option("--violated", violated, "Comma-separated constraint ids")->required();

  std::string seed;
  auto* propagate_cmd = app.add_subcommand("propagate", "Gate-aware activation from seed nodes");
  add_file(propagate_cmd);
  propagate_cmd->add_option("--seed", seed, "Comma-separated node ids")->required();

  std::string output;
  auto* report_cmd = app.add_subcommand("report", "Write the markdown accident report");
  add_file(report_cmd);
  report_cmd->add_option("-o,--output", output, "Output path (standard output when omitted)");

  auto* fmt_cmd = app.add_subcommand("fmt", "Print the canonical form of a model");
  add_file(fmt_cmd);

  std::string event;
  auto* trace_cmd = app.add_subcommand("trace", "Trace an event to its constraint and enforcing loops");
  add_file(trace_cmd);
  trace_cmd->add_option("--event", event, "Event id")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(file, json, out, err);

    if (fmt_cmd->parsed()) {
      out << format_canonical(parse_or_exit(file, err));
      return kExitOk;
    }

    Loaded loaded = load_validated(file, err);
    const Model& model = loaded.model;
    const FlowGraph& graph = loaded.graph;

    if (graph_cmd->parsed()) {
      if (view == "control") {
        if (format == "json") {
          err << "error: --view control is only available with --format dot\n";
          return kExitUsage;
        }
        out << emit_dot_control(model);
        return kExitOk;
      }
      EmitOptions options;
      if (!tiers_arg.empty()) options.tiers = parse_tiers(tiers_arg, err);
      options.highlight = id_set(highlight_arg);
      for (const auto& id : options.highlight) graph.node(id);
      options.rankdir = rankdir == "LR" ? RankDir::LeftToRight : RankDir::TopToBottom;
      if (format == "json") {
        Analyses analyses;
        analyses.flow_graph_tiers = options.tiers;
        out << emit_json(model, loaded.report.diagnostics, analyses, &graph);
      } else {
        out << emit_dot_flow(graph, options);
      }
      return kExitOk;
    }

    if (paths_cmd->parsed()) {
      for (const auto& path : enumerate_paths(graph, from, to, max_paths)) {
        for (std::size_t i = 0; i < path.size(); ++i) out << (i == 0 ? "" : " -> ") << path[i];
        out << '\n';
      }
      return kExitOk;
    }

    if (causes_cmd->parsed()) {
      if (roots) {
        print_ids(root_causes(graph, node), out);
      } else if (transitive) {
        print_ids(contributors(graph, node), out);
      } else {
        print_ids(direct_causes(graph, node), out);
      }
      return kExitOk;
    }

    if (map_cmd->parsed()) {
      const CrossLevelMap map = cross_level_map(graph, macro);
      out << "meso: " << joined(map.meso) << '\n';
      out << "micro: " << joined(map.micro) << '\n';
      if (!map.macro.empty()) out << "macro: " << joined(map.macro) << '\n';
      if (!map.risk.empty()) out << "risk: " << joined(map.risk) << '\n';
      return kExitOk;
    }

    if (classify_cmd->parsed()) {
      const SystemState state = classify_state(model, id_set(violated));
      for (const auto& [hazard, severity] : state.per_hazard) out << hazard << ": " << to_string(severity) << '\n';
      out << "overall: " << to_string(state.overall) << '\n';
      return kExitOk;
    }

    if (propagate_cmd->parsed()) {
      print_ids(propagate(graph, id_set(seed)), out);
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      const std::string text = emit_report_markdown(model, graph);
      if (output.empty()) {
        out << text;
        return kExitOk;
      }
      std::ofstream file_out(output, std::ios::binary);
      file_out << text;
      if (!file_out) {
        err << "error: cannot write '" << output << "'\n";
        return kExitUsage;
      }
      return kExitOk;
    }

    if (trace_cmd->parsed()) {
      const EventTrace trace = trace_event(model, event);
      if (trace.constraint == nullptr) {
        out << trace.event->id << " violates " << trace.event->violates.id << " (unresolved)\n";
        return kExitOk;
      }
      const SafetyConstraint& c = *trace.constraint;
      out << trace.event->id << " violates " << c.id << " (" << to_string(c.kind) << ", " << to_string(c.tier)
          << ", on " << c.subject.id << ")\n";
      if (trace.loops.empty()) out << "no enforcing loops\n";
      for (const auto& [loop, controller] : trace.loops) {
        out << "loop " << loop->id << ": controller " << loop->controller.id;
        if (controller != nullptr) out << " (" << to_string(controller->tier) << ", " << to_string(controller->domain) << ")";
        out << " controls " << loop->controls.id << '\n';
      }
      return kExitOk;
    }
  } catch (const Exit& e) {
    return e.code;
  } catch (const AnalysisError& e) {
    err << "error " << e.what() << '\n';
    return e.code() == ErrorCode::PathLimit ? kExitLimit : kExitErrors;
  }
  return kExitUsage;
}

}  // namespace hts::cli
