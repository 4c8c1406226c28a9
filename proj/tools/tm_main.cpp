#include <CLI11.hpp>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tmkit/export.hpp"
#include "tmkit/simulate.hpp"
#include "tmkit/toolkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;

bool use_color() {
  const char* value = std::getenv("TMKIT_COLOR");
  return value && std::string(value) == "1";
}

std::string severity_text(tmkit::Severity severity) {
  bool color = use_color();
  if (severity == tmkit::Severity::Error)
    return color ? "\x1b[31merror\x1b[0m" : "error";
  return color ? "\x1b[33mwarning\x1b[0m" : "warning";
}

struct Loaded {
  tmkit::Document doc;
  int exit_code = kExitOk;
};

Loaded load(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return {{}, kExitUsage};
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  tmkit::ParseResult result = tmkit::parse(buffer.str(), path);
  for (const auto& error : result.errors)
    std::cerr << error.message() << "\n";
  for (const auto& diag : result.build_errors)
    std::cerr << severity_text(diag.severity) << " [" << diag.code << "] "
              << diag.location << ": " << diag.message << "\n";
  if (!result.ok()) return {{}, kExitFindings};

  if (strict) {
    auto diags = tmkit::validate(result.doc.model);
    bool findings = false;
    for (const auto& diag : diags) {
      std::cerr << severity_text(diag.severity) << " [" << diag.code << "] "
                << diag.location << ": " << diag.message << "\n";
      findings = true;
    }
    if (findings) return {{}, kExitFindings};
  }
  return {std::move(result.doc), kExitOk};
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return kExitUsage;
  }
  out << text;
  return kExitOk;
}

tmkit::TimeValue parse_horizon(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
    i++;
  if (i == 0) throw CLI::ValidationError("--horizon", "expected <int><unit>");
  auto unit = tmkit::time_unit_from(text.substr(i));
  if (!unit) throw CLI::ValidationError("--horizon", "unit must be us, ms or s");
  return tmkit::TimeValue::of(std::stoll(text.substr(0, i)), *unit);
}

int cmd_validate(const std::string& path, bool strict) {
  Loaded loaded = load(path, false);
  if (loaded.exit_code) return loaded.exit_code;
  auto diags = tmkit::validate(loaded.doc.model);
  std::size_t errors = 0;
  for (const auto& diag : diags) {
    if (diag.severity == tmkit::Severity::Error) errors++;
    std::cout << severity_text(diag.severity) << " [" << diag.code << "] "
              << diag.location << ": " << diag.message << "\n";
  }
  std::cout << errors << " errors, " << (diags.size() - errors)
            << " warnings\n";
  if (errors || (strict && !diags.empty())) return kExitFindings;
  return kExitOk;
}

int cmd_changes(const std::string& path) {
  Loaded loaded = load(path, false);
  if (loaded.exit_code) return loaded.exit_code;
  if (!loaded.doc.partition) {
    std::cout << "no change regions declared\n";
    return kExitOk;
  }
  for (const auto& region : loaded.doc.partition->regions) {
    std::cout << region.id << ":";
    for (const auto& stage : region.stages) std::cout << " " << stage;
    std::cout << "\n";
  }
  std::size_t assigned = 0;
  for (const auto& region : loaded.doc.partition->regions)
    assigned += region.stages.size();
  std::cout << loaded.doc.partition->regions.size() << " regions covering "
            << assigned << " of " << loaded.doc.model.stages.size()
            << " stages\n";
  try {
    tmkit::derive_precedence(loaded.doc.model, *loaded.doc.partition,
                             {.allow_multi_component = true});
    std::cout << "partition: ok\n";
  } catch (const tmkit::AnalysisError& e) {
    std::cout << "partition: " << e.code() << ": " << e.what() << "\n";
    return kExitFindings;
  }
  return kExitOk;
}

int cmd_order(const std::string& path, bool allow_multi) {
  Loaded loaded = load(path, false);
  if (loaded.exit_code) return loaded.exit_code;
  try {
    tmkit::Analysis analysis = tmkit::analyze(loaded.doc, allow_multi);
    for (const auto& edge : analysis.dag.edges) {
      std::cout << edge.before << " < " << edge.after << " ("
                << (edge.cause == tmkit::EdgeCause::Flow ? "flow" : "trigger")
                << ")\n";
    }
    const auto& nodes = analysis.dag.nodes;
    for (const auto& a : nodes) {
      for (const auto& b : nodes) {
        if (a >= b) continue;
        std::cout << a << " / " << b << ": "
                  << tmkit::to_string(tmkit::classify_pair(analysis.dag, a, b))
                  << "\n";
      }
    }
  } catch (const tmkit::AnalysisError& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return kExitFindings;
  }
  return kExitOk;
}

int cmd_chronologies(const std::string& path, std::size_t limit,
                     bool allow_multi) {
  Loaded loaded = load(path, false);
  if (loaded.exit_code) return loaded.exit_code;
  try {
    tmkit::Analysis analysis = tmkit::analyze(loaded.doc, allow_multi);
    auto result = tmkit::enumerate_chronologies(analysis.dag, limit);
    for (const auto& sequence : result.sequences) {
      for (std::size_t i = 0; i < sequence.size(); ++i)
        std::cout << (i ? "," : "") << sequence[i];
      std::cout << "\n";
    }
    std::cout << "total: " << result.total << "\n";
  } catch (const tmkit::AnalysisError& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return kExitFindings;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& path, const std::string& scenario_name,
                 const std::string& horizon_text, bool allow_multi) {
  Loaded loaded = load(path, false);
  if (loaded.exit_code) return loaded.exit_code;
  const tmkit::Scenario* scenario = loaded.doc.find_scenario(scenario_name);
  if (!scenario) {
    std::cerr << "error: no scenario '" << scenario_name << "' in " << path
              << "\n";
    return kExitUsage;
  }
  try {
    tmkit::TimeValue horizon = parse_horizon(horizon_text);
    tmkit::Analysis analysis = tmkit::analyze(loaded.doc, allow_multi);
    tmkit::Trace trace =
        tmkit::simulate(analysis.behavior, analysis.dynamic,
                        loaded.doc.constraints, *scenario, horizon);
    std::cout << tmkit::trace_text(trace);
  } catch (const tmkit::AnalysisError& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return kExitFindings;
  } catch (const tmkit::SimulationError& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return kExitFindings;
  }
  return kExitOk;
}

int cmd_export(const std::string& path, const std::string& format,
               const std::string& target, const std::string& out_path) {
  Loaded loaded = load(path, false);
  if (loaded.exit_code) return loaded.exit_code;
  try {
    if (format == "json") return write_output(tmkit::to_json(loaded.doc), out_path);
    tmkit::ExportOptions options;
    if (target == "dynamic") options.target = tmkit::ExportTarget::Dynamic;
    else if (target == "behavior") options.target = tmkit::ExportTarget::Behavior;
    return write_output(tmkit::to_dot(loaded.doc, options), out_path);
  } catch (const tmkit::ExportError& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return kExitFindings;
  } catch (const tmkit::AnalysisError& e) {
    std::cerr << "error [" << e.code() << "] " << e.what() << "\n";
    return kExitFindings;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thinging-machine modeling toolkit"};
  app.require_subcommand(1);

  std::string file, scenario, horizon = "60s", format = "dot",
              target = "static", out_path;
  std::size_t limit = 100;
  bool allow_multi = false, strict = false;
  app.add_flag("--strict", strict, "promote warnings to errors");

  auto* validate = app.add_subcommand("validate", "check model invariants");
  validate->add_option("file", file)->required();

  auto* changes = app.add_subcommand("changes", "list change regions");
  changes->add_option("file", file)->required();

  auto* order = app.add_subcommand("order", "derive change precedence");
  order->add_option("file", file)->required();
  order->add_flag("--allow-multi", allow_multi);

  auto* chron = app.add_subcommand("chronologies", "enumerate linear extensions");
  chron->add_option("file", file)->required();
  chron->add_option("--limit", limit);
  chron->add_flag("--allow-multi", allow_multi);

  auto* simulate = app.add_subcommand("simulate", "run a scenario");
  simulate->add_option("file", file)->required();
  simulate->add_option("--scenario", scenario)->required();
  simulate->add_option("--horizon", horizon);
  simulate->add_flag("--allow-multi", allow_multi);

  auto* exporter = app.add_subcommand("export", "render DOT or JSON");
  exporter->add_option("file", file)->required();
  exporter->add_option("--format", format)
      ->check(CLI::IsMember({"dot", "json"}));
  exporter->add_option("--target", target)
      ->check(CLI::IsMember({"static", "dynamic", "behavior"}));
  exporter->add_option("-o,--output", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  if (validate->parsed()) return cmd_validate(file, strict);
  if (changes->parsed()) return cmd_changes(file);
  if (order->parsed()) return cmd_order(file, allow_multi);
  if (chron->parsed()) return cmd_chronologies(file, limit, allow_multi);
  if (simulate->parsed()) return cmd_simulate(file, scenario, horizon, allow_multi);
  if (exporter->parsed()) return cmd_export(file, format, target, out_path);
  return kExitUsage;
}
