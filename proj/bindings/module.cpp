// Python bindings: thin text-in / data-out wrappers over the library. The
// DSL text is the interchange format; results come back as plain python
// structures so no C++ object graphs cross the boundary.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tmkit/export.hpp"
#include "tmkit/simulate.hpp"
#include "tmkit/toolkit.hpp"

namespace py = pybind11;

namespace {

tmkit::Document parse_or_throw(const std::string& text) {
  tmkit::ParseResult result = tmkit::parse(text);
  if (!result.ok()) {
    std::string message;
    for (const auto& error : result.errors) {
      if (!message.empty()) message += "\n";
      message += error.message();
    }
    for (const auto& diag : result.build_errors) {
      if (!message.empty()) message += "\n";
      message += "[" + diag.code + "] " + diag.location + ": " + diag.message;
    }
    throw py::value_error(message);
  }
  return std::move(result.doc);
}

py::list validate_text(const std::string& text) {
  tmkit::Document doc = parse_or_throw(text);
  py::list out;
  for (const auto& diag : tmkit::validate(doc.model)) {
    py::dict item;
    item["severity"] =
        diag.severity == tmkit::Severity::Error ? "error" : "warning";
    item["code"] = diag.code;
    item["location"] = diag.location;
    item["message"] = diag.message;
    out.append(item);
  }
  return out;
}

py::list precedence(const std::string& text, bool allow_multi) {
  tmkit::Document doc = parse_or_throw(text);
  tmkit::Analysis analysis = tmkit::analyze(doc, allow_multi);
  py::list out;
  for (const auto& edge : analysis.dag.edges)
    out.append(py::make_tuple(
        edge.before, edge.after,
        edge.cause == tmkit::EdgeCause::Flow ? "flow" : "trigger"));
  return out;
}

py::tuple chronologies(const std::string& text, std::size_t limit,
                       bool allow_multi) {
  tmkit::Document doc = parse_or_throw(text);
  tmkit::Analysis analysis = tmkit::analyze(doc, allow_multi);
  auto result = tmkit::enumerate_chronologies(analysis.dag, limit);
  return py::make_tuple(result.sequences, result.total);
}

py::dict simulate_text(const std::string& text, const std::string& scenario,
                       std::int64_t horizon_us) {
  tmkit::Document doc = parse_or_throw(text);
  const tmkit::Scenario* s = doc.find_scenario(scenario);
  if (!s) throw py::value_error("no scenario named '" + scenario + "'");
  tmkit::Analysis analysis = tmkit::analyze(doc);
  tmkit::Trace trace =
      tmkit::simulate(analysis.behavior, analysis.dynamic, doc.constraints, *s,
                      tmkit::TimeValue::us(horizon_us));
  py::list entries;
  for (const auto& entry : trace.entries) {
    py::dict item;
    item["event"] = entry.event;
    item["instance"] = entry.instance;
    item["start_us"] = entry.start.micros;
    item["finish_us"] = entry.finish.micros;
    entries.append(item);
  }
  py::list warnings;
  for (const auto& warning : trace.warnings) {
    py::dict item;
    item["warning_id"] = warning.warning_id;
    item["separation_us"] = warning.separation.micros;
    item["bound_us"] = warning.bound.micros;
    warnings.append(item);
  }
  py::dict out;
  out["entries"] = entries;
  out["warnings"] = warnings;
  out["text"] = tmkit::trace_text(trace);
  return out;
}

std::string export_dot(const std::string& text, const std::string& target) {
  tmkit::Document doc = parse_or_throw(text);
  tmkit::ExportOptions options;
  if (target == "dynamic") options.target = tmkit::ExportTarget::Dynamic;
  else if (target == "behavior") options.target = tmkit::ExportTarget::Behavior;
  else if (target != "static")
    throw py::value_error("target must be static, dynamic or behavior");
  return tmkit::to_dot(doc, options);
}

std::string export_json(const std::string& text) {
  return tmkit::to_json(parse_or_throw(text));
}

std::string canonical(const std::string& text) {
  return tmkit::serialize(parse_or_throw(text));
}

}  // namespace

PYBIND11_MODULE(_tmkit, m) {
  m.doc() = "Thinging-machine modeling toolkit";
  m.def("validate", &validate_text, py::arg("text"),
        "Parse DSL text and return a list of diagnostics.");
  m.def("precedence", &precedence, py::arg("text"),
        py::arg("allow_multi") = false,
        "Derived change-precedence edges as (before, after, cause) tuples.");
  m.def("chronologies", &chronologies, py::arg("text"),
        py::arg("limit") = 100, py::arg("allow_multi") = false,
        "All linear extensions of the precedence DAG plus the exact total.");
  m.def("simulate", &simulate_text, py::arg("text"), py::arg("scenario"),
        py::arg("horizon_us") = 60000000,
        "Run a named scenario; returns entries, warnings and trace text.");
  m.def("to_dot", &export_dot, py::arg("text"), py::arg("target") = "static",
        "Graphviz rendering of the static, dynamic or behavior diagram.");
  m.def("to_json", &export_json, py::arg("text"),
        "Versioned JSON interchange form.");
  m.def("canonical", &canonical, py::arg("text"),
        "Canonical serialization of the parsed document.");
}
