#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmkit/change.hpp"
#include "tmkit/events.hpp"
#include "tmkit/model.hpp"
#include "tmkit/simulate.hpp"

namespace tmkit {

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  SourceSpan span;
  std::string expected;
  std::string found;

  std::string message() const;

  bool operator==(const ParseError&) const = default;
};

// Everything one .tm file can carry: S, the change partition, the event
// specs, the behavior declarations, wap constraints and scenarios.
struct Document {
  StaticModel model;
  std::optional<ChangePartition> partition;
  std::vector<EventSpec> events;
  bool has_behavior = false;
  std::set<std::string> repeats;
  std::vector<Branch> branches;
  std::vector<std::pair<std::string, std::string>> behavior_edges;
  std::vector<WapConstraint> constraints;
  std::vector<Scenario> scenarios;

  const Scenario* find_scenario(const std::string& name) const;

  bool operator==(const Document&) const = default;
};

struct ParseResult {
  Document doc;
  std::vector<ParseError> errors;  // at most 20 per run
  Diagnostics build_errors;        // from build_model, after a clean parse

  bool ok() const { return errors.empty() && build_errors.empty(); }
};

// Total over all inputs: failures come back as errors, never exceptions.
ParseResult parse(std::string_view text, const std::string& file = "<input>");

// Canonical text form: thimacs in declaration order, stages by kind order,
// edges sorted. parse(serialize(x)) reproduces x exactly.
std::string serialize(const Document& doc);

}  // namespace tmkit
