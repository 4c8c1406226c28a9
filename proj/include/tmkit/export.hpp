#pragma once

#include <stdexcept>
#include <string>

#include "tmkit/dsl.hpp"

namespace tmkit {

enum class ExportTarget { Static, Dynamic, Behavior };
enum class RankDir { LR, TB };

struct ExportOptions {
  ExportTarget target = ExportTarget::Static;
  bool show_anchors = true;
  RankDir rankdir = RankDir::LR;
};

class ExportError : public std::runtime_error {
 public:
  ExportError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Graphviz rendering. Thimacs become nested clusters, stages nodes, flows
// solid edges, triggers dashed edges; region membership colors the stages.
// Output is deterministic.
std::string to_dot(const Document& doc, const ExportOptions& options = {});

// Versioned flat JSON interchange ("tm_schema": 1). from_json rebuilds the
// document through the same constructors as the DSL parser; throws
// ExportError with code MalformedJson or SchemaVersionMismatch.
std::string to_json(const Document& doc);
Document from_json(const std::string& text);

}  // namespace tmkit
