#pragma once

#include <map>
#include <string>

#include "tmkit/dsl.hpp"

namespace tmkit {

// The derived analysis stack of one document: precedence DAG over its
// partition, the dynamic model, and the behavior built from both.
struct Analysis {
  PrecedenceDag dag;
  DynamicModel dynamic;
  BehaviorModel behavior;
  std::map<std::string, std::string> region_to_event;
};

// Runs derive_precedence, lift_to_events and build_behavior on a parsed
// document. Requires a partition; event specs default to one zero-duration
// event per region when the document declares none.
Analysis analyze(const Document& doc, bool allow_multi_component = false);

}  // namespace tmkit
