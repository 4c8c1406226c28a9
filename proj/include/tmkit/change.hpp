#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmkit/model.hpp"

namespace tmkit {

// Thrown by analysis operations; `code` is a stable machine-readable tag
// (CycleError, MultiComponentError, UnknownRegion, TooLarge, ...).
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// A change: a named, flow-connected region (subdiagram) of S.
struct Region {
  std::string id;
  std::set<StageId> stages;

  bool operator==(const Region&) const = default;
};

struct ChangePartition {
  std::vector<Region> regions;  // declaration order; pairwise disjoint

  const Region* find(const std::string& id) const;

  bool operator==(const ChangePartition&) const = default;
};

enum class EdgeCause { Flow, Trigger };

struct PrecedenceEdge {
  std::string before;
  std::string after;
  EdgeCause cause = EdgeCause::Flow;

  bool operator==(const PrecedenceEdge&) const = default;
  auto operator<=>(const PrecedenceEdge&) const = default;
};

// The atemporal "appears before / appears after" relation over changes.
struct PrecedenceDag {
  std::vector<std::string> nodes;        // region ids, sorted
  std::vector<PrecedenceEdge> edges;     // sorted, no duplicates

  bool has_node(const std::string& id) const;

  bool operator==(const PrecedenceDag&) const = default;
};

enum class OrderClass { Before, After, Unordered };

std::string_view to_string(OrderClass c);

struct PrecedenceOptions {
  bool allow_multi_component = false;
};

// Checks partition invariants (disjointness, existence, per-region flow
// connectivity), derives one edge per region pair with a flow or trigger
// between them, and verifies acyclicity and single-component structure.
PrecedenceDag derive_precedence(const StaticModel& model,
                                const ChangePartition& partition,
                                const PrecedenceOptions& options = {});

// Before iff a directed path a->b exists, After iff b->a; else Unordered.
// (a, a) is Unordered by convention.
OrderClass classify_pair(const PrecedenceDag& dag, const std::string& a,
                         const std::string& b);

struct ChronologyResult {
  std::vector<std::vector<std::string>> sequences;  // lexicographic order
  std::uint64_t total = 0;                          // exact, even if truncated
};

// All linear extensions of the DAG, lexicographically, truncated to `limit`
// sequences. Exact count by subset DP; throws TooLarge above 20 nodes.
ChronologyResult enumerate_chronologies(const PrecedenceDag& dag,
                                        std::size_t limit);

// Collapses maximal runs of an identical region id to one occurrence.
std::vector<std::string> normalize_consecutive(
    const std::vector<std::string>& seq);

}  // namespace tmkit
