#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tmkit/change.hpp"

namespace tmkit {

enum class TimeUnit { Us, Ms, S };

std::string_view to_string(TimeUnit unit);
std::optional<TimeUnit> time_unit_from(std::string_view text);

// Discrete time, stored as integer microseconds. All arithmetic is exact.
struct TimeValue {
  std::int64_t micros = 0;

  static TimeValue of(std::int64_t magnitude, TimeUnit unit);
  static TimeValue us(std::int64_t v) { return {v}; }
  static TimeValue ms(std::int64_t v) { return {v * 1000}; }
  static TimeValue sec(std::int64_t v) { return {v * 1000000}; }

  // Largest unit that divides the value exactly, for display.
  std::pair<std::int64_t, TimeUnit> display() const;
  std::string text() const;

  bool operator==(const TimeValue&) const = default;
  auto operator<=>(const TimeValue&) const = default;
};

inline TimeValue operator+(TimeValue a, TimeValue b) {
  return {a.micros + b.micros};
}
inline TimeValue operator-(TimeValue a, TimeValue b) {
  return {a.micros - b.micros};
}

// An event: a change region placed in time.
struct EventSpec {
  std::string id;
  std::string region;
  std::optional<TimeValue> duration;

  bool operator==(const EventSpec&) const = default;
};

// The dynamic model D: events lifted from changes, at most one per region.
struct DynamicModel {
  std::vector<EventSpec> events;  // declaration order

  const EventSpec* find(const std::string& id) const;
  const EventSpec* find_by_region(const std::string& region) const;
  std::map<std::string, std::string> region_to_event() const;

  bool operator==(const DynamicModel&) const = default;
};

enum class CompareOp { Lt, Le, Gt, Ge, Eq };

std::string_view to_string(CompareOp op);

struct GuardComparison {
  std::string measurement;
  CompareOp op = CompareOp::Lt;
  double threshold = 0;

  bool operator==(const GuardComparison&) const = default;
};

// Conjunction of comparisons over scenario measurements.
struct GuardExpr {
  std::vector<GuardComparison> terms;

  std::string text() const;

  bool operator==(const GuardExpr&) const = default;
};

struct BranchArm {
  GuardExpr guard;
  std::string to;

  bool operator==(const BranchArm&) const = default;
};

struct Branch {
  std::string at;
  std::vector<BranchArm> arms;
  bool else_skip = true;

  bool operator==(const Branch&) const = default;
};

enum class TimePoint { Start, Finish };

std::string_view to_string(TimePoint p);

// Maximum-separation constraint between two event instants. `warning_id`
// names the warning; when it matches an event id in B, a violation also
// raises that event in the trace.
struct WapConstraint {
  std::string later_event;
  TimePoint later_point = TimePoint::Finish;
  std::string earlier_event;
  TimePoint earlier_point = TimePoint::Start;
  TimeValue max_separation;
  std::string warning_id;

  bool operator==(const WapConstraint&) const = default;
};

// The behavioral model B: the chronology of events. Edges hold the
// transitive reduction of the lifted change order; repetition is a node
// marker, never a cyclic edge.
struct BehaviorModel {
  std::vector<std::string> events;                        // sorted
  std::vector<std::pair<std::string, std::string>> edges; // sorted
  std::set<std::string> repeats;
  std::vector<Branch> branches;

  bool has_event(const std::string& id) const;
  const Branch* branch_at(const std::string& id) const;

  bool operator==(const BehaviorModel&) const = default;
};

DynamicModel lift_to_events(const ChangePartition& partition,
                            const std::vector<EventSpec>& specs);

// Maps the DAG's transitive reduction through region->event, then attaches
// repeats, branch declarations and any manual extra edges. Re-verifies
// acyclicity.
BehaviorModel build_behavior(
    const DynamicModel& dynamic, const PrecedenceDag& dag,
    const std::set<std::string>& repeats, const std::vector<Branch>& branches,
    const std::vector<std::pair<std::string, std::string>>& extra_edges = {});

struct IsomorphismResult {
  bool ok = true;
  // First region pair whose order disagrees between the two structures.
  std::optional<std::pair<std::string, std::string>> counterexample;
};

// True iff reachability over the change DAG and over B's edges agree under
// the region->event mapping.
IsomorphismResult check_isomorphism(
    const PrecedenceDag& dag, const BehaviorModel& behavior,
    const std::map<std::string, std::string>& mapping);

}  // namespace tmkit
