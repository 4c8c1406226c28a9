#pragma once

#include <map>
#include <string>
#include <vector>

#include "tmkit/events.hpp"

namespace tmkit {

struct ScenarioTick {
  TimeValue time;
  std::map<std::string, double> measurements;
  std::map<std::string, TimeValue> processing_delays;  // by event id

  bool operator==(const ScenarioTick&) const = default;
};

struct Scenario {
  std::string name;
  std::vector<ScenarioTick> ticks;  // strictly increasing times

  bool operator==(const Scenario&) const = default;
};

struct TraceEntry {
  std::string event;
  int instance = 0;  // occurrence index, 0-based
  TimeValue start;
  TimeValue finish;
  std::map<std::string, bool> guard_results;  // branch arms evaluated here

  bool operator==(const TraceEntry&) const = default;
};

struct WapWarning {
  std::string warning_id;
  std::string earlier_event;
  int earlier_instance = 0;
  std::string later_event;
  int later_instance = 0;
  TimeValue separation;
  TimeValue bound;

  bool operator==(const WapWarning&) const = default;
};

struct Trace {
  std::vector<TraceEntry> entries;  // ordered by start, then event id
  std::vector<WapWarning> warnings;

  bool operator==(const Trace&) const = default;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Deterministic discrete-event execution of B against a stimulus scenario.
//
// Each scenario tick opens a wave. Root events start at the tick time (first
// occurrence, or every tick when marked repeat); a successor starts at the
// maximum finish of its predecessors once all incoming edges are enabled
// (AND-join). A branch at an event gates the edges to its arm targets: the
// first arm whose guard holds on the tick's measurements is taken, otherwise
// none. Events named as wap warning targets never start through edges; they
// occur only when their constraint is violated, in which case the violating
// instance also stops enabling its successors. Durations come from the
// tick's processing_delays, falling back to the event spec, then zero.
Trace simulate(const BehaviorModel& behavior, const DynamicModel& dynamic,
               const std::vector<WapConstraint>& constraints,
               const Scenario& scenario, TimeValue horizon);

// Post-hoc wap evaluation over a finished trace. Instances are paired by
// occurrence index; separation strictly greater than the bound is a
// violation. simulate embeds exactly these warnings.
std::vector<WapWarning> check_wap(const Trace& trace,
                                  const std::vector<WapConstraint>& constraints);

// Line-oriented text rendering: "t=<us> <event>#<instance> start|finish"
// plus "WARN <id> sep=<us> bound=<us>".
std::string trace_text(const Trace& trace);

}  // namespace tmkit
