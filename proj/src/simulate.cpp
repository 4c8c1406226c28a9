#include "tmkit/simulate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace tmkit {

namespace {

struct WaveInstance {
  TimeValue start;
  TimeValue finish;
  bool failed = false;                 // wap violation; blocks successors
  std::set<std::string> fired_arms;    // arm targets selected at this event
};

std::vector<std::string> topo_order(const BehaviorModel& behavior) {
  std::map<std::string, int> indegree;
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& e : behavior.events) indegree[e] = 0;
  for (const auto& [a, b] : behavior.edges) {
    if (succ[a].insert(b).second) indegree[b]++;
  }
  std::set<std::string> ready;
  for (const auto& [e, d] : indegree)
    if (d == 0) ready.insert(e);
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string e = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(e);
    for (const auto& next : succ[e])
      if (--indegree[next] == 0) ready.insert(next);
  }
  if (order.size() != behavior.events.size())
    throw SimulationError("CycleError", "behavior edges contain a cycle");
  return order;
}

const ScenarioTick& tick_at_or_before(const Scenario& scenario, TimeValue t) {
  const ScenarioTick* best = nullptr;
  for (const auto& tick : scenario.ticks) {
    if (tick.time <= t) best = &tick;
  }
  if (!best)
    throw SimulationError("HorizonTooSmall",
                          "no scenario tick at or before t=" +
                              std::to_string(t.micros));
  return *best;
}

bool eval_comparison(const GuardComparison& cmp, double value) {
  switch (cmp.op) {
    case CompareOp::Lt: return value < cmp.threshold;
    case CompareOp::Le: return value <= cmp.threshold;
    case CompareOp::Gt: return value > cmp.threshold;
    case CompareOp::Ge: return value >= cmp.threshold;
    case CompareOp::Eq: return value == cmp.threshold;
  }
  return false;
}

bool eval_guard(const GuardExpr& guard, const ScenarioTick& tick) {
  for (const auto& cmp : guard.terms) {
    auto it = tick.measurements.find(cmp.measurement);
    if (it == tick.measurements.end())
      throw SimulationError("GuardMeasurementMissing",
                            "guard references measurement '" +
                                cmp.measurement +
                                "' absent from the scenario");
    if (!eval_comparison(cmp, it->second)) return false;
  }
  return true;
}

TimeValue event_duration(const DynamicModel& dynamic, const ScenarioTick& tick,
                         const std::string& event) {
  auto delay = tick.processing_delays.find(event);
  if (delay != tick.processing_delays.end()) return delay->second;
  const EventSpec* spec = dynamic.find(event);
  if (spec && spec->duration) return *spec->duration;
  return {};
}

}  // namespace

Trace simulate(const BehaviorModel& behavior, const DynamicModel& dynamic,
               const std::vector<WapConstraint>& constraints,
               const Scenario& scenario, TimeValue horizon) {
  if (horizon.micros <= 0)
    throw SimulationError("HorizonTooSmall", "horizon must be positive");
  bool any_tick = std::any_of(
      scenario.ticks.begin(), scenario.ticks.end(),
      [&](const ScenarioTick& t) { return t.time <= horizon; });
  if (!any_tick)
    throw SimulationError("HorizonTooSmall",
                          "no scenario tick fits within the horizon");

  const auto order = topo_order(behavior);

  std::set<std::string> warning_targets;
  for (const auto& c : constraints)
    if (behavior.has_event(c.warning_id)) warning_targets.insert(c.warning_id);

  std::map<std::string, std::vector<std::string>> incoming;
  for (const auto& [a, b] : behavior.edges) incoming[b].push_back(a);

  // Targets whose activation from a given source is guarded by a branch arm.
  std::map<std::string, std::set<std::string>> gated_targets;
  for (const auto& branch : behavior.branches)
    for (const auto& arm : branch.arms) gated_targets[branch.at].insert(arm.to);

  Trace trace;
  std::map<std::string, int> occurrences;
  std::map<std::string, TimeValue> last_finish;

  for (const auto& tick : scenario.ticks) {
    if (tick.time > horizon) break;
    std::map<std::string, WaveInstance> wave;

    for (const auto& event : order) {
      if (warning_targets.count(event)) continue;  // raised only via wap

      TimeValue start;
      const auto in_it = incoming.find(event);
      if (in_it == incoming.end() || in_it->second.empty()) {
        bool occurs = occurrences[event] == 0 || behavior.repeats.count(event);
        if (!occurs) continue;
        start = tick.time;
      } else {
        bool enabled = true;
        start = tick.time;
        for (const auto& pred : in_it->second) {
          auto w = wave.find(pred);
          if (w == wave.end() || w->second.failed) {
            enabled = false;
            break;
          }
          auto gate = gated_targets.find(pred);
          if (gate != gated_targets.end() && gate->second.count(event) &&
              !w->second.fired_arms.count(event)) {
            enabled = false;
            break;
          }
          start = std::max(start, w->second.finish);
        }
        if (!enabled) continue;
      }

      start = std::max(start, last_finish[event]);
      if (start > horizon) continue;
      TimeValue finish = start + event_duration(dynamic, tick, event);

      WaveInstance inst{start, finish, false, {}};
      TraceEntry entry{event, occurrences[event], start, finish, {}};

      if (const Branch* branch = behavior.branch_at(event)) {
        const ScenarioTick& at = tick_at_or_before(scenario, start);
        bool taken = false;
        for (const auto& arm : branch->arms) {
          bool holds = eval_guard(arm.guard, at);
          entry.guard_results[arm.guard.text()] = holds;
          if (holds && !taken) {
            inst.fired_arms.insert(arm.to);
            taken = true;
          }
        }
      }

      occurrences[event]++;
      last_finish[event] = finish;
      trace.entries.push_back(entry);

      // Wap constraints whose later instant is this instance.
      for (const auto& c : constraints) {
        if (c.later_event != event) continue;
        TimeValue later =
            c.later_point == TimePoint::Start ? inst.start : inst.finish;
        TimeValue earlier;
        if (c.earlier_event == event) {
          earlier =
              c.earlier_point == TimePoint::Start ? inst.start : inst.finish;
        } else {
          auto w = wave.find(c.earlier_event);
          if (w == wave.end()) continue;  // unevaluated this wave
          earlier = c.earlier_point == TimePoint::Start ? w->second.start
                                                        : w->second.finish;
        }
        if (later - earlier > c.max_separation) {
          inst.failed = true;
          if (behavior.has_event(c.warning_id)) {
            TimeValue wstart = later;
            TimeValue wfinish =
                wstart + event_duration(dynamic, tick, c.warning_id);
            wave[c.warning_id] = WaveInstance{wstart, wfinish, false, {}};
            trace.entries.push_back({c.warning_id, occurrences[c.warning_id],
                                     wstart, wfinish,
                                     {}});
            occurrences[c.warning_id]++;
            last_finish[c.warning_id] =
                std::max(last_finish[c.warning_id], wfinish);
          }
        }
      }

      wave[event] = inst;
    }
  }

  std::stable_sort(trace.entries.begin(), trace.entries.end(),
                   [](const TraceEntry& a, const TraceEntry& b) {
                     return std::tie(a.start, a.event, a.instance) <
                            std::tie(b.start, b.event, b.instance);
                   });
  trace.warnings = check_wap(trace, constraints);
  return trace;
}

std::vector<WapWarning> check_wap(
    const Trace& trace, const std::vector<WapConstraint>& constraints) {
  // Instance points by event, indexed by occurrence.
  std::map<std::string, std::vector<std::pair<TimeValue, TimeValue>>> points;
  for (const auto& entry : trace.entries) {
    auto& list = points[entry.event];
    if (static_cast<int>(list.size()) <= entry.instance)
      list.resize(entry.instance + 1);
    list[entry.instance] = {entry.start, entry.finish};
  }

  std::vector<WapWarning> warnings;
  for (const auto& c : constraints) {
    auto earlier_it = points.find(c.earlier_event);
    auto later_it = points.find(c.later_event);
    if (earlier_it == points.end() || later_it == points.end())
      continue;  // constraint not covered by this trace
    std::size_t n = std::min(earlier_it->second.size(), later_it->second.size());
    for (std::size_t k = 0; k < n; ++k) {
      TimeValue earlier = c.earlier_point == TimePoint::Start
                              ? earlier_it->second[k].first
                              : earlier_it->second[k].second;
      TimeValue later = c.later_point == TimePoint::Start
                            ? later_it->second[k].first
                            : later_it->second[k].second;
      TimeValue sep = later - earlier;
      if (sep > c.max_separation) {
        warnings.push_back({c.warning_id, c.earlier_event, static_cast<int>(k),
                            c.later_event, static_cast<int>(k), sep,
                            c.max_separation});
      }
    }
  }
  return warnings;
}

std::string trace_text(const Trace& trace) {
  struct Point {
    TimeValue t;
    const TraceEntry* entry;
    bool is_finish;
  };
  std::vector<Point> points;
  for (const auto& entry : trace.entries) {
    points.push_back({entry.start, &entry, false});
    points.push_back({entry.finish, &entry, true});
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return std::tie(a.t, a.entry->event, a.entry->instance, a.is_finish) <
           std::tie(b.t, b.entry->event, b.entry->instance, b.is_finish);
  });
  std::ostringstream out;
  for (const auto& p : points) {
    out << "t=" << p.t.micros << " " << p.entry->event << "#"
        << p.entry->instance << (p.is_finish ? " finish" : " start") << "\n";
  }
  for (const auto& w : trace.warnings) {
    out << "WARN " << w.warning_id << " sep=" << w.separation.micros
        << " bound=" << w.bound.micros << "\n";
  }
  return out.str();
}

}  // namespace tmkit
