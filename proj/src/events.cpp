#include "tmkit/events.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>

namespace tmkit {

std::string_view to_string(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Us: return "us";
    case TimeUnit::Ms: return "ms";
    case TimeUnit::S: return "s";
  }
  return "?";
}

std::optional<TimeUnit> time_unit_from(std::string_view text) {
  if (text == "us") return TimeUnit::Us;
  if (text == "ms") return TimeUnit::Ms;
  if (text == "s") return TimeUnit::S;
  return std::nullopt;
}

TimeValue TimeValue::of(std::int64_t magnitude, TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Us: return us(magnitude);
    case TimeUnit::Ms: return ms(magnitude);
    case TimeUnit::S: return sec(magnitude);
  }
  return {};
}

std::pair<std::int64_t, TimeUnit> TimeValue::display() const {
  if (micros != 0 && micros % 1000000 == 0)
    return {micros / 1000000, TimeUnit::S};
  if (micros != 0 && micros % 1000 == 0) return {micros / 1000, TimeUnit::Ms};
  return {micros, TimeUnit::Us};
}

std::string TimeValue::text() const {
  auto [magnitude, unit] = display();
  return std::to_string(magnitude) + " " + std::string(to_string(unit));
}

const EventSpec* DynamicModel::find(const std::string& id) const {
  for (const auto& event : events)
    if (event.id == id) return &event;
  return nullptr;
}

const EventSpec* DynamicModel::find_by_region(const std::string& region) const {
  for (const auto& event : events)
    if (event.region == region) return &event;
  return nullptr;
}

std::map<std::string, std::string> DynamicModel::region_to_event() const {
  std::map<std::string, std::string> mapping;
  for (const auto& event : events) mapping[event.region] = event.id;
  return mapping;
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    case CompareOp::Eq: return "==";
  }
  return "?";
}

std::string GuardExpr::text() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out << " and ";
    out << terms[i].measurement << " " << to_string(terms[i].op) << " ";
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer),
                                   terms[i].threshold);
    out << std::string_view(buffer, end - buffer);
  }
  return out.str();
}

std::string_view to_string(TimePoint p) {
  return p == TimePoint::Start ? "start" : "finish";
}

bool BehaviorModel::has_event(const std::string& id) const {
  return std::find(events.begin(), events.end(), id) != events.end();
}

const Branch* BehaviorModel::branch_at(const std::string& id) const {
  for (const auto& branch : branches)
    if (branch.at == id) return &branch;
  return nullptr;
}

DynamicModel lift_to_events(const ChangePartition& partition,
                            const std::vector<EventSpec>& specs) {
  DynamicModel dynamic;
  std::set<std::string> used_regions;
  std::set<std::string> used_ids;
  for (const auto& spec : specs) {
    if (!partition.find(spec.region))
      throw AnalysisError("UnknownRegion",
                          "event '" + spec.id + "' names undeclared region '" +
                              spec.region + "'");
    if (!used_regions.insert(spec.region).second)
      throw AnalysisError("DuplicateEventForRegion",
                          "region '" + spec.region +
                              "' is lifted by more than one event");
    if (!used_ids.insert(spec.id).second)
      throw AnalysisError("DuplicateEventForRegion",
                          "event id '" + spec.id + "' declared twice");
    if (spec.duration && spec.duration->micros < 0)
      throw AnalysisError("BadDuration",
                          "event '" + spec.id + "' has negative duration");
    dynamic.events.push_back(spec);
  }
  return dynamic;
}

namespace {

using Edge = std::pair<std::string, std::string>;

std::map<std::string, std::set<std::string>> adjacency(
    const std::vector<std::string>& nodes, const std::vector<Edge>& edges) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& n : nodes) succ[n];
  for (const auto& [a, b] : edges) succ[a].insert(b);
  return succ;
}

bool reaches(const std::map<std::string, std::set<std::string>>& succ,
             const std::string& from, const std::string& to) {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    auto it = succ.find(cur);
    if (it == succ.end()) continue;
    for (const auto& next : it->second) {
      if (next == to) return true;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

void check_acyclic_events(const std::vector<std::string>& nodes,
                          const std::vector<Edge>& edges) {
  auto succ = adjacency(nodes, edges);
  for (const auto& n : nodes) {
    if (reaches(succ, n, n))
      throw AnalysisError("CycleError",
                          "behavior edges contain a cycle through '" + n + "'");
  }
}

}  // namespace

BehaviorModel build_behavior(const DynamicModel& dynamic,
                             const PrecedenceDag& dag,
                             const std::set<std::string>& repeats,
                             const std::vector<Branch>& branches,
                             const std::vector<Edge>& extra_edges) {
  auto mapping = dynamic.region_to_event();
  BehaviorModel behavior;
  for (const auto& event : dynamic.events) behavior.events.push_back(event.id);
  std::sort(behavior.events.begin(), behavior.events.end());

  // Image of the DAG edges under region->event.
  std::vector<Edge> order_edges;
  for (const auto& edge : dag.edges) {
    auto a = mapping.find(edge.before);
    auto b = mapping.find(edge.after);
    if (a == mapping.end())
      throw AnalysisError("UnknownEvent",
                          "region '" + edge.before + "' has no event");
    if (b == mapping.end())
      throw AnalysisError("UnknownEvent",
                          "region '" + edge.after + "' has no event");
    order_edges.push_back({a->second, b->second});
  }
  std::sort(order_edges.begin(), order_edges.end());
  order_edges.erase(std::unique(order_edges.begin(), order_edges.end()),
                    order_edges.end());

  // Transitive reduction: keep (u,v) only when no other path u->v exists.
  std::set<Edge> kept;
  for (const auto& edge : order_edges) {
    std::vector<Edge> without;
    for (const auto& other : order_edges)
      if (other != edge) without.push_back(other);
    auto succ = adjacency(behavior.events, without);
    if (!reaches(succ, edge.first, edge.second)) kept.insert(edge);
  }

  for (const auto& edge : extra_edges) {
    if (!behavior.has_event(edge.first) || !behavior.has_event(edge.second))
      throw AnalysisError("UnknownEvent", "behavior edge '" + edge.first +
                                              " -> " + edge.second +
                                              "' names an unknown event");
    kept.insert(edge);
  }

  for (const auto& event : repeats) {
    if (!behavior.has_event(event))
      throw AnalysisError("UnknownEvent",
                          "repeat marker names unknown event '" + event + "'");
  }
  behavior.repeats = repeats;

  for (const auto& branch : branches) {
    if (!behavior.has_event(branch.at))
      throw AnalysisError("UnknownEvent",
                          "branch at unknown event '" + branch.at + "'");
    for (const auto& arm : branch.arms) {
      if (!behavior.has_event(arm.to))
        throw AnalysisError("UnknownEvent",
                            "branch arm targets unknown event '" + arm.to + "'");
    }
  }
  behavior.branches = branches;

  behavior.edges.assign(kept.begin(), kept.end());
  check_acyclic_events(behavior.events, behavior.edges);
  return behavior;
}

IsomorphismResult check_isomorphism(
    const PrecedenceDag& dag, const BehaviorModel& behavior,
    const std::map<std::string, std::string>& mapping) {
  // Branch arms are control refinements of existing order, not order edges;
  // the comparison runs over B's edge set.
  auto behavior_succ = adjacency(behavior.events, behavior.edges);

  std::map<std::string, std::set<std::string>> dag_succ;
  for (const auto& n : dag.nodes) dag_succ[n];
  for (const auto& e : dag.edges) dag_succ[e.before].insert(e.after);

  for (const auto& a : dag.nodes) {
    for (const auto& b : dag.nodes) {
      if (a == b) continue;
      auto ea = mapping.find(a);
      auto eb = mapping.find(b);
      if (ea == mapping.end() || eb == mapping.end())
        return {false, std::make_pair(a, b)};
      bool change_order = reaches(dag_succ, a, b);
      bool event_order = reaches(behavior_succ, ea->second, eb->second);
      if (change_order != event_order) return {false, std::make_pair(a, b)};
    }
  }
  return {true, std::nullopt};
}

}  // namespace tmkit
