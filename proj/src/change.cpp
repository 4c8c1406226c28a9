#include "tmkit/change.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace tmkit {

const Region* ChangePartition::find(const std::string& id) const {
  for (const auto& region : regions) {
    if (region.id == id) return &region;
  }
  return nullptr;
}

bool PrecedenceDag::has_node(const std::string& id) const {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

std::string_view to_string(OrderClass c) {
  switch (c) {
    case OrderClass::Before: return "before";
    case OrderClass::After: return "after";
    case OrderClass::Unordered: return "unordered";
  }
  return "?";
}

namespace {

void check_partition(const StaticModel& model, const ChangePartition& partition) {
  std::map<StageId, std::string> owner_region;
  std::set<std::string> ids;
  for (const auto& region : partition.regions) {
    if (!ids.insert(region.id).second)
      throw AnalysisError("DuplicateRegion",
                          "region '" + region.id + "' declared twice");
    if (region.stages.empty())
      throw AnalysisError("EmptyRegion", "region '" + region.id + "' is empty");
    for (const auto& stage : region.stages) {
      if (!model.find_stage(stage))
        throw AnalysisError("UnknownReference",
                            "region '" + region.id +
                                "' names undeclared stage '" + stage + "'");
      auto [it, inserted] = owner_region.emplace(stage, region.id);
      if (!inserted)
        throw AnalysisError("RegionOverlap",
                            "stage '" + stage + "' is in regions '" +
                                it->second + "' and '" + region.id + "'");
    }
    // Weak connectivity of the region over its own flow edges.
    std::set<StageId> seen{*region.stages.begin()};
    std::deque<StageId> queue{*region.stages.begin()};
    while (!queue.empty()) {
      StageId cur = queue.front();
      queue.pop_front();
      for (const auto& edge : model.flows) {
        StageId next;
        if (edge.from == cur && region.stages.count(edge.to)) next = edge.to;
        else if (edge.to == cur && region.stages.count(edge.from)) next = edge.from;
        else continue;
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
    if (seen.size() != region.stages.size())
      throw AnalysisError("RegionDisconnected",
                          "region '" + region.id +
                              "' is not flow-connected");
  }
}

std::map<std::string, std::set<std::string>> successors(
    const PrecedenceDag& dag) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& node : dag.nodes) succ[node];
  for (const auto& edge : dag.edges) succ[edge.before].insert(edge.after);
  return succ;
}

bool reachable(const std::map<std::string, std::set<std::string>>& succ,
               const std::string& from, const std::string& to) {
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& next : succ.at(cur)) {
      if (next == to) return true;
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return false;
}

void check_acyclic(const PrecedenceDag& dag) {
  auto succ = successors(dag);
  // Iterative DFS with coloring; report the offending cycle.
  std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
  for (const auto& start : dag.nodes) {
    if (color[start]) continue;
    std::vector<std::pair<std::string, bool>> stack{{start, false}};
    std::vector<std::string> path;
    while (!stack.empty()) {
      auto [node, leaving] = stack.back();
      stack.pop_back();
      if (leaving) {
        color[node] = 2;
        path.pop_back();
        continue;
      }
      if (color[node] == 1) continue;
      color[node] = 1;
      path.push_back(node);
      stack.push_back({node, true});
      for (auto it = succ[node].rbegin(); it != succ[node].rend(); ++it) {
        if (color[*it] == 1) {
          auto begin = std::find(path.begin(), path.end(), *it);
          std::string cycle;
          for (auto p = begin; p != path.end(); ++p) cycle += *p + " -> ";
          throw AnalysisError("CycleError",
                              "precedence cycle: " + cycle + *it);
        }
        if (color[*it] == 0) stack.push_back({*it, false});
      }
    }
  }
}

}  // namespace

PrecedenceDag derive_precedence(const StaticModel& model,
                                const ChangePartition& partition,
                                const PrecedenceOptions& options) {
  check_partition(model, partition);

  std::map<StageId, std::string> region_of;
  for (const auto& region : partition.regions)
    for (const auto& stage : region.stages) region_of[stage] = region.id;

  PrecedenceDag dag;
  for (const auto& region : partition.regions) dag.nodes.push_back(region.id);
  std::sort(dag.nodes.begin(), dag.nodes.end());

  std::set<PrecedenceEdge> edges;
  auto record = [&](const StageId& from, const StageId& to, EdgeCause cause) {
    auto a = region_of.find(from);
    auto b = region_of.find(to);
    if (a == region_of.end() || b == region_of.end()) return;  // context stage
    if (a->second == b->second) return;
    edges.insert({a->second, b->second, cause});
  };
  for (const auto& edge : model.flows) record(edge.from, edge.to, EdgeCause::Flow);
  for (const auto& edge : model.triggers)
    record(edge.from, edge.to, EdgeCause::Trigger);
  dag.edges.assign(edges.begin(), edges.end());

  check_acyclic(dag);

  if (!options.allow_multi_component && dag.nodes.size() > 1) {
    std::map<std::string, std::string> parent;
    for (const auto& n : dag.nodes) parent[n] = n;
    auto find = [&](std::string x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : dag.edges) parent[find(e.before)] = find(e.after);
    std::set<std::string> components;
    for (const auto& n : dag.nodes) components.insert(find(n));
    if (components.size() > 1)
      throw AnalysisError(
          "MultiComponentError",
          "precedence graph has " + std::to_string(components.size()) +
              " components; pass the multi-component override to proceed");
  }
  return dag;
}

OrderClass classify_pair(const PrecedenceDag& dag, const std::string& a,
                         const std::string& b) {
  if (!dag.has_node(a))
    throw AnalysisError("UnknownRegion", "unknown region '" + a + "'");
  if (!dag.has_node(b))
    throw AnalysisError("UnknownRegion", "unknown region '" + b + "'");
  if (a == b) return OrderClass::Unordered;
  auto succ = successors(dag);
  if (reachable(succ, a, b)) return OrderClass::Before;
  if (reachable(succ, b, a)) return OrderClass::After;
  return OrderClass::Unordered;
}

namespace {

void enumerate_rec(const std::vector<std::string>& nodes,
                   const std::vector<std::vector<std::size_t>>& preds,
                   std::vector<bool>& placed, std::vector<std::string>& prefix,
                   std::size_t limit,
                   std::vector<std::vector<std::string>>& out) {
  if (prefix.size() == nodes.size()) {
    if (out.size() < limit) out.push_back(prefix);
    return;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {  // nodes sorted: lex order
    if (placed[i]) continue;
    bool ready = std::all_of(preds[i].begin(), preds[i].end(),
                             [&](std::size_t p) { return placed[p]; });
    if (!ready) continue;
    placed[i] = true;
    prefix.push_back(nodes[i]);
    enumerate_rec(nodes, preds, placed, prefix, limit, out);
    prefix.pop_back();
    placed[i] = false;
    if (out.size() >= limit) return;
  }
}

}  // namespace

ChronologyResult enumerate_chronologies(const PrecedenceDag& dag,
                                        std::size_t limit) {
  if (limit == 0) throw AnalysisError("BadLimit", "limit must be positive");
  check_acyclic(dag);
  if (dag.nodes.size() > 20)
    throw AnalysisError("TooLarge",
                        "exact chronology counting is capped at 20 nodes");

  std::vector<std::string> nodes = dag.nodes;
  std::sort(nodes.begin(), nodes.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  std::vector<std::vector<std::size_t>> preds(nodes.size());
  for (const auto& edge : dag.edges)
    preds[index.at(edge.after)].push_back(index.at(edge.before));

  ChronologyResult result;
  if (nodes.empty()) {
    result.total = 1;
    result.sequences.push_back({});
    return result;
  }

  std::vector<bool> placed(nodes.size(), false);
  std::vector<std::string> prefix;
  enumerate_rec(nodes, preds, placed, prefix, limit, result.sequences);

  // Exact count by DP over placed-node subsets.
  std::vector<std::uint32_t> pred_mask(nodes.size(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t p : preds[i]) pred_mask[i] |= 1u << p;
  std::vector<std::uint64_t> count(std::size_t{1} << nodes.size(), 0);
  count[0] = 1;
  for (std::size_t mask = 0; mask < count.size(); ++mask) {
    if (!count[mask]) continue;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (mask & (1u << i)) continue;
      if ((pred_mask[i] & mask) != pred_mask[i]) continue;
      count[mask | (1u << i)] += count[mask];
    }
  }
  result.total = count.back();
  return result;
}

std::vector<std::string> normalize_consecutive(
    const std::vector<std::string>& seq) {
  std::vector<std::string> out;
  for (const auto& id : seq) {
    if (out.empty() || out.back() != id) out.push_back(id);
  }
  return out;
}

}  // namespace tmkit
