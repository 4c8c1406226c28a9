// Independent oracles, deliberately naive. Each one predates and
// cross-checks the corresponding production algorithm; keep them dumb.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tmkit/change.hpp"
#include "tmkit/model.hpp"

namespace oracle {

using Edge = std::pair<std::string, std::string>;

// Every linear extension, by filtering all permutations of the nodes.
// Output is lexicographic because next_permutation enumerates that way.
inline std::vector<std::vector<std::string>> linear_extensions(
    std::vector<std::string> nodes, const std::vector<Edge>& edges) {
  std::sort(nodes.begin(), nodes.end());
  std::vector<std::vector<std::string>> out;
  if (nodes.empty()) {
    out.push_back({});
    return out;
  }
  do {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
    bool ok = true;
    for (const auto& [before, after] : edges)
      if (pos.at(before) >= pos.at(after)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(nodes);
  } while (std::next_permutation(nodes.begin(), nodes.end()));
  return out;
}

// Reachability closure by Floyd-Warshall over an id-indexed matrix.
inline std::set<Edge> reachability(const std::vector<std::string>& nodes,
                                   const std::vector<Edge>& edges) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
  std::size_t n = nodes.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [from, to] : edges) reach[index.at(from)][index.at(to)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::set<Edge> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) out.insert({nodes[i], nodes[j]});
  return out;
}

// Run-length encoding collapse, written without reuse of the production code.
inline std::vector<std::string> rle_collapse(
    const std::vector<std::string>& seq) {
  std::vector<std::string> out;
  for (const auto& item : seq)
    if (out.empty() || out.back() != item) out.push_back(item);
  return out;
}

// The flow legality table, frozen as data. 5 same-thimac rows and the two
// cross-thimac pairs; everything else is illegal. Any drift between this
// table and the production predicate is a bug in one of them.
inline bool legality_table(tmkit::StageKind from, tmkit::StageKind to,
                           bool same_thimac) {
  using K = tmkit::StageKind;
  struct Row {
    K from;
    K to;
    bool same;
  };
  static const std::vector<Row> kLegal = {
      {K::Create, K::Process, true},   {K::Create, K::Release, true},
      {K::Receive, K::Process, true},  {K::Receive, K::Release, true},
      {K::Process, K::Create, true},   {K::Process, K::Release, true},
      {K::Release, K::Transfer, true}, {K::Transfer, K::Transfer, false},
      {K::Transfer, K::Receive, false},
  };
  for (const auto& row : kLegal)
    if (row.from == from && row.to == to && row.same == same_thimac)
      return true;
  return false;
}

// Random DAG over n nodes: edges only from lower to higher rank, with the
// node labels shuffled so lexicographic order carries no information.
inline tmkit::PrecedenceDag random_dag(std::mt19937& rng, std::size_t n,
                                       double edge_probability = 0.35) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("C" + std::to_string(i + 1));
  std::vector<std::string> rank = labels;
  std::shuffle(rank.begin(), rank.end(), rng);

  tmkit::PrecedenceDag dag;
  dag.nodes = labels;
  std::sort(dag.nodes.begin(), dag.nodes.end());
  std::bernoulli_distribution flip(edge_probability);
  std::bernoulli_distribution trigger(0.25);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (flip(rng))
        dag.edges.push_back({rank[i], rank[j],
                             trigger(rng) ? tmkit::EdgeCause::Trigger
                                          : tmkit::EdgeCause::Flow});
  std::sort(dag.edges.begin(), dag.edges.end());
  return dag;
}

inline std::vector<Edge> plain_edges(const tmkit::PrecedenceDag& dag) {
  std::vector<Edge> out;
  for (const auto& edge : dag.edges) out.push_back({edge.before, edge.after});
  return out;
}

}  // namespace oracle
