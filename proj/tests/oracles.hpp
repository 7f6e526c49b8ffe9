#pragma once

// Test-only reference implementations, deliberately brute-force and kept
// independent of the library's algorithm paths.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "core/explainer.hpp"
#include "core/graph.hpp"
#include "core/subgraph.hpp"

namespace pagelink::oracle {

// Maximal node subset containing `protected_nodes` whose non-protected
// members all have induced degree >= k: union of all feasible subsets,
// found by checking every subset. Only for tiny graphs.
inline std::vector<NodeIndex> brute_force_core(const Subgraph& g, std::int32_t k,
                                               const std::vector<NodeIndex>& protected_nodes) {
  const std::size_t n = g.num_nodes();
  std::vector<bool> is_protected(n, false);
  for (NodeIndex p : protected_nodes) is_protected[g.local_node(p)] = true;

  std::set<NodeIndex> best;
  for (NodeIndex p : protected_nodes) best.insert(p);
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    bool has_protected = true;
    for (LocalNode v = 0; v < n; ++v)
      if (is_protected[v] && !(bits & (1ull << v))) has_protected = false;
    if (!has_protected) continue;
    bool feasible = true;
    for (LocalNode v = 0; v < n && feasible; ++v) {
      if (!(bits & (1ull << v)) || is_protected[v]) continue;
      std::int32_t deg = 0;
      for (const auto& entry : g.incident(v))
        if (bits & (1ull << entry.neighbor)) ++deg;
      feasible = deg >= k;
    }
    if (!feasible) continue;
    for (LocalNode v = 0; v < n; ++v)
      if (bits & (1ull << v)) best.insert(g.parent_node(v));
  }
  return {best.begin(), best.end()};
}

// Every simple s-t path with at most l_max hops, by DFS.
struct EnumeratedPath {
  std::vector<LocalNode> nodes;
  std::vector<LocalEdge> edges;
  double dist = 0.0;
};

inline void enumerate_paths_rec(const Subgraph& g, LocalNode v, LocalNode t, std::int32_t l_max,
                                std::vector<LocalNode>& nodes, std::vector<LocalEdge>& edges,
                                std::vector<bool>& visited,
                                std::vector<EnumeratedPath>& out) {
  if (v == t) {
    out.push_back({nodes, edges, 0.0});
    return;
  }
  if (static_cast<std::int32_t>(edges.size()) >= l_max) return;
  for (const auto& entry : g.incident(v)) {
    if (visited[entry.neighbor]) continue;
    visited[entry.neighbor] = true;
    nodes.push_back(entry.neighbor);
    edges.push_back(entry.edge);
    enumerate_paths_rec(g, entry.neighbor, t, l_max, nodes, edges, visited, out);
    edges.pop_back();
    nodes.pop_back();
    visited[entry.neighbor] = false;
  }
}

// All simple s-t paths within l_max hops, each scored by the left-to-right
// sum of -Score(e) distances, sorted by the project-wide path order.
inline std::vector<EnumeratedPath> enumerate_paths(const Subgraph& g, const EdgeMaskSet& mask,
                                                   LocalNode s, LocalNode t, std::int32_t l_max,
                                                   bool degree_from_core = true) {
  std::vector<EnumeratedPath> out;
  std::vector<LocalNode> nodes{s};
  std::vector<LocalEdge> edges;
  std::vector<bool> visited(g.num_nodes(), false);
  visited[s] = true;
  enumerate_paths_rec(g, s, t, l_max, nodes, edges, visited, out);
  for (auto& path : out) {
    double dist = 0;
    for (std::size_t i = 0; i < path.edges.size(); ++i) {
      const LocalNode into = path.nodes[i + 1];
      const std::uint32_t deg = degree_from_core
                                    ? g.degree(into)
                                    : g.parent().degree(g.parent_node(into));
      dist += -edge_score(mask.logits[path.edges[i]], deg);
    }
    path.dist = dist;
  }
  std::sort(out.begin(), out.end(), [](const EnumeratedPath& a, const EnumeratedPath& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return a.edges < b.edges;
  });
  return out;
}

// BFS distances on the undirected skeleton, fresh implementation.
inline std::vector<std::int32_t> bfs_oracle(const Subgraph& g, LocalNode src) {
  std::vector<std::int32_t> dist(g.num_nodes(), -1);
  std::vector<LocalNode> frontier{src};
  dist[src] = 0;
  while (!frontier.empty()) {
    std::vector<LocalNode> next;
    for (LocalNode v : frontier) {
      for (const auto& entry : g.incident(v)) {
        if (dist[entry.neighbor] < 0) {
          dist[entry.neighbor] = dist[v] + 1;
          next.push_back(entry.neighbor);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

}  // namespace pagelink::oracle
