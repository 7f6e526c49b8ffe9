#include "core/kcore.hpp"

#include <algorithm>

#include "core/errors.hpp"

namespace pagelink {

PrunedCore kcore_prune(const Subgraph& graph, std::int32_t k,
                       std::span<const NodeIndex> protected_nodes) {
  if (k < 1) throw InvalidArgumentError("k must be >= 1");

  const std::size_t n = graph.num_nodes();
  std::vector<std::uint32_t> deg(n);
  for (LocalNode v = 0; v < n; ++v) deg[v] = graph.degree(v);
  std::vector<bool> alive(n, true);
  std::vector<bool> is_protected(n, false);
  for (NodeIndex p : protected_nodes) {
    LocalNode v = graph.local_node(p);
    if (v == kInvalidLocal) throw LookupError("protected node not in graph");
    is_protected[v] = true;
  }
  std::vector<bool> edge_alive(graph.num_edges(), true);

  PrunedCore core;
  core.k = k;
  std::vector<LocalNode> victims;
  std::int32_t round = 1;
  while (true) {
    victims.clear();
    for (LocalNode v = 0; v < n; ++v) {
      if (alive[v] && !is_protected[v] && deg[v] < static_cast<std::uint32_t>(k))
        victims.push_back(v);
    }
    if (victims.empty()) break;
    for (LocalNode v : victims) {
      alive[v] = false;
      core.shell.push_back({graph.parent_node(v), round});
    }
    for (LocalNode v : victims) {
      for (const auto& entry : graph.incident(v)) {
        if (!edge_alive[entry.edge]) continue;
        edge_alive[entry.edge] = false;
        if (alive[entry.neighbor]) deg[entry.neighbor]--;
      }
    }
    ++round;
  }

  std::vector<NodeIndex> kept;
  kept.reserve(n);
  for (LocalNode v = 0; v < n; ++v)
    if (alive[v]) kept.push_back(graph.parent_node(v));
  core.sub = graph.induce(kept);
  return core;
}

Subgraph remove_high_degree(const Subgraph& graph, std::uint32_t degree_cap,
                            std::span<const NodeIndex> protected_nodes) {
  if (degree_cap < 1) throw InvalidArgumentError("degree cap must be >= 1");
  std::vector<bool> is_protected(graph.num_nodes(), false);
  for (NodeIndex p : protected_nodes) {
    LocalNode v = graph.local_node(p);
    if (v == kInvalidLocal) throw LookupError("protected node not in graph");
    is_protected[v] = true;
  }
  std::vector<NodeIndex> kept;
  kept.reserve(graph.num_nodes());
  for (LocalNode v = 0; v < graph.num_nodes(); ++v) {
    if (is_protected[v] || graph.degree(v) <= degree_cap) kept.push_back(graph.parent_node(v));
  }
  return graph.induce(kept);
}

}  // namespace pagelink
