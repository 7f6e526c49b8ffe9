#pragma once

#include <span>
#include <vector>

#include "core/subgraph.hpp"

namespace pagelink {

struct ShellRecord {
  NodeIndex node = kInvalidNode;  // parent node id
  std::int32_t round = 0;         // peeling round in which the node fell
};

struct PrunedCore {
  Subgraph sub;
  std::int32_t k = 0;
  NodeIndex source_parent = kInvalidNode;  // protected endpoints, when any
  NodeIndex target_parent = kInvalidNode;
  std::vector<ShellRecord> shell;
};

// Iteratively removes non-protected nodes whose degree within the shrinking
// subgraph is < k, until fixpoint. Protected nodes are never removed but keep
// counting toward their neighbors' degrees. Runs in O(|E|).
PrunedCore kcore_prune(const Subgraph& graph, std::int32_t k,
                       std::span<const NodeIndex> protected_nodes);

inline PrunedCore kcore_prune(const ComputationGraph& cg, std::int32_t k) {
  const NodeIndex endpoints[2] = {cg.source_parent, cg.target_parent};
  PrunedCore core = kcore_prune(cg.sub, k, endpoints);
  core.source_parent = cg.source_parent;
  core.target_parent = cg.target_parent;
  return core;
}

// Removes every non-protected node whose degree in `graph` exceeds
// degree_cap, together with its incident edges.
Subgraph remove_high_degree(const Subgraph& graph, std::uint32_t degree_cap,
                            std::span<const NodeIndex> protected_nodes);

}  // namespace pagelink
