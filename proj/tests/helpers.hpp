#pragma once

#include <string>
#include <vector>

#include "core/graph.hpp"

namespace pagelink::testing {

// Single-type graph from an edge list over integer node ids.
inline HeteroGraph simple_graph(std::vector<std::pair<int, int>> edge_list, int num_nodes = -1) {
  int max_id = -1;
  for (const auto& [a, b] : edge_list) max_id = std::max({max_id, a, b});
  if (num_nodes < 0) num_nodes = max_id + 1;
  std::vector<NodeSpec> nodes;
  for (int v = 0; v < num_nodes; ++v) nodes.push_back({"n", v});
  std::vector<EdgeSpec> edges;
  for (const auto& [a, b] : edge_list) edges.push_back({{"n", a}, "e", {"n", b}});
  return HeteroGraph::build(nodes, edges);
}

// The two-user / three-item / one-shared-attribute toy: u1 buys i2 and i3,
// u2 buys i3 and i1, i1 and i2 share attribute a1. Used across tests as a
// small heterogeneous fixture with two natural u1-i1 connecting paths.
inline HeteroGraph toy_recommendation_graph() {
  std::vector<NodeSpec> nodes = {
      {"user", 1}, {"user", 2}, {"item", 1}, {"item", 2}, {"item", 3}, {"attr", 1},
  };
  std::vector<EdgeSpec> edges = {
      {{"user", 1}, "buys", {"item", 2}}, {{"user", 1}, "buys", {"item", 3}},
      {{"user", 2}, "buys", {"item", 3}}, {{"user", 2}, "buys", {"item", 1}},
      {{"item", 1}, "has", {"attr", 1}},  {{"item", 2}, "has", {"attr", 1}},
  };
  return HeteroGraph::build(nodes, edges);
}

}  // namespace pagelink::testing
