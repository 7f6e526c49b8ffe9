#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/graph.hpp"

namespace pagelink {

using LocalNode = std::uint32_t;
using LocalEdge = std::uint32_t;

inline constexpr LocalNode kInvalidLocal = static_cast<LocalNode>(-1);

struct LocalAdjEntry {
  LocalNode neighbor = 0;
  LocalEdge edge = 0;
  bool outgoing = false;
};

struct LocalEdgeRecord {
  LocalNode src = 0;
  LocalNode dst = 0;
  TypeId type = 0;
  EdgeIndex parent_edge = 0;
};

// A node/edge subset of a HeteroGraph with its own dense indexing and
// skeleton adjacency. Node and edge order follow the parent indices, so the
// layout is canonical and edges stay grouped by type. Immutable once built.
class Subgraph {
 public:
  static Subgraph whole(const HeteroGraph& parent);
  static Subgraph from_nodes(const HeteroGraph& parent, std::vector<NodeIndex> nodes);
  static Subgraph from_nodes_edges(const HeteroGraph& parent, std::vector<NodeIndex> nodes,
                                   std::vector<EdgeIndex> edges);

  // Subgraph of this subgraph induced by parent node ids: keeps edges of
  // *this* subgraph whose endpoints both survive.
  Subgraph induce(std::span<const NodeIndex> parent_nodes) const;
  // Same node set, minus the given parent edges.
  Subgraph without_edges(std::span<const EdgeIndex> parent_edges) const;

  const HeteroGraph& parent() const { return *parent_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return local_edges_.size(); }

  NodeIndex parent_node(LocalNode v) const { return nodes_[v]; }
  const std::vector<NodeIndex>& parent_nodes() const { return nodes_; }
  LocalNode local_node(NodeIndex parent) const;  // kInvalidLocal when absent
  bool contains_node(NodeIndex parent) const { return local_node(parent) != kInvalidLocal; }
  bool contains_parent_edge(EdgeIndex parent) const;

  const LocalEdgeRecord& edge(LocalEdge e) const { return local_edges_[e]; }
  const std::vector<LocalEdgeRecord>& edges() const { return local_edges_; }
  LocalEdge local_edge(EdgeIndex parent) const;  // kInvalidLocal when absent

  // Local edges of one type occupy a contiguous range.
  std::pair<LocalEdge, LocalEdge> edge_range(TypeId edge_type) const {
    return {etype_offsets_[edge_type], etype_offsets_[edge_type + 1]};
  }
  const std::vector<LocalEdge>& edge_type_offsets() const { return etype_offsets_; }

  std::uint32_t degree(LocalNode v) const { return degree_[v]; }
  std::span<const LocalAdjEntry> incident(LocalNode v) const {
    return {adj_.data() + adj_offsets_[v], adj_offsets_[v + 1] - adj_offsets_[v]};
  }

  // BFS hop distances on the undirected skeleton; -1 for unreachable.
  // max_hops < 0 means unbounded.
  std::vector<std::int32_t> bfs_hops(LocalNode source, std::int32_t max_hops = -1) const;

 private:
  const HeteroGraph* parent_ = nullptr;
  std::vector<NodeIndex> nodes_;             // sorted parent node ids
  std::vector<LocalEdgeRecord> local_edges_;  // sorted by parent edge id
  std::vector<LocalEdge> etype_offsets_;
  std::vector<std::uint64_t> adj_offsets_;
  std::vector<LocalAdjEntry> adj_;
  std::vector<std::uint32_t> degree_;
  std::vector<LocalNode> local_of_;          // parent node id -> local (dense)
};

struct ComputationGraph {
  Subgraph sub;
  NodeIndex source_parent = kInvalidNode;
  NodeIndex target_parent = kInvalidNode;
  LocalNode source = 0;
  LocalNode target = 0;
  std::int32_t hops = 0;
};

// L-hop ego-graph of (s, t): nodes within `hops` of either endpoint on the
// undirected skeleton, with the edge set induced from `base`.
ComputationGraph extract_computation_graph(const Subgraph& base, NodeIndex source,
                                           NodeIndex target, std::int32_t hops);
ComputationGraph extract_computation_graph(const HeteroGraph& graph, NodeIndex source,
                                           NodeIndex target, std::int32_t hops);

}  // namespace pagelink
