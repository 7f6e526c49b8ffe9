#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pagelink {

using NodeIndex = std::uint32_t;  // dense index into HeteroGraph::nodes()
using EdgeIndex = std::uint32_t;  // dense index into HeteroGraph::edges()
using TypeId = std::uint32_t;

inline constexpr NodeIndex kInvalidNode = static_cast<NodeIndex>(-1);

// External node name: a type name plus an integer id unique within the type.
struct NodeSpec {
  std::string type;
  std::int64_t id = 0;
};

struct EdgeSpec {
  NodeSpec src;
  std::string edge_type;
  NodeSpec dst;
};

struct NodeRecord {
  TypeId type = 0;
  std::int64_t id = 0;
};

struct EdgeRecord {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  TypeId type = 0;
};

// One incident-edge entry of the undirected skeleton adjacency.
struct AdjEntry {
  NodeIndex neighbor = 0;
  EdgeIndex edge = 0;
  bool outgoing = false;  // true when this node is the stored src of the edge
};

// Immutable typed directed multigraph. Nodes are stored sorted by
// (type, id) and edges sorted by (edge type, src, dst), so indices are a
// canonical function of the content regardless of input order. Exact
// duplicate edges (same endpoints and type) are collapsed at build time.
// Degrees, paths and cores all use the undirected skeleton.
class HeteroGraph {
 public:
  // With complete_nodes=true the node list is authoritative and an edge
  // endpoint outside it is a ConstructionError; with false, endpoints are
  // materialized as nodes (TSV ingestion, where the nodes file only has to
  // declare isolated nodes).
  static HeteroGraph build(std::span<const NodeSpec> nodes,
                           std::span<const EdgeSpec> edges,
                           bool complete_nodes = true,
                           std::span<const std::string> node_type_vocab = {},
                           std::span<const std::string> edge_type_vocab = {},
                           std::size_t* duplicate_count = nullptr);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_node_types() const { return node_types_.size(); }
  std::size_t num_edge_types() const { return edge_types_.size(); }

  const std::vector<std::string>& node_types() const { return node_types_; }
  const std::vector<std::string>& edge_types() const { return edge_types_; }
  const std::string& node_type_name(TypeId t) const { return node_types_[t]; }
  const std::string& edge_type_name(TypeId t) const { return edge_types_[t]; }

  const NodeRecord& node(NodeIndex v) const { return nodes_[v]; }
  const EdgeRecord& edge(EdgeIndex e) const { return edges_[e]; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }

  // Edges of one type occupy a contiguous index range.
  std::pair<EdgeIndex, EdgeIndex> edge_range(TypeId edge_type) const {
    return {etype_offsets_[edge_type], etype_offsets_[edge_type + 1]};
  }

  // Throws LookupError when the name is unknown.
  TypeId node_type_id(std::string_view name) const;
  TypeId edge_type_id(std::string_view name) const;
  bool has_edge_type(std::string_view name) const;

  NodeIndex find_node(std::string_view type, std::int64_t id) const;  // kInvalidNode when absent
  NodeIndex node_index(std::string_view type, std::int64_t id) const;  // throws LookupError
  NodeIndex node_index(const NodeSpec& spec) const { return node_index(spec.type, spec.id); }

  std::uint32_t degree(NodeIndex v) const;
  std::span<const AdjEntry> incident(NodeIndex v) const {
    return {adj_.data() + adj_offsets_[v], adj_offsets_[v + 1] - adj_offsets_[v]};
  }

  // Nodes of one type occupy a contiguous node-index range.
  std::pair<NodeIndex, NodeIndex> node_range(TypeId node_type) const {
    return {ntype_offsets_[node_type], ntype_offsets_[node_type + 1]};
  }

  // "type:id" label used in files and logs.
  std::string node_label(NodeIndex v) const;
  // Parses "type:id"; throws ParseError / LookupError.
  NodeIndex parse_node_label(std::string_view label) const;

  // FNV-1a over node- and edge-type vocabularies in declared order.
  std::uint64_t schema_hash() const;
  // FNV-1a over the canonical node and edge lists.
  std::uint64_t content_hash() const;

  void write_tsv(std::ostream& edges_out, std::ostream& nodes_out,
                 std::string_view header_comment = {}) const;
  void save_tsv(const std::string& edges_path, const std::string& nodes_path,
                std::string_view header_comment = {}) const;

  static HeteroGraph read_tsv(std::istream& edges_in, std::istream* nodes_in);
  static HeteroGraph load_tsv(const std::string& edges_path,
                              const std::string& nodes_path = {});

 private:
  std::vector<std::string> node_types_;
  std::vector<std::string> edge_types_;
  std::unordered_map<std::string, TypeId> node_type_ids_;
  std::unordered_map<std::string, TypeId> edge_type_ids_;

  std::vector<NodeRecord> nodes_;      // sorted by (type, id)
  std::vector<NodeIndex> ntype_offsets_;
  std::vector<EdgeRecord> edges_;      // sorted by (type, src, dst)
  std::vector<EdgeIndex> etype_offsets_;

  std::vector<std::uint64_t> adj_offsets_;
  std::vector<AdjEntry> adj_;
  std::vector<std::uint32_t> degree_;

  std::vector<std::unordered_map<std::int64_t, NodeIndex>> node_lookup_;  // per type
};

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a_u64(std::uint64_t value, std::uint64_t seed);

}  // namespace pagelink
