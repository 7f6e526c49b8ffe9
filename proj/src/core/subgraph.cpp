#include "core/subgraph.hpp"

#include <algorithm>
#include <deque>

#include "core/errors.hpp"

namespace pagelink {

Subgraph Subgraph::whole(const HeteroGraph& parent) {
  std::vector<NodeIndex> nodes(parent.num_nodes());
  for (NodeIndex v = 0; v < parent.num_nodes(); ++v) nodes[v] = v;
  std::vector<EdgeIndex> edges(parent.num_edges());
  for (EdgeIndex e = 0; e < parent.num_edges(); ++e) edges[e] = e;
  return from_nodes_edges(parent, std::move(nodes), std::move(edges));
}

Subgraph Subgraph::from_nodes(const HeteroGraph& parent, std::vector<NodeIndex> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<bool> keep(parent.num_nodes(), false);
  for (NodeIndex v : nodes) {
    if (v >= parent.num_nodes()) throw LookupError("node index out of range");
    keep[v] = true;
  }
  std::vector<EdgeIndex> edges;
  for (EdgeIndex e = 0; e < parent.num_edges(); ++e) {
    const EdgeRecord& rec = parent.edge(e);
    if (keep[rec.src] && keep[rec.dst]) edges.push_back(e);
  }
  return from_nodes_edges(parent, std::move(nodes), std::move(edges));
}

Subgraph Subgraph::from_nodes_edges(const HeteroGraph& parent, std::vector<NodeIndex> nodes,
                                    std::vector<EdgeIndex> edges) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Subgraph g;
  g.parent_ = &parent;
  g.nodes_ = std::move(nodes);
  g.local_of_.assign(parent.num_nodes(), kInvalidLocal);
  for (LocalNode v = 0; v < g.nodes_.size(); ++v) g.local_of_[g.nodes_[v]] = v;

  g.local_edges_.reserve(edges.size());
  for (EdgeIndex e : edges) {
    if (e >= parent.num_edges()) throw LookupError("edge index out of range");
    const EdgeRecord& rec = parent.edge(e);
    LocalNode s = g.local_of_[rec.src];
    LocalNode d = g.local_of_[rec.dst];
    if (s == kInvalidLocal || d == kInvalidLocal)
      throw InvalidArgumentError("subgraph edge endpoint outside node subset");
    g.local_edges_.push_back({s, d, rec.type, e});
  }

  g.etype_offsets_.assign(parent.num_edge_types() + 1, 0);
  for (const auto& e : g.local_edges_) g.etype_offsets_[e.type + 1]++;
  for (std::size_t t = 0; t < parent.num_edge_types(); ++t)
    g.etype_offsets_[t + 1] += g.etype_offsets_[t];

  g.degree_.assign(g.nodes_.size(), 0);
  for (const auto& e : g.local_edges_) {
    g.degree_[e.src]++;
    g.degree_[e.dst]++;
  }
  g.adj_offsets_.assign(g.nodes_.size() + 1, 0);
  for (std::size_t v = 0; v < g.nodes_.size(); ++v)
    g.adj_offsets_[v + 1] = g.adj_offsets_[v] + g.degree_[v];
  g.adj_.resize(g.local_edges_.size() * 2);
  std::vector<std::uint64_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
  for (LocalEdge e = 0; e < g.local_edges_.size(); ++e) {
    const LocalEdgeRecord& rec = g.local_edges_[e];
    g.adj_[cursor[rec.src]++] = {rec.dst, e, true};
    g.adj_[cursor[rec.dst]++] = {rec.src, e, false};
  }
  for (LocalNode v = 0; v < g.nodes_.size(); ++v) {
    auto begin = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[v]);
    auto end = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[v + 1]);
    std::sort(begin, end, [](const LocalAdjEntry& a, const LocalAdjEntry& b) {
      if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
      return a.edge < b.edge;
    });
  }
  return g;
}

Subgraph Subgraph::induce(std::span<const NodeIndex> parent_nodes) const {
  std::vector<bool> keep(parent_->num_nodes(), false);
  std::vector<NodeIndex> nodes;
  nodes.reserve(parent_nodes.size());
  for (NodeIndex v : parent_nodes) {
    if (local_node(v) == kInvalidLocal)
      throw InvalidArgumentError("induce: node not in subgraph");
    if (!keep[v]) {
      keep[v] = true;
      nodes.push_back(v);
    }
  }
  std::vector<EdgeIndex> edges;
  for (const auto& e : local_edges_) {
    if (keep[nodes_[e.src]] && keep[nodes_[e.dst]]) edges.push_back(e.parent_edge);
  }
  return from_nodes_edges(*parent_, std::move(nodes), std::move(edges));
}

Subgraph Subgraph::without_edges(std::span<const EdgeIndex> parent_edges) const {
  std::vector<bool> drop(parent_->num_edges(), false);
  for (EdgeIndex e : parent_edges) drop[e] = true;
  std::vector<EdgeIndex> edges;
  edges.reserve(local_edges_.size());
  for (const auto& e : local_edges_)
    if (!drop[e.parent_edge]) edges.push_back(e.parent_edge);
  return from_nodes_edges(*parent_, nodes_, std::move(edges));
}

LocalNode Subgraph::local_node(NodeIndex parent) const {
  if (parent >= local_of_.size()) return kInvalidLocal;
  return local_of_[parent];
}

LocalEdge Subgraph::local_edge(EdgeIndex parent) const {
  auto it = std::lower_bound(local_edges_.begin(), local_edges_.end(), parent,
                             [](const LocalEdgeRecord& rec, EdgeIndex e) {
                               return rec.parent_edge < e;
                             });
  if (it == local_edges_.end() || it->parent_edge != parent) return kInvalidLocal;
  return static_cast<LocalEdge>(it - local_edges_.begin());
}

bool Subgraph::contains_parent_edge(EdgeIndex parent) const {
  return local_edge(parent) != kInvalidLocal;
}

std::vector<std::int32_t> Subgraph::bfs_hops(LocalNode source, std::int32_t max_hops) const {
  std::vector<std::int32_t> dist(nodes_.size(), -1);
  std::deque<LocalNode> queue;
  dist[source] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    LocalNode v = queue.front();
    queue.pop_front();
    if (max_hops >= 0 && dist[v] >= max_hops) continue;
    for (const auto& entry : incident(v)) {
      if (dist[entry.neighbor] < 0) {
        dist[entry.neighbor] = dist[v] + 1;
        queue.push_back(entry.neighbor);
      }
    }
  }
  return dist;
}

ComputationGraph extract_computation_graph(const Subgraph& base, NodeIndex source,
                                           NodeIndex target, std::int32_t hops) {
  if (source == target) throw InvalidArgumentError("source and target must differ");
  if (hops < 1) throw InvalidArgumentError("hop count must be >= 1");
  LocalNode s = base.local_node(source);
  LocalNode t = base.local_node(target);
  if (s == kInvalidLocal) throw LookupError("source node not in graph");
  if (t == kInvalidLocal) throw LookupError("target node not in graph");

  auto from_s = base.bfs_hops(s, hops);
  auto from_t = base.bfs_hops(t, hops);
  std::vector<NodeIndex> nodes;
  for (LocalNode v = 0; v < base.num_nodes(); ++v) {
    if (from_s[v] >= 0 || from_t[v] >= 0) nodes.push_back(base.parent_node(v));
  }

  ComputationGraph cg;
  cg.sub = base.induce(nodes);
  cg.source_parent = source;
  cg.target_parent = target;
  cg.source = cg.sub.local_node(source);
  cg.target = cg.sub.local_node(target);
  cg.hops = hops;
  return cg;
}

ComputationGraph extract_computation_graph(const HeteroGraph& graph, NodeIndex source,
                                           NodeIndex target, std::int32_t hops) {
  return extract_computation_graph(Subgraph::whole(graph), source, target, hops);
}

}  // namespace pagelink
