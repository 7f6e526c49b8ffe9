#include "core/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "core/errors.hpp"

namespace pagelink {

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a_u64(std::uint64_t value, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

TypeId intern(std::vector<std::string>& names,
              std::unordered_map<std::string, TypeId>& ids,
              const std::string& name) {
  auto it = ids.find(name);
  if (it != ids.end()) return it->second;
  TypeId t = static_cast<TypeId>(names.size());
  names.push_back(name);
  ids.emplace(name, t);
  return t;
}

}  // namespace

HeteroGraph HeteroGraph::build(std::span<const NodeSpec> nodes,
                               std::span<const EdgeSpec> edges,
                               bool complete_nodes,
                               std::span<const std::string> node_type_vocab,
                               std::span<const std::string> edge_type_vocab,
                               std::size_t* duplicate_count) {
  HeteroGraph g;
  for (const auto& name : node_type_vocab) intern(g.node_types_, g.node_type_ids_, name);
  for (const auto& name : edge_type_vocab) intern(g.edge_types_, g.edge_type_ids_, name);

  const bool closed_node_vocab = !node_type_vocab.empty();
  const bool closed_edge_vocab = !edge_type_vocab.empty();
  auto node_type_of = [&](const std::string& name) -> TypeId {
    if (closed_node_vocab) {
      auto it = g.node_type_ids_.find(name);
      if (it == g.node_type_ids_.end())
        throw ConstructionError("node type outside declared vocabulary: " + name);
      return it->second;
    }
    return intern(g.node_types_, g.node_type_ids_, name);
  };

  // Collect declared nodes plus every edge endpoint; duplicates within the
  // declared list are an error, endpoint repeats are expected.
  struct RawNode {
    TypeId type;
    std::int64_t id;
    bool declared;
  };
  std::vector<RawNode> raw;
  raw.reserve(nodes.size() + 2 * edges.size());
  for (const auto& n : nodes) raw.push_back({node_type_of(n.type), n.id, true});
  struct RawEdge {
    TypeId type;
    TypeId src_type;
    std::int64_t src_id;
    TypeId dst_type;
    std::int64_t dst_id;
  };
  std::vector<RawEdge> raw_edges;
  raw_edges.reserve(edges.size());
  for (const auto& e : edges) {
    TypeId et;
    if (closed_edge_vocab) {
      auto it = g.edge_type_ids_.find(e.edge_type);
      if (it == g.edge_type_ids_.end())
        throw ConstructionError("edge type outside declared vocabulary: " + e.edge_type);
      et = it->second;
    } else {
      et = intern(g.edge_types_, g.edge_type_ids_, e.edge_type);
    }
    TypeId st = node_type_of(e.src.type);
    TypeId dt = node_type_of(e.dst.type);
    if (!complete_nodes) {
      raw.push_back({st, e.src.id, false});
      raw.push_back({dt, e.dst.id, false});
    }
    raw_edges.push_back({et, st, e.src.id, dt, e.dst.id});
  }

  std::sort(raw.begin(), raw.end(), [](const RawNode& a, const RawNode& b) {
    if (a.type != b.type) return a.type < b.type;
    if (a.id != b.id) return a.id < b.id;
    return a.declared > b.declared;
  });
  g.node_lookup_.resize(g.node_types_.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawNode& n = raw[i];
    if (!g.nodes_.empty() && g.nodes_.back().type == n.type && g.nodes_.back().id == n.id) {
      if (n.declared && raw[i - 1].declared && raw[i - 1].type == n.type && raw[i - 1].id == n.id)
        throw ConstructionError("duplicate node id " + g.node_types_[n.type] + ":" +
                                std::to_string(n.id));
      continue;
    }
    NodeIndex idx = static_cast<NodeIndex>(g.nodes_.size());
    g.nodes_.push_back({n.type, n.id});
    g.node_lookup_[n.type].emplace(n.id, idx);
  }

  g.ntype_offsets_.assign(g.node_types_.size() + 1, 0);
  for (const auto& n : g.nodes_) g.ntype_offsets_[n.type + 1]++;
  for (std::size_t t = 0; t < g.node_types_.size(); ++t)
    g.ntype_offsets_[t + 1] += g.ntype_offsets_[t];

  std::vector<EdgeRecord> recs;
  recs.reserve(raw_edges.size());
  for (const auto& e : raw_edges) {
    auto s_it = g.node_lookup_[e.src_type].find(e.src_id);
    if (s_it == g.node_lookup_[e.src_type].end())
      throw ConstructionError("dangling edge endpoint " + g.node_types_[e.src_type] + ":" +
                              std::to_string(e.src_id));
    auto d_it = g.node_lookup_[e.dst_type].find(e.dst_id);
    if (d_it == g.node_lookup_[e.dst_type].end())
      throw ConstructionError("dangling edge endpoint " + g.node_types_[e.dst_type] + ":" +
                              std::to_string(e.dst_id));
    if (s_it->second == d_it->second)
      throw ConstructionError("self-loop on " + g.node_types_[e.src_type] + ":" +
                              std::to_string(e.src_id));
    recs.push_back({s_it->second, d_it->second, e.type});
  }
  std::sort(recs.begin(), recs.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    if (a.type != b.type) return a.type < b.type;
    if (a.src != b.src) return a.src < b.src;
    return a.dst < b.dst;
  });
  std::size_t dups = 0;
  for (const auto& e : recs) {
    if (!g.edges_.empty()) {
      const EdgeRecord& last = g.edges_.back();
      if (last.type == e.type && last.src == e.src && last.dst == e.dst) {
        ++dups;
        continue;
      }
    }
    g.edges_.push_back(e);
  }
  if (duplicate_count) *duplicate_count = dups;

  g.etype_offsets_.assign(g.edge_types_.size() + 1, 0);
  for (const auto& e : g.edges_) g.etype_offsets_[e.type + 1]++;
  for (std::size_t t = 0; t < g.edge_types_.size(); ++t)
    g.etype_offsets_[t + 1] += g.etype_offsets_[t];

  g.degree_.assign(g.nodes_.size(), 0);
  for (const auto& e : g.edges_) {
    g.degree_[e.src]++;
    g.degree_[e.dst]++;
  }
  g.adj_offsets_.assign(g.nodes_.size() + 1, 0);
  for (std::size_t v = 0; v < g.nodes_.size(); ++v)
    g.adj_offsets_[v + 1] = g.adj_offsets_[v] + g.degree_[v];
  g.adj_.resize(g.edges_.size() * 2);
  std::vector<std::uint64_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
  for (EdgeIndex e = 0; e < g.edges_.size(); ++e) {
    const EdgeRecord& rec = g.edges_[e];
    g.adj_[cursor[rec.src]++] = {rec.dst, e, true};
    g.adj_[cursor[rec.dst]++] = {rec.src, e, false};
  }
  for (NodeIndex v = 0; v < g.nodes_.size(); ++v) {
    auto begin = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[v]);
    auto end = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.adj_offsets_[v + 1]);
    std::sort(begin, end, [](const AdjEntry& a, const AdjEntry& b) {
      if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
      return a.edge < b.edge;
    });
  }
  return g;
}

TypeId HeteroGraph::node_type_id(std::string_view name) const {
  auto it = node_type_ids_.find(std::string(name));
  if (it == node_type_ids_.end()) throw LookupError("unknown node type: " + std::string(name));
  return it->second;
}

TypeId HeteroGraph::edge_type_id(std::string_view name) const {
  auto it = edge_type_ids_.find(std::string(name));
  if (it == edge_type_ids_.end()) throw LookupError("unknown edge type: " + std::string(name));
  return it->second;
}

bool HeteroGraph::has_edge_type(std::string_view name) const {
  return edge_type_ids_.count(std::string(name)) > 0;
}

NodeIndex HeteroGraph::find_node(std::string_view type, std::int64_t id) const {
  auto t = node_type_ids_.find(std::string(type));
  if (t == node_type_ids_.end()) return kInvalidNode;
  const auto& lut = node_lookup_[t->second];
  auto it = lut.find(id);
  return it == lut.end() ? kInvalidNode : it->second;
}

NodeIndex HeteroGraph::node_index(std::string_view type, std::int64_t id) const {
  NodeIndex v = find_node(type, id);
  if (v == kInvalidNode)
    throw LookupError("unknown node " + std::string(type) + ":" + std::to_string(id));
  return v;
}

std::uint32_t HeteroGraph::degree(NodeIndex v) const {
  if (v >= nodes_.size()) throw LookupError("node index out of range");
  return degree_[v];
}

std::string HeteroGraph::node_label(NodeIndex v) const {
  const NodeRecord& n = nodes_[v];
  return node_types_[n.type] + ":" + std::to_string(n.id);
}

NodeIndex HeteroGraph::parse_node_label(std::string_view label) const {
  auto colon = label.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == label.size())
    throw ParseError("node label must be type:id, got '" + std::string(label) + "'");
  std::string_view id_part = label.substr(colon + 1);
  std::int64_t id = 0;
  auto [ptr, ec] = std::from_chars(id_part.data(), id_part.data() + id_part.size(), id);
  if (ec != std::errc() || ptr != id_part.data() + id_part.size())
    throw ParseError("invalid node id in '" + std::string(label) + "'");
  return node_index(label.substr(0, colon), id);
}

std::uint64_t HeteroGraph::schema_hash() const {
  std::uint64_t h = fnv1a("pagelink-schema-v1");
  for (const auto& name : node_types_) h = fnv1a(name, fnv1a_u64(name.size(), h));
  h = fnv1a("|", h);
  for (const auto& name : edge_types_) h = fnv1a(name, fnv1a_u64(name.size(), h));
  return h;
}

std::uint64_t HeteroGraph::content_hash() const {
  std::uint64_t h = schema_hash();
  for (const auto& n : nodes_) {
    h = fnv1a_u64(n.type, h);
    h = fnv1a_u64(static_cast<std::uint64_t>(n.id), h);
  }
  for (const auto& e : edges_) {
    h = fnv1a_u64(e.type, h);
    h = fnv1a_u64(e.src, h);
    h = fnv1a_u64(e.dst, h);
  }
  return h;
}

void HeteroGraph::write_tsv(std::ostream& edges_out, std::ostream& nodes_out,
                            std::string_view header_comment) const {
  if (!header_comment.empty()) {
    edges_out << "# " << header_comment << "\n";
    nodes_out << "# " << header_comment << "\n";
  }
  for (const auto& n : nodes_) nodes_out << node_types_[n.type] << "\t" << n.id << "\n";
  for (const auto& e : edges_) {
    const NodeRecord& s = nodes_[e.src];
    const NodeRecord& d = nodes_[e.dst];
    edges_out << node_types_[s.type] << "\t" << s.id << "\t" << edge_types_[e.type] << "\t"
              << node_types_[d.type] << "\t" << d.id << "\n";
  }
}

void HeteroGraph::save_tsv(const std::string& edges_path, const std::string& nodes_path,
                           std::string_view header_comment) const {
  std::ofstream edges_out(edges_path);
  if (!edges_out) throw IoError("cannot open " + edges_path + " for writing");
  std::ofstream nodes_out(nodes_path);
  if (!nodes_out) throw IoError("cannot open " + nodes_path + " for writing");
  write_tsv(edges_out, nodes_out, header_comment);
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::int64_t parse_id(std::string_view field, std::size_t line_no) {
  std::int64_t id = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), id);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line_no) + ": invalid node id '" +
                     std::string(field) + "'");
  return id;
}

}  // namespace

HeteroGraph HeteroGraph::read_tsv(std::istream& edges_in, std::istream* nodes_in) {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::string line;
  if (nodes_in) {
    std::size_t line_no = 0;
    while (std::getline(*nodes_in, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      auto fields = split_tabs(line);
      if (fields.size() != 2)
        throw ParseError("nodes line " + std::to_string(line_no) + ": expected 2 fields, got " +
                         std::to_string(fields.size()));
      nodes.push_back({std::string(fields[0]), parse_id(fields[1], line_no)});
    }
  }
  std::size_t line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                       std::to_string(fields.size()));
    EdgeSpec e;
    e.src = {std::string(fields[0]), parse_id(fields[1], line_no)};
    e.edge_type = std::string(fields[2]);
    e.dst = {std::string(fields[3]), parse_id(fields[4], line_no)};
    edges.push_back(std::move(e));
  }
  return build(nodes, edges, /*complete_nodes=*/false);
}

HeteroGraph HeteroGraph::load_tsv(const std::string& edges_path, const std::string& nodes_path) {
  std::ifstream edges_in(edges_path);
  if (!edges_in) throw IoError("cannot open " + edges_path);
  if (nodes_path.empty()) return read_tsv(edges_in, nullptr);
  std::ifstream nodes_in(nodes_path);
  if (!nodes_in) throw IoError("cannot open " + nodes_path);
  return read_tsv(edges_in, &nodes_in);
}

}  // namespace pagelink
