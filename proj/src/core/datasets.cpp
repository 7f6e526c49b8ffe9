#include "core/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace pagelink {

void SynthSpec::validate() const {
  if (users < 1 || items < 1 || attr_types < 1 || attrs_per_type < 1)
    throw SpecError("node counts must be >= 1");
  if (p_has < 0 || p_has > 1 || p_prefers < 0 || p_prefers > 1)
    throw SpecError("wiring probabilities must lie in [0, 1]");
  if (l_max < 1) throw SpecError("l_max must be >= 1");
  if (d_max < 1) throw SpecError("d_max must be >= 1");
  if (p_max < 1) throw SpecError("p_max must be >= 1");
  if (authors < 1 || papers < 1 || refs < 1 || fos < 1)
    throw SpecError("citation node counts must be >= 1");
}

SynthSpec SynthSpec::preset_useritemattr() {
  SynthSpec spec;
  spec.l_max = 3;
  spec.d_max = 15;
  spec.p_max = 5;
  return spec;
}

SynthSpec SynthSpec::preset_citation_like() {
  SynthSpec spec;
  spec.l_max = 3;
  spec.d_max = 30;
  spec.p_max = 5;
  spec.n_links = 300;
  return spec;
}

namespace {

// Simple paths s..t with <= l_max hops whose interior degrees stay within
// d_max, found by bounded DFS over the base graph.
struct QualifyingPath {
  std::vector<NodeIndex> nodes;  // base-graph indices
  std::vector<EdgeIndex> edges;
  std::uint64_t degree_sum = 0;
};

void qualifying_dfs(const HeteroGraph& g, NodeIndex v, NodeIndex target, std::int32_t l_max,
                    std::uint32_t d_max, TypeId skip_type, std::vector<NodeIndex>& node_stack,
                    std::vector<EdgeIndex>& edge_stack, std::vector<bool>& visited,
                    std::uint64_t degree_sum, std::vector<QualifyingPath>& out) {
  if (v == target) {
    out.push_back({node_stack, edge_stack, degree_sum});
    return;
  }
  if (static_cast<std::int32_t>(edge_stack.size()) >= l_max) return;
  for (const auto& entry : g.incident(v)) {
    const NodeIndex next = entry.neighbor;
    if (visited[next]) continue;
    if (g.edge(entry.edge).type == skip_type) continue;
    if (next != target && g.degree(next) > d_max) continue;  // interior cap
    visited[next] = true;
    node_stack.push_back(next);
    edge_stack.push_back(entry.edge);
    qualifying_dfs(g, next, target, l_max, d_max, skip_type, node_stack, edge_stack, visited,
                   degree_sum + (next != target ? g.degree(next) : 0), out);
    node_stack.pop_back();
    edge_stack.pop_back();
    visited[next] = false;
  }
}

// skip_type: ground-truth paths may never traverse edges of the augmented
// link type itself (relevant when augmenting a graph that already has some).
std::vector<QualifyingPath> qualifying_paths(const HeteroGraph& g, NodeIndex s, NodeIndex t,
                                             std::int32_t l_max, std::uint32_t d_max,
                                             TypeId skip_type) {
  std::vector<QualifyingPath> out;
  std::vector<bool> visited(g.num_nodes(), false);
  std::vector<NodeIndex> node_stack{s};
  std::vector<EdgeIndex> edge_stack;
  visited[s] = true;
  qualifying_dfs(g, s, t, l_max, d_max, skip_type, node_stack, edge_stack, visited, 0, out);
  std::sort(out.begin(), out.end(), [](const QualifyingPath& a, const QualifyingPath& b) {
    if (a.degree_sum != b.degree_sum) return a.degree_sum < b.degree_sum;
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    if (a.nodes != b.nodes) return a.nodes < b.nodes;
    return a.edges < b.edges;
  });
  return out;
}

bool adjacent(const HeteroGraph& g, NodeIndex a, NodeIndex b) {
  const auto inc = g.incident(a);
  const auto inc_b = g.incident(b);
  const auto& shorter = inc.size() <= inc_b.size() ? inc : inc_b;
  const NodeIndex other = inc.size() <= inc_b.size() ? b : a;
  for (const auto& entry : shorter)
    if (entry.neighbor == other) return true;
  return false;
}

EdgeIndex resolve_edge(const HeteroGraph& g, NodeIndex u, NodeIndex v, TypeId type) {
  for (const auto& entry : g.incident(u))
    if (entry.neighbor == v && g.edge(entry.edge).type == type) return entry.edge;
  throw LookupError("edge vanished while mapping ground truth");
}

// Weighted discrete sampler with Zipf-like weights 1 / (rank + 1)^s.
class ZipfSampler {
 public:
  ZipfSampler(std::uint32_t n, double s) : cdf_(n) {
    double total = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), s);
      cdf_[i] = total;
    }
    for (auto& c : cdf_) c /= total;
  }
  std::uint32_t sample(std::mt19937_64& rng) const {
    const double u = uniform_real(rng);
    return static_cast<std::uint32_t>(
        std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

Dataset augment_with_paths(const HeteroGraph& base, const std::string& src_type,
                           const std::string& dst_type, const std::string& link_type,
                           std::int32_t l_max, std::uint32_t d_max, std::int32_t p_max,
                           std::uint32_t n_links, std::uint64_t seed) {
  const TypeId src_t = base.node_type_id(src_type);
  const TypeId dst_t = base.node_type_id(dst_type);
  const auto [src_lo, src_hi] = base.node_range(src_t);
  const auto [dst_lo, dst_hi] = base.node_range(dst_t);
  if (src_lo == src_hi || dst_lo == dst_hi)
    throw GenerationError("base graph lacks " + src_type + " or " + dst_type + " nodes");

  // Deterministic pass over all candidate pairs in shuffled order.
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  pairs.reserve(static_cast<std::size_t>(src_hi - src_lo) * (dst_hi - dst_lo));
  for (NodeIndex s = src_lo; s < src_hi; ++s)
    for (NodeIndex t = dst_lo; t < dst_hi; ++t) pairs.emplace_back(s, t);
  auto rng = make_rng(seed, /*stream=*/23);
  shuffle(std::span(pairs), rng);

  const TypeId skip_type = base.has_edge_type(link_type)
                               ? base.edge_type_id(link_type)
                               : static_cast<TypeId>(base.num_edge_types());
  struct Pending {
    NodeIndex s, t;
    std::vector<QualifyingPath> paths;
  };
  std::vector<Pending> chosen;
  for (const auto& [s, t] : pairs) {
    if (chosen.size() >= n_links) break;
    if (adjacent(base, s, t)) continue;  // never augment an already-connected pair
    auto qualifying = qualifying_paths(base, s, t, l_max, d_max, skip_type);
    if (qualifying.empty()) continue;
    if (qualifying.size() > static_cast<std::size_t>(p_max)) qualifying.resize(p_max);
    chosen.push_back({s, t, std::move(qualifying)});
  }

  Dataset out;
  out.link_edge_type = link_type;
  if (chosen.empty())
    throw GenerationError("no qualifying (" + src_type + ", " + dst_type +
                          ") pairs under l_max/d_max; relax the spec");
  if (chosen.size() < n_links)
    out.warnings.push_back("requested " + std::to_string(n_links) + " links but only " +
                           std::to_string(chosen.size()) + " qualifying pairs exist");

  // Rebuild the graph with the augmented edges appended.
  std::vector<NodeSpec> nodes;
  nodes.reserve(base.num_nodes());
  for (NodeIndex v = 0; v < base.num_nodes(); ++v) {
    const auto& rec = base.node(v);
    nodes.push_back({base.node_type_name(rec.type), rec.id});
  }
  std::vector<EdgeSpec> edges;
  edges.reserve(base.num_edges() + chosen.size());
  auto spec_of = [&](NodeIndex v) -> NodeSpec {
    const auto& rec = base.node(v);
    return {base.node_type_name(rec.type), rec.id};
  };
  for (EdgeIndex e = 0; e < base.num_edges(); ++e) {
    const auto& rec = base.edge(e);
    edges.push_back({spec_of(rec.src), base.edge_type_name(rec.type), spec_of(rec.dst)});
  }
  for (const auto& link : chosen)
    edges.push_back({spec_of(link.s), link_type, spec_of(link.t)});
  out.graph = HeteroGraph::build(nodes, edges, /*complete_nodes=*/true);

  // Map ground truth into the final graph's canonical indices.
  const TypeId link_t = out.graph.edge_type_id(link_type);
  auto map_node = [&](NodeIndex base_v) {
    const auto& rec = base.node(base_v);
    return out.graph.node_index(base.node_type_name(rec.type), rec.id);
  };
  for (const auto& link : chosen) {
    GroundTruth gt;
    gt.source = map_node(link.s);
    gt.target = map_node(link.t);
    gt.link_edge = resolve_edge(out.graph, gt.source, gt.target, link_t);
    for (const auto& qp : link.paths) {
      GtPath path;
      path.degree_sum = qp.degree_sum;
      for (NodeIndex v : qp.nodes) path.nodes.push_back(map_node(v));
      for (std::size_t i = 0; i < qp.edges.size(); ++i) {
        const TypeId et = base.edge(qp.edges[i]).type;
        path.edge_types.push_back(out.graph.edge_type_id(base.edge_type_name(et)));
        path.edges.push_back(
            resolve_edge(out.graph, path.nodes[i], path.nodes[i + 1], path.edge_types.back()));
      }
      gt.edge_union.insert(gt.edge_union.end(), path.edges.begin(), path.edges.end());
      gt.paths.push_back(std::move(path));
    }
    std::sort(gt.edge_union.begin(), gt.edge_union.end());
    gt.edge_union.erase(std::unique(gt.edge_union.begin(), gt.edge_union.end()),
                        gt.edge_union.end());
    out.links.push_back(std::move(gt));
  }
  std::sort(out.links.begin(), out.links.end(),
            [](const GroundTruth& a, const GroundTruth& b) { return a.link_edge < b.link_edge; });
  return out;
}

Dataset gen_useritemattr(const SynthSpec& spec) {
  spec.validate();
  auto rng = make_rng(spec.seed, /*stream=*/31);

  const std::uint32_t n_attrs = spec.attr_types * spec.attrs_per_type;
  auto attr_type_name = [&](std::uint32_t a) {
    return "attr" + std::to_string(a / spec.attrs_per_type);
  };
  auto attr_id = [&](std::uint32_t a) {
    return static_cast<std::int64_t>(a % spec.attrs_per_type);
  };

  // (1) has: item -> attr. (2) hidden prefers: user -> attr (kept aside).
  std::vector<std::vector<std::uint32_t>> item_attrs(spec.items);
  for (std::uint32_t i = 0; i < spec.items; ++i)
    for (std::uint32_t a = 0; a < n_attrs; ++a)
      if (bernoulli(rng, spec.p_has)) item_attrs[i].push_back(a);
  std::vector<std::vector<bool>> prefers(spec.users, std::vector<bool>(n_attrs, false));
  for (std::uint32_t u = 0; u < spec.users; ++u)
    for (std::uint32_t a = 0; a < n_attrs; ++a)
      if (bernoulli(rng, spec.p_prefers)) prefers[u][a] = true;

  // (3) buys where a sampled item has a hidden-preferred attr; the
  // hidden-prefers edges themselves are dropped afterwards.
  std::set<std::pair<std::uint32_t, std::uint32_t>> buys;
  std::vector<std::uint32_t> item_ids(spec.items);
  for (std::uint32_t i = 0; i < spec.items; ++i) item_ids[i] = i;
  for (std::uint32_t u = 0; u < spec.users; ++u) {
    std::vector<std::uint32_t> sampled = item_ids;
    shuffle(std::span(sampled), rng);
    const std::uint32_t take = std::min<std::uint32_t>(spec.items_sampled_per_user, spec.items);
    for (std::uint32_t j = 0; j < take; ++j) {
      const std::uint32_t item = sampled[j];
      bool match = false;
      for (std::uint32_t a : item_attrs[item]) match = match || prefers[u][a];
      if (match) buys.insert({u, item});
    }
  }

  // (5) collaborative filtering on a snapshot of the buys relation.
  std::vector<std::set<std::uint32_t>> user_items(spec.users);
  for (const auto& [u, i] : buys) user_items[u].insert(i);
  auto shared_items = [&](std::uint32_t a, std::uint32_t b) {
    std::size_t shared = 0;
    for (std::uint32_t i : user_items[a]) shared += user_items[b].count(i);
    return shared;
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cf_added;
  for (std::uint32_t trial = 0; trial < spec.cf_samples; ++trial) {
    const auto u = static_cast<std::uint32_t>(uniform_u64(rng, spec.users));
    const auto i = static_cast<std::uint32_t>(uniform_u64(rng, spec.items));
    if (buys.count({u, i})) continue;
    for (std::uint32_t other = 0; other < spec.users; ++other) {
      if (other == u || !user_items[other].count(i)) continue;
      if (shared_items(u, other) >= spec.similarity_threshold) {
        cf_added.emplace_back(u, i);
        break;
      }
    }
  }
  for (const auto& p : cf_added) buys.insert(p);

  // Base graph: has + buys.
  std::vector<NodeSpec> nodes;
  for (std::uint32_t u = 0; u < spec.users; ++u)
    nodes.push_back({"user", static_cast<std::int64_t>(u)});
  for (std::uint32_t i = 0; i < spec.items; ++i)
    nodes.push_back({"item", static_cast<std::int64_t>(i)});
  for (std::uint32_t a = 0; a < n_attrs; ++a) nodes.push_back({attr_type_name(a), attr_id(a)});
  std::vector<EdgeSpec> edges;
  for (std::uint32_t i = 0; i < spec.items; ++i)
    for (std::uint32_t a : item_attrs[i])
      edges.push_back({{"item", static_cast<std::int64_t>(i)},
                       "has",
                       {attr_type_name(a), attr_id(a)}});
  for (const auto& [u, i] : buys)
    edges.push_back({{"user", static_cast<std::int64_t>(u)},
                     "buys",
                     {"item", static_cast<std::int64_t>(i)}});
  HeteroGraph base = HeteroGraph::build(nodes, edges, /*complete_nodes=*/true);

  Dataset out = augment_with_paths(base, "user", "item", "likes", spec.l_max, spec.d_max,
                                   spec.p_max, spec.n_links, spec.seed);
  out.preset = "useritemattr";
  out.spec = spec;
  return out;
}

Dataset gen_citation_like(const SynthSpec& spec) {
  spec.validate();
  auto rng = make_rng(spec.seed, /*stream=*/37);

  const ZipfSampler author_pick(spec.authors, spec.zipf_authors);
  const ZipfSampler ref_pick(spec.refs, spec.zipf_refs);
  const ZipfSampler fos_pick(spec.fos, spec.zipf_fos);

  std::set<std::pair<std::uint32_t, std::uint32_t>> writes, cites, in_fos;
  for (std::uint32_t p = 0; p < spec.papers; ++p) {
    const std::uint32_t n_authors = 1 + (bernoulli(rng, 0.5) ? 1 : 0);
    for (std::uint32_t j = 0; j < n_authors; ++j) writes.insert({author_pick.sample(rng), p});
    const auto n_cites = static_cast<std::uint32_t>(1 + uniform_u64(rng, 3));
    for (std::uint32_t j = 0; j < n_cites; ++j) cites.insert({p, ref_pick.sample(rng)});
    const auto n_fos = static_cast<std::uint32_t>(1 + uniform_u64(rng, 3));
    for (std::uint32_t j = 0; j < n_fos; ++j) in_fos.insert({p, fos_pick.sample(rng)});
  }

  std::vector<NodeSpec> nodes;
  for (std::uint32_t a = 0; a < spec.authors; ++a)
    nodes.push_back({"author", static_cast<std::int64_t>(a)});
  for (std::uint32_t p = 0; p < spec.papers; ++p)
    nodes.push_back({"paper", static_cast<std::int64_t>(p)});
  for (std::uint32_t r = 0; r < spec.refs; ++r)
    nodes.push_back({"ref", static_cast<std::int64_t>(r)});
  for (std::uint32_t f = 0; f < spec.fos; ++f)
    nodes.push_back({"fos", static_cast<std::int64_t>(f)});
  std::vector<EdgeSpec> edges;
  for (const auto& [a, p] : writes)
    edges.push_back({{"author", static_cast<std::int64_t>(a)},
                     "writes",
                     {"paper", static_cast<std::int64_t>(p)}});
  for (const auto& [p, r] : cites)
    edges.push_back({{"paper", static_cast<std::int64_t>(p)},
                     "cites",
                     {"ref", static_cast<std::int64_t>(r)}});
  for (const auto& [p, f] : in_fos)
    edges.push_back({{"paper", static_cast<std::int64_t>(p)},
                     "in",
                     {"fos", static_cast<std::int64_t>(f)}});
  HeteroGraph base = HeteroGraph::build(nodes, edges, /*complete_nodes=*/true);

  Dataset out = augment_with_paths(base, "author", "paper", "likes", spec.l_max, spec.d_max,
                                   spec.p_max, spec.n_links, spec.seed);
  out.preset = "citation-like";
  out.spec = spec;
  return out;
}

Dataset generate_dataset(const std::string& preset, const SynthSpec& spec) {
  if (preset == "useritemattr") return gen_useritemattr(spec);
  if (preset == "citation-like") return gen_citation_like(spec);
  throw ConfigError("unknown preset '" + preset + "' (useritemattr, citation-like)");
}

namespace {

std::string seed_header(const Dataset& dataset) {
  return "preset=" + dataset.preset + " seed=" + std::to_string(dataset.spec.seed);
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string header = seed_header(dataset);
  dataset.graph.save_tsv(dir + "/graph.tsv", dir + "/nodes.tsv", header);

  std::ofstream gt(dir + "/gt.tsv");
  if (!gt) throw IoError("cannot open " + dir + "/gt.tsv for writing");
  gt << "# " << header << "\n";
  gt << "# link <TAB> source <TAB> target <TAB> edge_type; "
     << "path <TAB> nodes <TAB> edge_types <TAB> degree_sum\n";
  for (const auto& link : dataset.links) {
    gt << "link\t" << dataset.graph.node_label(link.source) << "\t"
       << dataset.graph.node_label(link.target) << "\t" << dataset.link_edge_type << "\n";
    for (const auto& path : link.paths) {
      gt << "path\t";
      for (std::size_t i = 0; i < path.nodes.size(); ++i)
        gt << (i ? "," : "") << dataset.graph.node_label(path.nodes[i]);
      gt << "\t";
      for (std::size_t i = 0; i < path.edge_types.size(); ++i)
        gt << (i ? "," : "") << dataset.graph.edge_type_name(path.edge_types[i]);
      gt << "\t" << path.degree_sum << "\n";
    }
  }

  std::ofstream spec_out(dir + "/spec.txt");
  if (!spec_out) throw IoError("cannot open " + dir + "/spec.txt for writing");
  spec_out << spec_to_kv(dataset.spec, dataset.preset);
}

namespace {

std::vector<std::string> split_char(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Dataset load_dataset(const std::string& dir) {
  Dataset out;
  {
    std::ifstream spec_in(dir + "/spec.txt");
    if (spec_in) {
      std::stringstream buf;
      buf << spec_in.rdbuf();
      out.spec = spec_from_kv(buf.str(), &out.preset);
    }
  }
  out.graph = HeteroGraph::load_tsv(dir + "/graph.tsv", dir + "/nodes.tsv");

  std::ifstream gt(dir + "/gt.tsv");
  if (!gt) throw IoError("cannot open " + dir + "/gt.tsv");
  std::string line;
  std::size_t line_no = 0;
  GroundTruth* current = nullptr;
  while (std::getline(gt, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_char(line, '\t');
    if (fields[0] == "link") {
      if (fields.size() != 4)
        throw ParseError("gt.tsv line " + std::to_string(line_no) + ": bad link record");
      GroundTruth link;
      link.source = out.graph.parse_node_label(fields[1]);
      link.target = out.graph.parse_node_label(fields[2]);
      out.link_edge_type = fields[3];
      link.link_edge = resolve_edge(out.graph, link.source, link.target,
                                    out.graph.edge_type_id(fields[3]));
      out.links.push_back(std::move(link));
      current = &out.links.back();
    } else if (fields[0] == "path") {
      if (!current || fields.size() != 4)
        throw ParseError("gt.tsv line " + std::to_string(line_no) + ": bad path record");
      GtPath path;
      for (const auto& label : split_char(fields[1], ','))
        path.nodes.push_back(out.graph.parse_node_label(label));
      for (const auto& name : split_char(fields[2], ','))
        path.edge_types.push_back(out.graph.edge_type_id(name));
      if (path.nodes.size() != path.edge_types.size() + 1)
        throw ParseError("gt.tsv line " + std::to_string(line_no) + ": length mismatch");
      for (std::size_t i = 0; i < path.edge_types.size(); ++i)
        path.edges.push_back(
            resolve_edge(out.graph, path.nodes[i], path.nodes[i + 1], path.edge_types[i]));
      std::uint64_t sum = 0;
      auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), sum);
      if (ec != std::errc()) throw ParseError("gt.tsv line " + std::to_string(line_no) +
                                              ": bad degree sum");
      path.degree_sum = sum;
      current->edge_union.insert(current->edge_union.end(), path.edges.begin(),
                                 path.edges.end());
      current->paths.push_back(std::move(path));
    } else {
      throw ParseError("gt.tsv line " + std::to_string(line_no) + ": unknown record '" +
                       fields[0] + "'");
    }
  }
  for (auto& link : out.links) {
    std::sort(link.edge_union.begin(), link.edge_union.end());
    link.edge_union.erase(std::unique(link.edge_union.begin(), link.edge_union.end()),
                          link.edge_union.end());
  }
  return out;
}

std::string spec_to_kv(const SynthSpec& spec, const std::string& preset) {
  std::ostringstream out;
  out << "# seed=" << spec.seed << "\n";
  out << "preset=" << preset << "\n";
  out << "users=" << spec.users << "\nitems=" << spec.items << "\nattr_types=" << spec.attr_types
      << "\nattrs_per_type=" << spec.attrs_per_type << "\np_has=" << spec.p_has
      << "\np_prefers=" << spec.p_prefers
      << "\nitems_sampled_per_user=" << spec.items_sampled_per_user
      << "\ncf_samples=" << spec.cf_samples
      << "\nsimilarity_threshold=" << spec.similarity_threshold << "\nauthors=" << spec.authors
      << "\npapers=" << spec.papers << "\nrefs=" << spec.refs << "\nfos=" << spec.fos
      << "\nzipf_authors=" << spec.zipf_authors << "\nzipf_refs=" << spec.zipf_refs
      << "\nzipf_fos=" << spec.zipf_fos << "\nl_max=" << spec.l_max << "\nd_max=" << spec.d_max
      << "\np_max=" << spec.p_max << "\nn_links=" << spec.n_links << "\nseed=" << spec.seed
      << "\n";
  return out.str();
}

SynthSpec spec_from_kv(const std::string& text, std::string* preset_out) {
  SynthSpec spec;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("bad spec line: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    auto as_u32 = [&] { return static_cast<std::uint32_t>(std::stoul(value)); };
    auto as_u64 = [&] { return static_cast<std::uint64_t>(std::stoull(value)); };
    auto as_i32 = [&] { return static_cast<std::int32_t>(std::stol(value)); };
    auto as_f = [&] { return std::stod(value); };
    if (key == "preset") {
      if (preset_out) *preset_out = value;
    } else if (key == "users") spec.users = as_u32();
    else if (key == "items") spec.items = as_u32();
    else if (key == "attr_types") spec.attr_types = as_u32();
    else if (key == "attrs_per_type") spec.attrs_per_type = as_u32();
    else if (key == "p_has") spec.p_has = as_f();
    else if (key == "p_prefers") spec.p_prefers = as_f();
    else if (key == "items_sampled_per_user") spec.items_sampled_per_user = as_u32();
    else if (key == "cf_samples") spec.cf_samples = as_u32();
    else if (key == "similarity_threshold") spec.similarity_threshold = as_u32();
    else if (key == "authors") spec.authors = as_u32();
    else if (key == "papers") spec.papers = as_u32();
    else if (key == "refs") spec.refs = as_u32();
    else if (key == "fos") spec.fos = as_u32();
    else if (key == "zipf_authors") spec.zipf_authors = as_f();
    else if (key == "zipf_refs") spec.zipf_refs = as_f();
    else if (key == "zipf_fos") spec.zipf_fos = as_f();
    else if (key == "l_max") spec.l_max = as_i32();
    else if (key == "d_max") spec.d_max = as_u32();
    else if (key == "p_max") spec.p_max = as_i32();
    else if (key == "n_links") spec.n_links = as_u32();
    else if (key == "seed") spec.seed = as_u64();
    else throw ParseError("unknown spec key: " + key);
  }
  return spec;
}

}  // namespace pagelink
