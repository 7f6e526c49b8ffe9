#include "core/explainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace pagelink {

void ExplainerConfig::validate() const {
  if (alpha < 0 || beta < 0) throw ConfigError("alpha and beta must be >= 0");
  if (eta <= 0) throw ConfigError("learning rate must be positive");
  if (max_iterations < 0) throw ConfigError("max iterations must be >= 0");
  if (k < 1) throw ConfigError("core parameter k must be >= 1");
  if (l_max < 1) throw ConfigError("l_max must be >= 1");
  if (budget < l_max) throw ConfigError("budget must be >= l_max");
  if (k_paths < 1) throw ConfigError("k_paths must be >= 1");
  if (tolerance < 0) throw ConfigError("tolerance must be >= 0");
  if (lambda_entropy < 0 || lambda_norm < 0) throw ConfigError("regularizers must be >= 0");
}

double edge_score(double mask_logit, std::uint32_t target_degree) {
  if (target_degree == 0) throw DegreeError("edge score undefined for degree-0 endpoint");
  // log(sigmoid(x)) = -log(1 + exp(-x)), stable in both directions
  const double log_sigmoid =
      mask_logit >= 0 ? -std::log1p(std::exp(-mask_logit))
                      : mask_logit - std::log1p(std::exp(mask_logit));
  return log_sigmoid - std::log(static_cast<double>(target_degree));
}

bool path_less(const Path& a, const Path& b) {
  if (a.score != b.score) return a.score > b.score;  // higher score = shorter distance
  if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.edges < b.edges;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SearchContext {
  const Subgraph& g;
  const EdgeMaskSet& mask;
  bool degree_from_core;

  // Distance of traversing local edge e into local node v: -Score(e).
  double weight(LocalEdge e, LocalNode into) const {
    const std::uint32_t deg = degree_from_core
                                  ? g.degree(into)
                                  : g.parent().degree(g.parent_node(into));
    return -edge_score(mask.logits[e], deg);
  }
};

struct LocalPath {
  std::vector<LocalNode> nodes;
  std::vector<LocalEdge> edges;
  double dist = 0.0;  // left-to-right sum of step weights
};

double path_distance(const SearchContext& ctx, const std::vector<LocalNode>& nodes,
                     const std::vector<LocalEdge>& edges) {
  double dist = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) dist += ctx.weight(edges[i], nodes[i + 1]);
  return dist;
}

// (distance, hops, node sequence, edge sequence) — the project-wide path order.
bool local_path_less(const LocalPath& a, const LocalPath& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.edges < b.edges;
}

struct DijkstraLabel {
  double dist = kInf;
  LocalNode prev_node = kInvalidLocal;
  std::int32_t prev_hop = -1;
  LocalEdge via_edge = kInvalidLocal;
  bool reached = false;
  bool done = false;
};

class HopBoundedDijkstra {
 public:
  HopBoundedDijkstra(const SearchContext& ctx, std::int32_t hop_budget)
      : ctx_(ctx), hop_budget_(hop_budget), stride_(hop_budget + 1) {}

  // Shortest loopless path from src to dst within the hop budget, skipping
  // excluded nodes/edges. Ties resolved by (hops, node seq, edge seq).
  std::optional<LocalPath> run(LocalNode src, LocalNode dst,
                               const std::vector<bool>& excluded_node,
                               const std::vector<bool>& excluded_edge) {
    if (src == dst) return std::nullopt;
    labels_.assign(ctx_.g.num_nodes() * stride_, DijkstraLabel());
    using Item = std::tuple<double, std::int32_t, LocalNode>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    at(src, 0) = {0.0, kInvalidLocal, -1, kInvalidLocal, true, false};
    heap.emplace(0.0, 0, src);

    while (!heap.empty()) {
      auto [dist, hops, v] = heap.top();
      heap.pop();
      DijkstraLabel& label = at(v, hops);
      if (label.done || dist > label.dist) continue;
      label.done = true;
      if (hops == hop_budget_) continue;
      for (const auto& entry : ctx_.g.incident(v)) {
        if (excluded_node[entry.neighbor] || excluded_edge[entry.edge]) continue;
        const double nd = label.dist + ctx_.weight(entry.edge, entry.neighbor);
        DijkstraLabel& next = at(entry.neighbor, hops + 1);
        bool improves = false;
        if (!next.reached || nd < next.dist) {
          improves = true;
        } else if (nd == next.dist) {
          improves = candidate_beats(v, hops, entry.edge, entry.neighbor);
        }
        if (improves) {
          const bool push = !next.reached || nd < next.dist;
          next = {nd, v, hops, entry.edge, true, false};
          if (push) heap.emplace(nd, hops + 1, entry.neighbor);
        }
      }
    }

    std::int32_t best_hop = -1;
    for (std::int32_t h = 0; h <= hop_budget_; ++h) {
      if (!at(dst, h).reached) continue;
      if (best_hop < 0 || at(dst, h).dist < at(dst, best_hop).dist) best_hop = h;
    }
    if (best_hop < 0) return std::nullopt;
    LocalPath path;
    path.nodes = chain_nodes(dst, best_hop);
    path.edges = chain_edges(dst, best_hop);
    path.dist = path_distance(ctx_, path.nodes, path.edges);
    return path;
  }

 private:
  DijkstraLabel& at(LocalNode v, std::int32_t h) { return labels_[v * stride_ + h]; }
  const DijkstraLabel& at(LocalNode v, std::int32_t h) const { return labels_[v * stride_ + h]; }

  std::vector<LocalNode> chain_nodes(LocalNode v, std::int32_t h) const {
    std::vector<LocalNode> nodes;
    LocalNode cur = v;
    std::int32_t hop = h;
    while (cur != kInvalidLocal) {
      nodes.push_back(cur);
      const DijkstraLabel& label = at(cur, hop);
      cur = label.prev_node;
      hop = label.prev_hop;
    }
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
  }

  std::vector<LocalEdge> chain_edges(LocalNode v, std::int32_t h) const {
    std::vector<LocalEdge> edges;
    LocalNode cur = v;
    std::int32_t hop = h;
    while (hop > 0) {
      const DijkstraLabel& label = at(cur, hop);
      edges.push_back(label.via_edge);
      cur = label.prev_node;
      hop = label.prev_hop;
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
  }

  // Equal-distance tie: does the path through (prev, edge) beat the chain
  // currently stored at (node, prev_hop + 1) under (node seq, edge seq)?
  bool candidate_beats(LocalNode prev, std::int32_t prev_hop, LocalEdge edge,
                       LocalNode node) const {
    std::vector<LocalNode> cand_nodes = chain_nodes(prev, prev_hop);
    cand_nodes.push_back(node);
    const std::vector<LocalNode> inc_nodes = chain_nodes(node, prev_hop + 1);
    if (cand_nodes != inc_nodes) return cand_nodes < inc_nodes;
    std::vector<LocalEdge> cand_edges = chain_edges(prev, prev_hop);
    cand_edges.push_back(edge);
    return cand_edges < chain_edges(node, prev_hop + 1);
  }

  const SearchContext& ctx_;
  std::int32_t hop_budget_;
  std::int32_t stride_;
  std::vector<DijkstraLabel> labels_;
};

std::vector<LocalPath> yen_k_shortest(const SearchContext& ctx, LocalNode src, LocalNode dst,
                                      std::int32_t k_paths, std::int32_t l_max) {
  std::vector<LocalPath> accepted;
  std::vector<bool> no_nodes(ctx.g.num_nodes(), false);
  std::vector<bool> no_edges(ctx.g.num_edges(), false);

  HopBoundedDijkstra search(ctx, l_max);
  auto first = search.run(src, dst, no_nodes, no_edges);
  if (!first) return accepted;
  accepted.push_back(std::move(*first));

  auto cmp = [](const LocalPath& a, const LocalPath& b) { return local_path_less(a, b); };
  std::set<LocalPath, decltype(cmp)> candidates(cmp);
  std::set<std::vector<LocalEdge>> seen;
  seen.insert(accepted.front().edges);

  while (accepted.size() < static_cast<std::size_t>(k_paths)) {
    const LocalPath prev = accepted.back();
    for (std::size_t spur_i = 0; spur_i < prev.edges.size(); ++spur_i) {
      const auto budget = static_cast<std::int32_t>(l_max - spur_i);
      if (budget <= 0) break;
      std::vector<bool> excluded_node(ctx.g.num_nodes(), false);
      std::vector<bool> excluded_edge(ctx.g.num_edges(), false);
      // Block the next edge of every accepted path sharing this root.
      for (const LocalPath& a : accepted) {
        if (a.edges.size() <= spur_i) continue;
        if (!std::equal(prev.nodes.begin(), prev.nodes.begin() + spur_i + 1, a.nodes.begin()))
          continue;
        if (!std::equal(prev.edges.begin(), prev.edges.begin() + spur_i, a.edges.begin()))
          continue;
        excluded_edge[a.edges[spur_i]] = true;
      }
      for (std::size_t j = 0; j < spur_i; ++j) excluded_node[prev.nodes[j]] = true;

      HopBoundedDijkstra spur_search(ctx, budget);
      auto spur = spur_search.run(prev.nodes[spur_i], dst, excluded_node, excluded_edge);
      if (!spur) continue;

      LocalPath cand;
      cand.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + spur_i);
      cand.nodes.insert(cand.nodes.end(), spur->nodes.begin(), spur->nodes.end());
      cand.edges.assign(prev.edges.begin(), prev.edges.begin() + spur_i);
      cand.edges.insert(cand.edges.end(), spur->edges.begin(), spur->edges.end());
      cand.dist = path_distance(ctx, cand.nodes, cand.edges);
      if (seen.insert(cand.edges).second) candidates.insert(std::move(cand));
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

Path to_parent_path(const Subgraph& g, const LocalPath& local) {
  Path path;
  path.nodes.reserve(local.nodes.size());
  for (LocalNode v : local.nodes) path.nodes.push_back(g.parent_node(v));
  path.edges.reserve(local.edges.size());
  path.edge_types.reserve(local.edges.size());
  for (LocalEdge e : local.edges) {
    path.edges.push_back(g.edge(e).parent_edge);
    path.edge_types.push_back(g.edge(e).type);
  }
  path.score = -local.dist;
  return path;
}

}  // namespace

std::vector<Path> top_k_paths(const Subgraph& core, const EdgeMaskSet& mask, NodeIndex source,
                              NodeIndex target, std::int32_t k_paths, std::int32_t l_max,
                              bool degree_from_core) {
  if (k_paths < 1) throw InvalidArgumentError("k_paths must be >= 1");
  if (l_max < 1) throw InvalidArgumentError("l_max must be >= 1");
  check_mask_alignment(core, mask);
  const LocalNode s = core.local_node(source);
  const LocalNode t = core.local_node(target);
  if (s == kInvalidLocal || t == kInvalidLocal)
    throw LookupError("source or target not present in the core");
  if (s == t) throw InvalidArgumentError("source and target must differ");

  SearchContext ctx{core, mask, degree_from_core};
  auto local = yen_k_shortest(ctx, s, t, k_paths, l_max);
  if (local.empty())
    throw NoPathError("no path within " + std::to_string(l_max) + " hops connects " +
                      core.parent().node_label(source) + " and " +
                      core.parent().node_label(target));
  std::vector<Path> out;
  out.reserve(local.size());
  for (const auto& p : local) out.push_back(to_parent_path(core, p));
  return out;
}

EdgeMaskSet learn_mask(const PrunedCore& core, const ModelParams& params,
                       const ExplainerConfig& cfg) {
  cfg.validate();
  const Subgraph& g = core.sub;
  if (g.num_nodes() == 0) throw InvalidArgumentError("empty core");
  const LocalNode s = g.local_node(core.source_parent);
  const LocalNode t = g.local_node(core.target_parent);
  if (s == kInvalidLocal || t == kInvalidLocal)
    throw LookupError("core lost its protected endpoints");

  EdgeMaskSet mask = EdgeMaskSet::zeros(g);
  if (cfg.max_iterations == 0 || g.num_edges() == 0) return mask;

  const MessagePlan plan = MessagePlan::build(g);
  const bool with_path_loss = cfg.alpha > 0 || cfg.beta > 0;
  std::vector<double> grad(mask.size());
  std::vector<bool> on_path(mask.size());

  for (std::int32_t iter = 0; iter < cfg.max_iterations; ++iter) {
    loss_and_mask_grad(g, plan, params, mask, s, t, cfg.lambda_entropy, cfg.lambda_norm, grad);
    if (with_path_loss) {
      const auto paths = top_k_paths(g, mask, core.source_parent, core.target_parent,
                                     cfg.k_paths, cfg.l_max, cfg.degree_from_core);
      std::fill(on_path.begin(), on_path.end(), false);
      for (const auto& path : paths)
        for (EdgeIndex parent_edge : path.edges) on_path[g.local_edge(parent_edge)] = true;
      for (std::size_t e = 0; e < grad.size(); ++e)
        grad[e] += on_path[e] ? -cfg.alpha : cfg.beta;
    }
    double max_delta = 0.0;
    for (std::size_t e = 0; e < grad.size(); ++e) {
      const double delta = cfg.eta * grad[e];
      mask.logits[e] -= delta;
      max_delta = std::max(max_delta, std::abs(delta));
    }
    mask.iterations = iter + 1;
    if (max_delta < cfg.tolerance) break;
  }
  return mask;
}

Explanation extract_explanation(const PrunedCore& core, const EdgeMaskSet& mask,
                                const ExplainerConfig& cfg) {
  cfg.validate();
  const std::int32_t max_paths = cfg.budget / cfg.l_max;
  auto paths = top_k_paths(core.sub, mask, core.source_parent, core.target_parent, max_paths,
                           cfg.l_max, cfg.degree_from_core);

  Explanation expl;
  expl.source = core.source_parent;
  expl.target = core.target_parent;
  expl.paths = std::move(paths);
  expl.budget = cfg.budget;
  expl.l_max = cfg.l_max;
  expl.budget_consumed = static_cast<std::int32_t>(expl.paths.size()) * cfg.l_max;
  expl.core_k = core.k;
  expl.mask = mask;
  expl.iterations = mask.iterations;
  expl.core_edges.reserve(core.sub.num_edges());
  for (LocalEdge e = 0; e < core.sub.num_edges(); ++e)
    expl.core_edges.push_back(core.sub.edge(e).parent_edge);
  return expl;
}

Subgraph explanation_message_graph(const HeteroGraph& graph, const ModelParams& params,
                                   NodeIndex source, NodeIndex target) {
  Subgraph msg = message_graph(graph, params);
  if (!params.target_edge_type.empty() && graph.has_edge_type(params.target_edge_type)) {
    const TypeId target_type = graph.edge_type_id(params.target_edge_type);
    std::vector<EdgeIndex> direct;
    const LocalNode ls = msg.local_node(source);
    if (ls != kInvalidLocal) {
      for (const auto& entry : msg.incident(ls)) {
        const auto& rec = msg.edge(entry.edge);
        if (rec.type != target_type) continue;
        const NodeIndex other = msg.parent_node(entry.neighbor);
        if (other == target) direct.push_back(rec.parent_edge);
      }
    }
    if (!direct.empty()) msg = msg.without_edges(direct);
  }
  return msg;
}

Explanation explain(const HeteroGraph& graph, const ModelParams& params, NodeIndex source,
                    NodeIndex target, const ExplainerConfig& cfg) {
  cfg.validate();
  if (source >= graph.num_nodes() || target >= graph.num_nodes())
    throw LookupError("source or target not in graph");
  if (source == target) throw InvalidArgumentError("source and target must differ");

  std::vector<std::string> warnings;
  const Subgraph msg = explanation_message_graph(graph, params, source, target);

  {
    const LocalNode ls = msg.local_node(source);
    const LocalNode lt = msg.local_node(target);
    const double p = predict_pair(msg, params, nullptr, ls, lt);
    if (p <= 0.5) {
      std::ostringstream warn;
      warn.precision(4);
      warn << "prediction " << p << " is not positive; explanations target positively "
           << "predicted links";
      warnings.push_back(warn.str());
    }

    ComputationGraph cg = extract_computation_graph(msg, source, target, params.layers);
    Subgraph pruned = cfg.degree_cap > 0
                          ? remove_high_degree(cg.sub, cfg.degree_cap,
                                               std::vector<NodeIndex>{source, target})
                          : cg.sub;

    const std::vector<NodeIndex> endpoints{source, target};
    PrunedCore core;
    std::int32_t k_used = cfg.k;
    for (;; --k_used) {
      core = kcore_prune(pruned, k_used, endpoints);
      core.source_parent = source;
      core.target_parent = target;
      const auto hops = core.sub.bfs_hops(core.sub.local_node(source));
      if (hops[core.sub.local_node(target)] >= 0) break;
      if (k_used == 1) {
        warnings.push_back("endpoints disconnected even in the 1-core");
        break;
      }
    }
    if (k_used != cfg.k)
      warnings.push_back("k-core fallback: k=" + std::to_string(cfg.k) +
                         " disconnected the pair, used k=" + std::to_string(k_used));
    core.k = k_used;

    EdgeMaskSet mask = learn_mask(core, params, cfg);
    Explanation expl = extract_explanation(core, mask, cfg);
    expl.prediction = p;
    expl.warnings = std::move(warnings);
    return expl;
  }
}

std::string explanation_to_json(const Explanation& expl, const HeteroGraph& graph) {
  nlohmann::ordered_json doc;
  doc["pair"] = {{"source", graph.node_label(expl.source)},
                 {"target", graph.node_label(expl.target)}};
  doc["prediction"] = expl.prediction;
  nlohmann::ordered_json paths = nlohmann::ordered_json::array();
  for (const auto& path : expl.paths) {
    nlohmann::ordered_json p;
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (NodeIndex v : path.nodes) nodes.push_back(graph.node_label(v));
    nlohmann::ordered_json types = nlohmann::ordered_json::array();
    for (TypeId t : path.edge_types) types.push_back(graph.edge_type_name(t));
    p["nodes"] = std::move(nodes);
    p["edge_types"] = std::move(types);
    p["score"] = path.score;
    paths.push_back(std::move(p));
  }
  doc["paths"] = std::move(paths);
  doc["budget"] = expl.budget;
  doc["budget_consumed"] = expl.budget_consumed;
  doc["l_max"] = expl.l_max;
  doc["core_k"] = expl.core_k;
  nlohmann::ordered_json stats;
  stats["core_edges"] = expl.mask.size();
  stats["iterations"] = expl.iterations;
  if (!expl.mask.logits.empty()) {
    const auto [lo, hi] = std::minmax_element(expl.mask.logits.begin(), expl.mask.logits.end());
    double mean = 0;
    for (double v : expl.mask.logits) mean += v;
    mean /= static_cast<double>(expl.mask.logits.size());
    stats["min_logit"] = *lo;
    stats["max_logit"] = *hi;
    stats["mean_logit"] = mean;
  }
  doc["mask_stats"] = std::move(stats);
  doc["warnings"] = expl.warnings;
  return doc.dump(2) + "\n";
}

namespace {

EdgeIndex find_parent_edge(const HeteroGraph& graph, NodeIndex u, NodeIndex v, TypeId type) {
  for (const auto& entry : graph.incident(u)) {
    if (entry.neighbor == v && graph.edge(entry.edge).type == type) return entry.edge;
  }
  throw LookupError("edge not found while reading explanation");
}

}  // namespace

Explanation explanation_from_json(const std::string& text, const HeteroGraph& graph) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid explanation json: ") + e.what());
  }
  try {
    Explanation expl;
    expl.source = graph.parse_node_label(doc.at("pair").at("source").get<std::string>());
    expl.target = graph.parse_node_label(doc.at("pair").at("target").get<std::string>());
    expl.prediction = doc.value("prediction", 0.0);
    expl.budget = doc.value("budget", 0);
    expl.budget_consumed = doc.value("budget_consumed", 0);
    expl.l_max = doc.value("l_max", 0);
    expl.core_k = doc.value("core_k", 0);
    for (const auto& p : doc.at("paths")) {
      Path path;
      for (const auto& label : p.at("nodes"))
        path.nodes.push_back(graph.parse_node_label(label.get<std::string>()));
      for (const auto& name : p.at("edge_types"))
        path.edge_types.push_back(graph.edge_type_id(name.get<std::string>()));
      if (path.nodes.size() != path.edge_types.size() + 1)
        throw ParseError("path nodes/edge_types length mismatch");
      for (std::size_t i = 0; i < path.edge_types.size(); ++i)
        path.edges.push_back(
            find_parent_edge(graph, path.nodes[i], path.nodes[i + 1], path.edge_types[i]));
      path.score = p.value("score", 0.0);
      expl.paths.push_back(std::move(path));
    }
    if (doc.contains("warnings"))
      for (const auto& w : doc.at("warnings")) expl.warnings.push_back(w.get<std::string>());
    return expl;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed explanation json: ") + e.what());
  }
}

}  // namespace pagelink
