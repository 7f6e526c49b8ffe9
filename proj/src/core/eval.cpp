#include "core/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/theory.hpp"

namespace pagelink {

const char* method_name(ExplainMethod method) {
  switch (method) {
    case ExplainMethod::PageLink: return "pagelink";
    case ExplainMethod::GnnExpLink: return "gnnexp-link";
    case ExplainMethod::PgExpLink: return "pgexp-link";
  }
  return "unknown";
}

std::vector<double> project_mask_scores(const Subgraph& eval_graph,
                                        std::span<const EdgeIndex> mask_parent_edges,
                                        std::span<const double> logits) {
  if (mask_parent_edges.size() != logits.size())
    throw InvalidArgumentError("mask edge list and logits differ in length");
  double floor = 0.0;
  if (!logits.empty()) floor = *std::min_element(logits.begin(), logits.end());
  std::vector<double> scores(eval_graph.num_edges(), floor);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const LocalEdge e = eval_graph.local_edge(mask_parent_edges[i]);
    if (e != kInvalidLocal) scores[e] = logits[i];
  }
  return scores;
}

namespace {

std::vector<std::uint8_t> gt_labels(const Subgraph& eval_graph, const GroundTruth& gt) {
  std::vector<std::uint8_t> labels(eval_graph.num_edges(), 0);
  for (EdgeIndex parent : gt.edge_union) {
    const LocalEdge e = eval_graph.local_edge(parent);
    if (e == kInvalidLocal)
      throw InvalidArgumentError("ground-truth edge missing from the evaluation graph");
    labels[e] = 1;
  }
  return labels;
}

}  // namespace

double mask_auc(const Subgraph& eval_graph, std::span<const double> scores,
                const GroundTruth& gt) {
  if (scores.size() != eval_graph.num_edges())
    throw InvalidArgumentError("score vector does not cover the evaluation graph");
  return rank_auc(scores, gt_labels(eval_graph, gt));
}

double mask_auc(const Subgraph& eval_graph, const EdgeMaskSet& mask, const GroundTruth& gt) {
  check_mask_alignment(eval_graph, mask);
  return mask_auc(eval_graph, mask.logits, gt);
}

int path_hit(const Subgraph& eval_graph, std::span<const double> scores, std::int32_t budget,
             const GroundTruth& gt) {
  if (budget < 1) throw InvalidArgumentError("budget must be >= 1");
  if (scores.size() != eval_graph.num_edges())
    throw InvalidArgumentError("score vector does not cover the evaluation graph");
  const auto top = top_k_indices(scores, static_cast<std::size_t>(budget));
  std::vector<bool> selected(eval_graph.num_edges(), false);
  for (std::size_t i : top) selected[i] = true;
  for (const auto& path : gt.paths) {
    bool all = true;
    for (EdgeIndex parent : path.edges) {
      const LocalEdge e = eval_graph.local_edge(parent);
      if (e == kInvalidLocal || !selected[e]) {
        all = false;
        break;
      }
    }
    if (all) return 1;
  }
  return 0;
}

std::vector<std::string> validate_explanation(const Explanation& expl, const HeteroGraph& graph) {
  std::vector<std::string> problems;
  if (static_cast<std::int32_t>(expl.paths.size()) * expl.l_max > expl.budget)
    problems.push_back("budget arithmetic violated: |P| * l_max > B");
  for (std::size_t i = 0; i < expl.paths.size(); ++i) {
    const Path& path = expl.paths[i];
    const std::string tag = "path " + std::to_string(i) + ": ";
    if (path.nodes.empty() || path.nodes.front() != expl.source ||
        path.nodes.back() != expl.target)
      problems.push_back(tag + "does not connect source to target");
    if (path.nodes.size() != path.edges.size() + 1)
      problems.push_back(tag + "node/edge count mismatch");
    if (static_cast<std::int32_t>(path.edges.size()) > expl.l_max)
      problems.push_back(tag + "exceeds l_max");
    std::set<NodeIndex> uniq(path.nodes.begin(), path.nodes.end());
    if (uniq.size() != path.nodes.size()) problems.push_back(tag + "repeats a node");
    for (std::size_t j = 0; j < path.edges.size(); ++j) {
      const auto& rec = graph.edge(path.edges[j]);
      const bool joins = (rec.src == path.nodes[j] && rec.dst == path.nodes[j + 1]) ||
                         (rec.dst == path.nodes[j] && rec.src == path.nodes[j + 1]);
      if (!joins) problems.push_back(tag + "edge " + std::to_string(j) + " does not join its nodes");
    }
  }
  return problems;
}

EvalReport run_eval(const HeteroGraph& graph, const ModelParams& params, const Dataset& dataset,
                    const EvalConfig& eval_cfg, const ExplainerConfig& expl_cfg) {
  expl_cfg.validate();
  if (dataset.links.empty()) throw ConfigError("dataset has no ground-truth links");

  // Pick evaluation links, preferring the model's held-out test edges.
  std::unordered_set<EdgeIndex> test_set(params.split.test.begin(), params.split.test.end());
  const bool split_usable =
      eval_cfg.only_test_split && !test_set.empty() && params.graph_hash == graph.content_hash();
  std::vector<const GroundTruth*> pool;
  for (const auto& link : dataset.links) {
    if (!split_usable || test_set.count(link.link_edge)) pool.push_back(&link);
  }
  if (pool.empty()) throw ConfigError("no evaluation links available");
  auto rng = make_rng(eval_cfg.seed, /*stream=*/41);
  shuffle(std::span(pool), rng);
  if (pool.size() > eval_cfg.max_links) pool.resize(eval_cfg.max_links);

  // Train the mask predictor on train-split links.
  std::unordered_set<EdgeIndex> train_set(params.split.train.begin(), params.split.train.end());
  std::vector<std::pair<NodeIndex, NodeIndex>> train_pairs;
  for (const auto& link : dataset.links) {
    if (!split_usable || train_set.count(link.link_edge))
      train_pairs.emplace_back(link.source, link.target);
  }
  shuffle(std::span(train_pairs), rng);
  if (train_pairs.size() > eval_cfg.pg_train_pairs) train_pairs.resize(eval_cfg.pg_train_pairs);
  PgTrainConfig pg_cfg = eval_cfg.pg_train;
  pg_cfg.seed = eval_cfg.seed;
  pg_cfg.lambda_entropy = expl_cfg.lambda_entropy;
  pg_cfg.lambda_norm = expl_cfg.lambda_norm;
  const PredictorParams predictor = pgexp_link_train(graph, params, train_pairs, pg_cfg);

  const Subgraph msg_all = message_graph(graph, params);
  const Eigen::MatrixXd node_repr =
      encode_nodes(msg_all, MessagePlan::build(msg_all), params, nullptr);

  EvalReport report;
  report.seed = eval_cfg.seed;
  report.links_evaluated = static_cast<std::uint32_t>(pool.size());
  const ExplainMethod methods[] = {ExplainMethod::PageLink, ExplainMethod::GnnExpLink,
                                   ExplainMethod::PgExpLink};
  for (ExplainMethod method : methods) {
    MethodResult mres;
    mres.method = method;
    for (const GroundTruth* gt : pool) {
      const Subgraph msg = explanation_message_graph(graph, params, gt->source, gt->target);
      ComputationGraph cg = extract_computation_graph(msg, gt->source, gt->target, params.layers);

      std::vector<double> scores;
      if (method == ExplainMethod::PageLink) {
        Subgraph pruned = expl_cfg.degree_cap > 0
                              ? remove_high_degree(cg.sub, expl_cfg.degree_cap,
                                                   std::vector<NodeIndex>{gt->source, gt->target})
                              : cg.sub;
        const std::vector<NodeIndex> endpoints{gt->source, gt->target};
        PrunedCore core;
        std::int32_t k_used = expl_cfg.k;
        for (;; --k_used) {
          core = kcore_prune(pruned, k_used, endpoints);
          core.source_parent = gt->source;
          core.target_parent = gt->target;
          const auto hops = core.sub.bfs_hops(core.sub.local_node(gt->source));
          if (hops[core.sub.local_node(gt->target)] >= 0 || k_used == 1) break;
        }
        core.k = k_used;
        EdgeMaskSet mask = learn_mask(core, params, expl_cfg);
        std::vector<EdgeIndex> core_edges;
        core_edges.reserve(core.sub.num_edges());
        for (LocalEdge e = 0; e < core.sub.num_edges(); ++e)
          core_edges.push_back(core.sub.edge(e).parent_edge);
        scores = project_mask_scores(cg.sub, core_edges, mask.logits);

        Explanation expl = extract_explanation(core, mask, expl_cfg);
        const auto problems = validate_explanation(expl, graph);
        mres.structural_violations += static_cast<int>(problems.size());
      } else if (method == ExplainMethod::GnnExpLink) {
        EdgeMaskSet mask = gnnexp_link(as_unpruned_core(cg), params, expl_cfg);
        scores = mask.logits;
      } else {
        EdgeMaskSet mask = pgexp_link_infer(cg.sub, predictor, node_repr);
        scores = mask.logits;
      }

      LinkResult lres;
      lres.source = gt->source;
      lres.target = gt->target;
      lres.auc = mask_auc(cg.sub, scores, *gt);
      for (std::int32_t budget : eval_cfg.budgets)
        lres.hit[budget] = path_hit(cg.sub, scores, budget, *gt);
      mres.links.push_back(std::move(lres));
    }

    double auc_sum = 0;
    std::map<std::int32_t, double> hit_sum;
    for (const auto& link : mres.links) {
      auc_sum += link.auc;
      for (const auto& [budget, hit] : link.hit) hit_sum[budget] += hit;
    }
    mres.mean_auc = auc_sum / static_cast<double>(mres.links.size());
    for (const auto& [budget, total] : hit_sum)
      mres.hit_rate[budget] = total / static_cast<double>(mres.links.size());
    report.methods.push_back(std::move(mres));
  }
  return report;
}

std::string eval_report_tsv(const EvalReport& report, const HeteroGraph& graph) {
  std::ostringstream out;
  out.precision(6);
  out << "# eval report seed=" << report.seed << " links=" << report.links_evaluated << "\n";
  out << "section\tsummary\nmethod\tlinks\tmean_auc";
  if (!report.methods.empty())
    for (const auto& [budget, rate] : report.methods.front().hit_rate) {
      (void)rate;
      out << "\thr@" << budget;
    }
  out << "\tstructural_violations\n";
  for (const auto& method : report.methods) {
    out << method_name(method.method) << "\t" << method.links.size() << "\t" << method.mean_auc;
    for (const auto& [budget, rate] : method.hit_rate) {
      (void)budget;
      out << "\t" << rate;
    }
    out << "\t" << method.structural_violations << "\n";
  }
  out << "section\tlinks\nmethod\tsource\ttarget\tauc";
  if (!report.methods.empty())
    for (const auto& [budget, rate] : report.methods.front().hit_rate) {
      (void)rate;
      out << "\thit@" << budget;
    }
  out << "\n";
  for (const auto& method : report.methods) {
    for (const auto& link : method.links) {
      out << method_name(method.method) << "\t" << graph.node_label(link.source) << "\t"
          << graph.node_label(link.target) << "\t" << link.auc;
      for (const auto& [budget, hit] : link.hit) {
        (void)budget;
        out << "\t" << hit;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string eval_report_json(const EvalReport& report, const HeteroGraph& graph) {
  nlohmann::ordered_json doc;
  doc["seed"] = report.seed;
  doc["links_evaluated"] = report.links_evaluated;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& method : report.methods) {
    nlohmann::ordered_json m;
    m["method"] = method_name(method.method);
    m["mean_auc"] = method.mean_auc;
    nlohmann::ordered_json hr;
    for (const auto& [budget, rate] : method.hit_rate) hr[std::to_string(budget)] = rate;
    m["hit_rate"] = std::move(hr);
    m["structural_violations"] = method.structural_violations;
    nlohmann::ordered_json links = nlohmann::ordered_json::array();
    for (const auto& link : method.links) {
      nlohmann::ordered_json l;
      l["source"] = graph.node_label(link.source);
      l["target"] = graph.node_label(link.target);
      l["auc"] = link.auc;
      nlohmann::ordered_json hits;
      for (const auto& [budget, hit] : link.hit) hits[std::to_string(budget)] = hit;
      l["hit"] = std::move(hits);
      links.push_back(std::move(l));
    }
    m["links"] = std::move(links);
    methods.push_back(std::move(m));
  }
  doc["methods"] = std::move(methods);
  return doc.dump(2) + "\n";
}

std::string eval_report_summary(const EvalReport& report) {
  std::ostringstream out;
  out.precision(4);
  out << "evaluated " << report.links_evaluated << " links\n";
  for (const auto& method : report.methods) {
    out << method_name(method.method) << ": mean mask AUC " << method.mean_auc;
    for (const auto& [budget, rate] : method.hit_rate)
      out << ", HR@" << budget << " " << rate;
    out << "\n";
  }
  return out.str();
}

BenchReport bench_scaling(std::span<const std::uint64_t> sizes, std::uint32_t trials,
                          std::uint64_t seed, const ExplainerConfig& cfg) {
  std::set<std::uint64_t> distinct(sizes.begin(), sizes.end());
  if (distinct.size() < 4)
    throw InvalidArgumentError("bench needs at least 4 distinct sizes");
  if (trials < 1) throw InvalidArgumentError("trials must be >= 1");

  BenchReport report;
  report.trials = trials;
  report.seed = seed;
  for (std::uint64_t requested : sizes) {
    // An average degree of 8 keeps the 2-hop ego-graph close to the whole
    // graph, so |E_c| tracks the requested edge count.
    const std::uint64_t n = std::max<std::uint64_t>(16, requested / 4);
    const double density = 8.0 / static_cast<double>(n - 1);
    HeteroGraph g = theory::gen_random_graph(n, density, seed ^ requested);
    ModelParams params = init_model(g, 2, 16, seed ^ requested);

    auto rng = make_rng(seed ^ requested, /*stream=*/53);
    const auto pick = static_cast<EdgeIndex>(uniform_u64(rng, g.num_edges()));
    const NodeIndex s = g.edge(pick).src;
    const NodeIndex t = g.edge(pick).dst;

    BenchRow row;
    row.requested_edges = requested;
    {
      ComputationGraph cg = extract_computation_graph(g, s, t, params.layers);
      row.cg_edges = cg.sub.num_edges();
    }
    std::vector<double> times;
    Explanation last;
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
      const auto start = std::chrono::steady_clock::now();
      last = explain(g, params, s, t, cfg);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    row.seconds = times[times.size() / 2];
    row.core_edges = last.core_edges.size();
    report.rows.push_back(row);
  }

  std::vector<double> x, y;
  for (const auto& row : report.rows) {
    x.push_back(static_cast<double>(row.cg_edges));
    y.push_back(row.seconds);
  }
  report.fit = fit_line(x, y);
  return report;
}

std::string bench_report_tsv(const BenchReport& report) {
  std::ostringstream out;
  out.precision(6);
  out << "# bench report seed=" << report.seed << " trials=" << report.trials << "\n";
  out << "requested_edges\tcg_edges\tcore_edges\tseconds\n";
  for (const auto& row : report.rows)
    out << row.requested_edges << "\t" << row.cg_edges << "\t" << row.core_edges << "\t"
        << row.seconds << "\n";
  out << "# fit: slope=" << report.fit.slope << " intercept=" << report.fit.intercept
      << " r_squared=" << report.fit.r_squared << "\n";
  return out.str();
}

std::string bench_report_summary(const BenchReport& report) {
  std::ostringstream out;
  out.precision(4);
  out << "timed " << report.rows.size() << " sizes, " << report.trials
      << " trials each; time vs |E_c| linear fit R^2 = " << report.fit.r_squared
      << " (slope " << report.fit.slope << " s/edge)\n";
  return out.str();
}

}  // namespace pagelink
