#include "core/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "core/errors.hpp"
#include "core/kcore.hpp"
#include "core/rng.hpp"

namespace pagelink::theory {

std::uint64_t random_graph_edge_count(std::uint64_t n, double density) {
  if (n < 2) throw SpecError("random graph needs n >= 2");
  if (density <= 0.0 || density > 1.0) throw SpecError("density must be in (0, 1]");
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  auto m = static_cast<std::uint64_t>(std::llround(density * pairs));
  if (static_cast<double>(m) > pairs) throw SpecError("edge count exceeds node pairs");
  return m;
}

HeteroGraph gen_random_graph(std::uint64_t n, double density, std::uint64_t seed) {
  const std::uint64_t m = random_graph_edge_count(n, density);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  auto rng = make_rng(seed, /*stream=*/17);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> chosen;
  chosen.reserve(m);
  if (pairs <= 4e6 && static_cast<double>(m) > 0.3 * pairs) {
    // Dense regime: partial Fisher-Yates over the explicit pair list.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> all;
    all.reserve(static_cast<std::size_t>(pairs));
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
    for (std::uint64_t picked = 0; picked < m; ++picked) {
      std::uint64_t j = picked + uniform_u64(rng, all.size() - picked);
      std::swap(all[picked], all[j]);
      chosen.push_back(all[picked]);
    }
  } else {
    if (static_cast<double>(m) > 0.5 * pairs)
      throw SpecError("density too high for rejection sampling at this n");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(m) * 2);
    while (chosen.size() < m) {
      std::uint64_t a = uniform_u64(rng, n);
      std::uint64_t b = uniform_u64(rng, n);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      std::uint64_t key = a * n + b;
      if (seen.insert(key).second) chosen.emplace_back(a, b);
    }
  }

  std::vector<NodeSpec> nodes;
  nodes.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) nodes.push_back({"node", static_cast<std::int64_t>(i)});
  std::vector<EdgeSpec> edges;
  edges.reserve(chosen.size());
  for (const auto& [a, b] : chosen) {
    edges.push_back({{"node", static_cast<std::int64_t>(a)},
                     "link",
                     {"node", static_cast<std::int64_t>(b)}});
  }
  const std::string node_vocab[] = {"node"};
  const std::string edge_vocab[] = {"link"};
  return HeteroGraph::build(nodes, edges, /*complete_nodes=*/true, node_vocab, edge_vocab);
}

namespace {

void count_paths_dfs(const Subgraph& g, LocalNode v, LocalNode t, std::int32_t depth,
                     std::int32_t l_cap, std::vector<bool>& visited, std::uint64_t& count) {
  if (v == t) {
    ++count;
    return;
  }
  if (l_cap >= 0 && depth >= l_cap) return;
  visited[v] = true;
  for (const auto& entry : g.incident(v)) {
    if (!visited[entry.neighbor])
      count_paths_dfs(g, entry.neighbor, t, depth + 1, l_cap, visited, count);
  }
  visited[v] = false;
}

}  // namespace

std::uint64_t count_paths_exact(const Subgraph& g, LocalNode s, LocalNode t,
                                std::int32_t l_cap) {
  if (g.num_nodes() > 14) throw SizeError("exact path counting is limited to n <= 14");
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw LookupError("node out of range");
  std::vector<bool> visited(g.num_nodes(), false);
  std::uint64_t count = 0;
  count_paths_dfs(g, s, t, 0, l_cap, visited, count);
  return count;
}

boost::multiprecision::cpp_int subgraph_count(std::uint64_t m) {
  return boost::multiprecision::cpp_int(1) << m;
}

double poisson_tail(std::int64_t k, double mu) {
  if (k <= 0) return 1.0;
  if (mu <= 0.0) return 0.0;
  // Upper-tail recurrence from the first term; avoids the cancellation of
  // 1 - sum(lower) when the tail is small.
  double log_term = static_cast<double>(k) * std::log(mu) - mu -
                    std::lgamma(static_cast<double>(k) + 1.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (std::int64_t i = k; i < k + 4096; ++i) {
    sum += term;
    term *= mu / static_cast<double>(i + 1);
    if (term < sum * 1e-18 && i > static_cast<std::int64_t>(mu)) break;
  }
  return std::min(sum, 1.0);
}

CoreFractions core_fraction_theory(std::uint64_t n, double density, std::int32_t k) {
  if (k < 2) throw InvalidArgumentError("core fraction theory needs k >= 2");
  if (n < 2) throw InvalidArgumentError("n must be >= 2");
  const double lambda = density * static_cast<double>(n);

  auto objective = [&](double mu) { return mu / poisson_tail(k - 1, mu); };

  // Golden-section search for the minimizer of mu / psi_{k-1}(mu). For k = 2
  // the infimum sits at the left boundary; the bracket handles both cases.
  double lo = 1e-9;
  double hi = std::max(30.0, 6.0 * static_cast<double>(k));
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double arg_min = 0.5 * (a + b);

  CoreFractions out;
  out.c_k = std::min(objective(arg_min), std::min(objective(lo), objective(hi)));
  if (lambda <= out.c_k) return out;  // Empty: below the emergence threshold

  // Larger root: objective is increasing right of the minimizer, so bisect
  // on [arg_min, hi_root] with hi_root = 2 * lambda (objective(mu) >= mu).
  double root_lo = arg_min;
  double root_hi = std::max(2.0 * lambda, arg_min + 1.0);
  if (objective(root_hi) < lambda) throw NumericalError("root bracket failed");
  for (int it = 0; it < 200 && (root_hi - root_lo) > 1e-13 * std::max(1.0, root_hi); ++it) {
    double mid = 0.5 * (root_lo + root_hi);
    if (objective(mid) < lambda)
      root_lo = mid;
    else
      root_hi = mid;
  }
  const double mu = 0.5 * (root_lo + root_hi);
  if (std::abs(objective(mu) - lambda) > 1e-8)
    throw NumericalError("k-core root finder did not converge to tolerance");

  out.nonempty = true;
  out.mu = mu;
  out.delta_v = poisson_tail(k, mu);
  out.delta_e = (mu * mu) /
                (density * density * static_cast<double>(n) * static_cast<double>(n - 1));
  return out;
}

TheoryReport verify_theory(const TheoryParams& params) {
  if (params.path_n_min < 3 || params.path_n_max > 14 || params.path_n_min > params.path_n_max)
    throw InvalidArgumentError("path n range must lie within [3, 14]");
  if (params.path_trials < 1) throw InvalidArgumentError("trials must be >= 1");

  TheoryReport report;
  report.params = params;

  std::uint64_t trial_counter = 0;
  for (std::uint32_t n = params.path_n_min; n <= params.path_n_max; ++n) {
    PathCountRow row;
    row.n = n;
    row.m = random_graph_edge_count(n, params.path_density);
    double total = 0.0;
    for (std::uint32_t trial = 0; trial < params.path_trials; ++trial) {
      HeteroGraph g = gen_random_graph(n, params.path_density,
                                       fnv1a_u64(params.seed, 0x7468656f72792031ULL) + trial_counter);
      ++trial_counter;
      Subgraph sub = Subgraph::whole(g);
      total += static_cast<double>(
          count_paths_exact(sub, 0, static_cast<LocalNode>(n - 1)));
    }
    row.z_empirical = total / static_cast<double>(params.path_trials);
    row.z_formula = std::tgamma(static_cast<double>(n) - 1.0) *
                    std::pow(params.path_density, static_cast<double>(n) - 1.0) *
                    std::exp(1.0);
    row.ratio = row.z_empirical / row.z_formula;
    row.log_z = row.z_empirical > 0 ? std::log(row.z_empirical)
                                    : -std::numeric_limits<double>::infinity();
    row.log_s = static_cast<double>(row.m) * std::log(2.0);
    row.log_ratio = row.log_z - row.log_s;
    report.paths.push_back(row);
  }

  CoreFractionRow core;
  core.n = params.core_n;
  core.density = params.avg_degree / static_cast<double>(params.core_n - 1);
  core.k = params.core_k;
  core.theory = core_fraction_theory(core.n, core.density, core.k);
  double sum_v = 0.0, sum_e = 0.0;
  for (std::uint32_t trial = 0; trial < params.core_trials; ++trial) {
    HeteroGraph g = gen_random_graph(core.n, core.density,
                                     fnv1a_u64(params.seed, 0x7468656f72792032ULL) + trial);
    Subgraph sub = Subgraph::whole(g);
    PrunedCore pruned = kcore_prune(sub, core.k, {});
    sum_v += static_cast<double>(pruned.sub.num_nodes()) / static_cast<double>(g.num_nodes());
    sum_e += static_cast<double>(pruned.sub.num_edges()) / static_cast<double>(g.num_edges());
  }
  core.empirical_v = sum_v / params.core_trials;
  core.empirical_e = sum_e / params.core_trials;
  report.core = core;
  return report;
}

std::string theory_report_tsv(const TheoryReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "# theory report seed=" << report.params.seed << "\n";
  out << "section\tpaths\n";
  out << "n\tm\tz_empirical\tz_formula\tratio\tlog_z\tlog_s\tlog_ratio\n";
  for (const auto& row : report.paths) {
    out << row.n << "\t" << row.m << "\t" << row.z_empirical << "\t" << row.z_formula << "\t"
        << row.ratio << "\t" << row.log_z << "\t" << row.log_s << "\t" << row.log_ratio << "\n";
  }
  const auto& core = report.core;
  out << "section\tcore\n";
  out << "n\tdensity\tk\tc_k\tmu\tdelta_v_theory\tdelta_e_theory\tdelta_v_emp\tdelta_e_emp\n";
  out << core.n << "\t" << core.density << "\t" << core.k << "\t" << core.theory.c_k << "\t";
  if (core.theory.nonempty)
    out << core.theory.mu << "\t" << core.theory.delta_v << "\t" << core.theory.delta_e;
  else
    out << "-\t0\t0";
  out << "\t" << core.empirical_v << "\t" << core.empirical_e << "\n";
  return out.str();
}

std::string theory_report_summary(const TheoryReport& report) {
  std::ostringstream out;
  out.precision(4);
  const auto& core = report.core;
  out << "path counts: n in [" << report.params.path_n_min << ", " << report.params.path_n_max
      << "], d = " << report.params.path_density << ", " << report.params.path_trials
      << " trials per n\n";
  bool decreasing = true;
  for (std::size_t i = 1; i < report.paths.size(); ++i)
    decreasing &= report.paths[i].log_ratio < report.paths[i - 1].log_ratio;
  out << "log(Z/S) series " << (decreasing ? "strictly decreasing" : "NOT monotone") << " ("
      << report.paths.front().log_ratio << " .. " << report.paths.back().log_ratio << ")\n";
  out << core.k << "-core of G(n=" << core.n << ", avg degree "
      << core.density * static_cast<double>(core.n - 1) << "): ";
  if (core.theory.nonempty) {
    out << "theory delta_v = " << core.theory.delta_v << ", delta_e = " << core.theory.delta_e
        << "; empirical " << core.empirical_v << " / " << core.empirical_e << "\n";
  } else {
    out << "below emergence threshold c_k = " << core.theory.c_k << " (core empty w.h.p.); "
        << "empirical " << core.empirical_v << " / " << core.empirical_e << "\n";
  }
  return out.str();
}

}  // namespace pagelink::theory
