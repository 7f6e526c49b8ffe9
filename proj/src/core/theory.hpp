#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/subgraph.hpp"

namespace pagelink::theory {

// G(n, m) with m = round(d * C(n, 2)) distinct edges sampled uniformly
// without replacement; one node type, one edge type.
HeteroGraph gen_random_graph(std::uint64_t n, double density, std::uint64_t seed);

std::uint64_t random_graph_edge_count(std::uint64_t n, double density);

// Exact number of simple s-t paths (DFS with backtracking); guards n <= 14.
// l_cap < 0 means unbounded.
std::uint64_t count_paths_exact(const Subgraph& g, LocalNode s, LocalNode t,
                                std::int32_t l_cap = -1);

// Number of edge-induced subgraphs, i.e. 2^m exactly.
boost::multiprecision::cpp_int subgraph_count(std::uint64_t m);

// P(Po(mu) >= k), summed over the upper tail for stability at both ends.
double poisson_tail(std::int64_t k, double mu);

struct CoreFractions {
  bool nonempty = false;  // false when d*n <= c_k (core vanishes w.h.p.)
  double c_k = 0.0;       // inf_mu mu / psi_{k-1}(mu)
  double mu = 0.0;        // larger root of mu / psi_{k-1}(mu) = d*n
  double delta_v = 0.0;   // psi_k(mu)
  double delta_e = 0.0;   // mu^2 / (d^2 n (n-1))
};

CoreFractions core_fraction_theory(std::uint64_t n, double density, std::int32_t k);

struct PathCountRow {
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  double z_empirical = 0.0;  // mean exact path count over trials
  double z_formula = 0.0;    // (n-2)! d^(n-1) e
  double ratio = 0.0;        // z_empirical / z_formula
  double log_z = 0.0;
  double log_s = 0.0;        // m ln 2
  double log_ratio = 0.0;    // ln(Z/S)
};

struct CoreFractionRow {
  std::uint64_t n = 0;
  double density = 0.0;
  std::int32_t k = 0;
  CoreFractions theory;
  double empirical_v = 0.0;  // mean |V^k| / n over trials
  double empirical_e = 0.0;  // mean |E^k| / m over trials
};

struct TheoryParams {
  std::uint32_t path_n_min = 6;
  std::uint32_t path_n_max = 12;
  double path_density = 0.5;
  std::uint32_t path_trials = 300;
  std::uint64_t core_n = 10000;
  double avg_degree = 7.0;  // density derived as avg_degree / (n - 1)
  std::int32_t core_k = 5;
  std::uint32_t core_trials = 3;
  std::uint64_t seed = 0;
};

struct TheoryReport {
  TheoryParams params;
  std::vector<PathCountRow> paths;
  CoreFractionRow core;
};

TheoryReport verify_theory(const TheoryParams& params);

std::string theory_report_tsv(const TheoryReport& report);
std::string theory_report_summary(const TheoryReport& report);

}  // namespace pagelink::theory
