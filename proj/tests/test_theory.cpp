#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/kcore.hpp"
#include "core/theory.hpp"
#include "helpers.hpp"

using namespace pagelink;
using pagelink::testing::simple_graph;

namespace {

HeteroGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return simple_graph(edges, n);
}

// Simple s-t paths of K_n: sum over j interior nodes of (n-2)! / (n-2-j)!.
std::uint64_t kn_closed_form(int n) {
  std::uint64_t total = 0;
  for (int j = 0; j <= n - 2; ++j) {
    std::uint64_t term = 1;
    for (int i = 0; i < j; ++i) term *= static_cast<std::uint64_t>(n - 2 - i);
    total += term;
  }
  return total;
}

}  // namespace

TEST_CASE("exact path counts on small fixtures") {
  SUBCASE("K4 has 5 simple s-t paths") {
    Subgraph g = Subgraph::whole(complete_graph(4));
    CHECK(theory::count_paths_exact(g, 0, 3) == 5);
  }
  SUBCASE("disconnected pair has none") {
    HeteroGraph g = simple_graph({{0, 1}}, 4);
    CHECK(theory::count_paths_exact(Subgraph::whole(g), 0, 3) == 0);
  }
  SUBCASE("path graph has exactly one") {
    HeteroGraph g = simple_graph({{0, 1}, {1, 2}, {2, 3}});
    CHECK(theory::count_paths_exact(Subgraph::whole(g), 0, 3) == 1);
  }
  SUBCASE("hop cap filters long paths") {
    Subgraph g = Subgraph::whole(complete_graph(4));
    CHECK(theory::count_paths_exact(g, 0, 3, 1) == 1);
    CHECK(theory::count_paths_exact(g, 0, 3, 2) == 3);
  }
  SUBCASE("size guard") {
    Subgraph g = Subgraph::whole(complete_graph(15));
    CHECK_THROWS_AS(theory::count_paths_exact(g, 0, 14), SizeError);
  }
}

TEST_CASE("complete-graph path counts match the closed form") {
  for (int n = 3; n <= 10; ++n) {
    Subgraph g = Subgraph::whole(complete_graph(n));
    CHECK(theory::count_paths_exact(g, 0, static_cast<LocalNode>(n - 1)) == kn_closed_form(n));
  }
  CHECK(kn_closed_form(6) == 65);
}

TEST_CASE("subgraph counts are exact powers of two") {
  CHECK(theory::subgraph_count(6) == 64);
  CHECK(theory::subgraph_count(0) == 1);
  CHECK(theory::subgraph_count(20) == 1048576);
  // beyond 64 bits
  const auto big = theory::subgraph_count(100);
  CHECK(big == boost::multiprecision::pow(boost::multiprecision::cpp_int(2), 100));
}

TEST_CASE("poisson tail") {
  SUBCASE("k = 0 is certain") { CHECK(theory::poisson_tail(0, 3.0) == 1.0); }
  SUBCASE("closed form for k = 2") {
    for (double mu : {0.5, 1.0, 3.0, 10.0, 40.0}) {
      const double expect = 1.0 - std::exp(-mu) - mu * std::exp(-mu);
      CHECK(theory::poisson_tail(2, mu) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  SUBCASE("tiny tails stay accurate") {
    // P(Po(1) >= 20) ~ 1e-19; a 1 - sum implementation would return garbage
    const double tail = theory::poisson_tail(20, 1.0);
    CHECK(tail > 0);
    CHECK(tail < 1e-18);
  }
}

TEST_CASE("core fraction theory") {
  SUBCASE("average degree 7, k = 5 lands near 0.69") {
    const std::uint64_t n = 10000;
    const double d = 7.0 / static_cast<double>(n - 1);
    const auto out = theory::core_fraction_theory(n, d, 5);
    REQUIRE(out.nonempty);
    CHECK(out.delta_v == doctest::Approx(0.69).epsilon(0.02));
    CHECK(out.delta_e == doctest::Approx(0.69).epsilon(0.02));
    // the root actually solves mu / psi_{k-1}(mu) = dn
    const double lambda = d * static_cast<double>(n);
    CHECK(std::abs(out.mu / theory::poisson_tail(4, out.mu) - lambda) < 1e-8);
  }
  SUBCASE("below the threshold the core is empty") {
    const std::uint64_t n = 10000;
    const double d = 2.0 / static_cast<double>(n - 1);  // dn ~ 2 << c_5
    const auto out = theory::core_fraction_theory(n, d, 5);
    CHECK_FALSE(out.nonempty);
    CHECK(out.c_k > 2.0);
  }
  SUBCASE("k = 2 matches the closed-form tail at the root") {
    const std::uint64_t n = 5000;
    const double d = 6.0 / static_cast<double>(n - 1);
    const auto out = theory::core_fraction_theory(n, d, 2);
    REQUIRE(out.nonempty);
    const double expect = 1.0 - std::exp(-out.mu) - out.mu * std::exp(-out.mu);
    CHECK(out.delta_v == doctest::Approx(expect).epsilon(1e-6));
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(theory::core_fraction_theory(100, 0.1, 1), InvalidArgumentError);
  }
}

TEST_CASE("random graph generator") {
  SUBCASE("density 1 is the complete graph") {
    HeteroGraph g = theory::gen_random_graph(6, 1.0, 3);
    CHECK(g.num_edges() == 15);
  }
  SUBCASE("edge count is exact for every seed") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      HeteroGraph g = theory::gen_random_graph(10, 0.3, seed);
      CHECK(g.num_edges() == theory::random_graph_edge_count(10, 0.3));
      CHECK(g.num_nodes() == 10);
    }
  }
  SUBCASE("deterministic per seed") {
    HeteroGraph a = theory::gen_random_graph(20, 0.2, 5);
    HeteroGraph b = theory::gen_random_graph(20, 0.2, 5);
    CHECK(a.content_hash() == b.content_hash());
    HeteroGraph c = theory::gen_random_graph(20, 0.2, 6);
    CHECK(a.content_hash() != c.content_hash());
  }
  SUBCASE("invalid densities are rejected") {
    CHECK_THROWS_AS(theory::gen_random_graph(10, 0.0, 1), SpecError);
    CHECK_THROWS_AS(theory::gen_random_graph(10, 1.5, 1), SpecError);
    CHECK_THROWS_AS(theory::gen_random_graph(1, 0.5, 1), SpecError);
  }
}

TEST_CASE("verify_theory smoke run") {
  theory::TheoryParams params;
  params.path_n_min = 6;
  params.path_n_max = 8;
  params.path_trials = 40;
  params.core_n = 2000;
  params.avg_degree = 7.0;
  params.core_k = 5;
  params.core_trials = 1;
  params.seed = 9;
  const auto report = theory::verify_theory(params);
  REQUIRE(report.paths.size() == 3);
  for (const auto& row : report.paths) {
    CHECK(row.z_formula > 0);
    CHECK(row.log_s > 0);
  }
  CHECK(report.core.empirical_v > 0.4);
  CHECK(report.core.empirical_v < 1.0);
  const std::string tsv = theory::theory_report_tsv(report);
  CHECK(tsv.find("section\tpaths") != std::string::npos);
  CHECK(tsv.find("section\tcore") != std::string::npos);
}

TEST_CASE("K6 at density 1 counts 65 paths in every trial") {
  theory::TheoryParams params;
  params.path_n_min = 6;
  params.path_n_max = 6;
  params.path_density = 1.0;
  params.path_trials = 3;
  params.core_n = 500;
  params.avg_degree = 7.0;
  params.core_k = 5;
  params.core_trials = 1;
  const auto report = theory::verify_theory(params);
  CHECK(report.paths.front().z_empirical == 65.0);
}
