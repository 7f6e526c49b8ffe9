#include <doctest.h>

#include <algorithm>

#include "core/errors.hpp"
#include "core/kcore.hpp"
#include "core/rng.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace pagelink;
using pagelink::testing::simple_graph;

namespace {

// Two-hop ego-graph fixture around (u1, i1): attributes a21/a22 are leaves
// and i5 becomes a leaf once a22 falls, so the 2-core drops exactly those
// three nodes over two peeling rounds.
HeteroGraph ego_fixture() {
  std::vector<NodeSpec> nodes = {{"user", 1},  {"user", 2},  {"item", 1}, {"item", 2},
                                 {"item", 3},  {"item", 5},  {"attr1", 1}, {"attr1", 2},
                                 {"attr2", 1}, {"attr2", 2}};
  std::vector<EdgeSpec> edges = {
      {{"user", 1}, "buys", {"item", 2}},  {{"user", 1}, "buys", {"item", 3}},
      {{"user", 2}, "buys", {"item", 3}},  {{"user", 2}, "buys", {"item", 1}},
      {{"user", 2}, "buys", {"item", 5}},  {{"item", 1}, "has", {"attr1", 1}},
      {{"item", 2}, "has", {"attr1", 1}},  {{"item", 1}, "has", {"attr1", 2}},
      {{"item", 2}, "has", {"attr1", 2}},  {{"item", 3}, "has", {"attr1", 2}},
      {{"item", 1}, "has", {"attr2", 1}},  {{"item", 5}, "has", {"attr2", 2}},
  };
  return HeteroGraph::build(nodes, edges);
}

HeteroGraph random_graph(std::mt19937_64& rng, int max_nodes, double p) {
  const int n = 3 + static_cast<int>(uniform_u64(rng, max_nodes - 2));
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (bernoulli(rng, p)) edges.emplace_back(a, b);
  return simple_graph(edges, n);
}

std::vector<NodeIndex> core_nodes(const PrunedCore& core) {
  return core.sub.parent_nodes();
}

}  // namespace

TEST_CASE("two-hop ego fixture: 2-core prunes i5, a21, a22 recursively") {
  HeteroGraph g = ego_fixture();
  ComputationGraph cg = extract_computation_graph(g, g.node_index("user", 1),
                                                  g.node_index("item", 1), 2);
  CHECK(cg.sub.num_nodes() == g.num_nodes());  // fixture is already the ego-graph
  PrunedCore core = kcore_prune(cg, 2);

  CHECK_FALSE(core.sub.contains_node(g.node_index("item", 5)));
  CHECK_FALSE(core.sub.contains_node(g.node_index("attr2", 1)));
  CHECK_FALSE(core.sub.contains_node(g.node_index("attr2", 2)));
  CHECK(core.sub.num_nodes() == g.num_nodes() - 3);
  CHECK(core.shell.size() == 3);

  // leaves fall in round 1, i5 only after a22 is gone
  for (const auto& rec : core.shell) {
    if (rec.node == g.node_index("item", 5))
      CHECK(rec.round == 2);
    else
      CHECK(rec.round == 1);
  }
}

TEST_CASE("K4 is already a 3-core") {
  HeteroGraph g = simple_graph({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  Subgraph whole = Subgraph::whole(g);
  const std::vector<NodeIndex> prot = {0, 2};
  PrunedCore core = kcore_prune(whole, 3, prot);
  CHECK(core.sub.num_nodes() == 4);
  CHECK(core.sub.num_edges() == 6);
  CHECK(core.shell.empty());
}

TEST_CASE("protected endpoints keep sustaining a chain between them") {
  // 0-1-2-3 with 0 and 3 protected: every interior node keeps degree 2
  // because protected neighbors still count, so the 2-core is the whole path
  // (this is what the brute-force maximal-subgraph oracle demands).
  HeteroGraph g = simple_graph({{0, 1}, {1, 2}, {2, 3}});
  Subgraph whole = Subgraph::whole(g);
  const std::vector<NodeIndex> prot = {0, 3};
  PrunedCore core = kcore_prune(whole, 2, prot);
  CHECK(core_nodes(core) == oracle::brute_force_core(whole, 2, prot));
  CHECK(core.sub.num_nodes() == 4);

  // a dangling branch off the chain does peel away leaf by leaf
  HeteroGraph g2 = simple_graph({{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}});
  Subgraph whole2 = Subgraph::whole(g2);
  PrunedCore core2 = kcore_prune(whole2, 2, prot);
  CHECK(core_nodes(core2) == std::vector<NodeIndex>{0, 1, 2, 3});
  CHECK(core2.shell.size() == 2);
  for (const auto& rec : core2.shell)
    CHECK(rec.round == (rec.node == 5 ? 1 : 2));
}

TEST_CASE("k-core matches the brute-force maximal subgraph oracle") {
  auto rng = make_rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    HeteroGraph g = random_graph(rng, 8, 0.4);
    Subgraph whole = Subgraph::whole(g);
    NodeIndex s = static_cast<NodeIndex>(uniform_u64(rng, g.num_nodes()));
    NodeIndex t = static_cast<NodeIndex>(uniform_u64(rng, g.num_nodes()));
    if (t == s) t = (t + 1) % g.num_nodes();
    const std::vector<NodeIndex> prot = {s, t};
    for (std::int32_t k : {2, 3}) {
      PrunedCore core = kcore_prune(whole, k, prot);
      CHECK(core_nodes(core) == oracle::brute_force_core(whole, k, prot));
    }
  }
}

TEST_CASE("k-core is idempotent and monotone in k") {
  auto rng = make_rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    HeteroGraph g = random_graph(rng, 12, 0.3);
    Subgraph whole = Subgraph::whole(g);
    NodeIndex s = 0, t = static_cast<NodeIndex>(g.num_nodes() - 1);
    const std::vector<NodeIndex> prot = {s, t};
    PrunedCore k2 = kcore_prune(whole, 2, prot);
    PrunedCore k2_again = kcore_prune(k2.sub, 2, prot);
    CHECK(core_nodes(k2_again) == core_nodes(k2));
    CHECK(k2_again.sub.num_edges() == k2.sub.num_edges());

    PrunedCore k3 = kcore_prune(whole, 3, prot);
    for (NodeIndex v : core_nodes(k3)) CHECK(k2.sub.contains_node(v));
  }
}

TEST_CASE("empty-but-for-protected core is a valid result") {
  HeteroGraph g = simple_graph({{0, 1}, {1, 2}});
  Subgraph whole = Subgraph::whole(g);
  const std::vector<NodeIndex> prot = {0, 2};
  PrunedCore core = kcore_prune(whole, 5, prot);
  CHECK(core_nodes(core) == std::vector<NodeIndex>{0, 2});
}

TEST_CASE("high-degree removal") {
  SUBCASE("cap above the max degree is the identity") {
    HeteroGraph g = simple_graph({{0, 1}, {0, 2}, {0, 3}});
    Subgraph whole = Subgraph::whole(g);
    Subgraph out = remove_high_degree(whole, 3, {});
    CHECK(out.num_nodes() == g.num_nodes());
    CHECK(out.num_edges() == g.num_edges());
  }
  SUBCASE("star center above the cap is removed with its edges") {
    HeteroGraph g = simple_graph({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
    Subgraph whole = Subgraph::whole(g);
    const std::vector<NodeIndex> prot = {1, 2};
    Subgraph out = remove_high_degree(whole, 4, prot);
    CHECK_FALSE(out.contains_node(0));
    CHECK(out.num_nodes() == 5);
    CHECK(out.num_edges() == 0);
  }
  SUBCASE("protected hub survives") {
    HeteroGraph g = simple_graph({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
    Subgraph whole = Subgraph::whole(g);
    const std::vector<NodeIndex> prot = {0, 1};
    Subgraph out = remove_high_degree(whole, 4, prot);
    CHECK(out.contains_node(0));
    CHECK(out.num_edges() == 5);
  }
  SUBCASE("hub attribute connected to every item falls under the cap") {
    // items 1..6 all share attribute 0; a second attribute 7 connects 1 and 2
    HeteroGraph g = simple_graph(
        {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {7, 1}, {7, 2}});
    Subgraph whole = Subgraph::whole(g);
    const std::vector<NodeIndex> prot = {1, 2};
    Subgraph out = remove_high_degree(whole, 4, prot);
    CHECK_FALSE(out.contains_node(0));
    CHECK(out.contains_node(7));
  }
}

TEST_CASE("protected nodes must exist") {
  HeteroGraph g = simple_graph({{0, 1}});
  ComputationGraph cg = extract_computation_graph(g, 0, 1, 1);
  const std::vector<NodeIndex> bogus = {static_cast<NodeIndex>(99)};
  CHECK_THROWS_AS(kcore_prune(cg.sub, 2, bogus), LookupError);
  CHECK_THROWS_AS(kcore_prune(cg.sub, 0, bogus), InvalidArgumentError);
}
