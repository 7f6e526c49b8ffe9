#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "core/errors.hpp"
#include "core/graph.hpp"
#include "core/rng.hpp"
#include "core/subgraph.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace pagelink;
using pagelink::testing::simple_graph;
using pagelink::testing::toy_recommendation_graph;

TEST_CASE("triangle degrees are all 2") {
  HeteroGraph g = simple_graph({{0, 1}, {1, 2}, {2, 0}});
  for (NodeIndex v = 0; v < 3; ++v) CHECK(g.degree(v) == 2);
}

TEST_CASE("empty edge list gives all-zero degrees") {
  std::vector<NodeSpec> nodes = {{"n", 0}, {"n", 1}, {"n", 2}};
  HeteroGraph g = HeteroGraph::build(nodes, {});
  CHECK(g.num_edges() == 0);
  for (NodeIndex v = 0; v < 3; ++v) CHECK(g.degree(v) == 0);
}

TEST_CASE("toy recommendation graph degrees match a hand count") {
  HeteroGraph g = toy_recommendation_graph();
  CHECK(g.degree(g.node_index("user", 1)) == 2);
  CHECK(g.degree(g.node_index("user", 2)) == 2);
  CHECK(g.degree(g.node_index("item", 1)) == 2);
  CHECK(g.degree(g.node_index("item", 2)) == 2);
  CHECK(g.degree(g.node_index("item", 3)) == 2);
  CHECK(g.degree(g.node_index("attr", 1)) == 2);
}

TEST_CASE("star center degree and isolated node") {
  std::vector<NodeSpec> nodes = {{"n", 0}, {"n", 1}, {"n", 2}, {"n", 3},
                                 {"n", 4}, {"n", 5}, {"n", 99}};
  std::vector<EdgeSpec> edges;
  for (int leaf = 1; leaf <= 5; ++leaf) edges.push_back({{"n", 0}, "e", {"n", leaf}});
  HeteroGraph g = HeteroGraph::build(nodes, edges);
  CHECK(g.degree(g.node_index("n", 0)) == 5);
  CHECK(g.degree(g.node_index("n", 99)) == 0);
  CHECK_THROWS_AS((void)g.node_index("n", 42), LookupError);
  CHECK_THROWS_AS((void)g.node_index("ghost", 0), LookupError);
}

TEST_CASE("construction errors") {
  SUBCASE("dangling endpoint") {
    std::vector<NodeSpec> nodes = {{"n", 0}};
    std::vector<EdgeSpec> edges = {{{"n", 0}, "e", {"n", 7}}};
    CHECK_THROWS_AS(HeteroGraph::build(nodes, edges), ConstructionError);
  }
  SUBCASE("duplicate node id") {
    std::vector<NodeSpec> nodes = {{"n", 0}, {"n", 0}};
    CHECK_THROWS_AS(HeteroGraph::build(nodes, {}), ConstructionError);
  }
  SUBCASE("self loop") {
    std::vector<NodeSpec> nodes = {{"n", 0}};
    std::vector<EdgeSpec> edges = {{{"n", 0}, "e", {"n", 0}}};
    CHECK_THROWS_AS(HeteroGraph::build(nodes, edges), ConstructionError);
  }
  SUBCASE("type outside declared vocabulary") {
    std::vector<NodeSpec> nodes = {{"n", 0}, {"m", 1}};
    const std::string vocab[] = {"n"};
    CHECK_THROWS_AS(HeteroGraph::build(nodes, {}, true, vocab, {}), ConstructionError);
  }
}

TEST_CASE("duplicate edges collapse with a count") {
  std::vector<NodeSpec> nodes = {{"n", 0}, {"n", 1}};
  std::vector<EdgeSpec> edges = {{{"n", 0}, "e", {"n", 1}}, {{"n", 0}, "e", {"n", 1}}};
  std::size_t dups = 0;
  HeteroGraph g = HeteroGraph::build(nodes, edges, true, {}, {}, &dups);
  CHECK(g.num_edges() == 1);
  CHECK(dups == 1);
}

TEST_CASE("degree sum equals twice the edge count") {
  auto rng = make_rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<int, int>> edges;
    const int n = 4 + static_cast<int>(uniform_u64(rng, 12));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (bernoulli(rng, 0.3)) edges.emplace_back(a, b);
    HeteroGraph g = simple_graph(edges, n);
    std::uint64_t sum = 0;
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) sum += g.degree(v);
    CHECK(sum == 2 * g.num_edges());
  }
}

TEST_CASE("canonical indices are independent of input edge order") {
  std::vector<EdgeSpec> edges = {
      {{"user", 1}, "buys", {"item", 2}}, {{"user", 1}, "buys", {"item", 3}},
      {{"user", 2}, "buys", {"item", 3}}, {{"item", 2}, "has", {"attr", 1}},
  };
  std::vector<NodeSpec> nodes = {{"user", 1}, {"user", 2}, {"item", 2}, {"item", 3}, {"attr", 1}};
  const std::string nvocab[] = {"user", "item", "attr"};
  const std::string evocab[] = {"buys", "has"};
  HeteroGraph a = HeteroGraph::build(nodes, edges, true, nvocab, evocab);
  std::reverse(edges.begin(), edges.end());
  std::reverse(nodes.begin(), nodes.end());
  HeteroGraph b = HeteroGraph::build(nodes, edges, true, nvocab, evocab);
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.schema_hash() == b.schema_hash());
}

TEST_CASE("computation graph on a path with L=1") {
  // s - a - b - c - t as a chain 0-1-2-3-4
  HeteroGraph g = simple_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  ComputationGraph cg = extract_computation_graph(g, 0, 4, 1);
  std::vector<NodeIndex> expect = {0, 1, 3, 4};
  CHECK(cg.sub.parent_nodes() == expect);
  CHECK(cg.sub.num_edges() == 2);  // 0-1 and 3-4 only; 1-2, 2-3 are not induced
}

TEST_CASE("computation graph saturates at the diameter") {
  HeteroGraph g = simple_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  ComputationGraph cg = extract_computation_graph(g, 0, 4, 10);
  CHECK(cg.sub.num_nodes() == g.num_nodes());
  CHECK(cg.sub.num_edges() == g.num_edges());
}

TEST_CASE("computation graph invariants hold against a BFS oracle") {
  auto rng = make_rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::pair<int, int>> edges;
    const int n = 6 + static_cast<int>(uniform_u64(rng, 10));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (bernoulli(rng, 0.25)) edges.emplace_back(a, b);
    HeteroGraph g = simple_graph(edges, n);
    const auto s = static_cast<NodeIndex>(uniform_u64(rng, n));
    auto t = static_cast<NodeIndex>(uniform_u64(rng, n));
    if (t == s) t = (t + 1) % n;
    const int hops = 1 + static_cast<int>(uniform_u64(rng, 3));
    ComputationGraph cg = extract_computation_graph(g, s, t, hops);

    Subgraph whole = Subgraph::whole(g);
    const auto from_s = oracle::bfs_oracle(whole, s);
    const auto from_t = oracle::bfs_oracle(whole, t);
    // membership is exactly the <= hops condition
    for (NodeIndex v = 0; v < g.num_nodes(); ++v) {
      const bool in = cg.sub.contains_node(v);
      const bool should = (from_s[v] >= 0 && from_s[v] <= hops) ||
                          (from_t[v] >= 0 && from_t[v] <= hops);
      CHECK(in == should);
    }
    // edge set is induced
    std::size_t induced = 0;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      const auto& rec = g.edge(e);
      if (cg.sub.contains_node(rec.src) && cg.sub.contains_node(rec.dst)) ++induced;
    }
    CHECK(cg.sub.num_edges() == induced);
    CHECK(cg.sub.contains_node(s));
    CHECK(cg.sub.contains_node(t));
  }
}

TEST_CASE("extraction validates its endpoints") {
  HeteroGraph g = simple_graph({{0, 1}});
  CHECK_THROWS_AS(extract_computation_graph(g, 0, 0, 2), InvalidArgumentError);
  CHECK_THROWS_AS(extract_computation_graph(g, 0, 1, 0), InvalidArgumentError);
  CHECK_THROWS_AS(extract_computation_graph(g, 0, 99, 2), LookupError);
}

TEST_CASE("tsv round trip preserves the canonical form") {
  HeteroGraph g = toy_recommendation_graph();
  std::ostringstream edges_out, nodes_out;
  g.write_tsv(edges_out, nodes_out, "round trip seed=0");
  std::istringstream edges_in(edges_out.str()), nodes_in(nodes_out.str());
  HeteroGraph back = HeteroGraph::read_tsv(edges_in, &nodes_in);
  CHECK(back.content_hash() == g.content_hash());
  CHECK(back.num_nodes() == g.num_nodes());
  CHECK(back.num_edges() == g.num_edges());
}

TEST_CASE("tsv parser reports the offending line") {
  std::istringstream edges_in("user\t1\tbuys\titem\n");  // 4 fields
  try {
    HeteroGraph::read_tsv(edges_in, nullptr);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}

TEST_CASE("node labels parse and print") {
  HeteroGraph g = toy_recommendation_graph();
  const NodeIndex v = g.node_index("item", 2);
  CHECK(g.node_label(v) == "item:2");
  CHECK(g.parse_node_label("item:2") == v);
  CHECK_THROWS_AS(g.parse_node_label("item"), ParseError);
  CHECK_THROWS_AS(g.parse_node_label("item:x"), ParseError);
  CHECK_THROWS_AS(g.parse_node_label("item:9"), LookupError);
}
