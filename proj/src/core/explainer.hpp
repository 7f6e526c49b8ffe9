#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/kcore.hpp"
#include "core/model.hpp"
#include "core/subgraph.hpp"

namespace pagelink {

struct ExplainerConfig {
  double alpha = 1.0;         // pull on candidate-path edges
  double beta = 0.2;          // push on all other edges
  double eta = 0.05;          // mask learning rate
  std::int32_t max_iterations = 100;
  std::int32_t k = 2;         // core parameter; falls back toward 1 when the
                              // k-core disconnects the pair
  std::int32_t budget = 15;   // B, maximum explanation edges
  std::int32_t l_max = 3;     // maximum path length in hops
  std::uint32_t degree_cap = 0;  // optional high-degree removal; 0 disables
  std::int32_t k_paths = 5;   // candidate paths per search
  double tolerance = 1e-4;    // convergence threshold on max logit change
  double lambda_entropy = 0.1;
  double lambda_norm = 0.01;
  bool degree_from_core = true;  // path-score degree from core vs full graph
  std::uint64_t seed = 0;

  void validate() const;
};

struct Path {
  std::vector<NodeIndex> nodes;   // parent node ids, source first
  std::vector<EdgeIndex> edges;   // parent edge ids, undirected traversal
  std::vector<TypeId> edge_types;
  double score = 0.0;             // sum of edge scores, always <= 0
  std::size_t length() const { return edges.size(); }
};

// Total order used everywhere paths are ranked: score descending (distance
// ascending), then fewer hops, then lexicographic node sequence, then
// lexicographic edge-id sequence.
bool path_less(const Path& a, const Path& b);

struct Explanation {
  NodeIndex source = kInvalidNode;
  NodeIndex target = kInvalidNode;
  std::vector<Path> paths;  // best first; |paths| * l_max <= budget
  std::int32_t budget = 0;
  std::int32_t budget_consumed = 0;
  std::int32_t l_max = 0;
  std::int32_t core_k = 0;   // k actually used after any fallback
  double prediction = 0.0;   // model probability on the unmasked message graph
  EdgeMaskSet mask;          // final mask snapshot over core edges
  std::vector<EdgeIndex> core_edges;  // parent ids aligned with mask.logits
  std::int32_t iterations = 0;
  std::vector<std::string> warnings;
};

// log(sigmoid(logit)) - log(degree); <= 0, so its negation is a valid
// nonnegative shortest-path distance. Throws DegreeError when degree is 0.
double edge_score(double mask_logit, std::uint32_t target_degree);

// The k best loopless s-t paths by total edge score (fewer when fewer exist),
// each within l_max hops: Yen's algorithm with a hop-bounded Dijkstra inner
// search over distance -Score(e). Deterministic tie order per path_less.
// Throws NoPathError when s and t are disconnected (no qualifying path).
std::vector<Path> top_k_paths(const Subgraph& core, const EdgeMaskSet& mask, NodeIndex source,
                              NodeIndex target, std::int32_t k_paths, std::int32_t l_max,
                              bool degree_from_core = true);

// Gradient descent on prediction loss + path loss, recomputing the candidate
// edge set from the current mask every iteration. alpha = beta = 0 skips the
// path machinery entirely and reduces to plain mask learning.
EdgeMaskSet learn_mask(const PrunedCore& core, const ModelParams& params,
                       const ExplainerConfig& cfg);

// Final path generation from a learned mask, keeping paths in score order
// while |P| * l_max stays within the budget.
Explanation extract_explanation(const PrunedCore& core, const EdgeMaskSet& mask,
                                const ExplainerConfig& cfg);

// The graph a single explanation sees: the model's message graph minus any
// direct target-type edge between the pair (the link under explanation must
// not explain itself).
Subgraph explanation_message_graph(const HeteroGraph& graph, const ModelParams& params,
                                   NodeIndex source, NodeIndex target);

// Full pipeline: computation graph -> optional high-degree removal -> k-core
// (with connectivity fallback on k) -> mask learning -> path extraction.
Explanation explain(const HeteroGraph& graph, const ModelParams& params, NodeIndex source,
                    NodeIndex target, const ExplainerConfig& cfg);

std::string explanation_to_json(const Explanation& explanation, const HeteroGraph& graph);
Explanation explanation_from_json(const std::string& text, const HeteroGraph& graph);

}  // namespace pagelink
