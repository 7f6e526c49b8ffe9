#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "core/explainer.hpp"
#include "core/model.hpp"

namespace pagelink {

// Plain mask learning on the full computation graph: prediction loss with
// entropy/norm regularizers only. Identical to learn_mask with alpha = beta
// = 0 (same code path); the caller passes the unpruned graph wrapped as a
// core, since this baseline does not prune.
EdgeMaskSet gnnexp_link(const PrunedCore& cg, const ModelParams& params,
                        const ExplainerConfig& cfg);

inline PrunedCore as_unpruned_core(const ComputationGraph& cg) {
  PrunedCore core;
  core.sub = cg.sub;
  core.k = 0;
  core.source_parent = cg.source_parent;
  core.target_parent = cg.target_parent;
  return core;
}

// Shared mask predictor: per edge type, a one-hidden-layer MLP from the
// concatenated endpoint representations (2H) to one logit.
struct PredictorParams {
  struct TypeMlp {
    Eigen::MatrixXd w1;  // hidden x 2H
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;  // hidden
    double b2 = 0.0;
  };
  std::int32_t hidden = 0;
  std::int32_t input_dim = 0;
  std::vector<TypeMlp> per_type;
  std::uint64_t schema_hash = 0;
  std::uint64_t graph_hash = 0;
  std::string target_edge_type;

  void check_finite() const;
};

PredictorParams init_predictor(const HeteroGraph& graph, const ModelParams& model,
                               std::uint64_t seed);

struct PgTrainConfig {
  std::int32_t epochs = 15;
  double learning_rate = 0.01;
  double lambda_entropy = 0.1;
  double lambda_norm = 0.01;
  std::uint64_t seed = 0;
};

// Trains the predictor on the prediction loss across the given links; the
// encoder stays frozen. Requires >= 10 training pairs.
PredictorParams pgexp_link_train(const HeteroGraph& graph, const ModelParams& model,
                                 std::span<const std::pair<NodeIndex, NodeIndex>> pairs,
                                 const PgTrainConfig& cfg);

// One pass over the graph's edges; node_repr rows are indexed by parent node
// id (the message graph keeps every node, so local ids equal parent ids).
EdgeMaskSet pgexp_link_infer(const Subgraph& cg, const PredictorParams& predictor,
                             const Eigen::MatrixXd& node_repr);

void save_predictor(const PredictorParams& predictor, const HeteroGraph& graph,
                    const std::string& path);
PredictorParams load_predictor(const std::string& path, const HeteroGraph& graph);

}  // namespace pagelink
