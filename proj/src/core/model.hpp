#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/subgraph.hpp"

namespace pagelink {

// Weighted-mean aggregation denominator guard: sum of edge weights plus this
// constant, so a fully masked-out group contributes a vanishing message while
// the identity mask reproduces plain mean aggregation.
inline constexpr double kAggregationEpsilon = 1e-6;

enum class EmbeddingMode : std::uint32_t { PerNode = 0, PerType = 1 };

// Learnable logits over a subgraph's edges, one span per edge type, in the
// subgraph's canonical per-type edge order.
struct EdgeMaskSet {
  std::vector<double> logits;             // flat over local edges, type-grouped
  std::vector<LocalEdge> type_offsets;    // copy of the subgraph's offsets
  std::int32_t iterations = 0;

  static EdgeMaskSet zeros(const Subgraph& g);
  std::span<const double> for_type(TypeId r) const {
    return {logits.data() + type_offsets[r], logits.data() + type_offsets[r + 1]};
  }
  std::size_t size() const { return logits.size(); }
};

void check_mask_alignment(const Subgraph& g, const EdgeMaskSet& mask);

struct SplitRecord {
  std::vector<EdgeIndex> train;
  std::vector<EdgeIndex> val;
  std::vector<EdgeIndex> test;
};

// Relational message-passing encoder with an inner-product head. Inputs are
// learned embeddings (per node by default); each edge type gets forward and
// reverse weight matrices per layer plus a shared self-loop matrix.
struct ModelParams {
  std::int32_t layers = 0;
  std::int32_t hidden = 0;
  EmbeddingMode embedding = EmbeddingMode::PerNode;
  std::vector<Eigen::MatrixXd> self_weights;              // layers of H x H
  std::vector<std::vector<Eigen::MatrixXd>> rel_weights;  // layers x (2R) of H x H
  Eigen::MatrixXd embeddings;  // |V| x H (PerNode) or |A| x H (PerType)

  std::uint64_t schema_hash = 0;
  std::uint64_t graph_hash = 0;
  std::string target_edge_type;
  SplitRecord split;
  double test_auc = -1.0;  // < 0 until trained

  std::size_t num_relations() const {
    return layers > 0 ? rel_weights.front().size() / 2 : 0;
  }
  void check_finite() const;  // NumericalError on NaN/Inf
};

// Zero-mean weights scaled by 1 / sqrt(hidden); deterministic per seed.
// `edge_types`, when non-empty, must all exist in the graph (SchemaError).
ModelParams init_model(const HeteroGraph& graph, std::int32_t layers, std::int32_t hidden,
                       std::uint64_t seed, EmbeddingMode mode = EmbeddingMode::PerNode,
                       std::span<const std::string> edge_types = {});

// Directed message entries of a subgraph grouped by (destination, relation);
// relation r < R is the stored edge direction, r + R the reverse.
class MessagePlan {
 public:
  struct Entry {
    LocalNode src = 0;
    LocalEdge edge = 0;  // mask index; both directions share the edge's logit
  };
  struct Group {
    LocalNode dst = 0;
    TypeId rel = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  static MessagePlan build(const Subgraph& g);

  const std::vector<Group>& groups() const { return groups_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Group> groups_;
  std::vector<Entry> entries_;
};

// Node representations after all layers (rows aligned with local node ids).
Eigen::MatrixXd encode_nodes(const Subgraph& g, const MessagePlan& plan,
                             const ModelParams& params, const EdgeMaskSet* mask);

// P(Y=1) = logistic(h_s . h_t); strictly inside (0, 1).
double predict_pair(const Subgraph& g, const MessagePlan& plan, const ModelParams& params,
                    const EdgeMaskSet* mask, LocalNode s, LocalNode t);
double predict_pair(const Subgraph& g, const ModelParams& params, const EdgeMaskSet* mask,
                    LocalNode s, LocalNode t);

struct MaskLossTerms {
  double total = 0.0;
  double prediction = 0.0;  // -log P(Y=1 | masked graph)
  double entropy = 0.0;
  double norm = 0.0;
  double probability = 0.0;  // P(Y=1 | masked graph)
};

// Loss of Alg.-style mask optimization and its exact gradient with respect to
// every mask logit; model parameters are treated as constants. grad_out must
// have mask.size() elements and is overwritten.
MaskLossTerms loss_and_mask_grad(const Subgraph& core, const MessagePlan& plan,
                                 const ModelParams& params, const EdgeMaskSet& mask,
                                 LocalNode s, LocalNode t, double lambda_entropy,
                                 double lambda_norm, std::span<double> grad_out);

struct TrainConfig {
  std::int32_t layers = 2;
  std::int32_t hidden = 16;
  std::int32_t epochs = 150;
  double learning_rate = 0.05;
  double negative_ratio = 1.0;  // negatives per positive, >= 1
  double train_fraction = 0.7;
  double val_fraction = 0.1;
  double test_fraction = 0.2;
  EmbeddingMode embedding = EmbeddingMode::PerNode;
  std::uint64_t seed = 0;

  void validate() const;  // ConfigError on bad fractions / ratio
};

struct TrainResult {
  ModelParams params;
  double test_auc = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_history;
};

// Splits target-type edges 7:1:2 (by cfg), trains with cross-entropy against
// uniformly sampled negatives of the target node type, and scores held-out
// test edges with val/test edges absent from message passing throughout.
TrainResult train_link_predictor(const HeteroGraph& graph, const std::string& target_edge_type,
                                 const TrainConfig& cfg);

// The message-passing graph a trained model expects: all edges except the
// target-type validation and test edges recorded in the split.
Subgraph message_graph(const HeteroGraph& graph, const ModelParams& params);

// Checkpoint container, shared with the mask-predictor baseline via the
// section tag. Little-endian 64-bit floats, row-major.
struct CheckpointDoc {
  std::string section_tag;
  std::uint64_t schema_hash = 0;
  std::uint64_t graph_hash = 0;
  std::int32_t layers = 0;
  std::int32_t hidden = 0;
  std::uint32_t embedding = 0;
  std::vector<std::string> node_types;
  std::vector<std::string> edge_types;
  std::string target_edge_type;
  std::uint64_t num_nodes = 0;
  SplitRecord split;
  std::vector<Eigen::MatrixXd> matrices;
  double test_auc = -1.0;
};

void write_checkpoint(const CheckpointDoc& doc, const std::string& path);
CheckpointDoc read_checkpoint(const std::string& path);

inline constexpr const char* kModelSectionTag = "rgcn-lp";
inline constexpr const char* kPredictorSectionTag = "pgexp-predictor";

void save_model(const ModelParams& params, const HeteroGraph& graph, const std::string& path);
// Rejects a schema-hash mismatch against `graph` with SchemaError.
ModelParams load_model(const std::string& path, const HeteroGraph& graph);

}  // namespace pagelink
