#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/baselines.hpp"
#include "core/datasets.hpp"
#include "core/explainer.hpp"
#include "core/metrics.hpp"
#include "core/model.hpp"

namespace pagelink {

enum class ExplainMethod { PageLink, GnnExpLink, PgExpLink };
const char* method_name(ExplainMethod method);

// Scores over the evaluation graph's edges from a mask that may live on a
// sub-subgraph (the pruned core): edges without a mask entry get the minimum
// mask score.
std::vector<double> project_mask_scores(const Subgraph& eval_graph,
                                        std::span<const EdgeIndex> mask_parent_edges,
                                        std::span<const double> logits);

// ROC-AUC over the evaluation graph's edges with ground-truth path edges as
// positives; average-rank tie handling. Throws InvalidArgumentError when a
// ground-truth edge is missing from the graph, UndefinedMetricError when the
// labels are single-class.
double mask_auc(const Subgraph& eval_graph, std::span<const double> scores,
                const GroundTruth& gt);
double mask_auc(const Subgraph& eval_graph, const EdgeMaskSet& mask, const GroundTruth& gt);

// 1 when the top-B edges by score (ties by edge index) contain every edge of
// at least one ground-truth path.
int path_hit(const Subgraph& eval_graph, std::span<const double> scores, std::int32_t budget,
             const GroundTruth& gt);

struct EvalConfig {
  std::vector<std::int32_t> budgets{10, 50, 100};
  std::uint32_t max_links = 50;
  bool only_test_split = true;  // restrict to links in the model's test split
  std::uint32_t pg_train_pairs = 150;
  PgTrainConfig pg_train;
  std::uint64_t seed = 0;
};

struct LinkResult {
  NodeIndex source = kInvalidNode;
  NodeIndex target = kInvalidNode;
  double auc = 0.0;
  std::map<std::int32_t, int> hit;  // budget -> 0/1
};

struct MethodResult {
  ExplainMethod method = ExplainMethod::PageLink;
  std::vector<LinkResult> links;
  double mean_auc = 0.0;
  std::map<std::int32_t, double> hit_rate;
  int structural_violations = 0;  // PaGE-Link explanations breaking Problem-1 contracts
};

struct EvalReport {
  std::vector<MethodResult> methods;
  std::uint32_t links_evaluated = 0;
  std::uint64_t seed = 0;
};

EvalReport run_eval(const HeteroGraph& graph, const ModelParams& params, const Dataset& dataset,
                    const EvalConfig& eval_cfg, const ExplainerConfig& expl_cfg);

std::string eval_report_tsv(const EvalReport& report, const HeteroGraph& graph);
std::string eval_report_json(const EvalReport& report, const HeteroGraph& graph);
std::string eval_report_summary(const EvalReport& report);

// Structural contract of an emitted explanation (budget arithmetic, simple
// connected s-t paths, length cap); returns problems, empty when clean.
std::vector<std::string> validate_explanation(const Explanation& expl, const HeteroGraph& graph);

struct BenchRow {
  std::uint64_t requested_edges = 0;
  std::uint64_t cg_edges = 0;    // |E_c| actually measured
  std::uint64_t core_edges = 0;  // |E_c^k|
  double seconds = 0.0;          // median over trials, full explain pipeline
};

struct BenchReport {
  std::vector<BenchRow> rows;
  LinearFit fit;  // seconds vs cg_edges
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
};

// Times explain() end to end (pruning + mask learning + extraction; no
// training) on synthetic graphs sized to the requested |E_c| values.
BenchReport bench_scaling(std::span<const std::uint64_t> sizes, std::uint32_t trials,
                          std::uint64_t seed, const ExplainerConfig& cfg);

std::string bench_report_tsv(const BenchReport& report);
std::string bench_report_summary(const BenchReport& report);

}  // namespace pagelink
