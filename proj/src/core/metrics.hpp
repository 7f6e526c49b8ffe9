#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pagelink {

// ROC-AUC by the rank method; tied scores share their average rank, which is
// equivalent to counting reversed pairs at half weight. Throws
// UndefinedMetricError when labels are all positive or all negative.
double rank_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Exact pairwise oracle: fraction of (positive, negative) pairs ordered
// correctly, ties counted 0.5. Quadratic; used to cross-check rank_auc.
double pairwise_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

// Indices of the top-k scores, ties broken by smaller index first.
std::vector<std::size_t> top_k_indices(std::span<const double> scores, std::size_t k);

// Least-squares fit y = slope * x + intercept plus R^2.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace pagelink
