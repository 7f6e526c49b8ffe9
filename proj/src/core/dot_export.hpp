#pragma once

#include <string>

#include "core/datasets.hpp"
#include "core/explainer.hpp"
#include "core/graph.hpp"

namespace pagelink {

// Graphviz view of an explanation: the predicted pair as a dashed red edge,
// explanation paths in green, ground-truth-only edges in gray. Either of
// explanation / ground truth may be null.
std::string to_dot(const HeteroGraph& graph, NodeIndex source, NodeIndex target,
                   const Explanation* explanation, const GroundTruth* gt);

}  // namespace pagelink
