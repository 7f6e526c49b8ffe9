#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/explainer.hpp"
#include "core/graph.hpp"

namespace pagelink {

struct GtPath {
  std::vector<NodeIndex> nodes;
  std::vector<EdgeIndex> edges;
  std::vector<TypeId> edge_types;
  std::uint64_t degree_sum = 0;  // sum of interior-node degrees on the base graph
};

struct GroundTruth {
  NodeIndex source = kInvalidNode;
  NodeIndex target = kInvalidNode;
  EdgeIndex link_edge = 0;          // the augmented edge in the final graph
  std::vector<GtPath> paths;        // ascending degree sum
  std::vector<EdgeIndex> edge_union;  // sorted, unique
};

struct SynthSpec {
  // user-item-attr preset
  std::uint32_t users = 50;
  std::uint32_t items = 100;
  std::uint32_t attr_types = 2;
  std::uint32_t attrs_per_type = 10;
  double p_has = 0.15;             // item -> attr wiring probability
  double p_prefers = 0.2;          // user -> attr hidden-preference probability
  std::uint32_t items_sampled_per_user = 30;
  std::uint32_t cf_samples = 150;  // random pairs tested for the similar-user rule
  std::uint32_t similarity_threshold = 2;  // shared items for "similar"

  // citation-like preset
  std::uint32_t authors = 80;
  std::uint32_t papers = 200;
  std::uint32_t refs = 150;
  std::uint32_t fos = 40;
  double zipf_authors = 0.8;
  double zipf_refs = 1.0;
  double zipf_fos = 1.2;

  // augmentation
  std::int32_t l_max = 3;
  std::uint32_t d_max = 15;
  std::int32_t p_max = 5;
  std::uint32_t n_links = 300;

  std::uint64_t seed = 0;

  void validate() const;
  static SynthSpec preset_useritemattr();
  static SynthSpec preset_citation_like();  // l_max 3, d_max 30, p_max 5
};

struct Dataset {
  HeteroGraph graph;
  std::vector<GroundTruth> links;
  std::string preset;
  SynthSpec spec;
  std::vector<std::string> warnings;
  std::string link_edge_type = "likes";
};

// Adds `n_links` edges of `link_type` between sampled non-adjacent
// (src_type, dst_type) pairs that have at least one qualifying path: hop
// count <= l_max and interior degrees <= d_max, measured on the base graph.
// Ground truth keeps the top p_max qualifying paths by smallest degree sum.
// Falls short with a warning when not enough pairs qualify.
Dataset augment_with_paths(const HeteroGraph& base, const std::string& src_type,
                           const std::string& dst_type, const std::string& link_type,
                           std::int32_t l_max, std::uint32_t d_max, std::int32_t p_max,
                           std::uint32_t n_links, std::uint64_t seed);

Dataset gen_useritemattr(const SynthSpec& spec);
Dataset gen_citation_like(const SynthSpec& spec);
Dataset generate_dataset(const std::string& preset, const SynthSpec& spec);

// graph.tsv / nodes.tsv / gt.tsv / spec.txt under dir, seed in header comments.
void save_dataset(const Dataset& dataset, const std::string& dir);
Dataset load_dataset(const std::string& dir);

std::string spec_to_kv(const SynthSpec& spec, const std::string& preset);
SynthSpec spec_from_kv(const std::string& text, std::string* preset_out);

}  // namespace pagelink
