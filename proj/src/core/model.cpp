#include "core/model.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace pagelink {

namespace {

inline double sigmoid(double x) {
  if (x >= 0) {
    const double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  const double z = std::exp(x);
  return z / (1.0 + z);
}

inline double clamp_probability(double p) {
  return std::min(1.0 - 1e-15, std::max(1e-15, p));
}

std::vector<double> edge_weights(const Subgraph& g, const EdgeMaskSet* mask) {
  std::vector<double> w(g.num_edges(), 1.0);
  if (mask) {
    check_mask_alignment(g, *mask);
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = sigmoid(mask->logits[e]);
  }
  return w;
}

struct Trace {
  std::vector<Eigen::MatrixXd> h;                 // layers + 1, each N x H
  std::vector<Eigen::MatrixXd> group_num;         // per layer, groups x H
  std::vector<std::vector<double>> group_den;     // per layer, per group
};

void check_model_compat(const Subgraph& g, const ModelParams& params) {
  if (params.layers < 1) throw SchemaError("model has no layers");
  const std::size_t relations = g.parent().num_edge_types();
  if (params.num_relations() != relations)
    throw SchemaError("model relation count does not match graph edge types");
  if (params.embedding == EmbeddingMode::PerNode &&
      params.embeddings.rows() != static_cast<Eigen::Index>(g.parent().num_nodes()))
    throw SchemaError("per-node embedding table does not match graph size");
  if (params.embedding == EmbeddingMode::PerType &&
      params.embeddings.rows() != static_cast<Eigen::Index>(g.parent().num_node_types()))
    throw SchemaError("per-type embedding table does not match schema");
}

Eigen::MatrixXd layer_zero(const Subgraph& g, const ModelParams& params) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd h0(n, params.hidden);
  for (Eigen::Index v = 0; v < n; ++v) {
    const NodeIndex parent = g.parent_node(static_cast<LocalNode>(v));
    if (params.embedding == EmbeddingMode::PerNode)
      h0.row(v) = params.embeddings.row(parent);
    else
      h0.row(v) = params.embeddings.row(g.parent().node(parent).type);
  }
  return h0;
}

// Per-relation transformed sources, computed lazily: tmp_r = h * W_r^T.
class RelTransforms {
 public:
  RelTransforms(const Eigen::MatrixXd& h, const std::vector<Eigen::MatrixXd>& weights)
      : h_(h), weights_(weights), cache_(weights.size()), ready_(weights.size(), false) {}

  const Eigen::MatrixXd& get(TypeId rel) {
    if (!ready_[rel]) {
      cache_[rel] = h_ * weights_[rel].transpose();
      ready_[rel] = true;
    }
    return cache_[rel];
  }

 private:
  const Eigen::MatrixXd& h_;
  const std::vector<Eigen::MatrixXd>& weights_;
  std::vector<Eigen::MatrixXd> cache_;
  std::vector<bool> ready_;
};

Trace run_forward(const Subgraph& g, const MessagePlan& plan, const ModelParams& params,
                  std::span<const double> weights) {
  check_model_compat(g, params);
  Trace trace;
  trace.h.reserve(params.layers + 1);
  trace.h.push_back(layer_zero(g, params));
  trace.group_num.resize(params.layers);
  trace.group_den.resize(params.layers);

  const auto& groups = plan.groups();
  const auto& entries = plan.entries();
  for (std::int32_t layer = 0; layer < params.layers; ++layer) {
    const Eigen::MatrixXd& h = trace.h.back();
    Eigen::MatrixXd pre = h * params.self_weights[layer].transpose();
    RelTransforms rel(h, params.rel_weights[layer]);
    auto& nums = trace.group_num[layer];
    nums.setZero(static_cast<Eigen::Index>(groups.size()), params.hidden);
    auto& dens = trace.group_den[layer];
    dens.assign(groups.size(), 0.0);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& group = groups[gi];
      const Eigen::MatrixXd& tmp = rel.get(group.rel);
      double den = kAggregationEpsilon;
      auto num = nums.row(static_cast<Eigen::Index>(gi));
      for (std::uint32_t i = group.begin; i < group.end; ++i) {
        const auto& entry = entries[i];
        const double w = weights[entry.edge];
        num += w * tmp.row(entry.src);
        den += w;
      }
      dens[gi] = den;
      pre.row(group.dst) += num / den;
    }
    if (layer + 1 < params.layers)
      trace.h.push_back(pre.array().tanh().matrix());
    else
      trace.h.push_back(std::move(pre));
  }
  return trace;
}

struct Grads {
  bool want_params = false;
  bool want_mask = false;
  std::vector<Eigen::MatrixXd> self;              // per layer
  std::vector<std::vector<Eigen::MatrixXd>> rel;  // per layer x 2R
  Eigen::MatrixXd embed;
  std::vector<double> mask;                       // per local edge (d loss / d logit)
};

void run_backward(const Subgraph& g, const MessagePlan& plan, const ModelParams& params,
                  std::span<const double> weights, const Trace& trace, Eigen::MatrixXd dh,
                  Grads& grads) {
  const auto& groups = plan.groups();
  const auto& entries = plan.entries();
  const std::size_t n_rel = params.rel_weights.front().size();

  if (grads.want_params) {
    grads.self.assign(params.layers, Eigen::MatrixXd::Zero(params.hidden, params.hidden));
    grads.rel.assign(params.layers,
                     std::vector<Eigen::MatrixXd>(
                         n_rel, Eigen::MatrixXd::Zero(params.hidden, params.hidden)));
    grads.embed.setZero(params.embeddings.rows(), params.embeddings.cols());
  }
  if (grads.want_mask) grads.mask.assign(g.num_edges(), 0.0);

  for (std::int32_t layer = params.layers - 1; layer >= 0; --layer) {
    if (layer + 1 < params.layers) {
      // output of this layer went through tanh
      dh = dh.cwiseProduct(
          (1.0 - trace.h[layer + 1].array().square()).matrix());
    }
    const Eigen::MatrixXd& h = trace.h[layer];
    RelTransforms rel(h, params.rel_weights[layer]);

    Eigen::MatrixXd dh_prev = dh * params.self_weights[layer];
    if (grads.want_params) grads.self[layer] += dh.transpose() * h;

    // Accumulate w * dnum at source rows, one matrix per relation, then close
    // both the h-gradient and the weight-gradient with a single product.
    std::vector<Eigen::MatrixXd> gmat(n_rel);
    std::vector<bool> gmat_used(n_rel, false);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& group = groups[gi];
      const double den = trace.group_den[layer][gi];
      const auto num = trace.group_num[layer].row(static_cast<Eigen::Index>(gi));
      const Eigen::RowVectorXd dout = dh.row(group.dst);
      const Eigen::RowVectorXd dnum = dout / den;
      const double dden = -dout.dot(num) / (den * den);
      if (!gmat_used[group.rel]) {
        gmat[group.rel].setZero(h.rows(), params.hidden);
        gmat_used[group.rel] = true;
      }
      Eigen::MatrixXd& gm = gmat[group.rel];
      const Eigen::MatrixXd* tmp = grads.want_mask ? &rel.get(group.rel) : nullptr;
      for (std::uint32_t i = group.begin; i < group.end; ++i) {
        const auto& entry = entries[i];
        const double w = weights[entry.edge];
        gm.row(entry.src) += w * dnum;
        if (grads.want_mask) {
          const double dw = dnum.dot(tmp->row(entry.src)) + dden;
          const double sig_grad = w * (1.0 - w);
          grads.mask[entry.edge] += dw * sig_grad;
        }
      }
    }
    for (std::size_t r = 0; r < n_rel; ++r) {
      if (!gmat_used[r]) continue;
      dh_prev += gmat[r] * params.rel_weights[layer][r];
      if (grads.want_params) grads.rel[layer][r] += gmat[r].transpose() * h;
    }
    dh = std::move(dh_prev);
  }

  if (grads.want_params) {
    for (LocalNode v = 0; v < g.num_nodes(); ++v) {
      const NodeIndex parent = g.parent_node(v);
      if (params.embedding == EmbeddingMode::PerNode)
        grads.embed.row(parent) += dh.row(v);
      else
        grads.embed.row(g.parent().node(parent).type) += dh.row(v);
    }
  }
}

}  // namespace

EdgeMaskSet EdgeMaskSet::zeros(const Subgraph& g) {
  EdgeMaskSet mask;
  mask.logits.assign(g.num_edges(), 0.0);
  mask.type_offsets = g.edge_type_offsets();
  return mask;
}

void check_mask_alignment(const Subgraph& g, const EdgeMaskSet& mask) {
  if (mask.logits.size() != g.num_edges() || mask.type_offsets != g.edge_type_offsets())
    throw AlignmentError("edge mask is not aligned with the graph's edges");
}

void ModelParams::check_finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.allFinite(); };
  bool fine = ok(embeddings);
  for (const auto& w : self_weights) fine = fine && ok(w);
  for (const auto& layer : rel_weights)
    for (const auto& w : layer) fine = fine && ok(w);
  if (!fine) throw NumericalError("model parameters contain NaN or Inf");
}

ModelParams init_model(const HeteroGraph& graph, std::int32_t layers, std::int32_t hidden,
                       std::uint64_t seed, EmbeddingMode mode,
                       std::span<const std::string> edge_types) {
  if (layers < 1 || hidden < 1) throw InvalidArgumentError("layers and hidden must be >= 1");
  for (const auto& name : edge_types) {
    if (!graph.has_edge_type(name)) throw SchemaError("unknown edge type in schema: " + name);
  }
  ModelParams params;
  params.layers = layers;
  params.hidden = hidden;
  params.embedding = mode;
  params.schema_hash = graph.schema_hash();
  params.graph_hash = graph.content_hash();

  auto rng = make_rng(seed, /*stream=*/3);
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng) * scale;
    return m;
  };

  const std::size_t n_rel = 2 * graph.num_edge_types();
  for (std::int32_t l = 0; l < layers; ++l) {
    params.self_weights.push_back(draw(hidden, hidden));
    std::vector<Eigen::MatrixXd> rel;
    for (std::size_t r = 0; r < n_rel; ++r) rel.push_back(draw(hidden, hidden));
    params.rel_weights.push_back(std::move(rel));
  }
  const Eigen::Index emb_rows = mode == EmbeddingMode::PerNode
                                    ? static_cast<Eigen::Index>(graph.num_nodes())
                                    : static_cast<Eigen::Index>(graph.num_node_types());
  params.embeddings = draw(emb_rows, hidden);
  return params;
}

MessagePlan MessagePlan::build(const Subgraph& g) {
  const std::size_t relations = g.parent().num_edge_types();
  struct Raw {
    LocalNode dst;
    TypeId rel;
    LocalNode src;
    LocalEdge edge;
  };
  std::vector<Raw> raw;
  raw.reserve(2 * g.num_edges());
  for (LocalEdge e = 0; e < g.num_edges(); ++e) {
    const auto& rec = g.edge(e);
    raw.push_back({rec.dst, rec.type, rec.src, e});
    raw.push_back({rec.src, static_cast<TypeId>(rec.type + relations), rec.dst, e});
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    if (a.dst != b.dst) return a.dst < b.dst;
    if (a.rel != b.rel) return a.rel < b.rel;
    if (a.src != b.src) return a.src < b.src;
    return a.edge < b.edge;
  });

  MessagePlan plan;
  plan.entries_.reserve(raw.size());
  for (const auto& r : raw) {
    if (plan.groups_.empty() || plan.groups_.back().dst != r.dst ||
        plan.groups_.back().rel != r.rel) {
      plan.groups_.push_back({r.dst, r.rel, static_cast<std::uint32_t>(plan.entries_.size()),
                              static_cast<std::uint32_t>(plan.entries_.size())});
    }
    plan.entries_.push_back({r.src, r.edge});
    plan.groups_.back().end = static_cast<std::uint32_t>(plan.entries_.size());
  }
  return plan;
}

Eigen::MatrixXd encode_nodes(const Subgraph& g, const MessagePlan& plan,
                             const ModelParams& params, const EdgeMaskSet* mask) {
  const auto weights = edge_weights(g, mask);
  Trace trace = run_forward(g, plan, params, weights);
  return std::move(trace.h.back());
}

double predict_pair(const Subgraph& g, const MessagePlan& plan, const ModelParams& params,
                    const EdgeMaskSet* mask, LocalNode s, LocalNode t) {
  if (s >= g.num_nodes() || t >= g.num_nodes()) throw LookupError("node out of range");
  const auto weights = edge_weights(g, mask);
  Trace trace = run_forward(g, plan, params, weights);
  const auto& h = trace.h.back();
  return clamp_probability(sigmoid(h.row(s).dot(h.row(t))));
}

double predict_pair(const Subgraph& g, const ModelParams& params, const EdgeMaskSet* mask,
                    LocalNode s, LocalNode t) {
  return predict_pair(g, MessagePlan::build(g), params, mask, s, t);
}

MaskLossTerms loss_and_mask_grad(const Subgraph& core, const MessagePlan& plan,
                                 const ModelParams& params, const EdgeMaskSet& mask,
                                 LocalNode s, LocalNode t, double lambda_entropy,
                                 double lambda_norm, std::span<double> grad_out) {
  check_mask_alignment(core, mask);
  if (grad_out.size() != mask.size())
    throw InvalidArgumentError("gradient buffer size mismatch");
  const auto weights = edge_weights(core, &mask);

  Trace trace = run_forward(core, plan, params, weights);
  const auto& h = trace.h.back();
  const double dot = h.row(s).dot(h.row(t));
  const double p = clamp_probability(sigmoid(dot));

  MaskLossTerms terms;
  terms.probability = p;
  terms.prediction = -std::log(p);

  // d(-log sigmoid(dot)) / d(dot) = p - 1
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  const double dscore = p - 1.0;
  dh.row(s) += dscore * h.row(t);
  dh.row(t) += dscore * h.row(s);

  Grads grads;
  grads.want_mask = true;
  run_backward(core, plan, params, weights, trace, std::move(dh), grads);

  for (std::size_t e = 0; e < mask.size(); ++e) {
    const double m = mask.logits[e];
    const double q = weights[e];
    const double sig_grad = q * (1.0 - q);
    // binary entropy H(q) with q = sigmoid(m): dH/dm = -m q (1 - q)
    terms.entropy += -(q > 0 ? q * std::log(q) : 0.0) -
                     ((1.0 - q) > 0 ? (1.0 - q) * std::log(1.0 - q) : 0.0);
    terms.norm += q;
    grads.mask[e] += lambda_entropy * (-m * sig_grad) + lambda_norm * sig_grad;
  }
  terms.total = terms.prediction + lambda_entropy * terms.entropy + lambda_norm * terms.norm;
  if (!std::isfinite(terms.total)) {
    std::string offenders;
    int listed = 0;
    for (std::size_t e = 0; e < mask.size() && listed < 5; ++e) {
      if (!std::isfinite(mask.logits[e])) {
        offenders += (listed ? "," : "") + std::to_string(e);
        ++listed;
      }
    }
    throw NumericalError("non-finite mask loss" +
                         (offenders.empty() ? std::string()
                                            : " (non-finite logits at local edges " + offenders + ")"));
  }
  std::copy(grads.mask.begin(), grads.mask.end(), grad_out.begin());
  return terms;
}

void TrainConfig::validate() const {
  if (layers < 1 || hidden < 1) throw ConfigError("layers and hidden must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (negative_ratio < 1.0) throw ConfigError("negative ratio must be >= 1");
  const double sum = train_fraction + val_fraction + test_fraction;
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
  if (train_fraction <= 0 || test_fraction <= 0) throw ConfigError("train/test fractions must be positive");
}

Subgraph message_graph(const HeteroGraph& graph, const ModelParams& params) {
  Subgraph whole = Subgraph::whole(graph);
  if (params.graph_hash != graph.content_hash()) return whole;
  std::vector<EdgeIndex> excluded;
  excluded.reserve(params.split.val.size() + params.split.test.size());
  excluded.insert(excluded.end(), params.split.val.begin(), params.split.val.end());
  excluded.insert(excluded.end(), params.split.test.begin(), params.split.test.end());
  if (excluded.empty()) return whole;
  return whole.without_edges(excluded);
}

TrainResult train_link_predictor(const HeteroGraph& graph, const std::string& target_edge_type,
                                 const TrainConfig& cfg) {
  cfg.validate();
  const TypeId target = graph.edge_type_id(target_edge_type);
  const auto [e_begin, e_end] = graph.edge_range(target);
  const std::size_t n_target = e_end - e_begin;
  if (n_target < 10) throw ConfigError("target edge type needs >= 10 edges");

  // Frozen split of target edges.
  std::vector<EdgeIndex> ids(n_target);
  for (std::size_t i = 0; i < n_target; ++i) ids[i] = e_begin + static_cast<EdgeIndex>(i);
  auto split_rng = make_rng(cfg.seed, /*stream=*/11);
  shuffle(std::span<EdgeIndex>(ids), split_rng);
  const auto n_train = static_cast<std::size_t>(cfg.train_fraction * n_target);
  const auto n_val = static_cast<std::size_t>(cfg.val_fraction * n_target);
  if (n_train == 0 || n_train + n_val >= n_target)
    throw ConfigError("degenerate split: empty train or test partition");

  ModelParams params = init_model(graph, cfg.layers, cfg.hidden, cfg.seed, cfg.embedding);
  params.target_edge_type = target_edge_type;
  params.split.train.assign(ids.begin(), ids.begin() + n_train);
  params.split.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  params.split.test.assign(ids.begin() + n_train + n_val, ids.end());
  std::sort(params.split.train.begin(), params.split.train.end());
  std::sort(params.split.val.begin(), params.split.val.end());
  std::sort(params.split.test.begin(), params.split.test.end());

  Subgraph msg = message_graph(graph, params);
  MessagePlan plan = MessagePlan::build(msg);
  const std::vector<double> ones(msg.num_edges(), 1.0);

  // Observed target pairs, for negative-sample rejection.
  std::unordered_set<std::uint64_t> observed;
  observed.reserve(n_target * 2);
  for (EdgeIndex e = e_begin; e < e_end; ++e) {
    const auto& rec = graph.edge(e);
    observed.insert((static_cast<std::uint64_t>(rec.src) << 32) | rec.dst);
  }

  struct Sample {
    LocalNode s;
    LocalNode t;
    double y;
  };
  auto corrupt = [&](NodeIndex src, TypeId dst_type, std::mt19937_64& rng) -> NodeIndex {
    const auto [lo, hi] = graph.node_range(dst_type);
    if (hi - lo < 2) throw ConfigError("not enough nodes to sample negatives");
    for (int attempt = 0; attempt < 1000; ++attempt) {
      NodeIndex cand = lo + static_cast<NodeIndex>(uniform_u64(rng, hi - lo));
      if (cand == src) continue;
      if (!observed.count((static_cast<std::uint64_t>(src) << 32) | cand)) return cand;
    }
    throw GenerationError("negative sampling failed; target type too dense");
  };

  const int negatives_per_positive = std::max(1, static_cast<int>(std::llround(cfg.negative_ratio)));

  // Parameter list in a fixed order for the optimizer.
  std::vector<Eigen::MatrixXd*> param_list;
  param_list.push_back(&params.embeddings);
  for (std::int32_t l = 0; l < params.layers; ++l) {
    param_list.push_back(&params.self_weights[l]);
    for (auto& w : params.rel_weights[l]) param_list.push_back(&w);
  }
  std::vector<Eigen::MatrixXd> adam_m, adam_v;
  for (auto* p : param_list) {
    adam_m.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    adam_v.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
  }

  TrainResult result;
  for (std::int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto epoch_rng = make_rng(cfg.seed, 1000 + static_cast<std::uint64_t>(epoch));
    std::vector<Sample> batch;
    batch.reserve(params.split.train.size() * (1 + negatives_per_positive));
    for (EdgeIndex e : params.split.train) {
      const auto& rec = graph.edge(e);
      batch.push_back({msg.local_node(rec.src), msg.local_node(rec.dst), 1.0});
      const TypeId dst_type = graph.node(rec.dst).type;
      for (int j = 0; j < negatives_per_positive; ++j) {
        NodeIndex neg = corrupt(rec.src, dst_type, epoch_rng);
        batch.push_back({msg.local_node(rec.src), msg.local_node(neg), 0.0});
      }
    }

    Trace trace = run_forward(msg, plan, params, ones);
    const Eigen::MatrixXd& h = trace.h.back();
    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(h.rows(), h.cols());
    double loss = 0.0;
    for (const auto& sample : batch) {
      const double p = clamp_probability(sigmoid(h.row(sample.s).dot(h.row(sample.t))));
      loss += -(sample.y * std::log(p) + (1.0 - sample.y) * std::log(1.0 - p));
      const double g = (p - sample.y) * inv_batch;
      dh.row(sample.s) += g * h.row(sample.t);
      dh.row(sample.t) += g * h.row(sample.s);
    }
    loss *= inv_batch;
    result.loss_history.push_back(loss);

    Grads grads;
    grads.want_params = true;
    run_backward(msg, plan, params, ones, trace, std::move(dh), grads);

    std::vector<const Eigen::MatrixXd*> grad_list;
    grad_list.push_back(&grads.embed);
    for (std::int32_t l = 0; l < params.layers; ++l) {
      grad_list.push_back(&grads.self[l]);
      for (auto& w : grads.rel[l]) grad_list.push_back(&w);
    }
    const double bc1 = 1.0 - std::pow(0.9, epoch + 1);
    const double bc2 = 1.0 - std::pow(0.999, epoch + 1);
    for (std::size_t i = 0; i < param_list.size(); ++i) {
      adam_m[i] = 0.9 * adam_m[i] + 0.1 * (*grad_list[i]);
      adam_v[i] = 0.999 * adam_v[i] + 0.001 * grad_list[i]->cwiseProduct(*grad_list[i]);
      *param_list[i] -=
          (cfg.learning_rate * (adam_m[i] / bc1).array() /
           ((adam_v[i] / bc2).array().sqrt() + 1e-8))
              .matrix();
    }
  }
  params.check_finite();

  // Held-out evaluation; test edges never participated in message passing.
  {
    Trace trace = run_forward(msg, plan, params, ones);
    const Eigen::MatrixXd& h = trace.h.back();
    auto test_rng = make_rng(cfg.seed, /*stream=*/77);
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (EdgeIndex e : params.split.test) {
      const auto& rec = graph.edge(e);
      scores.push_back(h.row(msg.local_node(rec.src)).dot(h.row(msg.local_node(rec.dst))));
      labels.push_back(1);
      const NodeIndex neg = corrupt(rec.src, graph.node(rec.dst).type, test_rng);
      scores.push_back(h.row(msg.local_node(rec.src)).dot(h.row(msg.local_node(neg))));
      labels.push_back(0);
    }
    result.test_auc = rank_auc(scores, labels);
  }
  params.test_auc = result.test_auc;
  result.final_loss = result.loss_history.empty() ? 0.0 : result.loss_history.back();
  result.params = std::move(params);
  return result;
}

namespace {

constexpr char kMagic[8] = {'P', 'L', 'K', 'C', 'K', 'P', 'T', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void write_ids(std::ostream& out, const std::vector<EdgeIndex>& ids) {
  write_u64(out, ids.size());
  for (EdgeIndex e : ids) write_u32(out, e);
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ParseError("truncated checkpoint");
  return v;
}
std::uint64_t read_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ParseError("truncated checkpoint");
  return v;
}
double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ParseError("truncated checkpoint");
  return v;
}
std::string read_string(std::istream& in) {
  const std::uint32_t len = read_u32(in);
  if (len > (1u << 20)) throw ParseError("implausible string length in checkpoint");
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw ParseError("truncated checkpoint");
  return s;
}
std::vector<EdgeIndex> read_ids(std::istream& in) {
  const std::uint64_t count = read_u64(in);
  if (count > (1ull << 32)) throw ParseError("implausible id count in checkpoint");
  std::vector<EdgeIndex> ids(count);
  for (auto& e : ids) e = read_u32(in);
  return ids;
}

}  // namespace

void write_checkpoint(const CheckpointDoc& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  write_string(out, doc.section_tag);
  write_u64(out, doc.schema_hash);
  write_u64(out, doc.graph_hash);
  write_u32(out, static_cast<std::uint32_t>(doc.layers));
  write_u32(out, static_cast<std::uint32_t>(doc.hidden));
  write_u32(out, doc.embedding);
  write_u32(out, static_cast<std::uint32_t>(doc.node_types.size()));
  for (const auto& s : doc.node_types) write_string(out, s);
  write_u32(out, static_cast<std::uint32_t>(doc.edge_types.size()));
  for (const auto& s : doc.edge_types) write_string(out, s);
  write_string(out, doc.target_edge_type);
  write_u64(out, doc.num_nodes);
  write_ids(out, doc.split.train);
  write_ids(out, doc.split.val);
  write_ids(out, doc.split.test);
  write_u64(out, doc.matrices.size());
  for (const auto& m : doc.matrices) {
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) write_f64(out, m(i, j));
  }
  write_f64(out, doc.test_auc);
  if (!out) throw IoError("failed writing checkpoint " + path);
}

CheckpointDoc read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError("not a checkpoint file: " + path);
  CheckpointDoc doc;
  doc.section_tag = read_string(in);
  doc.schema_hash = read_u64(in);
  doc.graph_hash = read_u64(in);
  doc.layers = static_cast<std::int32_t>(read_u32(in));
  doc.hidden = static_cast<std::int32_t>(read_u32(in));
  doc.embedding = read_u32(in);
  const std::uint32_t n_nt = read_u32(in);
  for (std::uint32_t i = 0; i < n_nt; ++i) doc.node_types.push_back(read_string(in));
  const std::uint32_t n_et = read_u32(in);
  for (std::uint32_t i = 0; i < n_et; ++i) doc.edge_types.push_back(read_string(in));
  doc.target_edge_type = read_string(in);
  doc.num_nodes = read_u64(in);
  doc.split.train = read_ids(in);
  doc.split.val = read_ids(in);
  doc.split.test = read_ids(in);
  const std::uint64_t n_mat = read_u64(in);
  if (n_mat > (1ull << 24)) throw ParseError("implausible matrix count");
  for (std::uint64_t k = 0; k < n_mat; ++k) {
    const auto rows = static_cast<Eigen::Index>(read_u64(in));
    const auto cols = static_cast<Eigen::Index>(read_u64(in));
    if (rows < 0 || cols < 0 || rows * cols > (1ll << 30))
      throw ParseError("implausible matrix shape");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = read_f64(in);
    doc.matrices.push_back(std::move(m));
  }
  doc.test_auc = read_f64(in);
  return doc;
}

void save_model(const ModelParams& params, const HeteroGraph& graph, const std::string& path) {
  CheckpointDoc doc;
  doc.section_tag = kModelSectionTag;
  doc.schema_hash = params.schema_hash;
  doc.graph_hash = params.graph_hash;
  doc.layers = params.layers;
  doc.hidden = params.hidden;
  doc.embedding = static_cast<std::uint32_t>(params.embedding);
  doc.node_types = graph.node_types();
  doc.edge_types = graph.edge_types();
  doc.target_edge_type = params.target_edge_type;
  doc.num_nodes = graph.num_nodes();
  doc.split = params.split;
  doc.test_auc = params.test_auc;
  doc.matrices.push_back(params.embeddings);
  for (std::int32_t l = 0; l < params.layers; ++l) {
    doc.matrices.push_back(params.self_weights[l]);
    for (const auto& w : params.rel_weights[l]) doc.matrices.push_back(w);
  }
  write_checkpoint(doc, path);
}

ModelParams load_model(const std::string& path, const HeteroGraph& graph) {
  CheckpointDoc doc = read_checkpoint(path);
  if (doc.section_tag != kModelSectionTag)
    throw SchemaError("checkpoint section is '" + doc.section_tag + "', expected '" +
                      kModelSectionTag + "'");
  if (doc.schema_hash != graph.schema_hash())
    throw SchemaError("checkpoint schema hash does not match the graph's type vocabularies");

  ModelParams params;
  params.layers = doc.layers;
  params.hidden = doc.hidden;
  params.embedding = static_cast<EmbeddingMode>(doc.embedding);
  params.schema_hash = doc.schema_hash;
  params.graph_hash = doc.graph_hash;
  params.target_edge_type = doc.target_edge_type;
  params.split = doc.split;
  params.test_auc = doc.test_auc;

  const std::size_t n_rel = 2 * graph.num_edge_types();
  const std::size_t expected = 1 + static_cast<std::size_t>(doc.layers) * (1 + n_rel);
  if (doc.matrices.size() != expected) throw ParseError("unexpected matrix count in checkpoint");
  std::size_t k = 0;
  params.embeddings = doc.matrices[k++];
  for (std::int32_t l = 0; l < doc.layers; ++l) {
    params.self_weights.push_back(doc.matrices[k++]);
    std::vector<Eigen::MatrixXd> rel;
    for (std::size_t r = 0; r < n_rel; ++r) rel.push_back(doc.matrices[k++]);
    params.rel_weights.push_back(std::move(rel));
  }
  params.check_finite();
  if (params.embedding == EmbeddingMode::PerNode && doc.num_nodes != graph.num_nodes())
    throw SchemaError("checkpoint node count does not match the graph");
  return params;
}

}  // namespace pagelink
