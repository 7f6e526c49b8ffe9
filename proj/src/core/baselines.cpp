#include "core/baselines.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace pagelink {

EdgeMaskSet gnnexp_link(const PrunedCore& cg, const ModelParams& params,
                        const ExplainerConfig& cfg) {
  ExplainerConfig ablated = cfg;
  ablated.alpha = 0.0;
  ablated.beta = 0.0;
  return learn_mask(cg, params, ablated);
}

void PredictorParams::check_finite() const {
  for (const auto& mlp : per_type) {
    if (!mlp.w1.allFinite() || !mlp.b1.allFinite() || !mlp.w2.allFinite() ||
        !std::isfinite(mlp.b2))
      throw NumericalError("predictor parameters contain NaN or Inf");
  }
}

PredictorParams init_predictor(const HeteroGraph& graph, const ModelParams& model,
                               std::uint64_t seed) {
  PredictorParams pred;
  pred.hidden = model.hidden;
  pred.input_dim = 2 * model.hidden;
  pred.schema_hash = graph.schema_hash();
  pred.graph_hash = graph.content_hash();
  pred.target_edge_type = model.target_edge_type;

  auto rng = make_rng(seed, /*stream=*/5);
  const double scale1 = 1.0 / std::sqrt(static_cast<double>(pred.input_dim));
  const double scale2 = 1.0 / std::sqrt(static_cast<double>(pred.hidden));
  for (std::size_t r = 0; r < graph.num_edge_types(); ++r) {
    PredictorParams::TypeMlp mlp;
    mlp.w1.resize(pred.hidden, pred.input_dim);
    for (Eigen::Index i = 0; i < mlp.w1.rows(); ++i)
      for (Eigen::Index j = 0; j < mlp.w1.cols(); ++j) mlp.w1(i, j) = normal(rng) * scale1;
    mlp.b1 = Eigen::VectorXd::Zero(pred.hidden);
    mlp.w2.resize(pred.hidden);
    for (Eigen::Index i = 0; i < mlp.w2.size(); ++i) mlp.w2(i) = normal(rng) * scale2;
    mlp.b2 = 0.0;
    pred.per_type.push_back(std::move(mlp));
  }
  return pred;
}

namespace {

struct EdgeFeature {
  Eigen::VectorXd x;   // concat(h_u, h_v)
  TypeId type = 0;
};

std::vector<EdgeFeature> edge_features(const Subgraph& g, const Eigen::MatrixXd& node_repr,
                                       std::int32_t hidden) {
  std::vector<EdgeFeature> feats(g.num_edges());
  for (LocalEdge e = 0; e < g.num_edges(); ++e) {
    const auto& rec = g.edge(e);
    const auto& edge = g.parent().edge(rec.parent_edge);
    Eigen::VectorXd x(2 * hidden);
    x.head(hidden) = node_repr.row(edge.src).transpose();
    x.tail(hidden) = node_repr.row(edge.dst).transpose();
    feats[e] = {std::move(x), rec.type};
  }
  return feats;
}

double mlp_logit(const PredictorParams::TypeMlp& mlp, const Eigen::VectorXd& x,
                 Eigen::VectorXd* hidden_out) {
  Eigen::VectorXd a = ((mlp.w1 * x + mlp.b1).array().tanh()).matrix();
  const double logit = mlp.w2.dot(a) + mlp.b2;
  if (hidden_out) *hidden_out = std::move(a);
  return logit;
}

}  // namespace

PredictorParams pgexp_link_train(const HeteroGraph& graph, const ModelParams& model,
                                 std::span<const std::pair<NodeIndex, NodeIndex>> pairs,
                                 const PgTrainConfig& cfg) {
  if (pairs.empty()) throw ConfigError("mask predictor training needs a non-empty pair set");
  if (pairs.size() < 10) throw ConfigError("mask predictor training needs >= 10 pairs");

  PredictorParams pred = init_predictor(graph, model, cfg.seed);
  const Subgraph msg = message_graph(graph, model);
  const Eigen::MatrixXd node_repr = encode_nodes(msg, MessagePlan::build(msg), model, nullptr);

  // One Adam slot per tensor, per edge type.
  struct Moments {
    Eigen::MatrixXd mw1, vw1;
    Eigen::VectorXd mb1, vb1, mw2, vw2;
    double mb2 = 0, vb2 = 0;
  };
  std::vector<Moments> moments(pred.per_type.size());
  for (std::size_t r = 0; r < pred.per_type.size(); ++r) {
    const auto& mlp = pred.per_type[r];
    moments[r].mw1 = Eigen::MatrixXd::Zero(mlp.w1.rows(), mlp.w1.cols());
    moments[r].vw1 = moments[r].mw1;
    moments[r].mb1 = Eigen::VectorXd::Zero(mlp.b1.size());
    moments[r].vb1 = moments[r].mb1;
    moments[r].mw2 = Eigen::VectorXd::Zero(mlp.w2.size());
    moments[r].vw2 = moments[r].mw2;
  }
  std::int64_t step = 0;

  for (std::int32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& [source, target] : pairs) {
      const Subgraph pair_msg = explanation_message_graph(graph, model, source, target);
      ComputationGraph cg = extract_computation_graph(pair_msg, source, target, model.layers);
      if (cg.sub.num_edges() == 0) continue;
      const MessagePlan plan = MessagePlan::build(cg.sub);
      const auto feats = edge_features(cg.sub, node_repr, model.hidden);

      EdgeMaskSet mask = EdgeMaskSet::zeros(cg.sub);
      std::vector<Eigen::VectorXd> hidden(cg.sub.num_edges());
      for (LocalEdge e = 0; e < cg.sub.num_edges(); ++e)
        mask.logits[e] = mlp_logit(pred.per_type[feats[e].type], feats[e].x, &hidden[e]);

      std::vector<double> grad(mask.size());
      loss_and_mask_grad(cg.sub, plan, model, mask, cg.source, cg.target, cfg.lambda_entropy,
                         cfg.lambda_norm, grad);

      // Backprop the per-edge logit gradients into the shared MLPs.
      struct TypeGrads {
        Eigen::MatrixXd w1;
        Eigen::VectorXd b1, w2;
        double b2 = 0;
        bool used = false;
      };
      std::vector<TypeGrads> tg(pred.per_type.size());
      for (LocalEdge e = 0; e < cg.sub.num_edges(); ++e) {
        const double dlogit = grad[e];
        const auto& mlp = pred.per_type[feats[e].type];
        auto& acc = tg[feats[e].type];
        if (!acc.used) {
          acc.w1 = Eigen::MatrixXd::Zero(mlp.w1.rows(), mlp.w1.cols());
          acc.b1 = Eigen::VectorXd::Zero(mlp.b1.size());
          acc.w2 = Eigen::VectorXd::Zero(mlp.w2.size());
          acc.used = true;
        }
        acc.w2 += dlogit * hidden[e];
        acc.b2 += dlogit;
        Eigen::VectorXd dz = (dlogit * mlp.w2.array() * (1.0 - hidden[e].array().square()))
                                 .matrix();
        acc.w1 += dz * feats[e].x.transpose();
        acc.b1 += dz;
      }

      ++step;
      const double bc1 = 1.0 - std::pow(0.9, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(0.999, static_cast<double>(step));
      auto adam = [&](auto& param, auto& m, auto& v, const auto& g) {
        m = 0.9 * m + 0.1 * g;
        v = (0.999 * v.array() + 0.001 * g.array().square()).matrix();
        param -= (cfg.learning_rate * (m / bc1).array() / ((v / bc2).array().sqrt() + 1e-8))
                     .matrix();
      };
      for (std::size_t r = 0; r < pred.per_type.size(); ++r) {
        if (!tg[r].used) continue;
        auto& mlp = pred.per_type[r];
        auto& mom = moments[r];
        adam(mlp.w1, mom.mw1, mom.vw1, tg[r].w1);
        adam(mlp.b1, mom.mb1, mom.vb1, tg[r].b1);
        adam(mlp.w2, mom.mw2, mom.vw2, tg[r].w2);
        mom.mb2 = 0.9 * mom.mb2 + 0.1 * tg[r].b2;
        mom.vb2 = 0.999 * mom.vb2 + 0.001 * tg[r].b2 * tg[r].b2;
        mlp.b2 -= cfg.learning_rate * (mom.mb2 / bc1) / (std::sqrt(mom.vb2 / bc2) + 1e-8);
      }
    }
  }
  pred.check_finite();
  return pred;
}

EdgeMaskSet pgexp_link_infer(const Subgraph& cg, const PredictorParams& predictor,
                             const Eigen::MatrixXd& node_repr) {
  if (predictor.per_type.size() != cg.parent().num_edge_types())
    throw SchemaError("predictor edge-type count does not match the graph");
  EdgeMaskSet mask = EdgeMaskSet::zeros(cg);
  const auto feats = edge_features(cg, node_repr, predictor.hidden);
  for (LocalEdge e = 0; e < cg.num_edges(); ++e)
    mask.logits[e] = mlp_logit(predictor.per_type[feats[e].type], feats[e].x, nullptr);
  return mask;
}

void save_predictor(const PredictorParams& predictor, const HeteroGraph& graph,
                    const std::string& path) {
  CheckpointDoc doc;
  doc.section_tag = kPredictorSectionTag;
  doc.schema_hash = predictor.schema_hash;
  doc.graph_hash = predictor.graph_hash;
  doc.layers = 1;
  doc.hidden = predictor.hidden;
  doc.embedding = 0;
  doc.node_types = graph.node_types();
  doc.edge_types = graph.edge_types();
  doc.target_edge_type = predictor.target_edge_type;
  doc.num_nodes = graph.num_nodes();
  for (const auto& mlp : predictor.per_type) {
    doc.matrices.push_back(mlp.w1);
    doc.matrices.push_back(mlp.b1);
    doc.matrices.push_back(mlp.w2);
    Eigen::MatrixXd b2(1, 1);
    b2(0, 0) = mlp.b2;
    doc.matrices.push_back(b2);
  }
  write_checkpoint(doc, path);
}

PredictorParams load_predictor(const std::string& path, const HeteroGraph& graph) {
  CheckpointDoc doc = read_checkpoint(path);
  if (doc.section_tag != kPredictorSectionTag)
    throw SchemaError("checkpoint section is '" + doc.section_tag + "', expected '" +
                      kPredictorSectionTag + "'");
  if (doc.schema_hash != graph.schema_hash())
    throw SchemaError("predictor schema hash does not match the graph");
  if (doc.matrices.size() != 4 * graph.num_edge_types())
    throw ParseError("unexpected matrix count in predictor checkpoint");

  PredictorParams pred;
  pred.hidden = doc.hidden;
  pred.input_dim = 2 * doc.hidden;
  pred.schema_hash = doc.schema_hash;
  pred.graph_hash = doc.graph_hash;
  pred.target_edge_type = doc.target_edge_type;
  for (std::size_t r = 0; r < graph.num_edge_types(); ++r) {
    PredictorParams::TypeMlp mlp;
    mlp.w1 = doc.matrices[4 * r];
    mlp.b1 = doc.matrices[4 * r + 1];
    mlp.w2 = doc.matrices[4 * r + 2];
    mlp.b2 = doc.matrices[4 * r + 3](0, 0);
    pred.per_type.push_back(std::move(mlp));
  }
  pred.check_finite();
  return pred;
}

}  // namespace pagelink
