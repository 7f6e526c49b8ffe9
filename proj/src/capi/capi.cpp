#include "pagelink.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "core/datasets.hpp"
#include "core/dot_export.hpp"
#include "core/errors.hpp"
#include "core/eval.hpp"
#include "core/explainer.hpp"
#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/theory.hpp"

using namespace pagelink;

struct plk_graph {
  HeteroGraph graph;
};
struct plk_dataset {
  Dataset dataset;
  plk_graph graph_view;  // keeps plk_dataset_graph stable
};
struct plk_model {
  ModelParams params;
};
struct plk_explanation {
  Explanation explanation;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

plk_status to_status(ErrorCode code) { return static_cast<plk_status>(static_cast<int>(code)); }

template <typename Fn>
plk_status guarded(Fn&& fn) {
  try {
    fn();
    return PLK_OK;
  } catch (const Error& e) {
    set_error(e.what());
    return to_status(e.code());
  } catch (const std::exception& e) {
    set_error(e.what());
    return PLK_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return PLK_ERR_INTERNAL;
  }
}

plk_status require(bool ok, const char* message) {
  if (!ok) {
    set_error(message);
    return PLK_ERR_INVALID_ARGUMENT;
  }
  return PLK_OK;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

SynthSpec to_core(const plk_synth_spec& c) {
  SynthSpec s;
  s.users = c.users;
  s.items = c.items;
  s.attr_types = c.attr_types;
  s.attrs_per_type = c.attrs_per_type;
  s.p_has = c.p_has;
  s.p_prefers = c.p_prefers;
  s.items_sampled_per_user = c.items_sampled_per_user;
  s.cf_samples = c.cf_samples;
  s.similarity_threshold = c.similarity_threshold;
  s.authors = c.authors;
  s.papers = c.papers;
  s.refs = c.refs;
  s.fos = c.fos;
  s.zipf_authors = c.zipf_authors;
  s.zipf_refs = c.zipf_refs;
  s.zipf_fos = c.zipf_fos;
  s.l_max = c.l_max;
  s.d_max = c.d_max;
  s.p_max = c.p_max;
  s.n_links = c.n_links;
  s.seed = c.seed;
  return s;
}

void from_core(const SynthSpec& s, plk_synth_spec* c) {
  c->users = s.users;
  c->items = s.items;
  c->attr_types = s.attr_types;
  c->attrs_per_type = s.attrs_per_type;
  c->p_has = s.p_has;
  c->p_prefers = s.p_prefers;
  c->items_sampled_per_user = s.items_sampled_per_user;
  c->cf_samples = s.cf_samples;
  c->similarity_threshold = s.similarity_threshold;
  c->authors = s.authors;
  c->papers = s.papers;
  c->refs = s.refs;
  c->fos = s.fos;
  c->zipf_authors = s.zipf_authors;
  c->zipf_refs = s.zipf_refs;
  c->zipf_fos = s.zipf_fos;
  c->l_max = s.l_max;
  c->d_max = s.d_max;
  c->p_max = s.p_max;
  c->n_links = s.n_links;
  c->seed = s.seed;
}

ExplainerConfig to_core(const plk_explainer_config& c) {
  ExplainerConfig cfg;
  cfg.alpha = c.alpha;
  cfg.beta = c.beta;
  cfg.eta = c.eta;
  cfg.max_iterations = c.max_iterations;
  cfg.k = c.k;
  cfg.budget = c.budget;
  cfg.l_max = c.l_max;
  cfg.degree_cap = c.degree_cap;
  cfg.k_paths = c.k_paths;
  cfg.tolerance = c.tolerance;
  cfg.lambda_entropy = c.lambda_entropy;
  cfg.lambda_norm = c.lambda_norm;
  cfg.degree_from_core = c.degree_from_full == 0;
  cfg.seed = c.seed;
  return cfg;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
}

}  // namespace

extern "C" {

const char* plk_version(void) { return "1.0.0"; }

const char* plk_status_name(plk_status status) {
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(status)));
}

const char* plk_last_error(void) { return g_last_error.c_str(); }

void plk_string_free(char* text) { std::free(text); }

/* ---- graphs ------------------------------------------------------------ */

plk_status plk_graph_load_tsv(const char* edges_path, const char* nodes_path, plk_graph** out) {
  if (auto st = require(edges_path && out, "edges_path and out must be non-null")) return st;
  return guarded([&] {
    auto handle = std::make_unique<plk_graph>();
    handle->graph = HeteroGraph::load_tsv(edges_path, nodes_path ? nodes_path : "");
    *out = handle.release();
  });
}

plk_status plk_graph_save_tsv(const plk_graph* graph, const char* edges_path,
                              const char* nodes_path, const char* header_comment) {
  if (auto st = require(graph && edges_path && nodes_path, "null argument")) return st;
  return guarded([&] {
    graph->graph.save_tsv(edges_path, nodes_path, header_comment ? header_comment : "");
  });
}

void plk_graph_free(plk_graph* graph) { delete graph; }

uint64_t plk_graph_num_nodes(const plk_graph* graph) {
  return graph ? graph->graph.num_nodes() : 0;
}

uint64_t plk_graph_num_edges(const plk_graph* graph) {
  return graph ? graph->graph.num_edges() : 0;
}

plk_status plk_graph_degree(const plk_graph* graph, const char* node, uint64_t* degree_out) {
  if (auto st = require(graph && node && degree_out, "null argument")) return st;
  return guarded([&] {
    *degree_out = graph->graph.degree(graph->graph.parse_node_label(node));
  });
}

/* ---- synthetic datasets ------------------------------------------------- */

plk_status plk_synth_spec_init(plk_synth_spec* spec, const char* preset) {
  if (auto st = require(spec && preset, "null argument")) return st;
  return guarded([&] {
    const std::string name = preset;
    if (name == "useritemattr")
      from_core(SynthSpec::preset_useritemattr(), spec);
    else if (name == "citation-like")
      from_core(SynthSpec::preset_citation_like(), spec);
    else
      throw ConfigError("unknown preset '" + name + "'");
  });
}

plk_status plk_dataset_generate(const char* preset, const plk_synth_spec* spec,
                                plk_dataset** out) {
  if (auto st = require(preset && spec && out, "null argument")) return st;
  return guarded([&] {
    auto handle = std::make_unique<plk_dataset>();
    handle->dataset = generate_dataset(preset, to_core(*spec));
    handle->graph_view.graph = handle->dataset.graph;
    *out = handle.release();
  });
}

plk_status plk_dataset_save(const plk_dataset* dataset, const char* dir) {
  if (auto st = require(dataset && dir, "null argument")) return st;
  return guarded([&] { save_dataset(dataset->dataset, dir); });
}

plk_status plk_dataset_load(const char* dir, plk_dataset** out) {
  if (auto st = require(dir && out, "null argument")) return st;
  return guarded([&] {
    auto handle = std::make_unique<plk_dataset>();
    handle->dataset = load_dataset(dir);
    handle->graph_view.graph = handle->dataset.graph;
    *out = handle.release();
  });
}

void plk_dataset_free(plk_dataset* dataset) { delete dataset; }

const plk_graph* plk_dataset_graph(const plk_dataset* dataset) {
  return dataset ? &dataset->graph_view : nullptr;
}

uint64_t plk_dataset_num_links(const plk_dataset* dataset) {
  return dataset ? dataset->dataset.links.size() : 0;
}

plk_status plk_dataset_link(const plk_dataset* dataset, uint64_t index, char** source_out,
                            char** target_out) {
  if (auto st = require(dataset && source_out && target_out, "null argument")) return st;
  return guarded([&] {
    if (index >= dataset->dataset.links.size()) throw LookupError("link index out of range");
    const auto& link = dataset->dataset.links[index];
    *source_out = dup_string(dataset->dataset.graph.node_label(link.source));
    *target_out = dup_string(dataset->dataset.graph.node_label(link.target));
  });
}

plk_status plk_dataset_warnings(const plk_dataset* dataset, char** text_out) {
  if (auto st = require(dataset && text_out, "null argument")) return st;
  return guarded([&] {
    std::string text;
    for (const auto& w : dataset->dataset.warnings) text += w + "\n";
    *text_out = dup_string(text);
  });
}

/* ---- link-prediction model ---------------------------------------------- */

plk_status plk_train_config_init(plk_train_config* cfg) {
  if (auto st = require(cfg != nullptr, "null cfg")) return st;
  const TrainConfig d;
  cfg->layers = d.layers;
  cfg->hidden = d.hidden;
  cfg->epochs = d.epochs;
  cfg->learning_rate = d.learning_rate;
  cfg->negative_ratio = d.negative_ratio;
  cfg->train_fraction = d.train_fraction;
  cfg->val_fraction = d.val_fraction;
  cfg->test_fraction = d.test_fraction;
  cfg->per_type_embeddings = d.embedding == EmbeddingMode::PerType ? 1 : 0;
  cfg->seed = d.seed;
  return PLK_OK;
}

plk_status plk_train(const plk_graph* graph, const char* target_edge_type,
                     const plk_train_config* cfg, plk_model** out) {
  if (auto st = require(graph && target_edge_type && cfg && out, "null argument")) return st;
  return guarded([&] {
    TrainConfig tc;
    tc.layers = cfg->layers;
    tc.hidden = cfg->hidden;
    tc.epochs = cfg->epochs;
    tc.learning_rate = cfg->learning_rate;
    tc.negative_ratio = cfg->negative_ratio;
    tc.train_fraction = cfg->train_fraction;
    tc.val_fraction = cfg->val_fraction;
    tc.test_fraction = cfg->test_fraction;
    tc.embedding = cfg->per_type_embeddings ? EmbeddingMode::PerType : EmbeddingMode::PerNode;
    tc.seed = cfg->seed;
    auto handle = std::make_unique<plk_model>();
    handle->params = train_link_predictor(graph->graph, target_edge_type, tc).params;
    *out = handle.release();
  });
}

plk_status plk_model_save(const plk_model* model, const plk_graph* graph, const char* path) {
  if (auto st = require(model && graph && path, "null argument")) return st;
  return guarded([&] { save_model(model->params, graph->graph, path); });
}

void plk_model_free(plk_model* model) { delete model; }

plk_status plk_model_load(const char* path, const plk_graph* graph, plk_model** out) {
  if (auto st = require(path && graph && out, "null argument")) return st;
  return guarded([&] {
    auto handle = std::make_unique<plk_model>();
    handle->params = load_model(path, graph->graph);
    *out = handle.release();
  });
}

plk_status plk_model_test_auc(const plk_model* model, double* auc_out) {
  if (auto st = require(model && auc_out, "null argument")) return st;
  *auc_out = model->params.test_auc;
  return PLK_OK;
}

plk_status plk_predict(const plk_graph* graph, const plk_model* model, const char* source,
                       const char* target, double* probability_out) {
  if (auto st = require(graph && model && source && target && probability_out, "null argument"))
    return st;
  return guarded([&] {
    const NodeIndex s = graph->graph.parse_node_label(source);
    const NodeIndex t = graph->graph.parse_node_label(target);
    const Subgraph msg = explanation_message_graph(graph->graph, model->params, s, t);
    *probability_out =
        predict_pair(msg, model->params, nullptr, msg.local_node(s), msg.local_node(t));
  });
}

/* ---- explanations -------------------------------------------------------- */

plk_status plk_explainer_config_init(plk_explainer_config* cfg) {
  if (auto st = require(cfg != nullptr, "null cfg")) return st;
  const ExplainerConfig d;
  cfg->alpha = d.alpha;
  cfg->beta = d.beta;
  cfg->eta = d.eta;
  cfg->max_iterations = d.max_iterations;
  cfg->k = d.k;
  cfg->budget = d.budget;
  cfg->l_max = d.l_max;
  cfg->degree_cap = d.degree_cap;
  cfg->k_paths = d.k_paths;
  cfg->tolerance = d.tolerance;
  cfg->lambda_entropy = d.lambda_entropy;
  cfg->lambda_norm = d.lambda_norm;
  cfg->degree_from_full = d.degree_from_core ? 0 : 1;
  cfg->seed = d.seed;
  return PLK_OK;
}

plk_status plk_explain(const plk_graph* graph, const plk_model* model, const char* source,
                       const char* target, const plk_explainer_config* cfg,
                       plk_explanation** out) {
  if (auto st = require(graph && model && source && target && cfg && out, "null argument"))
    return st;
  return guarded([&] {
    auto handle = std::make_unique<plk_explanation>();
    handle->explanation =
        explain(graph->graph, model->params, graph->graph.parse_node_label(source),
                graph->graph.parse_node_label(target), to_core(*cfg));
    *out = handle.release();
  });
}

void plk_explanation_free(plk_explanation* explanation) { delete explanation; }

uint64_t plk_explanation_num_paths(const plk_explanation* explanation) {
  return explanation ? explanation->explanation.paths.size() : 0;
}

plk_status plk_explanation_to_json(const plk_explanation* explanation, const plk_graph* graph,
                                   char** json_out) {
  if (auto st = require(explanation && graph && json_out, "null argument")) return st;
  return guarded([&] {
    *json_out = dup_string(explanation_to_json(explanation->explanation, graph->graph));
  });
}

plk_status plk_explanation_from_json(const char* json, const plk_graph* graph,
                                     plk_explanation** out) {
  if (auto st = require(json && graph && out, "null argument")) return st;
  return guarded([&] {
    auto handle = std::make_unique<plk_explanation>();
    handle->explanation = explanation_from_json(json, graph->graph);
    *out = handle.release();
  });
}

plk_status plk_export_dot(const plk_graph* graph, const char* source, const char* target,
                          const plk_explanation* explanation, const plk_dataset* dataset,
                          char** dot_out) {
  if (auto st = require(graph && source && target && dot_out, "null argument")) return st;
  return guarded([&] {
    const NodeIndex s = graph->graph.parse_node_label(source);
    const NodeIndex t = graph->graph.parse_node_label(target);
    const GroundTruth* gt = nullptr;
    if (dataset) {
      for (const auto& link : dataset->dataset.links) {
        if (link.source == s && link.target == t) {
          gt = &link;
          break;
        }
      }
    }
    *dot_out = dup_string(to_dot(graph->graph, s, t,
                                 explanation ? &explanation->explanation : nullptr, gt));
  });
}

/* ---- evaluation / benchmarking / theory --------------------------------- */

plk_status plk_eval_config_init(plk_eval_config* cfg) {
  if (auto st = require(cfg != nullptr, "null cfg")) return st;
  const EvalConfig d;
  cfg->budgets = nullptr;
  cfg->num_budgets = 0;
  cfg->max_links = d.max_links;
  cfg->only_test_split = d.only_test_split ? 1 : 0;
  cfg->pg_train_pairs = d.pg_train_pairs;
  cfg->pg_epochs = d.pg_train.epochs;
  cfg->pg_learning_rate = d.pg_train.learning_rate;
  cfg->seed = d.seed;
  return PLK_OK;
}

plk_status plk_eval(const plk_graph* graph, const plk_model* model, const plk_dataset* dataset,
                    const plk_eval_config* eval_cfg, const plk_explainer_config* expl_cfg,
                    const char* out_dir, char** summary_out) {
  if (auto st = require(graph && model && dataset && eval_cfg && expl_cfg, "null argument"))
    return st;
  return guarded([&] {
    EvalConfig ec;
    if (eval_cfg->budgets && eval_cfg->num_budgets > 0)
      ec.budgets.assign(eval_cfg->budgets, eval_cfg->budgets + eval_cfg->num_budgets);
    ec.max_links = eval_cfg->max_links;
    ec.only_test_split = eval_cfg->only_test_split != 0;
    ec.pg_train_pairs = eval_cfg->pg_train_pairs;
    ec.pg_train.epochs = eval_cfg->pg_epochs;
    ec.pg_train.learning_rate = eval_cfg->pg_learning_rate;
    ec.seed = eval_cfg->seed;
    const EvalReport report =
        run_eval(graph->graph, model->params, dataset->dataset, ec, to_core(*expl_cfg));
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      write_text_file(std::string(out_dir) + "/report.tsv",
                      eval_report_tsv(report, graph->graph));
      write_text_file(std::string(out_dir) + "/report.json",
                      eval_report_json(report, graph->graph));
    }
    if (summary_out) *summary_out = dup_string(eval_report_summary(report));
  });
}

plk_status plk_bench(const uint64_t* sizes, size_t num_sizes, uint32_t trials, uint64_t seed,
                     const plk_explainer_config* expl_cfg, const char* out_dir,
                     char** summary_out) {
  if (auto st = require(sizes && num_sizes > 0 && expl_cfg, "null argument")) return st;
  return guarded([&] {
    const BenchReport report = bench_scaling(std::span(sizes, num_sizes), trials, seed,
                                             to_core(*expl_cfg));
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      write_text_file(std::string(out_dir) + "/report.tsv", bench_report_tsv(report));
    }
    if (summary_out) *summary_out = dup_string(bench_report_summary(report));
  });
}

plk_status plk_theory_config_init(plk_theory_config* cfg) {
  if (auto st = require(cfg != nullptr, "null cfg")) return st;
  const theory::TheoryParams d;
  cfg->path_n_min = d.path_n_min;
  cfg->path_n_max = d.path_n_max;
  cfg->path_density = d.path_density;
  cfg->path_trials = d.path_trials;
  cfg->core_n = d.core_n;
  cfg->avg_degree = d.avg_degree;
  cfg->core_k = d.core_k;
  cfg->core_trials = d.core_trials;
  cfg->seed = d.seed;
  return PLK_OK;
}

plk_status plk_verify_theory(const plk_theory_config* cfg, const char* out_dir,
                             char** summary_out) {
  if (auto st = require(cfg != nullptr, "null cfg")) return st;
  return guarded([&] {
    theory::TheoryParams params;
    params.path_n_min = cfg->path_n_min;
    params.path_n_max = cfg->path_n_max;
    params.path_density = cfg->path_density;
    params.path_trials = cfg->path_trials;
    params.core_n = cfg->core_n;
    params.avg_degree = cfg->avg_degree;
    params.core_k = cfg->core_k;
    params.core_trials = cfg->core_trials;
    params.seed = cfg->seed;
    const theory::TheoryReport report = theory::verify_theory(params);
    if (out_dir) {
      std::filesystem::create_directories(out_dir);
      write_text_file(std::string(out_dir) + "/report.tsv", theory::theory_report_tsv(report));
    }
    if (summary_out) *summary_out = dup_string(theory::theory_report_summary(report));
  });
}

plk_status plk_core_fraction_theory(uint64_t n, double avg_degree, int32_t k,
                                    double* delta_v_out, double* delta_e_out,
                                    int32_t* nonempty_out) {
  if (auto st = require(delta_v_out && delta_e_out && nonempty_out, "null argument")) return st;
  return guarded([&] {
    const double density = avg_degree / static_cast<double>(n - 1);
    const auto fractions = theory::core_fraction_theory(n, density, k);
    *delta_v_out = fractions.delta_v;
    *delta_e_out = fractions.delta_e;
    *nonempty_out = fractions.nonempty ? 1 : 0;
  });
}

} /* extern "C" */
