/* C interface to the pagelink engine: heterogeneous-graph link-prediction
 * explanations as paths, plus the synthetic benchmarks, baseline explainers,
 * evaluation metrics and random-graph checks behind them.
 *
 * All functions return PLK_OK (0) on success; on failure they return an
 * error status and leave a message in plk_last_error() (thread-local).
 * Objects are opaque handles freed with their plk_*_free function. Strings
 * returned through char** are heap-allocated; release with plk_string_free.
 */
#ifndef PAGELINK_H
#define PAGELINK_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct plk_graph plk_graph;
typedef struct plk_dataset plk_dataset;
typedef struct plk_model plk_model;
typedef struct plk_explanation plk_explanation;

typedef enum plk_status {
  PLK_OK = 0,
  PLK_ERR_CONSTRUCTION = 1,
  PLK_ERR_LOOKUP = 2,
  PLK_ERR_PARSE = 3,
  PLK_ERR_CONFIG = 4,
  PLK_ERR_SCHEMA = 5,
  PLK_ERR_ALIGNMENT = 6,
  PLK_ERR_NUMERICAL = 7,
  PLK_ERR_NO_PATH = 8,
  PLK_ERR_DEGREE = 9,
  PLK_ERR_SIZE = 10,
  PLK_ERR_SPEC = 11,
  PLK_ERR_GENERATION = 12,
  PLK_ERR_UNDEFINED_METRIC = 13,
  PLK_ERR_IO = 14,
  PLK_ERR_INVALID_ARGUMENT = 15,
  PLK_ERR_INTERNAL = 16
} plk_status;

const char* plk_version(void);
const char* plk_status_name(plk_status status);
const char* plk_last_error(void);
void plk_string_free(char* text);

/* ---- graphs ------------------------------------------------------------ */

/* Edge TSV: src_type \t src_id \t edge_type \t dst_type \t dst_id per line,
 * '#' comments. nodes_path (optional, may be NULL) declares isolated nodes
 * as node_type \t node_id lines. */
plk_status plk_graph_load_tsv(const char* edges_path, const char* nodes_path, plk_graph** out);
plk_status plk_graph_save_tsv(const plk_graph* graph, const char* edges_path,
                              const char* nodes_path, const char* header_comment);
void plk_graph_free(plk_graph* graph);
uint64_t plk_graph_num_nodes(const plk_graph* graph);
uint64_t plk_graph_num_edges(const plk_graph* graph);
/* node is "type:id". */
plk_status plk_graph_degree(const plk_graph* graph, const char* node, uint64_t* degree_out);

/* ---- synthetic datasets ------------------------------------------------- */

typedef struct plk_synth_spec {
  /* user-item-attr preset */
  uint32_t users, items, attr_types, attrs_per_type;
  double p_has, p_prefers;
  uint32_t items_sampled_per_user, cf_samples, similarity_threshold;
  /* citation-like preset */
  uint32_t authors, papers, refs, fos;
  double zipf_authors, zipf_refs, zipf_fos;
  /* augmentation */
  int32_t l_max;
  uint32_t d_max;
  int32_t p_max;
  uint32_t n_links;
  uint64_t seed;
} plk_synth_spec;

/* Fills preset defaults; preset is "useritemattr" or "citation-like". */
plk_status plk_synth_spec_init(plk_synth_spec* spec, const char* preset);
plk_status plk_dataset_generate(const char* preset, const plk_synth_spec* spec,
                                plk_dataset** out);
/* Writes graph.tsv, nodes.tsv, gt.tsv and spec.txt under dir. */
plk_status plk_dataset_save(const plk_dataset* dataset, const char* dir);
plk_status plk_dataset_load(const char* dir, plk_dataset** out);
void plk_dataset_free(plk_dataset* dataset);
const plk_graph* plk_dataset_graph(const plk_dataset* dataset);
uint64_t plk_dataset_num_links(const plk_dataset* dataset);
/* Source/target of the i-th ground-truth link as "type:id" strings. */
plk_status plk_dataset_link(const plk_dataset* dataset, uint64_t index, char** source_out,
                            char** target_out);
plk_status plk_dataset_warnings(const plk_dataset* dataset, char** text_out);

/* ---- link-prediction model ---------------------------------------------- */

typedef struct plk_train_config {
  int32_t layers, hidden, epochs;
  double learning_rate, negative_ratio;
  double train_fraction, val_fraction, test_fraction;
  int32_t per_type_embeddings; /* 0: learned per-node inputs (default), 1: per-type */
  uint64_t seed;
} plk_train_config;

plk_status plk_train_config_init(plk_train_config* cfg);
plk_status plk_train(const plk_graph* graph, const char* target_edge_type,
                     const plk_train_config* cfg, plk_model** out);
/* The checkpoint embeds the schema (type vocabularies) of `graph`; loading
 * against a graph with a different schema is rejected. */
plk_status plk_model_save(const plk_model* model, const plk_graph* graph, const char* path);
plk_status plk_model_load(const char* path, const plk_graph* graph, plk_model** out);
void plk_model_free(plk_model* model);
plk_status plk_model_test_auc(const plk_model* model, double* auc_out);
/* P(Y=1) for the pair on the model's message graph. */
plk_status plk_predict(const plk_graph* graph, const plk_model* model, const char* source,
                       const char* target, double* probability_out);

/* ---- explanations -------------------------------------------------------- */

typedef enum plk_method {
  PLK_METHOD_PAGELINK = 0,
  PLK_METHOD_GNNEXP = 1,
  PLK_METHOD_PGEXP = 2
} plk_method;

typedef struct plk_explainer_config {
  double alpha, beta, eta;
  int32_t max_iterations;
  int32_t k;
  int32_t budget;
  int32_t l_max;
  uint32_t degree_cap; /* 0 disables the optional high-degree removal */
  int32_t k_paths;
  double tolerance, lambda_entropy, lambda_norm;
  int32_t degree_from_full; /* 0: path-score degrees from the core (default) */
  uint64_t seed;
} plk_explainer_config;

plk_status plk_explainer_config_init(plk_explainer_config* cfg);
plk_status plk_explain(const plk_graph* graph, const plk_model* model, const char* source,
                       const char* target, const plk_explainer_config* cfg,
                       plk_explanation** out);
void plk_explanation_free(plk_explanation* explanation);
uint64_t plk_explanation_num_paths(const plk_explanation* explanation);
plk_status plk_explanation_to_json(const plk_explanation* explanation, const plk_graph* graph,
                                   char** json_out);
plk_status plk_explanation_from_json(const char* json, const plk_graph* graph,
                                     plk_explanation** out);

/* Graphviz rendering; explanation and/or dataset ground truth may be NULL.
 * When dataset is given, the ground truth of (source, target) is overlaid. */
plk_status plk_export_dot(const plk_graph* graph, const char* source, const char* target,
                          const plk_explanation* explanation, const plk_dataset* dataset,
                          char** dot_out);

/* ---- evaluation / benchmarking / theory --------------------------------- */

typedef struct plk_eval_config {
  const int32_t* budgets; /* NULL for the default {10, 50, 100} */
  size_t num_budgets;
  uint32_t max_links;
  int32_t only_test_split;
  uint32_t pg_train_pairs;
  int32_t pg_epochs;
  double pg_learning_rate;
  uint64_t seed;
} plk_eval_config;

plk_status plk_eval_config_init(plk_eval_config* cfg);
/* Runs pagelink, gnnexp-link and pgexp-link over ground-truth links and
 * reports mask ROC-AUC plus path hit rates. Writes report.tsv/report.json
 * under out_dir when out_dir is non-NULL; summary_out gets a printable
 * digest. */
plk_status plk_eval(const plk_graph* graph, const plk_model* model, const plk_dataset* dataset,
                    const plk_eval_config* eval_cfg, const plk_explainer_config* expl_cfg,
                    const char* out_dir, char** summary_out);

/* Times explain() end to end over synthetic graphs at the given |E_c| sizes
 * and fits seconds vs edges. */
plk_status plk_bench(const uint64_t* sizes, size_t num_sizes, uint32_t trials, uint64_t seed,
                     const plk_explainer_config* expl_cfg, const char* out_dir,
                     char** summary_out);

typedef struct plk_theory_config {
  uint32_t path_n_min, path_n_max;
  double path_density;
  uint32_t path_trials;
  uint64_t core_n;
  double avg_degree;
  int32_t core_k;
  uint32_t core_trials;
  uint64_t seed;
} plk_theory_config;

plk_status plk_theory_config_init(plk_theory_config* cfg);
/* Exact path/subgraph counting against the closed forms and empirical k-core
 * fractions against the Poisson-root prediction. */
plk_status plk_verify_theory(const plk_theory_config* cfg, const char* out_dir,
                             char** summary_out);
/* Asymptotic k-core fractions; nonempty_out is 0 when the core vanishes. */
plk_status plk_core_fraction_theory(uint64_t n, double avg_degree, int32_t k,
                                    double* delta_v_out, double* delta_e_out,
                                    int32_t* nonempty_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PAGELINK_H */
