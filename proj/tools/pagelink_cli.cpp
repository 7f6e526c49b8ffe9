// Command-line front end. Everything goes through the public C API in
// pagelink.h; this translation unit never touches the C++ core directly.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pagelink.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsageError = 2;

struct CliError {
  int code;
  std::string message;
};

void check(plk_status status, const std::string& what) {
  if (status != PLK_OK) {
    throw CliError{kExitDomainError,
                   what + ": " + plk_status_name(status) + ": " + plk_last_error()};
  }
}

std::string take_string(char* text) {
  std::string out = text ? text : "";
  plk_string_free(text);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CliError{kExitDomainError, "cannot open " + path + " for writing"};
  out << text;
}

using KvList = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const std::string& out_dir, const std::string& subcommand, uint64_t seed,
                    const KvList& config) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream text;
  text << "tool=pagelink\n";
  text << "version=" << plk_version() << "\n";
  text << "subcommand=" << subcommand << "\n";
  text << "seed=" << seed << "\n";
  for (const auto& [key, value] : config) text << key << "=" << value << "\n";
  write_file(out_dir + "/manifest.txt", text.str());
}

template <typename T>
std::string str(const T& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

// RAII for C API handles.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  ~Handle() { reset(); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  void reset() {
    if (ptr) Free(ptr);
    ptr = nullptr;
  }
  T** out() {
    reset();
    return &ptr;
  }
  T* get() const { return ptr; }
  explicit operator bool() const { return ptr != nullptr; }
};

using GraphHandle = Handle<plk_graph, plk_graph_free>;
using DatasetHandle = Handle<plk_dataset, plk_dataset_free>;
using ModelHandle = Handle<plk_model, plk_model_free>;
using ExplanationHandle = Handle<plk_explanation, plk_explanation_free>;

struct GraphInputs {
  std::string data_dir;
  std::string graph_path;
  std::string nodes_path;

  void add_options(CLI::App* cmd, bool required) {
    auto* dir = cmd->add_option("--data-dir", data_dir,
                                "dataset directory (graph.tsv/nodes.tsv/gt.tsv)");
    auto* graph = cmd->add_option("--graph", graph_path, "edge TSV path");
    cmd->add_option("--nodes", nodes_path, "nodes TSV path (optional with --graph)");
    if (required) {
      // exactly one of the two sources
      dir->excludes(graph);
    }
  }

  // Loads either a plain graph or a dataset directory (which also fills
  // dataset_out when non-null).
  void load(GraphHandle& graph_out, DatasetHandle* dataset_out) const {
    if (!data_dir.empty()) {
      DatasetHandle dataset;
      check(plk_dataset_load(data_dir.c_str(), dataset.out()), "loading dataset");
      const plk_graph* view = plk_dataset_graph(dataset.get());
      // Re-load the graph as an owned handle for a uniform lifetime.
      (void)view;
      check(plk_graph_load_tsv((data_dir + "/graph.tsv").c_str(),
                               (data_dir + "/nodes.tsv").c_str(), graph_out.out()),
            "loading graph");
      if (dataset_out) {
        dataset_out->reset();
        dataset_out->ptr = dataset.ptr;
        dataset.ptr = nullptr;
      }
      return;
    }
    if (graph_path.empty())
      throw CliError{kExitUsageError, "one of --data-dir or --graph is required"};
    check(plk_graph_load_tsv(graph_path.c_str(),
                             nodes_path.empty() ? nullptr : nodes_path.c_str(),
                             graph_out.out()),
          "loading graph");
  }
};

struct ExplainerFlags {
  plk_explainer_config cfg;
  std::string degree_from = "core";

  ExplainerFlags() { plk_explainer_config_init(&cfg); }

  void add_options(CLI::App* cmd) {
    cmd->add_option("--alpha", cfg.alpha, "path-loss weight on candidate edges");
    cmd->add_option("--beta", cfg.beta, "path-loss weight off candidate edges");
    cmd->add_option("--eta", cfg.eta, "mask learning rate");
    cmd->add_option("--iterations", cfg.max_iterations, "max mask iterations (T)");
    cmd->add_option("--k", cfg.k, "k-core parameter");
    cmd->add_option("--budget", cfg.budget, "explanation edge budget (B)");
    cmd->add_option("--l-max", cfg.l_max, "maximum path length in hops");
    cmd->add_option("--degree-cap", cfg.degree_cap,
                    "remove non-endpoint nodes above this degree before coring (0 = off)");
    cmd->add_option("--k-paths", cfg.k_paths, "candidate shortest paths per iteration");
    cmd->add_option("--tol", cfg.tolerance, "convergence tolerance on mask change");
    cmd->add_option("--lambda-ent", cfg.lambda_entropy, "mask entropy regularizer");
    cmd->add_option("--lambda-norm", cfg.lambda_norm, "mask norm regularizer");
    cmd->add_option("--degree-from", degree_from, "path-score degree source: core|full")
        ->check(CLI::IsMember({"core", "full"}));
  }

  plk_explainer_config resolved() const {
    plk_explainer_config out = cfg;
    out.degree_from_full = degree_from == "full" ? 1 : 0;
    return out;
  }

  void echo(KvList& kv) const {
    kv.emplace_back("alpha", str(cfg.alpha));
    kv.emplace_back("beta", str(cfg.beta));
    kv.emplace_back("eta", str(cfg.eta));
    kv.emplace_back("iterations", str(cfg.max_iterations));
    kv.emplace_back("k", str(cfg.k));
    kv.emplace_back("budget", str(cfg.budget));
    kv.emplace_back("l_max", str(cfg.l_max));
    kv.emplace_back("degree_cap", str(cfg.degree_cap));
    kv.emplace_back("k_paths", str(cfg.k_paths));
    kv.emplace_back("tol", str(cfg.tolerance));
    kv.emplace_back("lambda_ent", str(cfg.lambda_entropy));
    kv.emplace_back("lambda_norm", str(cfg.lambda_norm));
    kv.emplace_back("degree_from", degree_from);
  }
};

std::pair<std::string, std::string> split_pair(const std::string& pair) {
  const auto comma = pair.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == pair.size())
    throw CliError{kExitUsageError,
                   "--pair expects 'src_type:id,dst_type:id', got '" + pair + "'"};
  return {pair.substr(0, comma), pair.substr(comma + 1)};
}

/* ---- gen-data ------------------------------------------------------------ */

int run_gen_data(const std::string& preset, plk_synth_spec spec, const std::string& out_dir) {
  DatasetHandle dataset;
  check(plk_dataset_generate(preset.c_str(), &spec, dataset.out()), "generating dataset");
  check(plk_dataset_save(dataset.get(), out_dir.c_str()), "saving dataset");
  char* warn_text = nullptr;
  check(plk_dataset_warnings(dataset.get(), &warn_text), "reading warnings");
  const std::string warnings = take_string(warn_text);
  if (!warnings.empty()) std::cerr << warnings;

  KvList kv{{"preset", preset},
            {"users", str(spec.users)},
            {"items", str(spec.items)},
            {"attr_types", str(spec.attr_types)},
            {"attrs_per_type", str(spec.attrs_per_type)},
            {"p_has", str(spec.p_has)},
            {"p_prefers", str(spec.p_prefers)},
            {"authors", str(spec.authors)},
            {"papers", str(spec.papers)},
            {"refs", str(spec.refs)},
            {"fos", str(spec.fos)},
            {"l_max", str(spec.l_max)},
            {"d_max", str(spec.d_max)},
            {"p_max", str(spec.p_max)},
            {"n_links", str(spec.n_links)}};
  write_manifest(out_dir, "gen-data", spec.seed, kv);

  const plk_graph* graph = plk_dataset_graph(dataset.get());
  std::cout << "generated " << preset << ": " << plk_graph_num_nodes(graph) << " nodes, "
            << plk_graph_num_edges(graph) << " edges, " << plk_dataset_num_links(dataset.get())
            << " ground-truth links -> " << out_dir << "\n";
  return kExitOk;
}

/* ---- train ---------------------------------------------------------------- */

int run_train(const GraphInputs& inputs, const std::string& target_type, plk_train_config cfg,
              const std::string& out_dir) {
  GraphHandle graph;
  inputs.load(graph, nullptr);
  ModelHandle model;
  check(plk_train(graph.get(), target_type.c_str(), &cfg, model.out()), "training");
  std::filesystem::create_directories(out_dir);
  check(plk_model_save(model.get(), graph.get(), (out_dir + "/model.ckpt").c_str()),
        "saving checkpoint");
  double auc = 0;
  check(plk_model_test_auc(model.get(), &auc), "reading test AUC");

  KvList kv{{"target", target_type},        {"layers", str(cfg.layers)},
            {"hidden", str(cfg.hidden)},    {"epochs", str(cfg.epochs)},
            {"lr", str(cfg.learning_rate)}, {"negative_ratio", str(cfg.negative_ratio)},
            {"test_auc", str(auc)}};
  write_manifest(out_dir, "train", cfg.seed, kv);
  std::cout << "trained link predictor on '" << target_type << "': test ROC-AUC " << auc
            << " -> " << out_dir << "/model.ckpt\n";
  return kExitOk;
}

/* ---- explain ---------------------------------------------------------------- */

int run_explain(const GraphInputs& inputs, const std::string& model_path,
                const std::string& pair, const std::string& pairs_file,
                const ExplainerFlags& flags, const std::string& out_dir, unsigned jobs,
                bool dot) {
  GraphHandle graph;
  DatasetHandle dataset;
  inputs.load(graph, &dataset);
  ModelHandle model;
  check(plk_model_load(model_path.c_str(), graph.get(), model.out()), "loading checkpoint");
  const plk_explainer_config cfg = flags.resolved();

  std::vector<std::pair<std::string, std::string>> pairs;
  if (!pairs_file.empty()) {
    std::ifstream in(pairs_file);
    if (!in) throw CliError{kExitDomainError, "cannot open " + pairs_file};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab != std::string::npos)
        pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
      else
        pairs.push_back(split_pair(line));
    }
    if (pairs.empty()) throw CliError{kExitDomainError, pairs_file + " lists no pairs"};
  } else {
    pairs.push_back(split_pair(pair));
  }

  // Independent jobs against the shared immutable graph + model.
  struct Slot {
    std::string json;
    std::string error;
    plk_status status = PLK_OK;
  };
  std::vector<Slot> slots(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      ExplanationHandle expl;
      plk_status status = plk_explain(graph.get(), model.get(), pairs[i].first.c_str(),
                                      pairs[i].second.c_str(), &cfg, expl.out());
      if (status != PLK_OK) {
        slots[i].status = status;
        slots[i].error = plk_last_error();
        continue;
      }
      char* json = nullptr;
      status = plk_explanation_to_json(expl.get(), graph.get(), &json);
      if (status != PLK_OK) {
        slots[i].status = status;
        slots[i].error = plk_last_error();
        continue;
      }
      slots[i].json = take_string(json);
    }
  };
  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(pairs.size())));
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < n_workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::filesystem::create_directories(out_dir);
  std::size_t failures = 0;
  std::string payload;
  if (pairs.size() == 1 && pairs_file.empty()) {
    if (slots[0].status != PLK_OK)
      throw CliError{kExitDomainError, "explain " + pairs[0].first + "," + pairs[0].second +
                                           ": " + plk_status_name(slots[0].status) + ": " +
                                           slots[0].error};
    payload = slots[0].json;
  } else {
    payload = "[\n";
    bool first = true;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].status != PLK_OK) {
        ++failures;
        std::cerr << "explain " << pairs[i].first << "," << pairs[i].second << ": "
                  << plk_status_name(slots[i].status) << ": " << slots[i].error << "\n";
        continue;
      }
      std::string item = slots[i].json;
      while (!item.empty() && (item.back() == '\n' || item.back() == ' ')) item.pop_back();
      payload += (first ? "" : ",\n") + item;
      first = false;
    }
    payload += "\n]\n";
  }
  write_file(out_dir + "/explanation.json", payload);

  if (dot && pairs.size() == 1 && slots[0].status == PLK_OK) {
    ExplanationHandle expl;
    check(plk_explanation_from_json(slots[0].json.c_str(), graph.get(), expl.out()),
          "re-reading explanation");
    char* dot_text = nullptr;
    check(plk_export_dot(graph.get(), pairs[0].first.c_str(), pairs[0].second.c_str(),
                         expl.get(), dataset.get(), &dot_text),
          "rendering dot");
    write_file(out_dir + "/explanation.dot", take_string(dot_text));
  }

  KvList kv{{"model", model_path}, {"pairs", str(pairs.size())}, {"jobs", str(n_workers)}};
  flags.echo(kv);
  write_manifest(out_dir, "explain", cfg.seed, kv);
  std::cout << "explained " << (pairs.size() - failures) << "/" << pairs.size() << " pairs -> "
            << out_dir << "/explanation.json\n";
  return failures == pairs.size() ? kExitDomainError : kExitOk;
}

/* ---- eval ---------------------------------------------------------------- */

int run_eval(const GraphInputs& inputs, const std::string& model_path,
             std::vector<int32_t> budgets, uint32_t max_links, bool all_links,
             uint32_t pg_train_pairs, int32_t pg_epochs, const ExplainerFlags& flags,
             uint64_t seed, const std::string& out_dir) {
  GraphHandle graph;
  DatasetHandle dataset;
  inputs.load(graph, &dataset);
  if (!dataset) throw CliError{kExitUsageError, "eval needs --data-dir (for ground truth)"};
  ModelHandle model;
  check(plk_model_load(model_path.c_str(), graph.get(), model.out()), "loading checkpoint");

  plk_eval_config cfg;
  plk_eval_config_init(&cfg);
  if (!budgets.empty()) {
    cfg.budgets = budgets.data();
    cfg.num_budgets = budgets.size();
  }
  cfg.max_links = max_links;
  cfg.only_test_split = all_links ? 0 : 1;
  cfg.pg_train_pairs = pg_train_pairs;
  cfg.pg_epochs = pg_epochs;
  cfg.seed = seed;

  const plk_explainer_config expl_cfg = flags.resolved();
  char* summary = nullptr;
  check(plk_eval(graph.get(), model.get(), dataset.get(), &cfg, &expl_cfg, out_dir.c_str(),
                 &summary),
        "evaluating");
  std::cout << take_string(summary);

  KvList kv{{"model", model_path},
            {"max_links", str(max_links)},
            {"all_links", all_links ? "1" : "0"},
            {"pg_train_pairs", str(pg_train_pairs)},
            {"pg_epochs", str(pg_epochs)}};
  std::string blist;
  for (auto b : budgets) blist += (blist.empty() ? "" : ",") + str(b);
  kv.emplace_back("budgets", blist.empty() ? "10,50,100" : blist);
  flags.echo(kv);
  write_manifest(out_dir, "eval", seed, kv);
  return kExitOk;
}

/* ---- bench ---------------------------------------------------------------- */

int run_bench(std::vector<uint64_t> sizes, uint32_t trials, uint64_t seed,
              const ExplainerFlags& flags, const std::string& out_dir) {
  if (sizes.empty()) sizes = {100, 250, 500, 1000, 2000, 3500, 5000};
  const plk_explainer_config cfg = flags.resolved();
  char* summary = nullptr;
  check(plk_bench(sizes.data(), sizes.size(), trials, seed, &cfg, out_dir.c_str(), &summary),
        "benchmarking");
  std::cout << take_string(summary);

  std::string slist;
  for (auto s : sizes) slist += (slist.empty() ? "" : ",") + str(s);
  KvList kv{{"sizes", slist}, {"trials", str(trials)}};
  flags.echo(kv);
  write_manifest(out_dir, "bench", seed, kv);
  return kExitOk;
}

/* ---- verify-theory -------------------------------------------------------- */

int run_verify_theory(plk_theory_config cfg, const std::string& out_dir) {
  char* summary = nullptr;
  check(plk_verify_theory(&cfg, out_dir.c_str(), &summary), "verifying theory");
  std::cout << take_string(summary);

  KvList kv{{"path_n_min", str(cfg.path_n_min)}, {"path_n_max", str(cfg.path_n_max)},
            {"path_density", str(cfg.path_density)}, {"path_trials", str(cfg.path_trials)},
            {"core_n", str(cfg.core_n)},           {"avg_degree", str(cfg.avg_degree)},
            {"core_k", str(cfg.core_k)},           {"core_trials", str(cfg.core_trials)}};
  write_manifest(out_dir, "verify-theory", cfg.seed, kv);
  return kExitOk;
}

/* ---- export-dot ------------------------------------------------------------ */

int run_export_dot(const GraphInputs& inputs, const std::string& pair,
                   const std::string& explanation_path, const std::string& out_dir) {
  GraphHandle graph;
  DatasetHandle dataset;
  inputs.load(graph, &dataset);
  const auto [source, target] = split_pair(pair);

  ExplanationHandle expl;
  if (!explanation_path.empty()) {
    std::ifstream in(explanation_path);
    if (!in) throw CliError{kExitDomainError, "cannot open " + explanation_path};
    std::stringstream buf;
    buf << in.rdbuf();
    check(plk_explanation_from_json(buf.str().c_str(), graph.get(), expl.out()),
          "reading explanation");
  }
  char* dot_text = nullptr;
  check(plk_export_dot(graph.get(), source.c_str(), target.c_str(), expl.get(), dataset.get(),
                       &dot_text),
        "rendering dot");
  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/explanation.dot", take_string(dot_text));

  KvList kv{{"pair", pair}, {"explanation", explanation_path}};
  write_manifest(out_dir, "export-dot", 0, kv);
  std::cout << "wrote " << out_dir << "/explanation.dot\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"path-based explanations for heterogeneous GNN link prediction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override");
  app.set_version_flag("--version", plk_version());

  uint64_t seed = 0;
  app.add_option("--seed", seed, "global random seed")->envname("PAGELINK_SEED");
  std::string out_dir = "out";
  app.add_option("--out-dir", out_dir, "output directory");

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset with ground truth");
  std::string preset = "useritemattr";
  gen->add_option("--preset", preset, "useritemattr | citation-like")
      ->check(CLI::IsMember({"useritemattr", "citation-like"}));
  plk_synth_spec spec;
  plk_synth_spec_init(&spec, "useritemattr");
  gen->add_option("--users", spec.users, "user count");
  gen->add_option("--items", spec.items, "item count");
  gen->add_option("--attr-types", spec.attr_types, "attribute type count");
  gen->add_option("--attrs-per-type", spec.attrs_per_type, "attributes per type");
  gen->add_option("--p-has", spec.p_has, "item-attr wiring probability");
  gen->add_option("--p-prefers", spec.p_prefers, "hidden preference probability");
  gen->add_option("--items-per-user", spec.items_sampled_per_user, "items sampled per user");
  gen->add_option("--cf-samples", spec.cf_samples, "collaborative-filtering samples");
  gen->add_option("--similarity-threshold", spec.similarity_threshold,
                  "shared items for user similarity");
  gen->add_option("--authors", spec.authors, "author count (citation-like)");
  gen->add_option("--papers", spec.papers, "paper count (citation-like)");
  gen->add_option("--refs", spec.refs, "reference count (citation-like)");
  gen->add_option("--fos", spec.fos, "field-of-study count (citation-like)");
  gen->add_option("--l-max", spec.l_max, "max ground-truth path length");
  gen->add_option("--d-max", spec.d_max, "max interior degree for ground-truth paths");
  gen->add_option("--p-max", spec.p_max, "ground-truth paths kept per link");
  gen->add_option("--n-links", spec.n_links, "links to augment");

  // train
  auto* train = app.add_subcommand("train", "train the relational link predictor");
  GraphInputs train_inputs;
  train_inputs.add_options(train, true);
  std::string target_type = "likes";
  train->add_option("--target", target_type, "edge type to predict");
  plk_train_config train_cfg;
  plk_train_config_init(&train_cfg);
  train->add_option("--layers", train_cfg.layers, "encoder layers (= explanation hops)");
  train->add_option("--hidden", train_cfg.hidden, "hidden width");
  train->add_option("--epochs", train_cfg.epochs, "training epochs");
  train->add_option("--lr", train_cfg.learning_rate, "learning rate");
  train->add_option("--negative-ratio", train_cfg.negative_ratio, "negatives per positive");
  train->add_flag("--per-type-embeddings", train_cfg.per_type_embeddings,
                  "share one input embedding per node type instead of per node");

  // explain
  auto* explain = app.add_subcommand("explain", "explain a predicted link as paths");
  GraphInputs explain_inputs;
  explain_inputs.add_options(explain, true);
  std::string model_path;
  explain->add_option("--model", model_path, "trained checkpoint (model.ckpt)")
      ->required()
      ->check(CLI::ExistingFile);
  std::string pair_arg, pairs_file;
  auto* pair_opt = explain->add_option("--pair", pair_arg, "source,target as type:id,type:id");
  auto* pairs_opt =
      explain->add_option("--pairs-file", pairs_file, "file of pairs, one per line");
  pair_opt->excludes(pairs_opt);
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  explain->add_option("--jobs", jobs, "worker threads for --pairs-file");
  bool dot = false;
  explain->add_flag("--dot", dot, "also write explanation.dot");
  ExplainerFlags explain_flags;
  explain_flags.add_options(explain);

  // eval
  auto* eval = app.add_subcommand("eval", "score explainers against ground truth");
  GraphInputs eval_inputs;
  eval_inputs.add_options(eval, true);
  std::string eval_model;
  eval->add_option("--model", eval_model, "trained checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  std::vector<int32_t> budgets;
  eval->add_option("--budget", budgets, "hit-rate budgets (repeatable)");
  uint32_t max_links = 50;
  eval->add_option("--max-links", max_links, "evaluated link cap");
  bool all_links = false;
  eval->add_flag("--all-links", all_links, "evaluate all gt links, not just the test split");
  uint32_t pg_train_pairs = 150;
  eval->add_option("--pg-train-pairs", pg_train_pairs, "mask-predictor training pairs");
  int32_t pg_epochs = 15;
  eval->add_option("--pg-epochs", pg_epochs, "mask-predictor training epochs");
  ExplainerFlags eval_flags;
  eval_flags.add_options(eval);

  // bench
  auto* bench = app.add_subcommand("bench", "time explanations across graph sizes");
  std::vector<uint64_t> sizes;
  bench->add_option("--sizes", sizes, "target |E_c| values (repeatable)");
  uint32_t trials = 3;
  bench->add_option("--trials", trials, "trials per size (median reported)");
  ExplainerFlags bench_flags;
  bench_flags.cfg.max_iterations = 20;
  bench_flags.add_options(bench);

  // verify-theory
  auto* theory = app.add_subcommand("verify-theory",
                                    "check path-count and k-core-size predictions");
  plk_theory_config theory_cfg;
  plk_theory_config_init(&theory_cfg);
  theory->add_option("--n-min", theory_cfg.path_n_min, "smallest n for path counting");
  theory->add_option("--n-max", theory_cfg.path_n_max, "largest n for path counting");
  theory->add_option("--path-density", theory_cfg.path_density, "density d for path counting");
  theory->add_option("--path-trials", theory_cfg.path_trials, "trials per n");
  theory->add_option("--n", theory_cfg.core_n, "random-graph size for the core check");
  theory->add_option("--avg-degree", theory_cfg.avg_degree, "average degree d(n-1)");
  theory->add_option("--k", theory_cfg.core_k, "core order");
  theory->add_option("--core-trials", theory_cfg.core_trials, "core trials");

  // export-dot
  auto* dot_cmd = app.add_subcommand("export-dot", "render an explanation to Graphviz");
  GraphInputs dot_inputs;
  dot_inputs.add_options(dot_cmd, true);
  std::string dot_pair, dot_explanation;
  dot_cmd->add_option("--pair", dot_pair, "source,target as type:id,type:id")->required();
  dot_cmd->add_option("--explanation", dot_explanation, "explanation.json to highlight")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      spec.seed = seed;
      return run_gen_data(preset, spec, out_dir);
    }
    if (train->parsed()) {
      train_cfg.seed = seed;
      return run_train(train_inputs, target_type, train_cfg, out_dir);
    }
    if (explain->parsed()) {
      if (pair_arg.empty() && pairs_file.empty())
        throw CliError{kExitUsageError, "explain needs --pair or --pairs-file"};
      ExplainerFlags flags = explain_flags;
      flags.cfg.seed = seed;
      return run_explain(explain_inputs, model_path, pair_arg, pairs_file, flags, out_dir, jobs,
                         dot);
    }
    if (eval->parsed()) {
      ExplainerFlags flags = eval_flags;
      flags.cfg.seed = seed;
      return run_eval(eval_inputs, eval_model, budgets, max_links, all_links, pg_train_pairs,
                      pg_epochs, flags, seed, out_dir);
    }
    if (bench->parsed()) {
      ExplainerFlags flags = bench_flags;
      flags.cfg.seed = seed;
      return run_bench(sizes, trials, seed, flags, out_dir);
    }
    if (theory->parsed()) {
      theory_cfg.seed = seed;
      return run_verify_theory(theory_cfg, out_dir);
    }
    if (dot_cmd->parsed()) {
      return run_export_dot(dot_inputs, dot_pair, dot_explanation, out_dir);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsageError;
}
