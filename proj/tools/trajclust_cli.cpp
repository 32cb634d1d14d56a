// Command-line front end: run, generate, eval, audit.
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trajclust/trajclust.h"

namespace {

constexpr int kExitUsage = TC_ERR_USAGE;

struct Failure {
  tc_status status;
};

void check(tc_status status) {
  if (status != TC_OK) {
    std::cerr << "error: " << tc_last_error() << "\n";
    throw Failure{status};
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using EnsemblePtr = std::unique_ptr<tc_ensemble, Deleter<tc_ensemble, tc_ensemble_free>>;
using ResultPtr = std::unique_ptr<tc_result, Deleter<tc_result, tc_result_free>>;
using LabelsPtr = std::unique_ptr<tc_labels, Deleter<tc_labels, tc_labels_free>>;
using DatasetPtr = std::unique_ptr<tc_dataset, Deleter<tc_dataset, tc_dataset_free>>;
using PoolPtr = std::unique_ptr<tc_pool, Deleter<tc_pool, tc_pool_free>>;
using AuditPtr = std::unique_ptr<tc_audit, Deleter<tc_audit, tc_audit_free>>;

EnsemblePtr load_ensemble(const std::string& path) {
  tc_ensemble* e = nullptr;
  check(tc_ensemble_read_csv(path.c_str(), &e));
  return EnsemblePtr(e);
}

LabelsPtr load_labels(const std::string& path) {
  tc_labels* l = nullptr;
  check(tc_labels_read_csv(path.c_str(), &l));
  return LabelsPtr(l);
}

// "auto", optionally "all", or a positive count.
size_t parse_param(const std::string& text, const char* name, bool allow_all) {
  if (text == "auto") return TC_PARAM_AUTO;
  if (allow_all && text == "all") return TC_PARAM_ALL;
  size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value == 0 || text[0] == '-') {
    std::cerr << "error: --" << name << " must be a positive integer" << (allow_all ? ", 'auto' or 'all'" : " or 'auto'")
              << ", got '" << text << "'\n";
    throw Failure{TC_ERR_USAGE};
  }
  return static_cast<size_t>(value);
}

struct RunArgs {
  std::string ensemble;
  std::string out = "labels.csv";
  std::string method = "pta-al";
  size_t k = 0;
  std::string elite = "auto";
  std::string steps = "auto";
  uint64_t seed = 20160101;
  std::string cl_semantics = "sum";
  std::string cache_dir;
  std::string dendrogram;
  std::string msg_edges;
  std::string keng_edges;
  bool json = false;
};

int cmd_run(const RunArgs& a) {
  tc_run_options opts;
  tc_run_options_init(&opts);
  check(tc_method_parse(a.method.c_str(), &opts.method));
  opts.k = a.k;
  if (!a.dendrogram.empty() && opts.method == TC_METHOD_PTGP) {
    std::cerr << "error: --dendrogram needs an agglomerative method (pta-* or eac-*)\n";
    return TC_ERR_USAGE;
  }
  opts.elite_neighbors = parse_param(a.elite, "K", true);
  opts.steps = parse_param(a.steps, "T", false);
  opts.seed = a.seed;
  opts.cl_semantics = a.cl_semantics == "min" ? TC_CL_MIN : TC_CL_SUM;
  if (!a.cache_dir.empty()) opts.cache_dir = a.cache_dir.c_str();

  EnsemblePtr ensemble = load_ensemble(a.ensemble);
  tc_result* raw = nullptr;
  check(tc_run(ensemble.get(), &opts, &raw));
  ResultPtr result(raw);
  if (!a.msg_edges.empty() || !a.keng_edges.empty())
    check(tc_ensemble_dump_graphs(ensemble.get(), opts.elite_neighbors,
                                  a.msg_edges.empty() ? nullptr : a.msg_edges.c_str(),
                                  a.keng_edges.empty() ? nullptr : a.keng_edges.c_str()));
  check(tc_result_write_labels(result.get(), a.out.c_str()));
  if (!a.dendrogram.empty()) check(tc_result_write_dendrogram(result.get(), a.dendrogram.c_str()));

  tc_summary s;
  tc_result_summary(result.get(), &s);
  for (size_t i = 0; i < tc_result_num_warnings(result.get()); ++i)
    std::cerr << "warning: " << tc_result_warning(result.get(), i) << "\n";
  const std::string elite_text =
      s.elite_all ? "ALL (" + std::to_string(s.elite_neighbors) + ")" : std::to_string(s.elite_neighbors);
  if (a.json) {
    nlohmann::ordered_json j;
    j["method"] = tc_result_method(result.get());
    j["objects"] = s.n_objects;
    j["microclusters"] = s.n_microclusters;
    j["msg_links"] = s.msg_links;
    j["keng_links"] = s.keng_links;
    j["ratio_pl"] = s.ratio_pl < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s.ratio_pl);
    j["K"] = s.elite_all ? nlohmann::ordered_json("ALL") : nlohmann::ordered_json(s.elite_neighbors);
    j["T"] = s.steps;
    j["k"] = s.k_requested;
    j["k_found"] = s.k_found;
    j["pts_cached"] = s.pts_from_cache != 0;
    j["seconds"] = s.seconds;
    j["labels"] = a.out;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("method          %s\n", tc_result_method(result.get()));
    std::printf("objects         %zu\n", s.n_objects);
    std::printf("microclusters   %zu\n", s.n_microclusters);
    std::printf("MSG links       %zu\n", s.msg_links);
    std::printf("K-ENG links     %zu\n", s.keng_links);
    if (s.ratio_pl < 0)
      std::printf("RatioPL         n/a\n");
    else
      std::printf("RatioPL         %.4f\n", s.ratio_pl);
    std::printf("K               %s\n", elite_text.c_str());
    std::printf("T               %zu\n", s.steps);
    std::printf("k               %zu (found %zu)\n", s.k_requested, s.k_found);
    if (s.pts_from_cache) std::printf("PTS             cached\n");
    std::printf("wall time       %.3f s\n", s.seconds);
    std::printf("labels          %s\n", a.out.c_str());
  }
  return 0;
}

struct GenerateArgs {
  std::string data;
  bool labeled = false;
  size_t pool_size = 100;
  size_t members = 10;
  uint64_t seed = 20160101;
  size_t threads = 1;
  std::string out = "ensemble.csv";
  std::string metadata;
};

int cmd_generate(const GenerateArgs& a) {
  tc_dataset* raw_data = nullptr;
  check(tc_dataset_read_csv(a.data.c_str(), a.labeled ? 1 : 0, &raw_data));
  DatasetPtr data(raw_data);
  if (a.members > a.pool_size) {
    std::cerr << "error: ensemble size M=" << a.members << " exceeds pool size " << a.pool_size << "\n";
    return TC_ERR_USAGE;
  }
  tc_pool* raw_pool = nullptr;
  check(tc_pool_build(data.get(), a.pool_size, a.seed, a.threads, &raw_pool));
  PoolPtr pool(raw_pool);
  std::vector<size_t> drawn(a.members);
  tc_ensemble* raw_ensemble = nullptr;
  check(tc_pool_draw(pool.get(), a.members, a.seed, drawn.data(), &raw_ensemble));
  EnsemblePtr ensemble(raw_ensemble);
  const std::string metadata = a.metadata.empty() ? a.out + ".json" : a.metadata;
  check(tc_pool_write_metadata_json(pool.get(), a.seed, a.seed, drawn.data(), drawn.size(), metadata.c_str()));
  check(tc_ensemble_write_csv(ensemble.get(), a.out.c_str()));
  std::printf("wrote %zu x %zu ensemble to %s (metadata %s)\n", tc_ensemble_num_objects(ensemble.get()),
              tc_ensemble_num_clusterings(ensemble.get()), a.out.c_str(), metadata.c_str());
  return 0;
}

int cmd_eval(const std::string& labels_path, const std::string& truth_path, bool json) {
  LabelsPtr labels = load_labels(labels_path);
  LabelsPtr truth = load_labels(truth_path);
  if (tc_labels_size(labels.get()) != tc_labels_size(truth.get())) {
    std::cerr << "error: " << labels_path << " has " << tc_labels_size(labels.get()) << " labels but "
              << truth_path << " has " << tc_labels_size(truth.get()) << "\n";
    return TC_ERR_INVALID_INPUT;
  }
  double value = 0.0;
  check(tc_nmi(tc_labels_data(labels.get()), tc_labels_data(truth.get()), tc_labels_size(labels.get()), &value));
  if (json) {
    nlohmann::ordered_json j;
    j["nmi"] = value;
    j["n"] = tc_labels_size(labels.get());
    std::cout << j.dump() << "\n";
  } else {
    std::printf("%.6f\n", value);
  }
  return 0;
}

int cmd_audit(const std::string& ensemble_path, const std::string& truth_path, const std::string& out,
              bool json) {
  EnsemblePtr ensemble = load_ensemble(ensemble_path);
  LabelsPtr truth = load_labels(truth_path);
  tc_audit* raw = nullptr;
  check(tc_audit_run(ensemble.get(), tc_labels_data(truth.get()), tc_labels_size(truth.get()), &raw));
  AuditPtr audit(raw);
  if (!out.empty()) check(tc_audit_write_csv(audit.get(), out.c_str()));
  const size_t n = tc_audit_num_buckets(audit.get());
  if (json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < n; ++i) {
      tc_audit_bucket b;
      tc_audit_bucket_at(audit.get(), i, &b);
      rows.push_back({{"weight", b.weight},
                      {"links", b.links},
                      {"link_fraction", b.link_fraction},
                      {"correct", b.correct},
                      {"correct_rate", b.correct_rate}});
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    std::printf("%-8s %14s %10s %12s\n", "weight", "links", "fraction", "correct");
    for (size_t i = 0; i < n; ++i) {
      tc_audit_bucket b;
      tc_audit_bucket_at(audit.get(), i, &b);
      std::printf("%-8.4f %14llu %9.2f%% %11.2f%%\n", b.weight, static_cast<unsigned long long>(b.links),
                  100.0 * b.link_fraction, 100.0 * b.correct_rate);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust ensemble clustering by probability trajectories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tc_version()));

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Consensus clustering of an ensemble CSV");
  run_cmd->add_option("ensemble", run.ensemble, "Ensemble CSV (objects x base clusterings)")->required();
  run_cmd->add_option("-o,--out", run.out, "Output labels CSV")->capture_default_str();
  run_cmd->add_option("--method", run.method, "pta-al|pta-cl|pta-sl|ptgp|eac-al|eac-cl|eac-sl")
      ->capture_default_str();
  run_cmd->add_option("--k", run.k, "Number of consensus clusters")->required();
  run_cmd->add_option("--K", run.elite, "Elite neighbors: auto, all or a count")->capture_default_str();
  run_cmd->add_option("--T", run.steps, "Random-walk steps: auto or a count")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Seed for the spectral k-means step")->capture_default_str();
  run_cmd->add_option("--cl-semantics", run.cl_semantics, "Complete-link region similarity: sum or min")
      ->check(CLI::IsMember({"sum", "min"}))
      ->capture_default_str();
  run_cmd->add_option("--cache-dir", run.cache_dir, "Directory for cached similarity matrices");
  run_cmd->add_option("--dendrogram", run.dendrogram, "Write the merge list (PTA/EAC only)");
  run_cmd->add_option("--msg-edges", run.msg_edges, "Write the MSG edge list");
  run_cmd->add_option("--keng-edges", run.keng_edges, "Write the K-ENG edge list");
  run_cmd->add_flag("--json", run.json, "Print the summary as JSON");
  // Consensus runs on one thread; the value is validated only.
  size_t run_threads = 1;
  run_cmd->add_option("--threads", run_threads, "Worker threads")->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Build a clustering pool and draw an ensemble");
  gen_cmd->add_option("data", gen.data, "Feature CSV")->required();
  gen_cmd->add_flag("--labeled", gen.labeled, "Last column holds ground-truth classes");
  gen_cmd->add_option("--pool-size", gen.pool_size, "Pool size (even)")->capture_default_str();
  gen_cmd->add_option("--M", gen.members, "Ensemble size")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--threads", gen.threads, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out, "Output ensemble CSV")->capture_default_str();
  gen_cmd->add_option("--metadata", gen.metadata, "JSON sidecar path (default <out>.json)");

  std::string eval_labels, eval_truth;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "NMI between a labeling and ground truth");
  eval_cmd->add_option("labels", eval_labels, "Labels CSV")->required();
  eval_cmd->add_option("truth", eval_truth, "Ground-truth CSV")->required();
  eval_cmd->add_flag("--json", eval_json, "Print JSON");

  std::string audit_ensemble, audit_truth, audit_out;
  bool audit_json = false;
  auto* audit_cmd = app.add_subcommand("audit", "Correct-decision rate of co-association links by weight");
  audit_cmd->add_option("ensemble", audit_ensemble, "Ensemble CSV")->required();
  audit_cmd->add_option("truth", audit_truth, "Ground-truth CSV")->required();
  audit_cmd->add_option("-o,--out", audit_out, "Write the table as CSV");
  audit_cmd->add_flag("--json", audit_json, "Print JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*gen_cmd) return cmd_generate(gen);
    if (*eval_cmd) return cmd_eval(eval_labels, eval_truth, eval_json);
    if (*audit_cmd) return cmd_audit(audit_ensemble, audit_truth, audit_out, audit_json);
  } catch (const Failure& f) {
    return static_cast<int>(f.status);
  }
  return kExitUsage;
}
