#include "trajclust/trajclust.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "trajclust/error.hpp"
#include "trajclust/evaluation.hpp"
#include "trajclust/generators.hpp"
#include "trajclust/io.hpp"
#include "trajclust/pipeline.hpp"
#include "trajclust/sparse_graph.hpp"
#include "trajclust/trajectory.hpp"

namespace tc = trajclust;

struct tc_ensemble {
  tc::Ensemble value;
};

struct tc_result {
  tc::RunReport report;
  std::size_t n_objects = 0;
};

struct tc_labels {
  std::vector<std::int64_t> values;
};

struct tc_dataset {
  tc::FeatureDataset value;
};

struct tc_pool {
  tc::ClusteringPool value;
};

struct tc_audit {
  std::vector<tc::AuditBucket> buckets;
};

namespace {

thread_local std::string g_last_error;

tc_status fail(tc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
tc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TC_OK;
  } catch (const tc::Error& e) {
    return fail(static_cast<tc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TC_ERR_INTERNAL, e.what());
  }
}

void require_arg(const void* p, const char* name) {
  tc::require(p != nullptr, tc::ErrorCode::kUsage, std::string(name) + " must not be null");
}

tc::Method to_method(tc_method m) {
  switch (m) {
    case TC_METHOD_PTA_AL:
      return tc::Method::kPtaAl;
    case TC_METHOD_PTA_CL:
      return tc::Method::kPtaCl;
    case TC_METHOD_PTA_SL:
      return tc::Method::kPtaSl;
    case TC_METHOD_PTGP:
      return tc::Method::kPtgp;
    case TC_METHOD_EAC_AL:
      return tc::Method::kEacAl;
    case TC_METHOD_EAC_CL:
      return tc::Method::kEacCl;
    case TC_METHOD_EAC_SL:
      return tc::Method::kEacSl;
  }
  tc::throw_error(tc::ErrorCode::kUsage, "unknown method");
}

}  // namespace

extern "C" {

TC_API const char* tc_last_error(void) { return g_last_error.c_str(); }

TC_API const char* tc_version(void) { return "0.1.0"; }

TC_API tc_status tc_ensemble_create(size_t n_objects, size_t n_clusterings, const int64_t* labels,
                                    tc_ensemble** out) {
  return guarded([&] {
    require_arg(out, "out");
    require_arg(labels, "labels");
    *out = new tc_ensemble{tc::Ensemble::from_labels(
        n_objects, n_clusterings, std::span<const std::int64_t>(labels, n_objects * n_clusterings))};
  });
}

TC_API tc_status tc_ensemble_read_csv(const char* path, tc_ensemble** out) {
  return guarded([&] {
    require_arg(out, "out");
    require_arg(path, "path");
    *out = new tc_ensemble{tc::read_ensemble_csv(path)};
  });
}

TC_API tc_status tc_ensemble_write_csv(const tc_ensemble* ensemble, const char* path) {
  return guarded([&] {
    require_arg(ensemble, "ensemble");
    require_arg(path, "path");
    tc::write_ensemble_csv(path, ensemble->value);
  });
}

TC_API size_t tc_ensemble_num_objects(const tc_ensemble* ensemble) {
  return ensemble ? ensemble->value.n_objects() : 0;
}

TC_API size_t tc_ensemble_num_clusterings(const tc_ensemble* ensemble) {
  return ensemble ? ensemble->value.n_clusterings() : 0;
}

TC_API tc_status tc_ensemble_dump_graphs(const tc_ensemble* ensemble, size_t elite_neighbors,
                                         const char* msg_path, const char* keng_path) {
  return guarded([&] {
    require_arg(ensemble, "ensemble");
    const tc::MicroclusterSet mcs = tc::build_microclusters(ensemble->value);
    const tc::SparseSimGraph msg = tc::build_msg(tc::compute_mca(ensemble->value, mcs), mcs);
    std::size_t k = elite_neighbors;
    if (k == TC_PARAM_AUTO) k = tc::default_walk_parameter(mcs.size());
    if (k == TC_PARAM_ALL) k = std::max<std::size_t>(mcs.size() - 1, 1);
    if (msg_path) tc::write_edge_list(msg_path, msg);
    if (keng_path) tc::write_edge_list(keng_path, tc::build_keng(msg, k));
  });
}

TC_API void tc_ensemble_free(tc_ensemble* ensemble) { delete ensemble; }

TC_API void tc_run_options_init(tc_run_options* options) {
  if (!options) return;
  const tc::RunConfig defaults;
  options->method = TC_METHOD_PTA_AL;
  options->k = defaults.k;
  options->elite_neighbors = TC_PARAM_AUTO;
  options->steps = TC_PARAM_AUTO;
  options->seed = defaults.seed;
  options->cl_semantics = TC_CL_SUM;
  options->kmeans_restarts = defaults.kmeans_restarts;
  options->cache_dir = nullptr;
}

TC_API tc_status tc_method_parse(const char* name, tc_method* out) {
  return guarded([&] {
    require_arg(name, "name");
    require_arg(out, "out");
    const auto m = tc::parse_method(name);
    tc::require(m.has_value(), tc::ErrorCode::kUsage,
                std::string("unknown method '") + name +
                    "' (expected pta-al, pta-cl, pta-sl, ptgp, eac-al, eac-cl or eac-sl)");
    *out = static_cast<tc_method>(*m);
  });
}

TC_API tc_status tc_run(const tc_ensemble* ensemble, const tc_run_options* options, tc_result** out) {
  return guarded([&] {
    require_arg(ensemble, "ensemble");
    require_arg(options, "options");
    require_arg(out, "out");
    tc::RunConfig config;
    config.method = to_method(options->method);
    config.k = options->k;
    config.elite_neighbors = options->elite_neighbors == TC_PARAM_ALL ? tc::kParamAll : options->elite_neighbors;
    config.steps = options->steps;
    tc::require(config.steps != tc::kParamAll, tc::ErrorCode::kUsage, "walk length T must be finite");
    config.seed = options->seed;
    config.cl_semantics = options->cl_semantics == TC_CL_MIN ? tc::CompleteLinkSemantics::kMin
                                                             : tc::CompleteLinkSemantics::kSum;
    config.kmeans_restarts = options->kmeans_restarts;
    if (options->cache_dir) config.cache_dir = options->cache_dir;
    auto result = std::make_unique<tc_result>();
    result->report = tc::run_pipeline(ensemble->value, config);
    result->n_objects = ensemble->value.n_objects();
    *out = result.release();
  });
}

TC_API void tc_result_summary(const tc_result* result, tc_summary* out) {
  if (!result || !out) return;
  const tc::RunReport& r = result->report;
  out->n_objects = result->n_objects;
  out->n_microclusters = r.microclusters.size();
  out->msg_links = r.msg_links;
  out->keng_links = r.keng_links;
  out->ratio_pl = r.ratio_pl.value_or(-1.0);
  out->elite_neighbors = r.elite_neighbors;
  out->elite_all = r.elite_all ? 1 : 0;
  out->steps = r.steps;
  out->k_requested = r.consensus.k_requested;
  out->k_found = r.consensus.k_found;
  out->pts_from_cache = r.pts_from_cache ? 1 : 0;
  out->seconds = r.seconds;
}

TC_API const char* tc_result_method(const tc_result* result) {
  return result ? result->report.consensus.method.c_str() : "";
}

TC_API const int32_t* tc_result_labels(const tc_result* result) {
  return result ? result->report.consensus.object_labels.data() : nullptr;
}

TC_API size_t tc_result_num_warnings(const tc_result* result) {
  return result ? result->report.consensus.warnings.size() : 0;
}

TC_API const char* tc_result_warning(const tc_result* result, size_t index) {
  if (!result || index >= result->report.consensus.warnings.size()) return nullptr;
  return result->report.consensus.warnings[index].c_str();
}

TC_API tc_status tc_result_write_labels(const tc_result* result, const char* path) {
  return guarded([&] {
    require_arg(result, "result");
    require_arg(path, "path");
    tc::write_labels_csv(path, result->report.consensus.object_labels);
  });
}

TC_API tc_status tc_result_write_dendrogram(const tc_result* result, const char* path) {
  return guarded([&] {
    require_arg(result, "result");
    require_arg(path, "path");
    const auto& dendrogram = result->report.consensus.dendrogram;
    tc::require(dendrogram.has_value(), tc::ErrorCode::kUsage,
                "method " + result->report.consensus.method + " does not produce a dendrogram");
    std::string text = "left,right,similarity\n";
    char line[96];
    for (const tc::Merge& m : dendrogram->merges()) {
      std::snprintf(line, sizeof(line), "%d,%d,%.17g\n", m.left, m.right, m.similarity);
      text += line;
    }
    tc::write_file_atomic(path, text);
  });
}

TC_API void tc_result_free(tc_result* result) { delete result; }

TC_API tc_status tc_labels_read_csv(const char* path, tc_labels** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new tc_labels{tc::read_labels_csv(path)};
  });
}

TC_API size_t tc_labels_size(const tc_labels* labels) { return labels ? labels->values.size() : 0; }

TC_API const int64_t* tc_labels_data(const tc_labels* labels) {
  return labels ? labels->values.data() : nullptr;
}

TC_API void tc_labels_free(tc_labels* labels) { delete labels; }

TC_API tc_status tc_nmi(const int64_t* a, const int64_t* b, size_t n, double* out) {
  return guarded([&] {
    require_arg(a, "a");
    require_arg(b, "b");
    require_arg(out, "out");
    *out = tc::nmi(std::span<const std::int64_t>(a, n), std::span<const std::int64_t>(b, n));
  });
}

TC_API tc_status tc_dataset_read_csv(const char* path, int last_column_is_label, tc_dataset** out) {
  return guarded([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new tc_dataset{tc::read_dataset_csv(path, last_column_is_label != 0)};
  });
}

TC_API size_t tc_dataset_num_objects(const tc_dataset* dataset) {
  return dataset ? dataset->value.n_objects() : 0;
}

TC_API void tc_dataset_free(tc_dataset* dataset) { delete dataset; }

TC_API tc_status tc_pool_build(const tc_dataset* dataset, size_t pool_size, uint64_t seed, size_t threads,
                               tc_pool** out) {
  return guarded([&] {
    require_arg(dataset, "dataset");
    require_arg(out, "out");
    *out = new tc_pool{tc::build_pool(dataset->value, pool_size, seed, threads)};
  });
}

TC_API size_t tc_pool_size(const tc_pool* pool) { return pool ? pool->value.size() : 0; }

TC_API tc_status tc_pool_draw(const tc_pool* pool, size_t size, uint64_t seed, size_t* members,
                              tc_ensemble** out) {
  return guarded([&] {
    require_arg(pool, "pool");
    require_arg(out, "out");
    const auto drawn = tc::draw_members(pool->value, size, seed);
    auto ensemble = std::make_unique<tc_ensemble>(tc_ensemble{tc::make_ensemble(pool->value, drawn)});
    if (members) std::copy(drawn.begin(), drawn.end(), members);
    *out = ensemble.release();
  });
}

TC_API tc_status tc_pool_write_metadata_json(const tc_pool* pool, uint64_t pool_seed, uint64_t draw_seed,
                                             const size_t* members, size_t n_members, const char* path) {
  return guarded([&] {
    require_arg(pool, "pool");
    require_arg(path, "path");
    tc::require(members != nullptr || n_members == 0, tc::ErrorCode::kUsage, "members must not be null");
    const tc::ClusteringPool& p = pool->value;
    nlohmann::ordered_json doc;
    doc["n_objects"] = p.n_objects;
    doc["pool_size"] = p.size();
    doc["pool_seed"] = pool_seed;
    doc["draw_seed"] = draw_seed;
    doc["cluster_upper_bound"] = tc::pool_cluster_upper_bound(p.n_objects);
    auto& pool_json = doc["pool"] = nlohmann::ordered_json::array();
    for (const tc::PoolMember& m : p.members) {
      pool_json.push_back({{"algorithm", tc::to_string(m.algorithm)},
                           {"requested_clusters", m.requested_clusters},
                           {"found_clusters", m.found_clusters},
                           {"seed", m.seed}});
    }
    auto& drawn = doc["ensemble_members"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < n_members; ++i) {
      tc::require(members[i] < p.size(), tc::ErrorCode::kUsage, "member index out of range");
      drawn.push_back(members[i]);
    }
    tc::write_file_atomic(path, doc.dump(2) + "\n");
  });
}

TC_API void tc_pool_free(tc_pool* pool) { delete pool; }

TC_API tc_status tc_audit_run(const tc_ensemble* ensemble, const int64_t* truth, size_t n, tc_audit** out) {
  return guarded([&] {
    require_arg(ensemble, "ensemble");
    require_arg(out, "out");
    tc::require(truth != nullptr && n > 0, tc::ErrorCode::kInvalidInput, "link audit needs ground-truth labels");
    for (std::size_t i = 0; i < n; ++i)
      tc::require(truth[i] >= 0, tc::ErrorCode::kInvalidInput,
                  "ground-truth label " + std::to_string(truth[i]) + " at row " + std::to_string(i + 1) +
                      " is negative");
    const std::vector<tc::Label> classes = tc::canonicalize(std::span<const std::int64_t>(truth, n));
    const tc::MicroclusterSet mcs = tc::build_microclusters(ensemble->value);
    const tc::SparseSimGraph msg = tc::build_msg(tc::compute_mca(ensemble->value, mcs), mcs);
    *out = new tc_audit{tc::link_audit(msg, mcs, classes)};
  });
}

TC_API size_t tc_audit_num_buckets(const tc_audit* audit) { return audit ? audit->buckets.size() : 0; }

TC_API void tc_audit_bucket_at(const tc_audit* audit, size_t index, tc_audit_bucket* out) {
  if (!audit || !out || index >= audit->buckets.size()) return;
  const tc::AuditBucket& b = audit->buckets[index];
  *out = {b.shared, b.weight, b.links, b.correct, b.link_fraction, b.correct_rate};
}

TC_API tc_status tc_audit_write_csv(const tc_audit* audit, const char* path) {
  return guarded([&] {
    require_arg(audit, "audit");
    require_arg(path, "path");
    tc::write_file_atomic(path, tc::format_audit_csv(audit->buckets));
  });
}

TC_API void tc_audit_free(tc_audit* audit) { delete audit; }

}  // extern "C"
