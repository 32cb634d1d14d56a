/* C interface to the trajclust ensemble clustering library. */
#ifndef TRAJCLUST_TRAJCLUST_H
#define TRAJCLUST_TRAJCLUST_H

#include <stddef.h>
#include <stdint.h>

#if defined(TRAJCLUST_BUILDING_LIBRARY)
#define TC_API __attribute__((visibility("default")))
#else
#define TC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the command-line tool. */
typedef enum tc_status {
  TC_OK = 0,
  TC_ERR_USAGE = 2,
  TC_ERR_IO = 3,
  TC_ERR_INVALID_INPUT = 4,
  TC_ERR_NUMERIC = 5,
  TC_ERR_INTERNAL = 6
} tc_status;

typedef struct tc_ensemble tc_ensemble;
typedef struct tc_result tc_result;
typedef struct tc_labels tc_labels;
typedef struct tc_dataset tc_dataset;
typedef struct tc_pool tc_pool;
typedef struct tc_audit tc_audit;

/* Message for the most recent failure on the calling thread. */
TC_API const char* tc_last_error(void);
TC_API const char* tc_version(void);

/* ---- ensembles ---------------------------------------------------------- */

/* `labels` is row-major, n_objects x n_clusterings. */
TC_API tc_status tc_ensemble_create(size_t n_objects, size_t n_clusterings, const int64_t* labels,
                                    tc_ensemble** out);
TC_API tc_status tc_ensemble_read_csv(const char* path, tc_ensemble** out);
TC_API tc_status tc_ensemble_write_csv(const tc_ensemble* ensemble, const char* path);
TC_API size_t tc_ensemble_num_objects(const tc_ensemble* ensemble);
TC_API size_t tc_ensemble_num_clusterings(const tc_ensemble* ensemble);
/* Writes the MSG and K-ENG edge lists; `elite_neighbors` follows tc_run_options. */
TC_API tc_status tc_ensemble_dump_graphs(const tc_ensemble* ensemble, size_t elite_neighbors,
                                         const char* msg_path, const char* keng_path);
TC_API void tc_ensemble_free(tc_ensemble* ensemble);

/* ---- consensus ---------------------------------------------------------- */

#define TC_PARAM_AUTO ((size_t)0)
#define TC_PARAM_ALL ((size_t)-1)

typedef enum tc_method {
  TC_METHOD_PTA_AL = 0,
  TC_METHOD_PTA_CL,
  TC_METHOD_PTA_SL,
  TC_METHOD_PTGP,
  TC_METHOD_EAC_AL,
  TC_METHOD_EAC_CL,
  TC_METHOD_EAC_SL
} tc_method;

typedef enum tc_cl_semantics { TC_CL_SUM = 0, TC_CL_MIN = 1 } tc_cl_semantics;

typedef struct tc_run_options {
  tc_method method;
  size_t k;
  size_t elite_neighbors; /* TC_PARAM_AUTO, TC_PARAM_ALL or a count */
  size_t steps;           /* TC_PARAM_AUTO or a count */
  uint64_t seed;
  tc_cl_semantics cl_semantics;
  size_t kmeans_restarts;
  const char* cache_dir; /* NULL disables the similarity cache */
} tc_run_options;

TC_API void tc_run_options_init(tc_run_options* options);
/* Parses "pta-al", "pta-cl", "pta-sl", "ptgp", "eac-al", "eac-cl", "eac-sl". */
TC_API tc_status tc_method_parse(const char* name, tc_method* out);

typedef struct tc_summary {
  size_t n_objects;
  size_t n_microclusters;
  size_t msg_links;
  size_t keng_links;
  double ratio_pl; /* negative when the MSG has no links */
  size_t elite_neighbors;
  int elite_all;
  size_t steps;
  size_t k_requested;
  size_t k_found;
  int pts_from_cache;
  double seconds;
} tc_summary;

TC_API tc_status tc_run(const tc_ensemble* ensemble, const tc_run_options* options, tc_result** out);
TC_API void tc_result_summary(const tc_result* result, tc_summary* out);
TC_API const char* tc_result_method(const tc_result* result);
/* Object labels, length tc_summary.n_objects. */
TC_API const int32_t* tc_result_labels(const tc_result* result);
TC_API size_t tc_result_num_warnings(const tc_result* result);
TC_API const char* tc_result_warning(const tc_result* result, size_t index);
TC_API tc_status tc_result_write_labels(const tc_result* result, const char* path);
/* Merge list "left,right,similarity"; TC_ERR_USAGE for methods without a dendrogram. */
TC_API tc_status tc_result_write_dendrogram(const tc_result* result, const char* path);
TC_API void tc_result_free(tc_result* result);

/* ---- labelings and evaluation ------------------------------------------- */

TC_API tc_status tc_labels_read_csv(const char* path, tc_labels** out);
TC_API size_t tc_labels_size(const tc_labels* labels);
TC_API const int64_t* tc_labels_data(const tc_labels* labels);
TC_API void tc_labels_free(tc_labels* labels);

TC_API tc_status tc_nmi(const int64_t* a, const int64_t* b, size_t n, double* out);

/* ---- feature data and clustering pools ---------------------------------- */

TC_API tc_status tc_dataset_read_csv(const char* path, int last_column_is_label, tc_dataset** out);
TC_API size_t tc_dataset_num_objects(const tc_dataset* dataset);
TC_API void tc_dataset_free(tc_dataset* dataset);

TC_API tc_status tc_pool_build(const tc_dataset* dataset, size_t pool_size, uint64_t seed, size_t threads,
                               tc_pool** out);
TC_API size_t tc_pool_size(const tc_pool* pool);
/* Draws `size` distinct members into a new ensemble. `members`, if not NULL,
 * receives the `size` chosen pool indices in draw order. */
TC_API tc_status tc_pool_draw(const tc_pool* pool, size_t size, uint64_t seed, size_t* members,
                              tc_ensemble** out);
/* JSON sidecar describing every pool member and the drawn subset. */
TC_API tc_status tc_pool_write_metadata_json(const tc_pool* pool, uint64_t pool_seed,
                                             uint64_t draw_seed, const size_t* members,
                                             size_t n_members, const char* path);
TC_API void tc_pool_free(tc_pool* pool);

/* ---- link reliability audit --------------------------------------------- */

typedef struct tc_audit_bucket {
  size_t shared; /* weight = shared / M */
  double weight;
  uint64_t links;
  uint64_t correct;
  double link_fraction;
  double correct_rate;
} tc_audit_bucket;

TC_API tc_status tc_audit_run(const tc_ensemble* ensemble, const int64_t* truth, size_t n, tc_audit** out);
TC_API size_t tc_audit_num_buckets(const tc_audit* audit);
TC_API void tc_audit_bucket_at(const tc_audit* audit, size_t index, tc_audit_bucket* out);
TC_API tc_status tc_audit_write_csv(const tc_audit* audit, const char* path);
TC_API void tc_audit_free(tc_audit* audit);

#ifdef __cplusplus
}
#endif

#endif /* TRAJCLUST_TRAJCLUST_H */
