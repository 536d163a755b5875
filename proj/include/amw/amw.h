/* amw - adaptive modularity maximization via learned edge weighting.
 *
 * C interface to the core library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns an
 * amw_status and writes results through out-parameters. Error details for
 * the most recent failing call on the current thread are available via
 * amw_last_error().
 */
#ifndef AMW_H
#define AMW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AMW_API __declspec(dllexport)
#else
#define AMW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum amw_status {
    AMW_OK = 0,
    AMW_ERR_PARSE = 2,       /* malformed input text */
    AMW_ERR_DOMAIN = 3,      /* operation precondition violated */
    AMW_ERR_CONVERGENCE = 4, /* training failed to produce a usable model */
    AMW_ERR_IO = 5,          /* file system failure */
    AMW_ERR_INVALID = 6      /* bad handle or argument */
} amw_status;

typedef struct amw_graph amw_graph;
typedef struct amw_partition amw_partition;
typedef struct amw_model amw_model;
typedef struct amw_labeled_graph amw_labeled_graph; /* graph + ground-truth partition */

/* Most recent error message on this thread; empty string when none. */
AMW_API const char* amw_last_error(void);

/* ---- graphs ------------------------------------------------------------ */

/* Edge-list text: "u v" or "u v w" per line, '#' comments. */
AMW_API amw_status amw_graph_load_file(const char* path, amw_graph** out);
AMW_API amw_status amw_graph_load_text(const char* text, amw_graph** out);
AMW_API amw_status amw_graph_save_file(const amw_graph* g, const char* path);
/* Edge-list text with original labels; free with amw_string_free. */
AMW_API amw_status amw_graph_to_text(const amw_graph* g, char** out);
AMW_API void amw_string_free(char* s);
AMW_API void amw_graph_free(amw_graph* g);

AMW_API amw_status amw_graph_node_count(const amw_graph* g, int32_t* out);
AMW_API amw_status amw_graph_edge_count(const amw_graph* g, size_t* out);
AMW_API amw_status amw_graph_average_degree(const amw_graph* g, double* out);
AMW_API amw_status amw_graph_average_clustering(const amw_graph* g, double* out);
AMW_API amw_status amw_graph_strip_nonpositive(const amw_graph* g, amw_graph** out);

/* ---- SBM generation ---------------------------------------------------- */

typedef struct amw_sbm_config {
    int32_t n_blocks;
    int32_t block_size_min;
    int32_t block_size_max;
    double p_intra;
    double inter_edges_per_pair_rate;
    int32_t n_candidates;
    uint64_t rng_seed;
} amw_sbm_config;

/* Spec defaults (26 blocks of 8..30 nodes, p_intra 0.9, rate 1.0, 10
 * candidates). */
AMW_API void amw_sbm_config_init(amw_sbm_config* cfg);

AMW_API amw_status amw_sbm_generate(const amw_sbm_config* cfg, amw_labeled_graph** out);
/* Candidate instances thinned to the input's average degree; the one with
 * the closest average clustering coefficient wins. */
AMW_API amw_status amw_build_training_graph(const amw_graph* input, const amw_sbm_config* cfg,
                                            amw_labeled_graph** out);
AMW_API amw_status amw_labeled_graph_parts(const amw_labeled_graph* lg, const amw_graph** graph,
                                           const amw_partition** ground_truth);
/* Pairs an existing graph with a ground-truth partition (both copied). */
AMW_API amw_status amw_labeled_graph_from_parts(const amw_graph* g, const amw_partition* gt,
                                                amw_labeled_graph** out);
AMW_API void amw_labeled_graph_free(amw_labeled_graph* lg);

/* ---- partitions --------------------------------------------------------- */

/* "label<TAB>community" per line, matched against g's node labels. */
AMW_API amw_status amw_partition_load_file(const char* path, const amw_graph* g,
                                           amw_partition** out);
AMW_API amw_status amw_partition_save_file(const amw_partition* p, const amw_graph* g,
                                           const char* path);
AMW_API amw_status amw_partition_community_count(const amw_partition* p, int32_t* out);
AMW_API void amw_partition_free(amw_partition* p);

/* ---- training and weighting --------------------------------------------- */

typedef struct amw_train_params {
    double lambda1;
    double lambda2;
    size_t pair_count;
    double max_pair_degree_sum; /* <= 0: no cap */
    double tol;
    int32_t max_iters;
    uint64_t pair_seed;
} amw_train_params;

AMW_API void amw_train_params_init(amw_train_params* p);

AMW_API amw_status amw_train(const amw_labeled_graph* lg, const amw_train_params* params,
                             amw_model** out);
AMW_API amw_status amw_model_load_file(const char* path, amw_model** out);
AMW_API amw_status amw_model_save_file(const amw_model* m, const char* path);
AMW_API amw_status amw_model_coefficients(const amw_model* m, double out[7]);
AMW_API amw_status amw_model_converged(const amw_model* m, int* out);
AMW_API void amw_model_free(amw_model* m);

/* Reweights g's edges as p . x_e from g's own topology. */
AMW_API amw_status amw_apply_weights(const amw_graph* g, const amw_model* m, amw_graph** out);

/* ---- detection and evaluation ------------------------------------------- */

typedef enum amw_detector {
    AMW_DETECTOR_FAST_GREEDY = 0,
    AMW_DETECTOR_LABEL_PROPAGATION = 1
} amw_detector;

/* trace_length (nullable out) reports the merge count for fast greedy, 0 for
 * label propagation. */
AMW_API amw_status amw_detect(const amw_graph* g, amw_detector detector, int use_weights,
                              uint64_t seed, amw_partition** out, int32_t* trace_length);

AMW_API amw_status amw_modularity(const amw_graph* g, const amw_partition* p, int use_weights,
                                  double* out);
AMW_API amw_status amw_modularity_density(const amw_graph* g, const amw_partition* p,
                                          double* out);

typedef struct amw_metric_report {
    double vi;
    double nmi;
    double f_measure;
    double ari;
    double q;    /* unweighted modularity of c on g */
    double q_ds; /* unweighted modularity density of c on g */
} amw_metric_report;

AMW_API amw_status amw_evaluate(const amw_graph* g, const amw_partition* c,
                                const amw_partition* ground_truth, amw_metric_report* out);

/* ---- end-to-end pipeline ------------------------------------------------ */

typedef struct amw_pipeline_config {
    const char* input_path;
    const char* output_dir;
    amw_sbm_config sbm;
    double lambda1;
    const double* lambda2_schedule;
    size_t lambda2_schedule_len; /* 0: default schedule */
    size_t pair_count;
    int32_t pair_draws;
    double tol;
    int32_t max_iters;
    amw_detector detector;
    uint64_t seed;
} amw_pipeline_config;

AMW_API void amw_pipeline_config_init(amw_pipeline_config* cfg);

typedef struct amw_pipeline_report {
    double chosen_lambda2;
    double q;
    double q_ds;
    int32_t communities;
} amw_pipeline_report;

AMW_API amw_status amw_pipeline_run(const amw_pipeline_config* cfg, amw_pipeline_report* out);

#ifdef __cplusplus
}
#endif

#endif /* AMW_H */
