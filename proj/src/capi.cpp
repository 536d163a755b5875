#include "amw/amw.h"

#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "detect.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "metrics.hpp"
#include "partition.hpp"
#include "pipeline.hpp"
#include "regression.hpp"
#include "sbm.hpp"

struct amw_graph {
    amw::Graph g;
};
struct amw_partition {
    amw::Partition p;
};
struct amw_model {
    amw::WeightModel m;
};
struct amw_labeled_graph {
    amw::LabeledGraph lg;
    amw_graph graph_view;
    amw_partition gt_view;
};

namespace {

thread_local std::string g_last_error;

const char* store_error(const std::string& msg) {
    g_last_error = msg;
    return g_last_error.c_str();
}

template <typename Fn>
amw_status guarded(Fn&& fn) {
    try {
        fn();
        return AMW_OK;
    } catch (const amw::ParseError& e) {
        store_error(e.what());
        return AMW_ERR_PARSE;
    } catch (const amw::DomainError& e) {
        store_error(e.what());
        return AMW_ERR_DOMAIN;
    } catch (const amw::ConvergenceError& e) {
        store_error(e.what());
        return AMW_ERR_CONVERGENCE;
    } catch (const amw::IoError& e) {
        store_error(e.what());
        return AMW_ERR_IO;
    } catch (const std::exception& e) {
        store_error(e.what());
        return AMW_ERR_INVALID;
    }
}

amw_status invalid(const char* what) {
    store_error(what);
    return AMW_ERR_INVALID;
}

amw::SbmConfig to_cpp(const amw_sbm_config& c) {
    amw::SbmConfig out;
    out.n_blocks = c.n_blocks;
    out.block_size_min = c.block_size_min;
    out.block_size_max = c.block_size_max;
    out.p_intra = c.p_intra;
    out.inter_edges_per_pair_rate = c.inter_edges_per_pair_rate;
    out.n_candidates = c.n_candidates;
    out.rng_seed = c.rng_seed;
    return out;
}

} // namespace

extern "C" {

const char* amw_last_error(void) { return g_last_error.c_str(); }

amw_status amw_graph_load_file(const char* path, amw_graph** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new amw_graph{amw::Graph::load_edge_list_file(path)}; });
}

amw_status amw_graph_load_text(const char* text, amw_graph** out) {
    if (!text || !out) return invalid("null argument");
    return guarded([&] { *out = new amw_graph{amw::Graph::load_edge_list_text(text)}; });
}

amw_status amw_graph_save_file(const amw_graph* g, const char* path) {
    if (!g || !path) return invalid("null argument");
    return guarded([&] {
        std::ofstream outf(path, std::ios::binary);
        if (!outf) throw amw::IoError(std::string("cannot open ") + path);
        g->g.write_edge_list(outf);
    });
}

amw_status amw_graph_to_text(const amw_graph* g, char** out) {
    if (!g || !out) return invalid("null argument");
    return guarded([&] {
        const std::string text = g->g.to_edge_list_text();
        char* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

void amw_string_free(char* s) { delete[] s; }

void amw_graph_free(amw_graph* g) { delete g; }

amw_status amw_graph_node_count(const amw_graph* g, int32_t* out) {
    if (!g || !out) return invalid("null argument");
    *out = g->g.node_count();
    return AMW_OK;
}

amw_status amw_graph_edge_count(const amw_graph* g, size_t* out) {
    if (!g || !out) return invalid("null argument");
    *out = g->g.edge_count();
    return AMW_OK;
}

amw_status amw_graph_average_degree(const amw_graph* g, double* out) {
    if (!g || !out) return invalid("null argument");
    return guarded([&] { *out = g->g.average_degree(); });
}

amw_status amw_graph_average_clustering(const amw_graph* g, double* out) {
    if (!g || !out) return invalid("null argument");
    return guarded([&] { *out = g->g.average_clustering(); });
}

amw_status amw_graph_strip_nonpositive(const amw_graph* g, amw_graph** out) {
    if (!g || !out) return invalid("null argument");
    return guarded([&] { *out = new amw_graph{g->g.strip_nonpositive_edges()}; });
}

void amw_sbm_config_init(amw_sbm_config* cfg) {
    if (!cfg) return;
    amw::SbmConfig d;
    cfg->n_blocks = d.n_blocks;
    cfg->block_size_min = d.block_size_min;
    cfg->block_size_max = d.block_size_max;
    cfg->p_intra = d.p_intra;
    cfg->inter_edges_per_pair_rate = d.inter_edges_per_pair_rate;
    cfg->n_candidates = d.n_candidates;
    cfg->rng_seed = d.rng_seed;
}

amw_status amw_sbm_generate(const amw_sbm_config* cfg, amw_labeled_graph** out) {
    if (!cfg || !out) return invalid("null argument");
    return guarded([&] {
        auto* lg = new amw_labeled_graph{amw::generate_sbm(to_cpp(*cfg)), {}, {}};
        lg->graph_view.g = lg->lg.graph;
        lg->gt_view.p = lg->lg.ground_truth;
        *out = lg;
    });
}

amw_status amw_build_training_graph(const amw_graph* input, const amw_sbm_config* cfg,
                                    amw_labeled_graph** out) {
    if (!input || !cfg || !out) return invalid("null argument");
    return guarded([&] {
        auto* lg = new amw_labeled_graph{amw::build_training_graph(input->g, to_cpp(*cfg)), {}, {}};
        lg->graph_view.g = lg->lg.graph;
        lg->gt_view.p = lg->lg.ground_truth;
        *out = lg;
    });
}

amw_status amw_labeled_graph_parts(const amw_labeled_graph* lg, const amw_graph** graph,
                                   const amw_partition** ground_truth) {
    if (!lg) return invalid("null argument");
    if (graph) *graph = &lg->graph_view;
    if (ground_truth) *ground_truth = &lg->gt_view;
    return AMW_OK;
}

amw_status amw_labeled_graph_from_parts(const amw_graph* g, const amw_partition* gt,
                                        amw_labeled_graph** out) {
    if (!g || !gt || !out) return invalid("null argument");
    return guarded([&] {
        if (gt->p.node_count() != g->g.node_count())
            throw amw::DomainError("partition does not cover the graph");
        auto* lg = new amw_labeled_graph{{g->g, gt->p}, {}, {}};
        lg->graph_view.g = lg->lg.graph;
        lg->gt_view.p = lg->lg.ground_truth;
        *out = lg;
    });
}

void amw_labeled_graph_free(amw_labeled_graph* lg) { delete lg; }

amw_status amw_partition_load_file(const char* path, const amw_graph* g, amw_partition** out) {
    if (!path || !g || !out) return invalid("null argument");
    return guarded([&] { *out = new amw_partition{amw::Partition::load_file(path, g->g)}; });
}

amw_status amw_partition_save_file(const amw_partition* p, const amw_graph* g, const char* path) {
    if (!p || !g || !path) return invalid("null argument");
    return guarded([&] { p->p.save_file(path, g->g); });
}

amw_status amw_partition_community_count(const amw_partition* p, int32_t* out) {
    if (!p || !out) return invalid("null argument");
    *out = p->p.community_count();
    return AMW_OK;
}

void amw_partition_free(amw_partition* p) { delete p; }

void amw_train_params_init(amw_train_params* p) {
    if (!p) return;
    p->lambda1 = 1.0;
    p->lambda2 = 10.0;
    p->pair_count = 50;
    p->max_pair_degree_sum = 0.0;
    p->tol = 1e-4;
    p->max_iters = 500;
    p->pair_seed = 1;
}

amw_status amw_train(const amw_labeled_graph* lg, const amw_train_params* params,
                     amw_model** out) {
    if (!lg || !params || !out) return invalid("null argument");
    return guarded([&] {
        const double cap = params->max_pair_degree_sum > 0.0
                               ? params->max_pair_degree_sum
                               : std::numeric_limits<double>::infinity();
        auto pairs =
            amw::sample_community_pairs(lg->lg, params->pair_count, cap, params->pair_seed);
        auto problem = amw::make_training_problem(lg->lg, std::move(pairs), params->lambda1,
                                                  params->lambda2, params->tol, params->max_iters,
                                                  params->pair_seed);
        *out = new amw_model{amw::train(problem)};
    });
}

amw_status amw_model_load_file(const char* path, amw_model** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw amw::IoError(std::string("cannot open ") + path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        *out = new amw_model{amw::WeightModel::from_json(text)};
    });
}

amw_status amw_model_save_file(const amw_model* m, const char* path) {
    if (!m || !path) return invalid("null argument");
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw amw::IoError(std::string("cannot open ") + path);
        out << m->m.to_json();
    });
}

amw_status amw_model_coefficients(const amw_model* m, double out[7]) {
    if (!m || !out) return invalid("null argument");
    for (std::size_t i = 0; i < amw::kFeatureCount; ++i) out[i] = m->m.p[i];
    return AMW_OK;
}

amw_status amw_model_converged(const amw_model* m, int* out) {
    if (!m || !out) return invalid("null argument");
    *out = m->m.converged ? 1 : 0;
    return AMW_OK;
}

void amw_model_free(amw_model* m) { delete m; }

amw_status amw_apply_weights(const amw_graph* g, const amw_model* m, amw_graph** out) {
    if (!g || !m || !out) return invalid("null argument");
    return guarded([&] { *out = new amw_graph{amw::apply_weights(g->g, m->m)}; });
}

amw_status amw_detect(const amw_graph* g, amw_detector detector, int use_weights, uint64_t seed,
                      amw_partition** out, int32_t* trace_length) {
    if (!g || !out) return invalid("null argument");
    return guarded([&] {
        if (detector == AMW_DETECTOR_FAST_GREEDY) {
            auto r = amw::fast_greedy(g->g, use_weights != 0);
            if (trace_length) *trace_length = static_cast<int32_t>(r.trace.size());
            *out = new amw_partition{std::move(r.best)};
        } else {
            if (trace_length) *trace_length = 0;
            *out = new amw_partition{amw::label_propagation(g->g, use_weights != 0, seed)};
        }
    });
}

amw_status amw_modularity(const amw_graph* g, const amw_partition* p, int use_weights,
                          double* out) {
    if (!g || !p || !out) return invalid("null argument");
    return guarded([&] { *out = amw::modularity(g->g, p->p, use_weights != 0); });
}

amw_status amw_modularity_density(const amw_graph* g, const amw_partition* p, double* out) {
    if (!g || !p || !out) return invalid("null argument");
    return guarded([&] { *out = amw::modularity_density(g->g, p->p); });
}

amw_status amw_evaluate(const amw_graph* g, const amw_partition* c,
                        const amw_partition* ground_truth, amw_metric_report* out) {
    if (!g || !c || !ground_truth || !out) return invalid("null argument");
    return guarded([&] {
        const amw::MetricReport r = amw::evaluate_partition(g->g, c->p, ground_truth->p);
        out->vi = r.vi;
        out->nmi = r.nmi;
        out->f_measure = r.f_measure;
        out->ari = r.ari;
        out->q = r.q;
        out->q_ds = r.q_ds;
    });
}

void amw_pipeline_config_init(amw_pipeline_config* cfg) {
    if (!cfg) return;
    std::memset(cfg, 0, sizeof(*cfg));
    amw_sbm_config_init(&cfg->sbm);
    amw::TrainingSettings t;
    cfg->lambda1 = t.lambda1;
    cfg->lambda2_schedule = nullptr;
    cfg->lambda2_schedule_len = 0;
    cfg->pair_count = t.pair_count;
    cfg->pair_draws = t.pair_draws;
    cfg->tol = t.tol;
    cfg->max_iters = t.max_iters;
    cfg->detector = AMW_DETECTOR_FAST_GREEDY;
    cfg->seed = 1;
}

amw_status amw_pipeline_run(const amw_pipeline_config* cfg, amw_pipeline_report* out) {
    if (!cfg || !cfg->input_path || !cfg->output_dir) return invalid("null argument");
    return guarded([&] {
        amw::PipelineConfig c;
        c.input_path = cfg->input_path;
        c.output_dir = cfg->output_dir;
        c.sbm = to_cpp(cfg->sbm);
        c.training.lambda1 = cfg->lambda1;
        if (cfg->lambda2_schedule && cfg->lambda2_schedule_len > 0)
            c.training.lambda2_schedule.assign(cfg->lambda2_schedule,
                                               cfg->lambda2_schedule + cfg->lambda2_schedule_len);
        c.training.pair_count = cfg->pair_count;
        c.training.pair_draws = cfg->pair_draws;
        c.training.tol = cfg->tol;
        c.training.max_iters = cfg->max_iters;
        c.detector = cfg->detector == AMW_DETECTOR_FAST_GREEDY ? amw::Detector::fast_greedy
                                                               : amw::Detector::label_propagation;
        c.seed = cfg->seed;
        const amw::PipelineResult r = amw::run_pipeline(c);
        if (out) {
            out->chosen_lambda2 = r.chosen_lambda2;
            out->q = r.q_unweighted_eval;
            out->q_ds = r.q_ds;
            out->communities = r.communities;
        }
    });
}

} // extern "C"
