#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"
#include "partition.hpp"
#include "regression.hpp"
#include "sbm.hpp"

namespace amw {

enum class Detector { fast_greedy, label_propagation };

std::string detector_name(Detector d);
Detector detector_from_name(const std::string& name);

struct TrainingSettings {
    double lambda1 = 1.0;
    // Candidate penalty strengths; the pipeline trains one model per entry
    // (times pair_draws) and keeps the one whose detected partition scores
    // the highest modularity density on the unweighted input.
    std::vector<double> lambda2_schedule = {10, 20, 30, 40, 60, 80, 120, 160};
    std::size_t pair_count = 50;
    int pair_draws = 2;
    // <= 0 disables the degree cap when sampling training pairs
    double max_pair_degree_sum = 0.0;
    double tol = 1e-4;
    int max_iters = 500;
};

struct PipelineConfig {
    std::string input_path;
    std::string output_dir;
    SbmConfig sbm;            // rng_seed is derived from `seed` unless set_explicit_seeds
    TrainingSettings training;
    Detector detector = Detector::fast_greedy;
    std::uint64_t seed = 1;   // master seed recorded in the manifest
};

struct PipelineResult {
    WeightModel model;
    double chosen_lambda2 = 0.0;
    int chosen_pair_draw = 0;
    double q_unweighted_eval = 0.0; // Q of the final partition on the unweighted input
    double q_ds = 0.0;              // Q_ds of the final partition on the unweighted input
    int communities = 0;
    std::vector<std::string> artifact_paths;
};

// Three-step pipeline: artificial network construction, feature extraction,
// regression on edge weights; then weighting + detection on the input.
// Writes weighted_edges.txt, model.json, partition.txt, metrics.json and
// manifest.json into output_dir (plus a timings.json diagnostic which is the
// only non-deterministic output). Partial artifacts are removed on error.
PipelineResult run_pipeline(const PipelineConfig& cfg);

} // namespace amw
