#include "pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "detect.hpp"
#include "errors.hpp"
#include "metrics.hpp"

namespace amw {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string detector_name(Detector d) {
    return d == Detector::fast_greedy ? "fastgreedy" : "labelprop";
}

Detector detector_from_name(const std::string& name) {
    if (name == "fastgreedy") return Detector::fast_greedy;
    if (name == "labelprop") return Detector::label_propagation;
    throw DomainError("unknown detector: " + name);
}

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

Partition detect_with(const Graph& g, Detector d, std::uint64_t seed) {
    if (d == Detector::fast_greedy) return fast_greedy(g, /*use_weights=*/true).best;
    return label_propagation(g, /*use_weights=*/true, seed);
}

// Removes already-written artifacts when a later stage fails.
class ArtifactSink {
public:
    ~ArtifactSink() {
        if (!armed_) return;
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
    void write(const fs::path& p, const std::string& content) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write " + p.string());
        out << content;
        out.close();
        if (!out) throw IoError("short write to " + p.string());
        written_.push_back(p);
    }
    void disarm() { armed_ = false; }
    std::vector<fs::path> paths() const { return written_; }

private:
    bool armed_ = true;
    std::vector<fs::path> written_;
};

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    std::uint64_t x = master ^ (0x9e3779b97f4a7c15ULL + salt);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return x;
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    const auto stage = [](const std::string& name, const std::string& what) {
        return name + " stage: " + what;
    };

    Graph input;
    try {
        input = Graph::load_edge_list_file(cfg.input_path);
    } catch (const IoError& e) {
        throw IoError(stage("load", e.what()));
    } catch (const ParseError& e) {
        throw ParseError(stage("load", e.what()));
    }
    if (input.edge_count() == 0) throw DomainError(stage("load", "input graph has no edges"));

    fs::create_directories(cfg.output_dir);
    ArtifactSink sink;

    Stopwatch total;
    // --- artificial network construction + training -------------------------
    Stopwatch training_clock;
    SbmConfig sbm = cfg.sbm;
    sbm.rng_seed = derive_seed(cfg.seed, 1);
    LabeledGraph artificial = build_training_graph(input, sbm);

    const double cap = cfg.training.max_pair_degree_sum > 0.0
                           ? cfg.training.max_pair_degree_sum
                           : std::numeric_limits<double>::infinity();

    struct Candidate {
        WeightModel model;
        double q_ds;
        double lambda2;
        int draw;
        Graph weighted_stripped;
        Partition partition;
        double z_mean_pair_edges;
    };
    bool have_best = false;
    Candidate best{};

    double weighting_ms = 0.0;
    for (int draw = 0; draw < cfg.training.pair_draws; ++draw) {
        const std::uint64_t pair_seed = derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(draw));
        auto pairs = sample_community_pairs(artificial, cfg.training.pair_count, cap, pair_seed);
        for (double lambda2 : cfg.training.lambda2_schedule) {
            TrainingProblem problem =
                make_training_problem(artificial, pairs, cfg.training.lambda1, lambda2,
                                      cfg.training.tol, cfg.training.max_iters, pair_seed);
            const TrainingCache cache(problem);
            WeightModel model = train(problem);

            Stopwatch weighting_clock;
            Graph weighted = apply_weights(input, model);
            Graph stripped = weighted.strip_nonpositive_edges();
            weighting_ms += weighting_clock.ms();
            if (stripped.edge_count() == 0) continue;

            Partition part = detect_with(stripped, cfg.detector, derive_seed(cfg.seed, 7));
            const double q_ds = modularity_density(input, part);
            if (!have_best || q_ds > best.q_ds) {
                have_best = true;
                best = {model, q_ds, lambda2, draw, std::move(stripped), std::move(part),
                        cache.mean_pair_edges()};
            }
        }
    }
    if (!have_best)
        throw ConvergenceError(stage("train", "no candidate model produced a usable weighting"));
    const double training_ms = training_clock.ms() - weighting_ms;

    // --- final artifacts -----------------------------------------------------
    Graph weighted_full = apply_weights(input, best.model);

    const fs::path dir(cfg.output_dir);
    sink.write(dir / "weighted_edges.txt", weighted_full.to_edge_list_text());
    sink.write(dir / "model.json", best.model.to_json());
    {
        std::ostringstream part_text;
        best.partition.save(part_text, input);
        sink.write(dir / "partition.txt", part_text.str());
    }

    PipelineResult result;
    result.model = best.model;
    result.chosen_lambda2 = best.lambda2;
    result.chosen_pair_draw = best.draw;
    result.q_unweighted_eval = modularity(input, best.partition, /*use_weights=*/false);
    result.q_ds = best.q_ds;
    result.communities = best.partition.community_count();

    ordered_json metrics;
    metrics["schema"] = "amw-metrics-v1";
    metrics["detector"] = detector_name(cfg.detector);
    metrics["q"] = result.q_unweighted_eval;
    metrics["q_ds"] = result.q_ds;
    metrics["communities"] = result.communities;
    sink.write(dir / "metrics.json", metrics.dump(2) + "\n");

    ordered_json manifest;
    manifest["schema"] = "amw-manifest-v1";
    manifest["input_path"] = cfg.input_path;
    manifest["seed"] = cfg.seed;
    manifest["input"] = {{"nodes", input.node_count()},
                         {"edges", input.edge_count()},
                         {"average_degree", input.average_degree()},
                         {"average_clustering", input.average_clustering()}};
    manifest["sbm"] = {{"n_blocks", sbm.n_blocks},
                       {"block_size_min", sbm.block_size_min},
                       {"block_size_max", sbm.block_size_max},
                       {"p_intra", sbm.p_intra},
                       {"inter_edges_per_pair_rate", sbm.inter_edges_per_pair_rate},
                       {"n_candidates", sbm.n_candidates},
                       {"rng_seed", sbm.rng_seed}};
    manifest["artificial"] = {{"nodes", artificial.graph.node_count()},
                              {"edges", artificial.graph.edge_count()},
                              {"blocks", artificial.ground_truth.community_count()}};
    std::vector<std::uint64_t> pair_seeds;
    for (int draw = 0; draw < cfg.training.pair_draws; ++draw)
        pair_seeds.push_back(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(draw)));
    manifest["training"] = {{"lambda1", cfg.training.lambda1},
                            {"lambda2_schedule", cfg.training.lambda2_schedule},
                            {"pair_count", cfg.training.pair_count},
                            {"pair_draws", cfg.training.pair_draws},
                            {"max_pair_degree_sum", cfg.training.max_pair_degree_sum},
                            {"tol", cfg.training.tol},
                            {"max_iters", cfg.training.max_iters},
                            {"pair_seeds", pair_seeds},
                            {"z_mean_pair_edges", best.z_mean_pair_edges}};
    manifest["selected"] = {{"lambda2", best.lambda2},
                            {"pair_draw", best.draw},
                            {"iterations", best.model.iterations_used},
                            {"grad_norm", best.model.final_gradient_norm},
                            {"converged", best.model.converged}};
    manifest["detector"] = {{"name", detector_name(cfg.detector)},
                            {"seed", derive_seed(cfg.seed, 7)}};
    manifest["outputs"] = {"weighted_edges.txt", "model.json", "partition.txt", "metrics.json"};
    sink.write(dir / "manifest.json", manifest.dump(2) + "\n");

    // Wall-clock diagnostics; deliberately not part of the deterministic
    // artifact set.
    ordered_json timings;
    timings["schema"] = "amw-timings-v1";
    timings["training_ms"] = training_ms;
    timings["weighting_ms"] = weighting_ms;
    timings["total_ms"] = total.ms();
    {
        std::ofstream out(dir / "timings.json", std::ios::binary);
        if (out) out << timings.dump(2) << "\n";
    }

    for (const auto& p : sink.paths()) result.artifact_paths.push_back(p.string());
    sink.disarm();
    return result;
}

} // namespace amw
