#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "features.hpp"
#include "graph.hpp"
#include "sbm.hpp"

namespace amw {

// Linear edge-weight model w_e = p . x_e plus training metadata.
struct WeightModel {
    EdgeFeatureVector p{};
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::uint64_t training_seed = 0;
    int iterations_used = 0;
    double final_gradient_norm = 0.0;
    bool converged = false;
    std::string feature_set = "f1-f6-v1";

    std::string to_json() const;
    // Rejects documents whose feature_set tag is unknown.
    static WeightModel from_json(const std::string& text);
};

// Artificial labeled graph + sampled community pairs + hyperparameters.
// The loss is the sigmoid of Algorithm 1; tol is the gradient-norm stop.
struct TrainingProblem {
    LabeledGraph graph;
    FeatureMatrix features;
    std::vector<std::pair<int, int>> pairs;
    double lambda1 = 1.0;
    double lambda2 = 10.0;
    double tol = 1e-4;
    int max_iters = 500;
    std::uint64_t training_seed = 0;
};

// Validates pair adjacency and computes the feature matrix.
TrainingProblem make_training_problem(LabeledGraph lg, std::vector<std::pair<int, int>> pairs,
                                      double lambda1, double lambda2, double tol = 1e-4,
                                      int max_iters = 500, std::uint64_t training_seed = 0);

// Weight sums under a given p: the W / w-bar / sigma^2 globals plus the
// per-community and per-pair sums the merge deltas need. Tracked communities
// are those appearing in the problem's pairs.
struct WeightAggregates {
    double total = 0.0;  // W
    double mean = 0.0;   // w-bar
    double variance = 0.0;
    std::vector<int> tracked;        // community ids
    std::vector<double> community;   // W_c  (2*in + out), aligned with tracked
    std::vector<double> community_in;
    std::vector<double> community_out;
    std::vector<double> pair_cross;  // W_{ci,cj} aligned with problem.pairs
};

// Naive per-edge recomputation.
WeightAggregates naive_aggregates(const TrainingProblem& problem, const EdgeFeatureVector& p);

// Cached inner-product route: W = p . sum(x_e), variance via sum(x x^T),
// community and pair sums via feature-sum vectors collected once.
class TrainingCache {
public:
    explicit TrainingCache(const TrainingProblem& problem);

    WeightAggregates aggregates(const EdgeFeatureVector& p) const;
    double objective(const EdgeFeatureVector& p) const;
    EdgeFeatureVector gradient(const EdgeFeatureVector& p) const;
    const TrainingProblem& problem() const { return *problem_; }
    // average number of edges touching communities of sampled pairs
    double mean_pair_edges() const { return mean_pair_edges_; }

private:
    const TrainingProblem* problem_;
    std::size_t edge_count_;
    EdgeFeatureVector cols_{};
    double xxt_[kFeatureCount][kFeatureCount] = {};
    std::vector<int> tracked_;
    std::vector<std::size_t> tracked_index_;       // community id -> tracked slot (or npos)
    std::vector<EdgeFeatureVector> sum_in_;        // per tracked community
    std::vector<EdgeFeatureVector> sum_out_;
    std::vector<EdgeFeatureVector> sum_cross_;     // per pair
    double mean_pair_edges_ = 0.0;
};

// Eq.-(10) objective F(p) and its gradient, both on the naive per-edge path;
// these are the reference implementations the cached route is tested against.
double objective(const TrainingProblem& problem, const EdgeFeatureVector& p);
EdgeFeatureVector gradient(const TrainingProblem& problem, const EdgeFeatureVector& p);

struct TrainResult {
    WeightModel model;
    std::vector<double> objective_trace; // F at p0 and after every accepted step
};

// Quasi-Newton minimization of the objective: inverse-Hessian update with a
// backtracking sufficient-decrease line search, started from p = (1,0,...,0).
// A failed line search returns the best iterate flagged non-converged.
TrainResult train_detailed(const TrainingProblem& problem);
WeightModel train(const TrainingProblem& problem);

// Reweights g's edges as p . x_e computed from g's own topology.
Graph apply_weights(const Graph& g, const WeightModel& model);

double sigmoid(double x);

} // namespace amw
