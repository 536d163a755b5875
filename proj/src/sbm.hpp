#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "partition.hpp"

namespace amw {

struct SbmConfig {
    int n_blocks = 26;
    int block_size_min = 8;
    int block_size_max = 30;
    double p_intra = 0.9;
    double inter_edges_per_pair_rate = 1.0;
    int n_candidates = 10;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

struct LabeledGraph {
    Graph graph;
    Partition ground_truth;
};

// Blocks with dense internal wiring and Poisson-many random cross edges per
// block pair; deterministic for a given seed.
LabeledGraph generate_sbm(const SbmConfig& cfg);

// Uniformly random edge removals until the average degree reaches the target
// (within one deletion's half-contribution, 1/|V|). Never removes a block's
// last internal edge.
LabeledGraph thin_to_degree(const LabeledGraph& lg, double target_avg_degree,
                            std::uint64_t rng_seed);

// Generates cfg.n_candidates instances (seeds rng_seed..rng_seed+n-1), thins
// each to the input's average degree, and returns the one whose average
// clustering coefficient is closest to the input's. Ties break to the lowest
// seed.
LabeledGraph build_training_graph(const Graph& input, const SbmConfig& cfg);

// Distinct unordered pairs of edge-adjacent ground-truth communities whose
// degree sums stay within max_degree_sum; when fewer qualify than requested,
// all of them are returned. Selection order is a seeded shuffle.
std::vector<std::pair<int, int>> sample_community_pairs(const LabeledGraph& lg,
                                                        std::size_t count,
                                                        double max_degree_sum,
                                                        std::uint64_t rng_seed);

// The Theorem-3 bound sqrt(8|E|), the spec default cap for sampled pairs.
double default_pair_degree_cap(const Graph& g);

} // namespace amw
