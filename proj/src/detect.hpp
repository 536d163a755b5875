#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "graph.hpp"
#include "partition.hpp"

namespace amw {

// Eq.-style modularity: raw edge counts with use_weights off, weight sums on.
// Weighted evaluation requires W > 0.
double modularity(const Graph& g, const Partition& c, bool use_weights);

// Change in modularity upon joining ci and cj; equals the recomputed
// difference to machine precision.
double merge_delta(const Graph& g, const Partition& c, int ci, int cj, bool use_weights);

struct MergeStep {
    int ci;
    int cj;
    double delta;
    double q_after;
};

struct FastGreedyResult {
    Partition best;                // best-Q partition on the merge trace
    double best_q = 0.0;
    std::vector<MergeStep> trace;  // one entry per merge
    double initial_q = 0.0;        // Q of the all-singletons start
};

// Agglomerative modularity maximizer. Starts from singletons, repeatedly
// merges the edge-adjacent community pair with the largest delta, and returns
// the best partition on the trace. Ties in the maximal delta are resolved by
// a one-step lookahead (the tied merge that leaves the largest next-step
// delta wins); remaining ties go to the smallest (min-id, max-id) pair.
// With use_weights on, all edge weights must be positive.
FastGreedyResult fast_greedy(const Graph& g, bool use_weights);

// Asynchronous label propagation: nodes visited in a seeded random order
// (reshuffled each pass); each node adopts the label with the largest
// incident (weighted) frequency, ties to the smallest label. Stops when a
// pass changes nothing or after 100 passes.
Partition label_propagation(const Graph& g, bool use_weights, std::uint64_t seed);

// Edge reweighting that enhances target communities: +e_c spread uniformly
// over internal edges, cross edges between enhanced communities reduced so
// every enhanced community keeps W_c == d_c.
struct EnhancementScheme {
    std::vector<double> weights;       // per-edge, aligned with Graph edge order
    std::set<int> enhanced;            // enhanced community ids
    std::vector<double> added_weight;  // e_c per community (0 when not enhanced)
};

// Validates the definition (w>=1 inside enhanced, w<=1 on their cross edges,
// weights elsewhere 1, W_c == d_c, reductions only between enhanced pairs).
// Throws DomainError when violated.
void validate_enhancement(const Graph& g, const Partition& c, const EnhancementScheme& s);

// Builds a balanced scheme for the given targets and amounts. Cross-edge
// reductions are solved per enhanced pair; infeasible demands raise
// DomainError naming the community.
EnhancementScheme build_balanced_enhancement(const Graph& g, const Partition& c,
                                             const std::set<int>& targets,
                                             const std::map<int, double>& e_amounts);

struct TheoremReport {
    bool t1_holds = true;
    double t1_margin = 0.0; // Q^w - Q
    bool t2_holds = true;
    double t2_worst_margin = 0.0; // min over enhanced adjacent pairs of dQ - dQ^w
    int t2_pairs_checked = 0;
    bool t3_holds = true;
    int t3_cases_checked = 0;
    std::string witness; // first violation description, if any
};

// Checks Theorem 1 on (g, c, scheme), Theorem 2 for every enhanced adjacent
// pair, and the Theorem 3 implication on enhanced merged pairs with
// d_c <= sqrt(8|E|).
TheoremReport theorem_harness(const Graph& g, const Partition& c, const EnhancementScheme& s);

} // namespace amw
