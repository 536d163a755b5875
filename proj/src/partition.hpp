#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "graph.hpp"

namespace amw {

// Disjoint assignment of every node to exactly one community. Community ids
// are dense 0..community_count-1.
class Partition {
public:
    Partition() = default;
    // Arbitrary non-negative community ids; renumbered densely preserving
    // first-appearance order.
    explicit Partition(std::vector<int> assignment);

    static Partition singletons(NodeId n);
    static Partition single_community(NodeId n);

    // "original_node_label<TAB>community_id" lines, matched against g's labels.
    static Partition load_file(const std::string& path, const Graph& g);
    static Partition load(std::istream& in, const Graph& g);
    void save(std::ostream& out, const Graph& g) const;
    void save_file(const std::string& path, const Graph& g) const;

    NodeId node_count() const { return static_cast<NodeId>(assignment_.size()); }
    int community_of(NodeId v) const { return assignment_[static_cast<std::size_t>(v)]; }
    int community_count() const { return community_count_; }
    const std::vector<int>& assignment() const { return assignment_; }
    const std::vector<std::vector<NodeId>>& members() const { return members_; }

    bool operator==(const Partition& other) const { return assignment_ == other.assignment_; }

private:
    std::vector<int> assignment_;
    std::vector<std::vector<NodeId>> members_;
    int community_count_ = 0;
};

// Per-community sums used by the modularity formulas. With use_weights off,
// weights are read as 1 per edge (raw counts on the original graph); with it
// on, edge weights are summed.
struct CommunityAggregates {
    std::vector<double> internal;   // |E_c^in| or W_c^in
    std::vector<double> external;   // |E_c^out| or W_c^out
    std::vector<double> degree_sum; // d_c or W_c  (= 2*internal + external)
    double total = 0.0;             // |E| or W
};

CommunityAggregates compute_aggregates(const Graph& g, const Partition& p, bool use_weights);

} // namespace amw
