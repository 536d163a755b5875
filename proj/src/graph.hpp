#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace amw {

using NodeId = std::int32_t;

struct Edge {
    NodeId u;
    NodeId v;
    double w;
};

struct NodeStats {
    int degree;
    double weighted_degree;
    double clustering_coefficient;
};

// Undirected simple graph. Node ids are dense 0..n-1 after ingestion; the
// original labels from the input file are kept for output. Immutable after
// construction, so instances can be shared freely across threads.
class Graph {
public:
    Graph() = default;

    // Edges must reference ids in [0, node_count); labels defaults to identity.
    Graph(NodeId node_count, std::vector<Edge> edges,
          std::vector<std::int64_t> labels = {});

    static Graph load_edge_list(std::istream& in);
    static Graph load_edge_list_text(std::string_view text);
    static Graph load_edge_list_file(const std::string& path);

    NodeId node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }

    // Neighbors sorted by id, with edge weights.
    std::span<const std::pair<NodeId, double>> neighbors(NodeId v) const;

    int degree(NodeId v) const;
    double weighted_degree(NodeId v) const;
    double clustering_coefficient(NodeId v) const; // topology only
    NodeStats node_stats(NodeId v) const;

    double average_degree() const;     // DomainError on empty graph
    double average_clustering() const; // DomainError on empty graph
    double total_weight() const;

    bool has_edge(NodeId u, NodeId v) const;
    // Index into edges() for the unordered pair, or -1.
    std::ptrdiff_t edge_index(NodeId u, NodeId v) const;

    Graph strip_nonpositive_edges() const;
    // Same topology and labels, new weights aligned with edges().
    Graph with_weights(std::span<const double> w) const;

    const std::vector<std::int64_t>& original_labels() const { return labels_; }
    std::int64_t label_of(NodeId v) const { return labels_[static_cast<std::size_t>(v)]; }
    // -1 when the label is unknown.
    NodeId node_of_label(std::int64_t label) const;

    void write_edge_list(std::ostream& out) const;
    std::string to_edge_list_text() const;

private:
    void build_adjacency();

    NodeId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> labels_;
    std::vector<std::size_t> adj_offset_;
    std::vector<std::pair<NodeId, double>> adj_;
};

} // namespace amw
