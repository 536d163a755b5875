#include "partition.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"

namespace amw {

Partition::Partition(std::vector<int> assignment) {
    std::unordered_map<int, int> renumber;
    assignment_.resize(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] < 0) throw DomainError("negative community id");
        auto [it, fresh] = renumber.try_emplace(assignment[i], static_cast<int>(renumber.size()));
        assignment_[i] = it->second;
    }
    community_count_ = static_cast<int>(renumber.size());
    members_.resize(static_cast<std::size_t>(community_count_));
    for (std::size_t i = 0; i < assignment_.size(); ++i)
        members_[static_cast<std::size_t>(assignment_[i])].push_back(static_cast<NodeId>(i));
}

Partition Partition::singletons(NodeId n) {
    std::vector<int> a(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) a[static_cast<std::size_t>(v)] = v;
    return Partition(std::move(a));
}

Partition Partition::single_community(NodeId n) {
    return Partition(std::vector<int>(static_cast<std::size_t>(n), 0));
}

Partition Partition::load(std::istream& in, const Graph& g) {
    std::unordered_map<std::int64_t, NodeId> by_label;
    for (NodeId v = 0; v < g.node_count(); ++v) by_label[g.label_of(v)] = v;

    std::vector<int> assignment(static_cast<std::size_t>(g.node_count()), -1);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected label<TAB>community", lineno);
        std::int64_t label;
        std::int64_t comm;
        auto p1 = std::from_chars(line.data(), line.data() + tab, label);
        auto p2 = std::from_chars(line.data() + tab + 1, line.data() + line.size(), comm);
        if (p1.ec != std::errc() || p2.ec != std::errc())
            throw ParseError("non-numeric field", lineno);
        auto it = by_label.find(label);
        if (it == by_label.end()) throw ParseError("unknown node label", lineno);
        assignment[static_cast<std::size_t>(it->second)] = static_cast<int>(comm);
    }
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] < 0)
            throw DomainError("partition does not cover node with label " +
                              std::to_string(g.label_of(static_cast<NodeId>(i))));
    return Partition(std::move(assignment));
}

Partition Partition::load_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return load(in, g);
}

void Partition::save(std::ostream& out, const Graph& g) const {
    for (NodeId v = 0; v < node_count(); ++v)
        out << g.label_of(v) << '\t' << community_of(v) << '\n';
}

void Partition::save_file(const std::string& path, const Graph& g) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    save(out, g);
}

CommunityAggregates compute_aggregates(const Graph& g, const Partition& p, bool use_weights) {
    if (p.node_count() != g.node_count())
        throw DomainError("partition does not cover the graph");
    CommunityAggregates agg;
    const std::size_t k = static_cast<std::size_t>(p.community_count());
    agg.internal.assign(k, 0.0);
    agg.external.assign(k, 0.0);
    agg.degree_sum.assign(k, 0.0);
    for (const Edge& e : g.edges()) {
        const double w = use_weights ? e.w : 1.0;
        const int cu = p.community_of(e.u);
        const int cv = p.community_of(e.v);
        agg.total += w;
        if (cu == cv) {
            agg.internal[static_cast<std::size_t>(cu)] += w;
        } else {
            agg.external[static_cast<std::size_t>(cu)] += w;
            agg.external[static_cast<std::size_t>(cv)] += w;
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        agg.degree_sum[c] = 2.0 * agg.internal[c] + agg.external[c];
    return agg;
}

} // namespace amw
