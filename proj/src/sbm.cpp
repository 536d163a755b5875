#include "sbm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "rng.hpp"

namespace amw {

void SbmConfig::validate() const {
    if (n_blocks < 1) throw DomainError("n_blocks must be >= 1");
    if (block_size_min < 3) throw DomainError("block_size_min must be >= 3");
    if (block_size_max < block_size_min) throw DomainError("block size range inverted");
    if (p_intra <= 0.0 || p_intra > 1.0) throw DomainError("p_intra must be in (0,1]");
    if (inter_edges_per_pair_rate < 0.0) throw DomainError("inter edge rate must be >= 0");
    if (n_candidates < 1) throw DomainError("n_candidates must be >= 1");
}

LabeledGraph generate_sbm(const SbmConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.rng_seed);

    std::vector<int> block_of;
    std::vector<std::vector<NodeId>> blocks(static_cast<std::size_t>(cfg.n_blocks));
    for (int b = 0; b < cfg.n_blocks; ++b) {
        const int size =
            static_cast<int>(rng.range(cfg.block_size_min, cfg.block_size_max));
        for (int i = 0; i < size; ++i) {
            blocks[static_cast<std::size_t>(b)].push_back(static_cast<NodeId>(block_of.size()));
            block_of.push_back(b);
        }
    }
    const NodeId n = static_cast<NodeId>(block_of.size());

    std::vector<Edge> edges;
    std::set<std::pair<NodeId, NodeId>> present;
    auto add_edge = [&](NodeId u, NodeId v) {
        if (u > v) std::swap(u, v);
        if (u == v) return;
        if (present.insert({u, v}).second) edges.push_back({u, v, 1.0});
    };

    for (int b = 0; b < cfg.n_blocks; ++b) {
        const auto& members = blocks[static_cast<std::size_t>(b)];
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                if (rng.real01() < cfg.p_intra) add_edge(members[i], members[j]);
    }
    for (int a = 0; a < cfg.n_blocks; ++a) {
        for (int b = a + 1; b < cfg.n_blocks; ++b) {
            const int k = rng.poisson(cfg.inter_edges_per_pair_rate);
            const auto& ma = blocks[static_cast<std::size_t>(a)];
            const auto& mb = blocks[static_cast<std::size_t>(b)];
            for (int i = 0; i < k; ++i) {
                const NodeId u = ma[rng.below(ma.size())];
                const NodeId v = mb[rng.below(mb.size())];
                add_edge(u, v);
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
    });
    return {Graph(n, std::move(edges)), Partition(std::move(block_of))};
}

LabeledGraph thin_to_degree(const LabeledGraph& lg, double target_avg_degree,
                            std::uint64_t rng_seed) {
    const Graph& g = lg.graph;
    const NodeId n = g.node_count();
    if (n == 0) throw DomainError("thin_to_degree on empty graph");
    const double current = g.average_degree();
    if (target_avg_degree > current)
        throw DomainError("thin target exceeds current average degree");

    const auto& edges = g.edges();
    std::vector<std::size_t> block_internal(
        static_cast<std::size_t>(lg.ground_truth.community_count()), 0);
    for (const Edge& e : edges) {
        const int a = lg.ground_truth.community_of(e.u);
        if (a == lg.ground_truth.community_of(e.v)) ++block_internal[static_cast<std::size_t>(a)];
    }

    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(rng_seed);
    rng.shuffle(order);

    std::vector<bool> alive(edges.size(), true);
    std::size_t alive_count = edges.size();
    const double node_count = static_cast<double>(n);
    for (std::size_t idx : order) {
        const double avg = 2.0 * static_cast<double>(alive_count) / node_count;
        // stop before overshooting the target by more than half a deletion
        if (avg - target_avg_degree < 1.0 / node_count) break;
        const Edge& e = edges[idx];
        const int a = lg.ground_truth.community_of(e.u);
        const int b = lg.ground_truth.community_of(e.v);
        if (a == b && block_internal[static_cast<std::size_t>(a)] <= 1) continue;
        alive[idx] = false;
        --alive_count;
        if (a == b) --block_internal[static_cast<std::size_t>(a)];
    }

    std::vector<Edge> kept;
    kept.reserve(alive_count);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (alive[i]) kept.push_back(edges[i]);
    return {Graph(n, std::move(kept), g.original_labels()), lg.ground_truth};
}

LabeledGraph build_training_graph(const Graph& input, const SbmConfig& cfg) {
    if (input.node_count() == 0) throw DomainError("empty input graph");
    cfg.validate();
    const double target_degree = input.average_degree();
    const double target_clustering = input.average_clustering();

    bool have = false;
    double best_dist = 0.0;
    LabeledGraph best;
    for (int i = 0; i < cfg.n_candidates; ++i) {
        SbmConfig c = cfg;
        c.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(i);
        LabeledGraph cand = generate_sbm(c);
        if (target_degree <= cand.graph.average_degree())
            cand = thin_to_degree(cand, target_degree, c.rng_seed);
        const double dist = std::abs(cand.graph.average_clustering() - target_clustering);
        if (!have || dist < best_dist) { // ties keep the lowest seed
            have = true;
            best_dist = dist;
            best = std::move(cand);
        }
    }
    return best;
}

std::vector<std::pair<int, int>> sample_community_pairs(const LabeledGraph& lg,
                                                        std::size_t count,
                                                        double max_degree_sum,
                                                        std::uint64_t rng_seed) {
    const Graph& g = lg.graph;
    const Partition& gt = lg.ground_truth;
    std::vector<double> degree_sum(static_cast<std::size_t>(gt.community_count()), 0.0);
    std::set<std::pair<int, int>> adjacent;
    for (const Edge& e : g.edges()) {
        int a = gt.community_of(e.u);
        int b = gt.community_of(e.v);
        degree_sum[static_cast<std::size_t>(a)] += 1.0;
        degree_sum[static_cast<std::size_t>(b)] += 1.0;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        adjacent.insert({a, b});
    }
    if (adjacent.empty()) throw DomainError("no edge-adjacent community pairs");

    std::vector<std::pair<int, int>> eligible;
    for (const auto& [a, b] : adjacent)
        if (degree_sum[static_cast<std::size_t>(a)] <= max_degree_sum &&
            degree_sum[static_cast<std::size_t>(b)] <= max_degree_sum)
            eligible.push_back({a, b});

    Rng rng(rng_seed);
    rng.shuffle(eligible);
    if (eligible.size() > count) eligible.resize(count);
    return eligible;
}

double default_pair_degree_cap(const Graph& g) {
    return std::sqrt(8.0 * static_cast<double>(g.edge_count()));
}

} // namespace amw
