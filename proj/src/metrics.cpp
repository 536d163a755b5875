#include "metrics.hpp"

#include <cmath>

#include "detect.hpp"
#include "errors.hpp"

namespace amw {

namespace {

double entropy_term(std::int64_t count, std::int64_t n) {
    if (count <= 0) return 0.0; // 0 log 0 == 0
    const double p = static_cast<double>(count) / static_cast<double>(n);
    return -p * std::log(p);
}

struct EntropyParts {
    double hc;
    double hg;
    double hjoint;
};

EntropyParts entropies(const ConfusionTable& t) {
    EntropyParts e{0.0, 0.0, 0.0};
    for (int i = 0; i < t.rows; ++i) e.hc += entropy_term(t.row_sum[static_cast<std::size_t>(i)], t.n);
    for (int j = 0; j < t.cols; ++j) e.hg += entropy_term(t.col_sum[static_cast<std::size_t>(j)], t.n);
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) e.hjoint += entropy_term(t.at(i, j), t.n);
    return e;
}

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

} // namespace

ConfusionTable confusion_table(const Partition& c, const Partition& gn) {
    if (c.node_count() != gn.node_count())
        throw DomainError("partitions cover different node sets");
    ConfusionTable t;
    t.rows = c.community_count();
    t.cols = gn.community_count();
    t.n = c.node_count();
    t.counts.assign(static_cast<std::size_t>(t.rows) * static_cast<std::size_t>(t.cols), 0);
    t.row_sum.assign(static_cast<std::size_t>(t.rows), 0);
    t.col_sum.assign(static_cast<std::size_t>(t.cols), 0);
    for (NodeId v = 0; v < c.node_count(); ++v) {
        const int i = c.community_of(v);
        const int j = gn.community_of(v);
        ++t.counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(t.cols) +
                   static_cast<std::size_t>(j)];
        ++t.row_sum[static_cast<std::size_t>(i)];
        ++t.col_sum[static_cast<std::size_t>(j)];
    }
    return t;
}

double vi(const Partition& c, const Partition& gn) {
    const auto t = confusion_table(c, gn);
    const auto e = entropies(t);
    const double mi = e.hc + e.hg - e.hjoint;
    return e.hc + e.hg - 2.0 * mi;
}

double nmi(const Partition& c, const Partition& gn) {
    const auto t = confusion_table(c, gn);
    const auto e = entropies(t);
    if (e.hc + e.hg == 0.0) return 1.0; // both trivial: identical by definition
    const double mi = e.hc + e.hg - e.hjoint;
    return 2.0 * mi / (e.hc + e.hg);
}

double f_measure(const Partition& c, const Partition& gn) {
    const auto t = confusion_table(c, gn);
    double total = 0.0;
    for (int i = 0; i < t.rows; ++i) {
        double best = 0.0;
        for (int j = 0; j < t.cols; ++j) {
            const double dice =
                2.0 * static_cast<double>(t.at(i, j)) /
                static_cast<double>(t.row_sum[static_cast<std::size_t>(i)] +
                                    t.col_sum[static_cast<std::size_t>(j)]);
            if (dice > best) best = dice;
        }
        total += static_cast<double>(t.row_sum[static_cast<std::size_t>(i)]) * best;
    }
    return total / static_cast<double>(t.n);
}

double ari(const Partition& c, const Partition& gn) {
    const auto t = confusion_table(c, gn);
    if (t.n < 2) throw DomainError("ari requires at least 2 nodes");
    std::int64_t sum_ij = 0, sum_i = 0, sum_j = 0;
    for (int i = 0; i < t.rows; ++i)
        for (int j = 0; j < t.cols; ++j) sum_ij += choose2(t.at(i, j));
    for (int i = 0; i < t.rows; ++i) sum_i += choose2(t.row_sum[static_cast<std::size_t>(i)]);
    for (int j = 0; j < t.cols; ++j) sum_j += choose2(t.col_sum[static_cast<std::size_t>(j)]);
    const double total_pairs = static_cast<double>(choose2(t.n));
    const double expected = static_cast<double>(sum_i) * static_cast<double>(sum_j) / total_pairs;
    const double denom = 0.5 * static_cast<double>(sum_i + sum_j) - expected;
    if (denom == 0.0) return c == gn ? 1.0 : 0.0;
    return (static_cast<double>(sum_ij) - expected) / denom;
}

double modularity_density(const Graph& g, const Partition& c) {
    if (c.node_count() != g.node_count())
        throw DomainError("partition does not cover the graph");
    const double m = static_cast<double>(g.edge_count());
    if (m == 0.0) return 0.0;
    const int k = c.community_count();

    std::vector<double> internal(static_cast<std::size_t>(k), 0.0);
    std::vector<double> external(static_cast<std::size_t>(k), 0.0);
    // pairwise cross-edge counts, keyed (min,max)
    std::vector<std::vector<std::pair<int, double>>> cross(static_cast<std::size_t>(k));
    for (const Edge& e : g.edges()) {
        int a = c.community_of(e.u);
        int b = c.community_of(e.v);
        if (a == b) {
            internal[static_cast<std::size_t>(a)] += 1.0;
            continue;
        }
        external[static_cast<std::size_t>(a)] += 1.0;
        external[static_cast<std::size_t>(b)] += 1.0;
        if (a > b) std::swap(a, b);
        auto& row = cross[static_cast<std::size_t>(a)];
        bool found = false;
        for (auto& [cb, w] : row)
            if (cb == b) { w += 1.0; found = true; break; }
        if (!found) row.push_back({b, 1.0});
    }

    std::vector<double> density(static_cast<std::size_t>(k), 0.0);
    for (int ci = 0; ci < k; ++ci) {
        const double nc = static_cast<double>(c.members()[static_cast<std::size_t>(ci)].size());
        if (nc > 1.0)
            density[static_cast<std::size_t>(ci)] =
                2.0 * internal[static_cast<std::size_t>(ci)] / (nc * (nc - 1.0));
    }

    double q = 0.0;
    std::vector<double> split_penalty(static_cast<std::size_t>(k), 0.0);
    for (int a = 0; a < k; ++a) {
        for (const auto& [b, w] : cross[static_cast<std::size_t>(a)]) {
            const double na = static_cast<double>(c.members()[static_cast<std::size_t>(a)].size());
            const double nb = static_cast<double>(c.members()[static_cast<std::size_t>(b)].size());
            const double pair_density = w / (na * nb);
            const double term = w / (2.0 * m) * pair_density;
            split_penalty[static_cast<std::size_t>(a)] += term;
            split_penalty[static_cast<std::size_t>(b)] += term;
        }
    }
    for (int ci = 0; ci < k; ++ci) {
        const std::size_t i = static_cast<std::size_t>(ci);
        const double din = density[i];
        q += internal[i] / m * din;
        const double half = (2.0 * internal[i] + external[i]) / (2.0 * m) * din;
        q -= half * half;
        q -= split_penalty[i];
    }
    return q;
}

MetricReport evaluate_partition(const Graph& g, const Partition& c, const Partition& gn) {
    MetricReport r{};
    r.vi = vi(c, gn);
    r.nmi = nmi(c, gn);
    r.f_measure = f_measure(c, gn);
    r.ari = ari(c, gn);
    r.q = modularity(g, c, /*use_weights=*/false);
    r.q_ds = modularity_density(g, c);
    return r;
}

} // namespace amw
