#include "features.hpp"

#include <cmath>
#include <ostream>

#include "errors.hpp"

namespace amw {

namespace {

// Precomputed clustering coefficients let extract_all stay O(sum of degrees)
// per edge instead of recomputing triangles per endpoint.
EdgeFeatureVector features_impl(const Graph& g, NodeId u, NodeId v,
                                const std::vector<double>& cc) {
    const auto nu = g.neighbors(u);
    const auto nv = g.neighbors(v);

    std::size_t common = 0;
    double resource_allocation = 0.0;
    double adamic_adar = 0.0;
    std::size_t a = 0, b = 0;
    while (a < nu.size() && b < nv.size()) {
        if (nu[a].first < nv[b].first) {
            ++a;
        } else if (nu[a].first > nv[b].first) {
            ++b;
        } else {
            ++common;
            const int dw = g.degree(nu[a].first);
            resource_allocation += 1.0 / static_cast<double>(dw);
            if (dw >= 2) adamic_adar += 1.0 / std::log(static_cast<double>(dw));
            ++a;
            ++b;
        }
    }
    const std::size_t uni = nu.size() + nv.size() - common;
    const double du = static_cast<double>(nu.size());
    const double dv = static_cast<double>(nv.size());

    EdgeFeatureVector x{};
    x[0] = 1.0;
    x[1] = std::sqrt(static_cast<double>(common));
    x[2] = std::abs(cc[static_cast<std::size_t>(u)] - cc[static_cast<std::size_t>(v)]);
    x[3] = uni > 0 ? static_cast<double>(common) / static_cast<double>(uni) : 0.0;
    x[4] = resource_allocation;
    x[5] = adamic_adar;
    x[6] = std::min(du, dv) / std::max(du, dv);
    return x;
}

} // namespace

EdgeFeatureVector extract_features(const Graph& g, NodeId u, NodeId v) {
    if (u < 0 || u >= g.node_count() || v < 0 || v >= g.node_count() || !g.has_edge(u, v))
        throw DomainError("extract_features: edge not in graph");
    std::vector<double> cc(static_cast<std::size_t>(g.node_count()));
    for (NodeId w = 0; w < g.node_count(); ++w)
        cc[static_cast<std::size_t>(w)] = g.clustering_coefficient(w);
    return features_impl(g, u, v, cc);
}

FeatureMatrix extract_all(const Graph& g) {
    std::vector<double> cc(static_cast<std::size_t>(g.node_count()));
    for (NodeId v = 0; v < g.node_count(); ++v)
        cc[static_cast<std::size_t>(v)] = g.clustering_coefficient(v);

    FeatureMatrix m;
    m.rows.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        EdgeFeatureVector x = features_impl(g, e.u, e.v, cc);
        for (std::size_t i = 0; i < kFeatureCount; ++i) m.column_sums[i] += x[i];
        m.rows.push_back(x);
    }
    return m;
}

void write_features_csv(const Graph& g, const FeatureMatrix& m, std::ostream& out) {
    out << "edge_u,edge_v,f1,f2,f3,f4,f5,f6\n";
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out << g.label_of(edges[i].u) << ',' << g.label_of(edges[i].v);
        for (std::size_t j = 1; j < kFeatureCount; ++j) out << ',' << m.rows[i][j];
        out << '\n';
    }
}

} // namespace amw
