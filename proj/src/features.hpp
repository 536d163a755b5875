#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "graph.hpp"

namespace amw {

// Per-edge feature vector (1, f1..f6):
//   f1 sqrt of common-neighbor count, f2 |c(u)-c(v)|, f3 Jaccard,
//   f4 resource allocation, f5 Adamic-Adar, f6 relative degree ratio.
inline constexpr std::size_t kFeatureCount = 7;
using EdgeFeatureVector = std::array<double, kFeatureCount>;

struct FeatureMatrix {
    std::vector<EdgeFeatureVector> rows; // aligned with Graph edge order
    EdgeFeatureVector column_sums{};
};

EdgeFeatureVector extract_features(const Graph& g, NodeId u, NodeId v);
FeatureMatrix extract_all(const Graph& g);

// CSV with header "edge_u,edge_v,f1,f2,f3,f4,f5,f6" (original node labels).
void write_features_csv(const Graph& g, const FeatureMatrix& m, std::ostream& out);

inline double dot(const EdgeFeatureVector& a, const EdgeFeatureVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) s += a[i] * b[i];
    return s;
}

} // namespace amw
