#pragma once

#include <vector>

#include "graph.hpp"
#include "partition.hpp"

namespace amw {

// Joint counts |c_i ∩ g_j| plus marginals; built once, shared by the
// information-theoretic and pair-counting metrics.
struct ConfusionTable {
    int rows = 0; // |C|
    int cols = 0; // |GN|
    std::vector<std::int64_t> counts; // rows x cols
    std::vector<std::int64_t> row_sum;
    std::vector<std::int64_t> col_sum;
    std::int64_t n = 0;

    std::int64_t at(int i, int j) const {
        return counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                      static_cast<std::size_t>(j)];
    }
};

ConfusionTable confusion_table(const Partition& c, const Partition& gn);

// Variation of information, natural log (nats).
double vi(const Partition& c, const Partition& gn);
// NMI = 2I/(H(C)+H(GN)); defined as 1 when both partitions are trivial.
double nmi(const Partition& c, const Partition& gn);
// Size-weighted best-match Dice average; asymmetric in its arguments.
double f_measure(const Partition& c, const Partition& gn);
// Adjusted Rand index; degenerate denominator resolves to 1 when the
// partitions are equal, else 0.
double ari(const Partition& c, const Partition& gn);
// Modularity density Q_ds over the given graph (callers pass the unweighted
// graph for reporting); singleton communities have internal density 0.
double modularity_density(const Graph& g, const Partition& c);

struct MetricReport {
    double vi;
    double nmi;
    double f_measure;
    double ari;
    double q;    // unweighted modularity of c on g
    double q_ds; // unweighted modularity density of c on g
};

MetricReport evaluate_partition(const Graph& g, const Partition& c, const Partition& gn);

} // namespace amw
