#include "detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "rng.hpp"

namespace amw {

double modularity(const Graph& g, const Partition& c, bool use_weights) {
    const auto agg = compute_aggregates(g, c, use_weights);
    if (agg.total <= 0.0)
        throw DomainError(use_weights ? "weighted modularity requires W > 0"
                                      : "modularity on empty graph");
    double q = 0.0;
    for (std::size_t i = 0; i < agg.internal.size(); ++i) {
        const double frac = agg.degree_sum[i] / (2.0 * agg.total);
        q += agg.internal[i] / agg.total - frac * frac;
    }
    return q;
}

double merge_delta(const Graph& g, const Partition& c, int ci, int cj, bool use_weights) {
    if (ci == cj) throw DomainError("merge_delta requires distinct communities");
    if (ci < 0 || cj < 0 || ci >= c.community_count() || cj >= c.community_count())
        throw DomainError("merge_delta: community id out of range");
    const auto agg = compute_aggregates(g, c, use_weights);
    if (agg.total <= 0.0)
        throw DomainError(use_weights ? "weighted modularity requires W > 0"
                                      : "modularity on empty graph");
    double cross = 0.0;
    for (const Edge& e : g.edges()) {
        const int a = c.community_of(e.u);
        const int b = c.community_of(e.v);
        if ((a == ci && b == cj) || (a == cj && b == ci)) cross += use_weights ? e.w : 1.0;
    }
    const double w = agg.total;
    return cross / w -
           agg.degree_sum[static_cast<std::size_t>(ci)] *
               agg.degree_sum[static_cast<std::size_t>(cj)] / (2.0 * w * w);
}

namespace {

constexpr double kTieEps = 1e-12;

struct PairKeyLess {
    bool operator()(const std::pair<int, int>& a, const std::pair<int, int>& b) const {
        return a < b;
    }
};

} // namespace

FastGreedyResult fast_greedy(const Graph& g, bool use_weights) {
    const NodeId n = g.node_count();
    if (n == 0) throw DomainError("fast_greedy on empty graph");
    if (use_weights)
        for (const Edge& e : g.edges())
            if (e.w <= 0.0)
                throw DomainError("fast_greedy with weights requires positive weights; "
                                  "strip nonpositive edges first");

    const double W = use_weights ? g.total_weight() : static_cast<double>(g.edge_count());
    FastGreedyResult result;

    std::vector<int> node_comm(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) node_comm[static_cast<std::size_t>(v)] = v;
    if (g.edge_count() == 0) {
        result.best = Partition(node_comm);
        result.best_q = 0.0;
        return result;
    }

    std::vector<double> dc(static_cast<std::size_t>(n), 0.0);
    // nbr[a][b] = summed weight between communities a and b (both directions kept)
    std::vector<std::map<int, double>> nbr(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges()) {
        const double w = use_weights ? e.w : 1.0;
        dc[static_cast<std::size_t>(e.u)] += w;
        dc[static_cast<std::size_t>(e.v)] += w;
        nbr[static_cast<std::size_t>(e.u)][e.v] += w;
        nbr[static_cast<std::size_t>(e.v)][e.u] += w;
    }
    std::set<int> active;
    for (NodeId v = 0; v < n; ++v) active.insert(v);

    double cur_q = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        const double frac = dc[static_cast<std::size_t>(v)] / (2.0 * W);
        cur_q -= frac * frac;
    }
    result.initial_q = cur_q;
    double best_q = cur_q;
    std::vector<int> best_assign = node_comm;

    auto pair_weight = [&](int a, int b) -> double {
        const auto& row = nbr[static_cast<std::size_t>(a)];
        auto it = row.find(b);
        return it == row.end() ? 0.0 : it->second;
    };

    while (active.size() > 1) {
        // scan for the maximal delta; candidates within kTieEps of the first
        // maximum are tied
        double bestd = -std::numeric_limits<double>::infinity();
        bool have = false;
        std::vector<std::pair<int, int>> cand;
        for (int a : active) {
            for (const auto& [b, w] : nbr[static_cast<std::size_t>(a)]) {
                if (b <= a) continue;
                const double delta =
                    w / W - dc[static_cast<std::size_t>(a)] * dc[static_cast<std::size_t>(b)] /
                                (2.0 * W * W);
                if (!have || delta > bestd + kTieEps) {
                    bestd = delta;
                    have = true;
                    cand.clear();
                    cand.push_back({a, b});
                } else if (std::abs(delta - bestd) <= kTieEps) {
                    cand.push_back({a, b});
                }
            }
        }
        if (!have) break; // remaining communities are mutually disconnected

        int ci = cand[0].first;
        int cj = cand[0].second;
        if (cand.size() > 1) {
            // one-step lookahead: prefer the tied merge leaving the largest
            // next-step delta
            double best_score = -std::numeric_limits<double>::infinity();
            bool chosen = false;
            std::pair<int, int> pick{-1, -1};
            for (const auto& [a0, b0] : cand) {
                const double dcm =
                    dc[static_cast<std::size_t>(a0)] + dc[static_cast<std::size_t>(b0)];
                double best2 = -std::numeric_limits<double>::infinity();
                std::set<int> seen;
                for (int a : active) {
                    for (const auto& [b, w] : nbr[static_cast<std::size_t>(a)]) {
                        if (b <= a) continue;
                        if ((a == a0 && b == b0) || (a == b0 && b == a0)) continue;
                        double delta2;
                        if (a == a0 || a == b0 || b == a0 || b == b0) {
                            const int other = (a == a0 || a == b0) ? b : a;
                            if (seen.count(other)) continue;
                            seen.insert(other);
                            const double w2 = pair_weight(a0, other) + pair_weight(b0, other);
                            delta2 = w2 / W -
                                     dcm * dc[static_cast<std::size_t>(other)] / (2.0 * W * W);
                        } else {
                            delta2 = w / W -
                                     dc[static_cast<std::size_t>(a)] *
                                         dc[static_cast<std::size_t>(b)] / (2.0 * W * W);
                        }
                        if (delta2 > best2) best2 = delta2;
                    }
                }
                if (!chosen || best2 > best_score + kTieEps ||
                    (std::abs(best2 - best_score) <= kTieEps && std::make_pair(a0, b0) < pick)) {
                    best_score = best2;
                    chosen = true;
                    pick = {a0, b0};
                }
            }
            ci = pick.first;
            cj = pick.second;
        }

        // merge cj into ci (ci < cj by construction)
        for (auto& cval : node_comm)
            if (cval == cj) cval = ci;
        dc[static_cast<std::size_t>(ci)] += dc[static_cast<std::size_t>(cj)];
        for (const auto& [x, w] : nbr[static_cast<std::size_t>(cj)]) {
            nbr[static_cast<std::size_t>(x)].erase(cj);
            if (x == ci) continue;
            nbr[static_cast<std::size_t>(ci)][x] += w;
            nbr[static_cast<std::size_t>(x)][ci] += w;
        }
        nbr[static_cast<std::size_t>(cj)].clear();
        active.erase(cj);

        cur_q += bestd;
        result.trace.push_back({ci, cj, bestd, cur_q});
        if (cur_q > best_q) {
            best_q = cur_q;
            best_assign = node_comm;
        }
    }

    result.best = Partition(best_assign);
    result.best_q = best_q;
    return result;
}

Partition label_propagation(const Graph& g, bool use_weights, std::uint64_t seed) {
    const NodeId n = g.node_count();
    if (n == 0) throw DomainError("label_propagation on empty graph");
    std::vector<int> label(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) label[static_cast<std::size_t>(v)] = v;

    Rng rng(seed);
    std::vector<NodeId> order(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;

    for (int pass = 0; pass < 100; ++pass) {
        rng.shuffle(order);
        bool changed = false;
        std::map<int, double> freq;
        for (NodeId v : order) {
            const auto nv = g.neighbors(v);
            if (nv.empty()) continue;
            freq.clear();
            for (const auto& [u, w] : nv)
                freq[label[static_cast<std::size_t>(u)]] += use_weights ? w : 1.0;
            int best_label = -1;
            double best_w = -std::numeric_limits<double>::infinity();
            for (const auto& [lab, w] : freq) {
                if (w > best_w) { // map iterates ascending: first max = smallest label
                    best_w = w;
                    best_label = lab;
                }
            }
            if (best_label != label[static_cast<std::size_t>(v)]) {
                label[static_cast<std::size_t>(v)] = best_label;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return Partition(label);
}

void validate_enhancement(const Graph& g, const Partition& c, const EnhancementScheme& s) {
    if (s.weights.size() != g.edge_count())
        throw DomainError("scheme weight vector size mismatch");
    if (static_cast<int>(s.added_weight.size()) != c.community_count())
        throw DomainError("scheme added_weight size mismatch");
    constexpr double eps = 1e-9;

    for (int cid : s.enhanced) {
        if (cid < 0 || cid >= c.community_count())
            throw DomainError("enhanced community id out of range");
        if (s.added_weight[static_cast<std::size_t>(cid)] <= 0.0)
            throw DomainError("enhanced community " + std::to_string(cid) +
                              " must have positive added weight");
    }

    std::vector<double> wc(static_cast<std::size_t>(c.community_count()), 0.0);
    std::vector<double> dc(static_cast<std::size_t>(c.community_count()), 0.0);
    double total = 0.0;
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const int a = c.community_of(edges[i].u);
        const int b = c.community_of(edges[i].v);
        const double w = s.weights[i];
        const bool ea = s.enhanced.count(a) > 0;
        const bool eb = s.enhanced.count(b) > 0;
        total += w;
        dc[static_cast<std::size_t>(a)] += 1.0;
        dc[static_cast<std::size_t>(b)] += 1.0;
        if (a == b) {
            wc[static_cast<std::size_t>(a)] += 2.0 * w;
            if (ea && w < 1.0 - eps)
                throw DomainError("internal edge of enhanced community below 1");
            if (!ea && std::abs(w - 1.0) > eps)
                throw DomainError("edge outside the enhancement must keep weight 1");
        } else {
            wc[static_cast<std::size_t>(a)] += w;
            wc[static_cast<std::size_t>(b)] += w;
            if (ea || eb) {
                if (w > 1.0 + eps)
                    throw DomainError("cross edge of enhanced community above 1");
                if (w < 1.0 - eps && !(ea && eb))
                    throw DomainError("reduced cross edge requires both sides enhanced");
            } else if (std::abs(w - 1.0) > eps) {
                throw DomainError("edge outside the enhancement must keep weight 1");
            }
        }
    }
    for (int cid : s.enhanced)
        if (std::abs(wc[static_cast<std::size_t>(cid)] - dc[static_cast<std::size_t>(cid)]) >
            1e-6)
            throw DomainError("W_c != d_c for enhanced community " + std::to_string(cid));
    if (std::abs(total - static_cast<double>(g.edge_count())) > 1e-6)
        throw DomainError("balanced scheme must preserve W == |E|");
}

EnhancementScheme build_balanced_enhancement(const Graph& g, const Partition& c,
                                             const std::set<int>& targets,
                                             const std::map<int, double>& e_amounts) {
    EnhancementScheme s;
    s.weights.assign(g.edge_count(), 1.0);
    s.enhanced = targets;
    s.added_weight.assign(static_cast<std::size_t>(c.community_count()), 0.0);

    std::vector<std::size_t> internal_count(static_cast<std::size_t>(c.community_count()), 0);
    // cross edges whose both endpoints are targets, grouped per target
    std::vector<std::vector<std::size_t>> tt_cross(static_cast<std::size_t>(c.community_count()));
    std::vector<bool> has_cross(static_cast<std::size_t>(c.community_count()), false);

    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const int a = c.community_of(edges[i].u);
        const int b = c.community_of(edges[i].v);
        if (a == b) {
            ++internal_count[static_cast<std::size_t>(a)];
        } else {
            has_cross[static_cast<std::size_t>(a)] = true;
            has_cross[static_cast<std::size_t>(b)] = true;
            if (targets.count(a) && targets.count(b)) {
                tt_cross[static_cast<std::size_t>(a)].push_back(i);
                tt_cross[static_cast<std::size_t>(b)].push_back(i);
            }
        }
    }

    for (int t : targets) {
        if (t < 0 || t >= c.community_count())
            throw DomainError("target community out of range");
        auto it = e_amounts.find(t);
        if (it == e_amounts.end() || it->second <= 0.0)
            throw DomainError("target community " + std::to_string(t) +
                              " needs a positive enhancement amount");
        if (internal_count[static_cast<std::size_t>(t)] == 0)
            throw DomainError("target community " + std::to_string(t) + " has no internal edge");
        if (!has_cross[static_cast<std::size_t>(t)])
            throw DomainError("target community " + std::to_string(t) + " has no cross edge");
        if (tt_cross[static_cast<std::size_t>(t)].empty())
            throw DomainError("infeasible: community " + std::to_string(t) +
                              " has no cross edge to another enhanced community");
        s.added_weight[static_cast<std::size_t>(t)] = it->second;
    }

    // internal raises
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const int a = c.community_of(edges[i].u);
        const int b = c.community_of(edges[i].v);
        if (a == b && targets.count(a))
            s.weights[i] += s.added_weight[static_cast<std::size_t>(a)] /
                            static_cast<double>(internal_count[static_cast<std::size_t>(a)]);
    }

    // cross reductions: solve sum over tt_cross(t) of r_e == 2*e_t per target
    // by Gauss-Seidel sweeps on the per-target deficits
    std::vector<double> reduction(g.edge_count(), 0.0);
    std::vector<int> target_list(targets.begin(), targets.end());
    for (int sweep = 0; sweep < 400; ++sweep) {
        double worst = 0.0;
        for (int t : target_list) {
            const auto& es = tt_cross[static_cast<std::size_t>(t)];
            double have = 0.0;
            for (std::size_t i : es) have += reduction[i];
            const double deficit = 2.0 * s.added_weight[static_cast<std::size_t>(t)] - have;
            worst = std::max(worst, std::abs(deficit));
            const double share = deficit / static_cast<double>(es.size());
            for (std::size_t i : es) reduction[i] += share;
        }
        if (worst < 1e-13) break;
    }
    for (int t : target_list) {
        const auto& es = tt_cross[static_cast<std::size_t>(t)];
        double have = 0.0;
        for (std::size_t i : es) have += reduction[i];
        if (std::abs(have - 2.0 * s.added_weight[static_cast<std::size_t>(t)]) > 1e-8)
            throw DomainError("infeasible cross-edge reduction for community " +
                              std::to_string(t));
    }
    for (std::size_t i = 0; i < reduction.size(); ++i) {
        if (reduction[i] == 0.0) continue;
        if (reduction[i] < -1e-12)
            throw DomainError("infeasible: negative cross-edge reduction");
        s.weights[i] -= reduction[i];
    }

    validate_enhancement(g, c, s);
    return s;
}

namespace {

struct SplitSide {
    double cross_w = 0.0;   // weight between the two halves
    double cross_cnt = 0.0; // edge count between the two halves
    double d1w = 0.0, d2w = 0.0;
    double d1c = 0.0, d2c = 0.0;
};

// Aggregates for splitting community `cid` into side A (flag true) and B.
SplitSide split_aggregates(const Graph& g, const Partition& c, const EnhancementScheme& s,
                           int cid, const std::vector<bool>& in_side_a) {
    SplitSide out;
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        const int a = c.community_of(e.u);
        const int b = c.community_of(e.v);
        const double w = s.weights[i];
        const bool ua = a == cid && in_side_a[static_cast<std::size_t>(e.u)];
        const bool va = b == cid && in_side_a[static_cast<std::size_t>(e.v)];
        if (a == cid) {
            if (ua) { out.d1w += w; out.d1c += 1.0; }
            else    { out.d2w += w; out.d2c += 1.0; }
        }
        if (b == cid) {
            if (va) { out.d1w += w; out.d1c += 1.0; }
            else    { out.d2w += w; out.d2c += 1.0; }
        }
        if (a == cid && b == cid && ua != va) {
            out.cross_w += w;
            out.cross_cnt += 1.0;
        }
    }
    return out;
}

} // namespace

TheoremReport theorem_harness(const Graph& g, const Partition& c, const EnhancementScheme& s) {
    TheoremReport rep;
    constexpr double eps = 1e-10;

    const Graph gw = g.with_weights(s.weights);
    const double q_plain = modularity(g, c, false);
    const double q_weighted = modularity(gw, c, true);
    rep.t1_margin = q_weighted - q_plain;
    if (rep.t1_margin < -eps) {
        rep.t1_holds = false;
        rep.witness = "T1: Q^w < Q";
    }

    // enhanced adjacent pairs
    std::map<std::pair<int, int>, bool> adjacent;
    for (const Edge& e : g.edges()) {
        int a = c.community_of(e.u);
        int b = c.community_of(e.v);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (s.enhanced.count(a) && s.enhanced.count(b)) adjacent[{a, b}] = true;
    }
    rep.t2_worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& [pair, _] : adjacent) {
        const double d_plain = merge_delta(g, c, pair.first, pair.second, false);
        const double d_weighted = merge_delta(gw, c, pair.first, pair.second, true);
        const double margin = d_plain - d_weighted;
        ++rep.t2_pairs_checked;
        if (margin < rep.t2_worst_margin) rep.t2_worst_margin = margin;
        if (margin < -eps) {
            rep.t2_holds = false;
            if (rep.witness.empty())
                rep.witness = "T2: dQ^w > dQ for pair (" + std::to_string(pair.first) + "," +
                              std::to_string(pair.second) + ")";
        }
    }
    if (rep.t2_pairs_checked == 0) rep.t2_worst_margin = 0.0;

    // Theorem 3 implication, tested as proved: an enhanced community c with
    // d_c <= sqrt(8|E|) is split into two nonempty halves; when the
    // unweighted join-delta of the halves is >= 0, the weighted one is too.
    const double me = static_cast<double>(g.edge_count());
    const double wsum = gw.total_weight();
    const double cap = std::sqrt(8.0 * me);
    Rng rng(0x7e3u);
    std::vector<bool> side(static_cast<std::size_t>(g.node_count()), false);
    for (int cid : s.enhanced) {
        const auto& members = c.members()[static_cast<std::size_t>(cid)];
        if (members.size() < 2) continue;
        double d_c = 0.0;
        for (NodeId v : members) d_c += g.degree(v);
        if (d_c > cap) continue;
        for (int trial = 0; trial < 8; ++trial) {
            std::size_t cut = 1 + static_cast<std::size_t>(rng.below(members.size() - 1));
            std::vector<NodeId> shuffled(members.begin(), members.end());
            rng.shuffle(shuffled);
            for (NodeId v : members) side[static_cast<std::size_t>(v)] = false;
            for (std::size_t i = 0; i < cut; ++i)
                side[static_cast<std::size_t>(shuffled[i])] = true;

            const SplitSide sp = split_aggregates(g, c, s, cid, side);
            if (sp.d1c == 0.0 || sp.d2c == 0.0) continue;
            const double dq_plain = sp.cross_cnt / me - sp.d1c * sp.d2c / (2.0 * me * me);
            if (dq_plain < 0.0) continue; // premise not met
            const double dq_weighted =
                sp.cross_w / wsum - sp.d1w * sp.d2w / (2.0 * wsum * wsum);
            ++rep.t3_cases_checked;
            if (dq_weighted < -eps) {
                rep.t3_holds = false;
                if (rep.witness.empty())
                    rep.witness = "T3: weighted split-delta negative in community " +
                                  std::to_string(cid);
            }
        }
    }
    return rep;
}

} // namespace amw
