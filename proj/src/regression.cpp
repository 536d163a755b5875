#include "regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "errors.hpp"

namespace amw {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

using Vec = EdgeFeatureVector;

Vec operator+(Vec a, const Vec& b) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) a[i] += b[i];
    return a;
}

Vec& operator+=(Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) a[i] += b[i];
    return a;
}

Vec operator*(double s, Vec a) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) a[i] *= s;
    return a;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

struct PairMultiplicity {
    // per edge: 2 when inside c, 1 when exactly one endpoint in c, else 0
    int in_c1;
    int in_c2;
    bool crosses;
};

PairMultiplicity multiplicity(const Partition& gt, const Edge& e, int c1, int c2) {
    const int a = gt.community_of(e.u);
    const int b = gt.community_of(e.v);
    PairMultiplicity m{};
    m.in_c1 = (a == c1) + (b == c1);
    m.in_c2 = (a == c2) + (b == c2);
    m.crosses = (a == c1 && b == c2) || (a == c2 && b == c1);
    return m;
}

} // namespace

TrainingProblem make_training_problem(LabeledGraph lg, std::vector<std::pair<int, int>> pairs,
                                      double lambda1, double lambda2, double tol, int max_iters,
                                      std::uint64_t training_seed) {
    if (tol <= 0.0) throw DomainError("tol must be positive");
    if (lambda1 < 0.0 || lambda2 < 0.0) throw DomainError("lambdas must be >= 0");

    const Partition& gt = lg.ground_truth;
    for (auto& [a, b] : pairs) {
        if (a > b) std::swap(a, b);
        if (a < 0 || b >= gt.community_count() || a == b)
            throw DomainError("invalid community pair");
    }
    // adjacency check
    std::vector<bool> adjacent(pairs.size(), false);
    for (const Edge& e : lg.graph.edges()) {
        int a = gt.community_of(e.u);
        int b = gt.community_of(e.v);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (pairs[i] == std::make_pair(a, b)) adjacent[i] = true;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (!adjacent[i])
            throw DomainError("community pair (" + std::to_string(pairs[i].first) + "," +
                              std::to_string(pairs[i].second) + ") is not edge-adjacent");

    TrainingProblem p;
    p.features = extract_all(lg.graph);
    p.graph = std::move(lg);
    p.pairs = std::move(pairs);
    p.lambda1 = lambda1;
    p.lambda2 = lambda2;
    p.tol = tol;
    p.max_iters = max_iters;
    p.training_seed = training_seed;
    return p;
}

WeightAggregates naive_aggregates(const TrainingProblem& problem, const Vec& p) {
    const Graph& g = problem.graph.graph;
    const Partition& gt = problem.graph.ground_truth;
    const auto& edges = g.edges();
    const std::size_t m = edges.size();

    WeightAggregates agg;
    std::vector<std::size_t> slot(static_cast<std::size_t>(gt.community_count()),
                                  std::numeric_limits<std::size_t>::max());
    for (const auto& [a, b] : problem.pairs) {
        for (int c : {a, b}) {
            if (slot[static_cast<std::size_t>(c)] == std::numeric_limits<std::size_t>::max()) {
                slot[static_cast<std::size_t>(c)] = agg.tracked.size();
                agg.tracked.push_back(c);
            }
        }
    }
    agg.community.assign(agg.tracked.size(), 0.0);
    agg.community_in.assign(agg.tracked.size(), 0.0);
    agg.community_out.assign(agg.tracked.size(), 0.0);
    agg.pair_cross.assign(problem.pairs.size(), 0.0);

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double w = dot(p, problem.features.rows[i]);
        sum += w;
        sum_sq += w * w;
        const int a = gt.community_of(edges[i].u);
        const int b = gt.community_of(edges[i].v);
        const auto sa = slot[static_cast<std::size_t>(a)];
        const auto sb = slot[static_cast<std::size_t>(b)];
        if (a == b) {
            if (sa != std::numeric_limits<std::size_t>::max()) agg.community_in[sa] += w;
        } else {
            if (sa != std::numeric_limits<std::size_t>::max()) agg.community_out[sa] += w;
            if (sb != std::numeric_limits<std::size_t>::max()) agg.community_out[sb] += w;
        }
        for (std::size_t k = 0; k < problem.pairs.size(); ++k) {
            const auto& [c1, c2] = problem.pairs[k];
            if ((a == c1 && b == c2) || (a == c2 && b == c1)) agg.pair_cross[k] += w;
        }
    }
    agg.total = sum;
    agg.mean = m > 0 ? sum / static_cast<double>(m) : 0.0;
    agg.variance = m > 0 ? sum_sq / static_cast<double>(m) - agg.mean * agg.mean : 0.0;
    for (std::size_t s = 0; s < agg.tracked.size(); ++s)
        agg.community[s] = 2.0 * agg.community_in[s] + agg.community_out[s];
    return agg;
}

namespace {

double objective_from_aggregates(const TrainingProblem& problem, const WeightAggregates& agg,
                                 std::vector<std::size_t> const& slot) {
    if (agg.total == 0.0) throw DomainError("degenerate weights: W == 0");
    double f = (agg.mean - 1.0) * (agg.mean - 1.0) + problem.lambda1 * agg.variance;
    const double w = agg.total;
    for (std::size_t k = 0; k < problem.pairs.size(); ++k) {
        const auto& [c1, c2] = problem.pairs[k];
        const double wc1 = agg.community[slot[static_cast<std::size_t>(c1)]];
        const double wc2 = agg.community[slot[static_cast<std::size_t>(c2)]];
        const double dq = agg.pair_cross[k] / w - wc1 * wc2 / (2.0 * w * w);
        f += problem.lambda2 * sigmoid(dq);
    }
    return f;
}

std::vector<std::size_t> tracked_slots(const WeightAggregates& agg, int community_count) {
    std::vector<std::size_t> slot(static_cast<std::size_t>(community_count),
                                  std::numeric_limits<std::size_t>::max());
    for (std::size_t s = 0; s < agg.tracked.size(); ++s)
        slot[static_cast<std::size_t>(agg.tracked[s])] = s;
    return slot;
}

} // namespace

double objective(const TrainingProblem& problem, const Vec& p) {
    const auto agg = naive_aggregates(problem, p);
    return objective_from_aggregates(problem, agg,
                                     tracked_slots(agg, problem.graph.ground_truth.community_count()));
}

Vec gradient(const TrainingProblem& problem, const Vec& p) {
    // w-space chain rule: dF/dw per edge, then X^T (dF/dw)
    const Graph& g = problem.graph.graph;
    const Partition& gt = problem.graph.ground_truth;
    const auto& edges = g.edges();
    const std::size_t m = edges.size();
    if (m == 0) throw DomainError("gradient on empty graph");

    std::vector<double> w(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = dot(p, problem.features.rows[i]);
        sum += w[i];
    }
    if (sum == 0.0) throw DomainError("degenerate weights: W == 0");
    const double md = static_cast<double>(m);
    const double mean = sum / md;

    std::vector<double> df_dw(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        df_dw[i] = 2.0 * (mean - 1.0) / md +
                   problem.lambda1 * (2.0 * w[i] / md - 2.0 * mean / md);

    const double W = sum;
    for (const auto& [c1, c2] : problem.pairs) {
        double wc1 = 0.0, wc2 = 0.0, wx = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto mult = multiplicity(gt, edges[i], c1, c2);
            wc1 += mult.in_c1 * w[i];
            wc2 += mult.in_c2 * w[i];
            if (mult.crosses) wx += w[i];
        }
        const double dq = wx / W - wc1 * wc2 / (2.0 * W * W);
        const double h = sigmoid(dq);
        const double hp = h * (1.0 - h);
        for (std::size_t i = 0; i < m; ++i) {
            const auto mult = multiplicity(gt, edges[i], c1, c2);
            // dW/dw_e = 1; dWx/dw_e = crosses; dWc/dw_e = multiplicity
            const double ddq = (static_cast<double>(mult.crosses) * W - wx) / (W * W) -
                               ((mult.in_c1 * wc2 + mult.in_c2 * wc1) * W - 2.0 * wc1 * wc2) /
                                   (2.0 * W * W * W);
            df_dw[i] += problem.lambda2 * hp * ddq;
        }
    }

    Vec grad{};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < kFeatureCount; ++j)
            grad[j] += problem.features.rows[i][j] * df_dw[i];
    return grad;
}

TrainingCache::TrainingCache(const TrainingProblem& problem)
    : problem_(&problem), edge_count_(problem.graph.graph.edge_count()) {
    const Graph& g = problem.graph.graph;
    const Partition& gt = problem.graph.ground_truth;
    const auto& edges = g.edges();

    cols_ = problem.features.column_sums;
    for (std::size_t i = 0; i < edge_count_; ++i) {
        const Vec& x = problem.features.rows[i];
        for (std::size_t a = 0; a < kFeatureCount; ++a)
            for (std::size_t b = 0; b < kFeatureCount; ++b) xxt_[a][b] += x[a] * x[b];
    }

    tracked_index_.assign(static_cast<std::size_t>(gt.community_count()),
                          std::numeric_limits<std::size_t>::max());
    for (const auto& [a, b] : problem.pairs) {
        for (int c : {a, b}) {
            if (tracked_index_[static_cast<std::size_t>(c)] ==
                std::numeric_limits<std::size_t>::max()) {
                tracked_index_[static_cast<std::size_t>(c)] = tracked_.size();
                tracked_.push_back(c);
            }
        }
    }
    sum_in_.assign(tracked_.size(), Vec{});
    sum_out_.assign(tracked_.size(), Vec{});
    sum_cross_.assign(problem.pairs.size(), Vec{});

    std::size_t touched = 0;
    for (std::size_t i = 0; i < edge_count_; ++i) {
        const int a = gt.community_of(edges[i].u);
        const int b = gt.community_of(edges[i].v);
        const auto sa = tracked_index_[static_cast<std::size_t>(a)];
        const auto sb = tracked_index_[static_cast<std::size_t>(b)];
        const bool touches = sa != std::numeric_limits<std::size_t>::max() ||
                             sb != std::numeric_limits<std::size_t>::max();
        if (touches) ++touched;
        if (a == b) {
            if (sa != std::numeric_limits<std::size_t>::max()) sum_in_[sa] += problem.features.rows[i];
        } else {
            if (sa != std::numeric_limits<std::size_t>::max()) sum_out_[sa] += problem.features.rows[i];
            if (sb != std::numeric_limits<std::size_t>::max()) sum_out_[sb] += problem.features.rows[i];
        }
        for (std::size_t k = 0; k < problem.pairs.size(); ++k) {
            const auto& [c1, c2] = problem.pairs[k];
            if ((a == c1 && b == c2) || (a == c2 && b == c1))
                sum_cross_[k] += problem.features.rows[i];
        }
    }
    mean_pair_edges_ = problem.pairs.empty()
                           ? 0.0
                           : static_cast<double>(touched) / static_cast<double>(problem.pairs.size());
}

WeightAggregates TrainingCache::aggregates(const Vec& p) const {
    WeightAggregates agg;
    agg.tracked = tracked_;
    agg.total = dot(p, cols_);
    const double md = static_cast<double>(edge_count_);
    agg.mean = edge_count_ > 0 ? agg.total / md : 0.0;
    double quad = 0.0;
    for (std::size_t a = 0; a < kFeatureCount; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < kFeatureCount; ++b) row += xxt_[a][b] * p[b];
        quad += p[a] * row;
    }
    agg.variance = edge_count_ > 0 ? quad / md - agg.mean * agg.mean : 0.0;
    agg.community_in.resize(tracked_.size());
    agg.community_out.resize(tracked_.size());
    agg.community.resize(tracked_.size());
    for (std::size_t s = 0; s < tracked_.size(); ++s) {
        agg.community_in[s] = dot(p, sum_in_[s]);
        agg.community_out[s] = dot(p, sum_out_[s]);
        agg.community[s] = 2.0 * agg.community_in[s] + agg.community_out[s];
    }
    agg.pair_cross.resize(sum_cross_.size());
    for (std::size_t k = 0; k < sum_cross_.size(); ++k)
        agg.pair_cross[k] = dot(p, sum_cross_[k]);
    return agg;
}

double TrainingCache::objective(const Vec& p) const {
    const auto agg = aggregates(p);
    return objective_from_aggregates(
        *problem_, agg, tracked_slots(agg, problem_->graph.ground_truth.community_count()));
}

Vec TrainingCache::gradient(const Vec& p) const {
    const auto agg = aggregates(p);
    if (agg.total == 0.0) throw DomainError("degenerate weights: W == 0");
    const double md = static_cast<double>(edge_count_);
    const double W = agg.total;

    Vec grad = (2.0 * (agg.mean - 1.0) / md) * cols_;
    // lambda1 * d(sigma^2)/dp = lambda1 * (2 M p / m - 2 mean cols / m)
    Vec mp{};
    for (std::size_t a = 0; a < kFeatureCount; ++a)
        for (std::size_t b = 0; b < kFeatureCount; ++b) mp[a] += xxt_[a][b] * p[b];
    grad += problem_->lambda1 * (2.0 / md) * mp;
    grad += (-problem_->lambda1 * 2.0 * agg.mean / md) * cols_;

    for (std::size_t k = 0; k < problem_->pairs.size(); ++k) {
        const auto& [c1, c2] = problem_->pairs[k];
        const auto s1 = tracked_index_[static_cast<std::size_t>(c1)];
        const auto s2 = tracked_index_[static_cast<std::size_t>(c2)];
        const double wc1 = agg.community[s1];
        const double wc2 = agg.community[s2];
        const double wx = agg.pair_cross[k];
        const double dq = wx / W - wc1 * wc2 / (2.0 * W * W);
        const double h = sigmoid(dq);
        const double hp = h * (1.0 - h);

        Vec sc1 = 2.0 * sum_in_[s1] + sum_out_[s1];
        Vec sc2 = 2.0 * sum_in_[s2] + sum_out_[s2];
        Vec ddq = (1.0 / W) * sum_cross_[k];
        ddq += (-wx / (W * W)) * cols_;
        ddq += (-wc2 / (2.0 * W * W)) * sc1;
        ddq += (-wc1 / (2.0 * W * W)) * sc2;
        ddq += (wc1 * wc2 / (W * W * W)) * cols_;
        grad += (problem_->lambda2 * hp) * ddq;
    }
    return grad;
}

TrainResult train_detailed(const TrainingProblem& problem) {
    const TrainingCache cache(problem);

    Vec p{};
    p[0] = 1.0; // reproduces the unweighted graph at start
    double f = cache.objective(p);
    Vec g = cache.gradient(p);

    TrainResult result;
    result.objective_trace.push_back(f);

    double h[kFeatureCount][kFeatureCount] = {};
    auto reset_h = [&] {
        for (std::size_t i = 0; i < kFeatureCount; ++i)
            for (std::size_t j = 0; j < kFeatureCount; ++j) h[i][j] = i == j ? 1.0 : 0.0;
    };
    reset_h();

    Vec best_p = p;
    double best_f = f;
    int iter = 0;
    bool converged = norm2(g) < problem.tol;
    bool line_search_failed = false;
    double last_grad_norm = norm2(g);

    while (!converged && iter < problem.max_iters) {
        Vec d{};
        for (std::size_t i = 0; i < kFeatureCount; ++i)
            for (std::size_t j = 0; j < kFeatureCount; ++j) d[i] -= h[i][j] * g[j];
        double gtd = dot(g, d);
        if (gtd >= -1e-16) { // not a descent direction: restart from steepest descent
            reset_h();
            d = -1.0 * g;
            gtd = dot(g, d);
        }

        constexpr double c1 = 1e-4;
        double alpha = 1.0;
        double f_new = f;
        Vec p_new = p;
        bool accepted = false;
        for (int halving = 0; halving < 50; ++halving) {
            p_new = p + alpha * d;
            bool ok = true;
            double trial = 0.0;
            try {
                trial = cache.objective(p_new);
            } catch (const DomainError&) {
                ok = false; // degenerate W: reject the step
            }
            if (ok && std::isfinite(trial) && trial <= f + c1 * alpha * gtd) {
                f_new = trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            line_search_failed = true;
            break;
        }

        Vec g_new = cache.gradient(p_new);
        const Vec s = alpha * d;
        Vec y = g_new;
        y += -1.0 * g;
        const double ys = dot(y, s);
        if (ys > 1e-12) {
            const double rho = 1.0 / ys;
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            double a[kFeatureCount][kFeatureCount];
            for (std::size_t i = 0; i < kFeatureCount; ++i)
                for (std::size_t j = 0; j < kFeatureCount; ++j)
                    a[i][j] = (i == j ? 1.0 : 0.0) - rho * s[i] * y[j];
            double tmp[kFeatureCount][kFeatureCount] = {};
            for (std::size_t i = 0; i < kFeatureCount; ++i)
                for (std::size_t k = 0; k < kFeatureCount; ++k)
                    for (std::size_t j = 0; j < kFeatureCount; ++j)
                        tmp[i][j] += a[i][k] * h[k][j];
            double hn[kFeatureCount][kFeatureCount] = {};
            for (std::size_t i = 0; i < kFeatureCount; ++i)
                for (std::size_t k = 0; k < kFeatureCount; ++k)
                    for (std::size_t j = 0; j < kFeatureCount; ++j)
                        hn[i][j] += tmp[i][k] * a[j][k]; // (I - rho y s^T) = a^T
            for (std::size_t i = 0; i < kFeatureCount; ++i)
                for (std::size_t j = 0; j < kFeatureCount; ++j)
                    h[i][j] = hn[i][j] + rho * s[i] * s[j];
        } else {
            reset_h();
        }

        p = p_new;
        f = f_new;
        g = g_new;
        ++iter;
        result.objective_trace.push_back(f);
        last_grad_norm = norm2(g);
        if (f < best_f) {
            best_f = f;
            best_p = p;
        }
        converged = last_grad_norm < problem.tol;
    }

    WeightModel model;
    model.p = line_search_failed ? best_p : p;
    model.lambda1 = problem.lambda1;
    model.lambda2 = problem.lambda2;
    model.training_seed = problem.training_seed;
    model.iterations_used = iter;
    model.final_gradient_norm = last_grad_norm;
    model.converged = converged;
    result.model = model;
    return result;
}

WeightModel train(const TrainingProblem& problem) { return train_detailed(problem).model; }

Graph apply_weights(const Graph& g, const WeightModel& model) {
    if (g.node_count() == 0) throw DomainError("apply_weights on empty graph");
    const FeatureMatrix m = extract_all(g);
    std::vector<double> w(g.edge_count());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = dot(model.p, m.rows[i]);
    return g.with_weights(w);
}

std::string WeightModel::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    j["lambda1"] = lambda1;
    j["lambda2"] = lambda2;
    j["seed"] = training_seed;
    j["iterations"] = iterations_used;
    j["grad_norm"] = final_gradient_norm;
    j["converged"] = converged;
    j["feature_set"] = feature_set;
    return j.dump(2) + "\n";
}

WeightModel WeightModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    WeightModel m;
    try {
        m.feature_set = j.at("feature_set").get<std::string>();
        if (m.feature_set != "f1-f6-v1")
            throw DomainError("unknown feature_set tag: " + m.feature_set);
        const auto pv = j.at("p").get<std::vector<double>>();
        if (pv.size() != kFeatureCount) throw DomainError("model p must have 7 entries");
        std::copy(pv.begin(), pv.end(), m.p.begin());
        m.lambda1 = j.at("lambda1").get<double>();
        m.lambda2 = j.at("lambda2").get<double>();
        m.training_seed = j.at("seed").get<std::uint64_t>();
        m.iterations_used = j.at("iterations").get<int>();
        m.final_gradient_norm = j.at("grad_norm").get<double>();
        m.converged = j.value("converged", true);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    return m;
}

} // namespace amw
