#include "graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"

namespace amw {

namespace {

// Key for an unordered node pair.
std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

bool parse_int(std::string_view tok, std::int64_t& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

void format_weight(std::ostream& out, double w) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    out.write(buf, ptr - buf);
}

} // namespace

Graph::Graph(NodeId node_count, std::vector<Edge> edges, std::vector<std::int64_t> labels)
    : n_(node_count), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (labels_.empty()) {
        labels_.resize(static_cast<std::size_t>(n_));
        for (NodeId v = 0; v < n_; ++v) labels_[static_cast<std::size_t>(v)] = v;
    }
    if (static_cast<NodeId>(labels_.size()) != n_)
        throw DomainError("label table size does not match node count");
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
            throw DomainError("edge endpoint out of range");
        if (e.u == e.v) throw DomainError("self-loop");
    }
    build_adjacency();
}

void Graph::build_adjacency() {
    adj_offset_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const Edge& e : edges_) {
        ++adj_offset_[static_cast<std::size_t>(e.u) + 1];
        ++adj_offset_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t i = 1; i < adj_offset_.size(); ++i) adj_offset_[i] += adj_offset_[i - 1];
    adj_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
    for (const Edge& e : edges_) {
        adj_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.w};
        adj_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.w};
    }
    for (NodeId v = 0; v < n_; ++v) {
        auto begin = adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[static_cast<std::size_t>(v)]);
        auto end = adj_.begin() + static_cast<std::ptrdiff_t>(adj_offset_[static_cast<std::size_t>(v) + 1]);
        std::sort(begin, end, [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto it = begin; it != end && it + 1 != end; ++it)
            if (it->first == (it + 1)->first) throw DomainError("parallel edge");
    }
}

Graph Graph::load_edge_list(std::istream& in) {
    std::vector<std::int64_t> labels;
    std::unordered_map<std::int64_t, NodeId> remap;
    std::vector<Edge> edges;
    std::unordered_map<std::uint64_t, std::size_t> edge_pos;

    auto intern = [&](std::int64_t label) {
        auto [it, fresh] = remap.try_emplace(label, static_cast<NodeId>(labels.size()));
        if (fresh) labels.push_back(label);
        return it->second;
    };

    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
        std::size_t start = sv.find_first_not_of(" \t");
        if (start == std::string_view::npos) continue;
        if (sv[start] == '#') continue;

        std::string_view tok[3];
        int ntok = 0;
        std::size_t pos = start;
        while (pos < sv.size()) {
            std::size_t end = sv.find_first_of(" \t", pos);
            if (end == std::string_view::npos) end = sv.size();
            if (end > pos) {
                if (ntok == 3) throw ParseError("too many fields", lineno);
                tok[ntok++] = sv.substr(pos, end - pos);
            }
            pos = sv.find_first_not_of(" \t", end);
            if (pos == std::string_view::npos) break;
        }
        if (ntok < 2) throw ParseError("expected \"u v\" or \"u v w\"", lineno);

        std::int64_t ulab, vlab;
        if (!parse_int(tok[0], ulab) || !parse_int(tok[1], vlab))
            throw ParseError("non-numeric node id", lineno);
        double w = 1.0;
        if (ntok == 3 && !parse_double(tok[2], w))
            throw ParseError("non-numeric edge weight", lineno);
        if (!std::isfinite(w)) throw ParseError("non-finite edge weight", lineno);
        if (ulab == vlab) throw ParseError("self-loop rejected", lineno);

        NodeId u = intern(ulab);
        NodeId v = intern(vlab);
        auto [it, fresh] = edge_pos.try_emplace(pair_key(u, v), edges.size());
        if (fresh) {
            edges.push_back({u, v, w});
        } else {
            edges[it->second].w = w; // duplicate pair: keep the last weight
        }
    }
    const NodeId node_count = static_cast<NodeId>(labels.size());
    return Graph(node_count, std::move(edges), std::move(labels));
}

Graph Graph::load_edge_list_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_edge_list(in);
}

Graph Graph::load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return load_edge_list(in);
}

std::span<const std::pair<NodeId, double>> Graph::neighbors(NodeId v) const {
    const std::size_t a = adj_offset_[static_cast<std::size_t>(v)];
    const std::size_t b = adj_offset_[static_cast<std::size_t>(v) + 1];
    return {adj_.data() + a, b - a};
}

int Graph::degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }

double Graph::weighted_degree(NodeId v) const {
    double s = 0.0;
    for (const auto& [u, w] : neighbors(v)) s += w;
    return s;
}

double Graph::clustering_coefficient(NodeId v) const {
    const auto nv = neighbors(v);
    const std::size_t k = nv.size();
    if (k < 2) return 0.0;
    std::size_t closed = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto nu = neighbors(nv[i].first);
        // sorted-merge intersection of nv and nu
        std::size_t a = 0, b = 0;
        while (a < k && b < nu.size()) {
            if (nv[a].first < nu[b].first) ++a;
            else if (nv[a].first > nu[b].first) ++b;
            else { ++closed; ++a; ++b; }
        }
    }
    // every triangle edge among neighbors counted twice
    return static_cast<double>(closed) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

NodeStats Graph::node_stats(NodeId v) const {
    return {degree(v), weighted_degree(v), clustering_coefficient(v)};
}

double Graph::average_degree() const {
    if (n_ == 0) throw DomainError("average_degree on empty graph");
    return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
}

double Graph::average_clustering() const {
    if (n_ == 0) throw DomainError("average_clustering on empty graph");
    double s = 0.0;
    for (NodeId v = 0; v < n_; ++v) s += clustering_coefficient(v);
    return s / static_cast<double>(n_);
}

double Graph::total_weight() const {
    double s = 0.0;
    for (const Edge& e : edges_) s += e.w;
    return s;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto nu = neighbors(u);
    auto it = std::lower_bound(nu.begin(), nu.end(), v,
                               [](const auto& p, NodeId x) { return p.first < x; });
    return it != nu.end() && it->first == v;
}

std::ptrdiff_t Graph::edge_index(NodeId u, NodeId v) const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

Graph Graph::strip_nonpositive_edges() const {
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const Edge& e : edges_)
        if (e.w > 0.0) kept.push_back(e);
    return Graph(n_, std::move(kept), labels_);
}

Graph Graph::with_weights(std::span<const double> w) const {
    if (w.size() != edges_.size()) throw DomainError("weight vector size mismatch");
    std::vector<Edge> reweighted = edges_;
    for (std::size_t i = 0; i < reweighted.size(); ++i) reweighted[i].w = w[i];
    return Graph(n_, std::move(reweighted), labels_);
}

NodeId Graph::node_of_label(std::int64_t label) const {
    for (NodeId v = 0; v < n_; ++v)
        if (labels_[static_cast<std::size_t>(v)] == label) return v;
    return -1;
}

void Graph::write_edge_list(std::ostream& out) const {
    for (const Edge& e : edges_) {
        out << label_of(e.u) << ' ' << label_of(e.v) << ' ';
        format_weight(out, e.w);
        out << '\n';
    }
}

std::string Graph::to_edge_list_text() const {
    std::ostringstream out;
    write_edge_list(out);
    return out.str();
}

} // namespace amw
