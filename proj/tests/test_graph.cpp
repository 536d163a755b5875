#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "errors.hpp"
#include "graph.hpp"
#include "oracles.hpp"

using amw::Graph;
using amw::NodeId;

TEST_CASE("triangle edge list") {
    const Graph g = Graph::load_edge_list_text("0 1\n1 2\n0 2\n");
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    for (const auto& e : g.edges()) CHECK(e.w == 1.0);
    CHECK(g.average_degree() == doctest::Approx(2.0));
    CHECK(g.average_clustering() == doctest::Approx(1.0));
}

TEST_CASE("duplicate pairs collapse keeping the last weight") {
    const Graph g = Graph::load_edge_list_text("0 1 2.5\n0 1 3.0\n");
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.edges()[0].w == doctest::Approx(3.0));
    // reversed orientation counts as the same pair
    const Graph h = Graph::load_edge_list_text("0 1 2.5\n1 0 7.0\n");
    CHECK(h.edge_count() == 1);
    CHECK(h.edges()[0].w == doctest::Approx(7.0));
}

TEST_CASE("comments, blank lines and label remapping") {
    const Graph g = Graph::load_edge_list_text("# header\n\n10 20\n20 30 0.5\n");
    CHECK(g.node_count() == 3);
    CHECK(g.label_of(0) == 10);
    CHECK(g.label_of(1) == 20);
    CHECK(g.label_of(2) == 30);
    CHECK(g.node_of_label(30) == 2);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(Graph::load_edge_list_text("0 1\nx 2\n"),
                         doctest::Contains("line 2"), amw::ParseError);
    CHECK_THROWS_WITH_AS(Graph::load_edge_list_text("0 1\n2 2\n"),
                         doctest::Contains("line 2"), amw::ParseError);
    CHECK_THROWS_AS(Graph::load_edge_list_text("0\n"), amw::ParseError);
    CHECK_THROWS_AS(Graph::load_edge_list_text("0 1 zebra\n"), amw::ParseError);
}

TEST_CASE("clustering coefficient") {
    const Graph tri = Graph::load_edge_list_text("0 1\n1 2\n0 2\n");
    for (NodeId v = 0; v < 3; ++v) CHECK(tri.clustering_coefficient(v) == doctest::Approx(1.0));

    const Graph path = Graph::load_edge_list_text("0 1\n1 2\n");
    CHECK(path.clustering_coefficient(1) == doctest::Approx(0.0));
    CHECK(path.clustering_coefficient(0) == doctest::Approx(0.0)); // degree < 2

    // 4-clique minus one edge: node 0 adjacent to all others, pair (2,3) open
    const Graph near4 = Graph::load_edge_list_text("0 1\n0 2\n0 3\n1 2\n1 3\n");
    CHECK(near4.clustering_coefficient(0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("clustering matches brute-force triple enumeration on small random graphs") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Graph g = oracle::erdos_renyi(8, 0.4, 1000 + seed);
        for (NodeId v = 0; v < g.node_count(); ++v)
            CHECK(g.clustering_coefficient(v) ==
                  doctest::Approx(oracle::clustering_coefficient(g, v)).epsilon(1e-12));
    }
}

TEST_CASE("average degree and clustering examples") {
    const Graph path3 = Graph::load_edge_list_text("0 1\n1 2\n");
    CHECK(path3.average_degree() == doctest::Approx(4.0 / 3.0));
    CHECK(path3.average_clustering() == doctest::Approx(0.0));

    const Graph star = Graph::load_edge_list_text("0 1\n0 2\n0 3\n0 4\n");
    CHECK(star.average_degree() == doctest::Approx(8.0 / 5.0));
    CHECK(star.average_clustering() == doctest::Approx(0.0));

    const Graph empty;
    CHECK_THROWS_AS(empty.average_degree(), amw::DomainError);
    CHECK_THROWS_AS(empty.average_clustering(), amw::DomainError);
}

TEST_CASE("strip_nonpositive_edges") {
    const Graph tri = Graph::load_edge_list_text("0 1 1\n1 2 1\n0 2 -0.5\n");
    const Graph stripped = tri.strip_nonpositive_edges();
    CHECK(stripped.node_count() == 3);
    CHECK(stripped.edge_count() == 2);

    const Graph pos = Graph::load_edge_list_text("0 1 1\n1 2 2\n");
    CHECK(pos.strip_nonpositive_edges().edge_count() == 2);

    const Graph allneg = Graph::load_edge_list_text("0 1 -1\n1 2 -1\n0 2 -1\n");
    const Graph none = allneg.strip_nonpositive_edges();
    CHECK(none.node_count() == 3);
    CHECK(none.edge_count() == 0);
}

TEST_CASE("serialize/load round trip") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = oracle::erdos_renyi(12, 0.3, 7000 + seed);
        // put nontrivial weights on
        std::vector<double> w(g.edge_count());
        amw::Rng rng(seed);
        for (auto& x : w) x = rng.real01() * 4.0 - 1.0;
        g = g.with_weights(w);

        const Graph back = Graph::load_edge_list_text(g.to_edge_list_text());
        REQUIRE(back.edge_count() == g.edge_count());
        // isomorphic through the original labels (edge lists carry no isolates)
        auto labeled_edges = [](const Graph& gr) {
            std::vector<std::tuple<std::int64_t, std::int64_t, double>> out;
            for (const auto& e : gr.edges()) {
                auto a = gr.label_of(e.u), b = gr.label_of(e.v);
                out.emplace_back(std::min(a, b), std::max(a, b), e.w);
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        const auto ea = labeled_edges(g);
        const auto eb = labeled_edges(back);
        for (std::size_t i = 0; i < ea.size(); ++i) {
            CHECK(std::get<0>(ea[i]) == std::get<0>(eb[i]));
            CHECK(std::get<1>(ea[i]) == std::get<1>(eb[i]));
            CHECK(std::get<2>(ea[i]) ==
                  doctest::Approx(std::get<2>(eb[i])).epsilon(1e-12));
        }
    }
}

TEST_CASE("adjacency symmetry on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = oracle::erdos_renyi(20, 0.25, 4000 + seed);
        for (const auto& e : g.edges()) {
            CHECK(g.has_edge(e.u, e.v));
            CHECK(g.has_edge(e.v, e.u));
        }
        // weighted degrees consistent with incident edges
        double sum = 0.0;
        for (NodeId v = 0; v < g.node_count(); ++v) sum += g.weighted_degree(v);
        CHECK(sum == doctest::Approx(2.0 * g.total_weight()));
    }
}

TEST_CASE("football fixture loads with the documented shape") {
    const Graph g = Graph::load_edge_list_file(std::string(AMW_DATA_DIR) + "/football.txt");
    CHECK(g.node_count() == 115);
    CHECK(g.edge_count() == 613);
    CHECK(g.average_degree() == doctest::Approx(2.0 * 613 / 115));
}
