#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coop_lms/errors.hpp"
#include "coop_lms/graph.hpp"
#include "oracles.hpp"

#include <cmath>
#include <sstream>

using namespace coop_lms;
using namespace coop_lms::graph;

namespace {

Graph star(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
    return Graph(n, edges);
}

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

std::vector<Graph> graph_zoo() {
    std::vector<Graph> zoo;
    for (auto n : all_named_graphs()) zoo.push_back(named_graph(n));
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        zoo.push_back(gen_er(40, 0.15, rng).graph);
        zoo.push_back(gen_ba(60, 1 + static_cast<std::size_t>(i % 3), rng));
    }
    return zoo;
}

}  // namespace

TEST_CASE("graph construction rejects malformed edge sets") {
    CHECK_THROWS_AS(Graph(3, {{0, 0}}), ConfigError);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), ConfigError);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}), ConfigError);
    CHECK_THROWS_AS(Graph(0, {}), ConfigError);

    const Graph g(4, {{2, 1}, {0, 3}});
    CHECK(g.edges() == std::vector<Edge>{{0, 3}, {1, 2}});
    CHECK(g.has_edge(1, 2));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("named graphs match the catalog sizes") {
    struct Expect {
        const char* name;
        std::size_t v, e;
    };
    for (auto [name, v, e] : {Expect{"karate", 34, 78}, Expect{"krackhardt_kite", 10, 18}, Expect{"chvatal", 12, 24},
                              Expect{"pappus", 18, 27}, Expect{"tutte", 46, 69}}) {
        CAPTURE(name);
        const Graph g = named_graph(name);
        CHECK(g.node_count() == v);
        CHECK(g.edge_count() == e);
        CHECK(is_connected(g));
        CHECK(to_string(parse_named_graph(name)) == name);
    }
    CHECK_THROWS_AS(named_graph("petersen"), ConfigError);
}

TEST_CASE("chvatal and pappus are regular of degree 4 and 3; tutte is cubic") {
    for (auto [name, deg] : {std::pair{"chvatal", 4u}, std::pair{"pappus", 3u}, std::pair{"tutte", 3u}}) {
        const Graph g = named_graph(name);
        for (NodeId k = 0; k < g.node_count(); ++k) CHECK(g.degree(k) == deg);
    }
}

TEST_CASE("gen_er edge cases") {
    Rng rng(1);
    const auto full = gen_er(5, 1.0, rng);
    CHECK(full.graph.edge_count() == 10);
    CHECK(full.resamples == 0);
    CHECK_THROWS_AS(gen_er(5, 0.0, rng), GenerationError);
    CHECK_THROWS_AS(gen_er(1, 0.5, rng), ConfigError);
    CHECK_THROWS_AS(gen_er(5, 1.5, rng), ConfigError);
}

TEST_CASE("gen_er mean edge count matches the binomial mean") {
    const std::size_t k = 100;
    const double p = 0.25;
    const double pairs = k * (k - 1) / 2.0;
    const double mean = p * pairs;  // 1237.5
    const int seeds = 1000;
    const double sd_of_mean = std::sqrt(pairs * p * (1 - p)) / std::sqrt(static_cast<double>(seeds));

    double total = 0.0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(derive_seed(99, s, 0));
        const auto r = gen_er(k, p, rng);
        CHECK(is_connected(r.graph));
        total += static_cast<double>(r.graph.edge_count());
    }
    CHECK(std::abs(total / seeds - mean) <= 3.0 * sd_of_mean);
}

TEST_CASE("gen_er is deterministic for a fixed stream") {
    Rng a(42);
    Rng b(42);
    CHECK(gen_er(30, 0.2, a).graph == gen_er(30, 0.2, b).graph);
}

TEST_CASE("gen_ba edge counts follow the clique-seed construction") {
    Rng rng(3);
    const Graph k4 = gen_ba(4, 3, rng);
    CHECK(k4.edge_count() == 6);
    for (NodeId v = 0; v < 4; ++v) CHECK(k4.degree(v) == 3);

    // 6 seed edges + 3 per node added after the 4-node seed.
    const Graph g = gen_ba(30, 3, rng);
    CHECK(g.edge_count() == 6 + 3 * (30 - 4));
    CHECK(is_connected(g));

    CHECK_THROWS_AS(gen_ba(3, 3, rng), ConfigError);
    CHECK_THROWS_AS(gen_ba(10, 0, rng), ConfigError);
}

TEST_CASE("gen_ba degree distribution is heavy tailed") {
    int heavy = 0;
    for (int s = 0; s < 100; ++s) {
        Rng rng(derive_seed(5, s, 0));
        const Graph g = gen_ba(200, 3, rng);
        const double mean_degree = 2.0 * static_cast<double>(g.edge_count()) / 200.0;
        if (static_cast<double>(g.max_degree()) > 2.0 * mean_degree) ++heavy;
    }
    CHECK(heavy >= 95);
}

TEST_CASE("laplacian of small graphs") {
    const Graph path(2, {{0, 1}});
    linalg::Matrix expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK(laplacian(path) == expect);

    const auto ev = linalg::sym_eigvals(laplacian(triangle()));
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0));
    CHECK(ev[2] == doctest::Approx(3.0));

    const auto lap = laplacian(named_graph("karate"));
    CHECK(lap.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(linalg::sym_eigvals(lap).front()) < 1e-9);
}

TEST_CASE("laplacian_lambda_max") {
    CHECK(laplacian_lambda_max(triangle()) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(laplacian_lambda_max(star(5)) == doctest::Approx(5.0).epsilon(1e-12));

    const Graph karate = named_graph("karate");
    const double jacobi = oracle::jacobi_eigenvalues(laplacian(karate)).back();
    CHECK(std::abs(laplacian_lambda_max(karate) - jacobi) <= 1e-10);
}

TEST_CASE("is_connected") {
    CHECK_FALSE(is_connected(Graph(2, {})));
    CHECK_FALSE(is_connected(Graph(4, {{0, 1}, {2, 3}})));
    CHECK(is_connected(Graph(1, {})));
    CHECK(is_connected(star(6)));
}

TEST_CASE("laplacian spectral invariants hold across generated and catalog graphs") {
    for (const auto& g : graph_zoo()) {
        const auto lap = laplacian(g);
        CHECK((lap - lap.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(lap.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
        const auto ev = linalg::sym_eigvals(lap);
        CHECK(std::abs(ev[0]) <= 1e-9);
        CHECK(ev[1] > 1e-9);
        CHECK(ev.back() <= 2.0 * static_cast<double>(g.max_degree()) + 1e-9);
    }
}

TEST_CASE("edge list text round-trips and rejects garbage") {
    for (const auto& g : graph_zoo()) {
        std::stringstream ss;
        write_edge_list(ss, g);
        CHECK(read_edge_list(ss) == g);
    }
    std::stringstream text("K 3\n0 1\n1 2\n");
    const Graph g = read_edge_list(text);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);

    std::stringstream bad_header("N 3\n0 1\n");
    CHECK_THROWS_AS(read_edge_list(bad_header), UsageError);
    std::stringstream dangling("K 3\n0 1\n2\n");
    CHECK_THROWS_AS(read_edge_list(dangling), UsageError);
    std::stringstream junk("K 3\n0 x\n");
    CHECK_THROWS_AS(read_edge_list(junk), UsageError);
    std::stringstream out_of_range("K 2\n0 5\n");
    CHECK_THROWS_AS(read_edge_list(out_of_range), ConfigError);
}
