#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "agml/graph.hpp"
#include "test_util.hpp"

using agml::Graph;

TEST_CASE("single clique chain: hand-enumerated instances") {
    SUBCASE("clique 12 plus chain 48") {
        const Graph g = agml::gen_single_clique_chain(60, 12);
        CHECK(g.edge_count() == 66 + 47);
        const auto s = agml::degree_stats(g);
        CHECK(s.d_max == 11);
        CHECK(s.local_max_sum == 228);
        CHECK(s.dbar_max == doctest::Approx(3.8).epsilon(1e-12));
    }
    SUBCASE("degenerate clique of one: isolated vertex plus path of 4") {
        const Graph g = agml::gen_single_clique_chain(5, 1);
        const auto s = agml::degree_stats(g);
        CHECK(s.degree == std::vector<int>{0, 1, 2, 2, 1});
        // Local max degree is over the closed neighborhood, so every path
        // vertex sees a degree-2 vertex and the isolated vertex sees itself.
        CHECK(s.local_max == std::vector<int>{0, 2, 2, 2, 2});
        CHECK(s.dbar_max == doctest::Approx(1.6).epsilon(1e-12));
        CHECK(s.d_max == 2);
    }
    SUBCASE("triangle") {
        const auto s = agml::degree_stats(agml::gen_single_clique_chain(3, 3));
        CHECK(s.d_max == 2);
        CHECK(s.dbar_max == doctest::Approx(2.0));
    }
    SUBCASE("whole graph is one clique") {
        const Graph g = agml::gen_single_clique_chain(4, 4);
        CHECK(g.edge_count() == 6);
    }
    SUBCASE("bad clique size throws") {
        CHECK_THROWS_AS(agml::gen_single_clique_chain(5, 0), std::invalid_argument);
        CHECK_THROWS_AS(agml::gen_single_clique_chain(5, 6), std::invalid_argument);
    }
}

TEST_CASE("multi clique chain: hand-enumerated instances") {
    SUBCASE("cliques 5,8,10,11 plus chain 66") {
        const Graph g = agml::gen_multi_clique_chain(100, {5, 8, 10, 11});
        const auto s = agml::degree_stats(g);
        CHECK(s.d_max == 10);
        CHECK(s.local_max_sum == 408);
        CHECK(s.dbar_max == doctest::Approx(4.08).epsilon(1e-12));
    }
    SUBCASE("no cliques means a pure path") {
        const Graph g = agml::gen_multi_clique_chain(10, {});
        const auto s = agml::degree_stats(g);
        CHECK(g.edge_count() == 9);
        CHECK(s.d_max == 2);
        CHECK(s.dbar_max == doctest::Approx(2.0));
    }
    SUBCASE("small mixed instance matches the brute-force oracle") {
        const Graph g = agml::gen_multi_clique_chain(13, {3, 4});
        const auto s = agml::degree_stats(g);
        const auto o = testutil::brute_degree_stats(g);
        CHECK(s.degree == o.degree);
        CHECK(s.local_max == o.local_max);
        CHECK(s.d_max == 3);
        CHECK(s.dbar_max == doctest::Approx(30.0 / 13.0).epsilon(1e-12));
    }
    SUBCASE("oversized or non-positive sizes throw") {
        CHECK_THROWS_AS(agml::gen_multi_clique_chain(6, {4, 4}), std::invalid_argument);
        CHECK_THROWS_AS(agml::gen_multi_clique_chain(6, {0}), std::invalid_argument);
    }
}

TEST_CASE("star and edgeless degree stats") {
    Graph star(5);
    for (int leaf = 1; leaf < 5; ++leaf) star.add_edge(0, leaf);
    const auto s = agml::degree_stats(star);
    CHECK(s.d_max == 4);
    CHECK(s.dbar_max == doctest::Approx(4.0));  // every leaf sees the hub

    const auto e = agml::degree_stats(Graph(7));
    CHECK(e.d_max == 0);
    CHECK(e.dbar_max == doctest::Approx(0.0));
}

TEST_CASE("power law generator") {
    SUBCASE("one growth step attaches exactly one edge") {
        const Graph g = agml::gen_power_law(6, 5, 1, 42);
        CHECK(g.degree(5) == 1);
    }
    SUBCASE("deterministic in the seed") {
        const Graph a = agml::gen_power_law(40, 5, 1, 7);
        const Graph b = agml::gen_power_law(40, 5, 1, 7);
        const Graph c = agml::gen_power_law(40, 5, 1, 8);
        CHECK(a == b);
        CHECK_FALSE(a == c);
    }
    SUBCASE("seed block always has an edge and stats match the oracle") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const Graph g = agml::gen_power_law(30, 5, 2, seed);
            bool seed_edge = false;
            for (int i = 0; i < 5 && !seed_edge; ++i)
                for (int j = i + 1; j < 5; ++j)
                    if (g.has_edge(i, j)) seed_edge = true;
            CHECK(seed_edge);
            for (int t = 5; t < 30; ++t) CHECK(g.degree(t) >= 2);
            const auto s = agml::degree_stats(g);
            const auto o = testutil::brute_degree_stats(g);
            CHECK(s.local_max == o.local_max);
            CHECK(s.d_max == o.d_max);
        }
    }
    SUBCASE("bad parameters throw") {
        CHECK_THROWS_AS(agml::gen_power_law(10, 1, 1, 0), std::invalid_argument);
        CHECK_THROWS_AS(agml::gen_power_law(10, 5, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("degree stats invariants on random graphs") {
    auto rng = testutil::make_rng(123);
    for (int rep = 0; rep < 30; ++rep) {
        const int p = 1 + int(rng() % 20);
        const Graph g = testutil::er_graph(p, 0.25, rng);
        const auto s = agml::degree_stats(g);
        const auto o = testutil::brute_degree_stats(g);
        CHECK(s.degree == o.degree);
        CHECK(s.local_max == o.local_max);
        CHECK(s.d_max == o.d_max);
        CHECK(s.dbar_max == doctest::Approx(o.dbar_max).epsilon(1e-12));
        CHECK(s.dbar_max <= double(s.d_max) + 1e-12);
        int lm = 0;
        for (std::size_t i = 0; i < s.local_max.size(); ++i) {
            CHECK(s.local_max[i] >= s.degree[i]);
            lm = std::max(lm, s.local_max[i]);
        }
        CHECK(lm == s.d_max);
    }
}

TEST_CASE("hamming distance") {
    const Graph tri = agml::gen_single_clique_chain(3, 3);
    CHECK(agml::hamming_distance(tri, tri) == 0);
    CHECK(agml::hamming_distance(tri, Graph(3)) == 3);

    Graph one(3);
    one.add_edge(0, 1);
    CHECK(agml::hamming_distance(tri, one) == 2);
    CHECK(agml::hamming_distance(one, tri) == 2);

    auto rng = testutil::make_rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const int p = 2 + int(rng() % 10);
        const Graph a = testutil::er_graph(p, 0.4, rng);
        const Graph b = testutil::er_graph(p, 0.4, rng);
        const Graph c = testutil::er_graph(p, 0.4, rng);
        CHECK(agml::hamming_distance(a, b) == agml::hamming_distance(b, a));
        CHECK(agml::hamming_distance(a, c) <=
              agml::hamming_distance(a, b) + agml::hamming_distance(b, c));
    }
    CHECK_THROWS_AS(agml::hamming_distance(Graph(3), Graph(4)), std::invalid_argument);
}

TEST_CASE("edges correct fraction") {
    const Graph tri = agml::gen_single_clique_chain(3, 3);
    Graph partial(3);
    partial.add_edge(0, 1);
    partial.add_edge(0, 2);
    CHECK(agml::edges_correct_fraction(tri, partial) == doctest::Approx(2.0 / 3.0));
    CHECK(agml::edges_correct_fraction(Graph(3), tri) == doctest::Approx(1.0));
}

TEST_CASE("graph construction rules") {
    Graph g(4);
    g.add_edge(2, 0);
    g.add_edge(0, 2);  // duplicate ignored
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 0));
    CHECK(g.neighbors(0) == std::vector<int>{2});
    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 4), std::out_of_range);
    CHECK_THROWS_AS(Graph(0), std::invalid_argument);

    g.add_edge(0, 1);
    g.add_edge(0, 3);
    CHECK(g.neighbors(0) == std::vector<int>{1, 2, 3});  // kept sorted
}

TEST_CASE("edge list round trip") {
    auto rng = testutil::make_rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const int p = 1 + int(rng() % 15);
        const Graph g = testutil::er_graph(p, 0.3, rng);
        std::stringstream ss;
        agml::write_edge_list(g, ss);
        const Graph back = agml::read_edge_list(ss);
        CHECK(g == back);
    }

    std::stringstream ss("p 3\n0 1\n1 2\n");
    const Graph g = agml::read_edge_list(ss);
    CHECK(g.p() == 3);
    CHECK(g.edge_count() == 2);

    std::stringstream bad("3\n0 1\n");
    CHECK_THROWS(agml::read_edge_list(bad));
}
