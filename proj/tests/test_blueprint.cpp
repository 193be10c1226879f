#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <vector>

#include "amlgen/graph.hpp"
#include "doctest.h"

using namespace amlgen;

TEST_CASE("forced single-edge wiring") {
    DegreeSequences seq{{1, 0}, {0, 1}};
    RandomStream rng(1);
    auto g = realize_blueprint(seq, rng);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0] == std::pair<int, int>{1, 0});
    CHECK(g.dropped_stubs == 0);
}

TEST_CASE("two-node reciprocal wiring realizes the exact degrees") {
    DegreeSequences seq{{1, 1}, {1, 1}};
    RandomStream rng(2);
    auto g = realize_blueprint(seq, rng);
    REQUIRE(g.edges.size() == 2);
    std::vector<int> in(2, 0), out(2, 0);
    for (auto [u, v] : g.edges) {
        ++out[u];
        ++in[v];
        CHECK(u != v);
    }
    CHECK(in == std::vector<int>{1, 1});
    CHECK(out == std::vector<int>{1, 1});
}

TEST_CASE("large graph wiring is simple and nearly lossless") {
    DegreeParams p{1, 1.0, 2.0};
    RandomStream rng(3);
    auto seq = sample_degree_sequences(10000, p, rng);
    long long total = 0;
    for (int d : seq.in_degrees) total += d;
    auto rwire = rng.derive("wire");
    auto g = realize_blueprint(seq, rwire);

    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : g.edges) {
        CHECK(u != v);
        CHECK(seen.insert({u, v}).second);
    }
    CHECK(static_cast<double>(g.dropped_stubs) / total < 0.01);
    CHECK(static_cast<long long>(g.edges.size()) + g.dropped_stubs == total);
}

TEST_CASE("realized degrees equal the inputs minus the dropped residue") {
    DegreeParams p{1, 1.0, 2.5};
    RandomStream rng(4);
    auto seq = sample_degree_sequences(2000, p, rng);
    auto rwire = rng.derive("wire");
    auto g = realize_blueprint(seq, rwire);
    std::vector<int> in(2000, 0), out(2000, 0);
    for (auto [u, v] : g.edges) {
        ++out[u];
        ++in[v];
    }
    long long in_deficit = 0, out_deficit = 0;
    for (int i = 0; i < 2000; ++i) {
        CHECK(in[i] <= seq.in_degrees[i]);
        CHECK(out[i] <= seq.out_degrees[i]);
        in_deficit += seq.in_degrees[i] - in[i];
        out_deficit += seq.out_degrees[i] - out[i];
    }
    CHECK(in_deficit == g.dropped_stubs);
    CHECK(out_deficit == g.dropped_stubs);
}
