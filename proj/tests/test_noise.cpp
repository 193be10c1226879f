#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <vector>

#include "amlgen/noise.hpp"
#include "doctest.h"

using namespace amlgen;

namespace {

FeatureTable make_table(const std::vector<int>& labels) {
    FeatureTable t;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        FeatureRow row;
        row.account = static_cast<int>(i);
        row.label = labels[i];
        t.rows.push_back(row);
    }
    return t;
}

}  // namespace

TEST_CASE("no noise is the identity") {
    auto table = make_table({0, 1, 0, 1, 1});
    SimulationConfig cfg;
    cfg.master_seed = 3;
    cfg.noise = {1.0, 0.0, 0.0, 0.0, 0.0};
    WindowedGraph wg;
    auto labels = apply_noise(table, wg, {}, cfg);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(labels.labeled[i] == 1);
        CHECK(labels.observed[i] == table.rows[i].label);
    }
}

TEST_CASE("extremes: drop everything, flip everything") {
    auto table = make_table({0, 1, 0, 1});
    RandomStream rng(4);
    auto labels = init_labels(table);
    drop_labels(table, labels, 0.0, rng);
    for (char l : labels.labeled) CHECK(l == 0);

    auto labels2 = init_labels(table);
    apply_class_noise(table, labels2, 1.0, 1.0, rng);
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        CHECK(labels2.observed[i] == 1 - table.rows[i].label);
}

TEST_CASE("typology noise clears exactly the selected pattern's members") {
    auto table = make_table({1, 1, 1, 1, 0});
    PatternInstance a, b;
    a.members = {0, 1};
    b.members = {2, 3};
    RandomStream rng(5);

    auto labels = init_labels(table);
    apply_typology_noise(table, labels, {a}, 1.0, rng);  // only pattern a selected
    CHECK(labels.observed == std::vector<int>{0, 0, 1, 1, 0});

    auto none = init_labels(table);
    apply_typology_noise(table, none, {a, b}, 0.0, rng);
    CHECK(none.observed == std::vector<int>{1, 1, 1, 1, 0});

    auto both = init_labels(table);
    apply_typology_noise(table, both, {a, b}, 1.0, rng);
    CHECK(both.observed == std::vector<int>{0, 0, 0, 0, 0});
}

TEST_CASE("neighbor noise needs an outgoing edge to a true alert") {
    // 2 is the only true alert; 0 and 3 point at it, 1 only receives from it
    auto table = make_table({0, 0, 1, 0, 0, 0});
    WindowedGraph wg;
    wg.nodes = {0, 1, 2, 3, 4, 5};
    wg.labels = {0, 0, 1, 0, 0, 0};
    wg.edges = {{0, 2}, {2, 1}, {3, 2}, {4, 5}};

    RandomStream rng(6);
    auto labels = init_labels(table);
    apply_neighbor_noise(table, labels, wg, 1.0, rng);
    CHECK(labels.observed == std::vector<int>{1, 0, 1, 1, 0, 0});

    // unlabeled rows and already-alert rows are untouched
    auto masked = init_labels(table);
    masked.labeled[0] = 0;
    apply_neighbor_noise(table, masked, wg, 1.0, rng);
    CHECK(masked.observed == std::vector<int>{0, 0, 1, 1, 0, 0});
}

TEST_CASE("neighbor noise never touches truly alert accounts") {
    // node 0 is truly alert but observed benign after a class flip; it points
    // at another alert, yet must not be re-flagged by neighbor noise
    auto table = make_table({1, 1, 0});
    WindowedGraph wg;
    wg.nodes = {0, 1, 2};
    wg.labels = {1, 1, 0};
    wg.edges = {{0, 1}, {2, 1}};
    auto labels = init_labels(table);
    labels.observed[0] = 0;
    RandomStream rng(7);
    apply_neighbor_noise(table, labels, wg, 1.0, rng);
    CHECK(labels.observed == std::vector<int>{0, 1, 1});
}

TEST_CASE("noise rates land within binomial bounds") {
    const int n = 10000;
    std::vector<int> truth(n);
    for (int i = 0; i < n; ++i) truth[i] = i % 5 == 0;  // 2000 alerts
    auto table = make_table(truth);

    RandomStream rng(8);
    auto labels = init_labels(table);
    drop_labels(table, labels, 0.7, rng);
    int kept = std::accumulate(labels.labeled.begin(), labels.labeled.end(), 0);
    CHECK(std::abs(kept - 7000) < 3.0 * std::sqrt(10000 * 0.7 * 0.3));

    auto flips = init_labels(table);
    apply_class_noise(table, flips, 0.1, 0.3, rng);
    int benign_flipped = 0, alert_flipped = 0;
    for (int i = 0; i < n; ++i) {
        if (truth[i] && !flips.observed[i]) ++alert_flipped;
        if (!truth[i] && flips.observed[i]) ++benign_flipped;
    }
    CHECK(std::abs(benign_flipped - 800) < 3.0 * std::sqrt(8000 * 0.1 * 0.9));
    CHECK(std::abs(alert_flipped - 600) < 3.0 * std::sqrt(2000 * 0.3 * 0.7));
}

TEST_CASE("the pipeline is deterministic and leaves the table intact") {
    std::vector<int> truth(200);
    for (int i = 0; i < 200; ++i) truth[i] = i % 7 == 0;
    auto table = make_table(truth);
    WindowedGraph wg;
    for (int i = 0; i < 200; ++i) {
        wg.nodes.push_back(i);
        wg.labels.push_back(static_cast<char>(truth[i]));
        if (i + 1 < 200) wg.edges.emplace_back(i, i + 1);
    }
    PatternInstance inst;
    inst.members = {0, 7, 14};
    SimulationConfig cfg;
    cfg.master_seed = 11;
    cfg.noise = {0.8, 0.05, 0.1, 0.5, 0.3};

    auto a = apply_noise(table, wg, {inst}, cfg);
    auto b = apply_noise(table, wg, {inst}, cfg);
    CHECK(a.observed == b.observed);
    CHECK(a.labeled == b.labeled);
    for (int i = 0; i < 200; ++i) CHECK(table.rows[i].label == truth[i]);  // truth untouched
}
