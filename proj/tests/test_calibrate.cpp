#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "amlgen/calibrate.hpp"
#include "amlgen/simulation.hpp"
#include "doctest.h"

using namespace amlgen;

namespace {

const char* kSmallJson = R"({
    "n_accounts": 150, "n_steps": 16, "master_seed": 9,
    "degree": {"loc": 1, "scale": 1.0, "gamma": 2.0},
    "normal_typologies": [
        {"kind": "direct", "count": 40},
        {"kind": "fan_out", "count": 20, "min_size": 3, "max_size": 5}
    ],
    "alert_typologies": [
        {"kind": "cycle", "count": 3, "min_size": 3, "max_size": 3},
        {"kind": "fan_in", "count": 3, "min_size": 3, "max_size": 4}
    ],
    "windows": {"train_start": 0, "train_end": 8, "test_start": 8, "test_end": 16, "m": 2}
})";

TrialRecord rec(std::vector<double> obj) {
    TrialRecord t;
    t.objectives = std::move(obj);
    return t;
}

ReferenceStats stats_of(const SimResult& res) {
    ReferenceStats ref;
    std::set<std::pair<int, int>> pairs;
    double sum = 0.0;
    std::int64_t cnt = 0;
    for (const auto& r : res.records) {
        if (r.src < 0 || r.dst < 0 || r.channel != Channel::Transfer) continue;
        pairs.insert({r.src, r.dst});
        sum += to_units(r.amount);
        ++cnt;
    }
    int n = static_cast<int>(res.accounts.size());
    std::vector<int> deg(n, 0);
    for (auto [u, v] : pairs) {
        ++deg[u];
        ++deg[v];
    }
    int maxd = *std::max_element(deg.begin(), deg.end());
    std::vector<double> cdf(maxd + 1, 0.0);
    for (int d : deg) cdf[d] += 1.0 / n;
    for (int k = 1; k <= maxd; ++k) cdf[k] += cdf[k - 1];
    ref.degree_cdf = cdf;
    ref.mean_in_degree = static_cast<double>(pairs.size()) / n;
    ref.mean_out_degree = ref.mean_in_degree;
    ref.mean_amount = cnt ? sum / cnt : 0.0;
    return ref;
}

}  // namespace

TEST_CASE("pareto dominance on worked examples") {
    CHECK(dominates({1.0, 2.0}, {2.0, 2.0}));
    CHECK(dominates({1.0, 2.0}, {1.0, 3.0}));
    CHECK(!dominates({1.0, 2.0}, {1.0, 2.0}));  // no strict improvement
    CHECK(!dominates({1.0, 3.0}, {3.0, 1.0}));
    CHECK(!dominates({3.0, 1.0}, {1.0, 3.0}));
    CHECK(dominates({0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}));
}

TEST_CASE("the archive equals the brute-force nondominated set") {
    for (int rep = 0; rep < 100; ++rep) {
        RandomStream rng(200 + rep);
        std::vector<std::vector<double>> clouds;
        for (int i = 0; i < 200; ++i)
            clouds.push_back({rng.next_double(), rng.next_double(), rng.next_double()});
        std::vector<TrialRecord> archive;
        for (const auto& obj : clouds) archive_insert(archive, rec(obj));

        std::set<std::vector<double>> expected;
        for (const auto& a : clouds) {
            bool dominated = false;
            for (const auto& b : clouds) dominated |= dominates(b, a);
            if (!dominated) expected.insert(a);
        }
        std::set<std::vector<double>> got;
        for (const auto& t : archive) got.insert(t.objectives);
        CHECK(got == expected);
    }
}

TEST_CASE("patching reaches every default search dimension") {
    auto cfg = load_config(kSmallJson);
    auto space = default_search_space();
    CHECK(space.dims.size() == 9);
    for (std::size_t d = 0; d < space.dims.size(); ++d)
        patch_config(cfg, space.dims[d].path, 111.0 + d);
    CHECK(cfg.alert_tx_model.mean == 111.0);
    CHECK(cfg.alert_tx_model.std_dev == 112.0);
    CHECK(cfg.alert_spend_model.mean == 113.0);
    CHECK(cfg.alert_spend_model.std_dev == 114.0);
    CHECK(cfg.lifecycle.alert_phone.mean == 115.0);
    CHECK(cfg.lifecycle.alert_phone.std_dev == 116.0);
    CHECK(cfg.lifecycle.alert_bank.mean == 117.0);
    CHECK(cfg.lifecycle.alert_bank.std_dev == 118.0);
    CHECK(cfg.reuse_p == 119.0);
    CHECK_THROWS_AS(patch_config(cfg, "no.such.knob", 1.0), ConfigError);
}

TEST_CASE("scaling shrinks accounts and typology counts with floors") {
    auto cfg = load_config(kSmallJson);
    cfg.n_accounts = 5000;
    auto half = scale_config(cfg, 0.5);
    CHECK(half.n_accounts == 2500);
    CHECK(half.normal_typologies[0].count == 20);
    CHECK(half.alert_typologies[0].count == 2);  // round(3 * 0.5)

    auto tiny = scale_config(cfg, 0.001);
    CHECK(tiny.n_accounts == 100);  // floor
    for (const auto& t : tiny.alert_typologies) CHECK(t.count >= 1);
}

TEST_CASE("reference stats loading validates its input") {
    CHECK_THROWS_AS(load_reference_stats("/nonexistent/ref.json"), ConfigError);

    const char* path = "test_ref_stats.json";
    {
        std::ofstream out(path);
        out << R"({"degree_cdf": [0.1, 1.0], "mean_in_degree": 1.5,)"
            << R"( "mean_out_degree": 1.5, "mean_amount": 640.0})";
    }
    auto ref = load_reference_stats(path);
    CHECK(ref.degree_cdf == std::vector<double>{0.1, 1.0});
    CHECK(ref.mean_amount == 640.0);
    {
        std::ofstream out(path);
        out << R"({"degree_cdf": [1.0], "mean_in_degree": 1.0, "mean_out_degree": 1.0})";
    }
    CHECK_THROWS_AS(load_reference_stats(path), ConfigError);
    {
        std::ofstream out(path);
        out << "not json";
    }
    CHECK_THROWS_AS(load_reference_stats(path), ConfigError);
    std::remove(path);
}

TEST_CASE("a run scored against its own statistics is a perfect match") {
    auto cfg = load_config(kSmallJson);
    auto res = generate(cfg);
    auto ref = stats_of(res);
    auto obj = evaluate_objective(cfg, CalibrationMode::DataInformed, 0.0, &ref);
    REQUIRE(obj.size() == 4);
    for (double v : obj) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("budget one runs a single full-fidelity trial") {
    auto cfg = load_config(kSmallJson);
    auto space = default_search_space();
    auto result = optimize(cfg, space, CalibrationMode::KnowledgeFree, 1, 0.95, nullptr);
    REQUIRE(result.trials.size() == 1);
    CHECK(result.trials[0].fidelity == 1.0);
    CHECK(result.trials[0].params.size() == space.dims.size());
    if (!result.all_degenerate) {
        CHECK(result.archive.size() == 1);
        CHECK(result.best_params == result.trials[0].params);
    }
    CHECK_THROWS_AS(optimize(cfg, space, CalibrationMode::KnowledgeFree, 0, 0.95, nullptr),
                    ConfigError);
}

TEST_CASE("a smaller budget is a prefix of a larger one") {
    auto cfg = load_config(kSmallJson);
    auto res = generate(cfg);
    auto ref = stats_of(res);  // data-informed mode avoids tree fitting cost
    auto space = default_search_space();
    auto small = optimize(cfg, space, CalibrationMode::DataInformed, 6, 0.0, &ref);
    auto large = optimize(cfg, space, CalibrationMode::DataInformed, 12, 0.0, &ref);

    auto params_of = [](const CalibrationResult& r, int id, double fidelity) {
        for (const auto& t : r.trials)
            if (t.id == id && t.fidelity == fidelity) return t.params;
        return std::vector<double>{};
    };
    for (int id = 0; id < 6; ++id) {
        auto a = params_of(small, id, 0.1);
        auto b = params_of(large, id, 0.1);
        REQUIRE(!a.empty());
        CHECK(a == b);
        // same trial id keeps its seed across budgets and fidelities
    }
    for (const auto& t : small.trials)
        for (const auto& u : large.trials)
            if (t.id == u.id) CHECK(t.seed == u.seed);
}
