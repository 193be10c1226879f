#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "amlgen/simulation.hpp"
#include "doctest.h"

using namespace amlgen;

namespace {

SimulationConfig base_config(int n, int steps) {
    SimulationConfig cfg;
    cfg.n_accounts = n;
    cfg.n_steps = steps;
    cfg.master_seed = 1;
    cfg.salary_table.push_back({20, 64, 1.0, 300000.0, 320000.0});
    return cfg;
}

World empty_world(int n) {
    World w;
    w.graph.n = n;
    w.graph.ml_participation_count.assign(n, 0);
    return w;
}

}  // namespace

TEST_CASE("lognormal parameters from a median/mean pair") {
    auto [mu, sigma] = lognormal_params(390.84, 413.63);
    CHECK(mu == doctest::Approx(5.9687).epsilon(1e-4));
    CHECK(sigma == doctest::Approx(0.3367).epsilon(1e-3));

    auto [mu2, sigma2] = lognormal_params(100.0, 100.0);
    CHECK(mu2 == doctest::Approx(std::log(100.0)));
    CHECK(sigma2 == 0.0);

    CHECK_THROWS_AS(lognormal_params(100.0, 90.0), ConfigError);
    CHECK_THROWS_AS(lognormal_params(0.0, 90.0), ConfigError);
}

TEST_CASE("amount sampling respects cap and bounds") {
    AmountModel m{100.0, 50.0, 10.0, 500.0};
    RandomStream rng(2);
    CHECK(!sample_amount(m, to_cents(5.0), rng).has_value());
    for (int i = 0; i < 2000; ++i) {
        auto a = sample_amount(m, to_cents(80.0), rng);
        REQUIRE(a.has_value());
        CHECK(*a >= to_cents(10.0));
        CHECK(*a <= to_cents(80.0));
    }
}

TEST_CASE("symmetric truncation keeps the gaussian mean") {
    // truncating N(100,100) to [50,150] is symmetric, so the mean stays 100
    AmountModel m{100.0, 100.0, 50.0, 150.0};
    RandomStream rng(3);
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += to_units(*sample_amount(m, to_cents(1e9), rng));
    CHECK(sum / n == doctest::Approx(100.0).epsilon(0.005));
}

TEST_CASE("degenerate amount model collapses to its mean") {
    AmountModel m{250.0, 0.0, 1.0, 1000.0};
    RandomStream rng(4);
    for (int i = 0; i < 10; ++i) CHECK(*sample_amount(m, to_cents(1e6), rng) == to_cents(250.0));
}

TEST_CASE("empty world produces nothing") {
    auto cfg = base_config(0, 10);
    auto w = empty_world(0);
    RandomStream rng(5);
    auto res = run_simulation(cfg, w, rng);
    CHECK(res.records.empty());
    CHECK(res.accounts.empty());
    CHECK(res.events.empty());
}

TEST_CASE("salaries arrive every payday and match the table") {
    auto cfg = base_config(2000, 56);
    auto w = empty_world(2000);
    RandomStream rng(6);
    auto res = run_simulation(cfg, w, rng);

    std::map<int, int> per_account;
    std::vector<double> first_month;
    for (const auto& r : res.records) {
        // only salary inflows and sink spending can happen in this world
        if (r.src != SOURCE_ID) {
            CHECK(r.dst == SINK_ID);
            continue;
        }
        CHECK(r.channel == Channel::Transfer);
        CHECK(!r.is_sar);
        CHECK(r.pattern_id == -1);
        CHECK((r.step == 0 || r.step == 28));
        ++per_account[r.dst];
        if (r.step == 0) first_month.push_back(to_units(r.amount));
    }
    CHECK(per_account.size() == 2000);
    for (auto [acct, cnt] : per_account) CHECK(cnt == 2);

    // monthly median should track annual-median/12 = 25000 units
    std::sort(first_month.begin(), first_month.end());
    double med = first_month[first_month.size() / 2];
    CHECK(std::abs(med - 25000.0) / 25000.0 < 0.03);
}

TEST_CASE("lifecycle events tick at the configured cadence") {
    auto cfg = base_config(3, 35);
    cfg.lifecycle.normal_phone = {10.0, 0.0};
    cfg.lifecycle.normal_bank = {10.0, 0.0};
    auto w = empty_world(3);
    RandomStream rng(7);
    auto res = run_simulation(cfg, w, rng);

    std::map<std::pair<int, int>, std::vector<int>> steps;  // (account, kind) -> steps
    for (const auto& e : res.events) steps[{e.account, e.kind}].push_back(e.step);
    for (int i = 0; i < 3; ++i)
        for (int kind : {0, 1}) CHECK(steps[{i, kind}] == std::vector<int>{10, 20, 30});
}

TEST_CASE("fan-out laundering forwards one minus the keep share, split evenly") {
    const int K = 200;
    auto cfg = base_config(10 * K, 1);
    cfg.cash_placement_fraction = 0.0;
    cfg.keep_fraction = 0.1;
    auto w = empty_world(10 * K);
    for (int i = 0; i < K; ++i) {
        PatternInstance inst;
        inst.id = i;
        inst.kind = PatternKind::FanOut;
        inst.is_alert = true;
        int hub = 10 * i;
        for (int r = 0; r < 10; ++r) inst.members.push_back(10 * i + r);
        for (int r = 1; r < 10; ++r) {
            inst.edges.emplace_back(hub, hub + r);
            inst.edge_layer.push_back(0);
            inst.edge_steps.push_back(0);
            w.graph.add_edge(hub, hub + r);
        }
        for (int m : inst.members) w.graph.ml_participation_count[m] = 1;
        w.alert_instances.push_back(std::move(inst));
    }
    RandomStream rng(8);
    auto res = run_simulation(cfg, w, rng);

    std::map<int, Cents> placement;            // pattern id -> x0
    std::map<int, std::vector<Cents>> layers;  // pattern id -> forwarded amounts
    for (const auto& r : res.records) {
        if (!r.is_sar) continue;
        CHECK(r.channel == Channel::Transfer);
        if (r.src == SOURCE_ID)
            placement[r.pattern_id] = r.amount;
        else
            layers[r.pattern_id].push_back(r.amount);
    }
    REQUIRE(placement.size() == K);
    double layer_sum = 0.0;
    int layer_n = 0;
    for (int i = 0; i < K; ++i) {
        REQUIRE(layers[i].size() == 9);
        Cents want = static_cast<Cents>(std::llround(0.9 * static_cast<double>(placement[i]))) / 9;
        for (Cents a : layers[i]) {
            CHECK(a == want);
            layer_sum += to_units(a);
            ++layer_n;
        }
    }
    // each forwarded amount is x0/10 with x0 ~ N(10*799, sqrt(10)*163):
    // expectation 799, per-instance std 163/sqrt(10), instances independent
    double mean = layer_sum / layer_n;
    double se = 163.0 / std::sqrt(10.0) / std::sqrt(static_cast<double>(K));
    CHECK(std::abs(mean - 799.0) < 3.0 * se + 0.01);
    // far outside the benign transaction mean of 637
    CHECK(std::abs(mean - 637.0) > 10.0 * se);
}

TEST_CASE("end-to-end run conserves money and orders its ledger") {
    const char* json = R"({
        "n_accounts": 300, "n_steps": 56, "master_seed": 5,
        "degree": {"loc": 1, "scale": 1.0, "gamma": 2.0},
        "normal_typologies": [
            {"kind": "direct", "count": 30},
            {"kind": "fan_out", "count": 20, "min_size": 3, "max_size": 5},
            {"kind": "periodic", "count": 10}
        ],
        "alert_typologies": [
            {"kind": "cycle", "count": 4, "min_size": 3, "max_size": 4},
            {"kind": "fan_in", "count": 4, "min_size": 4, "max_size": 6}
        ],
        "windows": {"train_start": 0, "train_end": 28,
                     "test_start": 28, "test_end": 56}
    })";
    auto cfg = load_config(json);
    World world;
    auto res = generate(cfg, &world);
    const int n = world.graph.n;
    REQUIRE(n > 0);
    REQUIRE(static_cast<int>(res.accounts.size()) == n);

    std::set<int> alert_members;
    for (const auto& inst : world.alert_instances)
        for (int m : inst.members) alert_members.insert(m);
    CHECK(world.alert_instances.size() == 8);

    std::vector<Cents> bank(n, 0), cash(n, 0);
    std::int64_t prev_id = -1;
    int prev_step = 0;
    int first_alert_id = world.alert_instances.front().id;
    for (const auto& r : res.records) {
        CHECK(r.tx_id == prev_id + 1);
        CHECK(r.step >= prev_step);
        prev_id = r.tx_id;
        prev_step = r.step;
        CHECK(r.amount > 0);

        CHECK(r.is_sar == (r.pattern_id >= 0 && r.pattern_id >= first_alert_id));
        if (r.is_sar) {
            if (r.src >= 0) CHECK(alert_members.count(r.src) == 1);
            if (r.dst >= 0) CHECK(alert_members.count(r.dst) == 1);
        }
        if (r.dst == SINK_ID) CHECK(!r.is_sar);
        if (r.src >= 0) CHECK(r.src_fi == res.accounts[r.src].fi);
        if (r.dst >= 0) CHECK(r.dst_fi == res.accounts[r.dst].fi);

        auto& src_bal = r.channel == Channel::Cash ? cash : bank;
        auto& dst_bal = r.channel == Channel::Cash ? cash : bank;
        if (r.src >= 0) {
            src_bal[r.src] -= r.amount;
            CHECK(src_bal[r.src] >= 0);  // never overdrawn
        }
        if (r.dst >= 0) dst_bal[r.dst] += r.amount;
    }
    for (int i = 0; i < n; ++i) {
        CHECK(bank[i] == res.final_bank[i]);
        CHECK(cash[i] == res.final_cash[i]);
        CHECK(res.accounts[i].is_alert == (alert_members.count(i) == 1));
    }
}
