#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "amlgen/patterns.hpp"
#include "doctest.h"

using namespace amlgen;

namespace {

BlueprintGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    BlueprintGraph g;
    g.n = n;
    g.ml_participation_count.assign(n, 0);
    for (auto [u, v] : edges) REQUIRE(g.add_edge(u, v));
    return g;
}

PatternInstance instantiate(PatternKind kind, int size, int layers = 3) {
    auto tpl = build_template(kind, size, layers);
    PatternInstance inst;
    inst.kind = kind;
    inst.members.resize(tpl.size);
    for (int i = 0; i < tpl.size; ++i) inst.members[i] = i;
    for (auto [a, b] : tpl.edges) inst.edges.emplace_back(a, b);
    inst.edge_layer = tpl.edge_layer;
    inst.n_layers = tpl.n_layers;
    return inst;
}

}  // namespace

TEST_CASE("templates have the documented shapes") {
    auto cyc = build_template(PatternKind::Cycle, 5);
    CHECK(cyc.edges.size() == 5);
    CHECK(cyc.n_layers == 5);

    auto per = build_template(PatternKind::Periodic, 2);
    REQUIRE(per.edges.size() == 3);
    for (auto e : per.edges) CHECK(e == std::pair<int, int>{0, 1});
    CHECK(per.n_layers == 3);

    auto sg = build_template(PatternKind::ScatterGather, 5);
    CHECK(sg.edges.size() == 6);  // 3 middles, scatter + gather legs
    CHECK(sg.n_layers == 2);
    for (std::size_t e = 0; e < sg.edges.size(); ++e) {
        if (sg.edge_layer[e] == 0) CHECK(sg.edges[e].first == 0);
        else CHECK(sg.edges[e].second == 4);
    }

    auto gs = build_template(PatternKind::GatherScatter, 5);
    CHECK(gs.n_layers == 2);
    for (std::size_t e = 0; e < gs.edges.size(); ++e) {
        if (gs.edge_layer[e] == 0) CHECK(gs.edges[e].second == 0);
        else CHECK(gs.edges[e].first == 0);
    }

    auto sb = build_template(PatternKind::StackedBipartite, 7, 3);
    CHECK(sb.n_layers == 2);
    // every role appears on some edge
    std::set<int> touched;
    for (auto [a, b] : sb.edges) {
        touched.insert(a);
        touched.insert(b);
    }
    CHECK(touched.size() == 7);
}

TEST_CASE("simultaneous timing is rejected for ordered kinds") {
    auto inst = instantiate(PatternKind::Cycle, 3);
    RandomStream rng(1);
    CHECK_THROWS_AS(schedule_pattern(inst, TimingScheme::Simultaneous, 0, 20, rng), ConfigError);
}

TEST_CASE("simultaneous fan-out lands every edge on the window start") {
    auto inst = instantiate(PatternKind::FanOut, 4);
    RandomStream rng(2);
    schedule_pattern(inst, TimingScheme::Simultaneous, 10, 20, rng);
    REQUIRE(inst.edge_steps.size() == 3);
    for (int s : inst.edge_steps) CHECK(s == 10);
}

TEST_CASE("window shorter than the rank count is an error") {
    auto inst = instantiate(PatternKind::Cycle, 5);
    RandomStream rng(3);
    CHECK_THROWS_AS(schedule_pattern(inst, TimingScheme::FixedInterval, 0, 3, rng), ConfigError);
    CHECK_THROWS_AS(schedule_pattern(inst, TimingScheme::RandomInterval, 0, 3, rng), ConfigError);
}

TEST_CASE("fixed interval spaces the ranks evenly") {
    auto inst = instantiate(PatternKind::Cycle, 3);
    RandomStream rng(4);
    schedule_pattern(inst, TimingScheme::FixedInterval, 0, 20, rng);
    CHECK(inst.edge_steps == std::vector<int>{0, 10, 20});
}

TEST_CASE("chains are strictly increasing under every feasible scheme") {
    for (auto scheme : {TimingScheme::FixedInterval, TimingScheme::RandomInterval,
                        TimingScheme::Unordered}) {
        for (int rep = 0; rep < 200; ++rep) {
            auto inst = instantiate(PatternKind::Cycle, 4);
            RandomStream rng(100 + rep);
            schedule_pattern(inst, scheme, 5, 30, rng);
            for (std::size_t e = 1; e < inst.edge_steps.size(); ++e)
                CHECK(inst.edge_steps[e] > inst.edge_steps[e - 1]);
            for (int s : inst.edge_steps) {
                CHECK(s >= 5);
                CHECK(s <= 30);
            }
        }
    }
}

TEST_CASE("layer barriers hold for scatter-gather under random timing") {
    for (int rep = 0; rep < 1000; ++rep) {
        auto inst = instantiate(PatternKind::ScatterGather, 5);
        RandomStream rng(1000 + rep);
        schedule_pattern(inst, TimingScheme::RandomInterval, 0, 20, rng);
        int max_l0 = -1, min_l1 = 1 << 30;
        for (std::size_t e = 0; e < inst.edge_steps.size(); ++e) {
            if (inst.edge_layer[e] == 0) max_l0 = std::max(max_l0, inst.edge_steps[e]);
            else min_l1 = std::min(min_l1, inst.edge_steps[e]);
        }
        CHECK(max_l0 < min_l1);
    }
}

TEST_CASE("mutual cannot fit on a lone directed edge") {
    auto g = make_graph(2, {{0, 1}});
    TypologySpec spec;
    spec.kind = PatternKind::Mutual;
    spec.count = 1;
    RandomStream rng(5);
    auto res = fit_normal_patterns(g, {spec}, rng, 0);
    CHECK(res.instances.empty());
    CHECK(std::get<2>(res.census[0]) == 0);
}

TEST_CASE("fan-out of size 4 fits exactly on a 3-edge star") {
    auto g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    TypologySpec spec;
    spec.kind = PatternKind::FanOut;
    spec.count = 1;
    spec.min_size = 4;
    spec.max_size = 4;
    RandomStream rng(6);
    auto res = fit_normal_patterns(g, {spec}, rng, 0);
    REQUIRE(res.instances.size() == 1);
    CHECK(res.instances[0].members[0] == 0);
    CHECK(res.instances[0].edges.size() == 3);
}

TEST_CASE("normal patterns consume blueprint edges at most once") {
    RandomStream rng(7);
    DegreeParams p{1, 1.0, 2.0};
    auto seq = sample_degree_sequences(2000, p, rng);
    auto rwire = rng.derive("wire");
    auto g = realize_blueprint(seq, rwire);

    std::vector<TypologySpec> specs;
    for (auto kind : {PatternKind::Direct, PatternKind::Mutual, PatternKind::Periodic,
                      PatternKind::Forward, PatternKind::FanIn, PatternKind::FanOut}) {
        TypologySpec s;
        s.kind = kind;
        s.count = 500;
        s.min_size = pattern_fixed_size(kind) ? pattern_min_size(kind, 3) : 3;
        s.max_size = pattern_fixed_size(kind) ? s.min_size : 6;
        specs.push_back(s);
    }
    auto rfit = rng.derive("fit");
    auto res = fit_normal_patterns(g, specs, rfit, 0);
    CHECK(!res.instances.empty());

    std::set<std::pair<int, int>> used;
    for (const auto& inst : res.instances) {
        std::set<std::pair<int, int>> distinct(inst.edges.begin(), inst.edges.end());
        for (auto e : distinct) {
            CHECK(g.has_edge(e.first, e.second));
            CHECK(used.insert(e).second);  // edge-disjoint across instances
        }
    }
}

TEST_CASE("vanishing reuse probability gives all-fresh members") {
    RandomStream rng(8);
    ReuseSelector sel(5000, 1e-9, rng);
    for (int i = 0; i < 400; ++i) sel.select(5);
    for (int c : sel.participation()) CHECK(c <= 1);
    CHECK(sel.used_nodes() == 2000);
}

TEST_CASE("participation counts converge to the logarithmic distribution") {
    // Log(p) pmf at p=0.5: 0.7213 at 1, 0.1803 at 2
    double log_pmf_1 = -1.0 / std::log(0.5) * 0.5;
    double log_pmf_2 = -1.0 / std::log(0.5) * 0.25 / 2.0;
    CHECK(log_pmf_1 == doctest::Approx(0.7213).epsilon(1e-3));
    CHECK(log_pmf_2 == doctest::Approx(0.1803).epsilon(1e-3));

    for (double p : {0.1, 0.3, 0.5}) {
        RandomStream rng(9);
        const int n_nodes = 200000;
        ReuseSelector sel(n_nodes, p, rng);
        int memberships = 0;
        while (memberships < 10000) {
            sel.select(5);
            memberships += 5;
        }
        std::map<int, int> hist;
        int participants = 0;
        for (int c : sel.participation())
            if (c > 0) {
                ++hist[c];
                ++participants;
            }
        double emp = 0.0, model = 0.0, ks = 0.0;
        int max_k = hist.rbegin()->first;
        for (int k = 1; k <= max_k; ++k) {
            emp += hist.count(k) ? static_cast<double>(hist[k]) / participants : 0.0;
            model += -1.0 / std::log(1.0 - p) * std::pow(p, k) / k;
            ks = std::max(ks, std::abs(emp - model));
        }
        CHECK(ks < 0.02);
    }
}

TEST_CASE("alert injection always places and adds the missing edges") {
    auto g = make_graph(10, {});
    TypologySpec spec;
    spec.kind = PatternKind::Cycle;
    spec.count = 2;
    spec.min_size = 3;
    spec.max_size = 3;
    RandomStream rng(10);
    auto insts = inject_alert_patterns(g, {spec}, 0.218, rng, 100);
    REQUIRE(insts.size() == 2);
    for (const auto& inst : insts) {
        CHECK(inst.id >= 100);
        CHECK(inst.edges.size() == 3);
        std::set<int> members(inst.members.begin(), inst.members.end());
        CHECK(members.size() == 3);  // distinct within one instance
        for (auto [u, v] : inst.edges) CHECK(g.has_edge(u, v));
        for (int m : inst.members) CHECK(g.ml_participation_count[m] > 0);
    }
}

TEST_CASE("injection reuses pre-existing edges without duplicating them") {
    auto g = make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
    std::size_t before = g.edges.size();
    TypologySpec spec;
    spec.kind = PatternKind::Cycle;
    spec.count = 30;
    spec.min_size = 3;
    spec.max_size = 3;
    RandomStream rng(11);
    auto insts = inject_alert_patterns(g, {spec}, 0.218, rng, 0);
    CHECK(insts.size() == 30);
    // only the two cycle orientations over 3 nodes can ever exist
    CHECK(g.edges.size() <= before + 3);
}

TEST_CASE("pruning removes exactly the pattern-free nodes") {
    // a->b consumed by a direct pattern, e has edges but no pattern
    auto g = make_graph(6, {{0, 1}, {4, 5}, {2, 4}});
    std::vector<PatternInstance> normal(1), alert(1);
    normal[0].id = 0;
    normal[0].kind = PatternKind::Direct;
    normal[0].members = {0, 1};
    normal[0].edges = {{0, 1}};
    alert[0].id = 1;
    alert[0].kind = PatternKind::Cycle;
    alert[0].is_alert = true;
    alert[0].members = {2, 3, 5};
    alert[0].edges = {{2, 3}, {3, 5}, {5, 2}};
    for (int m : alert[0].members) g.ml_participation_count[m] = 1;
    for (auto [u, v] : alert[0].edges) g.add_edge(u, v);

    auto remap = prune_unused(g, normal, alert);
    CHECK(remap[4] == -1);  // node 4 sits in no pattern
    for (int keep : {0, 1, 2, 3, 5}) CHECK(remap[keep] >= 0);
    CHECK(g.n == 5);
    for (const auto& inst : alert)
        for (auto [u, v] : inst.edges) CHECK(g.has_edge(u, v));
    // edges touching the removed node are gone
    for (auto [u, v] : g.edges) {
        CHECK(u < 5);
        CHECK(v < 5);
    }
}
