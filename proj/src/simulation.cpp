#include "amlgen/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace amlgen {

std::pair<double, double> lognormal_params(double median, double mean) {
    if (median <= 0.0 || mean < median)
        throw ConfigError("salary model requires 0 < median <= mean");
    double mu = std::log(median);
    double sigma = std::sqrt(2.0 * (std::log(mean) - mu));
    return {mu, sigma};
}

std::optional<Cents> sample_amount(const AmountModel& model, Cents cap, RandomStream& rng) {
    Cents lo = to_cents(model.min_amount);
    Cents hi = std::min(cap, to_cents(model.max_amount));
    if (hi < lo) return std::nullopt;
    for (int i = 0; i < 100; ++i) {
        Cents x = to_cents(rng.normal(model.mean, model.std_dev));
        if (x >= lo && x <= hi) return x;
    }
    Cents x = to_cents(model.mean);
    return std::clamp(x, lo, hi);
}

World build_world(const SimulationConfig& cfg, RandomStream& rng) {
    World w;
    auto seq = sample_degree_sequences(cfg.n_accounts, cfg.degree_params, rng);
    auto rwire = rng.derive("wire");
    w.graph = realize_blueprint(seq, rwire);

    auto rfit = rng.derive("fit");
    auto fit = fit_normal_patterns(w.graph, cfg.normal_typologies, rfit, 0);
    w.normal_instances = std::move(fit.instances);
    w.census = std::move(fit.census);

    int next_id = w.normal_instances.empty() ? 0 : w.normal_instances.back().id + 1;
    auto rinj = rng.derive("inject");
    w.alert_instances =
        inject_alert_patterns(w.graph, cfg.alert_typologies, cfg.reuse_p, rinj, next_id);
    for (const auto& spec : cfg.alert_typologies)
        w.census.emplace_back(spec.kind, spec.count, spec.count);

    // schedule every instance per its spec's timing scheme
    auto rsched = rng.derive("schedule");
    std::size_t cursor = 0;
    for (std::size_t si = 0; si < cfg.normal_typologies.size(); ++si) {
        int placed = std::get<2>(w.census[si]);
        const auto& spec = cfg.normal_typologies[si];
        for (int i = 0; i < placed; ++i, ++cursor) {
            auto r = rsched.derive("normal", w.normal_instances[cursor].id);
            schedule_pattern(w.normal_instances[cursor], spec.timing, spec.start, spec.end, r);
        }
    }
    cursor = 0;
    for (const auto& spec : cfg.alert_typologies) {
        for (int i = 0; i < spec.count; ++i, ++cursor) {
            auto r = rsched.derive("alert", w.alert_instances[cursor].id);
            schedule_pattern(w.alert_instances[cursor], spec.timing, spec.start, spec.end, r);
        }
    }

    prune_unused(w.graph, w.normal_instances, w.alert_instances);
    return w;
}

std::vector<AccountInfo> assign_demographics(const SimulationConfig& cfg, int n,
                                             const std::vector<int>& ml_count,
                                             RandomStream& rng) {
    std::vector<AccountInfo> accounts(n);
    auto rage = rng.derive("age");
    auto rfi = rng.derive("fi");
    auto rkyc = rng.derive("kyc");

    double share_total = 0.0;
    for (const auto& row : cfg.salary_table) share_total += row.share;

    double fi_total = 0.0;
    for (double wgt : cfg.fi_weights) fi_total += wgt;

    for (int i = 0; i < n; ++i) {
        AccountInfo& a = accounts[i];
        a.id = i;
        a.is_alert = ml_count[i] > 0;
        a.open_step = 0;

        // inverse-CDF over age-group shares, uniform age within the group
        double u = rage.next_double() * share_total;
        const SalaryRow* row = &cfg.salary_table.back();
        for (const auto& r : cfg.salary_table) {
            if (u < r.share) {
                row = &r;
                break;
            }
            u -= r.share;
        }
        a.age = static_cast<int>(rage.uniform_range(row->age_min, row->age_max));
        std::tie(a.mu_loc, a.sigma) = lognormal_params(row->median, row->mean);

        if (cfg.fi_weights.empty()) {
            a.fi = static_cast<int>(rfi.uniform_int(cfg.n_fis));
        } else {
            double f = rfi.next_double() * fi_total;
            a.fi = cfg.n_fis - 1;
            for (int k = 0; k < cfg.n_fis; ++k) {
                if (f < cfg.fi_weights[k]) {
                    a.fi = k;
                    break;
                }
                f -= cfg.fi_weights[k];
            }
        }

        for (const auto& attr : cfg.kyc_attributes) {
            const auto& dist = a.is_alert ? attr.alert_dist : attr.normal_dist;
            double v = rkyc.next_double();
            int cat = static_cast<int>(dist.size()) - 1;
            for (std::size_t c = 0; c < dist.size(); ++c) {
                if (v < dist[c]) {
                    cat = static_cast<int>(c);
                    break;
                }
                v -= dist[c];
            }
            a.kyc.push_back(cat);
        }
    }
    return accounts;
}

namespace {

struct ScheduledEdge {
    int inst = 0;  // index into the merged instance array
    int edge = 0;
};

int clip_gap(double g) { return std::max(1, static_cast<int>(std::llround(g))); }

}  // namespace

SimResult run_simulation(const SimulationConfig& cfg, const World& world, RandomStream& rng) {
    const int n = world.graph.n;
    const int T = cfg.n_steps;
    SimResult res;
    auto rdemo = rng.derive("demographics");
    res.accounts = assign_demographics(cfg, n, world.graph.ml_participation_count, rdemo);
    if (n == 0) return res;

    // merged instance view: normal first, then alert (global id order)
    std::vector<const PatternInstance*> insts;
    insts.reserve(world.normal_instances.size() + world.alert_instances.size());
    for (const auto& p : world.normal_instances) insts.push_back(&p);
    for (const auto& p : world.alert_instances) insts.push_back(&p);

    std::vector<std::vector<ScheduledEdge>> edges_by_step(T);
    std::vector<std::vector<int>> placements_by_step(T);  // merged instance indices
    const int n_normal = static_cast<int>(world.normal_instances.size());

    // per-instance role bookkeeping for laundering flows
    std::vector<std::vector<int>> role_out_deg(insts.size());
    std::vector<std::vector<int>> role_in_deg(insts.size());
    std::vector<std::vector<Cents>> illicit(insts.size());  // received per role

    for (std::size_t ii = 0; ii < insts.size(); ++ii) {
        const auto& inst = *insts[ii];
        for (std::size_t e = 0; e < inst.edges.size(); ++e) {
            int step = inst.edge_steps[e];
            if (step >= 0 && step < T)
                edges_by_step[step].push_back({static_cast<int>(ii), static_cast<int>(e)});
        }
        if (!inst.is_alert) continue;
        int sz = static_cast<int>(inst.members.size());
        role_out_deg[ii].assign(sz, 0);
        role_in_deg[ii].assign(sz, 0);
        illicit[ii].assign(sz, 0);
        for (const auto& [u, v] : inst.edges) {
            for (int r = 0; r < sz; ++r) {
                if (inst.members[r] == u) ++role_out_deg[ii][r];
                if (inst.members[r] == v) ++role_in_deg[ii][r];
            }
        }
        if (!inst.edge_steps.empty()) {
            int t0 = *std::min_element(inst.edge_steps.begin(), inst.edge_steps.end());
            if (t0 >= 0 && t0 < T) placements_by_step[t0].push_back(static_cast<int>(ii));
        }
    }

    // spontaneous traffic: graph edges belonging to no pattern
    std::unordered_set<std::uint64_t> pattern_pairs;
    for (const auto* inst : insts)
        for (const auto& [u, v] : inst->edges)
            pattern_pairs.insert(static_cast<std::uint64_t>(u) * n + v);
    std::vector<std::pair<int, int>> spont_edges;
    for (const auto& [u, v] : world.graph.edges)
        if (!pattern_pairs.count(static_cast<std::uint64_t>(u) * n + v))
            spont_edges.emplace_back(u, v);
    double spont_q = 0.0;
    if (!spont_edges.empty())
        spont_q = std::min(1.0, cfg.spontaneous_tx_per_account_month * n /
                                    (28.0 * static_cast<double>(spont_edges.size())));

    // balances and spending window
    std::vector<Cents> bank(n, 0), cash(n, 0);
    const int Tw = cfg.spend_window;
    std::vector<Cents> ring(static_cast<std::size_t>(n) * Tw, 0);
    std::vector<Cents> ring_sum(n, 0);
    std::vector<int> ring_cnt(n, 0), ring_head(n, 0);

    // lifecycle next-event steps
    auto rlife = rng.derive("lifecycle");
    std::vector<int> next_phone(n), next_bank(n);
    for (int i = 0; i < n; ++i) {
        const auto& ph = res.accounts[i].is_alert ? cfg.lifecycle.alert_phone
                                                  : cfg.lifecycle.normal_phone;
        const auto& bk = res.accounts[i].is_alert ? cfg.lifecycle.alert_bank
                                                  : cfg.lifecycle.normal_bank;
        next_phone[i] = clip_gap(rlife.normal(ph.mean, ph.std_dev));
        next_bank[i] = clip_gap(rlife.normal(bk.mean, bk.std_dev));
    }

    auto rsim = rng.derive("steps");
    std::int64_t tx_id = 0;
    auto fi_of = [&](int node) { return node >= 0 ? res.accounts[node].fi : -1; };
    auto emit = [&](int step, int src, int dst, Cents amount, Channel ch, bool sar,
                    int pattern) {
        res.records.push_back({tx_id++, step, src, dst, amount, ch, sar, pattern, fi_of(src),
                               fi_of(dst)});
    };

    const Cents salary_lo = to_cents(cfg.normal_tx_model.min_amount);
    const Cents salary_hi = to_cents(cfg.normal_tx_model.max_amount);

    for (int t = 0; t < T; ++t) {
        // salaries
        if (t % cfg.payday_period == 0) {
            for (int i = 0; i < n; ++i) {
                double annual = std::exp(rsim.normal(res.accounts[i].mu_loc,
                                                     res.accounts[i].sigma));
                Cents amt = std::clamp(to_cents(annual / 12.0), salary_lo, salary_hi);
                bank[i] += amt;
                emit(t, SOURCE_ID, i, amt, Channel::Transfer, false, -1);
            }
        }

        // illicit placement for alert instances starting this step
        for (int ii : placements_by_step[t]) {
            const auto& inst = *insts[ii];
            int sz = static_cast<int>(inst.members.size());
            double x0u = rsim.normal(sz * cfg.alert_tx_model.mean,
                                     std::sqrt(static_cast<double>(sz)) *
                                         cfg.alert_tx_model.std_dev);
            Cents x0 = std::clamp(to_cents(x0u), to_cents(cfg.alert_tx_model.min_amount),
                                  to_cents(cfg.alert_tx_model.max_amount));
            bool as_cash = rsim.bernoulli(cfg.cash_placement_fraction);
            std::vector<int> initiators;
            for (int r = 0; r < sz; ++r)
                if (role_in_deg[ii][r] == 0) initiators.push_back(r);
            if (initiators.empty()) {
                // cycles have no source role; fund the earliest sender
                int best = 0;
                for (std::size_t e = 0; e < inst.edge_steps.size(); ++e)
                    if (inst.edge_steps[e] < inst.edge_steps[best]) best = static_cast<int>(e);
                int u = inst.edges[best].first;
                for (int r = 0; r < sz; ++r)
                    if (inst.members[r] == u) initiators.push_back(r);
            }
            Cents share = x0 / static_cast<Cents>(initiators.size());
            share = std::max(share, to_cents(cfg.alert_tx_model.min_amount));
            for (int r : initiators) {
                int node = inst.members[r];
                if (as_cash) {
                    cash[node] += share;
                    emit(t, SOURCE_ID, node, share, Channel::Cash, true, inst.id);
                } else {
                    bank[node] += share;
                    emit(t, SOURCE_ID, node, share, Channel::Transfer, true, inst.id);
                }
                illicit[ii][r] += share;
            }
        }

        // scheduled pattern transactions
        for (const auto& se : edges_by_step[t]) {
            const auto& inst = *insts[se.inst];
            auto [u, v] = inst.edges[se.edge];
            if (se.inst < n_normal) {
                auto amt = sample_amount(cfg.normal_tx_model, bank[u], rsim);
                if (!amt) continue;
                bank[u] -= *amt;
                bank[v] += *amt;
                emit(t, u, v, *amt, Channel::Transfer, false, inst.id);
            } else {
                int ru = -1, rv = -1;
                int sz = static_cast<int>(inst.members.size());
                for (int r = 0; r < sz; ++r) {
                    if (inst.members[r] == u) ru = r;
                    if (inst.members[r] == v) rv = r;
                }
                Cents budget = static_cast<Cents>(
                    std::llround((1.0 - cfg.keep_fraction) *
                                 static_cast<double>(illicit[se.inst][ru])));
                Cents want = budget / std::max(1, role_out_deg[se.inst][ru]);
                Cents lo = to_cents(cfg.alert_tx_model.min_amount);
                Cents hi = std::min(bank[u], to_cents(cfg.alert_tx_model.max_amount));
                if (hi < lo) continue;  // layering skipped, bank too low
                Cents amt = std::clamp(want, lo, hi);
                bank[u] -= amt;
                bank[v] += amt;
                illicit[se.inst][rv] += amt;
                emit(t, u, v, amt, Channel::Transfer, true, inst.id);
            }
        }

        // spontaneous normal traffic on pattern-free edges
        if (spont_q > 0.0) {
            for (const auto& [u, v] : spont_edges) {
                if (!rsim.bernoulli(spont_q)) continue;
                auto amt = sample_amount(cfg.normal_tx_model, bank[u], rsim);
                if (!amt) continue;
                bank[u] -= *amt;
                bank[v] += *amt;
                emit(t, u, v, *amt, Channel::Transfer, false, -1);
            }
        }

        // sigmoid spending toward the sink
        if (t >= 1) {
            for (int i = 0; i < n; ++i) {
                if (ring_cnt[i] == 0) continue;
                double mean_bal =
                    to_units(ring_sum[i]) / static_cast<double>(ring_cnt[i]);
                double d = to_units(bank[i]) - mean_bal;
                double p = 1.0 / (1.0 + std::exp(-d / cfg.spend_scale));
                if (!rsim.bernoulli(p)) continue;
                const AmountModel& model = res.accounts[i].is_alert
                                               ? cfg.alert_spend_model
                                               : cfg.normal_spend_model;
                bool from_cash = false;
                if (res.accounts[i].is_alert && cash[i] >= to_cents(model.min_amount))
                    from_cash = !rsim.bernoulli(cfg.p_spend_bank);
                if (from_cash) {
                    auto amt = sample_amount(model, cash[i], rsim);
                    if (!amt) continue;
                    cash[i] -= *amt;
                    emit(t, i, SINK_ID, *amt, Channel::Cash, false, -1);
                } else {
                    auto amt = sample_amount(model, bank[i], rsim);
                    if (!amt) continue;
                    bank[i] -= *amt;
                    emit(t, i, SINK_ID, *amt, Channel::Transfer, false, -1);
                }
            }
        }

        // lifecycle events
        for (int i = 0; i < n; ++i) {
            if (t == next_phone[i]) {
                res.events.push_back({i, t, 0});
                const auto& m = res.accounts[i].is_alert ? cfg.lifecycle.alert_phone
                                                         : cfg.lifecycle.normal_phone;
                next_phone[i] = t + clip_gap(rlife.normal(m.mean, m.std_dev));
            }
            if (t == next_bank[i]) {
                res.events.push_back({i, t, 1});
                const auto& m = res.accounts[i].is_alert ? cfg.lifecycle.alert_bank
                                                         : cfg.lifecycle.normal_bank;
                next_bank[i] = t + clip_gap(rlife.normal(m.mean, m.std_dev));
            }
        }

        // record end-of-step balances for the sliding window
        for (int i = 0; i < n; ++i) {
            std::size_t slot = static_cast<std::size_t>(i) * Tw + ring_head[i];
            if (ring_cnt[i] == Tw)
                ring_sum[i] -= ring[slot];
            else
                ++ring_cnt[i];
            ring[slot] = bank[i];
            ring_sum[i] += bank[i];
            ring_head[i] = (ring_head[i] + 1) % Tw;
        }
    }

    res.final_bank = std::move(bank);
    res.final_cash = std::move(cash);
    return res;
}

SimResult generate(const SimulationConfig& cfg, World* world_out) {
    RandomStream root(cfg.master_seed);
    auto rworld = root.derive("world");
    World w = build_world(cfg, rworld);
    auto rsim = root.derive("simulate");
    SimResult res = run_simulation(cfg, w, rsim);
    if (world_out) *world_out = std::move(w);
    return res;
}

}  // namespace amlgen
