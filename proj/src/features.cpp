#include "amlgen/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace amlgen {

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {
        "sum_spending", "mean_spending", "median_spending", "std_spending", "max_spending",
        "min_spending", "count_spending", "sum", "mean", "median", "std", "max", "min",
        "count_in", "count_out", "count_unique_in", "count_unique_out", "count_days_in_bank",
        "count_phone_changes"};
    return names;
}

WindowedGraph aggregate(const std::vector<TransactionRecord>& log, int w_start, int w_end,
                        int scope_fi) {
    if (w_end <= w_start) throw ConfigError("aggregate: empty window");
    WindowedGraph wg;
    wg.w_start = w_start;
    wg.w_end = w_end;
    wg.scope_fi = scope_fi;

    std::set<int> node_set;
    std::unordered_map<int, char> label_map;
    std::unordered_map<std::uint64_t, int> edge_idx;
    for (const auto& r : log) {
        if (r.step < w_start || r.step >= w_end) continue;
        if (scope_fi >= 0 && r.src_fi != scope_fi && r.dst_fi != scope_fi) continue;
        wg.records.push_back(&r);
        for (int node : {r.src, r.dst}) {
            if (node < 0) continue;
            node_set.insert(node);
            if (r.is_sar) label_map[node] = 1;
        }
        if (r.src >= 0 && r.dst >= 0) {
            auto key = (static_cast<std::uint64_t>(r.src) << 32) |
                       static_cast<std::uint32_t>(r.dst);
            auto [it, fresh] = edge_idx.try_emplace(key, static_cast<int>(wg.edges.size()));
            if (fresh) {
                wg.edges.emplace_back(r.src, r.dst);
                wg.edge_mult.push_back(1);
            } else {
                ++wg.edge_mult[it->second];
            }
        }
    }
    wg.nodes.assign(node_set.begin(), node_set.end());
    wg.labels.resize(wg.nodes.size());
    for (std::size_t i = 0; i < wg.nodes.size(); ++i)
        wg.labels[i] = label_map.count(wg.nodes[i]) ? 1 : 0;
    return wg;
}

namespace {

struct Stats {
    double sum = 0, mean = 0, median = 0, stdev = 0, maxv = 0, minv = 0;
    int count = 0;
};

Stats summarize(std::vector<double>& xs) {
    Stats s;
    s.count = static_cast<int>(xs.size());
    if (xs.empty()) return s;
    std::sort(xs.begin(), xs.end());
    for (double x : xs) s.sum += x;
    s.mean = s.sum / s.count;
    s.median = s.count % 2 ? xs[s.count / 2]
                           : 0.5 * (xs[s.count / 2 - 1] + xs[s.count / 2]);
    double var = 0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.stdev = std::sqrt(var / s.count);
    s.maxv = xs.back();
    s.minv = xs.front();
    return s;
}

}  // namespace

FeatureTable compute_features(const WindowedGraph& wg, const std::vector<AccountInfo>& accounts,
                              const std::vector<LifecycleEvent>& events, int m) {
    const int len = wg.w_end - wg.w_start;
    if (m < 1 || m > len) throw ConfigError("compute_features: bad sub-window count");
    const int base = len / m;

    FeatureTable table;
    for (int k = 0; k < m; ++k)
        for (const auto& name : feature_names())
            table.columns.push_back(name + "_w" + std::to_string(k));

    std::unordered_map<int, int> node_pos;
    for (std::size_t i = 0; i < wg.nodes.size(); ++i) node_pos[wg.nodes[i]] = static_cast<int>(i);

    // per node, per sub-window raw collections (bank-visible records only)
    const std::size_t n = wg.nodes.size();
    std::vector<std::vector<double>> spend(n * m), internal(n * m);
    std::vector<int> count_in(n * m, 0), count_out(n * m, 0);
    std::vector<std::set<int>> uniq_in(n * m), uniq_out(n * m);
    std::vector<int> phone_changes(n * m, 0);

    auto subwin = [&](int step) {
        int k = (step - wg.w_start) / base;
        return std::min(k, m - 1);  // last block absorbs the remainder
    };

    for (const auto* r : wg.records) {
        if (r->channel != Channel::Transfer) continue;
        int k = subwin(r->step);
        double amt = to_units(r->amount);
        if (r->dst == SINK_ID && r->src >= 0) {
            auto it = node_pos.find(r->src);
            if (it != node_pos.end()) spend[it->second * m + k].push_back(amt);
        }
        if (r->src >= 0 && r->dst >= 0) {
            auto is = node_pos.find(r->src);
            auto id = node_pos.find(r->dst);
            if (is != node_pos.end()) {
                std::size_t cell = is->second * m + k;
                internal[cell].push_back(amt);
                ++count_out[cell];
                uniq_out[cell].insert(r->dst);
            }
            if (id != node_pos.end()) {
                std::size_t cell = id->second * m + k;
                internal[cell].push_back(amt);
                ++count_in[cell];
                uniq_in[cell].insert(r->src);
            }
        }
    }
    for (const auto& ev : events) {
        if (ev.kind != 0) continue;
        if (ev.step < wg.w_start || ev.step >= wg.w_end) continue;
        auto it = node_pos.find(ev.account);
        if (it != node_pos.end()) ++phone_changes[it->second * m + subwin(ev.step)];
    }

    table.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        FeatureRow& row = table.rows[i];
        row.account = wg.nodes[i];
        row.fi = accounts[wg.nodes[i]].fi;
        row.label = wg.labels[i];
        row.values.reserve(static_cast<std::size_t>(m) * kFeaturesPerWindow);
        for (int k = 0; k < m; ++k) {
            std::size_t cell = i * m + k;
            int sub_end = (k == m - 1) ? wg.w_end : wg.w_start + (k + 1) * base;
            Stats sp = summarize(spend[cell]);
            Stats in = summarize(internal[cell]);
            double days_in_bank =
                std::max(0, sub_end - accounts[wg.nodes[i]].open_step);
            double vals[kFeaturesPerWindow] = {
                sp.sum, sp.mean, sp.median, sp.stdev, sp.maxv, sp.minv,
                static_cast<double>(sp.count),
                in.sum, in.mean, in.median, in.stdev, in.maxv, in.minv,
                static_cast<double>(count_in[cell]), static_cast<double>(count_out[cell]),
                static_cast<double>(uniq_in[cell].size()),
                static_cast<double>(uniq_out[cell].size()),
                days_in_bank, static_cast<double>(phone_changes[cell])};
            row.values.insert(row.values.end(), vals, vals + kFeaturesPerWindow);
        }
    }
    return table;
}

TrainTest build_train_test(const std::vector<TransactionRecord>& log,
                           const std::vector<AccountInfo>& accounts,
                           const std::vector<LifecycleEvent>& events,
                           const SimulationConfig& cfg, bool per_fi) {
    const auto& w = cfg.windows;
    TrainTest tt;
    tt.train_graph = aggregate(log, w.train_start, w.train_end);
    tt.train = compute_features(tt.train_graph, accounts, events, w.m_subwindows);
    auto test_graph = aggregate(log, w.test_start, w.test_end);
    tt.test = compute_features(test_graph, accounts, events, w.m_subwindows);

    if (per_fi) {
        for (int fi = 0; fi < cfg.n_fis; ++fi) {
            auto tg = aggregate(log, w.train_start, w.train_end, fi);
            tt.train_per_fi.push_back(compute_features(tg, accounts, events, w.m_subwindows));
            auto eg = aggregate(log, w.test_start, w.test_end, fi);
            tt.test_per_fi.push_back(compute_features(eg, accounts, events, w.m_subwindows));
        }
    }

    RandomStream rv = RandomStream(cfg.master_seed).derive("validation");
    for (const auto& row : tt.train.rows)
        if (rv.next_double() < w.validation_fraction) tt.validation_nodes.push_back(row.account);
    return tt;
}

}  // namespace amlgen
