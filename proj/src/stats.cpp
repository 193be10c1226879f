#include "amlgen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "amlgen/zeta.hpp"

namespace amlgen {

StatsReport compute_stats(const std::vector<TransactionRecord>& records) {
    if (records.empty()) throw ConfigError("compute_stats: empty log");
    StatsReport rep;
    rep.n_records = static_cast<std::int64_t>(records.size());

    std::set<int> account_set;
    std::set<int> alert_set;
    std::set<std::pair<int, int>> pairs;
    double sum_normal = 0.0, sum_alert = 0.0;
    std::int64_t n_normal_amt = 0, n_alert_amt = 0;
    double max_amount = 0.0;

    for (const auto& r : records) {
        if (r.src >= 0) account_set.insert(r.src);
        if (r.dst >= 0) account_set.insert(r.dst);
        if (r.is_sar) {
            ++rep.n_sar;
            if (r.src >= 0) alert_set.insert(r.src);
            if (r.dst >= 0) alert_set.insert(r.dst);
        }
        if (r.src >= 0 && r.dst >= 0 && r.channel == Channel::Transfer) {
            ++rep.n_internal;
            pairs.insert({r.src, r.dst});
            double a = to_units(r.amount);
            max_amount = std::max(max_amount, a);
            if (r.is_sar) {
                sum_alert += a;
                ++n_alert_amt;
            } else {
                sum_normal += a;
                ++n_normal_amt;
            }
        }
    }
    rep.n_accounts = static_cast<int>(account_set.size());
    rep.n_alert_accounts = static_cast<int>(alert_set.size());
    rep.benign_share =
        1.0 - static_cast<double>(rep.n_sar) / static_cast<double>(rep.n_records);
    rep.mean_amount_normal = n_normal_amt ? sum_normal / n_normal_amt : 0.0;
    rep.mean_amount_alert = n_alert_amt ? sum_alert / n_alert_amt : 0.0;
    rep.mean_amount_all =
        rep.n_internal ? (sum_normal + sum_alert) / rep.n_internal : 0.0;

    // degrees over distinct counterparty pairs
    std::map<int, int> in_deg, out_deg;
    std::map<int, std::vector<int>> out_nbrs;
    for (const auto& [u, v] : pairs) {
        ++out_deg[u];
        ++in_deg[v];
        out_nbrs[u].push_back(v);
    }
    auto fill_hist = [&](auto get_deg) {
        std::vector<std::int64_t> h;
        for (int node : account_set) {
            int d = get_deg(node);
            if (static_cast<int>(h.size()) <= d) h.resize(d + 1, 0);
            ++h[d];
        }
        return h;
    };
    rep.in_hist = fill_hist([&](int v) { return in_deg.count(v) ? in_deg[v] : 0; });
    rep.out_hist = fill_hist([&](int v) { return out_deg.count(v) ? out_deg[v] : 0; });
    rep.total_hist = fill_hist([&](int v) {
        return (in_deg.count(v) ? in_deg[v] : 0) + (out_deg.count(v) ? out_deg[v] : 0);
    });
    if (rep.n_accounts > 0) {
        rep.mean_in_degree = static_cast<double>(pairs.size()) / rep.n_accounts;
        rep.mean_out_degree = rep.mean_in_degree;
        double acc = 0.0;
        for (std::int64_t c : rep.total_hist) {
            acc += static_cast<double>(c) / rep.n_accounts;
            rep.degree_cdf.push_back(acc);
        }
    }

    // log-log least squares on the total-degree PMF, k >= 1
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int pts = 0;
    double mean_total = 0.0;
    for (std::size_t k = 1; k < rep.total_hist.size(); ++k) {
        mean_total += static_cast<double>(k) * rep.total_hist[k] / rep.n_accounts;
        if (rep.total_hist[k] == 0) continue;
        double x = std::log(static_cast<double>(k));
        double y = std::log(static_cast<double>(rep.total_hist[k]) / rep.n_accounts);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++pts;
    }
    if (pts >= 2 && sxx * pts - sx * sx != 0.0) {
        double slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
        rep.fitted_gamma = -slope - 1.0;  // tail exponent of the Pareto PMF
        if (rep.fitted_gamma > 1.0 && mean_total > 1.0)
            rep.fitted_scale = (mean_total - 1.0) / (riemann_zeta(rep.fitted_gamma) - 1.0);
    }

    // out-neighbor label homophily; neighbor-free nodes count as agreeing
    double h_sum[2] = {0.0, 0.0};
    int h_cnt[2] = {0, 0};
    for (int node : account_set) {
        int cls = alert_set.count(node) ? 1 : 0;
        auto it = out_nbrs.find(node);
        double frac = 1.0;
        if (it != out_nbrs.end() && !it->second.empty()) {
            int same = 0;
            for (int nb : it->second)
                if ((alert_set.count(nb) ? 1 : 0) == cls) ++same;
            frac = static_cast<double>(same) / it->second.size();
        }
        h_sum[cls] += frac;
        ++h_cnt[cls];
    }
    rep.homophily_normal = h_cnt[0] ? h_sum[0] / h_cnt[0] : 0.0;
    rep.homophily_ml = h_cnt[1] ? h_sum[1] / h_cnt[1] : 0.0;

    // fixed 100-bin amount histograms per class
    const int bins = 100;
    rep.amount_bin_width = max_amount > 0.0 ? max_amount / bins : 1.0;
    rep.amount_hist_normal.assign(bins, 0);
    rep.amount_hist_alert.assign(bins, 0);
    for (const auto& r : records) {
        if (r.src < 0 || r.dst < 0 || r.channel != Channel::Transfer) continue;
        int b = std::min(bins - 1,
                         static_cast<int>(to_units(r.amount) / rep.amount_bin_width));
        (r.is_sar ? rep.amount_hist_alert : rep.amount_hist_normal)[b] += 1;
    }
    return rep;
}

std::string to_dot(const std::vector<TransactionRecord>& records, int max_nodes) {
    std::set<int> all;
    for (const auto& r : records) {
        if (r.src >= 0) all.insert(r.src);
        if (r.dst >= 0) all.insert(r.dst);
    }
    std::set<int> keep;
    for (int node : all) {
        if (static_cast<int>(keep.size()) >= max_nodes) break;
        keep.insert(node);
    }
    std::set<std::tuple<int, int, bool>> edges;
    std::set<int> sar_nodes;
    for (const auto& r : records) {
        if (r.src < 0 || r.dst < 0) continue;
        if (!keep.count(r.src) || !keep.count(r.dst)) continue;
        edges.insert({r.src, r.dst, r.is_sar});
        if (r.is_sar) {
            sar_nodes.insert(r.src);
            sar_nodes.insert(r.dst);
        }
    }
    std::ostringstream out;
    out << "digraph transactions {\n";
    for (int node : keep)
        out << "  n" << node << (sar_nodes.count(node) ? " [color=red]" : "") << ";\n";
    for (const auto& [u, v, sar] : edges)
        out << "  n" << u << " -> n" << v << (sar ? " [color=red]" : "") << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace amlgen
