#include "amlgen/calibrate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "amlgen/features.hpp"
#include "amlgen/simulation.hpp"
#include "amlgen/tree.hpp"
#include "json.hpp"

namespace amlgen {

SearchSpace default_search_space() {
    return {{
        {"amounts.alert.mean", 100.0, 2000.0},
        {"amounts.alert.std", 10.0, 500.0},
        {"amounts.alert_spend.mean", 50.0, 1000.0},
        {"amounts.alert_spend.std", 10.0, 300.0},
        {"lifecycle.alert_phone.mean", 200.0, 2000.0},
        {"lifecycle.alert_phone.std", 50.0, 500.0},
        {"lifecycle.alert_bank.mean", 200.0, 2000.0},
        {"lifecycle.alert_bank.std", 50.0, 500.0},
        {"reuse_p", 0.05, 0.5},
    }};
}

void patch_config(SimulationConfig& cfg, const std::string& path, double value) {
    if (path == "amounts.alert.mean") cfg.alert_tx_model.mean = value;
    else if (path == "amounts.alert.std") cfg.alert_tx_model.std_dev = value;
    else if (path == "amounts.alert_spend.mean") cfg.alert_spend_model.mean = value;
    else if (path == "amounts.alert_spend.std") cfg.alert_spend_model.std_dev = value;
    else if (path == "amounts.normal.mean") cfg.normal_tx_model.mean = value;
    else if (path == "amounts.normal.std") cfg.normal_tx_model.std_dev = value;
    else if (path == "lifecycle.alert_phone.mean") cfg.lifecycle.alert_phone.mean = value;
    else if (path == "lifecycle.alert_phone.std") cfg.lifecycle.alert_phone.std_dev = value;
    else if (path == "lifecycle.alert_bank.mean") cfg.lifecycle.alert_bank.mean = value;
    else if (path == "lifecycle.alert_bank.std") cfg.lifecycle.alert_bank.std_dev = value;
    else if (path == "reuse_p") cfg.reuse_p = value;
    else throw ConfigError("unknown search dimension: " + path);
}

SimulationConfig scale_config(const SimulationConfig& cfg, double fraction) {
    SimulationConfig out = cfg;
    out.n_accounts = std::max(100, static_cast<int>(std::llround(cfg.n_accounts * fraction)));
    double f = static_cast<double>(out.n_accounts) / cfg.n_accounts;
    for (auto* specs : {&out.normal_typologies, &out.alert_typologies})
        for (auto& t : *specs)
            t.count = std::max(1, static_cast<int>(std::llround(t.count * f)));
    return out;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

void archive_insert(std::vector<TrialRecord>& archive, TrialRecord candidate) {
    for (const auto& member : archive)
        if (dominates(member.objectives, candidate.objectives)) return;
    std::erase_if(archive, [&](const TrialRecord& member) {
        return dominates(candidate.objectives, member.objectives);
    });
    archive.push_back(std::move(candidate));
}

ReferenceStats load_reference_stats(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open reference stats: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid reference stats: ") + e.what());
    }
    ReferenceStats ref;
    for (const char* key : {"degree_cdf", "mean_in_degree", "mean_out_degree", "mean_amount"})
        if (!j.contains(key)) throw ConfigError(std::string("reference stats missing ") + key);
    ref.degree_cdf = j.at("degree_cdf").get<std::vector<double>>();
    if (ref.degree_cdf.empty()) throw ConfigError("reference stats: empty degree histogram");
    ref.mean_in_degree = j.at("mean_in_degree").get<double>();
    ref.mean_out_degree = j.at("mean_out_degree").get<double>();
    ref.mean_amount = j.at("mean_amount").get<double>();
    return ref;
}

namespace {

std::vector<double> knowledge_free_objective(const SimResult& res, const SimulationConfig& cfg,
                                             double fpr_target) {
    TrainTest tt = build_train_test(res.records, res.accounts, res.events, cfg, false);
    std::unordered_set<int> holdout(tt.validation_nodes.begin(), tt.validation_nodes.end());

    Dataset train, val;
    for (const auto& row : tt.train.rows) {
        Dataset& d = holdout.count(row.account) ? val : train;
        d.X.push_back(row.values);
        d.y.push_back(row.label);
    }
    auto has_both = [](const Dataset& d) {
        bool pos = false, neg = false;
        for (int v : d.y) (v ? pos : neg) = true;
        return pos && neg;
    };
    if (train.X.size() < 2 || val.X.empty() || !has_both(train) || !has_both(val))
        return {kDegenerateObjective, kDegenerateObjective};

    const int n_features = static_cast<int>(train.X[0].size());
    DecisionTree best_tree;
    double best_score = -1.0;
    for (int depth : {2, 3, 4, 6}) {
        for (int min_leaf : {1, 5}) {
            auto tree = DecisionTree::train(train, {depth, min_leaf, true});
            auto metrics = evaluate_metrics(tree, val);
            if (metrics.p_at_r > best_score) {
                best_score = metrics.p_at_r;
                best_tree = tree;
            }
        }
    }
    auto metrics = evaluate_metrics(best_tree, val);
    double f1 = std::abs(metrics.fpr - fpr_target);
    auto psi = best_tree.importances(n_features);
    double mean_psi = 1.0 / n_features;
    double f2 = 0.0;
    for (double v : psi) f2 += std::abs(v - mean_psi);
    return {f1, f2};
}

std::vector<double> data_informed_objective(const SimResult& res, const ReferenceStats& ref) {
    std::set<std::pair<int, int>> pairs;
    double amount_sum = 0.0;
    std::int64_t amount_n = 0;
    for (const auto& r : res.records) {
        if (r.src < 0 || r.dst < 0 || r.channel != Channel::Transfer) continue;
        pairs.insert({r.src, r.dst});
        amount_sum += to_units(r.amount);
        ++amount_n;
    }
    int n = static_cast<int>(res.accounts.size());
    if (n == 0 || pairs.empty())
        return {kDegenerateObjective, kDegenerateObjective, kDegenerateObjective,
                kDegenerateObjective};
    std::vector<int> in_deg(n, 0), out_deg(n, 0);
    for (const auto& [u, v] : pairs) {
        ++out_deg[u];
        ++in_deg[v];
    }
    double mean_in = static_cast<double>(pairs.size()) / n;
    double mean_out = mean_in;
    std::vector<std::int64_t> hist;
    for (int i = 0; i < n; ++i) {
        int d = in_deg[i] + out_deg[i];
        if (static_cast<int>(hist.size()) <= d) hist.resize(d + 1, 0);
        ++hist[d];
    }
    std::vector<double> cdf(hist.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        acc += static_cast<double>(hist[k]) / n;
        cdf[k] = acc;
    }
    double ks = 0.0;
    std::size_t len = std::max(cdf.size(), ref.degree_cdf.size());
    for (std::size_t k = 0; k < len; ++k) {
        double a = k < cdf.size() ? cdf[k] : 1.0;
        double b = k < ref.degree_cdf.size() ? ref.degree_cdf[k] : 1.0;
        ks = std::max(ks, std::abs(a - b));
    }
    double mean_amount = amount_n ? amount_sum / amount_n : 0.0;
    auto norm_gap = [](double got, double want) {
        return want != 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
    };
    return {ks, norm_gap(mean_in, ref.mean_in_degree), norm_gap(mean_out, ref.mean_out_degree),
            norm_gap(mean_amount, ref.mean_amount)};
}

}  // namespace

std::vector<double> evaluate_objective(const SimulationConfig& cfg, CalibrationMode mode,
                                       double fpr_target, const ReferenceStats* ref) {
    try {
        SimResult res = generate(cfg);
        if (mode == CalibrationMode::KnowledgeFree)
            return knowledge_free_objective(res, cfg, fpr_target);
        return data_informed_objective(res, *ref);
    } catch (const std::runtime_error&) {
        int k = mode == CalibrationMode::KnowledgeFree ? 2 : 4;
        return std::vector<double>(k, kDegenerateObjective);
    }
}

CalibrationResult optimize(const SimulationConfig& base_cfg, const SearchSpace& space,
                           CalibrationMode mode, int budget, double fpr_target,
                           const ReferenceStats* ref) {
    if (budget < 1) throw ConfigError("calibration budget must be >= 1");
    CalibrationResult result;
    RandomStream root(base_cfg.master_seed);
    auto rsearch = root.derive("calibration");

    const int batch = 6;
    auto sample_params = [&](int trial_id) {
        auto r = rsearch.derive("trial", trial_id);
        std::vector<double> params;
        for (const auto& dim : space.dims)
            params.push_back(dim.lo + (dim.hi - dim.lo) * r.next_double());
        return params;
    };
    auto make_config = [&](const std::vector<double>& params, double fidelity, int trial_id) {
        SimulationConfig cfg = fidelity < 1.0 ? scale_config(base_cfg, fidelity) : base_cfg;
        for (std::size_t d = 0; d < space.dims.size(); ++d)
            patch_config(cfg, space.dims[d].path, params[d]);
        cfg.master_seed = rsearch.derive("trial-seed", trial_id).next_u64();
        return cfg;
    };
    auto run_trial = [&](int trial_id, const std::vector<double>& params, double fidelity) {
        auto t0 = std::chrono::steady_clock::now();
        SimulationConfig cfg = make_config(params, fidelity, trial_id);
        TrialRecord rec;
        rec.id = trial_id;
        rec.params = params;
        rec.fidelity = fidelity;
        rec.seed = cfg.master_seed;
        rec.objectives = evaluate_objective(cfg, mode, fpr_target, ref);
        rec.degenerate = !rec.objectives.empty() && rec.objectives[0] >= kDegenerateObjective;
        rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                     .count();
        return rec;
    };

    const bool halving = budget >= batch;
    int next_trial = 0;
    while (next_trial < budget) {
        int this_batch = std::min(batch, budget - next_trial);
        std::vector<TrialRecord> lows;
        for (int b = 0; b < this_batch; ++b) {
            int id = next_trial + b;
            auto params = sample_params(id);
            double fidelity = halving ? 0.1 : 1.0;
            TrialRecord rec = run_trial(id, params, fidelity);
            result.trials.push_back(rec);
            if (!halving && !rec.degenerate) archive_insert(result.archive, rec);
            if (halving) lows.push_back(std::move(rec));
        }
        if (halving) {
            // promote the batch's top third by nondomination rank
            std::vector<int> rank(lows.size(), 0);
            for (std::size_t i = 0; i < lows.size(); ++i)
                for (std::size_t j = 0; j < lows.size(); ++j)
                    if (j != i && dominates(lows[j].objectives, lows[i].objectives)) ++rank[i];
            std::vector<int> order(lows.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (rank[a] != rank[b]) return rank[a] < rank[b];
                return lows[a].id < lows[b].id;
            });
            int promote = std::max(1, this_batch / 3);
            for (int p = 0; p < promote; ++p) {
                const TrialRecord& low = lows[order[p]];
                if (low.degenerate) continue;
                TrialRecord full = run_trial(low.id, low.params, 1.0);
                result.trials.push_back(full);
                if (!full.degenerate) archive_insert(result.archive, full);
            }
        }
        next_trial += this_batch;
    }

    if (result.archive.empty()) {
        result.all_degenerate = true;
        result.best_config = base_cfg;
        return result;
    }
    auto score = [&](const TrialRecord& t) {
        if (mode == CalibrationMode::KnowledgeFree) return t.objectives[0];
        double s = 0.0;
        for (double v : t.objectives) s += v;
        return s;
    };
    const TrialRecord* best = &result.archive[0];
    for (const auto& t : result.archive)
        if (score(t) < score(*best) || (score(t) == score(*best) && t.id < best->id)) best = &t;
    result.best_params = best->params;
    result.best_config = base_cfg;
    for (std::size_t d = 0; d < space.dims.size(); ++d)
        patch_config(result.best_config, space.dims[d].path, best->params[d]);
    return result;
}

}  // namespace amlgen
