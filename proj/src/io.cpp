#include "amlgen/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace amlgen {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void bad_row(const std::string& path, std::size_t line_no, const std::string& what) {
    throw IoError(path + ":" + std::to_string(line_no) + ": " + what);
}

void expect_header(const std::string& path, const std::string& got, const std::string& want) {
    if (got != want)
        throw IoError(path + ": unexpected column schema (got '" + got + "', expected '" + want +
                      "')");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_transactions_csv(const std::string& path,
                            const std::vector<TransactionRecord>& records) {
    auto out = open_out(path);
    out << "tx_id,step,src,dst,amount_cents,channel,is_sar,pattern_id,src_fi,dst_fi\n";
    std::string line;
    for (const auto& r : records) {
        line.clear();
        line += std::to_string(r.tx_id);
        line += ',';
        line += std::to_string(r.step);
        line += ',';
        line += std::to_string(r.src);
        line += ',';
        line += std::to_string(r.dst);
        line += ',';
        line += std::to_string(r.amount);
        line += ',';
        line += r.channel == Channel::Transfer ? "TRANSFER" : "CASH";
        line += ',';
        line += r.is_sar ? '1' : '0';
        line += ',';
        if (r.is_sar) line += std::to_string(r.pattern_id);
        line += ',';
        line += std::to_string(r.src_fi);
        line += ',';
        line += std::to_string(r.dst_fi);
        line += '\n';
        out << line;
    }
}

std::vector<TransactionRecord> read_transactions_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    expect_header(path, line, "tx_id,step,src,dst,amount_cents,channel,is_sar,pattern_id,src_fi,dst_fi");
    std::vector<TransactionRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 10) bad_row(path, line_no, "expected 10 columns");
        try {
            TransactionRecord r;
            r.tx_id = std::stoll(cells[0]);
            r.step = std::stoi(cells[1]);
            r.src = std::stoi(cells[2]);
            r.dst = std::stoi(cells[3]);
            r.amount = std::stoll(cells[4]);
            if (cells[5] == "TRANSFER") r.channel = Channel::Transfer;
            else if (cells[5] == "CASH") r.channel = Channel::Cash;
            else bad_row(path, line_no, "unknown channel " + cells[5]);
            r.is_sar = cells[6] == "1";
            r.pattern_id = cells[7].empty() ? -1 : std::stoi(cells[7]);
            r.src_fi = std::stoi(cells[8]);
            r.dst_fi = std::stoi(cells[9]);
            records.push_back(r);
        } catch (const IoError&) {
            throw;
        } catch (const std::exception&) {
            bad_row(path, line_no, "malformed value");
        }
    }
    return records;
}

void write_accounts_csv(const std::string& path, const std::vector<AccountInfo>& accounts,
                        const std::vector<KycAttribute>& attrs) {
    auto out = open_out(path);
    out << "account_id,fi,age,is_alert,open_step";
    for (const auto& a : attrs) out << ",kyc_" << a.name;
    out << "\n";
    for (const auto& acc : accounts) {
        out << acc.id << ',' << acc.fi << ',' << acc.age << ',' << (acc.is_alert ? 1 : 0) << ','
            << acc.open_step;
        for (std::size_t k = 0; k < attrs.size(); ++k)
            out << ',' << attrs[k].categories[acc.kyc[k]];
        out << '\n';
    }
}

std::vector<AccountInfo> read_accounts_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    if (line.rfind("account_id,fi,age,is_alert,open_step", 0) != 0)
        throw IoError(path + ": unexpected column schema");
    std::vector<AccountInfo> accounts;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() < 5) bad_row(path, line_no, "expected >= 5 columns");
        try {
            AccountInfo a;
            a.id = std::stoi(cells[0]);
            a.fi = std::stoi(cells[1]);
            a.age = std::stoi(cells[2]);
            a.is_alert = cells[3] == "1";
            a.open_step = std::stoi(cells[4]);
            accounts.push_back(a);
        } catch (const std::exception&) {
            bad_row(path, line_no, "malformed value");
        }
    }
    return accounts;
}

void write_patterns_csv(const std::string& path, const std::vector<PatternInstance>& normal,
                        const std::vector<PatternInstance>& alert) {
    auto out = open_out(path);
    out << "pattern_id,kind,is_alert,n_members,members\n";
    auto emit = [&](const PatternInstance& p) {
        out << p.id << ',' << to_string(p.kind) << ',' << (p.is_alert ? 1 : 0) << ','
            << p.members.size() << ',';
        for (std::size_t i = 0; i < p.members.size(); ++i) {
            if (i) out << ';';
            out << p.members[i];
        }
        out << '\n';
    };
    for (const auto& p : normal) emit(p);
    for (const auto& p : alert) emit(p);
}

std::vector<PatternInstance> read_patterns_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    expect_header(path, line, "pattern_id,kind,is_alert,n_members,members");
    std::vector<PatternInstance> patterns;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 5) bad_row(path, line_no, "expected 5 columns");
        try {
            PatternInstance p;
            p.id = std::stoi(cells[0]);
            p.kind = pattern_kind_from_string(cells[1]);
            p.is_alert = cells[2] == "1";
            std::stringstream ms(cells[4]);
            std::string tok;
            while (std::getline(ms, tok, ';')) p.members.push_back(std::stoi(tok));
            if (static_cast<int>(p.members.size()) != std::stoi(cells[3]))
                bad_row(path, line_no, "member count mismatch");
            patterns.push_back(std::move(p));
        } catch (const IoError&) {
            throw;
        } catch (const std::exception&) {
            bad_row(path, line_no, "malformed value");
        }
    }
    return patterns;
}

void write_events_csv(const std::string& path, const std::vector<LifecycleEvent>& events) {
    auto out = open_out(path);
    out << "account_id,step,kind\n";
    for (const auto& e : events)
        out << e.account << ',' << e.step << ','
            << (e.kind == 0 ? "phone_change" : "bank_change") << '\n';
}

std::vector<LifecycleEvent> read_events_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    expect_header(path, line, "account_id,step,kind");
    std::vector<LifecycleEvent> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 3) bad_row(path, line_no, "expected 3 columns");
        try {
            LifecycleEvent e;
            e.account = std::stoi(cells[0]);
            e.step = std::stoi(cells[1]);
            if (cells[2] == "phone_change") e.kind = 0;
            else if (cells[2] == "bank_change") e.kind = 1;
            else bad_row(path, line_no, "unknown event kind " + cells[2]);
            events.push_back(e);
        } catch (const IoError&) {
            throw;
        } catch (const std::exception&) {
            bad_row(path, line_no, "malformed value");
        }
    }
    return events;
}

void write_feature_table_csv(const std::string& path, const FeatureTable& table,
                             const NoisyLabels* labels, bool blind) {
    auto out = open_out(path);
    out << "account_id,fi";
    if (labels) {
        if (!blind) out << ",label_true";
        out << ",label_observed,labeled";
    } else {
        out << ",label";
    }
    for (const auto& c : table.columns) out << ',' << c;
    out << "\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        out << row.account << ',' << row.fi;
        if (labels) {
            if (!blind) out << ',' << row.label;
            out << ',' << labels->observed[i] << ',' << static_cast<int>(labels->labeled[i]);
        } else {
            out << ',' << row.label;
        }
        for (double v : row.values) out << ',' << fmt_double(v);
        out << '\n';
    }
}

namespace {

json census_json(const std::vector<std::tuple<PatternKind, int, int>>& census) {
    json arr = json::array();
    for (const auto& [kind, requested, placed] : census)
        arr.push_back({{"kind", to_string(kind)}, {"requested", requested}, {"placed", placed}});
    return arr;
}

}  // namespace

int cmd_generate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
    SimulationConfig cfg;
    try {
        cfg = load_config_file(config_path);
        if (seed) cfg.master_seed = *seed;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        auto t0 = std::chrono::steady_clock::now();
        World world;
        SimResult res = generate(cfg, &world);
        double gen_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (res.records.empty()) {
            std::cerr << "degenerate generation: empty transaction log\n";
            return kExitDegenerate;
        }
        fs::create_directories(out_dir);
        auto t1 = std::chrono::steady_clock::now();
        write_transactions_csv(out_dir + "/transactions.csv", res.records);
        write_accounts_csv(out_dir + "/accounts.csv", res.accounts, cfg.kyc_attributes);
        write_patterns_csv(out_dir + "/patterns.csv", world.normal_instances,
                           world.alert_instances);
        write_events_csv(out_dir + "/events.csv", res.events);
        double io_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t1)
                .count();

        std::int64_t sar = 0;
        for (const auto& r : res.records) sar += r.is_sar;
        int alert_accounts = 0;
        for (const auto& a : res.accounts) alert_accounts += a.is_alert;
        int discarded = 0;
        for (const auto& [kind, requested, placed] : world.census) discarded += requested - placed;

        json manifest;
        manifest["schema_version"] = cfg.schema_version;
        manifest["config_hash"] = config_hash(cfg);
        manifest["master_seed"] = cfg.master_seed;
        manifest["artifacts"] = {"transactions.csv", "accounts.csv", "patterns.csv",
                                 "events.csv"};
        manifest["counts"] = {
            {"accounts", res.accounts.size()},
            {"records", res.records.size()},
            {"sar_records", sar},
            {"alert_accounts", alert_accounts},
            {"patterns_placed",
             world.normal_instances.size() + world.alert_instances.size()},
            {"patterns_discarded", discarded},
            {"dropped_stubs", world.graph.dropped_stubs},
            {"events", res.events.size()},
        };
        manifest["census"] = census_json(world.census);
        manifest["wall_ms"] = {{"generate", gen_ms}, {"export", io_ms}};
        auto out = open_out(out_dir + "/manifest.json");
        out << manifest.dump(2) << "\n";
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    }
}

int cmd_features(const FeaturesOptions& opt) {
    SimulationConfig cfg;
    try {
        cfg = load_config_file(opt.config_path);
        if (opt.seed) cfg.master_seed = *opt.seed;
        if (opt.labeled_fraction) cfg.noise.labeled_fraction = *opt.labeled_fraction;
        if (opt.class_noise) {
            cfg.noise.flip_prob_benign = *opt.class_noise;
            cfg.noise.flip_prob_alert = *opt.class_noise;
        }
        if (opt.typology_noise) cfg.noise.typology_flip_prob = *opt.typology_noise;
        if (opt.neighbor_noise) cfg.noise.neighbor_flag_prob = *opt.neighbor_noise;
        validate_config(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        auto records = read_transactions_csv(opt.transactions_path);
        fs::path dir = fs::path(opt.transactions_path).parent_path();
        auto accounts = read_accounts_csv((dir / "accounts.csv").string());
        std::vector<LifecycleEvent> events;
        if (fs::exists(dir / "events.csv"))
            events = read_events_csv((dir / "events.csv").string());
        std::vector<PatternInstance> alert_patterns;
        if (fs::exists(dir / "patterns.csv")) {
            for (auto& p : read_patterns_csv((dir / "patterns.csv").string()))
                if (p.is_alert) alert_patterns.push_back(std::move(p));
        }
        int max_step = 0;
        for (const auto& r : records) max_step = std::max(max_step, r.step);
        if (cfg.windows.train_end > max_step + 1 || cfg.windows.test_end > max_step + 1)
            throw ConfigError("feature window extends past the log horizon");

        bool per_fi = opt.all_fi || opt.fi >= 0;
        TrainTest tt = build_train_test(records, accounts, events, cfg, per_fi);
        NoisyLabels train_labels =
            apply_noise(tt.train, tt.train_graph, alert_patterns, cfg);

        fs::create_directories(opt.out_dir);
        write_feature_table_csv(opt.out_dir + "/train_features.csv", tt.train, &train_labels,
                                opt.blind);
        write_feature_table_csv(opt.out_dir + "/test_features.csv", tt.test, nullptr, false);
        if (per_fi) {
            for (int fi = 0; fi < cfg.n_fis; ++fi) {
                if (!opt.all_fi && fi != opt.fi) continue;
                NoisyLabels fi_labels = apply_noise(
                    tt.train_per_fi[fi],
                    aggregate(records, cfg.windows.train_start, cfg.windows.train_end, fi),
                    alert_patterns, cfg);
                write_feature_table_csv(
                    opt.out_dir + "/train_features_fi" + std::to_string(fi) + ".csv",
                    tt.train_per_fi[fi], &fi_labels, opt.blind);
                write_feature_table_csv(
                    opt.out_dir + "/test_features_fi" + std::to_string(fi) + ".csv",
                    tt.test_per_fi[fi], nullptr, false);
            }
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
}

int cmd_calibrate(const CalibrateOptions& opt) {
    SimulationConfig cfg;
    CalibrationMode mode;
    ReferenceStats ref;
    try {
        cfg = load_config_file(opt.config_path);
        if (opt.seed) cfg.master_seed = *opt.seed;
        if (opt.mode == "knowledge-free") mode = CalibrationMode::KnowledgeFree;
        else if (opt.mode == "data-informed") mode = CalibrationMode::DataInformed;
        else throw ConfigError("unknown calibration mode: " + opt.mode);
        if (mode == CalibrationMode::DataInformed) {
            if (opt.reference_stats_path.empty())
                throw ConfigError("data-informed mode requires --reference-stats");
            ref = load_reference_stats(opt.reference_stats_path);
        }
        if (opt.budget < 1) throw ConfigError("budget must be >= 1");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        SearchSpace space = default_search_space();
        CalibrationResult result = optimize(
            cfg, space, mode, opt.budget, opt.fpr_target,
            mode == CalibrationMode::DataInformed ? &ref : nullptr);

        fs::create_directories(opt.out_dir);
        auto write_trials = [&](const std::string& path,
                                const std::vector<TrialRecord>& trials) {
            auto out = open_out(path);
            out << "trial_id";
            for (const auto& dim : space.dims) out << ',' << dim.path;
            std::size_t n_obj = trials.empty() ? 2 : trials[0].objectives.size();
            for (std::size_t k = 0; k < n_obj; ++k) out << ",f" << (k + 1);
            out << ",fidelity,seed,ms\n";
            for (const auto& t : trials) {
                out << t.id;
                for (double p : t.params) out << ',' << fmt_double(p);
                for (double f : t.objectives) out << ',' << fmt_double(f);
                out << ',' << fmt_double(t.fidelity) << ',' << t.seed << ','
                    << fmt_double(t.ms) << '\n';
            }
        };
        write_trials(opt.out_dir + "/trials.csv", result.trials);
        write_trials(opt.out_dir + "/pareto.csv", result.archive);
        if (result.all_degenerate) {
            std::cerr << "degenerate calibration: every trial failed\n";
            return kExitDegenerate;
        }
        auto out = open_out(opt.out_dir + "/best_config.json");
        out << dump_config(result.best_config) << "\n";
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
}

int cmd_stats(const std::string& transactions_path, const std::string& out_dir, int dot_nodes) {
    try {
        auto records = read_transactions_csv(transactions_path);
        StatsReport rep = compute_stats(records);
        fs::create_directories(out_dir);

        json j;
        j["n_accounts"] = rep.n_accounts;
        j["n_records"] = rep.n_records;
        j["n_internal"] = rep.n_internal;
        j["n_sar"] = rep.n_sar;
        j["benign_share"] = rep.benign_share;
        j["n_alert_accounts"] = rep.n_alert_accounts;
        j["mean_in_degree"] = rep.mean_in_degree;
        j["mean_out_degree"] = rep.mean_out_degree;
        j["fitted_gamma"] = rep.fitted_gamma;
        j["fitted_scale"] = rep.fitted_scale;
        j["homophily_normal"] = rep.homophily_normal;
        j["homophily_ml"] = rep.homophily_ml;
        j["mean_amount_normal"] = rep.mean_amount_normal;
        j["mean_amount_alert"] = rep.mean_amount_alert;
        j["degree_cdf"] = rep.degree_cdf;
        j["mean_amount"] = rep.mean_amount_all;

        fs::path dir = fs::path(transactions_path).parent_path();
        if (fs::exists(dir / "patterns.csv")) {
            auto patterns = read_patterns_csv((dir / "patterns.csv").string());
            std::map<std::string, int> census;
            for (const auto& p : patterns)
                ++census[std::string(to_string(p.kind)) + (p.is_alert ? ":alert" : ":normal")];
            j["pattern_census"] = census;
        }
        {
            auto out = open_out(out_dir + "/stats.json");
            out << j.dump(2) << "\n";
        }
        {
            auto out = open_out(out_dir + "/degree_hist.csv");
            out << "degree,count_in,count_out,count_total\n";
            std::size_t len = std::max({rep.in_hist.size(), rep.out_hist.size(),
                                        rep.total_hist.size()});
            for (std::size_t k = 0; k < len; ++k)
                out << k << ',' << (k < rep.in_hist.size() ? rep.in_hist[k] : 0) << ','
                    << (k < rep.out_hist.size() ? rep.out_hist[k] : 0) << ','
                    << (k < rep.total_hist.size() ? rep.total_hist[k] : 0) << '\n';
        }
        {
            auto out = open_out(out_dir + "/amount_hist.csv");
            out << "bin_lo,count_normal,count_alert\n";
            for (std::size_t b = 0; b < rep.amount_hist_normal.size(); ++b)
                out << fmt_double(b * rep.amount_bin_width) << ','
                    << rep.amount_hist_normal[b] << ',' << rep.amount_hist_alert[b] << '\n';
        }
        {
            // bank balance traces of the ten lowest account ids
            std::set<int> trace_ids;
            for (const auto& r : records) {
                if (r.src >= 0) trace_ids.insert(r.src);
                if (r.dst >= 0) trace_ids.insert(r.dst);
            }
            while (trace_ids.size() > 10) trace_ids.erase(std::prev(trace_ids.end()));
            int max_step = 0;
            for (const auto& r : records) max_step = std::max(max_step, r.step);
            std::map<int, Cents> balance;
            for (int id : trace_ids) balance[id] = 0;
            auto out = open_out(out_dir + "/balance_traces.csv");
            out << "account_id,step,balance_cents\n";
            std::size_t cursor = 0;
            for (int t = 0; t <= max_step; ++t) {
                while (cursor < records.size() && records[cursor].step == t) {
                    const auto& r = records[cursor++];
                    if (r.channel == Channel::Transfer) {
                        if (trace_ids.count(r.src)) balance[r.src] -= r.amount;
                        if (trace_ids.count(r.dst)) balance[r.dst] += r.amount;
                    }
                }
                for (int id : trace_ids)
                    out << id << ',' << t << ',' << balance[id] << '\n';
            }
        }
        {
            auto out = open_out(out_dir + "/graph.dot");
            out << to_dot(records, dot_nodes);
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace amlgen
