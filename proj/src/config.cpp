#include "amlgen/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "amlgen/zeta.hpp"
#include "json.hpp"

using nlohmann::json;

namespace amlgen {

const char* to_string(PatternKind k) {
    switch (k) {
        case PatternKind::Direct: return "direct";
        case PatternKind::Mutual: return "mutual";
        case PatternKind::Periodic: return "periodic";
        case PatternKind::Forward: return "forward";
        case PatternKind::FanIn: return "fan_in";
        case PatternKind::FanOut: return "fan_out";
        case PatternKind::Cycle: return "cycle";
        case PatternKind::ScatterGather: return "scatter_gather";
        case PatternKind::GatherScatter: return "gather_scatter";
        case PatternKind::StackedBipartite: return "stacked_bipartite";
    }
    return "?";
}

const char* to_string(TimingScheme s) {
    switch (s) {
        case TimingScheme::FixedInterval: return "fixed_interval";
        case TimingScheme::RandomInterval: return "random_interval";
        case TimingScheme::Unordered: return "unordered";
        case TimingScheme::Simultaneous: return "simultaneous";
    }
    return "?";
}

PatternKind pattern_kind_from_string(const std::string& s) {
    for (auto k : {PatternKind::Direct, PatternKind::Mutual, PatternKind::Periodic,
                   PatternKind::Forward, PatternKind::FanIn, PatternKind::FanOut,
                   PatternKind::Cycle, PatternKind::ScatterGather, PatternKind::GatherScatter,
                   PatternKind::StackedBipartite}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("unknown pattern kind: " + s);
}

TimingScheme timing_scheme_from_string(const std::string& s) {
    for (auto t : {TimingScheme::FixedInterval, TimingScheme::RandomInterval,
                   TimingScheme::Unordered, TimingScheme::Simultaneous}) {
        if (s == to_string(t)) return t;
    }
    throw ConfigError("unknown timing scheme: " + s);
}

int pattern_min_size(PatternKind k, int layers) {
    switch (k) {
        case PatternKind::Direct:
        case PatternKind::Mutual:
        case PatternKind::Periodic: return 2;
        case PatternKind::Forward: return 3;
        case PatternKind::FanIn:
        case PatternKind::FanOut:
        case PatternKind::Cycle:
        case PatternKind::ScatterGather:
        case PatternKind::GatherScatter: return 3;
        case PatternKind::StackedBipartite: return layers;
    }
    return 2;
}

bool pattern_fixed_size(PatternKind k) {
    switch (k) {
        case PatternKind::Direct:
        case PatternKind::Mutual:
        case PatternKind::Periodic:
        case PatternKind::Forward: return true;
        default: return false;
    }
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config field '" + path + "': " + what);
}

double get_num(const json& j, const std::string& path, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int dflt) {
    if (!j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    const auto& v = j.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

AmountModel parse_amount(const json& j, const std::string& path, AmountModel dflt) {
    AmountModel m = dflt;
    m.mean = get_num(j, path, "mean", m.mean);
    m.std_dev = get_num(j, path, "std", m.std_dev);
    m.min_amount = get_num(j, path, "min", m.min_amount);
    m.max_amount = get_num(j, path, "max", m.max_amount);
    return m;
}

GaussianModel parse_gauss(const json& j, const std::string& path, GaussianModel dflt) {
    GaussianModel g = dflt;
    g.mean = get_num(j, path, "mean", g.mean);
    g.std_dev = get_num(j, path, "std", g.std_dev);
    return g;
}

TypologySpec parse_typology(const json& j, const std::string& path, bool alert, int n_steps) {
    TypologySpec t;
    t.is_alert = alert;
    if (!j.contains("kind")) fail(path + ".kind", "required");
    t.kind = pattern_kind_from_string(get_str(j, path, "kind", ""));
    t.count = get_int(j, path, "count", 0);
    t.layers = get_int(j, path, "layers", 3);
    int lo = pattern_min_size(t.kind, t.layers);
    if (pattern_fixed_size(t.kind)) {
        t.min_size = t.max_size = lo;
    } else {
        t.min_size = get_int(j, path, "min_size", alert ? 5 : lo);
        t.max_size = get_int(j, path, "max_size", alert ? 20 : std::max(lo, 10));
    }
    t.timing = timing_scheme_from_string(
        get_str(j, path, "timing", "random_interval"));
    t.start = get_int(j, path, "start", 0);
    t.end = get_int(j, path, "end", n_steps - 1);
    if (t.count < 0) fail(path + ".count", "must be >= 0");
    if (t.min_size < lo)
        fail(path + ".min_size", "below structural minimum for " + std::string(to_string(t.kind)));
    if (t.max_size < t.min_size) fail(path + ".max_size", "must be >= min_size");
    if (t.start < 0 || t.end >= n_steps || t.start > t.end)
        fail(path + ".start", "schedule window must satisfy 0 <= start <= end < n_steps");
    if (t.kind == PatternKind::StackedBipartite && t.layers < 2)
        fail(path + ".layers", "must be >= 2");
    return t;
}

std::vector<SalaryRow> default_salary_table() {
    return {
        {16, 24, 0.12, 150000.0, 170000.0},
        {25, 44, 0.33, 380000.0, 405000.0},
        {45, 64, 0.32, 390000.0, 420000.0},
        {65, 100, 0.23, 220000.0, 250000.0},
    };
}

TypologySpec default_normal(PatternKind kind, int count, int n_steps) {
    TypologySpec t;
    t.kind = kind;
    t.is_alert = false;
    t.count = count;
    int lo = pattern_min_size(kind, 3);
    t.min_size = lo;
    t.max_size = pattern_fixed_size(kind) ? lo : 10;
    t.timing = TimingScheme::RandomInterval;
    t.start = 0;
    t.end = n_steps - 1;
    return t;
}

TypologySpec default_alert(PatternKind kind, int count, int n_steps) {
    TypologySpec t;
    t.kind = kind;
    t.is_alert = true;
    t.count = count;
    t.min_size = std::max(5, pattern_min_size(kind, 3));
    t.max_size = 20;
    t.timing = TimingScheme::RandomInterval;
    t.start = 0;
    t.end = n_steps - 1;
    return t;
}

}  // namespace

SimulationConfig load_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    SimulationConfig cfg;
    cfg.schema_version = get_int(j, "", "schema_version", 1);
    if (cfg.schema_version != 1) fail("schema_version", "unsupported (expected 1)");

    if (!j.contains("n_accounts")) fail("n_accounts", "required");
    if (!j.contains("n_steps")) fail("n_steps", "required");
    cfg.n_accounts = get_int(j, "", "n_accounts", 0);
    cfg.n_steps = get_int(j, "", "n_steps", 0);

    if (j.contains("master_seed")) {
        const auto& v = j.at("master_seed");
        if (!v.is_number_integer()) fail("master_seed", "expected an integer");
        cfg.master_seed = v.get<std::uint64_t>();
    }
    if (const char* env = std::getenv("AMLGEN_SEED")) {
        char* end = nullptr;
        unsigned long long s = std::strtoull(env, &end, 10);
        if (end && *end == '\0') cfg.master_seed = s;
    }

    if (j.contains("degree")) {
        const auto& d = j.at("degree");
        cfg.degree_params.loc = get_int(d, "degree", "loc", 1);
        cfg.degree_params.gamma = get_num(d, "degree", "gamma", 2.0);
        if (d.contains("mean_degree")) {
            if (d.contains("scale")) fail("degree", "give scale or mean_degree, not both");
            double target = get_num(d, "degree", "mean_degree", 0.0);
            try {
                cfg.degree_params.scale =
                    derive_scale(target, cfg.degree_params.loc, cfg.degree_params.gamma);
            } catch (const std::invalid_argument& e) {
                fail("degree.mean_degree", e.what());
            }
        } else {
            cfg.degree_params.scale = get_num(d, "degree", "scale", 1.0);
        }
    }

    int default_normal_count =
        static_cast<int>(std::ceil(0.8 * static_cast<double>(cfg.n_accounts)));
    int default_alert_count =
        static_cast<int>(std::llround(cfg.n_accounts * 2.8e-4));

    if (j.contains("normal_typologies")) {
        const auto& arr = j.at("normal_typologies");
        if (!arr.is_array()) fail("normal_typologies", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.normal_typologies.push_back(parse_typology(
                arr[i], "normal_typologies[" + std::to_string(i) + "]", false, cfg.n_steps));
    } else {
        for (auto k : {PatternKind::Direct, PatternKind::Mutual, PatternKind::Periodic,
                       PatternKind::Forward, PatternKind::FanIn, PatternKind::FanOut})
            cfg.normal_typologies.push_back(default_normal(k, default_normal_count, cfg.n_steps));
    }
    if (j.contains("alert_typologies")) {
        const auto& arr = j.at("alert_typologies");
        if (!arr.is_array()) fail("alert_typologies", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            cfg.alert_typologies.push_back(parse_typology(
                arr[i], "alert_typologies[" + std::to_string(i) + "]", true, cfg.n_steps));
    } else {
        for (auto k : {PatternKind::FanIn, PatternKind::FanOut, PatternKind::Cycle,
                       PatternKind::ScatterGather, PatternKind::GatherScatter,
                       PatternKind::StackedBipartite})
            cfg.alert_typologies.push_back(default_alert(k, default_alert_count, cfg.n_steps));
    }
    for (auto& t : cfg.normal_typologies)
        if (t.is_alert) fail("normal_typologies", "entries must not be alerts");

    cfg.reuse_p = get_num(j, "", "reuse_p", 0.218);

    if (j.contains("amounts")) {
        const auto& a = j.at("amounts");
        if (a.contains("normal"))
            cfg.normal_tx_model = parse_amount(a.at("normal"), "amounts.normal", cfg.normal_tx_model);
        if (a.contains("alert"))
            cfg.alert_tx_model = parse_amount(a.at("alert"), "amounts.alert", cfg.alert_tx_model);
        if (a.contains("normal_spend"))
            cfg.normal_spend_model =
                parse_amount(a.at("normal_spend"), "amounts.normal_spend", cfg.normal_spend_model);
        if (a.contains("alert_spend"))
            cfg.alert_spend_model =
                parse_amount(a.at("alert_spend"), "amounts.alert_spend", cfg.alert_spend_model);
    }

    if (j.contains("salary_table")) {
        const auto& arr = j.at("salary_table");
        if (!arr.is_array() || arr.empty()) fail("salary_table", "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& r = arr[i];
            std::string p = "salary_table[" + std::to_string(i) + "]";
            SalaryRow row;
            row.age_min = get_int(r, p, "age_min", -1);
            row.age_max = get_int(r, p, "age_max", -1);
            row.share = get_num(r, p, "share", -1.0);
            row.median = get_num(r, p, "median", -1.0);
            row.mean = get_num(r, p, "mean", -1.0);
            if (row.age_min < 0 || row.age_max < row.age_min) fail(p, "bad age range");
            if (row.share <= 0.0) fail(p + ".share", "must be positive");
            if (row.median <= 0.0 || row.mean < row.median)
                fail(p, "requires 0 < median <= mean");
            cfg.salary_table.push_back(row);
        }
    } else {
        cfg.salary_table = default_salary_table();
    }

    cfg.spend_window = get_int(j, "", "spend_window", 28);
    cfg.spend_scale = get_num(j, "", "spend_scale", 500.0);
    cfg.payday_period = get_int(j, "", "payday_period", 28);
    cfg.keep_fraction = get_num(j, "", "keep_fraction", 0.1);
    cfg.cash_placement_fraction = get_num(j, "", "cash_placement_fraction", 0.5);
    cfg.p_spend_bank = get_num(j, "", "p_spend_bank", 0.8);
    cfg.spontaneous_tx_per_account_month =
        get_num(j, "", "spontaneous_tx_per_account_month", 4.0);

    if (j.contains("lifecycle")) {
        const auto& l = j.at("lifecycle");
        if (l.contains("normal_phone"))
            cfg.lifecycle.normal_phone =
                parse_gauss(l.at("normal_phone"), "lifecycle.normal_phone", cfg.lifecycle.normal_phone);
        if (l.contains("alert_phone"))
            cfg.lifecycle.alert_phone =
                parse_gauss(l.at("alert_phone"), "lifecycle.alert_phone", cfg.lifecycle.alert_phone);
        if (l.contains("normal_bank"))
            cfg.lifecycle.normal_bank =
                parse_gauss(l.at("normal_bank"), "lifecycle.normal_bank", cfg.lifecycle.normal_bank);
        if (l.contains("alert_bank"))
            cfg.lifecycle.alert_bank =
                parse_gauss(l.at("alert_bank"), "lifecycle.alert_bank", cfg.lifecycle.alert_bank);
    }

    if (j.contains("kyc_attributes")) {
        const auto& arr = j.at("kyc_attributes");
        if (!arr.is_array()) fail("kyc_attributes", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& a = arr[i];
            std::string p = "kyc_attributes[" + std::to_string(i) + "]";
            KycAttribute attr;
            attr.name = get_str(a, p, "name", "");
            if (attr.name.empty()) fail(p + ".name", "required");
            if (!a.contains("categories") || !a.at("categories").is_array())
                fail(p + ".categories", "expected an array");
            for (const auto& c : a.at("categories")) attr.categories.push_back(c.get<std::string>());
            auto read_dist = [&](const char* key) {
                std::vector<double> d;
                if (!a.contains(key) || !a.at(key).is_array() ||
                    a.at(key).size() != attr.categories.size())
                    fail(p + "." + key, "expected an array matching categories");
                double s = 0.0;
                for (const auto& x : a.at(key)) {
                    double v = x.get<double>();
                    if (v < 0.0) fail(p + "." + key, "probabilities must be >= 0");
                    d.push_back(v);
                    s += v;
                }
                if (std::abs(s - 1.0) > 1e-6) fail(p + "." + key, "must sum to 1");
                return d;
            };
            attr.normal_dist = read_dist("normal_dist");
            attr.alert_dist = read_dist("alert_dist");
            cfg.kyc_attributes.push_back(std::move(attr));
        }
    }

    cfg.n_fis = get_int(j, "", "n_fis", 1);
    if (j.contains("fi_weights")) {
        const auto& arr = j.at("fi_weights");
        if (!arr.is_array() || static_cast<int>(arr.size()) != cfg.n_fis)
            fail("fi_weights", "expected an array of length n_fis");
        for (const auto& w : arr) {
            double v = w.get<double>();
            if (v <= 0.0) fail("fi_weights", "weights must be positive");
            cfg.fi_weights.push_back(v);
        }
    }

    if (j.contains("windows")) {
        const auto& w = j.at("windows");
        cfg.windows.train_start = get_int(w, "windows", "train_start", 0);
        cfg.windows.train_end = get_int(w, "windows", "train_end", cfg.n_steps);
        cfg.windows.test_start = get_int(w, "windows", "test_start", 0);
        cfg.windows.test_end = get_int(w, "windows", "test_end", cfg.n_steps);
        cfg.windows.m_subwindows = get_int(w, "windows", "m", 4);
        cfg.windows.validation_fraction =
            get_num(w, "windows", "validation_fraction", 0.25);
    } else {
        cfg.windows.train_end = cfg.n_steps;
        cfg.windows.test_end = cfg.n_steps;
    }

    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        cfg.noise.labeled_fraction = get_num(n, "noise", "labeled_fraction", 1.0);
        cfg.noise.flip_prob_benign = get_num(n, "noise", "flip_prob_benign", 0.0);
        cfg.noise.flip_prob_alert = get_num(n, "noise", "flip_prob_alert", 0.0);
        cfg.noise.typology_flip_prob = get_num(n, "noise", "typology_flip_prob", 0.0);
        cfg.noise.neighbor_flag_prob = get_num(n, "noise", "neighbor_flag_prob", 0.0);
    }

    validate_config(cfg);
    return cfg;
}

SimulationConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

void validate_config(const SimulationConfig& cfg) {
    if (cfg.n_accounts <= 0) fail("n_accounts", "must be positive");
    if (cfg.n_steps <= 0) fail("n_steps", "must be positive");
    if (cfg.degree_params.loc < 1) fail("degree.loc", "must be >= 1");
    if (cfg.degree_params.scale <= 0.0) fail("degree.scale", "must be positive");
    if (cfg.degree_params.gamma <= 1.0) fail("degree.gamma", "must exceed 1");
    if (cfg.reuse_p <= 0.0 || cfg.reuse_p >= 1.0) fail("reuse_p", "must lie in (0, 1)");
    for (const AmountModel* m : {&cfg.normal_tx_model, &cfg.alert_tx_model,
                                 &cfg.normal_spend_model, &cfg.alert_spend_model}) {
        if (m->std_dev < 0.0) fail("amounts", "std must be >= 0");
        if (m->min_amount <= 0.0 || m->max_amount < m->min_amount)
            fail("amounts", "requires 0 < min <= max");
    }
    if (cfg.salary_table.empty()) fail("salary_table", "must not be empty");
    if (cfg.spend_window < 1) fail("spend_window", "must be >= 1");
    if (cfg.spend_scale <= 0.0) fail("spend_scale", "must be positive");
    if (cfg.payday_period < 1) fail("payday_period", "must be >= 1");
    if (cfg.keep_fraction < 0.0 || cfg.keep_fraction > 1.0)
        fail("keep_fraction", "must lie in [0, 1]");
    if (cfg.cash_placement_fraction < 0.0 || cfg.cash_placement_fraction > 1.0)
        fail("cash_placement_fraction", "must lie in [0, 1]");
    if (cfg.p_spend_bank < 0.0 || cfg.p_spend_bank > 1.0)
        fail("p_spend_bank", "must lie in [0, 1]");
    if (cfg.spontaneous_tx_per_account_month < 0.0)
        fail("spontaneous_tx_per_account_month", "must be >= 0");
    if (cfg.n_fis < 1) fail("n_fis", "must be >= 1");
    const auto& w = cfg.windows;
    if (w.train_start < 0 || w.train_end > cfg.n_steps || w.train_start >= w.train_end)
        fail("windows.train_start", "requires 0 <= train_start < train_end <= n_steps");
    if (w.test_start < 0 || w.test_end > cfg.n_steps || w.test_start >= w.test_end)
        fail("windows.test_start", "requires 0 <= test_start < test_end <= n_steps");
    if (w.m_subwindows < 1) fail("windows.m", "must be >= 1");
    if (w.m_subwindows > w.train_end - w.train_start ||
        w.m_subwindows > w.test_end - w.test_start)
        fail("windows.m", "more sub-windows than steps in a window");
    if (w.validation_fraction < 0.0 || w.validation_fraction >= 1.0)
        fail("windows.validation_fraction", "must lie in [0, 1)");
    const auto& n = cfg.noise;
    for (double p : {n.labeled_fraction, n.flip_prob_benign, n.flip_prob_alert,
                     n.typology_flip_prob, n.neighbor_flag_prob})
        if (p < 0.0 || p > 1.0) fail("noise", "probabilities must lie in [0, 1]");
    for (const auto& t : cfg.normal_typologies) {
        if (t.kind == PatternKind::Cycle || t.kind == PatternKind::ScatterGather ||
            t.kind == PatternKind::GatherScatter || t.kind == PatternKind::StackedBipartite)
            fail("normal_typologies", std::string(to_string(t.kind)) + " is an alert-only kind");
    }
    for (const auto& t : cfg.alert_typologies) {
        if (!t.is_alert) fail("alert_typologies", "entries must be alerts");
        if (t.kind == PatternKind::Direct || t.kind == PatternKind::Mutual ||
            t.kind == PatternKind::Periodic || t.kind == PatternKind::Forward)
            fail("alert_typologies", std::string(to_string(t.kind)) + " is a normal-only kind");
    }
    auto layered = [](PatternKind k) {
        return k == PatternKind::ScatterGather || k == PatternKind::GatherScatter ||
               k == PatternKind::StackedBipartite;
    };
    for (const auto* vec : {&cfg.normal_typologies, &cfg.alert_typologies}) {
        for (const auto& t : *vec) {
            if (t.timing == TimingScheme::Simultaneous &&
                (t.kind == PatternKind::Forward || t.kind == PatternKind::Cycle || layered(t.kind)))
                fail("typologies",
                     std::string(to_string(t.kind)) + " cannot use simultaneous timing");
        }
    }
}

std::string dump_config(const SimulationConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["n_accounts"] = cfg.n_accounts;
    j["n_steps"] = cfg.n_steps;
    j["master_seed"] = cfg.master_seed;
    j["degree"] = {{"loc", cfg.degree_params.loc},
                   {"scale", cfg.degree_params.scale},
                   {"gamma", cfg.degree_params.gamma}};
    auto dump_typ = [](const TypologySpec& t) {
        return json{{"kind", to_string(t.kind)}, {"count", t.count},
                    {"min_size", t.min_size},   {"max_size", t.max_size},
                    {"timing", to_string(t.timing)}, {"layers", t.layers},
                    {"start", t.start},         {"end", t.end}};
    };
    j["normal_typologies"] = json::array();
    for (const auto& t : cfg.normal_typologies) j["normal_typologies"].push_back(dump_typ(t));
    j["alert_typologies"] = json::array();
    for (const auto& t : cfg.alert_typologies) j["alert_typologies"].push_back(dump_typ(t));
    j["reuse_p"] = cfg.reuse_p;
    auto dump_amount = [](const AmountModel& m) {
        return json{{"mean", m.mean}, {"std", m.std_dev},
                    {"min", m.min_amount}, {"max", m.max_amount}};
    };
    j["amounts"] = {{"normal", dump_amount(cfg.normal_tx_model)},
                    {"alert", dump_amount(cfg.alert_tx_model)},
                    {"normal_spend", dump_amount(cfg.normal_spend_model)},
                    {"alert_spend", dump_amount(cfg.alert_spend_model)}};
    j["salary_table"] = json::array();
    for (const auto& r : cfg.salary_table)
        j["salary_table"].push_back({{"age_min", r.age_min}, {"age_max", r.age_max},
                                     {"share", r.share}, {"median", r.median},
                                     {"mean", r.mean}});
    j["spend_window"] = cfg.spend_window;
    j["spend_scale"] = cfg.spend_scale;
    j["payday_period"] = cfg.payday_period;
    j["keep_fraction"] = cfg.keep_fraction;
    j["cash_placement_fraction"] = cfg.cash_placement_fraction;
    j["p_spend_bank"] = cfg.p_spend_bank;
    j["spontaneous_tx_per_account_month"] = cfg.spontaneous_tx_per_account_month;
    auto dump_gauss = [](const GaussianModel& g) {
        return json{{"mean", g.mean}, {"std", g.std_dev}};
    };
    j["lifecycle"] = {{"normal_phone", dump_gauss(cfg.lifecycle.normal_phone)},
                      {"alert_phone", dump_gauss(cfg.lifecycle.alert_phone)},
                      {"normal_bank", dump_gauss(cfg.lifecycle.normal_bank)},
                      {"alert_bank", dump_gauss(cfg.lifecycle.alert_bank)}};
    j["kyc_attributes"] = json::array();
    for (const auto& a : cfg.kyc_attributes)
        j["kyc_attributes"].push_back({{"name", a.name},
                                       {"categories", a.categories},
                                       {"normal_dist", a.normal_dist},
                                       {"alert_dist", a.alert_dist}});
    j["n_fis"] = cfg.n_fis;
    if (!cfg.fi_weights.empty()) j["fi_weights"] = cfg.fi_weights;
    j["windows"] = {{"train_start", cfg.windows.train_start},
                    {"train_end", cfg.windows.train_end},
                    {"test_start", cfg.windows.test_start},
                    {"test_end", cfg.windows.test_end},
                    {"m", cfg.windows.m_subwindows},
                    {"validation_fraction", cfg.windows.validation_fraction}};
    j["noise"] = {{"labeled_fraction", cfg.noise.labeled_fraction},
                  {"flip_prob_benign", cfg.noise.flip_prob_benign},
                  {"flip_prob_alert", cfg.noise.flip_prob_alert},
                  {"typology_flip_prob", cfg.noise.typology_flip_prob},
                  {"neighbor_flag_prob", cfg.noise.neighbor_flag_prob}};
    return j.dump(2);
}

std::uint64_t config_hash(const SimulationConfig& cfg) {
    std::string s = dump_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace amlgen
