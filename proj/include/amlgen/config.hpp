#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace amlgen {

/// Monetary amounts are stored as an integer number of cents so that
/// conservation identities can be checked exactly.
using Cents = std::int64_t;

inline Cents to_cents(double units) {
    return static_cast<Cents>(std::llround(units * 100.0));
}
inline double to_units(Cents c) { return static_cast<double>(c) / 100.0; }

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PatternKind {
    Direct,
    Mutual,
    Periodic,
    Forward,
    FanIn,
    FanOut,
    Cycle,
    ScatterGather,
    GatherScatter,
    StackedBipartite,
};

enum class TimingScheme { FixedInterval, RandomInterval, Unordered, Simultaneous };

const char* to_string(PatternKind k);
const char* to_string(TimingScheme s);
PatternKind pattern_kind_from_string(const std::string& s);
TimingScheme timing_scheme_from_string(const std::string& s);

/// Structural minimum member count for a pattern kind.
int pattern_min_size(PatternKind k, int layers);
/// Kinds whose size is fixed by the template (direct/mutual/periodic/forward).
bool pattern_fixed_size(PatternKind k);

struct DegreeParams {
    int loc = 1;
    double scale = 1.0;
    double gamma = 2.0;
};

struct TypologySpec {
    PatternKind kind = PatternKind::FanOut;
    bool is_alert = false;
    int count = 0;
    int min_size = 0;
    int max_size = 0;
    TimingScheme timing = TimingScheme::RandomInterval;
    int layers = 3;     // stacked_bipartite only
    int start = -1;     // schedule window, inclusive steps; -1 = full horizon
    int end = -1;
};

/// Truncated-Gaussian amount model; all values in currency units.
struct AmountModel {
    double mean = 0.0;
    double std_dev = 0.0;
    double min_amount = 1.0;
    double max_amount = 150000.0;
};

struct SalaryRow {
    int age_min = 0;
    int age_max = 0;
    double share = 0.0;    // population share
    double median = 0.0;   // annual salary, currency units
    double mean = 0.0;     // annual salary, currency units
};

struct GaussianModel {
    double mean = 0.0;
    double std_dev = 0.0;
};

struct LifecycleModels {
    GaussianModel normal_phone{1460.0, 365.0};
    GaussianModel alert_phone{1272.0, 281.0};
    GaussianModel normal_bank{1460.0, 365.0};
    GaussianModel alert_bank{1335.0, 368.0};
};

struct KycAttribute {
    std::string name;
    std::vector<std::string> categories;
    std::vector<double> normal_dist;
    std::vector<double> alert_dist;
};

struct WindowSpec {
    int train_start = 0;
    int train_end = 0;  // exclusive; [start, end) covers end-start steps
    int test_start = 0;
    int test_end = 0;
    int m_subwindows = 4;
    double validation_fraction = 0.25;
};

struct NoiseSpec {
    double labeled_fraction = 1.0;
    double flip_prob_benign = 0.0;
    double flip_prob_alert = 0.0;
    double typology_flip_prob = 0.0;
    double neighbor_flag_prob = 0.0;
};

struct SimulationConfig {
    int schema_version = 1;
    int n_accounts = 0;
    int n_steps = 0;
    std::uint64_t master_seed = 0;

    DegreeParams degree_params;
    std::vector<TypologySpec> normal_typologies;
    std::vector<TypologySpec> alert_typologies;
    double reuse_p = 0.218;

    AmountModel normal_tx_model{637.0, 300.0, 1.0, 150000.0};
    AmountModel alert_tx_model{799.0, 163.0, 1.0, 150000.0};
    AmountModel normal_spend_model{500.0, 100.0, 1.0, 150000.0};
    AmountModel alert_spend_model{328.0, 105.0, 1.0, 150000.0};

    std::vector<SalaryRow> salary_table;
    int spend_window = 28;       // T_w, days
    double spend_scale = 500.0;  // sigmoid scale, currency units
    int payday_period = 28;

    double keep_fraction = 0.1;
    double cash_placement_fraction = 0.5;
    double p_spend_bank = 0.8;
    double spontaneous_tx_per_account_month = 4.0;

    LifecycleModels lifecycle;
    std::vector<KycAttribute> kyc_attributes;

    int n_fis = 1;
    std::vector<double> fi_weights;  // empty = uniform

    WindowSpec windows;
    NoiseSpec noise;
};

/// Parse and validate a JSON configuration document. Omitted optional fields
/// take the documented defaults; violations raise ConfigError naming the
/// offending field.
SimulationConfig load_config(const std::string& text);
SimulationConfig load_config_file(const std::string& path);

/// Serialize back to a canonical JSON document (used for patched configs).
std::string dump_config(const SimulationConfig& cfg);

/// Stable content hash of the canonical serialization.
std::uint64_t config_hash(const SimulationConfig& cfg);

/// Validate an already-built config (load_config calls this).
void validate_config(const SimulationConfig& cfg);

}  // namespace amlgen
