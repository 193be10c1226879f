#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amlgen/calibrate.hpp"
#include "amlgen/features.hpp"
#include "amlgen/noise.hpp"
#include "amlgen/simulation.hpp"
#include "amlgen/stats.hpp"

namespace amlgen {

/// Process exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitDegenerate = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// row-level CSV access used by the commands and by external consumers
void write_transactions_csv(const std::string& path,
                            const std::vector<TransactionRecord>& records);
std::vector<TransactionRecord> read_transactions_csv(const std::string& path);

void write_accounts_csv(const std::string& path, const std::vector<AccountInfo>& accounts,
                        const std::vector<KycAttribute>& attrs);
std::vector<AccountInfo> read_accounts_csv(const std::string& path);

void write_patterns_csv(const std::string& path, const std::vector<PatternInstance>& normal,
                        const std::vector<PatternInstance>& alert);
std::vector<PatternInstance> read_patterns_csv(const std::string& path);

void write_events_csv(const std::string& path, const std::vector<LifecycleEvent>& events);
std::vector<LifecycleEvent> read_events_csv(const std::string& path);

void write_feature_table_csv(const std::string& path, const FeatureTable& table,
                             const NoisyLabels* labels, bool blind);

struct FeaturesOptions {
    std::string transactions_path;
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> labeled_fraction;
    std::optional<double> class_noise;
    std::optional<double> typology_noise;
    std::optional<double> neighbor_noise;
    bool blind = false;
    int fi = -1;       // export a single FI's tables
    bool all_fi = false;
};

struct CalibrateOptions {
    std::string config_path;
    std::string out_dir;
    std::string mode = "knowledge-free";  // or "data-informed"
    int budget = 10;
    double fpr_target = 0.98;
    std::string reference_stats_path;
    std::optional<std::uint64_t> seed;
};

int cmd_generate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed);
int cmd_features(const FeaturesOptions& opt);
int cmd_calibrate(const CalibrateOptions& opt);
int cmd_stats(const std::string& transactions_path, const std::string& out_dir, int dot_nodes);

}  // namespace amlgen
