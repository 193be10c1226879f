#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/graph.hpp"
#include "amlgen/patterns.hpp"
#include "amlgen/rng.hpp"

namespace amlgen {

inline constexpr int SOURCE_ID = -1;  // salary / illicit-funds origin
inline constexpr int SINK_ID = -2;    // external spending recipient

enum class Channel { Transfer, Cash };

struct TransactionRecord {
    std::int64_t tx_id = 0;
    int step = 0;
    int src = 0;  // account id, or SOURCE_ID
    int dst = 0;  // account id, or SINK_ID
    Cents amount = 0;
    Channel channel = Channel::Transfer;
    bool is_sar = false;
    int pattern_id = -1;  // -1 = spontaneous / salary / spending
    int src_fi = -1;
    int dst_fi = -1;
};

struct AccountInfo {
    int id = 0;
    int fi = 0;
    int age = 0;
    bool is_alert = false;
    int open_step = 0;
    double mu_loc = 0.0;    // lognormal annual-salary params
    double sigma = 0.0;
    std::vector<int> kyc;   // category index per configured attribute
};

struct LifecycleEvent {
    int account = 0;
    int step = 0;
    int kind = 0;  // 0 = phone change, 1 = bank change
};

struct SimResult {
    std::vector<TransactionRecord> records;
    std::vector<AccountInfo> accounts;
    std::vector<LifecycleEvent> events;
    std::vector<Cents> final_bank;
    std::vector<Cents> final_cash;
};

/// Blueprint graph plus the fitted/injected pattern instances, all scheduled.
struct World {
    BlueprintGraph graph;
    std::vector<PatternInstance> normal_instances;
    std::vector<PatternInstance> alert_instances;
    std::vector<std::tuple<PatternKind, int, int>> census;  // kind, requested, placed
};

/// Lognormal annual-salary parameters from a (median, mean) pair by moment
/// matching: mu = ln(median), sigma^2 = 2 (ln mean - ln median).
std::pair<double, double> lognormal_params(double median, double mean);

/// Truncated Gaussian draw in cents over [min_amount, min(cap, max_amount)],
/// by rejection with bounded retries then clamping. Empty when cap is below
/// the model minimum.
std::optional<Cents> sample_amount(const AmountModel& model, Cents cap, RandomStream& rng);

/// Degree sampling, wiring, normal-pattern fitting, alert injection,
/// scheduling and pruning, end to end.
World build_world(const SimulationConfig& cfg, RandomStream& rng);

/// Demographics (age, salary params), FI assignment and KYC attributes.
std::vector<AccountInfo> assign_demographics(const SimulationConfig& cfg, int n,
                                             const std::vector<int>& ml_count,
                                             RandomStream& rng);

/// Time-stepped execution of the configured horizon over a built world.
SimResult run_simulation(const SimulationConfig& cfg, const World& world, RandomStream& rng);

/// Convenience: build_world + run_simulation off the config's master seed.
SimResult generate(const SimulationConfig& cfg, World* world_out = nullptr);

}  // namespace amlgen
