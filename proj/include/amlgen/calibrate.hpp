#pragma once

#include <string>
#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/rng.hpp"

namespace amlgen {

struct Dimension {
    std::string path;  // SimulationConfig path, e.g. "amounts.alert.mean"
    double lo = 0.0;
    double hi = 0.0;
};

struct SearchSpace {
    std::vector<Dimension> dims;
};

/// Laundering-parameter dimensions searched by default.
SearchSpace default_search_space();

/// Set a search-space path on a config. Throws ConfigError for unknown paths.
void patch_config(SimulationConfig& cfg, const std::string& path, double value);

/// Shrink a config to a fidelity fraction of its accounts (typology counts
/// scaled along, floors applied).
SimulationConfig scale_config(const SimulationConfig& cfg, double fraction);

struct TrialRecord {
    int id = 0;
    std::vector<double> params;
    std::vector<double> objectives;
    double fidelity = 1.0;  // account fraction used
    std::uint64_t seed = 0;
    double ms = 0.0;
    bool degenerate = false;
};

/// True when a weakly dominates b with at least one strict improvement
/// (minimization).
bool dominates(const std::vector<double>& a, const std::vector<double>& b);

/// Insert a candidate, keeping only mutually nondominated members.
void archive_insert(std::vector<TrialRecord>& archive, TrialRecord candidate);

enum class CalibrationMode { KnowledgeFree, DataInformed };

struct ReferenceStats {
    std::vector<double> degree_cdf;  // P[total degree <= k], k = 0,1,...
    double mean_in_degree = 0.0;
    double mean_out_degree = 0.0;
    double mean_amount = 0.0;  // account-to-account, currency units
};

ReferenceStats load_reference_stats(const std::string& path);

inline constexpr double kDegenerateObjective = 1e9;

/// Generate at the given config and score it: knowledge-free returns
/// (|FPR - target|, importance-uniformity deviation); data-informed returns
/// (degree-CDF KS, normalized in/out-degree and amount gaps).
std::vector<double> evaluate_objective(const SimulationConfig& cfg, CalibrationMode mode,
                                       double fpr_target, const ReferenceStats* ref);

struct CalibrationResult {
    std::vector<TrialRecord> trials;    // every evaluation, journal order
    std::vector<TrialRecord> archive;   // nondominated full-fidelity trials
    SimulationConfig best_config;
    std::vector<double> best_params;
    bool all_degenerate = false;
};

/// Random search with successive-halving promotion: batches are evaluated at
/// low fidelity (10% accounts) and the top third by nondomination rank is
/// re-evaluated at full fidelity; budgets below one batch go straight to
/// full fidelity. Trial i's parameters depend only on (master seed, i), so a
/// smaller budget is a prefix of a larger one.
CalibrationResult optimize(const SimulationConfig& base_cfg, const SearchSpace& space,
                           CalibrationMode mode, int budget, double fpr_target,
                           const ReferenceStats* ref);

}  // namespace amlgen
