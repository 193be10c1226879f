#pragma once

#include <string>
#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/simulation.hpp"

namespace amlgen {

/// Aggregated view of the log over a step window [w_start, w_end), globally
/// or restricted to one FI's visible records.
struct WindowedGraph {
    int w_start = 0;
    int w_end = 0;
    int scope_fi = -1;  // -1 = global
    std::vector<int> nodes;   // sorted account ids active in the window
    std::vector<char> labels; // parallel: 1 iff an incident record is SAR
    std::vector<const TransactionRecord*> records;  // retained, log order
    std::vector<std::pair<int, int>> edges;         // distinct internal pairs
    std::vector<int> edge_mult;                     // transaction multiplicity
};

WindowedGraph aggregate(const std::vector<TransactionRecord>& log, int w_start, int w_end,
                        int scope_fi = -1);

inline constexpr int kFeaturesPerWindow = 19;
/// Base feature names, one sub-window block; exported columns append _w{k}.
const std::vector<std::string>& feature_names();

struct FeatureRow {
    int account = 0;
    int fi = 0;
    int label = 0;
    std::vector<double> values;  // m * kFeaturesPerWindow
};

struct FeatureTable {
    std::vector<std::string> columns;
    std::vector<FeatureRow> rows;  // account-id order
};

/// Per-node sub-windowed features. Only bank-visible (TRANSFER) records feed
/// the statistics; inactive sub-windows contribute zero blocks. std uses the
/// population convention.
FeatureTable compute_features(const WindowedGraph& wg, const std::vector<AccountInfo>& accounts,
                              const std::vector<LifecycleEvent>& events, int m);

struct TrainTest {
    FeatureTable train;
    FeatureTable test;
    std::vector<FeatureTable> train_per_fi;
    std::vector<FeatureTable> test_per_fi;
    std::vector<int> validation_nodes;  // held-out subset of train accounts
    WindowedGraph train_graph;
};

/// Windowed train/test tables (global and per FI) plus the validation node
/// holdout drawn on a dedicated substream.
TrainTest build_train_test(const std::vector<TransactionRecord>& log,
                           const std::vector<AccountInfo>& accounts,
                           const std::vector<LifecycleEvent>& events,
                           const SimulationConfig& cfg, bool per_fi = true);

}  // namespace amlgen
