#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amlgen/simulation.hpp"

namespace amlgen {

/// Deterministic dataset statistics computed from a transaction log alone.
/// Node class labels are recovered from the SAR edge flags; degrees count
/// distinct internal counterparty pairs.
struct StatsReport {
    int n_accounts = 0;
    std::int64_t n_records = 0;
    std::int64_t n_internal = 0;  // account-to-account transfers
    std::int64_t n_sar = 0;
    double benign_share = 0.0;  // over all records
    int n_alert_accounts = 0;

    std::vector<std::int64_t> in_hist, out_hist, total_hist;
    std::vector<double> degree_cdf;  // total degree
    double mean_in_degree = 0.0;
    double mean_out_degree = 0.0;
    double fitted_gamma = 0.0;  // log-log least squares on the total-degree PMF
    double fitted_scale = 0.0;  // backsolved from the mean degree

    double homophily_normal = 0.0;  // out-neighbor label agreement
    double homophily_ml = 0.0;

    double mean_amount_normal = 0.0;  // internal transfers, currency units
    double mean_amount_alert = 0.0;
    double mean_amount_all = 0.0;
    std::vector<std::int64_t> amount_hist_normal, amount_hist_alert;  // 100 bins
    double amount_bin_width = 0.0;
};

StatsReport compute_stats(const std::vector<TransactionRecord>& records);

/// DOT rendering of the internal-edge subgraph induced by the max_nodes
/// lowest account ids (SAR edges marked).
std::string to_dot(const std::vector<TransactionRecord>& records, int max_nodes);

}  // namespace amlgen
