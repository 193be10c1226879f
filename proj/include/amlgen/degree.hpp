#pragma once

#include <cstdint>
#include <vector>

#include "amlgen/config.hpp"
#include "amlgen/rng.hpp"

namespace amlgen {

/// Probability mass at degree k under the discretized Pareto model, before
/// normalization: ((k-loc)/scale + 1)^-gamma - ((k-loc)/scale + 2)^-gamma.
/// For scale = 1 the series telescopes and already sums to 1.
double pareto_pmf_raw(int k, const DegreeParams& p);

/// Total raw mass over k >= loc (exact series sum, converged numerically).
double pareto_pmf_total(const DegreeParams& p);

/// Sampler over the normalized degree distribution. A cumulative table is
/// grown lazily; the infinite tail beyond the table is bounded by an
/// integral estimate so every degree remains reachable.
class DegreeSampler {
public:
    explicit DegreeSampler(const DegreeParams& params);

    int sample(RandomStream& rng);

    /// Normalized probability mass at degree k.
    double pmf(int k) const;

    double mean() const;

private:
    double tail_mass(int first_k) const;  // upper-region mass of [first_k, inf)
    void extend_table(double target_cdf);

    DegreeParams params_;
    double total_;
    std::vector<double> cdf_;  // cdf_[i] = P[deg <= loc + i]
};

/// Draw an in-degree and out-degree sequence for n nodes and balance the two
/// sums by decrementing unit degrees from uniformly chosen nodes on the
/// larger side (never below loc). Returns {in_degrees, out_degrees}.
struct DegreeSequences {
    std::vector<int> in_degrees;
    std::vector<int> out_degrees;
};

DegreeSequences sample_degree_sequences(int n, const DegreeParams& params, RandomStream& rng);

}  // namespace amlgen
