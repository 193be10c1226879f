#include "amlgen/degree.hpp"

#include <algorithm>
#include <cmath>

namespace amlgen {

double pareto_pmf_raw(int k, const DegreeParams& p) {
    if (k < p.loc) return 0.0;
    double u = static_cast<double>(k - p.loc) / p.scale;
    return std::pow(u + 1.0, -p.gamma) - std::pow(u + 2.0, -p.gamma);
}

namespace {

/// Integral bound on the raw mass of [first_k, inf). The summand at k is
/// f(u) = (u+1)^-g - (u+2)^-g with u = (k-loc)/scale, decreasing in k, so
/// the sum is sandwiched by scale * integral of f; we use the midpoint form
/// which is accurate well past the table horizon used here.
double raw_tail(int first_k, const DegreeParams& p) {
    double g = p.gamma;
    double u = (static_cast<double>(first_k - p.loc) - 0.5) / p.scale;
    if (u < 0.0) u = 0.0;
    double a = std::pow(u + 1.0, 1.0 - g) - std::pow(u + 2.0, 1.0 - g);
    return p.scale * a / (g - 1.0);
}

}  // namespace

double pareto_pmf_total(const DegreeParams& p) {
    double sum = 0.0;
    int k = p.loc;
    // Sum until terms are negligible relative to the running total, then
    // close with the integral tail.
    for (; k < p.loc + 200000; ++k) {
        double t = pareto_pmf_raw(k, p);
        sum += t;
        if (t < 1e-14 * (sum + 1e-300)) break;
    }
    return sum + raw_tail(k + 1, p);
}

DegreeSampler::DegreeSampler(const DegreeParams& params)
    : params_(params), total_(pareto_pmf_total(params)) {
    cdf_.reserve(64);
    double c = 0.0;
    for (int i = 0; i < 64; ++i) {
        c += pareto_pmf_raw(params_.loc + i, params_) / total_;
        cdf_.push_back(c);
    }
}

double DegreeSampler::pmf(int k) const { return pareto_pmf_raw(k, params_) / total_; }

double DegreeSampler::mean() const {
    double m = 0.0;
    for (int k = params_.loc;; ++k) {
        double p = pmf(k);
        m += k * p;
        if (k > params_.loc + 64 && p * k < 1e-12) break;
        if (k > params_.loc + 5000000) break;
    }
    return m;
}

void DegreeSampler::extend_table(double target_cdf) {
    while (cdf_.back() < target_cdf && cdf_.size() < (1u << 24)) {
        int k = params_.loc + static_cast<int>(cdf_.size());
        cdf_.push_back(cdf_.back() + pareto_pmf_raw(k, params_) / total_);
    }
}

int DegreeSampler::sample(RandomStream& rng) {
    double u = rng.next_double();
    if (u >= cdf_.back()) extend_table(u);
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) it = std::prev(cdf_.end());
    return params_.loc + static_cast<int>(it - cdf_.begin());
}

DegreeSequences sample_degree_sequences(int n, const DegreeParams& params, RandomStream& rng) {
    DegreeSampler sampler(params);
    DegreeSequences seq;
    seq.in_degrees.resize(n);
    seq.out_degrees.resize(n);
    auto rin = rng.derive("degree-in");
    auto rout = rng.derive("degree-out");
    long long sum_in = 0, sum_out = 0;
    for (int i = 0; i < n; ++i) {
        seq.in_degrees[i] = sampler.sample(rin);
        seq.out_degrees[i] = sampler.sample(rout);
        sum_in += seq.in_degrees[i];
        sum_out += seq.out_degrees[i];
    }
    auto rbal = rng.derive("degree-balance");
    auto shrink = [&](std::vector<int>& deg, long long excess) {
        int guard = 0;
        while (excess > 0 && guard < 100000000) {
            int i = static_cast<int>(rbal.uniform_int(static_cast<std::uint64_t>(n)));
            if (deg[i] > params.loc) {
                --deg[i];
                --excess;
            }
            ++guard;
        }
    };
    if (sum_in > sum_out)
        shrink(seq.in_degrees, sum_in - sum_out);
    else if (sum_out > sum_in)
        shrink(seq.out_degrees, sum_out - sum_in);
    return seq;
}

}  // namespace amlgen
