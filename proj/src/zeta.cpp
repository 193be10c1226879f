#include "amlgen/zeta.hpp"

#include <cmath>
#include <stdexcept>

namespace amlgen {

double riemann_zeta(double s) {
    if (s <= 1.0) throw std::invalid_argument("riemann_zeta: requires s > 1");
    // Direct sum plus Euler-Maclaurin tail correction.
    const int n = 20000;
    double sum = 0.0;
    for (int k = n - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    const double N = static_cast<double>(n);
    double tail = std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
    tail += s / 12.0 * std::pow(N, -s - 1.0);
    tail -= s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(N, -s - 3.0);
    return sum + tail;
}

double pareto_mean_degree(double loc, double scale, double gamma) {
    return loc + scale * (riemann_zeta(gamma) - 1.0);
}

double derive_scale(double target_mean_degree, double loc, double gamma) {
    if (gamma <= 1.0)
        throw std::invalid_argument("derive_scale: gamma must exceed 1 (zeta series diverges)");
    if (target_mean_degree <= loc)
        throw std::invalid_argument("derive_scale: target mean degree must exceed loc");
    return (target_mean_degree - loc) / (riemann_zeta(gamma) - 1.0);
}

}  // namespace amlgen
