#pragma once

namespace amlgen {

/// Riemann zeta for real s > 1, accurate to ~1e-12.
double riemann_zeta(double s);

/// Mean of the discretized Pareto degree model: loc + scale * (zeta(gamma) - 1).
double pareto_mean_degree(double loc, double scale, double gamma);

/// Backsolve the scale parameter from a target mean degree.
/// Throws std::invalid_argument for gamma <= 1 or target <= loc.
double derive_scale(double target_mean_degree, double loc, double gamma);

}  // namespace amlgen
