#pragma once

#include <vector>

#include "imcf/profile_core.hpp"

namespace imcf {

/// lambda (n-1) / (lambda (n-1) - 1). Throws DomainError when lambda (n-1) <= 1.
double alpha0(const Parameters& params);

/// r fr / f at r, from eval(). Throws ZeroHeight near the zero crossing of f.
double q_of(const RadialProfile& profile, double r);

struct QSample {
    double r = 0.0;
    double q = 0.0;
};

/// q on radii r_max * 10^(-k/per_decade), k >= 0, keeping only radii with f > 0; increasing r.
std::vector<QSample> q_trace(const RadialProfile& profile, int per_decade = 24);

struct AsymptoticsReport {
    double alpha0 = 0.0;
    /// The radii feeding the extrapolation: 13 points, six per decade, over the last two decades.
    std::vector<QSample> q_samples;
    double q_limit_estimate = 0.0;
    /// Spread of the last three values of the final elimination level.
    double extrapolation_uncertainty = 0.0;
    /// q(r) ~ q_inf + c r^-p fitted on the final samples; informational only.
    double fitted_order = 0.0;
    double fitted_constant = 0.0;
    /// Least-squares slope of log f against log r over the nodes of the final decade.
    double fit_exponent = 0.0;
    double q_at_r_max = 0.0;
    /// |q_limit_estimate - alpha0| <= max(3 * extrapolation_uncertainty, 1e-3).
    bool pass = false;
};

/// Limit of q from three levels of repeated Aitken elimination over geometric triples.
/// Throws DomainError outside lambda (n-1) > 1 and InsufficientRange unless f > 0 over the last
/// two decades of radii.
AsymptoticsReport estimate_limit(const RadialProfile& profile, const Parameters& params);

/// Result of the band-entry check: after q first enters [alpha0 - eps, alpha0 + eps] on the
/// sampled radii, does it stay there?
struct BandCheck {
    bool entered = false;
    double entry_r = 0.0;
    bool stays = true;
    double exit_r = 0.0;
};

BandCheck q_band_check(const std::vector<QSample>& samples, double alpha0, double eps);

/// Centered difference of q over [r - stencil, r + stencil] minus
///
///   (q/r) { (1+fr^2) [ q (1 + fr^-2) / (lambda (q-1)) - (n-1) ] + 1 - q }
///
/// Throws ZeroHeight (via q_of) and DomainError when fr <= 0 or q <= 1 at r.
double q_ode_residual(const RadialProfile& profile, double r, double stencil);

}  // namespace imcf
