#pragma once

#include <vector>

#include "imcf/profile_core.hpp"

namespace imcf {

/// Candidate pair (g, h) ~ (f, f_r) sampled on the uniform grid [0, eps].
struct PicardState {
    double eps = 0.0;
    std::vector<double> grid;
    std::vector<double> g;
    std::vector<double> h;

    /// Constant state (mu, 0) on `intervals` + 1 uniform nodes.
    static PicardState constant(const Parameters& params, double eps, std::size_t intervals);
};

/// max( sup|g1 - g2| , sup_{s>0} |h1 - h2| / sqrt(s) ); the s = 0 node is excluded from the
/// weighted part.
double weighted_distance(const PicardState& a, const PicardState& b);

/// Largest ratio d[k+1]/d[k] of successive iterate distances, skipping the first jump away from
/// the start state and any pair whose newer distance is at or below `noise_floor`.
double contraction_ratio(const std::vector<double>& distances, double noise_floor);

/// Weighted distance from the constant state (mu, 0).
double distance_from_origin_state(const Parameters& params, const PicardState& s);

struct PicardDiagnostics {
    int iterations = 0;
    std::vector<double> distances;
    /// Largest successive-distance ratio over the tail of the run.
    double observed_ratio = 0.0;
    bool converged = false;
    /// Interval length actually used and number of halvings before it was accepted.
    double eps = 0.0;
    int restarts = 0;
    std::size_t nodes = 0;
    /// Smallest s*h(s) - g(s) over the nodes of the accepted iterates.
    double min_denominator = 0.0;
};

/// One application of the origin fixed-point map:
///
///   Phi1(r) = mu + int_0^r h
///   Phi2(r) = (1/r) { E(r) - ((n-2)/r^(n-2)) int_0^r rho^(n-3) E(rho) drho }
///   E(r)    = (1/lambda) int_0^r s (1+h^2)^2 / (s h - g) ds - (n-1) int_0^r h^3 ds
///
/// Throws DenominatorCollapse if s*h - g <= 0 at a node, BallEscape if the image is farther
/// than `ball_radius` (default |mu|/4) from (mu, 0) in the weighted norm.
PicardState phi_step(const Parameters& params, const PicardState& state, double ball_radius = -1.0);

struct OriginSolution {
    RadialProfile profile;
    PicardDiagnostics diagnostics;
};

/// Fixed point of phi_step on [0, eps], eps starting at min(1, |mu|/4) and halved whenever the
/// image leaves the ball, the iteration stalls, or the tail contraction ratio exceeds
/// config.picard_contraction_guard. The returned profile covers the whole accepted interval.
OriginSolution solve_origin(const Parameters& params, const SolverConfig& config);

/// fr(r)/r extrapolated to r = 0 by Richardson elimination of the r^2 and r^4 terms over the
/// radii r0, r0/2, r0/4.
double origin_curvature_estimate(const RadialProfile& profile, double r0);

/// Number of grid intervals used for an interval of length eps at tolerance abs_tol (even).
std::size_t picard_intervals(double eps, double abs_tol);

/// Coefficients a_0..a_order of f(r) = sum a_k r^k near the origin (order >= 2).
std::vector<double> taylor_bootstrap(const Parameters& params, int order);

/// Ratio-test estimate of the series' radius of convergence from the trailing nonzero
/// coefficients; +inf when too few nonzero coefficients are available.
double series_radius_estimate(const std::vector<double>& coefficients);

/// f and f_r from the truncated series.
ProfilePoint evaluate_series(const Parameters& params, const std::vector<double>& coefficients,
                             double r);

}  // namespace imcf
