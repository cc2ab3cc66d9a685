#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace imcf {

/// Dimension n, self-similar rate lambda and origin height mu of the profile problem.
struct Parameters {
    int n = 2;
    double lambda = 1.0;
    double mu = -1.0;
    /// Set by validate(): true iff lambda > 1/(n-1), the regime with a global convex solution.
    bool global_regime = false;
};

/// Checks n >= 2, lambda > 0, mu < 0 and fills in `global_regime`.
Parameters validate(Parameters params);

/// True iff lambda*(n-1) > 1.
bool is_global_regime(int n, double lambda) noexcept;

/// Right-hand side of the radial profile equation solved for f_rr:
///
///   f_rr = (1/lambda) (1+fr^2)^2 / (r fr - f) - ((n-1)/r) (1+fr^2) fr
///
/// Throws SingularRadius for r <= 0 and SingularDenominator when r*fr - f <= 0.
double ode_rhs(const Parameters& params, double r, double f, double fr);

/// Partial derivatives of ode_rhs with respect to f and fr.
struct RhsJacobian {
    double d_f = 0.0;
    double d_fr = 0.0;
};
RhsJacobian ode_rhs_jacobian(const Parameters& params, double r, double f, double fr);

/// Limit of f_rr (and of fr/r) at the origin, 1/(n lambda |mu|).
double origin_curvature(const Parameters& params) noexcept;

struct ProfilePoint {
    double r = 0.0;
    double f = 0.0;
    double fr = 0.0;
    double frr = 0.0;

    /// r*fr - f, the denominator of the profile equation.
    double w() const noexcept { return r * fr - f; }
};

enum class Provenance { OriginSeries, Picard, Integrator };

std::string to_string(Provenance p);

/// Inclusive index range of points produced by one construction.
struct ProfileSegment {
    std::size_t first = 0;
    std::size_t last = 0;
    Provenance provenance = Provenance::Integrator;
};

/// Sampled profile on [0, r_max]. Immutable once built.
class RadialProfile {
public:
    /// Requires a non-empty point list starting at r = 0 with strictly increasing radii.
    /// An empty segment list is replaced by a single integrator segment spanning all points.
    RadialProfile(Parameters params, std::vector<ProfilePoint> points,
                  std::vector<ProfileSegment> segments = {});

    const Parameters& params() const noexcept { return params_; }
    const std::vector<ProfilePoint>& points() const noexcept { return points_; }
    const std::vector<ProfileSegment>& segments() const noexcept { return segments_; }
    std::size_t size() const noexcept { return points_.size(); }
    double r_max() const noexcept { return points_.back().r; }

    /// Index i with r_i <= r < r_{i+1}; the last interval when r == r_max.
    std::size_t bracket(double r) const;

private:
    Parameters params_;
    std::vector<ProfilePoint> points_;
    std::vector<ProfileSegment> segments_;
};

/// Interpolated point. f is cubic Hermite on (f, fr); fr is cubic Hermite on (fr, frr) and frr
/// is the derivative of that cubic. Nodes are reproduced exactly.
ProfilePoint eval(const RadialProfile& profile, double r);

enum class GridPolicy { Uniform, Log, AdaptiveNative };

std::string to_string(GridPolicy g);
GridPolicy grid_policy_from_string(const std::string& s);

/// Certified runs abort on the first structural violation; exploratory runs record and continue.
enum class RunMode { Certified, Exploratory };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct SolverConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    /// Handoff radius from the origin construction to the integrator. Unset means
    /// 0.1 * min(1, |mu|).
    std::optional<double> r_switch;
    int picard_max_iter = 200;
    double picard_contraction_guard = 2.0 / 3.0;
    double r_max = 100.0;
    GridPolicy output_grid = GridPolicy::Log;
    /// Points per decade for Log, number of intervals for Uniform; ignored for AdaptiveNative.
    int grid_density = 240;
    RunMode mode = RunMode::Certified;
};

/// Validates tolerances and radii; returns a copy with r_switch resolved.
SolverConfig validate(const SolverConfig& config, const Parameters& params);

double default_r_switch(const Parameters& params) noexcept;

}  // namespace imcf
