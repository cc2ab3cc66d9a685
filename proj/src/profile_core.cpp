#include "imcf/profile_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imcf/errors.hpp"

namespace imcf {

bool is_global_regime(int n, double lambda) noexcept {
    return lambda * static_cast<double>(n - 1) > 1.0;
}

Parameters validate(Parameters params) {
    if (params.n < 2) {
        throw DomainError("n must be >= 2 (got " + std::to_string(params.n) + ")");
    }
    if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
        throw DomainError("lambda must be a finite positive number (got " +
                          std::to_string(params.lambda) + ")");
    }
    if (!(params.mu < 0.0) || !std::isfinite(params.mu)) {
        throw DomainError("mu must be a finite negative number (got " + std::to_string(params.mu) + ")");
    }
    params.global_regime = is_global_regime(params.n, params.lambda);
    return params;
}

double ode_rhs(const Parameters& params, double r, double f, double fr) {
    if (!(r > 0.0)) {
        throw SingularRadius("ode_rhs requires r > 0 (got " + std::to_string(r) + ")");
    }
    const double w = r * fr - f;
    if (!(w > 0.0)) {
        throw SingularDenominator(r, w);
    }
    const double p = 1.0 + fr * fr;
    return p * p / (params.lambda * w) - static_cast<double>(params.n - 1) / r * p * fr;
}

RhsJacobian ode_rhs_jacobian(const Parameters& params, double r, double f, double fr) {
    if (!(r > 0.0)) {
        throw SingularRadius("ode_rhs_jacobian requires r > 0");
    }
    const double w = r * fr - f;
    if (!(w > 0.0)) {
        throw SingularDenominator(r, w);
    }
    const double p = 1.0 + fr * fr;
    const double a = p * p / params.lambda;
    RhsJacobian jac;
    jac.d_f = a / (w * w);
    jac.d_fr = 4.0 * fr * p / (params.lambda * w) - a * r / (w * w) -
               static_cast<double>(params.n - 1) / r * (1.0 + 3.0 * fr * fr);
    return jac;
}

double origin_curvature(const Parameters& params) noexcept {
    return 1.0 / (static_cast<double>(params.n) * params.lambda * std::abs(params.mu));
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::OriginSeries: return "origin-series";
        case Provenance::Picard: return "picard";
        case Provenance::Integrator: return "integrator";
    }
    return "unknown";
}

RadialProfile::RadialProfile(Parameters params, std::vector<ProfilePoint> points,
                             std::vector<ProfileSegment> segments)
    : params_(params), points_(std::move(points)), segments_(std::move(segments)) {
    if (points_.empty()) {
        throw Error("RadialProfile needs at least one point");
    }
    if (points_.front().r != 0.0) {
        throw Error("RadialProfile must start at r = 0");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i].r > points_[i - 1].r)) {
            throw Error("RadialProfile radii must be strictly increasing (index " +
                        std::to_string(i) + ")");
        }
    }
    if (segments_.empty()) {
        segments_.push_back({0, points_.size() - 1, Provenance::Integrator});
    }
    for (const auto& s : segments_) {
        if (s.first > s.last || s.last >= points_.size()) {
            throw Error("RadialProfile segment index out of range");
        }
    }
}

std::size_t RadialProfile::bracket(double r) const {
    if (points_.size() < 2) {
        return 0;
    }
    auto it = std::upper_bound(points_.begin(), points_.end(), r,
                               [](double x, const ProfilePoint& p) { return x < p.r; });
    std::size_t idx = static_cast<std::size_t>(std::distance(points_.begin(), it));
    if (idx == 0) {
        return 0;
    }
    return std::min(idx - 1, points_.size() - 2);
}

namespace {

// Cubic Hermite on [x0, x1] with values y and slopes d.
double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

double hermite_slope(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double g00 = 6.0 * t2 - 6.0 * t;
    const double g10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double g11 = 3.0 * t2 - 2.0 * t;
    return (g00 * (y0 - y1)) / h + g10 * d0 + g11 * d1;
}

}  // namespace

ProfilePoint eval(const RadialProfile& profile, double r) {
    if (!(r >= 0.0)) {
        throw OutOfRange("eval requires r >= 0 (got " + std::to_string(r) + ")");
    }
    if (r > profile.r_max()) {
        throw OutOfRange("eval radius " + std::to_string(r) + " beyond r_max " +
                         std::to_string(profile.r_max()));
    }
    const auto& pts = profile.points();
    if (pts.size() == 1) {
        return pts.front();
    }
    const std::size_t i = profile.bracket(r);
    const ProfilePoint& a = pts[i];
    const ProfilePoint& b = pts[i + 1];
    if (r == a.r) {
        return a;
    }
    if (r == b.r) {
        return b;
    }
    ProfilePoint out;
    out.r = r;
    out.f = hermite(a.r, b.r, a.f, b.f, a.fr, b.fr, r);
    out.fr = hermite(a.r, b.r, a.fr, b.fr, a.frr, b.frr, r);
    out.frr = hermite_slope(a.r, b.r, a.fr, b.fr, a.frr, b.frr, r);
    return out;
}

std::string to_string(GridPolicy g) {
    switch (g) {
        case GridPolicy::Uniform: return "uniform";
        case GridPolicy::Log: return "log";
        case GridPolicy::AdaptiveNative: return "adaptive-native";
    }
    return "unknown";
}

GridPolicy grid_policy_from_string(const std::string& s) {
    if (s == "uniform") return GridPolicy::Uniform;
    if (s == "log") return GridPolicy::Log;
    if (s == "adaptive-native" || s == "adaptive") return GridPolicy::AdaptiveNative;
    throw DomainError("unknown output grid policy '" + s + "'");
}

std::string to_string(RunMode m) {
    return m == RunMode::Certified ? "certified" : "exploratory";
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "certified") return RunMode::Certified;
    if (s == "exploratory") return RunMode::Exploratory;
    throw DomainError("unknown mode '" + s + "' (expected certified|exploratory)");
}

double default_r_switch(const Parameters& params) noexcept {
    return 0.1 * std::min(1.0, std::abs(params.mu));
}

SolverConfig validate(const SolverConfig& config, const Parameters& params) {
    SolverConfig out = config;
    if (!(out.abs_tol > 0.0) || !(out.rel_tol > 0.0)) {
        throw DomainError("abs_tol and rel_tol must be positive");
    }
    if (!out.r_switch) {
        out.r_switch = default_r_switch(params);
    }
    if (!(*out.r_switch > 0.0)) {
        throw DomainError("r_switch must be positive");
    }
    if (!(out.r_max >= *out.r_switch)) {
        throw DomainError("r_max must be >= r_switch (r_max = " + std::to_string(out.r_max) +
                          ", r_switch = " + std::to_string(*out.r_switch) + ")");
    }
    if (out.picard_max_iter < 1) {
        throw DomainError("picard_max_iter must be >= 1");
    }
    if (!(out.picard_contraction_guard > 0.0 && out.picard_contraction_guard < 1.0)) {
        throw DomainError("picard_contraction_guard must lie in (0, 1)");
    }
    if (out.output_grid != GridPolicy::AdaptiveNative && out.grid_density < 1) {
        throw DomainError("grid_density must be >= 1");
    }
    return out;
}

}  // namespace imcf
