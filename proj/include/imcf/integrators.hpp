#pragma once

#include <array>

#include "imcf/profile_core.hpp"

namespace imcf::ode {

/// (f, f_r) as a first-order system in r.
using State = std::array<double, 2>;

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// First-order system y' = F(r, y) in two unknowns.
class System {
public:
    virtual ~System() = default;
    virtual State rhs(double r, const State& y) const = 0;
    virtual Matrix2 jacobian(double r, const State& y) const = 0;
    /// Largest eigenvalue modulus of the Jacobian.
    double spectral_radius(double r, const State& y) const;
    /// Profile point (f, fr, frr) represented by the state.
    virtual ProfilePoint point(double r, const State& y) const = 0;
};

/// y = (f, fr): f' = fr, fr' = ode_rhs(r, f, fr).
class ProfileSystem final : public System {
public:
    explicit ProfileSystem(const Parameters& params) : params_(params) {}

    State rhs(double r, const State& y) const override;
    Matrix2 jacobian(double r, const State& y) const override;
    ProfilePoint point(double r, const State& y) const override;

private:
    Parameters params_;
};

/// Far-field variables y = (f, v) for f > 0, with s = f/r, q = r fr / f and
/// v = (q - alpha0) s^2. Along the solution q - alpha0 decays like fr^-2, so in (f, fr) the
/// right-hand side cancels to roundoff at large r while v stays of order one.
///
///   f' = q s
///   v' = s^2 (u' + 2u(q-1)/r),  u = v/s^2,  q = alpha0 + u
///   u' = (q/r) { T / (lambda (q-1)) + 1 - q },
///   T  = q + q/(qs)^2 - (beta-1)(u + q^2 v),  beta = lambda (n-1)
///
/// Requires lambda (n-1) > 1. Stages with f <= 0 or q <= 1 throw SingularDenominator.
class FarFieldSystem final : public System {
public:
    explicit FarFieldSystem(const Parameters& params);

    State rhs(double r, const State& y) const override;
    /// Forward-difference Jacobian.
    Matrix2 jacobian(double r, const State& y) const override;
    ProfilePoint point(double r, const State& y) const override;

    /// (f, v) from (f, fr); requires f > 0.
    State from_profile(double r, double f, double fr) const;
    double alpha0() const noexcept { return alpha0_; }

private:
    struct Derived {
        double s, u, q, du;
    };
    Derived derive(double r, const State& y) const;

    Parameters params_;
    double beta_;
    double alpha0_;
};

struct StepResult {
    bool ok = false;
    State y{};
    /// Local error estimate (absolute, per component).
    State err{};
    /// Set when a stage hit w <= 0.
    bool singular = false;
    double singular_r = 0.0;
};

/// Dormand-Prince 5(4) embedded pair, propagating the 5th-order solution.
class DormandPrince54 {
public:
    static constexpr int kOrder = 5;
    StepResult step(const System& sys, double r, const State& y, double h) const;
};

/// Three-stage Radau IIA (order 5, L-stable) solved by simplified Newton iteration.
/// The error estimate comes from step doubling: one step of h against two of h/2,
/// scaled by 1/(2^5 - 1); the two half steps are propagated.
class RadauIIA5 {
public:
    static constexpr int kOrder = 5;
    StepResult step(const System& sys, double r, const State& y, double h,
                    double abs_tol, double rel_tol) const;

    /// Single Radau step without error estimate; ok=false when Newton fails.
    StepResult single(const System& sys, double r, const State& y, double h,
                      double abs_tol, double rel_tol) const;
};

/// max_i |err_i| / (abs_tol + rel_tol * max(|y0_i|, |y1_i|)).
double error_norm(const State& err, const State& y0, const State& y1, double abs_tol, double rel_tol);

}  // namespace imcf::ode
