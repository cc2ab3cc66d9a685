#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/origin_picard.hpp"
#include "imcf/profile_core.hpp"

namespace imcf {

/// Data for one interior Picard window [r1, r1 + delta].
struct ExtensionWindow {
    double r1 = 0.0;
    double a0 = 0.0;  ///< f(r1)
    double b0 = 0.0;  ///< fr(r1)
    double a1 = 0.0;  ///< lower bound on r1*b0 - a0
    double delta = 0.0;
};

/// Window starting at `p` with a1 = w(p) and the adaptive width
/// min(1/3, a1 / (4 (|a0| + |b0| + r1 + 1))).
/// Throws DomainError when r1 <= 0 or w(p) <= 0.
ExtensionWindow make_window(const ProfilePoint& p);

enum class MonitorKind { WNonpositive, FrNonpositive, FrrNonpositive, StepUnderflow };

std::string to_string(MonitorKind k);

struct MonitorEvent {
    MonitorKind kind = MonitorKind::WNonpositive;
    double r = 0.0;
    ProfilePoint values;
};

/// Raised in certified mode on the first monitor event.
class MonitorBreakdown : public Error {
public:
    explicit MonitorBreakdown(MonitorEvent event);
    const MonitorEvent& event() const noexcept { return event_; }

private:
    MonitorEvent event_;
};

struct ExtensionStats {
    int accepted_steps = 0;
    int rejected_steps = 0;
    /// Radius where the march switched from the explicit pair to the implicit Radau scheme.
    std::optional<double> stiff_switch_r;
    double handoff_r = 0.0;
    /// Radius where the state changed from (f, fr) to the far-field variables (f, v).
    std::optional<double> far_field_r;
    /// Estimated global error of f at the last node: local errors weighted by w(r_end)/w(r_i),
    /// plus the handoff error carried the same way.
    double error_estimate = 0.0;
};

struct ExtensionResult {
    RadialProfile profile;
    std::vector<MonitorEvent> events;
    ExtensionStats stats;
};

/// Marches (f, fr) from the last node of `start` out to config.r_max with an adaptive
/// Dormand-Prince 5(4) pair, switching once to Radau IIA(5) when h * rho(J) stays above the
/// explicit stability limit. Once f > 0 and |q - alpha0| <= 1 the state moves to the far-field
/// variables of ode::FarFieldSystem (certified regime only). Steps are clipped to land on the
/// output grid.
///
/// Certified mode throws MonitorBreakdown on the first event and StepUnderflow when the step
/// collapses; exploratory mode records events and stops the march at a step collapse.
ExtensionResult extend_rk(const Parameters& params, const RadialProfile& start,
                          const SolverConfig& config);

struct PicardSegment {
    ExtensionWindow window;  ///< the window actually used (delta after halvings)
    std::vector<ProfilePoint> points;
    PicardDiagnostics diagnostics;
};

/// Fixed point of the interior map on [r1, r1 + delta]:
///
///   Phi1(r) = a0 + int_{r1}^r h
///   Phi2(r) = (1/r) { (1/lambda) int s (1+h^2)^2 / (s h - g) - (n-1) int h^3 - (n-2) int h }
///             + (r1/r) b0
///
/// started from the constant state (a0, b0). The width is halved whenever the iteration fails,
/// contracts slower than 1/3, or lets s*h - g drop below a1/2.
/// Throws DomainError if the window violates r1*b0 - a0 >= a1 > 0, NoConvergence after
/// repeated halvings.
PicardSegment extend_picard(const Parameters& params, const ExtensionWindow& window,
                            const SolverConfig& config);

struct PicardChain {
    RadialProfile profile;
    std::vector<PicardDiagnostics> windows;
};

/// Chains extend_picard windows from the last node of `start` to r_end.
PicardChain extend_picard_chain(const Parameters& params, const RadialProfile& start,
                                const SolverConfig& config, double r_end);

/// Every violation of w > 0, fr > 0 (r > 0) and frr > 0 (r > 0) at the profile nodes.
std::vector<MonitorEvent> detect_breakdown(const Parameters& params, const RadialProfile& profile);

struct ProfileSolution {
    RadialProfile profile;
    PicardDiagnostics origin;
    ExtensionStats stats;
    std::vector<MonitorEvent> events;
};

/// Origin construction followed by extend_rk. Certified mode refuses parameters outside
/// lambda (n-1) > 1 with DomainError.
ProfileSolution solve_profile(const Parameters& params, const SolverConfig& config);

}  // namespace imcf
