#pragma once

#include <limits>
#include <string>
#include <vector>

#include "imcf/profile_core.hpp"

namespace imcf {

enum class ResidualMode {
    /// stored frr against the recomputed right-hand side (zero by construction for solver output)
    Stored,
    /// frr rebuilt from the node values: centered difference of fr and second difference of f
    FiniteDifference,
};

struct ResidualScan {
    double max_defect = 0.0;
    double r_at_max = 0.0;
    std::size_t nodes = 0;
};

/// Max over interior nodes with 0 < r <= r_hi of |frr - ode_rhs(r, f, fr)| / max(1, |ode_rhs|).
/// At large r the recomputed right-hand side loses all digits (relative error ~ eps fr^2); in
/// FiniteDifference mode such nodes are compared against the stored frr instead.
/// In FiniteDifference mode frr is taken from both difference quotients and the larger defect
/// counts. Nodes where the right-hand side is singular are skipped.
ResidualScan ode_residual_scan(const RadialProfile& profile,
                               ResidualMode mode = ResidualMode::FiniteDifference,
                               double r_hi = std::numeric_limits<double>::infinity());

/// |LHS - RHS| of
///
///   r fr + (n-2) int_0^r fr = (1/lambda) int_0^r s (1+fr^2)^2 / (s fr - f) ds - c int_0^r fr^3
///
/// with c = n - 1, by composite Simpson on the profile nodes below r plus r itself.
double integral_identity_defect(const RadialProfile& profile, double r);

/// Same with an arbitrary coefficient c on the cubic term (c = n gives the perturbed control).
double integral_identity_defect(const RadialProfile& profile, double r, double cubic_coefficient);

/// log h(r) for h(r) = r^(n-1) exp((n-1) int_0^r fr^2 / s ds).
double log_integrating_factor(const RadialProfile& profile, double r);

/// |fr(r) - (1/(lambda h(r))) int_0^r h(s) (1+fr^2)^2 / (s fr - f) ds|, with h(s)/h(r) formed
/// directly so that large exponents do not overflow.
double integrating_factor_defect(const RadialProfile& profile, double r);

/// u(x, t) = e^(lambda t) f(e^(-lambda t) |x|).
struct SelfSimilarSolution {
    RadialProfile profile;
    double lambda = 0.0;

    explicit SelfSimilarSolution(RadialProfile p) : profile(std::move(p)), lambda(profile.params().lambda) {}
};

struct PdeResidual {
    double residual = 0.0;  ///< |u_t + sqrt(1+|grad u|^2) / div(grad u / sqrt(1+|grad u|^2))|
    double u_t = 0.0;
    double speed = 0.0;     ///< sqrt(1+|grad u|^2) / div(...)
};

/// Graphical IMCF residual at |x| = rho and time t. Throws OutOfRange when
/// xi = e^(-lambda t) rho is outside (0, r_max] and VanishingMeanCurvature when the divergence
/// cancels to rounding.
PdeResidual pde_residual_detail(const SelfSimilarSolution& solution, double rho, double t);
double pde_residual(const SelfSimilarSolution& solution, double rho, double t);

struct TaylorValue {
    double f = 0.0;
    double fr = 0.0;
    /// Tail estimate from the last nonzero retained term and the ratio-test radius.
    double truncation_bound = 0.0;
    double radius_estimate = 0.0;
};

/// Origin series of degree `order` evaluated in 50- or 100-digit binary floating point
/// (`precision_digits`). Throws DomainError for order < 8 or unsupported precision and
/// SeriesDivergence when r_probe is not well inside the estimated radius.
TaylorValue taylor_oracle(const Parameters& params, double r_probe, int order, int precision_digits = 50);

struct VerifyTolerances {
    /// relative; the difference quotients on a 240-per-decade log grid sit near 5e-5 at worst
    double ode_residual = 1e-4;
    double integral_identity = 1e-8;
    double integrating_factor = 1e-7;
    double pde_residual = 1e-7;
    double oracle = 1e-10;
};

struct VerifyOptions {
    /// Radii for the identity and PDE checks; empty means |mu| times 0.5, 1 and 2 (those inside),
    /// the same points of the profile under the scaling f(r) -> c f(r/c).
    /// The integrating-factor weight h(s)/h(r) peaks sharply at s = r once fr grows, so at
    /// large radii its defect measures the resolution of the output grid.
    std::vector<double> probe_radii;
    double oracle_probe = 0.05;
    int oracle_order = 24;
    /// Times at which pde_residual is evaluated (rho = e^(lambda t) r for each probe r).
    std::vector<double> pde_times{0.0, 0.5};
    VerifyTolerances tolerances;
};

struct VerificationReport {
    double ode_residual_max = 0.0;
    double integral_identity_defect_max = 0.0;
    double integrating_factor_defect_max = 0.0;
    /// residual / max(1, |u_t|)
    double pde_residual_max = 0.0;
    double oracle_mismatch_at_probe = 0.0;
    std::string grids_used;
    std::vector<double> probe_radii;
    bool ode_residual_pass = false;
    bool integral_identity_pass = false;
    bool integrating_factor_pass = false;
    bool pde_residual_pass = false;
    bool oracle_pass = false;

    bool pass() const noexcept {
        return ode_residual_pass && integral_identity_pass && integrating_factor_pass &&
               pde_residual_pass && oracle_pass;
    }
};

VerificationReport verify_profile(const RadialProfile& profile, const VerifyOptions& options = {});

}  // namespace imcf
