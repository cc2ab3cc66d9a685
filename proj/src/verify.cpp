#include "imcf/verify.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <sstream>

#include "imcf/errors.hpp"
#include "imcf/origin_picard.hpp"
#include "imcf/quadrature.hpp"
#include "imcf/series.hpp"

namespace imcf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Profile nodes strictly below r, followed by the interpolated point at r.
std::vector<ProfilePoint> nodes_up_to(const RadialProfile& profile, double r) {
    if (!(r > 0.0) || r > profile.r_max()) {
        throw OutOfRange("probe radius " + std::to_string(r) + " outside (0, r_max]");
    }
    std::vector<ProfilePoint> out;
    for (const auto& p : profile.points()) {
        if (p.r >= r) {
            break;
        }
        out.push_back(p);
    }
    out.push_back(eval(profile, r));
    if (out.size() < 3) {
        throw InsufficientRange("need at least two profile nodes below the probe radius");
    }
    return out;
}

double denominator(const ProfilePoint& p) {
    const double w = p.w();
    if (!(w > 0.0)) {
        throw SingularDenominator(p.r, w);
    }
    return w;
}

// Relative rounding error of ode_rhs recomputed from (f, fr): both terms and w cancel at large r.
double rhs_condition(const Parameters& params, const ProfilePoint& p, double rhs) {
    const double g = 1.0 + p.fr * p.fr;
    const double w = p.w();
    const double t1 = g * g / (params.lambda * w);
    const double t2 = static_cast<double>(params.n - 1) * g * std::abs(p.fr) / p.r;
    const double w_cond = (p.r * std::abs(p.fr) + std::abs(p.f)) / w;
    return kEps * (t1 * (1.0 + w_cond) + t2) / std::max(1.0, std::abs(rhs));
}

constexpr double kIllConditioned = 1e-9;

template <typename T>
TaylorValue taylor_in(const Parameters& params, double r_probe, int order) {
    const auto a = series::profile_coefficients<T>(params.n, T(params.lambda), T(params.mu),
                                                   static_cast<std::size_t>(order));
    std::vector<double> ad(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        ad[k] = static_cast<double>(a[k]);
    }
    TaylorValue out;
    out.radius_estimate = series_radius_estimate(ad);
    if (!(r_probe < out.radius_estimate)) {
        throw SeriesDivergence("probe radius " + std::to_string(r_probe) +
                               " is outside the estimated series radius " +
                               std::to_string(out.radius_estimate));
    }
    const auto [f, fr] = series::evaluate(a, T(r_probe));
    out.f = static_cast<double>(f);
    out.fr = static_cast<double>(fr);

    std::size_t last = 0;
    std::size_t prev = 0;
    for (std::size_t k = 2; k < ad.size(); ++k) {
        if (ad[k] != 0.0) {
            prev = last;
            last = k;
        }
    }
    if (last > 0 && prev > 0 && std::isfinite(out.radius_estimate)) {
        const double term_f = std::abs(ad[last]) * std::pow(r_probe, static_cast<double>(last));
        const double term_fr =
            static_cast<double>(last) * std::abs(ad[last]) * std::pow(r_probe, static_cast<double>(last - 1));
        const double rho = std::pow(r_probe / out.radius_estimate, static_cast<double>(last - prev));
        out.truncation_bound = 4.0 * std::max(term_f, term_fr) * rho / (1.0 - rho);
    }
    return out;
}

}  // namespace

ResidualScan ode_residual_scan(const RadialProfile& profile, ResidualMode mode, double r_hi) {
    const Parameters& params = profile.params();
    const auto& pts = profile.points();
    ResidualScan scan;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const ProfilePoint& p = pts[i];
        if (p.r > r_hi) {
            break;
        }
        double rhs = 0.0;
        try {
            rhs = ode_rhs(params, p.r, p.f, p.fr);
        } catch (const Error&) {
            continue;
        }
        if (mode == ResidualMode::FiniteDifference && rhs_condition(params, p, rhs) > kIllConditioned) {
            // node values no longer determine the rhs; the stored frr came from the far-field form
            rhs = p.frr;
        }
        double defect = 0.0;
        if (mode == ResidualMode::Stored) {
            defect = std::abs(p.frr - rhs);
        } else {
            const ProfilePoint& a = pts[i - 1];
            const ProfilePoint& b = pts[i + 1];
            const double h0 = p.r - a.r;
            const double h1 = b.r - p.r;
            const double frr_fr = -h1 / (h0 * (h0 + h1)) * a.fr + (h1 - h0) / (h0 * h1) * p.fr +
                                  h0 / (h1 * (h0 + h1)) * b.fr;
            const double frr_f =
                2.0 * (a.f / (h0 * (h0 + h1)) - p.f / (h0 * h1) + b.f / (h1 * (h0 + h1)));
            defect = std::max(std::abs(frr_fr - rhs), std::abs(frr_f - rhs));
        }
        defect /= std::max(1.0, std::abs(rhs));
        ++scan.nodes;
        if (defect > scan.max_defect) {
            scan.max_defect = defect;
            scan.r_at_max = p.r;
        }
    }
    return scan;
}

double integral_identity_defect(const RadialProfile& profile, double r) {
    return integral_identity_defect(profile, r, static_cast<double>(profile.params().n - 1));
}

double integral_identity_defect(const RadialProfile& profile, double r, double c) {
    const Parameters& params = profile.params();
    const auto pts = nodes_up_to(profile, r);
    const std::size_t m = pts.size();
    std::vector<double> x(m), fr(m), main(m), cube(m);
    for (std::size_t i = 0; i < m; ++i) {
        const ProfilePoint& p = pts[i];
        x[i] = p.r;
        fr[i] = p.fr;
        const double q = 1.0 + p.fr * p.fr;
        main[i] = p.r * q * q / denominator(p);
        cube[i] = p.fr * p.fr * p.fr;
    }
    const ProfilePoint& end = pts.back();
    const double lhs = end.r * end.fr + static_cast<double>(params.n - 2) * quad::simpson(x, fr);
    const double rhs = quad::simpson(x, main) / params.lambda - c * quad::simpson(x, cube);
    return std::abs(lhs - rhs);
}

double log_integrating_factor(const RadialProfile& profile, double r) {
    const auto pts = nodes_up_to(profile, r);
    std::vector<double> x(pts.size()), y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        x[i] = pts[i].r;
        y[i] = pts[i].r > 0.0 ? pts[i].fr * pts[i].fr / pts[i].r : 0.0;
    }
    const double nm1 = static_cast<double>(profile.params().n - 1);
    return nm1 * (std::log(r) + quad::simpson(x, y));
}

double integrating_factor_defect(const RadialProfile& profile, double r) {
    const Parameters& params = profile.params();
    const auto pts = nodes_up_to(profile, r);
    const std::size_t m = pts.size();
    const double nm1 = static_cast<double>(params.n - 1);
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = pts[i].r;
        y[i] = pts[i].r > 0.0 ? pts[i].fr * pts[i].fr / pts[i].r : 0.0;
    }
    const auto k = quad::cumulative_simpson(x, y);
    const double k_end = k.back();
    std::vector<double> integrand(m);
    for (std::size_t i = 0; i < m; ++i) {
        const ProfilePoint& p = pts[i];
        // h(s)/h(r)
        const double ratio = std::pow(p.r / r, nm1) * std::exp(nm1 * (k[i] - k_end));
        const double q = 1.0 + p.fr * p.fr;
        integrand[i] = ratio * q * q / denominator(p);
    }
    const double rep = quad::simpson(x, integrand) / params.lambda;
    return std::abs(pts.back().fr - rep);
}

PdeResidual pde_residual_detail(const SelfSimilarSolution& sol, double rho, double t) {
    const double scale = std::exp(sol.lambda * t);
    const double xi = rho / scale;
    if (!(xi > 0.0) || xi > sol.profile.r_max()) {
        throw OutOfRange("self-similar variable " + std::to_string(xi) + " outside (0, r_max]");
    }
    const int n = sol.profile.params().n;
    const ProfilePoint p = eval(sol.profile, xi);
    const double g = std::sqrt(1.0 + p.fr * p.fr);
    // radial graph: div(grad u / sqrt(1+|grad u|^2)) with u_rr = e^(-lambda t) frr
    const double t1 = p.frr / (g * g * g);
    const double t2 = static_cast<double>(n - 1) * p.fr / (xi * g);
    const double div = (t1 + t2) / scale;
    if (!(std::abs(div) > 64.0 * kEps * (std::abs(t1) + std::abs(t2)) / scale) || !std::isfinite(div)) {
        throw VanishingMeanCurvature("mean curvature vanishes at rho = " + std::to_string(rho));
    }
    PdeResidual out;
    out.u_t = -sol.lambda * scale * p.w();
    out.speed = g / div;
    out.residual = std::abs(out.u_t + out.speed);
    return out;
}

double pde_residual(const SelfSimilarSolution& sol, double rho, double t) {
    return pde_residual_detail(sol, rho, t).residual;
}

TaylorValue taylor_oracle(const Parameters& params_in, double r_probe, int order, int precision_digits) {
    const Parameters params = validate(params_in);
    if (order < 8) {
        throw DomainError("taylor_oracle needs order >= 8");
    }
    if (!(r_probe >= 0.0)) {
        throw DomainError("taylor_oracle needs r_probe >= 0");
    }
    using boost::multiprecision::cpp_bin_float_100;
    using boost::multiprecision::cpp_bin_float_50;
    switch (precision_digits) {
        case 50:
            return taylor_in<cpp_bin_float_50>(params, r_probe, order);
        case 100:
            return taylor_in<cpp_bin_float_100>(params, r_probe, order);
        default:
            throw DomainError("taylor_oracle precision must be 50 or 100 digits");
    }
}

VerificationReport verify_profile(const RadialProfile& profile, const VerifyOptions& opt) {
    VerificationReport rep;
    const Parameters& params = profile.params();
    const double r_max = profile.r_max();

    if (opt.probe_radii.empty()) {
        for (double k : {0.5, 1.0, 2.0}) {
            const double r = k * std::abs(params.mu);
            if (r <= r_max && std::find(rep.probe_radii.begin(), rep.probe_radii.end(), r) ==
                                  rep.probe_radii.end()) {
                rep.probe_radii.push_back(r);
            }
        }
    } else {
        rep.probe_radii = opt.probe_radii;
    }

    const ResidualScan scan = ode_residual_scan(profile);
    rep.ode_residual_max = scan.max_defect;

    const SelfSimilarSolution sol(profile);
    for (double r : rep.probe_radii) {
        rep.integral_identity_defect_max =
            std::max(rep.integral_identity_defect_max, integral_identity_defect(profile, r));
        rep.integrating_factor_defect_max =
            std::max(rep.integrating_factor_defect_max, integrating_factor_defect(profile, r));
        for (double t : opt.pde_times) {
            const double rho = r * std::exp(params.lambda * t);
            const auto d = pde_residual_detail(sol, rho, t);
            rep.pde_residual_max = std::max(rep.pde_residual_max, d.residual / std::max(1.0, std::abs(d.u_t)));
        }
    }

    double probe = std::min(opt.oracle_probe, r_max);
    TaylorValue oracle;
    try {
        oracle = taylor_oracle(params, probe, opt.oracle_order);
    } catch (const SeriesDivergence&) {
        const auto coeffs = taylor_bootstrap(params, opt.oracle_order);
        probe = 0.5 * series_radius_estimate(coeffs);
        oracle = taylor_oracle(params, probe, opt.oracle_order);
    }
    const ProfilePoint at = eval(profile, probe);
    rep.oracle_mismatch_at_probe = std::max(std::abs(at.f - oracle.f), std::abs(at.fr - oracle.fr));

    const auto& tol = opt.tolerances;
    rep.ode_residual_pass = rep.ode_residual_max <= tol.ode_residual;
    rep.integral_identity_pass = rep.integral_identity_defect_max <= tol.integral_identity;
    rep.integrating_factor_pass = rep.integrating_factor_defect_max <= tol.integrating_factor;
    rep.pde_residual_pass = rep.pde_residual_max <= tol.pde_residual;
    rep.oracle_pass = rep.oracle_mismatch_at_probe <= tol.oracle;

    std::size_t picard = 0;
    std::size_t integ = 0;
    for (const auto& s : profile.segments()) {
        (s.provenance == Provenance::Integrator ? integ : picard) += s.last - s.first + 1;
    }
    std::ostringstream os;
    os << "profile nodes: " << profile.size() << " (origin " << picard << ", integrator " << integ
       << "); oracle probe r = " << probe << ", order " << opt.oracle_order << ", 50 digits";
    rep.grids_used = os.str();
    return rep;
}

}  // namespace imcf
