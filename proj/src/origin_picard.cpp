#include "imcf/origin_picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imcf/errors.hpp"
#include "imcf/quadrature.hpp"
#include "imcf/series.hpp"

namespace imcf {

namespace {

constexpr int kMaxRestarts = 24;

}  // namespace

double contraction_ratio(const std::vector<double>& d, double noise_floor) {
    // The first ratio compares against the jump away from the constant start state and is
    // excluded once later ratios exist.
    double worst = 0.0;
    const std::size_t start = d.size() > 2 ? 1 : 0;
    for (std::size_t k = start; k + 1 < d.size(); ++k) {
        if (d[k + 1] <= noise_floor || d[k] <= 0.0) {
            continue;
        }
        worst = std::max(worst, d[k + 1] / d[k]);
    }
    return worst;
}

PicardState PicardState::constant(const Parameters& params, double eps, std::size_t intervals) {
    if (!(eps > 0.0) || intervals < 2) {
        throw DomainError("PicardState needs eps > 0 and at least two intervals");
    }
    PicardState s;
    s.eps = eps;
    s.grid.resize(intervals + 1);
    const double dh = eps / static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
        s.grid[i] = dh * static_cast<double>(i);
    }
    s.grid.back() = eps;
    s.g.assign(intervals + 1, params.mu);
    s.h.assign(intervals + 1, 0.0);
    return s;
}

double weighted_distance(const PicardState& a, const PicardState& b) {
    if (a.grid.size() != b.grid.size()) {
        throw Error("weighted_distance: grid mismatch");
    }
    double dg = 0.0;
    double dh = 0.0;
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        dg = std::max(dg, std::abs(a.g[i] - b.g[i]));
        if (i > 0) {
            dh = std::max(dh, std::abs(a.h[i] - b.h[i]) / std::sqrt(a.grid[i]));
        }
    }
    return std::max(dg, dh);
}

double distance_from_origin_state(const Parameters& params, const PicardState& s) {
    double dg = 0.0;
    double dh = 0.0;
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        dg = std::max(dg, std::abs(s.g[i] - params.mu));
        if (i > 0) {
            dh = std::max(dh, std::abs(s.h[i]) / std::sqrt(s.grid[i]));
        }
    }
    return std::max(dg, dh);
}

PicardState phi_step(const Parameters& params, const PicardState& state, double ball_radius) {
    const std::size_t m = state.grid.size();
    if (m < 3 || state.g.size() != m || state.h.size() != m) {
        throw Error("phi_step: malformed state");
    }
    if (ball_radius <= 0.0) {
        ball_radius = std::abs(params.mu) / 4.0;
    }
    const double dh = state.eps / static_cast<double>(m - 1);
    const double nm1 = static_cast<double>(params.n - 1);

    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = state.grid[i];
        const double hi = state.h[i];
        const double den = s * hi - state.g[i];
        if (!(den > 0.0)) {
            throw DenominatorCollapse("s*h(s) - g(s) = " + std::to_string(den) + " at s = " +
                                      std::to_string(s));
        }
        const double p = 1.0 + hi * hi;
        a[i] = s * p * p / (params.lambda * den);
        b[i] = hi * hi * hi;
    }
    const auto ia = quad::cumulative_simpson(a, dh);
    const auto ib = quad::cumulative_simpson(b, dh);
    const auto ih = quad::cumulative_simpson(state.h, dh);

    std::vector<double> e(m);
    for (std::size_t i = 0; i < m; ++i) {
        e[i] = ia[i] - nm1 * ib[i];
    }

    PicardState out;
    out.eps = state.eps;
    out.grid = state.grid;
    out.g.resize(m);
    out.h.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.g[i] = params.mu + ih[i];
    }
    out.h[0] = 0.0;
    if (params.n == 2) {
        for (std::size_t i = 1; i < m; ++i) {
            out.h[i] = e[i] / state.grid[i];
        }
    } else {
        const auto j = quad::cumulative_power_weighted(e, dh, params.n - 3);
        const double nm2 = static_cast<double>(params.n - 2);
        for (std::size_t i = 1; i < m; ++i) {
            const double r = state.grid[i];
            out.h[i] = (e[i] - nm2 * j[i] / std::pow(r, params.n - 2)) / r;
        }
    }
    const double dist = distance_from_origin_state(params, out);
    if (dist > ball_radius) {
        throw BallEscape("Picard image left the ball: distance " + std::to_string(dist) +
                         " > " + std::to_string(ball_radius));
    }
    return out;
}

double origin_curvature_estimate(const RadialProfile& profile, double r0) {
    if (!(r0 > 0.0) || r0 > profile.r_max()) {
        throw OutOfRange("origin_curvature_estimate needs 0 < r0 <= r_max");
    }
    double g[3];
    for (int k = 0; k < 3; ++k) {
        const double r = r0 / static_cast<double>(1 << k);
        g[k] = eval(profile, r).fr / r;
    }
    const double l0 = (4.0 * g[1] - g[0]) / 3.0;
    const double l1 = (4.0 * g[2] - g[1]) / 3.0;
    return (16.0 * l1 - l0) / 15.0;
}

std::size_t picard_intervals(double eps, double abs_tol) {
    // Quadrature error is O(h^4); h ~ abs_tol^(1/4) / 8 keeps it well below the tolerance,
    // including relative accuracy of fr/r at the first few nodes.
    const double target = std::ceil(8.0 * eps / std::pow(abs_tol, 0.25));
    std::size_t n = static_cast<std::size_t>(std::max(64.0, std::min(target, 4.0e6)));
    if (n % 2 != 0) {
        ++n;
    }
    return n;
}

OriginSolution solve_origin(const Parameters& params_in, const SolverConfig& config) {
    const Parameters params = validate(params_in);
    const double abs_mu = std::abs(params.mu);
    const double ball = abs_mu / 4.0;
    const double stop_tol =
        std::max(0.01 * config.abs_tol, 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, abs_mu));
    const double noise_floor = 16.0 * stop_tol;

    double eps = std::min(1.0, abs_mu / 4.0);
    double last_ratio = 0.0;
    for (int restart = 0; restart <= kMaxRestarts; ++restart, eps *= 0.5) {
        const std::size_t intervals = picard_intervals(eps, config.abs_tol);
        PicardState state = PicardState::constant(params, eps, intervals);
        PicardDiagnostics diag;
        diag.eps = eps;
        diag.restarts = restart;
        diag.nodes = intervals + 1;
        bool failed = false;
        try {
            for (int k = 0; k < config.picard_max_iter; ++k) {
                PicardState next = phi_step(params, state, ball);
                const double d = weighted_distance(next, state);
                state = std::move(next);
                diag.distances.push_back(d);
                diag.iterations = k + 1;
                if (d <= stop_tol) {
                    diag.converged = true;
                    break;
                }
            }
        } catch (const BallEscape&) {
            failed = true;
        } catch (const DenominatorCollapse&) {
            failed = true;
        }
        diag.observed_ratio = contraction_ratio(diag.distances, noise_floor);
        last_ratio = diag.observed_ratio;
        if (failed || !diag.converged || diag.observed_ratio > config.picard_contraction_guard) {
            continue;
        }
        double min_den = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < state.grid.size(); ++i) {
            min_den = std::min(min_den, state.grid[i] * state.h[i] - state.g[i]);
        }
        diag.min_denominator = min_den;
        if (min_den < abs_mu / 2.0) {
            continue;
        }

        std::vector<ProfilePoint> pts(state.grid.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i].r = state.grid[i];
            pts[i].f = state.g[i];
            pts[i].fr = state.h[i];
            pts[i].frr = i == 0 ? origin_curvature(params)
                                : ode_rhs(params, pts[i].r, pts[i].f, pts[i].fr);
        }
        pts[0].f = params.mu;
        pts[0].fr = 0.0;
        RadialProfile profile(params, std::move(pts),
                              {{0, state.grid.size() - 1, Provenance::Picard}});
        return {std::move(profile), std::move(diag)};
    }
    throw NoConvergence("origin Picard iteration failed after " + std::to_string(kMaxRestarts) +
                            " interval halvings",
                        eps * 2.0, last_ratio);
}

std::vector<double> taylor_bootstrap(const Parameters& params_in, int order) {
    const Parameters params = validate(params_in);
    if (order < 2) {
        throw DomainError("taylor_bootstrap requires order >= 2");
    }
    auto a = series::profile_coefficients<double>(params.n, params.lambda, params.mu,
                                                  static_cast<std::size_t>(order));
    // exact values of the leading coefficients
    a[0] = params.mu;
    a[1] = 0.0;
    a[2] = 0.5 * origin_curvature(params);
    return a;
}

double series_radius_estimate(const std::vector<double>& c) {
    // trailing pairs of consecutive nonzero coefficients (the series is even in practice)
    std::vector<std::size_t> nz;
    for (std::size_t k = 2; k < c.size(); ++k) {
        if (c[k] != 0.0 && std::isfinite(c[k])) {
            nz.push_back(k);
        }
    }
    if (nz.size() < 3) {
        return std::numeric_limits<double>::infinity();
    }
    // The ratio-test estimates decrease with order for this equation; take the most recent.
    const std::size_t j = nz[nz.size() - 1];
    const std::size_t i = nz[nz.size() - 2];
    const double ratio = std::abs(c[i] / c[j]);
    return std::pow(ratio, 1.0 / static_cast<double>(j - i));
}

ProfilePoint evaluate_series(const Parameters& params, const std::vector<double>& c, double r) {
    auto [f, fr] = series::evaluate(c, r);
    ProfilePoint p;
    p.r = r;
    p.f = f;
    p.fr = fr;
    p.frr = r > 0.0 ? ode_rhs(params, r, f, fr) : origin_curvature(params);
    return p;
}

}  // namespace imcf
