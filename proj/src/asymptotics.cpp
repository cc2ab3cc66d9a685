#include "imcf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imcf/errors.hpp"

namespace imcf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kPerDecade = 6;
constexpr int kDecades = 2;
constexpr int kLevels = 3;

// One Aitken level: x_{i+2} - (x_{i+2} - x_{i+1})^2 / (x_{i+2} - 2 x_{i+1} + x_i).
std::vector<double> aitken(const std::vector<double>& x) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 2 < x.size(); ++i) {
        const double d1 = x[i + 2] - x[i + 1];
        const double d2 = x[i + 2] - 2.0 * x[i + 1] + x[i];
        const double scale = std::max({std::abs(x[i]), std::abs(x[i + 1]), std::abs(x[i + 2])});
        if (std::abs(d2) <= 64.0 * kEps * scale) {
            out.push_back(x[i + 2]);  // differences at rounding level
        } else {
            out.push_back(x[i + 2] - d1 * d1 / d2);
        }
    }
    return out;
}

}  // namespace

double alpha0(const Parameters& params) {
    const double beta = params.lambda * static_cast<double>(params.n - 1);
    if (!(beta > 1.0)) {
        throw DomainError("alpha0 requires lambda*(n-1) > 1; got " + std::to_string(beta));
    }
    return beta / (beta - 1.0);
}

double q_of(const RadialProfile& profile, double r) {
    const ProfilePoint p = eval(profile, r);
    const double scale = std::abs(profile.params().mu) + r * std::abs(p.fr);
    if (std::abs(p.f) <= 64.0 * kEps * scale) {
        throw ZeroHeight("q undefined: f(" + std::to_string(r) + ") = " + std::to_string(p.f));
    }
    return r * p.fr / p.f;
}

std::vector<QSample> q_trace(const RadialProfile& profile, int per_decade) {
    std::vector<QSample> out;
    const double r_max = profile.r_max();
    const double r_min = profile.points().size() > 1 ? profile.points()[1].r : r_max;
    for (int k = 0;; ++k) {
        const double r = r_max * std::pow(10.0, -static_cast<double>(k) / per_decade);
        if (r < r_min) {
            break;
        }
        const ProfilePoint p = eval(profile, r);
        if (!(p.f > 0.0)) {
            break;
        }
        try {
            out.push_back({r, q_of(profile, r)});
        } catch (const ZeroHeight&) {
            break;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

AsymptoticsReport estimate_limit(const RadialProfile& profile, const Parameters& params) {
    AsymptoticsReport rep;
    rep.alpha0 = alpha0(params);
    const double r_max = profile.r_max();
    const double r_lo = r_max * std::pow(10.0, -kDecades);
    const auto& pts = profile.points();
    for (const auto& p : pts) {
        if (p.r >= r_lo && !(p.f > 0.0)) {
            throw InsufficientRange("f must be positive over the last two decades [" +
                                    std::to_string(r_lo) + ", " + std::to_string(r_max) + "]");
        }
    }
    if (!(eval(profile, r_lo).f > 0.0) || pts.size() < 3) {
        throw InsufficientRange("f must be positive over the last two decades");
    }

    const int count = kDecades * kPerDecade + 1;
    std::vector<double> level;
    for (int k = 0; k < count; ++k) {
        // anchored at r_max so the samples fall on log output nodes
        const double r = r_max * std::pow(10.0, -static_cast<double>(count - 1 - k) / kPerDecade);
        const double q = q_of(profile, r);
        rep.q_samples.push_back({r, q});
        level.push_back(q);
    }
    rep.q_at_r_max = level.back();

    // order from the last geometric triple: successive differences shrink by g^-p
    const double g = std::pow(10.0, 1.0 / kPerDecade);
    const double d_prev = level[count - 2] - level[count - 3];
    const double d_last = level[count - 1] - level[count - 2];
    if (d_prev != 0.0 && d_last / d_prev > 0.0) {
        rep.fitted_order = -std::log(d_last / d_prev) / std::log(g);
    }

    for (int l = 0; l < kLevels; ++l) {
        level = aitken(level);
    }
    rep.q_limit_estimate = level.back();
    const auto tail = std::minmax({level[level.size() - 1], level[level.size() - 2],
                                   level[level.size() - 3]});
    rep.extrapolation_uncertainty = tail.second - tail.first;
    if (rep.fitted_order > 0.0) {
        rep.fitted_constant =
            (rep.q_at_r_max - rep.q_limit_estimate) * std::pow(r_max, rep.fitted_order);
    }

    // log f against log r over the final decade
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const auto& p : pts) {
        if (p.r >= r_max / 10.0 * (1.0 - 1e-12)) {
            const double x = std::log(p.r);
            const double y = std::log(p.f);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
    }
    if (m >= 2) {
        rep.fit_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    } else {
        const double x0 = std::log(r_max / 10.0);
        rep.fit_exponent = (std::log(pts.back().f) - std::log(eval(profile, r_max / 10.0).f)) /
                           (std::log(r_max) - x0);
    }

    rep.pass = std::abs(rep.q_limit_estimate - rep.alpha0) <=
               std::max(3.0 * rep.extrapolation_uncertainty, 1e-3);
    return rep;
}

BandCheck q_band_check(const std::vector<QSample>& samples, double a0, double eps) {
    BandCheck out;
    for (const auto& s : samples) {
        const bool inside = std::abs(s.q - a0) <= eps;
        if (!out.entered) {
            if (inside) {
                out.entered = true;
                out.entry_r = s.r;
            }
        } else if (!inside) {
            out.stays = false;
            out.exit_r = s.r;
            break;
        }
    }
    return out;
}

double q_ode_residual(const RadialProfile& profile, double r, double stencil) {
    const Parameters& params = profile.params();
    if (!(stencil > 0.0) || r - stencil <= 0.0 || r + stencil > profile.r_max()) {
        throw OutOfRange("q_ode_residual stencil leaves (0, r_max]");
    }
    const double q = q_of(profile, r);
    const double dq = (q_of(profile, r + stencil) - q_of(profile, r - stencil)) / (2.0 * stencil);
    const ProfilePoint p = eval(profile, r);
    if (!(p.fr > 0.0) || !(q > 1.0)) {
        throw DomainError("q equation needs fr > 0 and q > 1");
    }
    const double fr2 = p.fr * p.fr;
    const double bracket =
        q * (1.0 + 1.0 / fr2) / (params.lambda * (q - 1.0)) - static_cast<double>(params.n - 1);
    const double rhs = (q / r) * ((1.0 + fr2) * bracket + 1.0 - q);
    return dq - rhs;
}

}  // namespace imcf
