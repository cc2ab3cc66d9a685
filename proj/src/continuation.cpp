#include "imcf/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "imcf/integrators.hpp"
#include "imcf/quadrature.hpp"

namespace imcf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kStiffLimit = 2.5;
constexpr int kStiffSteps = 3;
constexpr int kMaxWindowHalvings = 30;
constexpr double kInteriorGuard = 1.0 / 3.0;

ProfilePoint make_point(const Parameters& params, double r, double f, double fr) {
    ProfilePoint p;
    p.r = r;
    p.f = f;
    p.fr = fr;
    p.frr = ode_rhs(params, r, f, fr);
    return p;
}

// Output radii in (r_start, r_max]; the last entry is r_max exactly.
std::vector<double> output_nodes(double r_start, const SolverConfig& config) {
    const double r_max = config.r_max;
    std::vector<double> nodes;
    const double floor = r_start * (1.0 + 1e-9);
    switch (config.output_grid) {
        case GridPolicy::Log: {
            const double d = static_cast<double>(config.grid_density);
            for (int k = 0;; ++k) {
                const double r = r_max * std::pow(10.0, -static_cast<double>(k) / d);
                if (r <= floor) {
                    break;
                }
                nodes.push_back(r);
            }
            std::reverse(nodes.begin(), nodes.end());
            break;
        }
        case GridPolicy::Uniform: {
            const int m = config.grid_density;
            for (int i = 1; i <= m; ++i) {
                const double r = r_start + (r_max - r_start) * static_cast<double>(i) / m;
                if (r > floor) {
                    nodes.push_back(r);
                }
            }
            break;
        }
        case GridPolicy::AdaptiveNative:
            break;
    }
    if (nodes.empty() || nodes.back() != r_max) {
        if (!nodes.empty() && nodes.back() >= r_max) {
            nodes.back() = r_max;
        } else {
            nodes.push_back(r_max);
        }
    }
    return nodes;
}

struct SignTracker {
    bool fr_pos;
    bool frr_pos;
};

}  // namespace

std::string to_string(MonitorKind k) {
    switch (k) {
        case MonitorKind::WNonpositive:
            return "w_nonpositive";
        case MonitorKind::FrNonpositive:
            return "fr_nonpositive";
        case MonitorKind::FrrNonpositive:
            return "frr_nonpositive";
        case MonitorKind::StepUnderflow:
            return "step_underflow";
    }
    return "unknown";
}

MonitorBreakdown::MonitorBreakdown(MonitorEvent event)
    : Error("certified run broke down: " + to_string(event.kind) + " at r = " +
            std::to_string(event.r)),
      event_(event) {}

ExtensionWindow make_window(const ProfilePoint& p) {
    const double w = p.w();
    if (!(p.r > 0.0) || !(w > 0.0)) {
        throw DomainError("extension window needs r1 > 0 and r1*b0 - a0 > 0");
    }
    ExtensionWindow win;
    win.r1 = p.r;
    win.a0 = p.f;
    win.b0 = p.fr;
    win.a1 = w;
    win.delta = std::min(1.0 / 3.0, w / (4.0 * (std::abs(p.f) + std::abs(p.fr) + p.r + 1.0)));
    return win;
}

ExtensionResult extend_rk(const Parameters& params_in, const RadialProfile& start,
                          const SolverConfig& config) {
    const Parameters params = validate(params_in);
    if (config.mode == RunMode::Certified && !params.global_regime) {
        throw DomainError("certified mode requires lambda*(n-1) > 1");
    }
    const ProfilePoint p0 = start.points().back();
    ExtensionStats stats;
    stats.handoff_r = p0.r;
    if (!(p0.w() > 0.0)) {
        throw SingularDenominator(p0.r, p0.w());
    }
    if (config.r_max <= p0.r) {
        return {start, {}, stats};
    }

    std::vector<ProfilePoint> pts = start.points();
    std::vector<ProfileSegment> segs = start.segments();
    const std::size_t first_new = pts.size();
    std::vector<MonitorEvent> events;

    const auto nodes = output_nodes(p0.r, config);
    const bool native = config.output_grid == GridPolicy::AdaptiveNative;
    const ode::ProfileSystem near_sys(params);
    std::optional<ode::FarFieldSystem> far_sys;
    if (params.global_regime) {
        far_sys.emplace(params);
    }
    const ode::System* sys = &near_sys;
    bool far = false;
    const ode::DormandPrince54 dp;
    const ode::RadauIIA5 radau;

    double r = p0.r;
    ode::State y{p0.f, p0.fr};
    double h = std::min(0.01 * r, config.r_max - r);
    bool stiff = false;
    int stiff_count = 0;
    bool last_singular = false;
    double weighted_local = 0.0;
    SignTracker signs{p0.fr > 0.0, p0.frr > 0.0};
    std::size_t next = 0;

    auto record = [&](MonitorEvent ev) {
        if (config.mode == RunMode::Certified) {
            throw MonitorBreakdown(ev);
        }
        events.push_back(ev);
    };

    while (next < nodes.size()) {
        const double target = nodes[next];
        const bool landing = h >= target - r;
        const double step = landing ? target - r : h;
        if (step < 1e3 * kEps * r) {
            if (config.mode == RunMode::Certified) {
                throw StepUnderflow(r, step);
            }
            MonitorEvent ev;
            ev.kind = last_singular ? MonitorKind::WNonpositive : MonitorKind::StepUnderflow;
            ev.r = r;
            ev.values = sys->point(r, y);
            events.push_back(ev);
            if (pts.back().r < r) {
                pts.push_back(ev.values);
            }
            break;
        }

        const ode::StepResult res = stiff
                                        ? radau.step(*sys, r, y, step, config.abs_tol, config.rel_tol)
                                        : dp.step(*sys, r, y, step);
        if (!res.ok) {
            ++stats.rejected_steps;
            last_singular = res.singular;
            h = step * (res.singular ? 0.25 : 0.5);
            continue;
        }
        const double err = ode::error_norm(res.err, y, res.y, config.abs_tol, config.rel_tol);
        const double expo = stiff ? 1.0 / 6.0 : 1.0 / 5.0;
        if (!(err <= 1.0)) {
            ++stats.rejected_steps;
            last_singular = false;
            h = step * (std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -expo)) : 0.2);
            continue;
        }

        const double r_new = landing ? target : r + step;
        const ProfilePoint p = sys->point(r_new, res.y);
        ++stats.accepted_steps;
        last_singular = false;

        // local error (plus rounding) carried forward along the scaling mode ~ w
        const double dfr = far ? std::abs(res.err[1]) * r_new / p.f +
                                     std::abs(res.err[0]) * std::abs(p.fr / p.f)
                               : std::abs(res.err[1]);
        const double le = std::abs(res.err[0]) + r_new * dfr +
                          2.0 * kEps * (std::abs(p.f) + r_new * std::abs(p.fr));
        weighted_local += le / p.w();

        const double factor = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -expo)) : 5.0;
        const double proposal = step * factor;
        h = landing ? std::max(proposal, h) : proposal;
        h = std::min(h, 1e6 * (config.r_max - p0.r));

        if (!stiff) {
            if (step * sys->spectral_radius(r_new, res.y) >= kStiffLimit) {
                if (++stiff_count >= kStiffSteps) {
                    stiff = true;
                    stats.stiff_switch_r = r_new;
                }
            } else {
                stiff_count = 0;
            }
        }

        r = r_new;
        y = res.y;
        if (!far && far_sys && p.f > 0.0 && std::abs(r * p.fr / p.f - far_sys->alpha0()) <= 1.0) {
            far = true;
            sys = &*far_sys;
            y = far_sys->from_profile(r, p.f, p.fr);
            stats.far_field_r = r;
        }

        const bool fr_pos = p.fr > 0.0;
        const bool frr_pos = p.frr > 0.0;
        if (signs.fr_pos && !fr_pos) {
            record({MonitorKind::FrNonpositive, r, p});
        }
        if (signs.frr_pos && !frr_pos) {
            record({MonitorKind::FrrNonpositive, r, p});
        }
        signs = {fr_pos, frr_pos};

        if (landing) {
            pts.push_back(p);
            ++next;
        } else if (native) {
            pts.push_back(p);
        }
    }

    const ProfilePoint& last = pts.back();
    stats.error_estimate = (weighted_local + config.abs_tol / p0.w()) * last.w();
    if (pts.size() > first_new) {
        segs.push_back({first_new - 1, pts.size() - 1, Provenance::Integrator});
    }
    return {RadialProfile(params, std::move(pts), std::move(segs)), std::move(events), stats};
}

PicardSegment extend_picard(const Parameters& params_in, const ExtensionWindow& window,
                            const SolverConfig& config) {
    const Parameters params = validate(params_in);
    const double w0 = window.r1 * window.b0 - window.a0;
    if (!(window.r1 > 0.0) || !(window.a1 > 0.0) || !(window.delta > 0.0) ||
        w0 < window.a1 * (1.0 - 1e-12)) {
        throw DomainError("extension window violates r1*b0 - a0 >= a1 > 0");
    }
    const double nm1 = static_cast<double>(params.n - 1);
    const double nm2 = static_cast<double>(params.n - 2);
    const double stop_tol =
        std::max(0.01 * config.abs_tol,
                 64.0 * kEps * std::max({1.0, std::abs(window.a0), std::abs(window.b0)}));
    const double noise_floor = 16.0 * stop_tol;

    double delta = window.delta;
    double last_ratio = 0.0;
    for (int halving = 0; halving <= kMaxWindowHalvings; ++halving, delta *= 0.5) {
        const std::size_t m = picard_intervals(delta, config.abs_tol) + 1;
        const double dh = delta / static_cast<double>(m - 1);
        std::vector<double> s(m);
        for (std::size_t i = 0; i < m; ++i) {
            s[i] = window.r1 + dh * static_cast<double>(i);
        }
        s.back() = window.r1 + delta;

        std::vector<double> g(m, window.a0), h(m, window.b0);
        std::vector<double> a(m), b(m);
        PicardDiagnostics diag;
        diag.eps = delta;
        diag.restarts = halving;
        diag.nodes = m;
        bool failed = false;
        for (int k = 0; k < config.picard_max_iter && !failed; ++k) {
            for (std::size_t i = 0; i < m; ++i) {
                const double den = s[i] * h[i] - g[i];
                if (!(den > 0.0)) {
                    failed = true;
                    break;
                }
                const double p = 1.0 + h[i] * h[i];
                a[i] = s[i] * p * p / (params.lambda * den);
                b[i] = nm1 * h[i] * h[i] * h[i] + nm2 * h[i];
            }
            if (failed) {
                break;
            }
            const auto ia = quad::cumulative_simpson(a, dh);
            const auto ib = quad::cumulative_simpson(b, dh);
            const auto ih = quad::cumulative_simpson(h, dh);
            double d = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double g_new = window.a0 + ih[i];
                const double h_new = (ia[i] - ib[i] + window.r1 * window.b0) / s[i];
                d = std::max({d, std::abs(g_new - g[i]), std::abs(h_new - h[i])});
                g[i] = g_new;
                h[i] = h_new;
            }
            if (!std::isfinite(d)) {
                failed = true;
                break;
            }
            diag.distances.push_back(d);
            diag.iterations = k + 1;
            if (d <= stop_tol) {
                diag.converged = true;
                break;
            }
        }
        diag.observed_ratio = contraction_ratio(diag.distances, noise_floor);
        last_ratio = diag.observed_ratio;
        if (failed || !diag.converged || diag.observed_ratio > kInteriorGuard) {
            continue;
        }
        double min_den = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            min_den = std::min(min_den, s[i] * h[i] - g[i]);
        }
        diag.min_denominator = min_den;
        if (min_den < 0.5 * window.a1) {
            continue;
        }
        PicardSegment seg;
        seg.window = window;
        seg.window.delta = delta;
        seg.points.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            seg.points.push_back(make_point(params, s[i], g[i], h[i]));
        }
        seg.points.front().f = window.a0;
        seg.points.front().fr = window.b0;
        seg.diagnostics = std::move(diag);
        return seg;
    }
    throw NoConvergence("interior Picard window failed after " +
                            std::to_string(kMaxWindowHalvings) + " halvings at r1 = " +
                            std::to_string(window.r1),
                        delta * 2.0, last_ratio);
}

PicardChain extend_picard_chain(const Parameters& params_in, const RadialProfile& start,
                                const SolverConfig& config, double r_end) {
    const Parameters params = validate(params_in);
    std::vector<ProfilePoint> pts = start.points();
    std::vector<ProfileSegment> segs = start.segments();
    std::vector<PicardDiagnostics> windows;
    while (pts.back().r < r_end * (1.0 - 1e-14)) {
        ExtensionWindow win = make_window(pts.back());
        win.delta = std::min(win.delta, r_end - win.r1);
        PicardSegment seg = extend_picard(params, win, config);
        const std::size_t first = pts.size() - 1;
        pts.insert(pts.end(), seg.points.begin() + 1, seg.points.end());
        segs.push_back({first, pts.size() - 1, Provenance::Picard});
        windows.push_back(std::move(seg.diagnostics));
    }
    return {RadialProfile(params, std::move(pts), std::move(segs)), std::move(windows)};
}

std::vector<MonitorEvent> detect_breakdown(const Parameters& /*params*/,
                                           const RadialProfile& profile) {
    std::vector<MonitorEvent> events;
    for (const auto& p : profile.points()) {
        if (!(p.w() > 0.0)) {
            events.push_back({MonitorKind::WNonpositive, p.r, p});
        }
        if (p.r > 0.0) {
            if (!(p.fr > 0.0)) {
                events.push_back({MonitorKind::FrNonpositive, p.r, p});
            }
            if (!(p.frr > 0.0)) {
                events.push_back({MonitorKind::FrrNonpositive, p.r, p});
            }
        }
    }
    return events;
}

ProfileSolution solve_profile(const Parameters& params_in, const SolverConfig& config_in) {
    const Parameters params = validate(params_in);
    if (config_in.mode == RunMode::Certified && !params.global_regime) {
        throw DomainError("certified mode requires lambda*(n-1) > 1; got lambda*(n-1) = " +
                          std::to_string(params.lambda * (params.n - 1)));
    }
    const SolverConfig config = validate(config_in, params);
    OriginSolution origin = solve_origin(params, config);

    // hand off at the last Picard node not beyond r_switch (or r_max)
    const double cut = std::min(*config.r_switch, config.r_max);
    const auto& op = origin.profile.points();
    std::size_t last = 0;
    while (last + 1 < op.size() && op[last + 1].r <= cut * (1.0 + 1e-12)) {
        ++last;
    }
    last = std::max<std::size_t>(last, 1);
    std::vector<ProfilePoint> head(op.begin(), op.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    RadialProfile start(params, std::move(head), {{0, last, Provenance::Picard}});

    ExtensionResult ext = extend_rk(params, start, config);
    return {std::move(ext.profile), std::move(origin.diagnostics), ext.stats, std::move(ext.events)};
}

}  // namespace imcf
