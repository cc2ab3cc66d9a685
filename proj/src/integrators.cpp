#include "imcf/integrators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "imcf/errors.hpp"

namespace imcf::ode {

double System::spectral_radius(double r, const State& y) const {
    const Matrix2 j = jacobian(r, y);
    const double tr = j[0][0] + j[1][1];
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        return 0.5 * std::max(std::abs(tr + sq), std::abs(tr - sq));
    }
    return std::sqrt(std::abs(det));
}

State ProfileSystem::rhs(double r, const State& y) const {
    return {y[1], ode_rhs(params_, r, y[0], y[1])};
}

Matrix2 ProfileSystem::jacobian(double r, const State& y) const {
    const auto j = ode_rhs_jacobian(params_, r, y[0], y[1]);
    return {{{0.0, 1.0}, {j.d_f, j.d_fr}}};
}

ProfilePoint ProfileSystem::point(double r, const State& y) const {
    return {r, y[0], y[1], ode_rhs(params_, r, y[0], y[1])};
}

FarFieldSystem::FarFieldSystem(const Parameters& params) : params_(params) {
    beta_ = params.lambda * static_cast<double>(params.n - 1);
    if (!(beta_ > 1.0)) {
        throw DomainError("far-field variables need lambda*(n-1) > 1");
    }
    alpha0_ = beta_ / (beta_ - 1.0);
}

FarFieldSystem::Derived FarFieldSystem::derive(double r, const State& y) const {
    const double f = y[0];
    const double v = y[1];
    if (!(f > 0.0)) {
        throw SingularDenominator(r, f);
    }
    Derived d;
    d.s = f / r;
    d.u = v / (d.s * d.s);
    d.q = alpha0_ + d.u;
    if (!(d.q > 1.0)) {
        throw SingularDenominator(r, f * (d.q - 1.0));
    }
    const double p = d.q * d.s;
    const double t = d.q + d.q / (p * p) - (beta_ - 1.0) * (d.u + d.q * d.q * v);
    d.du = (d.q / r) * (t / (params_.lambda * (d.q - 1.0)) + 1.0 - d.q);
    return d;
}

State FarFieldSystem::rhs(double r, const State& y) const {
    const Derived d = derive(r, y);
    return {d.q * d.s, d.s * d.s * (d.du + 2.0 * d.u * (d.q - 1.0) / r)};
}

Matrix2 FarFieldSystem::jacobian(double r, const State& y) const {
    const State f0 = rhs(r, y);
    Matrix2 j{};
    for (std::size_t c = 0; c < 2; ++c) {
        State yp = y;
        const double dy = std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(std::abs(y[c]), 1e-8);
        yp[c] += dy;
        const State f1 = rhs(r, yp);
        j[0][c] = (f1[0] - f0[0]) / dy;
        j[1][c] = (f1[1] - f0[1]) / dy;
    }
    return j;
}

ProfilePoint FarFieldSystem::point(double r, const State& y) const {
    const Derived d = derive(r, y);
    // frr = d(q s)/dr = s (u' + q (q-1)/r)
    return {r, y[0], d.q * d.s, d.s * (d.du + d.q * (d.q - 1.0) / r)};
}

State FarFieldSystem::from_profile(double r, double f, double fr) const {
    if (!(f > 0.0)) {
        throw ZeroHeight("far-field variables need f > 0");
    }
    // (q - alpha0) s^2 = (r fr f - alpha0 f^2) / r^2
    return {f, (fr * f * r - alpha0_ * f * f) / (r * r)};
}

double error_norm(const State& err, const State& y0, const State& y1, double abs_tol, double rel_tol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / sc);
    }
    return worst;
}

namespace {

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dp

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, k] : terms) {
        out[0] += h * c * (*k)[0];
        out[1] += h * c * (*k)[1];
    }
    return out;
}

}  // namespace

StepResult DormandPrince54::step(const System& sys, double r, const State& y, double h) const {
    using namespace dp;
    StepResult res;
    try {
        const State k1 = sys.rhs(r, y);
        const State k2 = sys.rhs(r + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State k3 = sys.rhs(r + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = sys.rhs(r + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 =
            sys.rhs(r + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = sys.rhs(
            r + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y1 = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = sys.rhs(r + h, y1);
        res.y = y1;
        for (std::size_t i = 0; i < 2; ++i) {
            res.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
        }
        res.ok = std::isfinite(y1[0]) && std::isfinite(y1[1]);
    } catch (const SingularDenominator& e) {
        res.ok = false;
        res.singular = true;
        res.singular_r = e.radius();
    } catch (const Error&) {
        res.ok = false;
    }
    return res;
}

namespace {

struct RadauTableau {
    std::array<double, 3> c;
    std::array<std::array<double, 3>, 3> a;
};

const RadauTableau& radau_tableau() {
    static const RadauTableau t = [] {
        const double s6 = std::sqrt(6.0);
        RadauTableau tab;
        tab.c = {(4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0};
        tab.a = {{{(88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0},
                  {(296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0},
                  {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}}};
        return tab;
    }();
    return t;
}

constexpr int kNewtonMaxIter = 12;

}  // namespace

StepResult RadauIIA5::single(const System& sys, double r, const State& y, double h,
                             double abs_tol, double rel_tol) const {
    const auto& tab = radau_tableau();
    StepResult res;
    try {
        const auto jac = sys.jacobian(r, y);
        Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Identity();
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                for (int p = 0; p < 2; ++p) {
                    for (int q = 0; q < 2; ++q) {
                        m(2 * i + p, 2 * j + q) -= h * tab.a[i][j] * jac[p][q];
                    }
                }
            }
        }
        Eigen::PartialPivLU<Eigen::Matrix<double, 6, 6>> lu(m);
        Eigen::Matrix<double, 6, 1> z = Eigen::Matrix<double, 6, 1>::Zero();
        const std::array<double, 2> scale = {abs_tol + rel_tol * std::abs(y[0]),
                                             abs_tol + rel_tol * std::abs(y[1])};
        double prev_norm = std::numeric_limits<double>::infinity();
        bool converged = false;
        for (int it = 0; it < kNewtonMaxIter; ++it) {
            std::array<State, 3> fz;
            for (int i = 0; i < 3; ++i) {
                fz[i] = sys.rhs(r + tab.c[i] * h, {y[0] + z(2 * i), y[1] + z(2 * i + 1)});
            }
            Eigen::Matrix<double, 6, 1> g;
            for (int i = 0; i < 3; ++i) {
                for (int p = 0; p < 2; ++p) {
                    double acc = 0.0;
                    for (int j = 0; j < 3; ++j) {
                        acc += tab.a[i][j] * fz[j][p];
                    }
                    g(2 * i + p) = z(2 * i + p) - h * acc;
                }
            }
            const Eigen::Matrix<double, 6, 1> dz = lu.solve(-g);
            z += dz;
            double norm = 0.0;
            for (int i = 0; i < 6; ++i) {
                norm = std::max(norm, std::abs(dz(i)) / scale[i % 2]);
            }
            if (!std::isfinite(norm)) {
                break;
            }
            if (it == 0) {
                if (norm <= 1e-3) {
                    converged = true;
                    break;
                }
            } else {
                const double theta = norm / prev_norm;
                if (theta >= 1.0) {
                    break;  // diverging
                }
                if (theta / (1.0 - theta) * norm <= 0.03 || norm <= 1e-3) {
                    converged = true;
                    break;
                }
            }
            prev_norm = norm;
        }
        res.y = {y[0] + z(4), y[1] + z(5)};
        res.ok = converged && std::isfinite(res.y[0]) && std::isfinite(res.y[1]);
    } catch (const SingularDenominator& e) {
        res.ok = false;
        res.singular = true;
        res.singular_r = e.radius();
    } catch (const Error&) {
        res.ok = false;
    }
    return res;
}

StepResult RadauIIA5::step(const System& sys, double r, const State& y, double h,
                           double abs_tol, double rel_tol) const {
    const StepResult big = single(sys, r, y, h, abs_tol, rel_tol);
    if (!big.ok) {
        return big;
    }
    const StepResult half1 = single(sys, r, y, 0.5 * h, abs_tol, rel_tol);
    if (!half1.ok) {
        return half1;
    }
    const StepResult half2 = single(sys, r + 0.5 * h, half1.y, 0.5 * h, abs_tol, rel_tol);
    if (!half2.ok) {
        return half2;
    }
    StepResult res;
    res.ok = true;
    res.y = half2.y;
    constexpr double kScale = 1.0 / 31.0;
    res.err = {(half2.y[0] - big.y[0]) * kScale, (half2.y[1] - big.y[1]) * kScale};
    return res;
}

}  // namespace imcf::ode
