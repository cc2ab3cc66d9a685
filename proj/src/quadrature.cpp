#include "imcf/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace imcf::quad {

namespace {

// int_{x1}^{x2} of the quadratic through (x0,y0),(x1,y1),(x2,y2).
double last_interval(double x0, double x1, double x2, double y0, double y1, double y2) {
    const double h0 = x1 - x0;
    const double h1 = x2 - x1;
    const double d0 = (y1 - y0) / h0;
    const double d1 = (y2 - y1) / h1;
    const double c = (d1 - d0) / (h0 + h1);
    const double b = d1 - c * h1;
    return h1 * (y1 + h1 * (b / 2.0 + c * h1 / 3.0));
}

// int_{x0}^{x1} of the quadratic through (x0,y0),(x1,y1),(x2,y2).
double first_interval(double x0, double x1, double x2, double y0, double y1, double y2) {
    const double h0 = x1 - x0;
    const double h1 = x2 - x1;
    const double d0 = (y1 - y0) / h0;
    const double d1 = (y2 - y1) / h1;
    const double c = (d1 - d0) / (h0 + h1);
    const double b = d0 + c * h0;
    return h0 * (y1 + h0 * (-b / 2.0 + c * h0 / 3.0));
}

double simpson_pair(double x0, double x1, double x2, double y0, double y1, double y2) {
    const double h0 = x1 - x0;
    const double h1 = x2 - x1;
    const double hs = h0 + h1;
    return hs / 6.0 *
           ((2.0 - h1 / h0) * y0 + hs * hs / (h0 * h1) * y1 + (2.0 - h0 / h1) * y2);
}

}  // namespace

std::vector<double> cumulative_simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) {
        return out;
    }
    if (n == 2) {
        out[1] = 0.5 * h * (y[0] + y[1]);
        return out;
    }
    for (std::size_t i = 2; i < n; i += 2) {
        out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
    }
    // odd nodes: quadratic through (0,1,2) for i = 1, else (i-2, i-1, i)
    out[1] = h / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2]);
    for (std::size_t i = 3; i < n; i += 2) {
        out[i] = out[i - 1] + h / 12.0 * (-y[i - 2] + 8.0 * y[i - 1] + 5.0 * y[i]);
    }
    return out;
}

std::vector<double> cumulative_simpson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("cumulative_simpson: size mismatch");
    }
    const std::size_t n = y.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) {
        return out;
    }
    if (n == 2) {
        out[1] = 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
        return out;
    }
    for (std::size_t i = 2; i < n; i += 2) {
        out[i] = out[i - 2] + simpson_pair(x[i - 2], x[i - 1], x[i], y[i - 2], y[i - 1], y[i]);
    }
    out[1] = first_interval(x[0], x[1], x[2], y[0], y[1], y[2]);
    for (std::size_t i = 3; i < n; i += 2) {
        out[i] = out[i - 1] + last_interval(x[i - 2], x[i - 1], x[i], y[i - 2], y[i - 1], y[i]);
    }
    return out;
}

double simpson(std::span<const double> x, std::span<const double> y) {
    auto c = cumulative_simpson(x, y);
    return c.empty() ? 0.0 : c.back();
}

namespace {

// Weights for int_a^{a+m h} s^k L_j(s) ds where L_j are the Lagrange basis polynomials on
// nodes a, a+h, a+2h (t = (s-a)/h in {0,1,2}); integrates over t in [t_lo, t_hi].
// (a + h t)^k is expanded binomially so no moments of large, nearly equal numbers are
// subtracted.
struct QuadWeights {
    double w0, w1, w2;
};

QuadWeights weighted_lagrange(double a, double h, int k, double t_lo, double t_hi) {
    // L0 = (t-1)(t-2)/2, L1 = -t(t-2), L2 = t(t-1)/2 ; integrate t^m * L_j.
    auto mom = [&](int m) {
        return (std::pow(t_hi, m + 1) - std::pow(t_lo, m + 1)) / static_cast<double>(m + 1);
    };
    QuadWeights w{0.0, 0.0, 0.0};
    double binom = 1.0;
    for (int m = 0; m <= k; ++m) {
        // coefficient of t^m in (a + h t)^k is binom(k,m) a^(k-m) h^m
        const double coeff = binom * std::pow(a, k - m) * std::pow(h, m);
        const double m0 = mom(m), m1 = mom(m + 1), m2 = mom(m + 2);
        w.w0 += coeff * 0.5 * (m2 - 3.0 * m1 + 2.0 * m0);
        w.w1 += coeff * (-(m2 - 2.0 * m1));
        w.w2 += coeff * 0.5 * (m2 - m1);
        binom = binom * static_cast<double>(k - m) / static_cast<double>(m + 1);
    }
    return {w.w0 * h, w.w1 * h, w.w2 * h};
}

}  // namespace

std::vector<double> cumulative_power_weighted(std::span<const double> y, double h, int k) {
    if (k < 0) {
        throw std::invalid_argument("cumulative_power_weighted: k must be >= 0");
    }
    if (k == 0) {
        return cumulative_simpson(y, h);
    }
    const std::size_t n = y.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) {
        if (n == 2) {
            // linear interpolant of y times s^k on [0, h]
            const double hk1 = std::pow(h, k + 1);
            out[1] = hk1 * (y[0] / (k + 1.0) - y[0] / (k + 2.0) + y[1] / (k + 2.0));
        }
        return out;
    }
    for (std::size_t i = 2; i < n; i += 2) {
        const double a = static_cast<double>(i - 2) * h;
        const auto w = weighted_lagrange(a, h, k, 0.0, 2.0);
        out[i] = out[i - 2] + w.w0 * y[i - 2] + w.w1 * y[i - 1] + w.w2 * y[i];
    }
    {
        const auto w = weighted_lagrange(0.0, h, k, 0.0, 1.0);
        out[1] = w.w0 * y[0] + w.w1 * y[1] + w.w2 * y[2];
    }
    for (std::size_t i = 3; i < n; i += 2) {
        const double a = static_cast<double>(i - 2) * h;
        const auto w = weighted_lagrange(a, h, k, 1.0, 2.0);
        out[i] = out[i - 1] + w.w0 * y[i - 2] + w.w1 * y[i - 1] + w.w2 * y[i];
    }
    return out;
}

}  // namespace imcf::quad
