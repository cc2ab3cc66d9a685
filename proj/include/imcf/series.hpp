#pragma once

#include <cstddef>
#include <vector>

namespace imcf::series {

/// Truncated product of two power series, coefficients up to `degree`.
template <typename T>
std::vector<T> multiply(const std::vector<T>& a, const std::vector<T>& b, std::size_t degree) {
    std::vector<T> out(degree + 1, T(0));
    for (std::size_t i = 0; i < a.size() && i <= degree; ++i) {
        if (a[i] == T(0)) {
            continue;
        }
        for (std::size_t j = 0; j < b.size() && i + j <= degree; ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

/// Coefficients a_0..a_order of the origin power series f(r) = sum a_k r^k.
///
/// The profile equation multiplied by r*w,
///
///   r w f_rr + (n-1) w (1+fr^2) fr - (r/lambda)(1+fr^2)^2 = 0,   w = r fr - f,
///
/// is polynomial in the series. Its r^(m+1) coefficient is affine in a_{m+2} with slope
/// |mu| (m+2)(m+n), which fixes a_{m+2} once a_0..a_{m+1} are known.
template <typename T>
std::vector<T> profile_coefficients(int n, const T& lambda, const T& mu, std::size_t order) {
    std::vector<T> a(order + 1, T(0));
    a[0] = mu;
    if (order >= 1) {
        a[1] = T(0);
    }
    const T abs_mu = -mu;
    const T nm1 = T(n - 1);
    for (std::size_t m = 0; m + 2 <= order; ++m) {
        const std::size_t deg = m + 1;
        a[m + 2] = T(0);
        std::vector<T> fr(deg + 1, T(0)), frr(deg + 1, T(0)), w(deg + 1, T(0));
        for (std::size_t k = 0; k <= deg; ++k) {
            if (k + 1 <= order) fr[k] = T(k + 1) * a[k + 1];
            if (k + 2 <= order) frr[k] = T((k + 2) * (k + 1)) * a[k + 2];
            w[k] = T(static_cast<long>(k) - 1) * a[k];
        }
        auto fr2 = multiply(fr, fr, deg);
        std::vector<T> one_p = fr2;
        one_p[0] += T(1);
        // r * w * frr : coefficient of r^deg is (w*frr)[deg-1]
        auto wfrr = multiply(w, frr, deg);
        auto wp = multiply(w, one_p, deg);
        auto wpfr = multiply(wp, fr, deg);
        auto p2 = multiply(one_p, one_p, deg);
        T c = wfrr[deg - 1] + nm1 * wpfr[deg] - p2[deg - 1] / lambda;
        const T slope = abs_mu * T(m + 2) * T(static_cast<long>(m) + n);
        a[m + 2] = -c / slope;
    }
    return a;
}

/// Sum of a_k r^k and of k a_k r^(k-1) by Horner's rule.
template <typename T>
std::pair<T, T> evaluate(const std::vector<T>& a, const T& r) {
    T f(0), fr(0);
    for (std::size_t k = a.size(); k-- > 0;) {
        f = f * r + a[k];
        if (k >= 1) {
            fr = fr * r + T(k) * a[k];
        }
    }
    return {f, fr};
}

}  // namespace imcf::series
