#include <cmath>

#include "doctest.h"
#include "imcf/errors.hpp"
#include "imcf/origin_picard.hpp"
#include "imcf/series.hpp"
#include "imcf/verify.hpp"

using namespace imcf;

// Coefficients and values below come from tests/oracles/taylor_coefficients.py (exact rationals).

TEST_CASE("origin series coefficients match the symbolic oracle") {
    const auto a = taylor_bootstrap(validate(Parameters{2, 1.0, -1.0}), 10);
    const double expect[] = {-1, 0, 1.0 / 4, 0, 1.0 / 128, 0, 1.0 / 2304, 0, 29.0 / 1179648, 0, 73.0 / 39321600};
    for (int k = 0; k <= 10; ++k) {
        CHECK(a[k] == doctest::Approx(expect[k]).epsilon(1e-14));
    }
    const auto b = taylor_bootstrap(validate(Parameters{3, 2.0, -0.5}), 8);
    CHECK(b[2] == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(b[4] == doctest::Approx(-1.0 / 108).epsilon(1e-14));
    CHECK(b[6] == doctest::Approx(13.0 / 6804).epsilon(1e-14));
    CHECK(b[8] == doctest::Approx(-425.0 / 734832).epsilon(1e-13));
    const auto c = taylor_bootstrap(validate(Parameters{4, 1.5, -4.0}), 8);
    CHECK(c[4] == doctest::Approx(-7.0 / 331776).epsilon(1e-14));
    CHECK(c[8] == doctest::Approx(-4115.0 / 10567230160896.0).epsilon(1e-13));
}

TEST_CASE("odd coefficients vanish and a2 is half the origin curvature") {
    const Parameters p = validate(Parameters{3, 1.5, -2.0});
    const auto a = taylor_bootstrap(p, 12);
    for (int k = 1; k <= 11; k += 2) {
        CHECK(a[k] == 0.0);
    }
    CHECK(2 * a[2] == doctest::Approx(origin_curvature(p)));
}

TEST_CASE("extended-precision oracle at r = 0.05 for (2,1,-1)") {
    const auto v = taylor_oracle(validate(Parameters{2, 1.0, -1.0}), 0.05, 40, 50);
    CHECK(std::abs(v.f - (-0.9993749511650923554938700)) < 2e-16);
    CHECK(std::abs(v.fr - 0.02500390706395576712157991) < 1e-17);
    CHECK(v.truncation_bound < 1e-40);
    const auto w = taylor_oracle(validate(Parameters{2, 1.0, -1.0}), 0.05, 40, 100);
    CHECK(w.f == v.f);
    CHECK_THROWS_AS(taylor_oracle(validate(Parameters{2, 1.0, -1.0}), 0.05, 4, 50), DomainError);
    CHECK_THROWS_AS(taylor_oracle(validate(Parameters{2, 1.0, -1.0}), 0.05, 20, 30), DomainError);
}

TEST_CASE("Picard fixed point agrees with the oracle") {
    const Parameters p = validate(Parameters{2, 1.0, -1.0});
    const auto o = solve_origin(p, validate(SolverConfig{}, p));
    CHECK(o.diagnostics.converged);
    const auto at = eval(o.profile, 0.05);
    CHECK(std::abs(at.f - (-0.9993749511650923554938700)) < 1e-12);
    CHECK(std::abs(at.fr - 0.02500390706395576712157991) < 1e-12);
}

TEST_CASE("origin contraction and curvature") {
    for (double mu : {-0.25, -1.0, -4.0}) {
        const Parameters p = validate(Parameters{3, 2.0, mu});
        const auto o = solve_origin(p, validate(SolverConfig{}, p));
        CHECK(o.diagnostics.observed_ratio <= 2.0 / 3.0);
        CHECK(o.diagnostics.min_denominator > 0.0);
        const double est = origin_curvature_estimate(o.profile, 0.25 * o.diagnostics.eps);
        CHECK(est == doctest::Approx(origin_curvature(p)).epsilon(1e-6));
    }
}

TEST_CASE("one phi step from the constant state") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    const auto s0 = PicardState::constant(p, 0.1, 64);
    const auto s1 = phi_step(p, s0);
    // E(r) = r^2 / (2 lambda |mu|)  =>  h1(r) = r / (2 lambda |mu|) for n = 2
    const double r = s1.grid.back();
    CHECK(s1.h.back() == doctest::Approx(r / 4.0).epsilon(1e-12));
    CHECK(s1.g.back() == -1.0);
    CHECK(weighted_distance(s0, s0) == 0.0);
}

TEST_CASE("contraction ratio skips the first jump and noise") {
    CHECK(contraction_ratio({1.0, 0.5, 0.1, 0.02}, 0.0) == doctest::Approx(0.2));
    CHECK(contraction_ratio({1.0, 0.5, 0.1, 1e-20, 1e-19}, 1e-16) == doctest::Approx(0.2));
}

TEST_CASE("Picard grid size rule") {
    const auto k = picard_intervals(0.25, 1e-12);
    CHECK(k % 2 == 0);
    CHECK(k >= 64);
    CHECK(picard_intervals(1e-4, 1e-6) == 64);
}

TEST_CASE("generic series in long double agrees with double") {
    const auto a = series::profile_coefficients<long double>(2, 1.0L, -1.0L, 8);
    CHECK(static_cast<double>(a[4]) == doctest::Approx(1.0 / 128));
    const auto [f, fr] = series::evaluate<long double>(a, 0.05L);
    CHECK(std::abs(static_cast<double>(f) + 0.99937495116509235549) < 1e-15);
    CHECK(static_cast<double>(fr) > 0.0);
}
