#include <cmath>

#include "doctest.h"
#include "imcf/errors.hpp"
#include "imcf/asymptotics.hpp"
#include "imcf/continuation.hpp"

using namespace imcf;

namespace {

RadialProfile power_law(double alpha, double c = 1.0) {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    std::vector<ProfilePoint> pts{{0.0, -1.0, 0.0, 1.0}};
    for (int k = 0; k <= 40; ++k) {
        const double r = std::pow(10.0, k / 10.0);
        pts.push_back({r, c * std::pow(r, alpha), c * alpha * std::pow(r, alpha - 1),
                       c * alpha * (alpha - 1) * std::pow(r, alpha - 2)});
    }
    return RadialProfile(p, pts);
}

}  // namespace

TEST_CASE("alpha0 closed form") {
    CHECK(alpha0(validate(Parameters{2, 2.0, -1.0})) == 2.0);
    CHECK(alpha0(validate(Parameters{3, 1.0, -1.0})) == 2.0);
    CHECK(alpha0(validate(Parameters{2, 1.5, -1.0})) == 3.0);
    CHECK(alpha0(validate(Parameters{2, 5.0, -1.0})) == 1.25);
    CHECK(alpha0(validate(Parameters{2, 1e6, -1.0})) == doctest::Approx(1.0 + 1e-6).epsilon(1e-12));
    CHECK_THROWS_AS(alpha0(validate(Parameters{2, 1.0, -1.0})), DomainError);
}

TEST_CASE("alpha0 decreases in lambda") {
    double prev = 1e300;
    for (double lam : {1.1, 1.5, 2.0, 3.0, 5.0, 100.0}) {
        const double a = alpha0(validate(Parameters{2, lam, -1.0}));
        CHECK(a < prev);
        CHECK(a > 1.0);
        prev = a;
    }
}

TEST_CASE("q_of is exact on power laws at the nodes") {
    for (double alpha : {1.5, 2.0, 3.0}) {
        const auto prof = power_law(alpha);
        for (double r : {1.0, 10.0, 1000.0}) {
            CHECK(q_of(prof, r) == doctest::Approx(alpha).epsilon(1e-15));
        }
    }
}

TEST_CASE("q_of refuses the zero crossing of f") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    const RadialProfile prof(p, {{0.0, -1.0, 0.0, 1.0}, {1.0, 0.0, 1.0, 1.0}, {2.0, 1.0, 1.0, 1.0}});
    CHECK_THROWS_AS(q_of(prof, 1.0), ZeroHeight);
}

TEST_CASE("limit estimate on an exact power law") {
    const auto prof = power_law(2.0);
    const auto rep = estimate_limit(prof, validate(Parameters{2, 2.0, -1.0}));
    CHECK(rep.q_limit_estimate == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.fit_exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.pass);
}

TEST_CASE("band check") {
    std::vector<QSample> s{{1, 3.0}, {2, 2.5}, {4, 2.05}, {8, 2.01}, {16, 2.001}};
    auto b = q_band_check(s, 2.0, 0.06);
    CHECK(b.entered);
    CHECK(b.entry_r == 4.0);
    CHECK(b.stays);
    s.push_back({32, 2.2});
    b = q_band_check(s, 2.0, 0.06);
    CHECK_FALSE(b.stays);
    CHECK(b.exit_r == 32.0);
}

TEST_CASE("certified profile approaches alpha0 and stays in the band") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    SolverConfig c;
    c.r_max = 1e4;
    const auto sol = solve_profile(p, validate(c, p));
    const auto rep = estimate_limit(sol.profile, p);
    CHECK(rep.pass);
    CHECK(std::abs(rep.q_at_r_max - 2.0) < 1e-6);
    const auto trace = q_trace(sol.profile);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto b = q_band_check(trace, 2.0, eps);
        CHECK(b.entered);
        CHECK(b.stays);
    }
}

TEST_CASE("q equation residual is second order in the stencil") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    SolverConfig c;
    c.abs_tol = c.rel_tol = 1e-10;
    c.r_max = 200.0;
    const auto sol = solve_profile(p, validate(c, p));
    const double coarse = std::abs(q_ode_residual(sol.profile, 100.0, 10.0));
    const double fine = std::abs(q_ode_residual(sol.profile, 100.0, 1.0));
    CHECK(coarse / fine > 50.0);
    CHECK_THROWS_AS(q_ode_residual(sol.profile, 100.0, 150.0), OutOfRange);
}

TEST_CASE("estimate_limit needs f > 0 over the last two decades") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    SolverConfig c;
    c.r_max = 2.0;
    const auto sol = solve_profile(p, validate(c, p));
    CHECK_THROWS_AS(estimate_limit(sol.profile, p), InsufficientRange);
}
