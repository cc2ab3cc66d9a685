#include <cmath>

#include "doctest.h"
#include "imcf/errors.hpp"
#include "imcf/profile_core.hpp"

using namespace imcf;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(Parameters{1, 2.0, -1.0}), DomainError);
    CHECK_THROWS_AS(validate(Parameters{2, 0.0, -1.0}), DomainError);
    CHECK_THROWS_AS(validate(Parameters{2, 1.0, 0.0}), DomainError);
    CHECK(validate(Parameters{2, 2.0, -1.0}).global_regime);
    CHECK_FALSE(validate(Parameters{2, 1.0, -1.0}).global_regime);
    CHECK_FALSE(validate(Parameters{3, 0.5, -1.0}).global_regime);
    CHECK(validate(Parameters{3, 0.51, -1.0}).global_regime);
}

TEST_CASE("ode_rhs at the synthetic exact datum r=1, f=-1, fr=0") {
    const Parameters p = validate(Parameters{3, 2.0, -1.0});
    CHECK(ode_rhs(p, 1.0, -1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ode_rhs domain") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    CHECK_THROWS_AS(ode_rhs(p, 0.0, -1.0, 0.0), SingularRadius);
    CHECK_THROWS_AS(ode_rhs(p, 1.0, 1.0, 1.0), SingularDenominator);
    CHECK_THROWS_AS(ode_rhs(p, 1.0, 2.0, 1.0), SingularDenominator);
}

TEST_CASE("analytic Jacobian matches finite differences") {
    const Parameters p = validate(Parameters{4, 1.5, -2.0});
    const double r = 0.7, f = -1.6, fr = 0.3, h = 1e-6;
    const auto j = ode_rhs_jacobian(p, r, f, fr);
    const double df = (ode_rhs(p, r, f + h, fr) - ode_rhs(p, r, f - h, fr)) / (2 * h);
    const double dfr = (ode_rhs(p, r, f, fr + h) - ode_rhs(p, r, f, fr - h)) / (2 * h);
    CHECK(j.d_f == doctest::Approx(df).epsilon(1e-8));
    CHECK(j.d_fr == doctest::Approx(dfr).epsilon(1e-8));
}

TEST_CASE("origin curvature 1/(n lambda |mu|)") {
    CHECK(origin_curvature(validate(Parameters{2, 1.0, -1.0})) == 0.5);
    CHECK(origin_curvature(validate(Parameters{4, 2.0, -0.25})) == doctest::Approx(0.5));
}

TEST_CASE("profile construction rejects bad grids") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    CHECK_THROWS(RadialProfile(p, {}));
    CHECK_THROWS(RadialProfile(p, {{0.1, -1, 0, 1}}));
    CHECK_THROWS(RadialProfile(p, {{0, -1, 0, 1}, {0.5, -1, 0, 1}, {0.5, -1, 0, 1}}));
    const RadialProfile ok(p, {{0, -1, 0, 1}, {1, -0.5, 1, 1}});
    CHECK(ok.segments().size() == 1);
    CHECK(ok.r_max() == 1.0);
}

TEST_CASE("Hermite evaluation is exact for cubics and reproduces nodes") {
    // f = r^3 - 1: fr = 3r^2 (quadratic, exact under the (fr, frr) cubic too)
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    std::vector<ProfilePoint> pts;
    for (double r : {0.0, 0.3, 0.9, 1.4}) {
        pts.push_back({r, r * r * r - 1.0, 3 * r * r, 6 * r});
    }
    const RadialProfile prof(p, pts);
    for (double r : {0.1, 0.5, 1.0, 1.3}) {
        const auto e = eval(prof, r);
        CHECK(e.f == doctest::Approx(r * r * r - 1.0).epsilon(1e-14));
        CHECK(e.fr == doctest::Approx(3 * r * r).epsilon(1e-14));
        CHECK(e.frr == doctest::Approx(6 * r).epsilon(1e-13));
    }
    CHECK(eval(prof, 0.9).f == pts[2].f);
    CHECK_THROWS_AS(eval(prof, 1.5), OutOfRange);
}

TEST_CASE("Hermite interpolation error is fourth order") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    auto err_at = [&](double h) {
        std::vector<ProfilePoint> pts;
        for (int i = 0; i <= 4; ++i) {
            const double r = i * h;
            pts.push_back({r, std::exp(r), std::exp(r), std::exp(r)});
        }
        const RadialProfile prof(p, pts);
        return std::abs(eval(prof, 1.5 * h).f - std::exp(1.5 * h));
    };
    const double ratio = err_at(0.2) / err_at(0.1);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("solver config validation") {
    const Parameters p = validate(Parameters{2, 2.0, -4.0});
    const auto c = validate(SolverConfig{}, p);
    REQUIRE(c.r_switch);
    CHECK(*c.r_switch == doctest::Approx(0.1));
    SolverConfig bad;
    bad.abs_tol = -1.0;
    CHECK_THROWS_AS(validate(bad, p), DomainError);
    CHECK(grid_policy_from_string("adaptive-native") == GridPolicy::AdaptiveNative);
    CHECK_THROWS(run_mode_from_string("strict"));
}
