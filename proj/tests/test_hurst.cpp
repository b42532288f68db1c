#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mbm/hurst.hpp"

using mbm::HurstFunction;

TEST_CASE("constant family") {
    const auto f = HurstFunction::constant(0.5);
    CHECK(f(0.37) == 0.5);
    CHECK(f.h_min() == 0.5);
    CHECK(f.h_max() == 0.5);
    REQUIRE(f.min_set().intervals.size() == 1);
    CHECK(f.min_set().intervals[0].a == 0.0);
    CHECK(f.min_set().intervals[0].b == 1.0);
    CHECK_THROWS_AS(HurstFunction::constant(1.2), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::constant(0.0), std::invalid_argument);
    CHECK(HurstFunction::constant(0.7)(1.0) == 0.7);
    CHECK_THROWS_AS(f(1.5), std::domain_error);
    CHECK_THROWS_AS(f(-0.1), std::domain_error);
}

TEST_CASE("plateau family") {
    const auto f = HurstFunction::plateau(0.3, 0.7, 0.4, 0.6);
    CHECK(f(0.5) == 0.3);
    CHECK(f(0.4) == 0.3);
    CHECK(f(0.4 - 1e-6) > 0.3);
    CHECK(f(0.0) == 0.7);  // clamped at h_max away from the plateau
    CHECK(f(1.0) == 0.7);
    CHECK_THROWS_AS(HurstFunction::plateau(0.7, 0.3, 0.4, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::plateau(0.3, 0.7, 0.6, 0.4), std::invalid_argument);
}

TEST_CASE("plateau gluing matches the closed-form second derivative") {
    // transition band is [0.3, 0.4] with width w = 0.1; compare the second
    // difference quotient of h against the analytic second derivative of
    // hmin + (hmax-hmin)*smoothstep5((a-t)/w).
    const auto f = HurstFunction::plateau(0.3, 0.7, 0.4, 0.6);
    const double w = 0.1, a = 0.4;
    const double s = 1e-4;
    for (double t : {0.32, 0.35, 0.38}) {
        const double fd2 = (f(t + s) - 2.0 * f(t) + f(t - s)) / (s * s);
        const double exact = 0.4 * mbm::smoothstep5_d2((a - t) / w) / (w * w);
        CHECK(std::abs(fd2 - exact) < 2e-3 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("cusp family") {
    const auto f = HurstFunction::cusp(0.3, 0.5, 2, 1.0, 0.8);
    CHECK(f(0.5) == 0.3);
    CHECK(f(0.6) == doctest::Approx(0.31).epsilon(1e-14));
    CHECK(f(0.9) == doctest::Approx(0.46).epsilon(1e-14));
    REQUIRE(f.min_set().points.size() == 1);
    CHECK(f.min_set().points[0].x == 0.5);
    CHECK(f.min_set().points[0].order == 2);
    CHECK_THROWS_AS(HurstFunction::cusp(0.3, 0.5, 0, 1.0, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::cusp(0.3, 0.5, 2, -1.0, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::cusp(0.8, 0.5, 2, 1.0, 0.3), std::invalid_argument);
}

TEST_CASE("cusp p=3 one-sided third difference quotients have opposite signs") {
    const auto f = HurstFunction::cusp(0.3, 0.5, 3, 1.0, 0.8);
    const double x = 0.5, s = 1e-3;
    // one-sided p-th difference quotients with step 1e-3
    const double right =
        (f(x + 3 * s) - 3 * f(x + 2 * s) + 3 * f(x + s) - f(x)) / (s * s * s);
    const double left =
        (f(x) - 3 * f(x - s) + 3 * f(x - 2 * s) - f(x - 3 * s)) / (s * s * s);
    CHECK(right > 0.0);
    CHECK(left < 0.0);
}

TEST_CASE("cusp p>=3 cap gluing is C2 at the band knots") {
    // hmin=0.1, c=60: the raw cusp crosses the cap well inside [0,1]
    const auto f = HurstFunction::cusp(0.1, 0.5, 3, 60.0, 0.8);
    CHECK(f(0.5) == 0.1);
    // far from x the value is capped
    CHECK(f(0.0) == 0.8);
    // the one-sided second-difference mismatch across each band knot shrinks
    // linearly in the step, so the second derivative has no jump there
    const double r0 = std::cbrt((0.8 - 0.1) / 60.0);
    for (double knot : {0.5 + r0 - std::min(0.1, r0 / 2), 0.5 + r0}) {
        auto jump = [&](double s) {
            const double lo = (f(knot - s) - 2 * f(knot - 2 * s) + f(knot - 3 * s)) / (s * s);
            const double hi = (f(knot + 3 * s) - 2 * f(knot + 2 * s) + f(knot + s)) / (s * s);
            return std::abs(hi - lo);
        };
        CHECK(jump(1e-6) < 0.3 * jump(1e-5) + 1e-2);
    }
}

TEST_CASE("sine family") {
    const auto f = HurstFunction::sine(0.5, 0.2, 1);
    CHECK(f.h_min() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(f(0.0) == doctest::Approx(0.3).epsilon(1e-15));
    for (const auto& pt : f.min_set().points) CHECK(pt.order == 2);
    CHECK_THROWS_AS(HurstFunction::sine(0.2, 0.3, 1), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::sine(0.9, 0.2, 1), std::invalid_argument);
}

TEST_CASE("range and minimum-set invariants on dense grids") {
    const auto families = {
        HurstFunction::constant(0.5),
        HurstFunction::plateau(0.3, 0.7, 0.4, 0.6),
        HurstFunction::cusp(0.3, 0.5, 2, 1.5, 0.8),
        HurstFunction::sine(0.5, 0.2, 2),
    };
    for (const auto& f : families) {
        for (int i = 0; i <= 1000; ++i) {
            const double v = f(i / 1000.0);
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        double min_on_set = 1.0, min_off_set = 1.0;
        const int N = 100000;
        for (int i = 0; i <= N; ++i) {
            const double t = static_cast<double>(i) / N;
            const double v = f(t);
            if (f.min_set().contains(t, 1e-15))
                min_on_set = std::min(min_on_set, v);
            else if (f.min_set().distance(t) > 1e-3)
                min_off_set = std::min(min_off_set, v);
        }
        CHECK(std::abs(min_on_set - f.h_min()) < 1e-12);
        CHECK(min_off_set > f.h_min());
    }
}

TEST_CASE("even-p cusp and centered plateau are symmetric about the center") {
    const auto cusp = HurstFunction::cusp(0.3, 0.5, 2, 1.5, 0.8);
    const auto plat = HurstFunction::plateau(0.3, 0.7, 0.4, 0.6);
    for (double d : {0.05, 0.1, 0.2, 0.3, 0.45}) {
        CHECK(cusp(0.5 + d) == doctest::Approx(cusp(0.5 - d)).epsilon(1e-15));
        CHECK(plat(0.5 + d) == doctest::Approx(plat(0.5 - d)).epsilon(1e-15));
    }
}

TEST_CASE("C2 families: second difference quotients converge across knots") {
    // the second derivative is 0 on both sides of every plateau knot, and the
    // centered quotient converges to it linearly in the step
    const auto f = HurstFunction::plateau(0.3, 0.7, 0.4, 0.6);
    for (double knot : {0.3, 0.4, 0.6, 0.7}) {
        auto d2 = [&](double s) {
            return std::abs((f(knot + s) - 2 * f(knot) + f(knot - s)) / (s * s));
        };
        CHECK(d2(1e-4) < 0.3 * d2(1e-3) + 1e-3);
    }
}

TEST_CASE("spec grammar parses all families with keys in any order") {
    CHECK(HurstFunction::parse("const:H=0.5")(0.2) == 0.5);
    CHECK(HurstFunction::parse("plateau:a=0.4,b=0.6,hmin=0.3,hmax=0.7")(0.5) == 0.3);
    CHECK(HurstFunction::parse("cusp:hmin=0.3,x=0.5,p=2,c=1,cap=0.8")(0.5) == 0.3);
    CHECK(HurstFunction::parse("sine:base=0.5,amp=0.2,freq=1").h_min() ==
          doctest::Approx(0.3));
    // round-trip through the canonical spec string
    const auto f = HurstFunction::plateau(0.3, 0.7, 0.4, 0.6);
    CHECK(HurstFunction::parse(f.spec_string())(0.33) == f(0.33));
}

TEST_CASE("spec grammar errors name the offending key") {
    using Catcher = std::invalid_argument;
    CHECK_THROWS_WITH_AS(HurstFunction::parse("const:H=1.5"),
                         doctest::Contains("key H"), Catcher);
    CHECK_THROWS_WITH_AS(HurstFunction::parse("const:Z=0.5"),
                         doctest::Contains("key H"), Catcher);  // H missing
    CHECK_THROWS_WITH_AS(HurstFunction::parse("plateau:hmin=0.3,hmax=0.7,a=0.4"),
                         doctest::Contains("key b"), Catcher);
    CHECK_THROWS_AS(HurstFunction::parse("wiggle:x=1"), Catcher);
    CHECK_THROWS_WITH_AS(HurstFunction::parse("const:H=abc"),
                         doctest::Contains("key H"), Catcher);
}
