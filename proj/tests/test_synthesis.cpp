#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "trapexpand/synthesis.hpp"
#include "trapexpand/verify.hpp"

using namespace trapexpand;

TEST_CASE("zero-turn time closed form for u1 = u2 = 1") {
    const ControlBounds b(1.0, 1.0);
    for (double g : {2.0, 10.0, 100.0}) {
        CHECK(time_zero_turns(b, g).total ==
              Catch::Approx(std::log(g) + M_PI / 4.0).epsilon(1e-12));
    }
    // gamma -> 1+: the X-arc vanishes but the Y-arc tends to a quarter turn
    const auto limit = time_zero_turns(b, 1.0 + 1e-9);
    CHECK(limit.x_duration < 1e-4);
    CHECK(limit.total == Catch::Approx(M_PI / 4.0).margin(1e-4));
}

TEST_CASE("zero-turn schedule verified by RK4 shooting") {
    const ControlBounds b(1.0, 8.0);
    const auto zt = time_zero_turns(b, 2.0);
    CHECK(zt.total == Catch::Approx(1.0913508649333508).epsilon(1e-12));

    PhaseState s{1.0, 0.0};
    s = rk4_integrate(s, -b.u1, zt.x_duration, 1e-6);
    CHECK(s.x1 == Catch::Approx(zt.switch_point.x1).margin(1e-8));
    CHECK(s.x2 == Catch::Approx(zt.switch_point.x2).margin(1e-8));
    CHECK(s.x2 > 0.0);  // XY junction in the upper half-plane
    s = rk4_integrate(s, b.u2, zt.y_duration, 1e-6);
    CHECK(s.x1 == Catch::Approx(2.0).margin(1e-6));
    CHECK(s.x2 == Catch::Approx(0.0).margin(1e-6));

    CHECK_THROWS_AS(time_zero_turns(b, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(time_zero_turns(b, 1.0), std::invalid_argument);
}

TEST_CASE("solve_ratio: empty interval and infeasible gamma") {
    CHECK_FALSE(solve_ratio(ControlBounds(1.0, 1.0), 5.0, 1).has_value());
    CHECK_FALSE(solve_ratio(ControlBounds(1.0, 8.0), 1.0 + 1e-6, 1).has_value());
}

TEST_CASE("solve_ratio root, residual and uniqueness") {
    const ControlBounds b(1.0, 8.0);
    const auto s = solve_ratio(b, 6.0, 1);
    REQUIRE(s.has_value());
    CHECK(*s > b.u1);
    CHECK(*s <= (b.u2 - 1.0) * (b.u2 - 1.0) / 4.0);
    CHECK(*s == Catch::Approx(1.251082719804891).epsilon(1e-12));
    CHECK(std::abs(detail::ratio_equation(b, 6.0, 1, *s)) < 1e-10);

    // scan: exactly one sign change over the ratio interval
    const double sp = (b.u2 - 1.0) * (b.u2 - 1.0) / 4.0;
    int sign_changes = 0;
    double prev = detail::ratio_equation(b, 6.0, 1, b.u1 + 1e-9);
    const int n_scan = 100000;
    for (int i = 1; i <= n_scan; ++i) {
        const double sv = b.u1 + 1e-9 + (sp - b.u1 - 1e-9) * i / n_scan;
        const double f = detail::ratio_equation(b, 6.0, 1, sv);
        if ((prev > 0.0) != (f > 0.0)) ++sign_changes;
        prev = f;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("solve_ratio monotone bracketing") {
    const ControlBounds b(1.0, 50.0);
    const double sp = (b.u2 - 1.0) * (b.u2 - 1.0) / 4.0;
    const double g = 10.0;
    const double c1 = detail::c_first(b), cn = detail::c_last(b, g);
    double prev_lhs = 1e300, prev_rhs = -1e300;
    for (int i = 1; i <= 1000; ++i) {
        const double s = b.u1 + (sp - b.u1) * i / 1000.0;
        const double lhs = (c1 + detail::sqrt_clamped(c1 * c1 - 4.0 * (s + b.u2))) /
                           (cn + detail::sqrt_clamped(cn * cn - 4.0 * (s + b.u2)));
        const double rhs = std::pow((s - b.u1) / (s + b.u2), 2);
        CHECK(lhs < prev_lhs);
        CHECK(rhs > prev_rhs);
        prev_lhs = lhs;
        prev_rhs = rhs;
    }
}

TEST_CASE("n-turn times and the zero/one-turn crossover") {
    const ControlBounds b(1.0, 8.0);

    CHECK_FALSE(time_n_turns(ControlBounds(1.0, 1.0), 4.0, 1).has_value());

    const auto t1_small = time_n_turns(b, 2.0, 1);
    REQUIRE(t1_small.has_value());
    CHECK(t1_small->total > time_zero_turns(b, 2.0).total);

    const auto t1_large = time_n_turns(b, 9.0, 1);
    REQUIRE(t1_large.has_value());
    CHECK(t1_large->total < time_zero_turns(b, 9.0).total);
    CHECK(t1_large->total == Catch::Approx(2.484596012953533).epsilon(1e-12));
}

TEST_CASE("max_turns bound") {
    CHECK(max_turns(ControlBounds(1.0, 1.0), 5.0) == 0);
    CHECK(max_turns(ControlBounds(1.0, 8.0), 10.0) >= 1);
    CHECK(max_turns(ControlBounds(1.0, 50.0), 15.0) >= 3);
}

TEST_CASE("synthesize picks the fastest candidate") {
    const auto sol_small = synthesize(ControlBounds(1.0, 8.0), 1.5);
    CHECK(sol_small.n_turns == 0);
    CHECK_FALSE(sol_small.s.has_value());

    const auto sol_two = synthesize(ControlBounds(1.0, 50.0), 14.0);
    CHECK(sol_two.n_turns == 2);
    CHECK(sol_two.switching_points.size() == 4);

    const auto sol_unit = synthesize(ControlBounds(1.0, 1.0), std::exp(1.0));
    CHECK(sol_unit.n_turns == 0);
    CHECK(sol_unit.total_time == Catch::Approx(1.0 + M_PI / 4.0).epsilon(1e-12));

    CHECK_THROWS_AS(synthesize(ControlBounds(1.0, 8.0), 0.5), std::invalid_argument);
}

TEST_CASE("candidate dominance") {
    for (double g : {2.0, 5.0, 9.0, 12.0}) {
        const auto sol = synthesize(ControlBounds(1.0, 50.0), g);
        for (const auto& c : sol.candidates) {
            CHECK(sol.total_time <= c.time + 1e-12);
        }
    }
}

TEST_CASE("build_schedule: zero-turn chain reaches the target") {
    const ControlBounds b(1.0, 8.0);
    const auto sched = build_schedule(b, 2.0, 0, std::nullopt);
    REQUIRE(sched.segments.size() == 2);
    CHECK(sched.segments[0].control.kind == BangKind::X);
    CHECK(sched.segments[1].control.kind == BangKind::Y);
    CHECK(sched.segments.back().end.x1 == Catch::Approx(2.0).margin(1e-9));
    CHECK(sched.segments.back().end.x2 == Catch::Approx(0.0).margin(1e-9));
    CHECK(sched.boundary_u_initial == 1.0);
    CHECK(sched.boundary_u_final == Catch::Approx(1.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("build_schedule: one-turn structure and ratio alternation") {
    const ControlBounds b(1.0, 8.0);
    const auto sol = synthesize(b, 9.0);
    REQUIRE(sol.n_turns == 1);
    REQUIRE(sol.schedule.segments.size() == 3);
    REQUIRE(sol.switching_points.size() == 2);

    const double root = std::sqrt(*sol.s);
    const auto& p0 = sol.switching_points[0];
    const auto& p1 = sol.switching_points[1];
    CHECK(p0.x2 / p0.x1 == Catch::Approx(-root).margin(1e-9));
    CHECK(p1.x2 / p1.x1 == Catch::Approx(root).margin(1e-9));
    CHECK(std::abs(p1.x1 - p0.x1) > 1e-6);  // not mirror images

    CHECK(sol.schedule.segments.back().end.x1 == Catch::Approx(9.0).margin(1e-9));
    CHECK(sol.schedule.segments.back().end.x2 == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("segment chaining invariant") {
    const auto sol = synthesize(ControlBounds(1.0, 50.0), 14.0);
    for (const auto& seg : sol.schedule.segments) {
        const auto prop = propagate_constant(seg.start, seg.control.value, seg.duration);
        CHECK(std::abs(prop.x1 - seg.end.x1) < 1e-10 * (1.0 + seg.end.x1));
        CHECK(std::abs(prop.x2 - seg.end.x2) < 1e-10 * (1.0 + std::abs(seg.end.x2)));
    }
    double sum = 0.0;
    for (const auto& seg : sol.schedule.segments) sum += seg.duration;
    CHECK(sum == Catch::Approx(sol.schedule.total_time).epsilon(1e-14));
}

TEST_CASE("intermediate X and Y durations are equal within a spiral") {
    const auto sol = synthesize(ControlBounds(1.0, 50.0), 14.0);
    REQUIRE(sol.n_turns == 2);
    const auto& segs = sol.schedule.segments;
    CHECK(segs[1].duration == Catch::Approx(segs[3].duration).epsilon(1e-14));  // X arcs
    CHECK(segs[1].duration == Catch::Approx(sol.t_x).epsilon(1e-14));
    CHECK(segs[2].duration == Catch::Approx(sol.t_y).epsilon(1e-14));
    CHECK(segs[0].duration == Catch::Approx(sol.t_initial).epsilon(1e-14));
    CHECK(segs[4].duration == Catch::Approx(sol.t_final).epsilon(1e-14));
}
