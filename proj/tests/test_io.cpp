#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "trapexpand/io.hpp"
#include "trapexpand/synthesis.hpp"

using namespace trapexpand;

TEST_CASE("schedule JSON round trip") {
    const auto sol = synthesize(ControlBounds(1.0, 8.0), 9.0);
    const auto j = schedule_to_json(sol.schedule);
    const auto back = schedule_from_json(j);

    REQUIRE(back.segments.size() == sol.schedule.segments.size());
    CHECK(back.total_time == Catch::Approx(sol.schedule.total_time).epsilon(1e-15));
    CHECK(back.boundary_u_initial == 1.0);
    CHECK(back.boundary_u_final == Catch::Approx(1.0 / std::pow(9.0, 4)).epsilon(1e-15));
    for (std::size_t i = 0; i < back.segments.size(); ++i) {
        CHECK(back.segments[i].control.kind == sol.schedule.segments[i].control.kind);
        CHECK(back.segments[i].end.x1 ==
              Catch::Approx(sol.schedule.segments[i].end.x1).epsilon(1e-14));
    }
}

TEST_CASE("schedule JSON rejects bad input") {
    auto j = schedule_to_json(synthesize(ControlBounds(1.0, 8.0), 2.0).schedule);

    auto bad = j;
    bad["segments"][0]["kind"] = "Z";
    CHECK_THROWS_AS(schedule_from_json(bad), std::invalid_argument);

    bad = j;
    bad["segments"][0]["duration"] = -1.0;
    CHECK_THROWS_AS(schedule_from_json(bad), std::invalid_argument);

    bad = j;
    bad["gamma"] = 0.5;
    CHECK_THROWS_AS(schedule_from_json(bad), std::invalid_argument);

    bad = j;
    bad["segments"][0]["u"] = 3.0;  // inconsistent with kind X
    CHECK_THROWS_AS(schedule_from_json(bad), std::invalid_argument);
}

TEST_CASE("solution JSON carries the full synthesis record") {
    const auto sol = synthesize(ControlBounds(1.0, 50.0), 14.0);
    const auto j = solution_to_json(sol);

    CHECK(j.at("schema") == 1);
    CHECK(j.at("n_turns") == 2);
    CHECK(j.at("s").get<double>() == Catch::Approx(*sol.s).epsilon(1e-15));
    CHECK(j.at("switching_points").size() == 4);
    CHECK(j.at("candidates").size() == sol.candidates.size());
    CHECK(j.at("time_breakdown").contains("T_I"));
    CHECK(j.at("time_breakdown").contains("T_F"));

    const auto j0 = solution_to_json(synthesize(ControlBounds(1.0, 8.0), 2.0));
    CHECK_FALSE(j0.contains("s"));
    CHECK(j0.at("time_breakdown").contains("T_X0"));
}

TEST_CASE("float formatting is deterministic and round-trips") {
    CHECK(fmt_float(0.1) == fmt_float(0.1));
    for (double v : {1.0913508649333508, M_PI, 1e-300, -2.5, 0.0}) {
        CHECK(std::stod(fmt_float(v)) == v);
    }
}
