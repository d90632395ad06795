#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trapexpand/phase.hpp"
#include "trapexpand/synthesis.hpp"
#include "trapexpand/verify.hpp"

namespace trapexpand {

/// Fixed 17-significant-digit formatting, so output files are deterministic
/// and round-trip exactly.
inline std::string fmt_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string kind_name(BangKind k) { return k == BangKind::X ? "X" : "Y"; }

inline nlohmann::json schedule_to_json(const Schedule& sched) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& seg : sched.segments) {
        segs.push_back({{"kind", kind_name(seg.control.kind)},
                        {"u", seg.control.value},
                        {"duration", seg.duration}});
    }
    return {{"schema", 1},
            {"u1", sched.bounds.u1},
            {"u2", sched.bounds.u2},
            {"gamma", sched.gamma},
            {"segments", segs},
            {"boundary_u_initial", sched.boundary_u_initial},
            {"boundary_u_final", sched.boundary_u_final}};
}

/// Rebuilds a schedule from interchange JSON, re-deriving segment endpoints
/// by closed-form propagation from (1,0).
inline Schedule schedule_from_json(const nlohmann::json& j) {
    const ControlBounds bounds(j.at("u1").get<double>(), j.at("u2").get<double>());
    const double gamma = j.at("gamma").get<double>();
    if (!(gamma > 1.0)) throw std::invalid_argument("schedule_from_json: gamma must exceed 1");

    Schedule sched{bounds, gamma, {}, j.value("boundary_u_initial", 1.0),
                   j.value("boundary_u_final", 1.0 / std::pow(gamma, 4)), 0.0};

    PhaseState state{1.0, 0.0};
    for (const auto& js : j.at("segments")) {
        const std::string kind = js.at("kind").get<std::string>();
        if (kind != "X" && kind != "Y") {
            throw std::invalid_argument("schedule_from_json: segment kind must be X or Y");
        }
        const BangControl control =
            kind == "X" ? BangControl::x(bounds) : BangControl::y(bounds);
        if (js.contains("u") && std::abs(js.at("u").get<double>() - control.value) > 1e-12) {
            throw std::invalid_argument("schedule_from_json: segment u inconsistent with kind");
        }
        const double duration = js.at("duration").get<double>();
        if (!(duration >= 0.0)) {
            throw std::invalid_argument("schedule_from_json: negative segment duration");
        }
        Segment seg{control, duration, state, propagate_constant(state, control.value, duration)};
        state = seg.end;
        sched.total_time += duration;
        sched.segments.push_back(seg);
    }
    return sched;
}

inline nlohmann::json solution_to_json(const SynthesisSolution& sol) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : sol.switching_points) points.push_back({{"x1", p.x1}, {"x2", p.x2}});

    nlohmann::json cands = nlohmann::json::array();
    for (const auto& c : sol.candidates) cands.push_back({{"n", c.n_turns}, {"time", c.time}});

    nlohmann::json breakdown;
    if (sol.n_turns == 0) {
        breakdown = {{"T_X0", sol.t_x}, {"T_Y0", sol.t_y}};
    } else {
        breakdown = {{"T_I", sol.t_initial},
                     {"T_X", sol.t_x},
                     {"T_Y", sol.t_y},
                     {"T_F", sol.t_final}};
    }

    nlohmann::json j = {{"schema", 1},
                        {"n_turns", sol.n_turns},
                        {"time_breakdown", breakdown},
                        {"switching_points", points},
                        {"candidates", cands},
                        {"total_time", sol.total_time},
                        {"schedule", schedule_to_json(sol.schedule)}};
    if (sol.s) j["s"] = *sol.s;
    return j;
}

inline nlohmann::json report_to_json(const VerificationReport& rep) {
    return {{"schema", 1},
            {"endpoint_error_x1", rep.endpoint_error_x1},
            {"endpoint_error_x2", rep.endpoint_error_x2},
            {"max_integral_drift", rep.max_integral_drift},
            {"max_ermakov_residual", rep.max_ermakov_residual},
            {"ratio_check", rep.ratio_check},
            {"structure_check", rep.structure_check},
            {"passed", rep.passed()}};
}

}  // namespace trapexpand
