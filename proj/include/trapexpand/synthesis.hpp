#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trapexpand/phase.hpp"

namespace trapexpand {

/// Constant-control arc with its endpoints; end chains from start under
/// propagate_constant.
struct Segment {
    BangControl control;
    double duration;
    PhaseState start;
    PhaseState end;
};

/// Piecewise-constant control schedule from (1,0) to (gamma,0). The boundary
/// control values u(0) = 1 and u(T) = 1/gamma^4 are instantaneous jumps kept
/// as metadata; they consume no time.
struct Schedule {
    ControlBounds bounds;
    double gamma;
    std::vector<Segment> segments;
    double boundary_u_initial;
    double boundary_u_final;
    double total_time;
};

struct Candidate {
    int n_turns;
    double time;
};

/// Minimum-time synthesis result: chosen turn count, switching ratio, time
/// breakdown, switching points, the full schedule, and every candidate time
/// that was evaluated.
struct SynthesisSolution {
    int n_turns;
    std::optional<double> s;          // absent for n_turns = 0
    double t_initial;                 // n >= 1: first Y-arc; n = 0: 0
    double t_x;                       // X-arc duration (both forms)
    double t_y;                       // n >= 1: intermediate Y-arc; n = 0: final Y-arc
    double t_final;                   // n >= 1: last Y-arc; n = 0: 0
    std::vector<PhaseState> switching_points;
    Schedule schedule;
    std::vector<Candidate> candidates;
    double total_time;
};

struct ZeroTurnTimes {
    double total;
    double x_duration;
    double y_duration;
    PhaseState switch_point;  // (kappa, mu), mu > 0
};

struct NTurnTimes {
    double total;
    double t_initial;
    double t_x;
    double t_y;
    double t_final;
    double s;
};

namespace detail {

inline void require_gamma(double gamma) {
    if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
}

inline double c_first(const ControlBounds& b) { return b.u2 + 1.0; }
inline double c_last(const ControlBounds& b, double gamma) {
    return b.u2 * gamma * gamma + 1.0 / (gamma * gamma);
}
inline double s_upper(const ControlBounds& b) {
    return (b.u2 - 1.0) * (b.u2 - 1.0) / 4.0;
}
inline double sqrt_clamped(double v) { return std::sqrt(std::max(0.0, v)); }

/// LHS - RHS of the switching-ratio transcendental equation; strictly
/// decreasing on (u1, s_upper].
inline double ratio_equation(const ControlBounds& b, double gamma, int n, double s) {
    const double c1 = c_first(b);
    const double cn = c_last(b, gamma);
    const double lhs = (c1 + sqrt_clamped(c1 * c1 - 4.0 * (s + b.u2))) /
                       (cn + sqrt_clamped(cn * cn - 4.0 * (s + b.u2)));
    const double rhs = std::pow((s - b.u1) / (s + b.u2), n);
    return lhs - rhs;
}

}  // namespace detail

/// One-switching (XY) transfer: total time, the two arc durations and the
/// switching point (kappa, mu) in the upper half-plane.
inline ZeroTurnTimes time_zero_turns(const ControlBounds& b, double gamma) {
    detail::require_gamma(gamma);
    const double u1 = b.u1, u2 = b.u2, g2 = gamma * gamma;

    const double tx = std::asinh(std::sqrt(u1 * (g2 - 1.0) * (u2 * g2 - 1.0) /
                                           (g2 * (u1 + u2) * (u1 + 1.0)))) /
                      std::sqrt(u1);
    const double ty = std::asin(std::sqrt(u2 * (g2 - 1.0) * (u1 * g2 + 1.0) /
                                          ((u1 + u2) * (u2 * g2 * g2 - 1.0)))) /
                      std::sqrt(u2);

    const double kappa2 = (u2 * g2 * g2 + 1.0 + g2 * (u1 - 1.0)) / (g2 * (u1 + u2));
    const double mu2 = 1.0 - u1 + u1 * kappa2 - 1.0 / kappa2;
    return {tx + ty, tx, ty, {std::sqrt(kappa2), std::sqrt(std::max(0.0, mu2))}};
}

/// Unique root s of the transcendental switching-ratio equation in
/// (u1, (u2-1)^2/4], or absent when no root exists there.
inline std::optional<double> solve_ratio(const ControlBounds& b, double gamma, int n) {
    detail::require_gamma(gamma);
    if (n < 1) throw std::invalid_argument("solve_ratio: n must be >= 1");

    const double sp = detail::s_upper(b);
    if (sp <= b.u1) return std::nullopt;
    // LHS - RHS > 0 at s -> u1+ always; a root exists iff it is <= 0 at sp.
    if (detail::ratio_equation(b, gamma, n, sp) > 0.0) return std::nullopt;

    double lo = b.u1, hi = sp;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (detail::ratio_equation(b, gamma, n, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double s = 0.5 * (lo + hi);

    // One Newton polish with a numerical derivative.
    const double h = 1e-7 * std::max(1.0, std::abs(s));
    const double f = detail::ratio_equation(b, gamma, n, s);
    const double df = (detail::ratio_equation(b, gamma, n, std::min(s + h, sp)) -
                       detail::ratio_equation(b, gamma, n, std::max(s - h, b.u1))) /
                      (std::min(s + h, sp) - std::max(s - h, b.u1));
    if (df != 0.0) {
        const double polished = s - f / df;
        if (polished > b.u1 && polished <= sp) s = polished;
    }
    return s;
}

/// Transfer time with n turns (2n switchings): T_n = T_I + n T_X + (n-1) T_Y + T_F,
/// each term in closed form from the switching ratio s. Absent when the ratio
/// equation has no root.
inline std::optional<NTurnTimes> time_n_turns(const ControlBounds& b, double gamma, int n) {
    const auto s_opt = solve_ratio(b, gamma, n);
    if (!s_opt) return std::nullopt;
    const double s = *s_opt;
    const double u1 = b.u1, u2 = b.u2;
    const double c1 = detail::c_first(b);
    const double cn = detail::c_last(b, gamma);
    const double su2 = std::sqrt(u2);

    const double ti = std::acos(-(s * c1 + u2 * detail::sqrt_clamped(c1 * c1 - 4.0 * (s + u2))) /
                                ((s + u2) * detail::sqrt_clamped(c1 * c1 - 4.0 * u2))) /
                      (2.0 * su2);
    const double tf = std::acos((-s * cn + u2 * detail::sqrt_clamped(cn * cn - 4.0 * (s + u2))) /
                                ((s + u2) * detail::sqrt_clamped(cn * cn - 4.0 * u2))) /
                      (2.0 * su2);
    const double tx = std::acosh((s + u1) / (s - u1)) / (2.0 * std::sqrt(u1));
    const double ty = (2.0 * M_PI - std::acos((s - u2) / (s + u2))) / (2.0 * su2);

    return NTurnTimes{ti + n * tx + (n - 1) * ty + tf, ti, tx, ty, tf, s};
}

/// Upper bound on the number of turns: floor(T0 / T_X(s_+)) with
/// s_+ = (u2-1)^2/4, or 0 when the ratio interval is empty.
inline int max_turns(const ControlBounds& b, double gamma) {
    detail::require_gamma(gamma);
    const double sp = detail::s_upper(b);
    if (sp <= b.u1) return 0;
    const double tx_min = std::acosh((sp + b.u1) / (sp - b.u1)) / (2.0 * std::sqrt(b.u1));
    return static_cast<int>(std::floor(time_zero_turns(b, gamma).total / tx_min));
}

/// Builds the full segment chain for a zero-turn (XY) or n-turn (Y(XY)^n)
/// schedule, propagating each arc in closed form.
inline Schedule build_schedule(const ControlBounds& b, double gamma, int n,
                               std::optional<double> s) {
    detail::require_gamma(gamma);
    Schedule sched{b, gamma, {}, 1.0, 1.0 / (gamma * gamma * gamma * gamma), 0.0};

    std::vector<std::pair<BangControl, double>> arcs;
    if (n == 0) {
        const auto zt = time_zero_turns(b, gamma);
        arcs = {{BangControl::x(b), zt.x_duration}, {BangControl::y(b), zt.y_duration}};
    } else {
        if (!s) throw std::invalid_argument("build_schedule: n >= 1 requires a switching ratio");
        const auto nt = time_n_turns(b, gamma, n);
        if (!nt) throw std::invalid_argument("build_schedule: infeasible turn count");
        arcs.emplace_back(BangControl::y(b), nt->t_initial);
        for (int i = 0; i < n; ++i) {
            arcs.emplace_back(BangControl::x(b), nt->t_x);
            arcs.emplace_back(BangControl::y(b), i + 1 < n ? nt->t_y : nt->t_final);
        }
    }

    PhaseState state{1.0, 0.0};
    for (const auto& [control, duration] : arcs) {
        Segment seg{control, duration, state, propagate_constant(state, control.value, duration)};
        state = seg.end;
        sched.total_time += duration;
        sched.segments.push_back(std::move(seg));
    }
    return sched;
}

/// Minimum-time synthesis: evaluates the one-switching time T0 and every
/// feasible n-turn time up to the turn bound, picks the minimum (ties go to
/// the smaller n), and builds the winning schedule.
inline SynthesisSolution synthesize(const ControlBounds& b, double gamma) {
    detail::require_gamma(gamma);

    const auto zt = time_zero_turns(b, gamma);
    SynthesisSolution sol{};
    sol.n_turns = 0;
    sol.t_x = zt.x_duration;
    sol.t_y = zt.y_duration;
    sol.total_time = zt.total;
    sol.candidates.push_back({0, zt.total});

    std::optional<NTurnTimes> best_nt;
    const int n_max = max_turns(b, gamma);
    for (int n = 1; n <= n_max; ++n) {
        const auto nt = time_n_turns(b, gamma, n);
        if (!nt) continue;
        sol.candidates.push_back({n, nt->total});
        if (nt->total < sol.total_time) {
            sol.n_turns = n;
            sol.total_time = nt->total;
            best_nt = nt;
        }
    }

    if (sol.n_turns > 0) {
        sol.s = best_nt->s;
        sol.t_initial = best_nt->t_initial;
        sol.t_x = best_nt->t_x;
        sol.t_y = best_nt->t_y;
        sol.t_final = best_nt->t_final;
    }

    sol.schedule = build_schedule(b, gamma, sol.n_turns, sol.s);
    for (std::size_t i = 0; i + 1 < sol.schedule.segments.size(); ++i) {
        sol.switching_points.push_back(sol.schedule.segments[i].end);
    }
    return sol;
}

}  // namespace trapexpand
