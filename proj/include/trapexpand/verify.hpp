#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "trapexpand/phase.hpp"
#include "trapexpand/synthesis.hpp"

namespace trapexpand {

/// One RK4 sample of a re-integrated schedule.
struct TrajectorySample {
    double t;
    PhaseState state;
    double u;  // control active at t
};

struct VerificationReport {
    double endpoint_error_x1 = 0.0;
    double endpoint_error_x2 = 0.0;
    double max_integral_drift = 0.0;
    double max_ermakov_residual = 0.0;
    bool ratio_check = true;
    bool structure_check = true;

    /// Pass thresholds: endpoint 1e-6, relative per-segment drift 1e-8, ratio
    /// deviation 1e-6, plus the structure check. The Ermakov residual is
    /// reported but not gated: it is a finite-difference diagnostic whose
    /// truncation error grows as 1/x1^5 on deep spirals.
    bool passed() const {
        return endpoint_error_x1 < 1e-6 && endpoint_error_x2 < 1e-6 &&
               max_integral_drift < 1e-8 && ratio_check && structure_check;
    }
};

/// Classic RK4 step for the phase-plane system.
inline PhaseState rk4_step(const PhaseState& s, double u, double h) {
    const PhaseState k1 = vector_field(s, u);
    const PhaseState k2 = vector_field({s.x1 + 0.5 * h * k1.x1, s.x2 + 0.5 * h * k1.x2}, u);
    const PhaseState k3 = vector_field({s.x1 + 0.5 * h * k2.x1, s.x2 + 0.5 * h * k2.x2}, u);
    const PhaseState k4 = vector_field({s.x1 + h * k3.x1, s.x2 + h * k3.x2}, u);
    return {s.x1 + h / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1),
            s.x2 + h / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2)};
}

/// Fixed-step RK4 over a constant-control stretch; the step count is rounded
/// up so the endpoint lands exactly at time t.
inline PhaseState rk4_integrate(PhaseState s, double u, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_integrate: dt must be positive");
    const auto n = static_cast<std::size_t>(std::ceil(t / dt - 1e-12));
    const double h = n > 0 ? t / static_cast<double>(n) : 0.0;
    for (std::size_t i = 0; i < n; ++i) s = rk4_step(s, u, h);
    return s;
}

/// RK4 re-integration of a whole schedule. Segment boundaries are hit exactly
/// by shrinking the step within each segment; samples cover [0, T] with the
/// final sample at exactly T.
inline std::vector<TrajectorySample> integrate_schedule(const Schedule& sched, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_schedule: dt must be positive");

    std::vector<TrajectorySample> samples;
    if (sched.segments.empty()) {
        samples.push_back({0.0, {1.0, 0.0}, sched.boundary_u_initial});
        return samples;
    }

    double t = 0.0;
    PhaseState state = sched.segments.front().start;
    samples.push_back({t, state, sched.segments.front().control.value});

    for (const auto& seg : sched.segments) {
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(seg.duration / dt - 1e-12)));
        const double h = seg.duration / static_cast<double>(n);
        const double t0 = t;
        for (std::size_t i = 1; i <= n; ++i) {
            state = rk4_step(state, seg.control.value, h);
            if (!(state.x1 > 0.0)) {
                throw std::domain_error("integrate_schedule: trajectory left {x1 > 0}");
            }
            t = (i == n) ? t0 + seg.duration : t0 + h * static_cast<double>(i);
            samples.push_back({t, state, seg.control.value});
        }
    }
    return samples;
}

/// Maximum residual of the trap-width equation b'' + u b = 1/b^3 over the
/// sampled trajectory, with b'' estimated by a five-point stencil on x2.
/// Samples within two steps of a control switch are skipped (the control is
/// discontinuous there), as are the outermost samples of each segment.
/// omega0 converts back to unrescaled units; in rescaled units pass 1.
inline double ermakov_residual(const std::vector<TrajectorySample>& samples,
                               double omega0 = 1.0) {
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < samples.size(); ++i) {
        const double u = samples[i].u;
        bool uniform = true;
        const double h = samples[i].t - samples[i - 1].t;
        for (std::size_t j = i - 2; j < i + 2; ++j) {
            if (samples[j].u != u || std::abs(samples[j + 1].t - samples[j].t - h) > 1e-12) {
                uniform = false;
                break;
            }
        }
        if (!uniform || h <= 0.0) continue;

        const double ddx1 = (-samples[i + 2].state.x2 + 8.0 * samples[i + 1].state.x2 -
                             8.0 * samples[i - 1].state.x2 + samples[i - 2].state.x2) /
                            (12.0 * h);
        const double x1 = samples[i].state.x1;
        const double r = std::abs(ddx1 + u * x1 - 1.0 / (x1 * x1 * x1));
        worst = std::max(worst, r);
    }
    return worst * omega0 * omega0;
}

namespace detail {

/// Segment structure: XY, or Y followed by n >= 1 repetitions of XY,
/// with the required junction half-planes.
inline bool structure_ok(const Schedule& sched) {
    const auto& segs = sched.segments;
    if (segs.size() < 2) return false;
    if (segs.size() % 2 == 0) {
        if (segs.size() != 2) return false;
        if (segs[0].control.kind != BangKind::X || segs[1].control.kind != BangKind::Y)
            return false;
    } else {
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const BangKind want = (i % 2 == 0) ? BangKind::Y : BangKind::X;
            if (segs[i].control.kind != want) return false;
        }
    }
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        const bool x_to_y = segs[i].control.kind == BangKind::X;
        const double x2 = segs[i].end.x2;
        if (x_to_y ? x2 <= 0.0 : x2 >= 0.0) return false;
    }
    return segs.back().control.kind == BangKind::Y;
}

/// Ratio law: switching-point ratios x2/x1 equal -sqrt(s), +sqrt(s),
/// ... alternating, and consecutive points are not axis mirror images.
inline bool ratios_ok(const SynthesisSolution& sol, double tol) {
    if (sol.n_turns == 0 || !sol.s) return true;
    const double root = std::sqrt(*sol.s);
    for (std::size_t j = 0; j < sol.switching_points.size(); ++j) {
        const auto& p = sol.switching_points[j];
        const double expected = (j % 2 == 0) ? -root : root;
        if (std::abs(p.x2 / p.x1 - expected) > tol) return false;
        if (j > 0 && std::abs(p.x1 - sol.switching_points[j - 1].x1) <= 1e-6) return false;
    }
    return true;
}

}  // namespace detail

/// Full independent verification of a synthesized solution: RK4 endpoint
/// error, per-segment first-integral drift, Ermakov residual, the switching
/// ratio law and the segment-structure law.
inline VerificationReport check_solution(const SynthesisSolution& sol, double dt) {
    VerificationReport rep;
    const auto samples = integrate_schedule(sol.schedule, dt);

    const auto& last = samples.back().state;
    rep.endpoint_error_x1 = std::abs(last.x1 - sol.schedule.gamma);
    rep.endpoint_error_x2 = std::abs(last.x2);

    // drift is measured relative to the invariant's magnitude, which can be
    // O(u2 * gamma^2) on the final Y-arc
    double seg_ref = 0.0;
    double prev_u = samples.front().u;
    bool have_ref = false;
    for (const auto& smp : samples) {
        if (!have_ref || smp.u != prev_u) {
            seg_ref = first_integral(smp.state, smp.u);
            prev_u = smp.u;
            have_ref = true;
            continue;
        }
        const double drift =
            std::abs(first_integral(smp.state, smp.u) - seg_ref) / (1.0 + std::abs(seg_ref));
        rep.max_integral_drift = std::max(rep.max_integral_drift, drift);
    }

    rep.max_ermakov_residual = ermakov_residual(samples);
    rep.ratio_check = detail::ratios_ok(sol, 1e-6);
    rep.structure_check = detail::structure_ok(sol.schedule);
    return rep;
}

}  // namespace trapexpand
