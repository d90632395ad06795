#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trapexpand/synthesis.hpp"

namespace trapexpand {

/// One gamma of a sweep: T0, every feasible T_n, and the winner.
struct SweepRow {
    double gamma;
    double t0;
    std::vector<std::optional<double>> t_n;  // t_n[i] is the (i+1)-turn time
    int optimal_n;
    double optimal_t;
};

/// Cut-locus point: gamma at which the optimal strategy changes from n_low
/// to n_high turns, with the (equal) transfer time there.
struct Crossover {
    int n_low;
    int n_high;
    double gamma;
    double time_gap;  // |T_{n_low} - T_{n_high}| at the refined gamma
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<Crossover> crossovers;
    int n_columns;  // largest turn count tabulated
};

namespace detail {

inline std::optional<double> candidate_time(const ControlBounds& b, double gamma, int n) {
    if (n == 0) return time_zero_turns(b, gamma).total;
    const auto nt = time_n_turns(b, gamma, n);
    if (!nt) return std::nullopt;
    return nt->total;
}

}  // namespace detail

inline SweepRow sweep_row(const ControlBounds& b, double gamma, int n_columns) {
    SweepRow row{gamma, time_zero_turns(b, gamma).total, {}, 0, 0.0};
    row.optimal_t = row.t0;
    const int n_max = std::min(n_columns, max_turns(b, gamma));
    for (int n = 1; n <= n_columns; ++n) {
        const auto t = n <= n_max ? detail::candidate_time(b, gamma, n) : std::nullopt;
        row.t_n.push_back(t);
        if (t && *t < row.optimal_t) {
            row.optimal_t = *t;
            row.optimal_n = n;
        }
    }
    return row;
}

/// Gamma-sweep of candidate transfer times. Whenever the optimal turn count
/// changes between adjacent grid points, the crossover gamma is refined by
/// bisection on the time difference of the two competing strategies.
inline SweepResult sweep(const ControlBounds& b, double gamma_min, double gamma_max,
                         double step) {
    if (!(gamma_min > 1.0) || !(gamma_max > gamma_min) || !(step > 0.0)) {
        throw std::invalid_argument("sweep: require 1 < gamma_min < gamma_max and step > 0");
    }

    SweepResult result;
    result.n_columns = max_turns(b, gamma_max);
    for (double g = gamma_min; g <= gamma_max + 1e-12; g += step) {
        result.rows.push_back(sweep_row(b, std::min(g, gamma_max), result.n_columns));
    }

    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const auto& prev = result.rows[i - 1];
        const auto& cur = result.rows[i];
        if (prev.optimal_n == cur.optimal_n) continue;

        const int a = prev.optimal_n, bn = cur.optimal_n;
        const auto gap = [&](double g) -> std::optional<double> {
            const auto ta = detail::candidate_time(b, g, a);
            const auto tb = detail::candidate_time(b, g, bn);
            if (!ta || !tb) return std::nullopt;
            return *ta - *tb;
        };

        double lo = prev.gamma, hi = cur.gamma;
        for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto d = gap(mid);
            if (!d) {  // strategy b infeasible at mid: crossover is to the right
                lo = mid;
                continue;
            }
            // gap <= 0 on the prev-optimal side, > 0 past the crossover
            (*d < 0.0 ? lo : hi) = mid;
        }
        const double g_star = 0.5 * (lo + hi);
        const auto d = gap(g_star);
        result.crossovers.push_back({a, bn, g_star, d ? std::abs(*d) : 0.0});
    }
    return result;
}

}  // namespace trapexpand
