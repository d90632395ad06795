#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace trapexpand {

/// Admissible control interval [-u1, u2].
struct ControlBounds {
    double u1 = 1.0;
    double u2 = 1.0;

    ControlBounds() = default;
    ControlBounds(double lower_magnitude, double upper) : u1(lower_magnitude), u2(upper) {
        if (!(u1 >= 1.0) || !(u2 >= 1.0)) {
            throw std::invalid_argument("ControlBounds: require u1 >= 1 and u2 >= 1");
        }
    }
};

/// Point of the phase plane: x1 is the scaled trap width, x2 its scaled velocity.
/// The domain is {x1 > 0}; trajectories never leave it.
struct PhaseState {
    double x1;
    double x2;
};

enum class BangKind { X, Y };

/// One of the two extreme controls: X runs at -u1, Y at +u2.
struct BangControl {
    BangKind kind;
    double value;

    static BangControl x(const ControlBounds& b) { return {BangKind::X, -b.u1}; }
    static BangControl y(const ControlBounds& b) { return {BangKind::Y, b.u2}; }
};

/// Thrown by inter_switching_time when the forward trajectory never reaches
/// another switching point.
class no_switching_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require_domain(const PhaseState& s, const char* who) {
    if (!(s.x1 > 0.0)) {
        throw std::domain_error(std::string(who) + ": state outside domain, x1 = " +
                                std::to_string(s.x1));
    }
}
}  // namespace detail

/// Right-hand side of the phase-plane system: (x2, -u*x1 + 1/x1^3).
inline PhaseState vector_field(const PhaseState& s, double u) {
    detail::require_domain(s, "vector_field");
    return {s.x2, -u * s.x1 + 1.0 / (s.x1 * s.x1 * s.x1)};
}

/// Conserved quantity along a constant-control arc:
///   I = x2^2 + u*x1^2 + 1/x1^2.
inline double first_integral(const PhaseState& s, double u) {
    detail::require_domain(s, "first_integral");
    return s.x2 * s.x2 + u * s.x1 * s.x1 + 1.0 / (s.x1 * s.x1);
}

/// Exact propagation under constant control for time t.
///
/// Works through rho = x1^2, which obeys the linear ODE rho'' = 2I - 4u*rho
/// with I the first integral: trigonometric solution for u > 0, hyperbolic
/// for u < 0, quadratic for u = 0. x2 is recovered from the analytic rho',
/// so no square-root sign ambiguity arises.
inline PhaseState propagate_constant(const PhaseState& s, double u, double t) {
    detail::require_domain(s, "propagate_constant");
    const double rho0 = s.x1 * s.x1;
    const double drho0 = 2.0 * s.x1 * s.x2;
    const double inv = first_integral(s, u);

    double rho, drho;
    if (u > 0.0) {
        const double w = std::sqrt(u);
        const double c = std::cos(2.0 * w * t);
        const double sn = std::sin(2.0 * w * t);
        const double mean = inv / (2.0 * u);
        const double a = rho0 - mean;
        rho = mean + a * c + drho0 / (2.0 * w) * sn;
        drho = -2.0 * w * a * sn + drho0 * c;
    } else if (u < 0.0) {
        const double w = std::sqrt(-u);
        const double ch = std::cosh(2.0 * w * t);
        const double sh = std::sinh(2.0 * w * t);
        const double mean = inv / (2.0 * u);
        const double a = rho0 - mean;
        rho = mean + a * ch + drho0 / (2.0 * w) * sh;
        drho = 2.0 * w * a * sh + drho0 * ch;
    } else {
        rho = rho0 + drho0 * t + inv * t * t;
        drho = drho0 + 2.0 * inv * t;
    }

    const double x1 = std::sqrt(rho);
    return {x1, drho / (2.0 * x1)};
}

/// Time from a switching point to the next one along a constant-control arc.
///
/// Y-segment: tau in (0, pi/sqrt(u2)) from
///   sin(2 sqrt(u2) tau) = -2 sqrt(u2) x1 x2 / (x2^2 + u2 x1^2)
///   cos(2 sqrt(u2) tau) = (x2^2 - u2 x1^2) / (x2^2 + u2 x1^2),
/// the first positive root recovered by atan2 mapped into (0, 2*pi).
///
/// X-segment: the hyperbolic analogue; requires x2 < 0 and x2^2 > u1 x1^2,
/// otherwise the forward trajectory never switches again.
///
/// Depends only on the ratio x2/x1.
inline double inter_switching_time(const PhaseState& p, const BangControl& control,
                                   const ControlBounds& bounds) {
    detail::require_domain(p, "inter_switching_time");
    const double x1 = p.x1, x2 = p.x2;

    if (control.kind == BangKind::Y) {
        const double u2 = bounds.u2;
        const double denom = x2 * x2 + u2 * x1 * x1;
        const double sv = -2.0 * std::sqrt(u2) * x1 * x2 / denom;
        const double cv = (x2 * x2 - u2 * x1 * x1) / denom;
        double theta = std::atan2(sv, cv);
        if (theta <= 0.0) theta += 2.0 * M_PI;
        return theta / (2.0 * std::sqrt(u2));
    }

    const double u1 = bounds.u1;
    const double d = x2 * x2 - u1 * x1 * x1;
    if (d <= 0.0 || x2 >= 0.0) {
        throw no_switching_error("inter_switching_time: X-trajectory has no next switching");
    }
    const double ch = (x2 * x2 + u1 * x1 * x1) / d;
    return std::acosh(ch) / (2.0 * std::sqrt(u1));
}

}  // namespace trapexpand
