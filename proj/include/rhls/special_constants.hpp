#pragma once

// Gamma function and the closed-form constants of the reversed HLS problem.

#include <string_view>

namespace rhls {

/// Gamma(x) for 0 < x <= 60. Throws std::domain_error outside that range.
double gamma(double x);

/// |S^{2n+1}| = 2 pi^{n+1} / n!
double sphere_surface(int n);

/// Lower bound for C(Q, lambda, p, t) of the general reversed inequality on H^n.
/// Requires 0 < p, t < 1, lambda > 0 and 1/p + 1/t - lambda/Q = 2 (to 1e-12).
double general_lower_bound(int Q, double lambda, double p, double t);

/// Conformal lower bound on N_{Q,alpha}, alpha > Q = 2n + 2.
double conformal_lower_bound(int n, double alpha);

/// Closed-form candidates for the value of the functional at constants.
enum class UpperVariant {
    quarter_exponent,  // Gamma^2((Q+alpha)/4) in the denominator
    half_exponent,     // Gamma^2((Q+alpha)/2) in the denominator
    quadrature,        // |S|^{1-2/p_alpha} * int |1 - xi.conj(eta)|^{(alpha-Q)/2} d eta, numerically
};

std::string_view to_string(UpperVariant v);
UpperVariant upper_variant_from_string(std::string_view s);

/// Upper bound on N_{Q,alpha}. The quadrature variant uses the default rule
/// for n (product rule at resolution 24 for n = 1, 4096-node Monte Carlo
/// with seed 0 otherwise).
double conformal_upper_bound(int n, double alpha, UpperVariant variant);

/// D_{n,alpha} of the classical sharp inequality, 0 < alpha < Q.
double frank_lieb_constant(int n, double alpha);

/// p_alpha = 2Q / (Q + alpha)
double conformal_exponent(int n, double alpha);

struct BoundsReport {
    int n = 0;
    int Q = 0;
    double alpha = 0.0;
    double p_alpha = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    UpperVariant upper_variant = UpperVariant::quadrature;
};

/// Lower and upper bound sandwich. Throws std::logic_error if lower > upper.
BoundsReport bounds_report(int n, double alpha, UpperVariant variant = UpperVariant::quadrature);

/// Relative slack for sandwich membership. A solver started at constants on the
/// same rule reproduces the quadrature upper bound only up to rounding.
inline constexpr double kSandwichSlack = 1e-12;

inline bool in_sandwich(double lower, double upper, double estimate) {
    return estimate >= lower * (1.0 - kSandwichSlack) && estimate <= upper * (1.0 + kSandwichSlack);
}

}  // namespace rhls
