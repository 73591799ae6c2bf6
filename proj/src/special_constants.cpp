#include "rhls/special_constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rhls/heisenberg.hpp"
#include "rhls/hls_operator.hpp"
#include "rhls/sphere_quadrature.hpp"

namespace rhls {

namespace {

constexpr double kExponentRelationTol = 1e-12;

void require_group_dim(int n, const char* where) {
    if (n < 1) throw std::invalid_argument(std::string(where) + ": n must be >= 1");
}

void require_reversed_regime(int n, double alpha, const char* where) {
    require_group_dim(n, where);
    const int Q = 2 * n + 2;
    if (!(alpha > Q)) {
        throw std::domain_error(std::string(where) + ": requires alpha > Q = " + std::to_string(Q));
    }
}

}  // namespace

double gamma(double x) {
    if (!(x > 0.0) || x > 60.0) {
        throw std::domain_error("gamma: argument must lie in (0, 60], got " + std::to_string(x));
    }
    return std::tgamma(x);
}

double sphere_surface(int n) {
    require_group_dim(n, "sphere_surface");
    return 2.0 * std::pow(std::numbers::pi, n + 1) / gamma(n + 1.0);
}

double ball_volume(int Q) {
    if (Q < 4 || Q % 2 != 0) {
        throw std::invalid_argument("ball_volume: Q must be an even integer >= 4");
    }
    const double q = Q;
    const double num = 2.0 * std::pow(std::numbers::pi, (q - 2.0) / 2.0) * gamma(0.5) * gamma((q + 2.0) / 4.0);
    const double den = (q - 2.0) * gamma((q - 2.0) / 2.0) * gamma((q + 4.0) / 4.0);
    return num / den;
}

double general_lower_bound(int Q, double lambda, double p, double t) {
    if (!(p > 0.0 && p < 1.0 && t > 0.0 && t < 1.0)) {
        throw std::invalid_argument("general_lower_bound: p and t must lie in (0, 1)");
    }
    if (!(lambda > 0.0)) throw std::invalid_argument("general_lower_bound: lambda must be positive");
    const double relation = 1.0 / p + 1.0 / t - lambda / Q;
    if (std::abs(relation - 2.0) > kExponentRelationTol) {
        throw std::invalid_argument("general_lower_bound: exponents violate 1/p + 1/t - lambda/Q = 2 (got " +
                                    std::to_string(relation) + ")");
    }
    const double s = lambda / Q;
    const double worst = std::max(p / (1.0 - p), t / (1.0 - t));
    return std::pow(4.0 * ball_volume(Q), -s) / (2.0 * p * t) * std::pow(s * worst, -s);
}

double conformal_exponent(int n, double alpha) {
    require_group_dim(n, "conformal_exponent");
    const double Q = 2.0 * n + 2.0;
    return 2.0 * Q / (Q + alpha);
}

double conformal_lower_bound(int n, double alpha) {
    require_reversed_regime(n, alpha, "conformal_lower_bound");
    const double Q = 2.0 * n + 2.0;
    const double pa = conformal_exponent(n, alpha);
    return std::pow(8.0 * ball_volume(2 * n + 2), (Q - alpha) / Q) /
           (std::pow(2.0, 1.0 + n * (alpha - Q) / Q) * pa * pa);
}

std::string_view to_string(UpperVariant v) {
    switch (v) {
        case UpperVariant::quarter_exponent: return "quarter-exponent";
        case UpperVariant::half_exponent: return "half-exponent";
        case UpperVariant::quadrature: return "quadrature";
    }
    return "unknown";
}

UpperVariant upper_variant_from_string(std::string_view s) {
    if (s == "quarter-exponent") return UpperVariant::quarter_exponent;
    if (s == "half-exponent") return UpperVariant::half_exponent;
    if (s == "quadrature") return UpperVariant::quadrature;
    throw std::invalid_argument("unknown upper-bound variant: " + std::string(s));
}

double conformal_upper_bound(int n, double alpha, UpperVariant variant) {
    require_reversed_regime(n, alpha, "conformal_upper_bound");
    const double Q = 2.0 * n + 2.0;
    const double lead = std::pow(sphere_surface(n), (Q - alpha) / Q) * gamma(n + 1.0) * gamma(alpha / 2.0);
    switch (variant) {
        case UpperVariant::quarter_exponent: {
            const double g = gamma((Q + alpha) / 4.0);
            return lead / (g * g);
        }
        case UpperVariant::half_exponent: {
            const double g = gamma((Q + alpha) / 2.0);
            return lead / (g * g);
        }
        case UpperVariant::quadrature: {
            const auto rule = default_rule(n);
            return constants_objective(rule, ProblemParams::critical(n, alpha));
        }
    }
    throw std::invalid_argument("conformal_upper_bound: unknown variant");
}

double frank_lieb_constant(int n, double alpha) {
    require_group_dim(n, "frank_lieb_constant");
    const double Q = 2.0 * n + 2.0;
    if (!(alpha > 0.0 && alpha < Q)) {
        throw std::domain_error("frank_lieb_constant: requires 0 < alpha < Q");
    }
    const double nfact = gamma(n + 1.0);
    const double base = std::pow(std::numbers::pi, n + 1) / (std::ldexp(1.0, n - 1) * nfact);
    const double g = gamma((Q + alpha) / 4.0);
    return std::pow(base, (Q - alpha) / Q) * nfact * gamma(alpha / 2.0) / (g * g);
}

BoundsReport bounds_report(int n, double alpha, UpperVariant variant) {
    BoundsReport r;
    r.n = n;
    r.Q = 2 * n + 2;
    r.alpha = alpha;
    r.p_alpha = conformal_exponent(n, alpha);
    r.lower = conformal_lower_bound(n, alpha);
    r.upper = conformal_upper_bound(n, alpha, variant);
    r.upper_variant = variant;
    if (!(r.lower > 0.0) || r.lower > r.upper) {
        throw std::logic_error("bounds_report: lower bound " + std::to_string(r.lower) + " exceeds upper bound " +
                               std::to_string(r.upper) + " for variant " + std::string(to_string(variant)));
    }
    return r;
}

}  // namespace rhls
