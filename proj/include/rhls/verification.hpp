#pragma once

// Randomized checks of the reversed inequalities and conformal identities.
// Every record carries its seed and sample count so failures can be replayed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rhls/cayley.hpp"
#include "rhls/extremal_solver.hpp"
#include "rhls/heisenberg.hpp"
#include "rhls/hls_operator.hpp"
#include "rhls/special_constants.hpp"
#include "rhls/sphere_quadrature.hpp"

namespace rhls {

/// Nonnegative simple function sum_k h_k 1_{B(c_k, r_k)} on H^n with disjoint balls.
struct StepFunction {
    std::vector<HPoint> centers;
    std::vector<double> radii;
    std::vector<double> heights;

    static constexpr std::size_t kMaxBalls = 8;

    /// Throws std::invalid_argument on shape errors, non-positive entries or
    /// overlapping balls. The gauge is a metric, so balls are disjoint once
    /// d(c_i, c_j) >= r_i + r_j.
    void validate() const;

    int dim() const { return centers.empty() ? 0 : centers.front().dim(); }
    std::size_t balls() const noexcept { return centers.size(); }
    double operator()(const HPoint& u) const;
    /// (sum_k h_k^p |B_1| r_k^Q)^{1/p}, exact for disjoint balls.
    double quasi_norm(double p) const;
    /// Same function composed with delta_{1/s}, heights scaled by `height_scale`.
    StepFunction dilated(double s, double height_scale) const;
};

/// Up to `max_balls` disjoint balls with log-uniform radii and heights.
StepFunction random_step_function(int n, std::uint64_t seed, std::size_t max_balls = 3);

/// Uniform sample from B(center, radius) given a uniform point of B(0, 1).
HPoint ball_point(const HPoint& center, double radius, const HPoint& unit_ball_point);

struct MarginRecord {
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // lhs / rhs
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool violated = false;  // lhs < rhs
};

/// int int F(u) |v^{-1}u|^lambda G(v) du dv  >=  C(Q, lambda, p, t) ||F||_p ||G||_t,
/// LHS by Monte Carlo over the ball pairs, RHS in closed form.
/// Throws InsufficientSamples when the relative standard error exceeds 2%.
MarginRecord verify_reversed_hls_hn(const StepFunction& F, const StepFunction& G, int Q, double lambda, double p,
                                    double t, std::size_t samples, std::uint64_t seed);

/// objective_ratio at p_alpha divided by conformal_lower_bound.
MarginRecord verify_sphere_inequality(const DensityPair& pair, const KernelOperator& op);

using SphereFunction = std::function<double(const SPoint&)>;

/// Exponent e in  I_S[f, g] = 2^e * int int F(u) |u^{-1}v|^{alpha-Q} G(v) du dv
/// for the p_alpha-transports F, G:  e = (alpha - Q)(2 - Q) / (2Q).
double conformal_factor_exponent(int n, double alpha);

struct CorrespondenceRecord {
    double sphere_value = 0.0;
    double hn_value = 0.0;
    double hn_stderr = 0.0;
    double discrepancy_sigma = 0.0;  // |sphere - hn| / hn_stderr
    double factor_exponent = 0.0;    // exponent actually applied
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool agrees = false;  // discrepancy within 3 sigma
};

/// I_S[f, g] on the sphere by quadrature, versus the H^n double integral of the
/// transports by Monte Carlo with proposal J_C (uniform sphere points through C^{-1}).
/// `exponent_shift` perturbs the power of two for sensitivity controls.
CorrespondenceRecord verify_conformal_correspondence(const SphereFunction& f, const SphereFunction& g,
                                                     const ProblemParams& params, const QuadratureRule& rule,
                                                     std::size_t samples, std::uint64_t seed,
                                                     double exponent_shift = 0.0);

/// int int f(xi) g(eta) k(xi, eta) on a rule, streaming rows.
double sphere_functional(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const QuadratureRule& rule,
                         const ProblemParams& params);

/// Which closed form reproduces the value at constants: match < 0.1%, the other off by > 10x.
UpperVariant gamma_formula_disambiguation(int n, double alpha, const QuadratureRule& rule);

/// max |u v| / (|u| + |v|) over random pairs spanning several scales.
double estimate_quasi_triangle_constant(int n, std::size_t pairs, std::uint64_t seed);

/// Recorded regression bound for the quasi-triangle constant of the gauge.
inline constexpr double kQuasiTriangleBound = 1.0 + 1e-12;

/// Monte Carlo volume of {|z|^4 + t^2 < 1} from the bounding box [-1, 1]^{2n+1}.
struct VolumeEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};
VolumeEstimate monte_carlo_ball_volume(int n, std::size_t samples, std::uint64_t seed);

enum class Suite { group_axioms, cayley, bounds, hn_inequality, correspondence, gamma };

std::string to_string(Suite s);
Suite suite_from_string(const std::string& s);
std::vector<Suite> all_suites();

struct SuiteResult {
    Suite suite = Suite::group_axioms;
    std::vector<nlohmann::json> records;
    std::size_t violations = 0;
};

/// `samples` of 0 picks the suite's default size.
SuiteResult run_suite(Suite suite, std::uint64_t seed, std::size_t samples = 0);

}  // namespace rhls
