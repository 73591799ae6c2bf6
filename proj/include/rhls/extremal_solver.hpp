#pragma once

// Alternating minimization of I[f, g] / (||f||_p ||g||_p) on a quadrature rule,
// continuation in p up to the conformal exponent, and blow-up diagnostics.
//
// With g fixed, the minimizer over f >= 0 of I[f, g] / ||f||_p is
// f = c (A g)^{1/(p-1)} (equality in the reversed Hölder inequality), so each
// half-step is an exact partial minimization and the objective never increases.
// A fixed point satisfies N f^{p-1} = A g, N g^{p-1} = A f with N = I[f, g].

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rhls/hls_operator.hpp"
#include "rhls/sphere_quadrature.hpp"

namespace rhls {

enum class InitKind { constants, random, warm_start };

enum class UpdateOrder {
    sequential,    // f from the current g, then g from the new f
    simultaneous,  // both from the previous iterate; keeps f = g when started equal
};

std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& s);
std::string to_string(UpdateOrder order);

inline constexpr double kPositivityFloor = 1e-300;

struct SolverConfig {
    int max_iters = 5000;
    double tol_residual = 1e-10;
    /// Relative objective change below which an iteration counts as stalled.
    double tol_objective = 1e-15;
    int stall_window = 500;
    /// theta in f <- f_old^{1-theta} f_new^theta.
    double damping = 1.0;
    InitKind init = InitKind::constants;
    std::uint64_t seed = 0;
    /// Multiplicative noise exp(sigma * N(0,1)) for random init.
    double noise_sigma = 0.3;
    UpdateOrder order = UpdateOrder::sequential;
    std::optional<DensityPair> warm_start;
    /// Ascending exponents ending at p_alpha; empty means default_ladder().
    std::vector<double> ladder;

    /// Throws std::invalid_argument on bad tolerances, damping or ladder.
    void validate(const ProblemParams& params) const;
};

struct SolverReport {
    double p = 0.0;
    double N_est = 0.0;
    int iterations = 0;
    std::vector<double> objective_trace;  // entry 0 is the initial pair
    double el_residual = 0.0;
    double concentration_ratio = 1.0;  // max f / min f
    bool converged = false;
    std::string stop_reason;
    std::size_t clamp_events = 0;
    /// Largest increase between consecutive trace entries, relative to the earlier one.
    double max_ascent = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t rule_hash = 0;
    SolverConfig config;  // echo, without warm-start data
};

struct SolverResult {
    SolverReport report;
    DensityPair pair;  // normalized, ||f||_p = ||g||_p = 1
};

/// Solve at params.p on the operator's rule. Non-convergence is reported, never thrown.
SolverResult alternating_minimize(const ProblemParams& params, const KernelOperator& op, const SolverConfig& config);

/// Convenience overload that assembles the operator.
SolverResult alternating_minimize(const ProblemParams& params, const QuadratureRule& rule, const SolverConfig& config);

/// max over nodes of |N f^{p-1} - A g| / (A g) and |N g^{p-1} - A f| / (A f).
double el_residual(const DensityPair& pair, double N, const ProblemParams& params, const KernelOperator& op);

/// p_alpha (1 - 2^{-k}) for k = 1..steps, followed by p_alpha.
std::vector<double> default_ladder(double p_alpha, int steps = 6);

struct ContinuationResult {
    std::vector<SolverResult> steps;
    bool halted = false;  // a step failed to converge; later steps were skipped

    const SolverResult& final_step() const { return steps.back(); }
};

/// Runs the ladder, warm-starting each step from the previous minimizer.
ContinuationResult continuation_to_critical(const ProblemParams& params, const KernelOperator& op,
                                            const SolverConfig& config);

struct BlowupConfig {
    double threshold = 4.0;            // emit a profile when max f / min f exceeds this
    std::vector<double> radii;         // empty means 25 log-spaced radii in [1e-2, 1e2]
};

struct BlowupDiagnostics {
    double concentration_ratio = 1.0;
    Eigen::Index argmax_node = 0;
    bool profile_emitted = false;
    double lambda = 1.0;       // dilation with lambda^{alpha/(q-2)} phi(C(0)) = 1
    double phi_origin = 0.0;   // phi at the arg-max node, phi = f^{p-1}
    double profile_at_origin = 0.0;
    std::vector<double> radii;
    std::vector<double> horizontal;  // Phi((r e_1, 0))
    std::vector<double> vertical;    // Phi((0, r^2))
    double envelope_c1 = 0.0;        // min Phi / (1 + |u|^{alpha-Q}) over the sampled points
    double envelope_c2 = 0.0;        // max of the same ratio
};

BlowupDiagnostics blowup_diagnostics(const SolverReport& report, const DensityPair& pair, const QuadratureRule& rule,
                                     const KernelOperator& op, const ProblemParams& params,
                                     const BlowupConfig& config = {});

}  // namespace rhls
