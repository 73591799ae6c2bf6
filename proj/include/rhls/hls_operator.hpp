#pragma once

// The reversed-HLS kernel |1 - xi.conj(eta)|^{(alpha-Q)/2}, its discretization
// on a quadrature rule, and the functionals built from it.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "rhls/cayley.hpp"
#include "rhls/sphere_quadrature.hpp"

namespace rhls {

/// (n, Q, alpha, p) and the exponents derived from them.
struct ProblemParams {
    int n = 1;
    int Q = 4;
    double alpha = 0.0;
    double lambda = 0.0;   // alpha - Q
    double p_alpha = 0.0;  // 2Q / (Q + alpha)
    double q_alpha = 0.0;  // 2Q / (Q - alpha), negative
    double p = 0.0;        // active exponent, 0 < p <= p_alpha
    double q = 0.0;        // p / (p - 1), negative

    /// Throws std::domain_error unless alpha > Q, std::invalid_argument unless 0 < p <= p_alpha.
    static ProblemParams make(int n, double alpha, double p);
    static ProblemParams critical(int n, double alpha);

    ProblemParams with_p(double p_new) const { return make(n, alpha, p_new); }
    /// (alpha - Q) / 2
    double kernel_exponent() const noexcept { return 0.5 * lambda; }
    bool is_critical() const noexcept;
};

/// k(xi, eta) = |1 - xi.conj(eta)|^{(alpha-Q)/2}
double kernel(const SPoint& xi, const SPoint& eta, const ProblemParams& params);

inline constexpr std::size_t kDefaultNodeCap = 8192;

/// Dense discretization (A g)_i = sum_j w_j k(xi_i, xi_j) g_j.
class KernelOperator {
public:
    KernelOperator() = default;
    KernelOperator(Eigen::MatrixXd kernel_matrix, Eigen::VectorXd weights, ProblemParams params,
                   std::uint64_t rule_hash);

    Eigen::Index size() const noexcept { return weights_.size(); }
    /// Unweighted symmetric kernel values K_ij = k(xi_i, xi_j).
    const Eigen::MatrixXd& kernel_matrix() const noexcept { return kernel_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    const ProblemParams& params() const noexcept { return params_; }
    std::uint64_t rule_hash() const noexcept { return rule_hash_; }

    /// A g
    Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& g) const;
    /// A 1
    const Eigen::VectorXd& row_sums() const noexcept { return row_sums_; }
    /// max_i |rowsum_i - mean| / mean
    double row_sum_spread() const;

private:
    Eigen::MatrixXd kernel_;
    Eigen::VectorXd weights_;
    Eigen::VectorXd row_sums_;
    ProblemParams params_;
    std::uint64_t rule_hash_ = 0;
};

/// Throws ProblemTooLarge when rule.size() exceeds node_cap.
KernelOperator assemble_operator(const QuadratureRule& rule, const ProblemParams& params,
                                 std::size_t node_cap = kDefaultNodeCap, unsigned threads = default_thread_count());

/// Row sums (A 1)_i without storing the matrix. Product rules evaluate one
/// representative per theta ring.
Eigen::VectorXd zonal_row_sums(const QuadratureRule& rule, const ProblemParams& params);

/// I[f, g] = sum_i w_i f_i (A g)_i
double bilinear_form(const Eigen::Ref<const Eigen::VectorXd>& f, const Eigen::Ref<const Eigen::VectorXd>& g,
                     const KernelOperator& op);

/// (sum_i w_i f_i^p)^{1/p}, 0 < p < 1 (p = 1 accepted). Throws on negative entries.
double quasi_norm(const Eigen::Ref<const Eigen::VectorXd>& f, const QuadratureRule& rule, double p);
double quasi_norm(const Eigen::Ref<const Eigen::VectorXd>& f, const Eigen::Ref<const Eigen::VectorXd>& weights,
                  double p);

struct DensityPair {
    Eigen::VectorXd f;
    Eigen::VectorXd g;
};

/// I[f, g] / (||f||_p ||g||_p). Throws DegenerateInput on a zero norm.
double objective_ratio(const DensityPair& pair, const KernelOperator& op);

/// Value of the objective at constant densities:
/// |S|^{1 - 2/p} * (sum_i w_i (A 1)_i) / |S|.
double constants_objective(const QuadratureRule& rule, const ProblemParams& params);

/// Flat binary kernel export: one JSON header line, then N*N little-endian
/// doubles in row-major order.
void export_kernel(const KernelOperator& op, const std::filesystem::path& path);

struct KernelFile {
    std::string header_json;
    Eigen::MatrixXd kernel;
};
KernelFile import_kernel(const std::filesystem::path& path);

}  // namespace rhls
