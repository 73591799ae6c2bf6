#pragma once

// Quadrature rules on S^{2n+1} and integration against them.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rhls/cayley.hpp"
#include "rhls/errors.hpp"
#include "rhls/heisenberg.hpp"
#include "rhls/numeric.hpp"

namespace rhls {

enum class RuleKind { monte_carlo, product_hopf };

std::string_view to_string(RuleKind kind);
RuleKind rule_kind_from_string(std::string_view s);

/// Everything needed to rebuild a rule bit-for-bit.
struct RuleDescriptor {
    RuleKind kind = RuleKind::monte_carlo;
    int n = 1;
    int resolution = 0;         // product rule only
    std::uint64_t seed = 0;     // Monte Carlo only
    std::size_t count = 0;      // node count
    bool avoid_south_pole = false;

    bool operator==(const RuleDescriptor&) const = default;
};

/// Theta rings of a product rule. Nodes [ring * ring_size, (ring+1) * ring_size)
/// share theta and are mapped onto each other by diagonal phase rotations.
struct RingStructure {
    int rings = 0;
    Eigen::Index ring_size = 0;
    Eigen::VectorXd ring_weights;  // total weight per ring
};

class QuadratureRule {
public:
    QuadratureRule(RuleDescriptor descriptor, Eigen::MatrixXcd nodes, Eigen::VectorXd weights,
                   std::optional<RingStructure> rings = std::nullopt);

    int n() const noexcept { return descriptor_.n; }
    Eigen::Index size() const noexcept { return weights_.size(); }

    /// (n+1) x N, one node per column.
    const Eigen::MatrixXcd& nodes() const noexcept { return nodes_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    SPoint node(Eigen::Index i) const { return SPoint(nodes_.col(i)); }

    const RuleDescriptor& descriptor() const noexcept { return descriptor_; }
    RuleKind kind() const noexcept { return descriptor_.kind; }
    const std::optional<RingStructure>& rings() const noexcept { return rings_; }

    /// FNV-1a fingerprint of descriptor, nodes and weights.
    std::uint64_t hash() const noexcept { return hash_; }

private:
    RuleDescriptor descriptor_;
    Eigen::MatrixXcd nodes_;
    Eigen::VectorXd weights_;
    std::optional<RingStructure> rings_;
    std::uint64_t hash_ = 0;
};

/// N i.i.d. uniform nodes (normalized Gaussians in R^{2n+2}), weights |S|/N.
/// With avoid_south_pole, nodes within kSouthPoleCap of the south pole are redrawn.
QuadratureRule monte_carlo_rule(int n, std::size_t count, std::uint64_t seed, bool avoid_south_pole = false);

/// Deterministic rule on S^3: xi = (cos(theta) e^{i phi1}, sin(theta) e^{i phi2}),
/// Gauss-Legendre in x = sin^2(theta) with ceil(resolution/2) nodes, and
/// `resolution` equispaced nodes in each of phi1, phi2.
QuadratureRule product_hopf_rule(int resolution);

/// Product rule at resolution 24 for n = 1, a 4096-node Monte Carlo rule with seed 0 otherwise.
QuadratureRule default_rule(int n);

QuadratureRule rebuild_rule(const RuleDescriptor& descriptor);

/// Function values aligned with a rule's nodes.
struct SphericalFunction {
    Eigen::VectorXd values;
    std::uint64_t rule_hash = 0;
};

template <typename Fn>
SphericalFunction sample(const QuadratureRule& rule, Fn&& fn) {
    SphericalFunction out{Eigen::VectorXd(rule.size()), rule.hash()};
    for (Eigen::Index i = 0; i < rule.size(); ++i) out.values(i) = fn(rule.node(i));
    return out;
}

/// sum_i w_i f_i with compensated summation. Throws NonFiniteValue naming the
/// first non-finite node.
double integrate(const QuadratureRule& rule, const Eigen::Ref<const Eigen::VectorXd>& values);
double integrate(const QuadratureRule& rule, const SphericalFunction& f);

template <typename Fn>
    requires std::is_invocable_r_v<double, Fn, const SPoint&>
double integrate(const QuadratureRule& rule, Fn&& fn) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        const double v = fn(rule.node(i));
        if (!std::isfinite(v)) throw NonFiniteValue("integrate: non-finite integrand", static_cast<std::size_t>(i));
        acc.add(rule.weights()(i) * v);
    }
    return acc.value();
}

/// Grid-sampled transport F(u_i) = J_C(u_i)^{1/p} f(xi_i) at u_i = C^{-1}(xi_i).
/// Nodes inside the south-pole cap are skipped.
std::vector<std::pair<HPoint, double>> transport_nodes(const QuadratureRule& rule, const SphericalFunction& f,
                                                       double p);

}  // namespace rhls
