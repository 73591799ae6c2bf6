#include "rhls/sphere_quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "rhls/special_constants.hpp"

namespace rhls {

namespace {

std::uint64_t fingerprint(const RuleDescriptor& d, const Eigen::MatrixXcd& nodes, const Eigen::VectorXd& weights) {
    Fnv1a h;
    h.update_value(static_cast<int>(d.kind));
    h.update_value(d.n);
    h.update_value(d.resolution);
    h.update_value(d.seed);
    h.update_value(static_cast<std::uint64_t>(d.count));
    h.update_value(static_cast<int>(d.avoid_south_pole));
    h.update(nodes.data(), sizeof(std::complex<double>) * static_cast<std::size_t>(nodes.size()));
    h.update(weights.data(), sizeof(double) * static_cast<std::size_t>(weights.size()));
    return h.digest();
}

/// Gauss-Legendre abscissae/weights on [-1, 1] with m points (Newton on P_m).
/// boost::math::quadrature::gauss fixes the order at compile time, which the
/// resolution flag cannot.
void gauss_legendre(int m, Eigen::VectorXd& x, Eigen::VectorXd& w) {
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (m == 1) p0 = 1.0;
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        x(m - 1 - i) = z;
        w(m - 1 - i) = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace

std::string_view to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::monte_carlo: return "mc";
        case RuleKind::product_hopf: return "hopf";
    }
    return "unknown";
}

RuleKind rule_kind_from_string(std::string_view s) {
    if (s == "mc" || s == "monte-carlo") return RuleKind::monte_carlo;
    if (s == "hopf" || s == "product-hopf") return RuleKind::product_hopf;
    throw std::invalid_argument("unknown rule kind: " + std::string(s));
}

QuadratureRule::QuadratureRule(RuleDescriptor descriptor, Eigen::MatrixXcd nodes, Eigen::VectorXd weights,
                               std::optional<RingStructure> rings)
    : descriptor_(descriptor), nodes_(std::move(nodes)), weights_(std::move(weights)), rings_(std::move(rings)) {
    if (weights_.size() < 2) throw std::invalid_argument("QuadratureRule: need at least two nodes");
    if (nodes_.cols() != weights_.size() || nodes_.rows() != descriptor_.n + 1) {
        throw std::invalid_argument("QuadratureRule: node/weight shape mismatch");
    }
    if (!(weights_.array() > 0.0).all()) throw std::invalid_argument("QuadratureRule: weights must be positive");
    descriptor_.count = static_cast<std::size_t>(weights_.size());
    hash_ = fingerprint(descriptor_, nodes_, weights_);
}

QuadratureRule monte_carlo_rule(int n, std::size_t count, std::uint64_t seed, bool avoid_south_pole) {
    if (n < 1) throw std::invalid_argument("monte_carlo_rule: n must be >= 1");
    if (count < 2) throw std::invalid_argument("monte_carlo_rule: need at least two nodes");

    boost::random::mt19937_64 rng(seed);
    boost::random::normal_distribution<double> normal;
    const Eigen::Index N = static_cast<Eigen::Index>(count);
    Eigen::MatrixXcd nodes(n + 1, N);
    Eigen::VectorXcd xi(n + 1);
    for (Eigen::Index j = 0; j < N; ++j) {
        for (;;) {
            for (int k = 0; k <= n; ++k) {
                const double re = normal(rng);
                const double im = normal(rng);
                xi(k) = {re, im};
            }
            const double r = xi.norm();
            if (r == 0.0) continue;
            xi /= r;
            if (avoid_south_pole && std::abs(xi(n) + 1.0) < kSouthPoleCap) continue;
            break;
        }
        nodes.col(j) = xi;
    }
    const double surface = sphere_surface(n);
    Eigen::VectorXd weights = Eigen::VectorXd::Constant(N, surface / static_cast<double>(N));
    RuleDescriptor d{RuleKind::monte_carlo, n, 0, seed, count, avoid_south_pole};
    return QuadratureRule(d, std::move(nodes), std::move(weights));
}

QuadratureRule product_hopf_rule(int resolution) {
    if (resolution < 4) throw std::invalid_argument("product_hopf_rule: resolution must be >= 4");
    const int n_theta = (resolution + 1) / 2;
    const int n_phi = resolution;

    Eigen::VectorXd gx, gw;
    gauss_legendre(n_theta, gx, gw);

    // d(xi) on S^3 = cos(theta) sin(theta) dtheta dphi1 dphi2, and with x = sin^2(theta)
    // cos sin dtheta = dx / 2, x in [0, 1].
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    const Eigen::Index ring_size = static_cast<Eigen::Index>(n_phi) * n_phi;
    const Eigen::Index N = ring_size * n_theta;
    Eigen::MatrixXcd nodes(2, N);
    Eigen::VectorXd weights(N);
    RingStructure rings{n_theta, ring_size, Eigen::VectorXd(n_theta)};

    for (int a = 0; a < n_theta; ++a) {
        const double x = 0.5 * (gx(a) + 1.0);
        const double wx = 0.25 * gw(a);  // (1/2 from dx map) * (1/2 from the cos sin = dx/2 identity)
        const double s = std::sqrt(x);
        const double c = std::sqrt(1.0 - x);
        const double w = wx * dphi * dphi;
        rings.ring_weights(a) = w * static_cast<double>(ring_size);
        for (int i1 = 0; i1 < n_phi; ++i1) {
            const auto e1 = std::polar(1.0, i1 * dphi);
            for (int i2 = 0; i2 < n_phi; ++i2) {
                const Eigen::Index idx = a * ring_size + static_cast<Eigen::Index>(i1) * n_phi + i2;
                nodes(0, idx) = c * e1;
                nodes(1, idx) = s * std::polar(1.0, i2 * dphi);
                weights(idx) = w;
            }
        }
    }
    RuleDescriptor d{RuleKind::product_hopf, 1, resolution, 0, static_cast<std::size_t>(N), false};
    return QuadratureRule(d, std::move(nodes), std::move(weights), std::move(rings));
}

QuadratureRule default_rule(int n) {
    if (n == 1) return product_hopf_rule(24);
    return monte_carlo_rule(n, 4096, 0, true);
}

QuadratureRule rebuild_rule(const RuleDescriptor& d) {
    QuadratureRule rule = (d.kind == RuleKind::product_hopf) ? product_hopf_rule(d.resolution)
                                                             : monte_carlo_rule(d.n, d.count, d.seed, d.avoid_south_pole);
    if (rule.descriptor() != d) throw std::invalid_argument("rebuild_rule: descriptor is inconsistent");
    return rule;
}

double integrate(const QuadratureRule& rule, const Eigen::Ref<const Eigen::VectorXd>& values) {
    if (values.size() != rule.size()) throw std::invalid_argument("integrate: value count does not match rule");
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values(i))) {
            throw NonFiniteValue("integrate: non-finite integrand", static_cast<std::size_t>(i));
        }
        acc.add(rule.weights()(i) * values(i));
    }
    return acc.value();
}

double integrate(const QuadratureRule& rule, const SphericalFunction& f) {
    if (f.rule_hash != rule.hash()) throw std::invalid_argument("integrate: function was sampled on a different rule");
    return integrate(rule, f.values);
}

std::vector<std::pair<HPoint, double>> transport_nodes(const QuadratureRule& rule, const SphericalFunction& f,
                                                       double p) {
    if (!(p > 0.0)) throw std::invalid_argument("transport_nodes: p must be positive");
    if (f.rule_hash != rule.hash()) throw std::invalid_argument("transport_nodes: function was sampled on a different rule");
    std::vector<std::pair<HPoint, double>> out;
    out.reserve(static_cast<std::size_t>(rule.size()));
    const int n = rule.n();
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        if (std::abs(rule.nodes()(n, i) + 1.0) < kSouthPoleCap) continue;
        HPoint u = from_sphere(rule.node(i));
        const double F = std::pow(jacobian(u), 1.0 / p) * f.values(i);
        out.emplace_back(std::move(u), F);
    }
    return out;
}

}  // namespace rhls
