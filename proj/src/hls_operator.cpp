#include "rhls/hls_operator.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "rhls/json_io.hpp"
#include "rhls/numeric.hpp"
#include "rhls/special_constants.hpp"

namespace rhls {

namespace {

constexpr double kCriticalTol = 1e-12;

/// |1 - c|^s for c = xi.conj(eta); integer-valued s avoids pow on the hot path.
inline double kernel_from_product(std::complex<double> c, double s) {
    const double m2 = std::norm(std::complex<double>(1.0) - c);
    if (s == 1.0) return std::sqrt(m2);
    if (s == 2.0) return m2;
    return std::pow(m2, 0.5 * s);
}

/// Kernel row for node i: out_j = k(xi_i, xi_j), with out_i = 0 exactly.
void kernel_row(const Eigen::MatrixXcd& nodes, Eigen::Index i, double s, Eigen::Ref<Eigen::VectorXd> out) {
    const Eigen::VectorXcd products = nodes.adjoint() * nodes.col(i);  // conj(xi_j) . xi_i
    for (Eigen::Index j = 0; j < nodes.cols(); ++j) out(j) = kernel_from_product(products(j), s);
    out(i) = 0.0;
}

}  // namespace

ProblemParams ProblemParams::make(int n, double alpha, double p) {
    if (n < 1) throw std::invalid_argument("ProblemParams: n must be >= 1");
    ProblemParams r;
    r.n = n;
    r.Q = 2 * n + 2;
    if (!(alpha > r.Q) || !std::isfinite(alpha)) {
        throw std::domain_error("ProblemParams: reversed regime requires alpha > Q = " + std::to_string(r.Q));
    }
    r.alpha = alpha;
    r.lambda = alpha - r.Q;
    r.p_alpha = 2.0 * r.Q / (r.Q + alpha);
    r.q_alpha = 2.0 * r.Q / (r.Q - alpha);
    if (!(p > 0.0) || p > r.p_alpha + kCriticalTol) {
        throw std::invalid_argument("ProblemParams: p must lie in (0, p_alpha = " + std::to_string(r.p_alpha) +
                                    "], got " + std::to_string(p));
    }
    r.p = std::min(p, r.p_alpha);
    r.q = r.p / (r.p - 1.0);
    return r;
}

ProblemParams ProblemParams::critical(int n, double alpha) {
    const double Q = 2.0 * n + 2.0;
    return make(n, alpha, 2.0 * Q / (Q + alpha));
}

bool ProblemParams::is_critical() const noexcept { return std::abs(p - p_alpha) <= kCriticalTol; }

double kernel(const SPoint& xi, const SPoint& eta, const ProblemParams& params) {
    if (xi.n() != params.n || eta.n() != params.n) throw std::invalid_argument("kernel: dimension mismatch");
    return kernel_from_product(hermitian_product(xi, eta), params.kernel_exponent());
}

KernelOperator::KernelOperator(Eigen::MatrixXd kernel_matrix, Eigen::VectorXd weights, ProblemParams params,
                               std::uint64_t rule_hash)
    : kernel_(std::move(kernel_matrix)), weights_(std::move(weights)), params_(params), rule_hash_(rule_hash) {
    if (kernel_.rows() != kernel_.cols() || kernel_.rows() != weights_.size()) {
        throw std::invalid_argument("KernelOperator: shape mismatch");
    }
    row_sums_ = kernel_ * weights_;
}

Eigen::VectorXd KernelOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& g) const {
    if (g.size() != size()) throw std::invalid_argument("KernelOperator::apply: size mismatch");
    return kernel_ * weights_.cwiseProduct(g);
}

double KernelOperator::row_sum_spread() const {
    const double mean = row_sums_.mean();
    return (row_sums_.array() - mean).abs().maxCoeff() / mean;
}

KernelOperator assemble_operator(const QuadratureRule& rule, const ProblemParams& params, std::size_t node_cap,
                                 unsigned threads) {
    if (rule.n() != params.n) throw std::invalid_argument("assemble_operator: rule and params disagree on n");
    const auto N = static_cast<std::size_t>(rule.size());
    if (N > node_cap) {
        throw ProblemTooLarge("assemble_operator: " + std::to_string(N) + " nodes exceed the cap of " +
                              std::to_string(node_cap));
    }
    Eigen::MatrixXd K(rule.size(), rule.size());
    const double s = params.kernel_exponent();
    // Columns of K are rows of the symmetric kernel; column access is contiguous.
    parallel_for_blocks(N, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            kernel_row(rule.nodes(), static_cast<Eigen::Index>(i), s, K.col(static_cast<Eigen::Index>(i)));
        }
    });
    return KernelOperator(std::move(K), rule.weights(), params, rule.hash());
}

Eigen::VectorXd zonal_row_sums(const QuadratureRule& rule, const ProblemParams& params) {
    if (rule.n() != params.n) throw std::invalid_argument("zonal_row_sums: rule and params disagree on n");
    const double s = params.kernel_exponent();
    Eigen::VectorXd row(rule.size());
    Eigen::VectorXd sums(rule.size());
    auto row_sum = [&](Eigen::Index i) {
        kernel_row(rule.nodes(), i, s, row);
        CompensatedSum acc;
        for (Eigen::Index j = 0; j < rule.size(); ++j) acc.add(rule.weights()(j) * row(j));
        return acc.value();
    };
    if (const auto& rings = rule.rings()) {
        for (int a = 0; a < rings->rings; ++a) {
            const Eigen::Index rep = a * rings->ring_size;
            sums.segment(rep, rings->ring_size).setConstant(row_sum(rep));
        }
    } else {
        for (Eigen::Index i = 0; i < rule.size(); ++i) sums(i) = row_sum(i);
    }
    return sums;
}

double bilinear_form(const Eigen::Ref<const Eigen::VectorXd>& f, const Eigen::Ref<const Eigen::VectorXd>& g,
                     const KernelOperator& op) {
    if (f.size() != op.size() || g.size() != op.size()) throw std::invalid_argument("bilinear_form: size mismatch");
    const Eigen::VectorXd Ag = op.apply(g);
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < f.size(); ++i) acc.add(op.weights()(i) * f(i) * Ag(i));
    return acc.value();
}

double quasi_norm(const Eigen::Ref<const Eigen::VectorXd>& f, const Eigen::Ref<const Eigen::VectorXd>& weights,
                  double p) {
    if (!(p > 0.0)) throw std::invalid_argument("quasi_norm: p must be positive");
    if (f.size() != weights.size()) throw std::invalid_argument("quasi_norm: size mismatch");
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        if (!(f(i) >= 0.0)) {
            throw std::invalid_argument("quasi_norm: negative or NaN value at node " + std::to_string(i));
        }
        acc.add(weights(i) * std::pow(f(i), p));
    }
    return std::pow(acc.value(), 1.0 / p);
}

double quasi_norm(const Eigen::Ref<const Eigen::VectorXd>& f, const QuadratureRule& rule, double p) {
    return quasi_norm(f, rule.weights(), p);
}

double objective_ratio(const DensityPair& pair, const KernelOperator& op) {
    const double p = op.params().p;
    const double nf = quasi_norm(pair.f, op.weights(), p);
    const double ng = quasi_norm(pair.g, op.weights(), p);
    if (!(nf > 0.0) || !(ng > 0.0)) throw DegenerateInput("objective_ratio: density with zero quasi-norm");
    return bilinear_form(pair.f, pair.g, op) / (nf * ng);
}

double constants_objective(const QuadratureRule& rule, const ProblemParams& params) {
    const Eigen::VectorXd sums = zonal_row_sums(rule, params);
    CompensatedSum total, mass;
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        total.add(rule.weights()(i) * sums(i));
        mass.add(rule.weights()(i));
    }
    return total.value() / std::pow(mass.value(), 2.0 / params.p);
}

void export_kernel(const KernelOperator& op, const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little, "kernel export assumes a little-endian host");
    nlohmann::json header = {
        {"format", "rhls-kernel"},
        {"version", 1},
        {"rows", op.size()},
        {"cols", op.size()},
        {"dtype", "float64"},
        {"endianness", "little"},
        {"layout", "row-major"},
        {"trailing_weights", true},
        {"params", op.params()},
        {"rule_hash", hash_to_hex(op.rule_hash())},
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("export_kernel: cannot open " + path.string());
    out << header.dump() << '\n';
    // K is symmetric, so its column-major storage is also its row-major layout.
    out.write(reinterpret_cast<const char*>(op.kernel_matrix().data()),
              static_cast<std::streamsize>(sizeof(double) * op.kernel_matrix().size()));
    out.write(reinterpret_cast<const char*>(op.weights().data()),
              static_cast<std::streamsize>(sizeof(double) * op.weights().size()));
    if (!out) throw std::runtime_error("export_kernel: write failed for " + path.string());
}

KernelFile import_kernel(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("import_kernel: cannot open " + path.string());
    KernelFile file;
    std::getline(in, file.header_json);
    const auto header = nlohmann::json::parse(file.header_json);
    if (header.at("format") != "rhls-kernel") throw std::runtime_error("import_kernel: not a kernel file");
    const auto rows = header.at("rows").get<Eigen::Index>();
    const auto cols = header.at("cols").get<Eigen::Index>();
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(sizeof(double) * m.size()));
    if (!in) throw std::runtime_error("import_kernel: truncated payload in " + path.string());
    file.kernel = m;
    return file;
}

}  // namespace rhls
