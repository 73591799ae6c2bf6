#include "rhls/extremal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <Eigen/QR>

#include "rhls/cayley.hpp"
#include "rhls/numeric.hpp"

namespace rhls {

namespace {

constexpr double kLadderTol = 1e-12;

/// Clamps below at the positivity floor, counting how many entries were raised.
std::size_t apply_floor(Eigen::VectorXd& v) {
    std::size_t hits = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v(i) >= kPositivityFloor)) {
            v(i) = kPositivityFloor;
            ++hits;
        }
    }
    return hits;
}

void normalize(Eigen::VectorXd& v, const Eigen::VectorXd& w, double p) {
    const double norm = quasi_norm(v, w, p);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateInput("solver: density lost positivity");
    v /= norm;
}

/// Exact partial minimizer of I[., h-source] / ||.||_p given h = A(other),
/// geometrically damped against the previous iterate, normalized.
Eigen::VectorXd half_step(Eigen::VectorXd h, const Eigen::VectorXd& previous, const Eigen::VectorXd& w, double p,
                          double damping, std::size_t& clamps) {
    clamps += apply_floor(h);
    // Scaling h by its minimum is undone by the normalization and keeps the power below 1.
    Eigen::VectorXd next = (h.array() / h.minCoeff()).pow(1.0 / (p - 1.0)).matrix();
    clamps += apply_floor(next);
    normalize(next, w, p);
    if (damping < 1.0) {
        next = (previous.array().pow(1.0 - damping) * next.array().pow(damping)).matrix();
        normalize(next, w, p);
    }
    return next;
}

double relative_residual(const Eigen::VectorXd& density, const Eigen::VectorXd& image, double N, double p) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < density.size(); ++i) {
        const double lhs = N * std::pow(std::max(density(i), kPositivityFloor), p - 1.0);
        worst = std::max(worst, std::abs(lhs - image(i)) / image(i));
    }
    return worst;
}

double weighted_dot(const Eigen::VectorXd& w, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < w.size(); ++i) acc.add(w(i) * a(i) * b(i));
    return acc.value();
}

DensityPair initial_pair(const SolverConfig& config, Eigen::Index N) {
    switch (config.init) {
        case InitKind::constants:
            return {Eigen::VectorXd::Ones(N), Eigen::VectorXd::Ones(N)};
        case InitKind::random: {
            boost::random::mt19937_64 rng(config.seed);
            boost::random::normal_distribution<double> normal;
            DensityPair pair{Eigen::VectorXd(N), Eigen::VectorXd(N)};
            for (Eigen::Index i = 0; i < N; ++i) pair.f(i) = std::exp(config.noise_sigma * normal(rng));
            for (Eigen::Index i = 0; i < N; ++i) pair.g(i) = std::exp(config.noise_sigma * normal(rng));
            return pair;
        }
        case InitKind::warm_start:
            if (!config.warm_start) throw std::invalid_argument("solver: warm-start init without a starting pair");
            if (config.warm_start->f.size() != N || config.warm_start->g.size() != N) {
                throw std::invalid_argument("solver: warm-start pair does not match the rule size");
            }
            return *config.warm_start;
    }
    throw std::invalid_argument("solver: unknown init kind");
}

}  // namespace

std::string to_string(InitKind kind) {
    switch (kind) {
        case InitKind::constants: return "constants";
        case InitKind::random: return "random";
        case InitKind::warm_start: return "warm-start";
    }
    return "unknown";
}

InitKind init_kind_from_string(const std::string& s) {
    if (s == "constants") return InitKind::constants;
    if (s == "random") return InitKind::random;
    if (s == "warm-start") return InitKind::warm_start;
    throw std::invalid_argument("unknown init kind: " + s);
}

std::string to_string(UpdateOrder order) {
    return order == UpdateOrder::sequential ? "sequential" : "simultaneous";
}

void SolverConfig::validate(const ProblemParams& params) const {
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    if (!(tol_residual > 0.0) || !(tol_objective > 0.0)) {
        throw std::invalid_argument("SolverConfig: tolerances must be positive");
    }
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("SolverConfig: damping must lie in (0, 1]");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("SolverConfig: noise sigma must be nonnegative");
    if (!ladder.empty()) {
        for (std::size_t k = 0; k < ladder.size(); ++k) {
            if (!(ladder[k] > 0.0)) throw std::invalid_argument("SolverConfig: ladder entries must be positive");
            if (k > 0 && !(ladder[k] > ladder[k - 1])) {
                throw std::invalid_argument("SolverConfig: ladder must be strictly increasing");
            }
        }
        if (std::abs(ladder.back() - params.p_alpha) > kLadderTol) {
            throw std::invalid_argument("SolverConfig: ladder must end at p_alpha");
        }
    }
}

double el_residual(const DensityPair& pair, double N, const ProblemParams& params, const KernelOperator& op) {
    if (!(N > 0.0)) throw std::invalid_argument("el_residual: N must be positive");
    const Eigen::VectorXd Ag = op.apply(pair.g);
    const Eigen::VectorXd Af = op.apply(pair.f);
    return std::max(relative_residual(pair.f, Ag, N, params.p), relative_residual(pair.g, Af, N, params.p));
}

SolverResult alternating_minimize(const ProblemParams& params, const KernelOperator& op, const SolverConfig& config) {
    config.validate(params);
    if (std::abs(params.alpha - op.params().alpha) > 0.0 || params.n != op.params().n) {
        throw std::invalid_argument("alternating_minimize: params do not match the assembled kernel");
    }
    if (!(op.row_sums().array() > 0.0).all()) {
        throw std::invalid_argument("alternating_minimize: kernel row sums must be strictly positive");
    }
    const Eigen::VectorXd& w = op.weights();
    const double p = params.p;

    SolverResult result;
    SolverReport& rep = result.report;
    rep.p = p;
    rep.seed = config.seed;
    rep.rule_hash = op.rule_hash();
    rep.config = config;
    rep.config.warm_start.reset();

    DensityPair pair = initial_pair(config, op.size());
    if (!(pair.f.array() > 0.0).all() || !(pair.g.array() > 0.0).all()) {
        throw DegenerateInput("alternating_minimize: initial densities must be strictly positive");
    }
    normalize(pair.f, w, p);
    normalize(pair.g, w, p);

    Eigen::VectorXd Ag = op.apply(pair.g);
    rep.objective_trace.push_back(weighted_dot(w, pair.f, Ag));

    int stalled = 0;
    rep.stop_reason = "max-iters";
    for (int it = 1; it <= config.max_iters; ++it) {
        Eigen::VectorXd Af;
        if (config.order == UpdateOrder::sequential) {
            pair.f = half_step(Ag, pair.f, w, p, config.damping, rep.clamp_events);
            Af = op.apply(pair.f);
            pair.g = half_step(Af, pair.g, w, p, config.damping, rep.clamp_events);
        } else {
            Eigen::VectorXd Af_old = op.apply(pair.f);
            Eigen::VectorXd f_next = half_step(Ag, pair.f, w, p, config.damping, rep.clamp_events);
            pair.g = half_step(Af_old, pair.g, w, p, config.damping, rep.clamp_events);
            pair.f = std::move(f_next);
            Af = op.apply(pair.f);
        }
        Ag = op.apply(pair.g);

        const double N = weighted_dot(w, pair.f, Ag);
        const double previous = rep.objective_trace.back();
        rep.objective_trace.push_back(N);
        rep.max_ascent = std::max(rep.max_ascent, (N - previous) / previous);
        rep.iterations = it;
        rep.N_est = N;
        rep.el_residual = std::max(relative_residual(pair.f, Ag, N, p), relative_residual(pair.g, Af, N, p));

        if (!std::isfinite(N) || !std::isfinite(rep.el_residual)) {
            rep.stop_reason = "non-finite";
            break;
        }
        if (rep.el_residual <= config.tol_residual) {
            rep.converged = true;
            rep.stop_reason = "residual";
            break;
        }
        stalled = (std::abs(N - previous) <= config.tol_objective * std::abs(previous)) ? stalled + 1 : 0;
        if (stalled >= config.stall_window) {
            rep.stop_reason = "stalled";
            break;
        }
    }
    if (rep.iterations == 0) rep.N_est = rep.objective_trace.front();
    rep.concentration_ratio = std::max(pair.f.maxCoeff() / pair.f.minCoeff(), pair.g.maxCoeff() / pair.g.minCoeff());
    result.pair = std::move(pair);
    return result;
}

SolverResult alternating_minimize(const ProblemParams& params, const QuadratureRule& rule, const SolverConfig& config) {
    return alternating_minimize(params, assemble_operator(rule, params), config);
}

std::vector<double> default_ladder(double p_alpha, int steps) {
    if (steps < 0) throw std::invalid_argument("default_ladder: steps must be nonnegative");
    std::vector<double> ladder;
    for (int k = 1; k <= steps; ++k) ladder.push_back(p_alpha * (1.0 - std::ldexp(1.0, -k)));
    ladder.push_back(p_alpha);
    return ladder;
}

ContinuationResult continuation_to_critical(const ProblemParams& params, const KernelOperator& op,
                                            const SolverConfig& config) {
    const ProblemParams critical = params.with_p(params.p_alpha);
    config.validate(critical);
    const std::vector<double> ladder = config.ladder.empty() ? default_ladder(critical.p_alpha) : config.ladder;

    ContinuationResult out;
    SolverConfig step_config = config;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        const ProblemParams step_params = critical.with_p(k + 1 == ladder.size() ? critical.p_alpha : ladder[k]);
        SolverResult step = alternating_minimize(step_params, op, step_config);
        const bool ok = step.report.converged;
        step_config.init = InitKind::warm_start;
        step_config.warm_start = step.pair;
        out.steps.push_back(std::move(step));
        if (!ok) {
            out.halted = k + 1 < ladder.size();
            break;
        }
    }
    return out;
}

BlowupDiagnostics blowup_diagnostics(const SolverReport& report, const DensityPair& pair, const QuadratureRule& rule,
                                     const KernelOperator& op, const ProblemParams& params,
                                     const BlowupConfig& config) {
    if (!(pair.f.array() > 0.0).all() || !(pair.g.array() > 0.0).all()) {
        throw DegenerateInput("blowup_diagnostics: pair must be strictly positive");
    }
    BlowupDiagnostics d;
    pair.f.maxCoeff(&d.argmax_node);
    d.concentration_ratio = pair.f.maxCoeff() / pair.f.minCoeff();
    if (!(d.concentration_ratio > config.threshold)) return d;

    // phi(xi) = (A g)(xi) / N, the EL-consistent extension of f^{p-1} off the grid.
    const double N = report.N_est > 0.0 ? report.N_est : bilinear_form(pair.f, pair.g, op);
    const Eigen::VectorXd wg = op.weights().cwiseProduct(pair.g);
    const double s = params.kernel_exponent();
    const int n = rule.n();

    // Unitary M with M e_{n+1} = xi*, so phi(M zeta) is phi rotated to put xi* at the north pole.
    const Eigen::VectorXcd top = rule.nodes().col(d.argmax_node);
    const Eigen::MatrixXcd top_matrix = top;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(top_matrix);
    const Eigen::MatrixXcd Qfull = qr.householderQ() * Eigen::MatrixXcd::Identity(n + 1, n + 1);
    Eigen::MatrixXcd M(n + 1, n + 1);
    M.leftCols(n) = Qfull.rightCols(n);
    M.col(n) = top;

    const auto phi_rotated = [&](const SPoint& zeta) {
        const Eigen::VectorXcd xi = M * zeta.coords();
        const Eigen::VectorXcd products = rule.nodes().adjoint() * xi;
        CompensatedSum acc;
        for (Eigen::Index j = 0; j < products.size(); ++j) {
            acc.add(wg(j) * std::pow(std::norm(1.0 - products(j)), 0.5 * s));
        }
        return acc.value() / N;
    };

    d.profile_emitted = true;
    d.phi_origin = phi_rotated(SPoint::north_pole(n));
    d.lambda = blowup_scale(d.phi_origin, params.alpha, params.q);
    const auto Phi = renormalize_blowup<double>(phi_rotated, d.lambda, params.alpha, params.q);
    d.profile_at_origin = Phi(HPoint::identity(n));

    d.radii = config.radii;
    if (d.radii.empty()) {
        for (int k = 0; k < 25; ++k) d.radii.push_back(std::pow(10.0, -2.0 + 4.0 * k / 24.0));
    }
    const double decay = params.alpha - params.Q;
    d.envelope_c1 = std::numeric_limits<double>::infinity();
    d.envelope_c2 = 0.0;
    auto record = [&](const HPoint& u) {
        const double value = Phi(u);
        const double ratio = value / (1.0 + std::pow(homogeneous_norm(u), decay));
        d.envelope_c1 = std::min(d.envelope_c1, ratio);
        d.envelope_c2 = std::max(d.envelope_c2, ratio);
        return value;
    };
    for (const double r : d.radii) {
        HPoint::ZVector z = HPoint::ZVector::Zero(n);
        z(0) = r;
        d.horizontal.push_back(record(HPoint(z, 0.0)));
        d.vertical.push_back(record(HPoint(HPoint::ZVector::Zero(n), r * r)));
    }
    return d;
}

}  // namespace rhls
