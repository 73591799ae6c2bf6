#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rhls/errors.hpp"
#include "rhls/verification.hpp"
#include "support.hpp"

using namespace rhls;
using rhls::test::rel;

namespace {

constexpr double kPi = std::numbers::pi;

StepFunction unit_ball_indicator(int n) {
    StepFunction F;
    F.centers.push_back(HPoint::identity(n));
    F.radii.push_back(1.0);
    F.heights.push_back(1.0);
    return F;
}

}  // namespace

TEST_SUITE("verification") {

TEST_CASE("step function basics") {
    StepFunction F = unit_ball_indicator(1);
    CHECK_NOTHROW(F.validate());
    CHECK(F(HPoint::identity(1)) == 1.0);
    HPoint::ZVector far(1);
    far(0) = {2.0, 0.0};
    CHECK(F(HPoint(far, 0.0)) == 0.0);
    CHECK(rel(F.quasi_norm(0.8), std::pow(kPi * kPi / 2.0, 1.25)) <= 1e-13);

    StepFunction overlap = F;
    overlap.centers.push_back(HPoint(far * 0.5, 0.0));
    overlap.radii.push_back(0.5);
    overlap.heights.push_back(2.0);
    CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);
    StepFunction bad = F;
    bad.heights[0] = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    StepFunction too_many;
    for (int k = 0; k < 9; ++k) {
        HPoint::ZVector z(1);
        z(0) = {10.0 * k, 0.0};
        too_many.centers.push_back(HPoint(z, 0.0));
        too_many.radii.push_back(1.0);
        too_many.heights.push_back(1.0);
    }
    CHECK_THROWS_AS(too_many.validate(), std::invalid_argument);
}

TEST_CASE("random step functions are valid and disjoint") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const StepFunction F = random_step_function(1, seed, 4);
        CHECK_NOTHROW(F.validate());
        CHECK(F.balls() >= 1);
        CHECK(F.balls() <= 4);
    }
    CHECK_THROWS_AS(random_step_function(1, 0, 9), std::invalid_argument);
}

TEST_CASE("ball points stay in the ball") {
    std::mt19937_64 rng(70);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    HPoint::ZVector c(1);
    c(0) = {1.5, -2.0};
    const HPoint center(c, 4.0);
    for (int k = 0; k < 2000; ++k) {
        HPoint::ZVector z(1);
        z(0) = {unit(rng), unit(rng)};
        const HPoint w(z, unit(rng));
        if (homogeneous_norm(w) >= 1.0) continue;
        CHECK(distance(ball_point(center, 0.7, w), center) < 0.7 * (1.0 + 1e-12));
    }
}

TEST_CASE("unit ball pair") {
    const StepFunction F = unit_ball_indicator(1);
    const auto rec = verify_reversed_hls_hn(F, F, 4, 2.0, 0.8, 0.8, 200000, 1);
    const double rhs = general_lower_bound(4, 2.0, 0.8, 0.8) * std::pow(kPi * kPi / 2.0, 2.5);
    CHECK(rel(rec.rhs, rhs) <= 1e-13);
    CHECK(rec.margin > 1.0);
    CHECK(!rec.violated);
    CHECK(rec.lhs_stderr < 0.02 * rec.lhs);
    CHECK(rec.samples == 200000);
    CHECK(rec.seed == 1);
}

TEST_CASE("margin is invariant under scaling and dilation") {
    const StepFunction F = random_step_function(1, 11);
    const StepFunction G = random_step_function(1, 12);
    const auto base = verify_reversed_hls_hn(F, G, 4, 2.0, 0.8, 0.8, 40000, 5);

    StepFunction F2 = F;
    for (double& h : F2.heights) h *= 2.0;
    const auto doubled = verify_reversed_hls_hn(F2, G, 4, 2.0, 0.8, 0.8, 40000, 5);
    CHECK(rel(doubled.lhs, 2.0 * base.lhs) <= 1e-12);
    CHECK(rel(doubled.rhs, 2.0 * base.rhs) <= 1e-12);
    CHECK(rel(doubled.margin, base.margin) <= 1e-12);

    // Dilating by 2 with heights 2^{-Q/p} keeps the quasi-norms; the LHS then
    // scales by 2^{lambda + 2Q - 2Q/p} = 1 under the exponent relation.
    const double h = std::pow(2.0, -4.0 / 0.8);
    const StepFunction Fd = F.dilated(2.0, h), Gd = G.dilated(2.0, h);
    CHECK(rel(Fd.quasi_norm(0.8), F.quasi_norm(0.8)) <= 1e-12);
    const auto dilated = verify_reversed_hls_hn(Fd, Gd, 4, 2.0, 0.8, 0.8, 40000, 5);
    CHECK(rel(dilated.margin, base.margin) <= 1e-10);
}

TEST_CASE("reversed inequality errors") {
    const StepFunction F = unit_ball_indicator(1);
    CHECK_THROWS_AS(verify_reversed_hls_hn(F, F, 4, 2.0, 0.8, 0.7, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_reversed_hls_hn(F, F, 6, 2.0, 0.8, 0.8, 1000, 1), std::invalid_argument);
    CHECK_THROWS_AS(verify_reversed_hls_hn(F, F, 4, 2.0, 0.8, 0.8, 4, 1), InsufficientSamples);
}

TEST_CASE("sphere inequality") {
    const auto rule = product_hopf_rule(12);
    const auto op = assemble_operator(rule, ProblemParams::critical(1, 6.0));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(rule.size());
    const auto rec = verify_sphere_inequality({one, one}, op);
    CHECK(rec.margin == doctest::Approx(0.2548 / 0.0879).epsilon(5e-3));
    CHECK(!rec.violated);
    std::mt19937_64 rng(71);
    std::normal_distribution<double> normal;
    for (int k = 0; k < 20; ++k) {
        DensityPair pair{one, one};
        for (Eigen::Index i = 0; i < rule.size(); ++i) {
            pair.f(i) = std::exp(2.0 * normal(rng));
            pair.g(i) = std::exp(2.0 * normal(rng));
        }
        CHECK(verify_sphere_inequality(pair, op).margin >= 1.0);
    }
    const auto sub = assemble_operator(rule, ProblemParams::make(1, 6.0, 0.7));
    CHECK_THROWS_AS(verify_sphere_inequality({one, one}, sub), std::invalid_argument);
}

TEST_CASE("conformal factor exponent") {
    CHECK(conformal_factor_exponent(1, 6.0) == doctest::Approx(-0.5));
    CHECK(conformal_factor_exponent(1, 8.0) == doctest::Approx(-1.0));
    CHECK(conformal_factor_exponent(2, 9.0) == doctest::Approx(-1.0));
}

TEST_CASE("sphere functional matches the operator") {
    const auto rule = product_hopf_rule(10);
    const auto params = ProblemParams::critical(1, 6.0);
    const auto op = assemble_operator(rule, params);
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> unit(0.5, 2.0);
    Eigen::VectorXd f(rule.size()), g(rule.size());
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
        f(i) = unit(rng);
        g(i) = unit(rng);
    }
    CHECK(rel(sphere_functional(f, g, rule, params), bilinear_form(f, g, op)) <= 1e-12);
}

TEST_CASE("conformal correspondence") {
    const auto params = ProblemParams::critical(1, 6.0);
    const auto rule = product_hopf_rule(24);
    const SphereFunction one = [](const SPoint&) { return 1.0; };
    const auto rec = verify_conformal_correspondence(one, one, params, rule, 200000, 3);
    CHECK(rec.agrees);
    CHECK(rel(rec.hn_value, rec.sphere_value) < 0.01);
    CHECK(rec.factor_exponent == doctest::Approx(-0.5));
    const auto off = verify_conformal_correspondence(one, one, params, rule, 200000, 3, 0.5);
    CHECK(!off.agrees);
    const SphereFunction bump = [](const SPoint& xi) { return std::exp(3.0 * xi(1).real()); };
    CHECK(verify_conformal_correspondence(bump, one, params, rule, 200000, 4).agrees);
    CHECK_THROWS_AS(verify_conformal_correspondence(one, one, params, rule, 1, 3), InsufficientSamples);
}

TEST_CASE("correspondence error shrinks with samples") {
    const auto params = ProblemParams::critical(1, 6.0);
    const auto rule = product_hopf_rule(24);
    const SphereFunction one = [](const SPoint&) { return 1.0; };
    const auto small = verify_conformal_correspondence(one, one, params, rule, 10000, 8);
    const auto large = verify_conformal_correspondence(one, one, params, rule, 640000, 8);
    CHECK(large.hn_stderr / small.hn_stderr == doctest::Approx(0.125).epsilon(0.1));
}

TEST_CASE("gamma disambiguation") {
    const auto rule = product_hopf_rule(24);
    for (double alpha : {5.0, 6.0, 8.0}) CHECK(gamma_formula_disambiguation(1, alpha, rule) == UpperVariant::quarter_exponent);
    // A rule too coarse to resolve 0.1% gives no verdict.
    CHECK_THROWS_AS(gamma_formula_disambiguation(1, 5.0, monte_carlo_rule(1, 50, 1)), AmbiguousVerdict);
}

TEST_CASE("quasi-triangle estimate and ball volume estimate") {
    const double g = estimate_quasi_triangle_constant(1, 20000, 3);
    CHECK(g <= kQuasiTriangleBound);
    CHECK(g > 0.9);
    const auto v = monte_carlo_ball_volume(1, 200000, 4);
    CHECK(std::abs(v.value - kPi * kPi / 2.0) <= 4.0 * v.stderr_);
    CHECK_THROWS_AS(monte_carlo_ball_volume(1, 1, 4), InsufficientSamples);
}

TEST_CASE("suite names") {
    for (auto s : all_suites()) CHECK(suite_from_string(to_string(s)) == s);
    CHECK(suite_from_string("hn-inequality") == Suite::hn_inequality);
    CHECK(suite_from_string("gamma-disambiguation") == Suite::gamma);
    CHECK_THROWS_AS(suite_from_string("nope"), std::invalid_argument);
}

TEST_CASE("suites pass and are reproducible") {
    for (auto s : {Suite::group_axioms, Suite::cayley, Suite::bounds, Suite::gamma}) {
        CAPTURE(to_string(s));
        const auto a = run_suite(s, 4, 2000);
        const auto b = run_suite(s, 4, 2000);
        CHECK(a.violations == 0);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(a.records[k].dump() == b.records[k].dump());
    }
}

}
