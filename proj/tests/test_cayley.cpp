#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rhls/cayley.hpp"
#include "rhls/special_constants.hpp"
#include "rhls/sphere_quadrature.hpp"
#include "support.hpp"

using namespace rhls;
using rhls::test::random_hpoint;
using rhls::test::random_spoint;
using rhls::test::rel;

namespace {

constexpr double kPi = std::numbers::pi;

HPoint point1(std::complex<double> z, double t) {
    HPoint::ZVector v(1);
    v(0) = z;
    return HPoint(v, t);
}

/// Proposal on H^1 with z ~ (1/pi)(1+|z|^2)^{-2} and t | z ~ Cauchy(0, 1+|z|^2).
struct CayleyProposal {
    std::mt19937_64 rng;
    explicit CayleyProposal(std::uint64_t seed) : rng(seed) {}

    std::pair<HPoint, double> draw() {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double u = unit(rng);
        const double r2 = u / (1.0 - u);  // P(|z|^2 <= s) = s / (1 + s)
        const double phase = 2.0 * kPi * unit(rng);
        const double a = 1.0 + r2;
        const double t = a * std::tan(kPi * (unit(rng) - 0.5));
        const double density = (1.0 / kPi) / (a * a) * a / (kPi * (a * a + t * t));
        return {point1(std::polar(std::sqrt(r2), phase), t), density};
    }
};

}  // namespace

TEST_SUITE("cayley") {

TEST_CASE("poles") {
    const SPoint north = to_sphere(HPoint::identity(1));
    CHECK(std::abs(north(1) - 1.0) == 0.0);
    CHECK(std::abs(north(0)) == 0.0);
    const HPoint origin = from_sphere(SPoint::north_pole(2));
    CHECK(homogeneous_norm(origin) == 0.0);
    CHECK_THROWS_AS(from_sphere(SPoint::south_pole(1)), SouthPoleSingularity);
}

TEST_CASE("sphere point validation") {
    SPoint::Vector xi(2);
    xi << std::complex<double>(1, 0), std::complex<double>(1, 0);
    CHECK_THROWS_AS(SPoint{xi}, std::invalid_argument);
}

TEST_CASE("images lie on the sphere and invert") {
    for (int n : {1, 2}) {
        std::mt19937_64 rng(20 + n);
        double norm_err = 0.0, roundtrip = 0.0, sphere_roundtrip = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const HPoint u = random_hpoint(n, rng, 3.0);
            const SPoint xi = to_sphere(u);
            norm_err = std::max(norm_err, std::abs(xi.coords().norm() - 1.0));
            const HPoint back = from_sphere(xi);
            roundtrip = std::max(roundtrip, std::max((back.z() - u.z()).cwiseAbs().maxCoeff(), std::abs(back.t() - u.t())));
            const SPoint eta = random_spoint(n, rng);
            sphere_roundtrip = std::max(sphere_roundtrip, (to_sphere(from_sphere(eta)).coords() - eta.coords()).cwiseAbs().maxCoeff());
        }
        CHECK(norm_err <= 1e-12);
        CHECK(roundtrip < 1e-10);
        CHECK(sphere_roundtrip < 1e-9);
    }
}

TEST_CASE("jacobian") {
    CHECK(jacobian(HPoint::identity(1)) == 8.0);
    CHECK(jacobian(HPoint::identity(2)) == 32.0);
    std::mt19937_64 rng(23);
    for (int k = 0; k < 1000; ++k) {
        const HPoint u = random_hpoint(2, rng);
        CHECK(jacobian(u) > 0.0);
        CHECK(jacobian(u) <= 32.0);
    }
    double previous = jacobian(HPoint::identity(1));
    for (double r = 0.1; r < 5.0; r += 0.1) {
        const double j = jacobian(point1({r, 0.0}, 0.3));
        CHECK(j < previous);
        previous = j;
    }
    const HPoint u = point1({0.3, 0.4}, 0.5);
    CHECK(jacobian(dilate(1e3, u)) < 1e-15);
}

TEST_CASE("jacobian integrates to the sphere surface") {
    CayleyProposal proposal(24);
    double sum = 0.0, sum2 = 0.0;
    const int samples = 400000;
    for (int k = 0; k < samples; ++k) {
        const auto [u, density] = proposal.draw();
        const double x = jacobian(u) / density;
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
    CHECK(rel(mean, 2.0 * kPi * kPi) < 0.01);
    CHECK(std::abs(mean - 2.0 * kPi * kPi) < 4.0 * se);
}

TEST_CASE("chordal gauge") {
    std::mt19937_64 rng(25);
    const SPoint xi = random_spoint(1, rng);
    CHECK(chordal_gauge(xi, xi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(chordal_gauge(SPoint::north_pole(1), SPoint::south_pole(1)) == 2.0);
    for (int k = 0; k < 1000; ++k) {
        const SPoint a = random_spoint(2, rng), b = random_spoint(2, rng);
        const double g = chordal_gauge(a, b);
        CHECK(g >= 0.0);
        CHECK(g <= 2.0 + 1e-15);
        CHECK(g == doctest::Approx(chordal_gauge(b, a)).epsilon(1e-14));
    }
}

TEST_CASE("distance relation on random pairs") {
    // Right side from raw coordinates, without distance() or cayley_weight().
    for (int n : {1, 2}) {
        std::mt19937_64 rng(26 + n);
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const HPoint u = random_hpoint(n, rng, 2.0), v = random_hpoint(n, rng, 2.0);
            const std::complex<double> twist = (u.z().array() * v.z().array().conjugate()).sum();
            const double dz2 = (u.z() - v.z()).squaredNorm();
            const double dt = v.t() - u.t() - 2.0 * twist.imag();
            const double gauge2 = std::sqrt(dz2 * dz2 + dt * dt);  // |u^{-1} v|^2
            const double au = std::pow(1.0 + u.z().squaredNorm(), 2) + u.t() * u.t();
            const double av = std::pow(1.0 + v.z().squaredNorm(), 2) + v.t() * v.t();
            const double rhs = 2.0 * gauge2 / std::sqrt(au * av);
            worst = std::max(worst, rel(chordal_gauge(to_sphere(u), to_sphere(v)), rhs));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("frank lieb profile") {
    CHECK(frank_lieb_profile(HPoint::identity(1), 6.0) == 1.0);
    CHECK(frank_lieb_profile(point1({0, 0}, 1), 2.0) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
    CHECK_THROWS_AS(frank_lieb_profile(HPoint::identity(1), 0.0), std::invalid_argument);
    // Decay |u|^{-(Q+alpha)} at infinity.
    const HPoint u = point1({0.6, 0.2}, -0.7);
    const double lambda = 1e3, alpha = 6.0;
    const double scaled = frank_lieb_profile(dilate(lambda, u), alpha) * std::pow(lambda, 4.0 + alpha);
    CHECK(rel(scaled, std::pow(homogeneous_norm(u), -(4.0 + alpha))) < 1e-4);
}

TEST_CASE("transport of constants") {
    for (int n : {1, 2}) {
        const double alpha = 2.0 * n + 5.0;
        const double pa = conformal_exponent(n, alpha);
        const auto one = [](const SPoint&) { return 1.0; };
        const auto F = transport_to_heisenberg<double>(one, pa);
        const auto J = transport_to_heisenberg<double>(one, 1.0);
        const double factor = std::pow(2.0, (2.0 * n + 1.0) / pa);
        std::mt19937_64 rng(28 + n);
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const HPoint u = random_hpoint(n, rng, 2.0);
            worst = std::max(worst, rel(F(u), factor * frank_lieb_profile(u, alpha)));
            CHECK(J(u) == doctest::Approx(jacobian(u)).epsilon(1e-14));
        }
        CHECK(worst <= 1e-12);
    }
    CHECK_THROWS_AS(transport_to_heisenberg<double>([](const SPoint&) { return 1.0; }, 0.0), std::invalid_argument);
}

TEST_CASE("transport preserves L^p norms") {
    // Sphere side by the product rule, H^1 side by Monte Carlo under CayleyProposal.
    const auto rule = product_hopf_rule(32);
    const auto f = [](const SPoint& xi) { return std::exp(xi(0).real() + 0.5 * xi(1).imag()); };
    for (double p : {0.5, 0.8, 1.0, 2.0}) {
        const double sphere = integrate(rule, [&](const SPoint& xi) { return std::pow(f(xi), p); });
        const auto F = transport_to_heisenberg<double>(f, p);
        CayleyProposal proposal(30);
        double sum = 0.0, sum2 = 0.0;
        const int samples = 200000;
        for (int k = 0; k < samples; ++k) {
            const auto [u, density] = proposal.draw();
            const double x = std::pow(F(u), p) / density;
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / samples;
        const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
        CHECK(std::abs(mean - sphere) < 4.0 * se);
    }
}

TEST_CASE("renormalized blow-up") {
    const double alpha = 6.0, q = -4.0;
    const auto one = [](const SPoint&) { return 1.0; };
    const auto Phi1 = renormalize_blowup<double>(one, 1.0, alpha, q);
    std::mt19937_64 rng(31);
    for (int k = 0; k < 100; ++k) {
        const HPoint u = random_hpoint(1, rng);
        CHECK(Phi1(u) == doctest::Approx(std::pow(cayley_weight(u), (alpha - 4.0) / 4.0)).epsilon(1e-14));
    }
    const double c = 7.5;
    const double lambda = blowup_scale(c, alpha, q);
    const auto Phi = renormalize_blowup<double>([c](const SPoint&) { return c; }, lambda, alpha, q);
    CHECK(std::abs(Phi(HPoint::identity(1)) - 1.0) <= 1e-12);
    CHECK_THROWS_AS(renormalize_blowup<double>(one, 1.0, alpha, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(renormalize_blowup<double>(one, 0.0, alpha, q), std::invalid_argument);
    CHECK_THROWS_AS(blowup_scale(1.0, alpha, 2.0), std::invalid_argument);
}

TEST_CASE("renormalization flattens a concentrated profile") {
    // f^{p-1} dips to eps at the north pole when f concentrates there. Over a
    // fixed H^1 window the transported ratio is ~1/eps, the renormalized one is O(1).
    const double alpha = 6.0, q = -4.0, eps = 0.01;
    const auto dip = [eps](const SPoint& xi) { return eps + std::sqrt(std::abs(1.0 - xi(1))); };
    const double lambda = blowup_scale(dip(SPoint::north_pole(1)), alpha, q);
    CHECK(lambda == doctest::Approx(eps));
    const auto Phi = renormalize_blowup<double>(dip, lambda, alpha, q);
    const auto plain = renormalize_blowup<double>(dip, 1.0, alpha, q);
    double lo = 1e300, hi = 0.0, plain_lo = 1e300, plain_hi = 0.0;
    for (double r : {0.0, 0.25, 0.5, 1.0}) {
        const HPoint u = point1({r, 0.0}, r * r);
        lo = std::min(lo, Phi(u));
        hi = std::max(hi, Phi(u));
        plain_lo = std::min(plain_lo, plain(u));
        plain_hi = std::max(plain_hi, plain(u));
    }
    CHECK(hi / lo < 5.0);
    CHECK(plain_hi / plain_lo > 20.0);
}

}
