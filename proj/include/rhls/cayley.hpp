#pragma once

// Cayley transform H^n -> S^{2n+1} \ {south pole}, its Jacobian, and the
// function transports built on it.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "rhls/errors.hpp"
#include "rhls/heisenberg.hpp"

namespace rhls {

/// Nodes closer than this to the south pole are excluded from inverse-Cayley
/// evaluation; denominators below it raise SouthPoleSingularity.
inline constexpr double kSouthPoleGuard = 1e-12;

/// Samplers that feed nodes through C^{-1} reject nodes within this distance.
inline constexpr double kSouthPoleCap = 1e-6;

/// A unit vector xi in C^{n+1}.
template <typename Scalar>
class SpherePoint {
public:
    using Complex = std::complex<Scalar>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    SpherePoint() = default;

    explicit SpherePoint(Vector xi) : xi_(std::move(xi)) {
        if (xi_.size() < 2) {
            throw std::invalid_argument("SpherePoint: need at least two complex coordinates");
        }
        using std::abs;
        if (!xi_.allFinite() || abs(xi_.norm() - Scalar(1)) > Scalar(1e-12)) {
            throw std::invalid_argument("SpherePoint: coordinates must lie on the unit sphere");
        }
    }

    /// (0, ..., 0, 1)
    static SpherePoint north_pole(int n) {
        Vector xi = Vector::Zero(n + 1);
        xi(n) = Complex(1);
        return SpherePoint(std::move(xi));
    }

    /// (0, ..., 0, -1)
    static SpherePoint south_pole(int n) {
        Vector xi = Vector::Zero(n + 1);
        xi(n) = Complex(-1);
        return SpherePoint(std::move(xi));
    }

    const Vector& coords() const noexcept { return xi_; }
    const Complex& operator()(Eigen::Index i) const { return xi_(i); }
    /// Group dimension n (the sphere is S^{2n+1}).
    int n() const noexcept { return static_cast<int>(xi_.size()) - 1; }

private:
    Vector xi_;
};

using SPoint = SpherePoint<double>;

/// (1 + |z|^2)^2 + t^2, the conformal weight shared by the Jacobian,
/// the distance relation and the extremal profile.
template <typename Scalar>
Scalar cayley_weight(const HeisenbergPoint<Scalar>& u) {
    const Scalar a = Scalar(1) + u.z_norm2();
    return a * a + u.t() * u.t();
}

/// C(z, t) = (2z / (1 + |z|^2 - it), (1 - |z|^2 + it) / (1 + |z|^2 - it)).
/// The sign of t matches the twist +2 Im(z . conj(z')) of the group law, which is
/// what makes |1 - xi . conj(eta)| = 2 |u^{-1}v|^2 (A_u A_v)^{-1/2} hold.
template <typename Scalar>
SpherePoint<Scalar> to_sphere(const HeisenbergPoint<Scalar>& u) {
    using Complex = std::complex<Scalar>;
    const int n = u.dim();
    const Scalar r2 = u.z_norm2();
    const Complex denom(Scalar(1) + r2, -u.t());
    typename SpherePoint<Scalar>::Vector xi(n + 1);
    xi.head(n) = (Scalar(2) / denom) * u.z();
    xi(n) = Complex(Scalar(1) - r2, u.t()) / denom;
    return SpherePoint<Scalar>(std::move(xi));
}

/// C^{-1}(xi) = (xi_1 / (1 + xi_{n+1}), ..., -Im((1 - xi_{n+1}) / (1 + xi_{n+1}))).
template <typename Scalar>
HeisenbergPoint<Scalar> from_sphere(const SpherePoint<Scalar>& xi) {
    using Complex = std::complex<Scalar>;
    const int n = xi.n();
    const Complex last = xi(n);
    const Complex denom = Scalar(1) + last;
    if (std::abs(denom) < Scalar(kSouthPoleGuard)) {
        throw SouthPoleSingularity("from_sphere: point lies on the south pole");
    }
    typename HeisenbergPoint<Scalar>::ZVector z = xi.coords().head(n) / denom;
    const Scalar t = -((Scalar(1) - last) / denom).imag();
    return HeisenbergPoint<Scalar>(std::move(z), t);
}

/// J_C(z, t) = 2^{2n+1} / ((1 + |z|^2)^2 + t^2)^{n+1}.
template <typename Scalar>
Scalar jacobian(const HeisenbergPoint<Scalar>& u) {
    using std::pow;
    const int n = u.dim();
    return std::ldexp(Scalar(1), 2 * n + 1) / pow(cayley_weight(u), Scalar(n + 1));
}

/// xi . conj(eta) = sum_j xi_j conj(eta_j)
template <typename Scalar>
std::complex<Scalar> hermitian_product(const SpherePoint<Scalar>& xi, const SpherePoint<Scalar>& eta) {
    return eta.coords().dot(xi.coords());
}

/// |1 - xi . conj(eta)|, the sphere-side counterpart of 2|u^{-1}v|^2.
template <typename Scalar>
Scalar chordal_gauge(const SpherePoint<Scalar>& xi, const SpherePoint<Scalar>& eta) {
    if (xi.n() != eta.n()) throw std::invalid_argument("chordal_gauge: dimension mismatch");
    return std::abs(Scalar(1) - hermitian_product(xi, eta));
}

/// H(u) = ((1 + |z|^2)^2 + t^2)^{-(Q + alpha)/4}.
template <typename Scalar>
Scalar frank_lieb_profile(const HeisenbergPoint<Scalar>& u, Scalar alpha) {
    using std::pow;
    if (!(alpha > Scalar(0))) throw std::invalid_argument("frank_lieb_profile: alpha must be positive");
    const Scalar Q = Scalar(2 * u.dim() + 2);
    return pow(cayley_weight(u), -(Q + alpha) / Scalar(4));
}

/// F(u) = J_C(u)^{1/p} f(C(u)) for a closed-form f on the sphere.
/// ||F||_{L^p(H^n)} = ||f||_{L^p(S^{2n+1})}.
template <typename Scalar, typename SphereFn>
auto transport_to_heisenberg(SphereFn f, Scalar p) {
    if (!(p > Scalar(0))) throw std::invalid_argument("transport_to_heisenberg: p must be positive");
    return [f = std::move(f), p](const HeisenbergPoint<Scalar>& u) -> Scalar {
        using std::pow;
        return pow(jacobian(u), Scalar(1) / p) * f(to_sphere(u));
    };
}

/// Dilation that puts the renormalized profile at 1 at the origin:
/// lambda^{alpha/(q-2)} * phi_origin = 1.
inline double blowup_scale(double phi_origin, double alpha, double q) {
    if (q == 2.0) throw std::invalid_argument("blowup_scale: q must differ from 2");
    if (!(phi_origin > 0.0)) throw std::invalid_argument("blowup_scale: phi(C(0)) must be positive");
    return std::pow(phi_origin, -(q - 2.0) / alpha);
}

/// Phi(u) = lambda^{alpha/(q-2)} ((1 + |lambda z|^2)^2 + (lambda^2 t)^2)^{-(Q-alpha)/4} phi(C(delta_lambda u)).
template <typename Scalar, typename SphereFn>
auto renormalize_blowup(SphereFn phi, Scalar lambda, Scalar alpha, Scalar q) {
    if (!(lambda > Scalar(0))) throw std::invalid_argument("renormalize_blowup: lambda must be positive");
    if (q == Scalar(2)) throw std::invalid_argument("renormalize_blowup: q must differ from 2");
    const Scalar prefactor = std::pow(lambda, alpha / (q - Scalar(2)));
    return [phi = std::move(phi), lambda, alpha, prefactor](const HeisenbergPoint<Scalar>& u) -> Scalar {
        using std::pow;
        const Scalar Q = Scalar(2 * u.dim() + 2);
        const auto scaled = dilate(lambda, u);
        return prefactor * pow(cayley_weight(scaled), -(Q - alpha) / Scalar(4)) * phi(to_sphere(scaled));
    };
}

}  // namespace rhls
