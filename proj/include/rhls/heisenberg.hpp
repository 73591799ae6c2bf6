#pragma once

// Group law and homogeneous geometry of the Heisenberg group H^n = C^n x R.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rhls {

/// Dimension bundle: n complex coordinates, homogeneous dimension Q = 2n + 2.
class GroupParams {
public:
    explicit GroupParams(int n) : n_(n) {
        if (n < 1) {
            throw std::invalid_argument("GroupParams: n must be >= 1, got " + std::to_string(n));
        }
    }

    int n() const noexcept { return n_; }
    int Q() const noexcept { return 2 * n_ + 2; }

private:
    int n_;
};

/// A point u = (z, t) of H^n.
template <typename Scalar>
class HeisenbergPoint {
public:
    using Complex = std::complex<Scalar>;
    using ZVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    HeisenbergPoint() = default;

    HeisenbergPoint(ZVector z, Scalar t) : z_(std::move(z)), t_(t) {
        if (z_.size() < 1) {
            throw std::invalid_argument("HeisenbergPoint: z must have at least one entry");
        }
        if (!z_.allFinite() || !std::isfinite(t_)) {
            throw std::invalid_argument("HeisenbergPoint: coordinates must be finite");
        }
    }

    static HeisenbergPoint identity(int n) {
        if (n < 1) throw std::invalid_argument("HeisenbergPoint::identity: n must be >= 1");
        return HeisenbergPoint(ZVector::Zero(n), Scalar(0));
    }

    const ZVector& z() const noexcept { return z_; }
    Scalar t() const noexcept { return t_; }
    int dim() const noexcept { return static_cast<int>(z_.size()); }

    /// |z|^2
    Scalar z_norm2() const { return z_.squaredNorm(); }

private:
    ZVector z_;
    Scalar t_{0};
};

using HPoint = HeisenbergPoint<double>;

namespace detail {

template <typename Scalar>
void require_same_dim(const HeisenbergPoint<Scalar>& u, const HeisenbergPoint<Scalar>& v, const char* op) {
    if (u.dim() != v.dim()) {
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" + std::to_string(u.dim()) +
                                    " vs " + std::to_string(v.dim()) + ")");
    }
}

}  // namespace detail

/// (z,t)(z',t') = (z + z', t + t' + 2 Im(z . conj(z'))).
template <typename Scalar>
HeisenbergPoint<Scalar> multiply(const HeisenbergPoint<Scalar>& u, const HeisenbergPoint<Scalar>& v) {
    detail::require_same_dim(u, v, "multiply");
    // Eigen's dot conjugates its left operand: v.z().dot(u.z()) = sum conj(z'_j) z_j.
    const auto twist = v.z().dot(u.z());
    return HeisenbergPoint<Scalar>(u.z() + v.z(), u.t() + v.t() + Scalar(2) * twist.imag());
}

template <typename Scalar>
HeisenbergPoint<Scalar> inverse(const HeisenbergPoint<Scalar>& u) {
    return HeisenbergPoint<Scalar>(-u.z(), -u.t());
}

/// Korányi gauge |u| = (|z|^4 + t^2)^{1/4}.
template <typename Scalar>
Scalar homogeneous_norm(const HeisenbergPoint<Scalar>& u) {
    using std::sqrt;
    const Scalar r2 = u.z_norm2();
    // sqrt(sqrt(.)) keeps full precision for tiny arguments where pow(., 0.25) does not.
    return sqrt(sqrt(r2 * r2 + u.t() * u.t()));
}

/// d(u, v) = |v^{-1} u|.
template <typename Scalar>
Scalar distance(const HeisenbergPoint<Scalar>& u, const HeisenbergPoint<Scalar>& v) {
    detail::require_same_dim(u, v, "distance");
    return homogeneous_norm(multiply(inverse(v), u));
}

/// delta_lambda(z, t) = (lambda z, lambda^2 t).
template <typename Scalar>
HeisenbergPoint<Scalar> dilate(Scalar lambda, const HeisenbergPoint<Scalar>& u) {
    if (!(lambda > Scalar(0)) || !std::isfinite(lambda)) {
        throw std::invalid_argument("dilate: lambda must be positive and finite");
    }
    return HeisenbergPoint<Scalar>(lambda * u.z(), lambda * lambda * u.t());
}

/// Haar measure of the unit gauge ball B(0,1) for homogeneous dimension Q >= 4.
double ball_volume(int Q);

inline double ball_volume(const GroupParams& params) { return ball_volume(params.Q()); }

}  // namespace rhls
