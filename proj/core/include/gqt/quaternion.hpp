#pragma once

#include <cmath>
#include <tuple>

#include "gqt/errors.hpp"

namespace gqt {

/// One element of the quaternion algebra H, q = w + x i + y j + z k.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}
    constexpr explicit Quaternion(double real) : w(real) {}

    static constexpr Quaternion zero() { return {}; }
    static constexpr Quaternion one() { return {1, 0, 0, 0}; }
    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    constexpr Quaternion operator+(const Quaternion& o) const {
        return {w + o.w, x + o.x, y + o.y, z + o.z};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {w - o.w, x - o.x, y - o.y, z - o.z};
    }
    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }

    constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }
    Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }

    constexpr bool operator==(const Quaternion&) const = default;

    double norm_sq() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }
};

/// Hamilton product, non-commutative: ij = k = -ji.
constexpr Quaternion qmul(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) { return qmul(p, q); }

constexpr Quaternion qconj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

inline Quaternion qinv(const Quaternion& q) {
    const double n2 = q.norm_sq();
    if (n2 == 0.0) throw DivisionByZero("qinv: zero quaternion");
    return qconj(q) * (1.0 / n2);
}

/// A unit pure quaternion mu = a i + b j + c k with mu^2 = -1.
/// The constructor renormalizes; vectors with norm below 1e-8 are rejected.
class PureUnitQuaternion {
public:
    PureUnitQuaternion(double a, double b, double c) {
        const double n = std::sqrt(a * a + b * b + c * c);
        if (n < 1e-8) throw ConfigError("PureUnitQuaternion: near-zero axis");
        a_ = a / n;
        b_ = b / n;
        c_ = c / n;
    }

    static PureUnitQuaternion unit_i() { return {1, 0, 0}; }
    static PureUnitQuaternion unit_j() { return {0, 1, 0}; }
    static PureUnitQuaternion unit_k() { return {0, 0, 1}; }
    /// The symmetric axis (i + j + k)/sqrt(3); treats the three color channels equally.
    static PureUnitQuaternion symmetric() { return {1, 1, 1}; }

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }

    Quaternion as_quaternion() const { return {0, a_, b_, c_}; }

    constexpr bool operator==(const PureUnitQuaternion&) const = default;

private:
    double a_, b_, c_;
};

/// The three companion axes of Eq-style sign flips: each squares to -1.
inline std::tuple<PureUnitQuaternion, PureUnitQuaternion, PureUnitQuaternion>
mu_variants(const PureUnitQuaternion& mu) {
    const double a = mu.a(), b = mu.b(), c = mu.c();
    return {PureUnitQuaternion(a, -b, -c), PureUnitQuaternion(-a, b, -c),
            PureUnitQuaternion(-a, -b, c)};
}

/// exp(-mu * theta) = cos(theta) - mu sin(theta), the QDFT kernel power.
inline Quaternion qdft_kernel_pow(const PureUnitQuaternion& mu, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return Quaternion(c, 0, 0, 0) - mu.as_quaternion() * s;
}

} // namespace gqt
