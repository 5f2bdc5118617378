#include "gqt/qdft.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <fftw3.h>

#include "gqt/errors.hpp"

namespace gqt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

PureUnitQuaternion pick_nu(const PureUnitQuaternion& mu) {
    // j minus its projection on mu; fall back to i when mu is close to +-j.
    const double d = mu.b();  // <j, mu>
    double a = -d * mu.a(), b = 1.0 - d * mu.b(), c = -d * mu.c();
    if (std::sqrt(a * a + b * b + c * c) < 1e-6) {
        const double di = mu.a();
        a = 1.0 - di * mu.a();
        b = -di * mu.b();
        c = -di * mu.c();
    }
    return {a, b, c};
}

} // namespace

QMatrix qdft_matrix(const PureUnitQuaternion& mu, int n) {
    if (n < 1) throw DimensionMismatch("qdft_matrix: n < 1");
    const double inv_sqrt = 1.0 / std::sqrt(double(n));
    QMatrix F(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            // omega^(i*j) with exponent reduced mod n
            const long long p = (static_cast<long long>(i) * j) % n;
            F(i, j) = qdft_kernel_pow(mu, kTwoPi * double(p) / n) * inv_sqrt;
        }
    return F;
}

Eigen::MatrixXd perm_matrix(int n) {
    if (n < 1) throw DimensionMismatch("perm_matrix: n < 1");
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    P(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) P(i, n - i) = 1.0;
    return P;
}

std::tuple<QMatrix, QMatrix, QMatrix> t_matrices(const PureUnitQuaternion& mu, int n) {
    const auto [mi, mj, mk] = mu_variants(mu);
    const Eigen::MatrixXd P = perm_matrix(n);
    auto build = [&](const PureUnitQuaternion& m1) {
        const Quaternion prod = qmul(m1.as_quaternion(), mu.as_quaternion());
        const Quaternion ci = (Quaternion::one() - prod) * 0.5;
        const Quaternion cp = (Quaternion::one() + prod) * 0.5;
        QMatrix T(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                Quaternion v;
                if (i == j) v += ci;
                if (P(i, j) != 0.0) v += cp;
                T(i, j) = v;
            }
        return T;
    };
    return {build(mi), build(mj), build(mk)};
}

struct QdftPlan::FftwPlans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    ~FftwPlans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

QdftPlan::QdftPlan(const PureUnitQuaternion& mu, int n)
    : mu_(mu), nu_(pick_nu(mu)), n_(n), fftw_(std::make_unique<FftwPlans>()) {
    if (n < 1) throw DimensionMismatch("QdftPlan: n < 1");
    cos_.resize(n, n);
    sin_.resize(n, n);
    const double inv_sqrt = 1.0 / std::sqrt(double(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const long long p = (static_cast<long long>(i) * j) % n;
            const double th = kTwoPi * double(p) / n;
            cos_(i, j) = std::cos(th) * inv_sqrt;
            sin_(i, j) = std::sin(th) * inv_sqrt;
        }
    // FFTW_UNALIGNED so execution may run on arbitrary caller buffers.
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_->fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_->bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

QdftPlan::~QdftPlan() = default;
QdftPlan::QdftPlan(QdftPlan&&) noexcept = default;
QdftPlan& QdftPlan::operator=(QdftPlan&&) noexcept = default;

void QdftPlan::forward_fiber(Quaternion* fiber, bool scaled) const {
    // Split q = c1 + nu c2 with c1, c2 in R + R*mu (isomorphic to C via mu -> i).
    // Since z nu = nu conj(z) for z in R + R*mu, left multiplication by F gives
    // F (c1 + nu c2) = F c1 + nu conj(F) c2: one forward and one backward FFT.
    const Quaternion mq = mu_.as_quaternion();
    const Quaternion nq = nu_.as_quaternion();
    const Quaternion nmq = qmul(nq, mq);
    std::vector<std::complex<double>> c1(n_), c2(n_);
    for (int t = 0; t < n_; ++t) {
        const Quaternion& q = fiber[t];
        c1[t] = {q.w, q.x * mq.x + q.y * mq.y + q.z * mq.z};
        c2[t] = {q.x * nq.x + q.y * nq.y + q.z * nq.z,
                 q.x * nmq.x + q.y * nmq.y + q.z * nmq.z};
    }
    auto* b1 = reinterpret_cast<fftw_complex*>(c1.data());
    auto* b2 = reinterpret_cast<fftw_complex*>(c2.data());
    fftw_execute_dft(fftw_->fwd, b1, b1);
    fftw_execute_dft(fftw_->bwd, b2, b2);
    // Unnormalized FFT equals sqrt(n) * F; rescale when the caller wants F alone.
    const double s = scaled ? 1.0 : 1.0 / std::sqrt(double(n_));
    for (int t = 0; t < n_; ++t) {
        fiber[t] = (Quaternion(c1[t].real(), 0, 0, 0) + mq * c1[t].imag() +
                    nq * c2[t].real() + nmq * c2[t].imag()) *
                   s;
    }
}

void QdftPlan::inverse_fiber(Quaternion* fiber, bool scaled) const {
    const Quaternion mq = mu_.as_quaternion();
    const Quaternion nq = nu_.as_quaternion();
    const Quaternion nmq = qmul(nq, mq);
    std::vector<std::complex<double>> c1(n_), c2(n_);
    for (int t = 0; t < n_; ++t) {
        const Quaternion& q = fiber[t];
        c1[t] = {q.w, q.x * mq.x + q.y * mq.y + q.z * mq.z};
        c2[t] = {q.x * nq.x + q.y * nq.y + q.z * nq.z,
                 q.x * nmq.x + q.y * nmq.y + q.z * nmq.z};
    }
    auto* b1 = reinterpret_cast<fftw_complex*>(c1.data());
    auto* b2 = reinterpret_cast<fftw_complex*>(c2.data());
    fftw_execute_dft(fftw_->bwd, b1, b1);
    fftw_execute_dft(fftw_->fwd, b2, b2);
    const double s = scaled ? 1.0 / double(n_) : 1.0 / std::sqrt(double(n_));
    for (int t = 0; t < n_; ++t) {
        fiber[t] = (Quaternion(c1[t].real(), 0, 0, 0) + mq * c1[t].imag() +
                    nq * c2[t].real() + nmq * c2[t].imag()) *
                   s;
    }
}

namespace {

template <typename FiberOp>
QTensor3 transform_mode(const QTensor3& T, int mode, const QdftPlan& plan, FiberOp&& op) {
    const int n1 = T.n1(), n2 = T.n2(), n3 = T.n3();
    const int extent = mode == 1 ? n1 : mode == 2 ? n2 : n3;
    if (mode < 1 || mode > 3) throw DimensionMismatch("fft_mode: mode must be 1, 2 or 3");
    if (plan.n() != extent) throw DimensionMismatch("fft_mode: plan length != mode extent");

    QTensor3 out = T;
    std::vector<Quaternion> fiber(extent);
    if (mode == 3) {
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i) {
                for (int k = 0; k < n3; ++k) fiber[k] = out(i, j, k);
                op(fiber.data());
                for (int k = 0; k < n3; ++k) out(i, j, k) = fiber[k];
            }
    } else if (mode == 2) {
        for (int k = 0; k < n3; ++k)
            for (int i = 0; i < n1; ++i) {
                for (int j = 0; j < n2; ++j) fiber[j] = out(i, j, k);
                op(fiber.data());
                for (int j = 0; j < n2; ++j) out(i, j, k) = fiber[j];
            }
    } else {
        for (int k = 0; k < n3; ++k)
            for (int j = 0; j < n2; ++j) {
                for (int i = 0; i < n1; ++i) fiber[i] = out(i, j, k);
                op(fiber.data());
                for (int i = 0; i < n1; ++i) out(i, j, k) = fiber[i];
            }
    }
    return out;
}

} // namespace

QTensor3 fft_mode(const QTensor3& T, int mode, const QdftPlan& plan, std::optional<bool> scaled) {
    const bool s = scaled.value_or(mode == 3);
    return transform_mode(T, mode, plan, [&](Quaternion* f) { plan.forward_fiber(f, s); });
}

QTensor3 ifft_mode(const QTensor3& T, int mode, const QdftPlan& plan, std::optional<bool> scaled) {
    const bool s = scaled.value_or(mode == 3);
    return transform_mode(T, mode, plan, [&](Quaternion* f) { plan.inverse_fiber(f, s); });
}

} // namespace gqt
