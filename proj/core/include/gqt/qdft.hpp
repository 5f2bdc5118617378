#pragma once

#include <memory>
#include <optional>
#include <tuple>

#include <Eigen/Dense>

#include "gqt/qmatrix.hpp"
#include "gqt/quaternion.hpp"
#include "gqt/tensor.hpp"

namespace gqt {

/// Normalized QDFT matrix F_{mu,n}: entry (i,j) = omega^{i j}/sqrt(n),
/// omega = cos(2*pi/n) - mu sin(2*pi/n). Unitary; entries lie in R + R*mu.
QMatrix qdft_matrix(const PureUnitQuaternion& mu, int n);

/// Flip permutation: P(0,0) = 1, P(i,j) = 1 iff i + j = n (one-based i+j = n+2); P^2 = I.
Eigen::MatrixXd perm_matrix(int n);

/// Coupling matrices T_i = F*_{mu_i} F_mu etc., via the closed form
/// T = (1 - mu1 mu2)/2 I + (1 + mu1 mu2)/2 P.
std::tuple<QMatrix, QMatrix, QMatrix> t_matrices(const PureUnitQuaternion& mu, int n);

/// Transform plan for one (mu, length) pair. Immutable and shareable across
/// threads; execution never mutates plan state.
class QdftPlan {
public:
    QdftPlan(const PureUnitQuaternion& mu, int n);
    ~QdftPlan();

    QdftPlan(const QdftPlan&) = delete;
    QdftPlan& operator=(const QdftPlan&) = delete;
    QdftPlan(QdftPlan&&) noexcept;
    QdftPlan& operator=(QdftPlan&&) noexcept;

    const PureUnitQuaternion& mu() const { return mu_; }
    /// Fixed unit pure quaternion orthogonal to mu; carries the second
    /// complex component of the split q = c1 + nu*c2, c1, c2 in R + R*mu.
    const PureUnitQuaternion& nu() const { return nu_; }
    int n() const { return n_; }

    /// Cosine / sine kernel tables with F = C - mu*S.
    const Eigen::MatrixXd& cos_table() const { return cos_; }
    const Eigen::MatrixXd& sin_table() const { return sin_; }

    /// fiber <- F * fiber (times sqrt(n) when scaled), in place, length n.
    void forward_fiber(Quaternion* fiber, bool scaled) const;
    /// Inverse of forward_fiber with matching scaling.
    void inverse_fiber(Quaternion* fiber, bool scaled) const;

private:
    PureUnitQuaternion mu_;
    PureUnitQuaternion nu_;
    int n_;
    Eigen::MatrixXd cos_, sin_;
    struct FftwPlans;
    std::unique_ptr<FftwPlans> fftw_;
};

/// Replace every mode-`mode` fiber f of T by scale * F_{mu,n} f. The scaled
/// form (scale = sqrt(n)) is the mode-3 convention and what the solvers use on
/// every mode; unscaled multiplies by F alone. When `scaled` is left empty it
/// defaults to true for mode 3 and false for modes 1/2.
QTensor3 fft_mode(const QTensor3& T, int mode, const QdftPlan& plan,
                  std::optional<bool> scaled = std::nullopt);
QTensor3 ifft_mode(const QTensor3& T, int mode, const QdftPlan& plan,
                   std::optional<bool> scaled = std::nullopt);

} // namespace gqt
