#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gqt/quaternion.hpp"

namespace gqt {

/// Dense quaternion matrix, column-major.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}

    static QMatrix identity(int n) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Quaternion::one();
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Quaternion& operator()(int i, int j) { return data_[std::size_t(j) * rows_ + i]; }
    const Quaternion& operator()(int i, int j) const { return data_[std::size_t(j) * rows_ + i]; }

    std::vector<Quaternion>& data() { return data_; }
    const std::vector<Quaternion>& data() const { return data_; }

    QMatrix conj_transpose() const;

    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix operator*(double s) const;
    QMatrix& operator+=(const QMatrix& o);

    double frobenius_norm_sq() const {
        double s = 0;
        for (const auto& q : data_) s += q.norm_sq();
        return s;
    }
    double frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Quaternion> data_;
};

/// Entry (i,k) = sum_j A(i,j) B(j,k), Hamilton products in this order.
QMatrix qm_mul(const QMatrix& A, const QMatrix& B);

/// Scale every entry by the quaternion q from the left / right.
QMatrix qm_scale_left(const Quaternion& q, const QMatrix& A);
QMatrix qm_scale_right(const QMatrix& A, const Quaternion& q);

/// chi-representation: writing A = A1 + A2 j with A1, A2 complex,
/// returns [[A1, A2], [-conj(A2), conj(A1)]]. Ring homomorphism.
Eigen::MatrixXcd to_complex_adjoint(const QMatrix& A);

/// Inverse of the chi block structure: rebuild A from its A1, A2 blocks.
QMatrix from_complex_pair(const Eigen::MatrixXcd& A1, const Eigen::MatrixXcd& A2);

struct Qsvd {
    QMatrix U;                  // rows x rows, unitary
    std::vector<double> sigma;  // min(rows, cols), descending
    QMatrix V;                  // cols x cols, unitary
};

/// SVD of a quaternion matrix through the complex adjoint representation.
/// Column phases fixed: the largest-magnitude entry of each U column is real positive.
Qsvd qsvd(const QMatrix& A);

/// Sum of singular values.
double qm_nuclear_norm(const QMatrix& A);

/// Solve H X = B for Hermitian positive definite H via quaternion Cholesky,
/// with a complex-adjoint fallback when a pivot underflows.
QMatrix hermitian_solve(const QMatrix& H, const QMatrix& B);

} // namespace gqt
