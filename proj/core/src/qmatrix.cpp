#include "gqt/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "gqt/errors.hpp"

namespace gqt {

QMatrix QMatrix::conj_transpose() const {
    QMatrix r(cols_, rows_);
    for (int j = 0; j < cols_; ++j)
        for (int i = 0; i < rows_; ++i) r(j, i) = qconj((*this)(i, j));
    return r;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("QMatrix::operator+");
    QMatrix r = *this;
    for (std::size_t t = 0; t < data_.size(); ++t) r.data_[t] += o.data_[t];
    return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("QMatrix::operator-");
    QMatrix r = *this;
    for (std::size_t t = 0; t < data_.size(); ++t) r.data_[t] -= o.data_[t];
    return r;
}

QMatrix QMatrix::operator*(double s) const {
    QMatrix r = *this;
    for (auto& q : r.data_) q *= s;
    return r;
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("QMatrix::operator+=");
    for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += o.data_[t];
    return *this;
}

QMatrix qm_mul(const QMatrix& A, const QMatrix& B) {
    if (A.cols() != B.rows()) throw DimensionMismatch("qm_mul: inner extents differ");
    QMatrix C(A.rows(), B.cols());
    for (int k = 0; k < B.cols(); ++k)
        for (int j = 0; j < A.cols(); ++j) {
            const Quaternion& b = B(j, k);
            for (int i = 0; i < A.rows(); ++i) C(i, k) += qmul(A(i, j), b);
        }
    return C;
}

QMatrix qm_scale_left(const Quaternion& q, const QMatrix& A) {
    QMatrix r(A.rows(), A.cols());
    for (int j = 0; j < A.cols(); ++j)
        for (int i = 0; i < A.rows(); ++i) r(i, j) = qmul(q, A(i, j));
    return r;
}

QMatrix qm_scale_right(const QMatrix& A, const Quaternion& q) {
    QMatrix r(A.rows(), A.cols());
    for (int j = 0; j < A.cols(); ++j)
        for (int i = 0; i < A.rows(); ++i) r(i, j) = qmul(A(i, j), q);
    return r;
}

Eigen::MatrixXcd to_complex_adjoint(const QMatrix& A) {
    const int m = A.rows(), n = A.cols();
    Eigen::MatrixXcd chi(2 * m, 2 * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) {
            const Quaternion& q = A(i, j);
            const std::complex<double> a1(q.w, q.x);  // q = a1 + a2 j
            const std::complex<double> a2(q.y, q.z);
            chi(i, j) = a1;
            chi(i, n + j) = a2;
            chi(m + i, j) = -std::conj(a2);
            chi(m + i, n + j) = std::conj(a1);
        }
    return chi;
}

QMatrix from_complex_pair(const Eigen::MatrixXcd& A1, const Eigen::MatrixXcd& A2) {
    if (A1.rows() != A2.rows() || A1.cols() != A2.cols())
        throw DimensionMismatch("from_complex_pair");
    QMatrix A(int(A1.rows()), int(A1.cols()));
    for (int j = 0; j < A.cols(); ++j)
        for (int i = 0; i < A.rows(); ++i)
            A(i, j) = Quaternion(A1(i, j).real(), A1(i, j).imag(), A2(i, j).real(),
                                 A2(i, j).imag());
    return A;
}

namespace {

// First column of chi(u) for a quaternion vector u is [u1; -conj(u2)].
// Any unit vector in a chi-invariant pair subspace has this form for some u.
QMatrix columns_from_chi(const Eigen::MatrixXcd& W, int m) {
    // W holds m selected columns of length 2m.
    QMatrix U(m, int(W.cols()));
    for (int t = 0; t < W.cols(); ++t)
        for (int i = 0; i < m; ++i) {
            const std::complex<double> u1 = W(i, t);
            const std::complex<double> u2 = -std::conj(W(m + i, t));
            U(i, t) = Quaternion(u1.real(), u1.imag(), u2.real(), u2.imag());
        }
    return U;
}

// J-partner of a chi column: the second column of the same chi block.
Eigen::VectorXcd j_partner(const Eigen::VectorXcd& w) {
    const int m = int(w.size()) / 2;
    Eigen::VectorXcd p(2 * m);
    p.head(m) = w.tail(m).conjugate();
    p.tail(m) = -w.head(m).conjugate();
    return p;
}

// Pick one representative per quaternion singular pair, orthogonalizing
// against both earlier picks and their J-partners so degenerate subspaces
// yield orthonormal quaternion columns.
Eigen::MatrixXcd select_pair_columns(const Eigen::MatrixXcd& W) {
    const int m = int(W.rows()) / 2;
    Eigen::MatrixXcd picked(2 * m, m);
    int count = 0;
    for (int c = 0; c < W.cols() && count < m; ++c) {
        Eigen::VectorXcd w = W.col(c);
        for (int s = 0; s < count; ++s) {
            const Eigen::VectorXcd& u = picked.col(s);
            w -= u * u.dot(w);
            const Eigen::VectorXcd p = j_partner(u);
            w -= p * p.dot(w);
        }
        const double n = w.norm();
        if (n < 1e-6) continue;  // lived in an already-covered pair subspace
        picked.col(count++) = w / n;
    }
    if (count != m) throw ConvergenceFailure("qsvd: chi pair selection failed");
    return picked;
}

} // namespace

Qsvd qsvd(const QMatrix& A) {
    const int m = A.rows(), n = A.cols();
    const Eigen::MatrixXcd chi = to_complex_adjoint(A);

    Eigen::MatrixXcd W, Z;
    Eigen::VectorXd sv;
    if (std::max(m, n) <= 32) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(chi, Eigen::ComputeFullU | Eigen::ComputeFullV);
        W = svd.matrixU();
        Z = svd.matrixV();
        sv = svd.singularValues();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(chi, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svd.info() != Eigen::Success) throw ConvergenceFailure("qsvd: complex SVD failed");
        W = svd.matrixU();
        Z = svd.matrixV();
        sv = svd.singularValues();
    }

    Qsvd out;
    const int r = std::min(m, n);
    out.sigma.resize(r);
    for (int t = 0; t < r; ++t) out.sigma[t] = sv(2 * t);  // values appear twice

    // Left vectors for nonzero pairs come from right vectors through A to keep
    // (u, v) consistent; orthogonal completion handles the null space.
    Eigen::MatrixXcd Zp = select_pair_columns(Z);
    Eigen::MatrixXcd Wp(2 * m, m);
    const double tol = sv.size() ? sv(0) * 1e-13 : 0.0;
    int filled = 0;
    for (int t = 0; t < r; ++t) {
        if (out.sigma[t] > tol) {
            Wp.col(filled++) = chi * Zp.col(t) / out.sigma[t];
        }
    }
    // Complete the left basis from the SVD's own columns.
    for (int c = 0; c < W.cols() && filled < m; ++c) {
        Eigen::VectorXcd w = W.col(c);
        for (int s = 0; s < filled; ++s) {
            const Eigen::VectorXcd& u = Wp.col(s);
            w -= u * u.dot(w);
            const Eigen::VectorXcd p = j_partner(u);
            w -= p * p.dot(w);
        }
        const double nw = w.norm();
        if (nw < 1e-6) continue;
        Wp.col(filled++) = w / nw;
    }
    if (filled != m) throw ConvergenceFailure("qsvd: left basis completion failed");

    out.U = columns_from_chi(Wp, m);
    out.V = columns_from_chi(Zp, n);

    // Phase convention: largest-magnitude entry of each U column real positive.
    for (int t = 0; t < m; ++t) {
        int imax = 0;
        double best = -1;
        for (int i = 0; i < m; ++i) {
            const double a = out.U(i, t).norm();
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (best < 1e-300) continue;
        const Quaternion q = qconj(out.U(imax, t)) * (1.0 / best);
        for (int i = 0; i < m; ++i) out.U(i, t) = qmul(out.U(i, t), q);
        if (t < n && t < r)
            for (int i = 0; i < n; ++i) out.V(i, t) = qmul(out.V(i, t), q);
    }
    return out;
}

double qm_nuclear_norm(const QMatrix& A) {
    const Eigen::MatrixXcd chi = to_complex_adjoint(A);
    Eigen::VectorXd sv;
    if (std::max(A.rows(), A.cols()) <= 32) {
        sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(chi).singularValues();
    } else {
        sv = Eigen::BDCSVD<Eigen::MatrixXcd>(chi).singularValues();
    }
    double s = 0;
    const int r = std::min(A.rows(), A.cols());
    for (int t = 0; t < r; ++t) s += sv(2 * t);
    return s;
}

namespace {

QMatrix adjoint_solve(const QMatrix& H, const QMatrix& B) {
    const Eigen::MatrixXcd chiH = to_complex_adjoint(H);
    const Eigen::MatrixXcd chiB = to_complex_adjoint(B);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(chiH);
    if (ldlt.info() != Eigen::Success) throw NotPositiveDefinite("hermitian_solve: LDLT failed");
    const Eigen::MatrixXcd chiX = ldlt.solve(chiB);
    const int n = H.rows(), k = B.cols();
    return from_complex_pair(chiX.topLeftCorner(n, k), chiX.topRightCorner(n, k));
}

} // namespace

QMatrix hermitian_solve(const QMatrix& H, const QMatrix& B) {
    const int n = H.rows();
    if (H.cols() != n) throw DimensionMismatch("hermitian_solve: H not square");
    if (B.rows() != n) throw DimensionMismatch("hermitian_solve: B rows");

    double scale = 0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(H(i, i).w));

    // Quaternion Cholesky H = L L*, real positive pivots.
    QMatrix L(n, n);
    for (int j = 0; j < n; ++j) {
        Quaternion d = H(j, j);
        for (int k = 0; k < j; ++k) d -= qmul(L(j, k), qconj(L(j, k)));
        const double piv = d.w;
        if (piv <= 0.0) throw NotPositiveDefinite("hermitian_solve: nonpositive pivot");
        if (piv < 1e-13 * scale) return adjoint_solve(H, B);  // underflowing pivot
        const double ljj = std::sqrt(piv);
        L(j, j) = Quaternion(ljj);
        const double inv = 1.0 / ljj;
        for (int i = j + 1; i < n; ++i) {
            Quaternion s = H(i, j);
            for (int k = 0; k < j; ++k) s -= qmul(L(i, k), qconj(L(j, k)));
            L(i, j) = s * inv;
        }
    }

    // L Y = B, then L* X = Y.
    QMatrix X = B;
    for (int c = 0; c < B.cols(); ++c) {
        for (int i = 0; i < n; ++i) {
            Quaternion s = X(i, c);
            for (int k = 0; k < i; ++k) s -= qmul(L(i, k), X(k, c));
            X(i, c) = s * (1.0 / L(i, i).w);
        }
        for (int i = n - 1; i >= 0; --i) {
            Quaternion s = X(i, c);
            for (int k = i + 1; k < n; ++k) s -= qmul(qconj(L(k, i)), X(k, c));
            X(i, c) = s * (1.0 / L(i, i).w);
        }
    }
    return X;
}

} // namespace gqt
