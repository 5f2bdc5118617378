#include "gqt/gqt_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gqt/errors.hpp"

namespace gqt {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int mod_pos(int a, int n) { return ((a % n) + n) % n; }

// Number of mode-w slices and the slice accessors used by the multi-rank
// and profile routines.
int mode_count(const QTensor3& T, int w) {
    return w == 1 ? T.n1() : w == 2 ? T.n2() : T.n3();
}

QMatrix mode_slice(const QTensor3& T, int w, int idx) {
    return w == 1 ? T.horizontal_slice(idx)
         : w == 2 ? T.lateral_slice(idx)
                  : T.frontal_slice(idx);
}

QMatrix real_part_matrix(const QMatrix& M, int part) {
    QMatrix R(M.rows(), M.cols());
    for (int j = 0; j < M.cols(); ++j)
        for (int i = 0; i < M.rows(); ++i) {
            const Quaternion& q = M(i, j);
            const double v = part == 0 ? q.w : part == 1 ? q.x : part == 2 ? q.y : q.z;
            R(i, j) = Quaternion(v);
        }
    return R;
}

// T kron I_r with quaternion entries in T.
QMatrix kron_identity(const QMatrix& T, int r) {
    QMatrix K(T.rows() * r, T.cols() * r);
    for (int q = 0; q < T.cols(); ++q)
        for (int p = 0; p < T.rows(); ++p) {
            const Quaternion& v = T(p, q);
            if (v == Quaternion::zero()) continue;
            for (int s = 0; s < r; ++s) K(p * r + s, q * r + s) = v;
        }
    return K;
}

} // namespace

QMatrix circ(const QTensor3& A) {
    const int n1 = A.n1(), n2 = A.n2(), n3 = A.n3();
    QMatrix M(n1 * n3, n2 * n3);
    for (int q = 0; q < n3; ++q)
        for (int p = 0; p < n3; ++p) {
            const int k = mod_pos(p - q, n3);
            for (int j = 0; j < n2; ++j)
                for (int i = 0; i < n1; ++i) M(p * n1 + i, q * n2 + j) = A(i, j, k);
        }
    return M;
}

QMatrix unfold(const QTensor3& A) {
    const int n1 = A.n1(), n2 = A.n2(), n3 = A.n3();
    QMatrix M(n1 * n3, n2);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i) M(k * n1 + i, j) = A(i, j, k);
    return M;
}

QTensor3 fold(const QMatrix& M, int n1, int n2, int n3) {
    if (M.rows() != n1 * n3 || M.cols() != n2) throw DimensionMismatch("fold: bad shape");
    QTensor3 T(n1, n2, n3);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i) T(i, j, k) = M(k * n1 + i, j);
    return T;
}

QMatrix block_diag(const QTensor3& A) {
    const int n1 = A.n1(), n2 = A.n2(), n3 = A.n3();
    QMatrix M(n1 * n3, n2 * n3);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i) M(k * n1 + i, k * n2 + j) = A(i, j, k);
    return M;
}

QTensor3 gqt_product(const QTensor3& A, const QTensor3& B, const PureUnitQuaternion& mu) {
    return gqt_product_mode(A, B, mu, 3);
}

QTensor3 gqt_product_mode(const QTensor3& A, const QTensor3& B, const PureUnitQuaternion& mu,
                          int w) {
    if (w < 1 || w > 3) throw DimensionMismatch("gqt_product_mode: w must be 1, 2 or 3");
    if (w == 3) {
        if (A.n3() != B.n3() || A.n2() != B.n1())
            throw DimensionMismatch("gqt_product: inner dimensions disagree");
        QdftPlan plan(mu, A.n3());
        const QTensor3 Ah = fft_mode(A, 3, plan);
        const QTensor3 Bh = fft_mode(B, 3, plan);
        QTensor3 Ch(A.n1(), B.n2(), A.n3());
        for (int k = 0; k < A.n3(); ++k)
            Ch.set_frontal_slice(k, qm_mul(Ah.frontal_slice(k), Bh.frontal_slice(k)));
        return ifft_mode(Ch, 3, plan);
    }
    if (w == 1) {
        if (A.n1() != B.n1() || A.n3() != B.n2())
            throw DimensionMismatch("gqt_product_mode(1): inner dimensions disagree");
        QdftPlan plan(mu, A.n1());
        // The slice-wise product identity needs the sqrt(n_w) scale on every mode.
        const QTensor3 Ah = fft_mode(A, 1, plan, true);
        const QTensor3 Bh = fft_mode(B, 1, plan, true);
        QTensor3 Ch(A.n1(), A.n2(), B.n3());
        for (int i = 0; i < A.n1(); ++i)
            Ch.set_horizontal_slice(i, qm_mul(Ah.horizontal_slice(i), Bh.horizontal_slice(i)));
        return ifft_mode(Ch, 1, plan, true);
    }
    if (A.n2() != B.n2() || A.n3() != B.n1())
        throw DimensionMismatch("gqt_product_mode(2): inner dimensions disagree");
    QdftPlan plan(mu, A.n2());
    const QTensor3 Ah = fft_mode(A, 2, plan, true);
    const QTensor3 Bh = fft_mode(B, 2, plan, true);
    QTensor3 Ch(A.n1(), A.n2(), B.n3());
    for (int j = 0; j < A.n2(); ++j)
        Ch.set_lateral_slice(j, qm_mul(Ah.lateral_slice(j), Bh.lateral_slice(j)));
    return ifft_mode(Ch, 2, plan, true);
}

QTensor3 gqt_product_oracle(const QTensor3& A, const QTensor3& B, const PureUnitQuaternion& mu) {
    if (A.n3() != B.n3() || A.n2() != B.n1())
        throw DimensionMismatch("gqt_product_oracle: inner dimensions disagree");
    const int n3 = A.n3(), r = A.n2();
    const auto [Ti, Tj, Tk] = t_matrices(mu, n3);
    const QMatrix Ca = circ(A);

    QMatrix M = real_part_matrix(Ca, 0);
    M += qm_scale_left(Quaternion::i(),
                       qm_mul(real_part_matrix(Ca, 1), kron_identity(Ti, r)));
    M += qm_scale_left(Quaternion::j(),
                       qm_mul(real_part_matrix(Ca, 2), kron_identity(Tj, r)));
    M += qm_scale_left(Quaternion::k(),
                       qm_mul(real_part_matrix(Ca, 3), kron_identity(Tk, r)));
    return fold(qm_mul(M, unfold(B)), A.n1(), B.n2(), n3);
}

QTensor3 conj_transpose(const QTensor3& A, const PureUnitQuaternion& mu) {
    QdftPlan plan(mu, A.n3());
    const QTensor3 Ah = fft_mode(A, 3, plan);
    QTensor3 Th(A.n2(), A.n1(), A.n3());
    for (int k = 0; k < A.n3(); ++k)
        Th.set_frontal_slice(k, Ah.frontal_slice(k).conj_transpose());
    return ifft_mode(Th, 3, plan);
}

QTensor3 identity_tensor(int n, int l) {
    QTensor3 I(n, n, l);
    for (int i = 0; i < n; ++i) I(i, i, 0) = Quaternion::one();
    return I;
}

bool is_unitary(const QTensor3& U, const PureUnitQuaternion& mu, double tol) {
    if (U.n1() != U.n2()) return false;
    const int n = U.n1();
    QdftPlan plan(mu, U.n3());
    const QTensor3 Uh = fft_mode(U, 3, plan);
    const QMatrix I = QMatrix::identity(n);
    for (int k = 0; k < U.n3(); ++k) {
        const QMatrix S = Uh.frontal_slice(k);
        if ((qm_mul(S.conj_transpose(), S) - I).frobenius_norm() > tol) return false;
        if ((qm_mul(S, S.conj_transpose()) - I).frobenius_norm() > tol) return false;
    }
    return true;
}

GqtSvd gqt_svd(const QTensor3& A, const PureUnitQuaternion& mu) {
    const int n1 = A.n1(), n2 = A.n2(), n3 = A.n3();
    const int m = std::min(n1, n2);
    QdftPlan plan(mu, n3);
    const QTensor3 Ah = fft_mode(A, 3, plan);

    GqtSvd out;
    QTensor3 Uh(n1, n1, n3), Sh(n1, n2, n3), Vh(n2, n2, n3);
    out.sigma.assign(m, std::vector<double>(n3));
    for (int k = 0; k < n3; ++k) {
        Qsvd s = qsvd(Ah.frontal_slice(k));
        Uh.set_frontal_slice(k, s.U);
        Vh.set_frontal_slice(k, s.V);
        for (int t = 0; t < m; ++t) {
            Sh(t, t, k) = Quaternion(s.sigma[t]);
            out.sigma[t][k] = s.sigma[t];
        }
    }
    out.U = ifft_mode(Uh, 3, plan);
    out.S = ifft_mode(Sh, 3, plan);
    out.V = ifft_mode(Vh, 3, plan);
    return out;
}

int gqt_rank(const QTensor3& A, const PureUnitQuaternion& mu, double tol) {
    const GqtSvd s = gqt_svd(A, mu);
    double smax = 0;
    for (const auto& fiber : s.sigma)
        for (double v : fiber) smax = std::max(smax, v);
    if (tol < 0) tol = std::max(A.n1(), A.n2()) * kEps * smax;
    int r = 0;
    for (const auto& fiber : s.sigma)
        if (*std::max_element(fiber.begin(), fiber.end()) > tol) ++r;
    return r;
}

std::vector<double> singular_values(const QTensor3& A, const PureUnitQuaternion& mu) {
    const GqtSvd s = gqt_svd(A, mu);
    std::vector<double> out(s.sigma.size());
    for (std::size_t i = 0; i < s.sigma.size(); ++i) {
        double acc = 0;
        for (double v : s.sigma[i]) acc += v;
        out[i] = acc / A.n3();
    }
    return out;
}

double nuclear_norm(const QTensor3& A, const PureUnitQuaternion& mu) {
    QdftPlan plan(mu, A.n3());
    const QTensor3 Ah = fft_mode(A, 3, plan);
    double acc = 0;
    for (int k = 0; k < A.n3(); ++k) acc += qm_nuclear_norm(Ah.frontal_slice(k));
    return acc / A.n3();
}

QTensor3 truncate(const QTensor3& A, const PureUnitQuaternion& mu, int k) {
    const int n1 = A.n1(), n2 = A.n2(), n3 = A.n3();
    const int m = std::min(n1, n2);
    if (k < 0 || k > m) throw RankOutOfRange("truncate: k outside [0, min(n1,n2)]");
    QdftPlan plan(mu, n3);
    const QTensor3 Ah = fft_mode(A, 3, plan);
    QTensor3 Ch(n1, n2, n3);
    for (int l = 0; l < n3; ++l) {
        Qsvd s = qsvd(Ah.frontal_slice(l));
        QMatrix Uk(n1, k), SVt(k, n2);
        for (int t = 0; t < k; ++t) {
            for (int i = 0; i < n1; ++i) Uk(i, t) = s.U(i, t);
            for (int j = 0; j < n2; ++j) SVt(t, j) = qconj(s.V(j, t)) * s.sigma[t];
        }
        Ch.set_frontal_slice(l, qm_mul(Uk, SVt));
    }
    return ifft_mode(Ch, 3, plan);
}

MultiGqtRank multi_gqt_rank(const QTensor3& A, const PureUnitQuaternion& mu, double tol) {
    MultiGqtRank r;
    int* out[3] = {&r.r1, &r.r2, &r.r3};
    for (int w = 1; w <= 3; ++w) {
        QdftPlan plan(mu, mode_count(A, w));
        const QTensor3 Ah = fft_mode(A, w, plan);
        int rmax = 0;
        for (int idx = 0; idx < mode_count(A, w); ++idx) {
            const QMatrix S = mode_slice(Ah, w, idx);
            const Qsvd s = qsvd(S);
            const double t = tol >= 0 ? tol
                                      : std::max(S.rows(), S.cols()) * kEps *
                                            (s.sigma.empty() ? 0.0 : s.sigma[0]);
            int rank = 0;
            for (double v : s.sigma)
                if (v > t) ++rank;
            rmax = std::max(rmax, rank);
        }
        *out[w - 1] = rmax;
    }
    return r;
}

std::vector<std::vector<double>> singular_value_profile(const QTensor3& A,
                                                        const PureUnitQuaternion& mu, int w) {
    if (w < 1 || w > 3) throw DimensionMismatch("singular_value_profile: w must be 1, 2 or 3");
    QdftPlan plan(mu, mode_count(A, w));
    const QTensor3 Ah = fft_mode(A, w, plan);
    std::vector<std::vector<double>> out(mode_count(A, w));
    for (int idx = 0; idx < mode_count(A, w); ++idx)
        out[idx] = qsvd(mode_slice(Ah, w, idx)).sigma;
    return out;
}

} // namespace gqt
