#include <doctest.h>

#include <Eigen/Dense>

#include "gqt/qmatrix.hpp"
#include "test_util.hpp"

using namespace gqt;
using namespace gqt::testutil;

namespace {

QMatrix reconstruct(const Qsvd& s, int rows, int cols) {
    QMatrix R(rows, cols);
    const int m = int(s.sigma.size());
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            Quaternion acc;
            for (int t = 0; t < m; ++t)
                acc += qmul(s.U(i, t) * s.sigma[t], qconj(s.V(j, t)));
            R(i, j) = acc;
        }
    return R;
}

double unitarity_err(const QMatrix& U) {
    return (qm_mul(U.conj_transpose(), U) - QMatrix::identity(U.cols())).frobenius_norm();
}

} // namespace

TEST_CASE("qm_mul basics") {
    SplitMix64 rng(21);
    const QMatrix A = random_qmatrix(3, 3, rng);
    CHECK(rel_err(qm_mul(QMatrix::identity(3), A), A) <= 1e-15);

    QMatrix p(1, 1), q(1, 1);
    p(0, 0) = Quaternion::i();
    q(0, 0) = Quaternion::j();
    CHECK(qm_mul(p, q)(0, 0) == Quaternion::k());

    const QMatrix X = random_qmatrix(3, 2, rng), Y = random_qmatrix(2, 4, rng);
    CHECK(rel_err(qm_mul(X, Y).conj_transpose(),
                  qm_mul(Y.conj_transpose(), X.conj_transpose())) <= 1e-13);
    CHECK_THROWS_AS(qm_mul(X, X), DimensionMismatch);
}

TEST_CASE("trace identity for the Frobenius norm") {
    SplitMix64 rng(22);
    const QMatrix A = random_qmatrix(4, 3, rng);
    const QMatrix AtA = qm_mul(A.conj_transpose(), A);
    const QMatrix AAt = qm_mul(A, A.conj_transpose());
    double tr1 = 0, tr2 = 0;
    for (int i = 0; i < 3; ++i) tr1 += AtA(i, i).w;
    for (int i = 0; i < 4; ++i) tr2 += AAt(i, i).w;
    CHECK(tr1 == doctest::Approx(A.frobenius_norm_sq()).epsilon(1e-10));
    CHECK(tr2 == doctest::Approx(A.frobenius_norm_sq()).epsilon(1e-10));
}

TEST_CASE("complex adjoint representation") {
    QMatrix one(1, 1), jm(1, 1);
    one(0, 0) = Quaternion::one();
    jm(0, 0) = Quaternion::j();
    const Eigen::MatrixXcd c1 = to_complex_adjoint(one);
    CHECK((c1 - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-15);
    const Eigen::MatrixXcd cj = to_complex_adjoint(jm);
    CHECK(std::abs(cj(0, 1) - std::complex<double>(1, 0)) <= 1e-15);
    CHECK(std::abs(cj(1, 0) + std::complex<double>(1, 0)) <= 1e-15);

    SplitMix64 rng(23);
    for (int t = 0; t < 10; ++t) {
        const QMatrix A = random_qmatrix(2, 2, rng), B = random_qmatrix(2, 2, rng);
        const Eigen::MatrixXcd lhs = to_complex_adjoint(qm_mul(A, B));
        const Eigen::MatrixXcd rhs = to_complex_adjoint(A) * to_complex_adjoint(B);
        CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    }
}

TEST_CASE("qsvd on simple matrices") {
    QMatrix D(2, 2);
    D(0, 0) = Quaternion(3.0);
    D(1, 1) = Quaternion(1.0);
    const Qsvd s = qsvd(D);
    CHECK(s.sigma[0] == doctest::Approx(3.0));
    CHECK(s.sigma[1] == doctest::Approx(1.0));
    CHECK(rel_err(reconstruct(s, 2, 2), D) <= 1e-12);

    QMatrix im(1, 1);
    im(0, 0) = Quaternion::i();
    CHECK(qsvd(im).sigma[0] == doctest::Approx(1.0));
}

TEST_CASE("qsvd invariants on random matrices") {
    SplitMix64 rng(24);
    for (int t = 0; t < 40; ++t) {
        const int m = 1 + int(rng.next_below(8)), n = 1 + int(rng.next_below(8));
        const QMatrix A = random_qmatrix(m, n, rng);
        const Qsvd s = qsvd(A);
        CHECK(unitarity_err(s.U) <= 1e-9);
        CHECK(unitarity_err(s.V) <= 1e-9);
        CHECK(rel_err(reconstruct(s, m, n), A) <= 1e-9);
        for (std::size_t i = 1; i < s.sigma.size(); ++i) CHECK(s.sigma[i] <= s.sigma[i - 1] + 1e-12);
        // Paired complex-adjoint spectrum oracle.
        Eigen::BDCSVD<Eigen::MatrixXcd> csvd(to_complex_adjoint(A));
        const auto sv = csvd.singularValues();
        for (std::size_t i = 0; i < s.sigma.size(); ++i) {
            CHECK(std::abs(s.sigma[i] - sv(2 * int(i))) <= 1e-9 * std::max(1.0, sv(0)));
            CHECK(std::abs(sv(2 * int(i)) - sv(2 * int(i) + 1)) <= 1e-8 * std::max(1.0, sv(0)));
        }
    }
}

TEST_CASE("nuclear norm") {
    CHECK(qm_nuclear_norm(QMatrix::identity(4)) == doctest::Approx(4.0));

    SplitMix64 rng(25);
    // Rank-1 outer product of unit vectors.
    QMatrix u = random_qmatrix(3, 1, rng), v = random_qmatrix(4, 1, rng);
    double nu = 0, nv = 0;
    for (auto& q : u.data()) nu += q.norm_sq();
    for (auto& q : v.data()) nv += q.norm_sq();
    u = u * (1.0 / std::sqrt(nu));
    v = v * (1.0 / std::sqrt(nv));
    CHECK(qm_nuclear_norm(qm_mul(u, v.conj_transpose())) == doctest::Approx(1.0).epsilon(1e-10));

    // Factorization energy lower bound with random unitary mixing.
    const QMatrix A = random_qmatrix(3, 3, rng);
    const Qsvd s = qsvd(A);
    const double nn = qm_nuclear_norm(A);
    for (int t = 0; t < 20; ++t) {
        const Qsvd mix = qsvd(random_qmatrix(3, 3, rng));  // random unitary from a QSVD
        QMatrix S_half(3, 3), S_halfW(3, 3);
        for (int i = 0; i < 3; ++i) {
            S_half(i, i) = Quaternion(std::sqrt(s.sigma[i]));
            S_halfW(i, i) = Quaternion(std::sqrt(s.sigma[i]));
        }
        const QMatrix X = qm_mul(qm_mul(s.U, S_half), mix.U);
        const QMatrix Y = qm_mul(qm_mul(s.V, S_halfW), mix.U);
        CHECK(rel_err(qm_mul(X, Y.conj_transpose()), A) <= 1e-9);
        CHECK(0.5 * (X.frobenius_norm_sq() + Y.frobenius_norm_sq()) >= nn - 1e-8);
    }
    // Equality at the plain SVD-derived factorization.
    QMatrix S_half(3, 3);
    for (int i = 0; i < 3; ++i) S_half(i, i) = Quaternion(std::sqrt(s.sigma[i]));
    const QMatrix X0 = qm_mul(s.U, S_half), Y0 = qm_mul(s.V, S_half);
    CHECK(0.5 * (X0.frobenius_norm_sq() + Y0.frobenius_norm_sq()) ==
          doctest::Approx(nn).epsilon(1e-8));
}

TEST_CASE("hermitian solve") {
    SplitMix64 rng(26);
    QMatrix B = random_qmatrix(4, 2, rng);
    CHECK(rel_err(hermitian_solve(QMatrix::identity(4), B), B) <= 1e-13);
    CHECK(rel_err(hermitian_solve(QMatrix::identity(4) * 2.0, B), B * 0.5) <= 1e-13);

    for (int t = 0; t < 10; ++t) {
        const QMatrix G = random_qmatrix(5, 5, rng);
        const QMatrix H = qm_mul(G.conj_transpose(), G) + QMatrix::identity(5);
        const QMatrix R = random_qmatrix(5, 3, rng);
        const QMatrix X = hermitian_solve(H, R);
        CHECK((qm_mul(H, X) - R).frobenius_norm() <= 1e-10 * R.frobenius_norm());
    }

    QMatrix neg = QMatrix::identity(2) * -1.0;
    CHECK_THROWS_AS(hermitian_solve(neg, QMatrix::identity(2)), NotPositiveDefinite);
}
