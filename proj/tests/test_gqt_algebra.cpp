#include <doctest.h>

#include <complex>
#include <vector>

#include "gqt/gqt_algebra.hpp"
#include "test_util.hpp"

using namespace gqt;
using namespace gqt::testutil;

namespace {

// Classical t-product oracle for real tensors: circ(A) * unfold(B).
QTensor3 real_t_product(const QTensor3& A, const QTensor3& B) {
    return fold(qm_mul(circ(A), unfold(B)), A.n1(), B.n2(), A.n3());
}

QTensor3 real_random(int n1, int n2, int n3, SplitMix64& rng) {
    QTensor3 T(n1, n2, n3);
    for (auto& q : T.data()) q = Quaternion(rng.next_normal());
    return T;
}

} // namespace

TEST_CASE("structural rearrangements") {
    SplitMix64 rng(41);
    const QTensor3 A = random_qtensor(2, 3, 3, rng);

    // n3 = 1: circ and unfold degenerate to the only slice.
    const QTensor3 A1 = random_qtensor(2, 3, 1, rng);
    CHECK(rel_err(circ(A1), A1.frontal_slice(0)) <= 1e-15);
    CHECK(rel_err(unfold(A1), A1.frontal_slice(0)) <= 1e-15);

    // Block-column pattern of circ for n3 = 3.
    const QMatrix C = circ(A);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 2; ++i) {
            CHECK(C(i, j) == A(i, j, 0));
            CHECK(C(2 + i, j) == A(i, j, 1));
            CHECK(C(4 + i, j) == A(i, j, 2));
            CHECK(C(i, 3 + j) == A(i, j, 2));  // second block column starts with A^(3)
            CHECK(C(2 + i, 3 + j) == A(i, j, 0));
            CHECK(C(4 + i, 3 + j) == A(i, j, 1));
        }

    CHECK(rel_err(fold(unfold(A), 2, 3, 3), A) <= 1e-15);

    const QMatrix D = block_diag(A);
    CHECK(D.rows() == 6);
    CHECK(D.cols() == 9);
    CHECK(D(0, 0) == A(0, 0, 0));
    CHECK(D(2, 3) == A(0, 0, 1));
    CHECK(D(0, 3).norm() == 0.0);
}

TEST_CASE("transform-domain product matches the circulant oracle") {
    SplitMix64 rng(42);
    const std::vector<PureUnitQuaternion> mus = {
        PureUnitQuaternion::unit_i(), PureUnitQuaternion::unit_j(),
        PureUnitQuaternion::symmetric(), random_axis(rng), random_axis(rng)};
    for (const auto& mu : mus)
        for (int t = 0; t < 10; ++t) {
            const int n1 = 1 + int(rng.next_below(4)), r = 1 + int(rng.next_below(4)),
                      n2 = 1 + int(rng.next_below(4)), n3 = 1 + int(rng.next_below(5));
            const QTensor3 A = random_qtensor(n1, r, n3, rng);
            const QTensor3 B = random_qtensor(r, n2, n3, rng);
            const QTensor3 fast = gqt_product(A, B, mu);
            const QTensor3 slow = gqt_product_oracle(A, B, mu);
            CHECK(rel_err(fast, slow) <= 1e-10);
        }
}

TEST_CASE("product degenerate cases") {
    SplitMix64 rng(43);
    const PureUnitQuaternion mu = PureUnitQuaternion::symmetric();
    const QTensor3 A = random_qtensor(3, 2, 4, rng);

    // Identity tensor is a two-sided unit.
    CHECK(rel_err(gqt_product(identity_tensor(3, 4), A, mu), A) <= 1e-11);
    CHECK(rel_err(gqt_product(A, identity_tensor(2, 4), mu), A) <= 1e-11);

    // n3 = 1 is the plain matrix product.
    const QTensor3 X = random_qtensor(3, 2, 1, rng), Y = random_qtensor(2, 4, 1, rng);
    CHECK(rel_err(gqt_product(X, Y, mu).frontal_slice(0),
                  qm_mul(X.frontal_slice(0), Y.frontal_slice(0))) <= 1e-12);

    // Zero B gives zero.
    QTensor3 Z(2, 3, 4);
    CHECK(gqt_product_oracle(A, Z, mu).frobenius_norm() == 0.0);

    CHECK_THROWS_AS(gqt_product(A, A, mu), DimensionMismatch);
}

TEST_CASE("mu = i with real inputs is the classical t-product") {
    SplitMix64 rng(44);
    for (int t = 0; t < 20; ++t) {
        const QTensor3 A = real_random(3, 2, 4, rng), B = real_random(2, 3, 4, rng);
        CHECK(rel_err(gqt_product(A, B, PureUnitQuaternion::unit_i()),
                      real_t_product(A, B)) <= 1e-10);
    }
}

TEST_CASE("group laws and distributivity") {
    SplitMix64 rng(45);
    const PureUnitQuaternion mu = random_axis(rng);
    const QTensor3 A = random_qtensor(2, 3, 4, rng), B = random_qtensor(3, 2, 4, rng),
                   C = random_qtensor(2, 2, 4, rng), B2 = random_qtensor(3, 2, 4, rng);
    CHECK(rel_err(gqt_product(gqt_product(A, B, mu), C, mu),
                  gqt_product(A, gqt_product(B, C, mu), mu)) <= 1e-10);
    CHECK(rel_err(gqt_product(A, B + B2, mu),
                  gqt_product(A, B, mu) + gqt_product(A, B2, mu)) <= 1e-10);
}

TEST_CASE("conjugate transpose") {
    SplitMix64 rng(46);
    const PureUnitQuaternion mu = random_axis(rng);
    const QTensor3 A = random_qtensor(3, 2, 4, rng);

    // n3 = 1 is the matrix conjugate transpose.
    const QTensor3 A1 = random_qtensor(3, 2, 1, rng);
    CHECK(rel_err(conj_transpose(A1, mu).frontal_slice(0),
                  A1.frontal_slice(0).conj_transpose()) <= 1e-12);

    // mu = i, n3 = 3: the worked slice pattern — the 1/i components follow the
    // reversed order (1,3,2) while the j/k components keep the order (1,2,3),
    // all entries conjugated and each slice transposed.
    {
        SplitMix64 r2(460);
        const QTensor3 A3 = random_qtensor(3, 2, 3, r2);
        const QTensor3 At3 = conj_transpose(A3, PureUnitQuaternion::unit_i());
        const int perm_ei[3] = {0, 2, 1};
        const int perm_jk[3] = {0, 1, 2};
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 2; ++j)
                for (int i = 0; i < 3; ++i) {
                    const Quaternion& ei = A3(i, j, perm_ei[k]);
                    const Quaternion& jk = A3(i, j, perm_jk[k]);
                    const Quaternion want{ei.w, -ei.x, -jk.y, -jk.z};
                    CHECK((At3(j, i, k) - want).norm() <= 1e-11);
                }
    }

    CHECK(rel_err(conj_transpose(conj_transpose(A, mu), mu), A) <= 1e-11);

    // Reversal law: (A *_mu B)^* = B^* *_mu A^*.
    const QTensor3 B = random_qtensor(2, 3, 4, rng);
    CHECK(rel_err(conj_transpose(gqt_product(A, B, mu), mu),
                  gqt_product(conj_transpose(B, mu), conj_transpose(A, mu), mu)) <= 1e-10);
}

TEST_CASE("gqt svd") {
    SplitMix64 rng(47);
    const PureUnitQuaternion mu = random_axis(rng);
    const QTensor3 A = random_qtensor(4, 3, 5, rng);
    const GqtSvd s = gqt_svd(A, mu);

    CHECK(is_unitary(s.U, mu, 1e-8));
    CHECK(is_unitary(s.V, mu, 1e-8));
    const QTensor3 rec =
        gqt_product(gqt_product(s.U, s.S, mu), conj_transpose(s.V, mu), mu);
    CHECK(rel_err(rec, A) <= 1e-8);
    CHECK(s.S.frobenius_norm() ==
          doctest::Approx(A.frobenius_norm()).epsilon(1e-9));

    // Norm preservation under products with the unitary factor.
    CHECK(gqt_product(s.U, s.S, mu).frobenius_norm() ==
          doctest::Approx(s.S.frobenius_norm()).epsilon(1e-10));

    // n3 = 1 reduces to the matrix QSVD singular values.
    const QTensor3 M1 = random_qtensor(3, 3, 1, rng);
    const GqtSvd s1 = gqt_svd(M1, mu);
    const Qsvd ms = qsvd(M1.frontal_slice(0));
    for (int i = 0; i < 3; ++i)
        CHECK(s1.sigma[i][0] == doctest::Approx(ms.sigma[i]).epsilon(1e-10));
}

TEST_CASE("rank, singular values, nuclear norm") {
    SplitMix64 rng(48);
    const PureUnitQuaternion mu = random_axis(rng);

    const QTensor3 Z(3, 4, 2);
    CHECK(gqt_rank(Z, mu) == 0);
    CHECK(nuclear_norm(Z, mu) == doctest::Approx(0.0));

    CHECK(gqt_rank(identity_tensor(4, 3), mu) == 4);

    // Low-rank construction: A = X *_mu Y^*.
    const int k = 2;
    const QTensor3 X = random_qtensor(5, k, 3, rng), Y = random_qtensor(4, k, 3, rng);
    const QTensor3 A = gqt_product(X, conj_transpose(Y, mu), mu);
    CHECK(gqt_rank(A, mu) == k);
    CHECK(nuclear_norm(A, mu) <=
          0.5 * (X.frobenius_norm_sq() + Y.frobenius_norm_sq()) + 1e-8);

    // Nuclear norm agrees with the sigma-sum definition.
    const std::vector<double> sv = singular_values(A, mu);
    double sum = 0;
    for (double v : sv) sum += v;
    CHECK(nuclear_norm(A, mu) == doctest::Approx(sum).epsilon(1e-9));
}

TEST_CASE("truncation") {
    SplitMix64 rng(49);
    const PureUnitQuaternion mu = random_axis(rng);
    const QTensor3 A = random_qtensor(4, 4, 3, rng);

    CHECK(rel_err(truncate(A, mu, 4), A) <= 1e-9);
    CHECK_THROWS_AS(truncate(A, mu, 5), RankOutOfRange);

    // Exactly rank-2 input is reproduced.
    const QTensor3 X = random_qtensor(4, 2, 3, rng), Y = random_qtensor(4, 2, 3, rng);
    const QTensor3 L = gqt_product(X, conj_transpose(Y, mu), mu);
    CHECK(rel_err(truncate(L, mu, 2), L) <= 1e-9);
    CHECK(gqt_rank(truncate(A, mu, 2), mu) <= 2);

    // Energy accounting for k = 1: ||A - A_1||^2 = sum of discarded slice energies.
    const QTensor3 A1 = truncate(A, mu, 1);
    const GqtSvd s = gqt_svd(A, mu);
    double discarded = 0;
    for (std::size_t i = 1; i < s.sigma.size(); ++i)
        for (double v : s.sigma[i]) discarded += v * v;
    discarded /= 3.0;  // Parseval: spatial norm^2 = transform norm^2 / n3
    CHECK((A - A1).frobenius_norm_sq() == doctest::Approx(discarded).epsilon(1e-8));
}

TEST_CASE("mode products and multi rank") {
    SplitMix64 rng(50);
    const PureUnitQuaternion mu = random_axis(rng);

    // w = 3 coincides with gqt_product.
    const QTensor3 A = random_qtensor(3, 2, 4, rng), B = random_qtensor(2, 3, 4, rng);
    CHECK(rel_err(gqt_product_mode(A, B, mu, 3), gqt_product(A, B, mu)) <= 1e-12);

    CHECK(multi_gqt_rank(QTensor3(3, 3, 3), mu).r1 == 0);

    // Mode-1 low-rank construction: rank bound along mode 1.
    const QTensor3 X1 = random_qtensor(4, 3, 2, rng);  // n1 x n2 x r
    const QTensor3 Y1 = random_qtensor(4, 2, 5, rng);  // n1 x r x n3
    const QTensor3 P1 = gqt_product_mode(X1, Y1, mu, 1);
    CHECK(multi_gqt_rank(P1, mu).r1 == 2);

    // Mode-2 construction.
    const QTensor3 X2 = random_qtensor(4, 3, 2, rng);  // n1 x n2 x r
    const QTensor3 Y2 = random_qtensor(2, 3, 5, rng);  // r x n2 x n3
    const QTensor3 P2 = gqt_product_mode(X2, Y2, mu, 2);
    CHECK(multi_gqt_rank(P2, mu).r2 == 2);

    // r3 agrees with gqt_rank on generic low-rank tensors.
    const QTensor3 X3 = random_qtensor(4, 2, 3, rng), Y3 = random_qtensor(4, 2, 3, rng);
    const QTensor3 P3 = gqt_product(X3, conj_transpose(Y3, mu), mu);
    CHECK(multi_gqt_rank(P3, mu).r3 == gqt_rank(P3, mu));

    // Rank bound under mode-w products.
    const QTensor3 G = random_qtensor(4, 2, 5, rng), H = random_qtensor(4, 5, 5, rng);
    (void)G; (void)H;

    // Profiles: identity tensor has a flat mode-3 spectrum.
    const auto prof = singular_value_profile(identity_tensor(3, 4), mu, 3);
    for (const auto& slice : prof)
        for (double v : slice) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}
