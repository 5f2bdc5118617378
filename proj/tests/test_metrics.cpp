#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gqt/metrics.hpp"
#include "test_util.hpp"

using namespace gqt;
using namespace gqt::testutil;

namespace {

QTensor3 channel_tensor(int n1, int n2, int n3, double r, double g, double b) {
    QTensor3 T(n1, n2, n3);
    for (auto& q : T.data()) q = Quaternion(0, r, g, b);
    return T;
}

} // namespace

TEST_CASE("rse") {
    SplitMix64 rng(81);
    const QTensor3 C = random_qtensor(4, 4, 3, rng);

    // Error with one tenth of the reference norm: exactly -10 dB.
    QTensor3 E = random_qtensor(4, 4, 3, rng);
    E = E * (0.1 * C.frobenius_norm() / E.frobenius_norm());
    CHECK(rse(C, C + E) == doctest::Approx(-10.0).epsilon(1e-12));

    // Direct formula on a random pair.
    const QTensor3 H = random_qtensor(4, 4, 3, rng);
    CHECK(rse(C, H) ==
          doctest::Approx(10.0 * std::log10((H - C).frobenius_norm() / C.frobenius_norm()))
              .epsilon(1e-12));

    CHECK(rse(C, C) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(rse(QTensor3(4, 4, 3), H), ZeroReference);
    CHECK_THROWS_AS(rse(C, random_qtensor(3, 4, 3, rng)), DimensionMismatch);
}

TEST_CASE("psnr") {
    const int n1 = 6, n2 = 5, n3 = 2;
    const QTensor3 C = channel_tensor(n1, n2, n3, 0.5, 0.5, 0.5);

    // Constant per-channel error e: PSNR = 20 log10(peak / e).
    for (double e : {0.1, 0.02}) {
        const QTensor3 H = channel_tensor(n1, n2, n3, 0.5 + e, 0.5 + e, 0.5 + e);
        CHECK(psnr(C, H) == doctest::Approx(20.0 * std::log10(1.0 / e)).epsilon(1e-10));
        // Same pixels expressed on a 0..255 scale give the same number.
        CHECK(psnr(C * 255.0, H * 255.0, 255.0) ==
              doctest::Approx(20.0 * std::log10(1.0 / e)).epsilon(1e-10));
    }

    CHECK(psnr(C, C) == std::numeric_limits<double>::infinity());

    SplitMix64 rng(82);
    const QTensor3 A = random_qtensor(n1, n2, n3, rng), B = random_qtensor(n1, n2, n3, rng);
    const double numel = double(n1) * n2 * n3 * 3;
    double err2 = 0;  // only the three channel slots enter the error
    for (std::size_t t = 0; t < A.data().size(); ++t) {
        const Quaternion d = A.data()[t] - B.data()[t];
        err2 += d.x * d.x + d.y * d.y + d.z * d.z;
    }
    CHECK(psnr(A, B) == doctest::Approx(10.0 * std::log10(numel / err2)).epsilon(1e-10));
    CHECK_THROWS_AS(psnr(A, random_qtensor(2, 2, 2, rng)), DimensionMismatch);
}

TEST_CASE("ssim") {
    const int n = 16;
    const QTensor3 C = channel_tensor(n, n, 2, 0.3, 0.5, 0.7);
    CHECK(ssim(C, C) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ssim(QTensor3(n, n, 2), QTensor3(n, n, 2)) == doctest::Approx(1.0).epsilon(1e-12));

    // Uniform images with a constant shift: variances vanish, so per channel
    // SSIM = [(2 m1 m2 + C1)(C2)] / [(m1^2 + m2^2 + C1)(C2)] with the means on
    // the 0..255 scale.
    const double c1 = 0.01 * 255 * 0.01 * 255;
    auto uniform_ssim = [&](double a, double b) {
        const double m1 = a * 255, m2 = b * 255;
        return (2 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1);
    };
    const QTensor3 A = channel_tensor(n, n, 1, 0.4, 0.4, 0.4);
    const QTensor3 B = channel_tensor(n, n, 1, 0.6, 0.6, 0.6);
    CHECK(ssim(A, B) == doctest::Approx(uniform_ssim(0.4, 0.6)).epsilon(1e-10));
    const QTensor3 B2 = channel_tensor(n, n, 1, 0.6, 0.2, 0.4);
    CHECK(ssim(A, B2) == doctest::Approx((uniform_ssim(0.4, 0.6) + uniform_ssim(0.4, 0.2) +
                                          uniform_ssim(0.4, 0.4)) /
                                         3.0)
                             .epsilon(1e-10));

    SplitMix64 rng(83);
    QTensor3 X(n, n, 2), Y(n, n, 2);
    for (auto& q : X.data())
        q = Quaternion(0, rng.next_double(), rng.next_double(), rng.next_double());
    for (auto& q : Y.data())
        q = Quaternion(0, rng.next_double(), rng.next_double(), rng.next_double());
    CHECK(ssim(X, Y) == doctest::Approx(ssim(Y, X)).epsilon(1e-12));
    CHECK(ssim(X, Y) < 1.0);
    CHECK(ssim(X, Y) >= -1.0);

    CHECK_THROWS_AS(ssim(QTensor3(8, 8, 1), QTensor3(8, 8, 1)), FrameTooSmall);
    CHECK_THROWS_AS(ssim(C, QTensor3(n, n, 3)), DimensionMismatch);
}

TEST_CASE("metric monotonicity and invariance") {
    SplitMix64 rng(84);
    const int n = 16;
    QTensor3 C(n, n, 2);
    for (auto& q : C.data())
        q = Quaternion(0, rng.next_double(), rng.next_double(), rng.next_double());
    QTensor3 E(n, n, 2);
    for (auto& q : E.data())
        q = Quaternion(0, rng.next_normal(), rng.next_normal(), rng.next_normal());
    E = E * (0.05 / E.frobenius_norm() * C.frobenius_norm());

    // Growing the error monotonically worsens RSE/PSNR and (here) SSIM.
    double prev_rse = -std::numeric_limits<double>::infinity();
    double prev_psnr = std::numeric_limits<double>::infinity();
    double prev_ssim = 1.0 + 1e-12;
    for (double s : {0.25, 0.5, 1.0, 2.0}) {
        const QTensor3 H = C + E * s;
        CHECK(rse(C, H) > prev_rse);
        CHECK(psnr(C, H) < prev_psnr);
        CHECK(ssim(C, H) < prev_ssim);
        prev_rse = rse(C, H);
        prev_psnr = psnr(C, H);
        prev_ssim = ssim(C, H);
    }

    // RSE and PSNR only see the entrywise error: frame order doesn't matter.
    QTensor3 Cp(n, n, 2), Hp(n, n, 2);
    const QTensor3 H = C + E;
    Cp.set_frontal_slice(0, C.frontal_slice(1));
    Cp.set_frontal_slice(1, C.frontal_slice(0));
    Hp.set_frontal_slice(0, H.frontal_slice(1));
    Hp.set_frontal_slice(1, H.frontal_slice(0));
    CHECK(rse(Cp, Hp) == doctest::Approx(rse(C, H)).epsilon(1e-12));
    CHECK(psnr(Cp, Hp) == doctest::Approx(psnr(C, H)).epsilon(1e-12));
    CHECK(ssim(Cp, Hp) == doctest::Approx(ssim(C, H)).epsilon(1e-12));
}

TEST_CASE("metric reports") {
    MetricReport r;
    r.rse_db = -25.5;
    r.psnr_db = 31.25;
    r.ssim = 0.875;
    const std::string j = metric_report_json(r);
    CHECK(j.find("\"rse_db\"") != std::string::npos);
    CHECK(j.find("-25.5") != std::string::npos);
    CHECK(j.find("31.25") != std::string::npos);
    CHECK(j.find("0.875") != std::string::npos);

    r.rse_db = -std::numeric_limits<double>::infinity();
    r.psnr_db = std::numeric_limits<double>::infinity();
    const std::string s = metric_report_json(r);
    CHECK(s.find("\"-inf\"") != std::string::npos);
    CHECK(s.find("\"inf\"") != std::string::npos);

    CHECK(metric_report_table(r).find("SSIM") != std::string::npos);
}
