#include "gqt/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "gqt/errors.hpp"

namespace gqt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kL = 255.0;

void require_same_shape(const QTensor3& a, const QTensor3& b, const char* who) {
    if (!a.same_shape(b)) throw DimensionMismatch(std::string(who) + ": shape mismatch");
}

Eigen::MatrixXd gaussian_window() {
    Eigen::MatrixXd w(kWin, kWin);
    const int h = kWin / 2;
    double sum = 0;
    for (int i = 0; i < kWin; ++i)
        for (int j = 0; j < kWin; ++j) {
            const double d2 = double((i - h) * (i - h) + (j - h) * (j - h));
            w(i, j) = std::exp(-d2 / (2.0 * kSigma * kSigma));
            sum += w(i, j);
        }
    return w / sum;
}

// 'valid' windowed filtering of an n1 x n2 image.
Eigen::MatrixXd filt_valid(const Eigen::MatrixXd& img, const Eigen::MatrixXd& w) {
    const int m = int(img.rows()) - kWin + 1, n = int(img.cols()) - kWin + 1;
    Eigen::MatrixXd out(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = (img.block(i, j, kWin, kWin).array() * w.array()).sum();
    return out;
}

Eigen::MatrixXd channel_plane(const QTensor3& T, int ch, int frame) {
    Eigen::MatrixXd p(T.n1(), T.n2());
    for (int j = 0; j < T.n2(); ++j)
        for (int i = 0; i < T.n1(); ++i) {
            const Quaternion& q = T(i, j, frame);
            p(i, j) = (ch == 0 ? q.x : ch == 1 ? q.y : q.z) * kL;
        }
    return p;
}

} // namespace

double rse(const QTensor3& C_true, const QTensor3& C_hat) {
    require_same_shape(C_true, C_hat, "rse");
    const double ref = C_true.frobenius_norm();
    if (ref == 0.0) throw ZeroReference("rse: reference tensor is zero");
    const double err = (C_true - C_hat).frobenius_norm();
    if (err == 0.0) return -kInf;
    return 10.0 * std::log10(err / ref);
}

double psnr(const QTensor3& C_true, const QTensor3& C_hat, double peakval) {
    require_same_shape(C_true, C_hat, "psnr");
    double err2 = 0;
    for (std::size_t t = 0; t < C_true.data().size(); ++t) {
        const Quaternion d = C_true.data()[t] - C_hat.data()[t];
        err2 += d.x * d.x + d.y * d.y + d.z * d.z;
    }
    if (err2 == 0.0) return kInf;
    const double numel = double(C_true.n1()) * C_true.n2() * C_true.n3() * 3.0;
    return 10.0 * std::log10(numel * peakval * peakval / err2);
}

double ssim(const QTensor3& C_true, const QTensor3& C_hat) {
    require_same_shape(C_true, C_hat, "ssim");
    if (C_true.n1() < kWin || C_true.n2() < kWin)
        throw FrameTooSmall("ssim: frame smaller than the 11x11 window");
    const Eigen::MatrixXd w = gaussian_window();
    const double c1 = (0.01 * kL) * (0.01 * kL);
    const double c2 = (0.03 * kL) * (0.03 * kL);

    double acc = 0;
    int planes = 0;
    for (int k = 0; k < C_true.n3(); ++k)
        for (int ch = 0; ch < 3; ++ch) {
            const Eigen::MatrixXd a = channel_plane(C_true, ch, k);
            const Eigen::MatrixXd b = channel_plane(C_hat, ch, k);
            const Eigen::MatrixXd mu1 = filt_valid(a, w);
            const Eigen::MatrixXd mu2 = filt_valid(b, w);
            const Eigen::MatrixXd s1 =
                filt_valid(a.cwiseProduct(a), w) - mu1.cwiseProduct(mu1);
            const Eigen::MatrixXd s2 =
                filt_valid(b.cwiseProduct(b), w) - mu2.cwiseProduct(mu2);
            const Eigen::MatrixXd s12 =
                filt_valid(a.cwiseProduct(b), w) - mu1.cwiseProduct(mu2);
            const Eigen::ArrayXXd num =
                (2.0 * mu1.cwiseProduct(mu2).array() + c1) * (2.0 * s12.array() + c2);
            const Eigen::ArrayXXd den =
                (mu1.cwiseProduct(mu1).array() + mu2.cwiseProduct(mu2).array() + c1) *
                (s1.array() + s2.array() + c2);
            acc += (num / den).mean();
            ++planes;
        }
    return acc / planes;
}

MetricReport evaluate_metrics(const QTensor3& C_true, const QTensor3& C_hat) {
    return {rse(C_true, C_hat), psnr(C_true, C_hat), ssim(C_true, C_hat)};
}

namespace {

std::string num_json(double v) {
    if (v == kInf) return "\"inf\"";
    if (v == -kInf) return "\"-inf\"";
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

} // namespace

std::string metric_report_json(const MetricReport& r) {
    return "{\"rse_db\": " + num_json(r.rse_db) + ", \"psnr_db\": " + num_json(r.psnr_db) +
           ", \"ssim\": " + num_json(r.ssim) + "}";
}

std::string metric_report_table(const MetricReport& r) {
    std::ostringstream o;
    o.precision(6);
    o << "metric   value\n"
      << "RSE(dB)  " << r.rse_db << "\n"
      << "PSNR(dB) " << r.psnr_db << "\n"
      << "SSIM     " << r.ssim << "\n";
    return o.str();
}

} // namespace gqt
