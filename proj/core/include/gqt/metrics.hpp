#pragma once

#include <string>

#include "gqt/tensor.hpp"

namespace gqt {

struct MetricReport {
    double rse_db = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

/// 10 log10(||C - C_hat||_F / ||C||_F): the norm ratio, not its square.
/// Exact recovery reports -inf.
double rse(const QTensor3& C_true, const QTensor3& C_hat);

/// 10 log10(numel * peak^2 / ||diff||_F^2) with numel = n1*n2*n3*3 channel
/// samples; identical inputs report +inf.
double psnr(const QTensor3& C_true, const QTensor3& C_hat, double peakval = 1.0);

/// Mean SSIM over frames and the three imaginary channels; 11x11 Gaussian
/// window, sigma 1.5, C1 = (0.01 L)^2, C2 = (0.03 L)^2 with L = 255 after
/// rescaling [0,1] pixels to the uint8 range.
double ssim(const QTensor3& C_true, const QTensor3& C_hat);

MetricReport evaluate_metrics(const QTensor3& C_true, const QTensor3& C_hat);

/// {"rse_db": ..., "psnr_db": ..., "ssim": ...} on one line; infinities become
/// the strings "inf" / "-inf".
std::string metric_report_json(const MetricReport& r);

std::string metric_report_table(const MetricReport& r);

} // namespace gqt
