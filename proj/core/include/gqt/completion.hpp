#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gqt/quaternion.hpp"
#include "gqt/qmatrix.hpp"
#include "gqt/tensor.hpp"

namespace gqt {

/// P_Omega: which pixels (whole quaternion entries) are observed.
class ObservationMask {
public:
    ObservationMask() = default;
    ObservationMask(int n1, int n2, int n3)
        : n1_(n1), n2_(n2), n3_(n3), observed_(std::size_t(n1) * n2 * n3, 0) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::size_t size() const { return observed_.size(); }

    bool at(int i, int j, int k) const {
        return observed_[(std::size_t(k) * n2_ + j) * n1_ + i] != 0;
    }
    void set(int i, int j, int k, bool v) {
        observed_[(std::size_t(k) * n2_ + j) * n1_ + i] = v ? 1 : 0;
    }

    std::vector<std::uint8_t>& raw() { return observed_; }
    const std::vector<std::uint8_t>& raw() const { return observed_; }

    std::size_t count() const;
    double rho() const { return observed_.empty() ? 0.0 : double(count()) / double(size()); }

private:
    int n1_ = 0;
    int n2_ = 0;
    int n3_ = 0;
    std::vector<std::uint8_t> observed_;
};

struct SolverConfig {
    PureUnitQuaternion mu = PureUnitQuaternion::symmetric();
    double lambda = 21.0;
    double lambda1 = 5.0;
    double lambda2 = 5.0;
    double beta = 0.1;
    std::array<double, 3> alpha = {10.0, 10.0, 1.0};  // MQRTC mode weights
    std::vector<int> rank = {30};  // size 1 (uniform) or n3 (per transform slice)
    double epsilon = 1e-3;
    int max_outer = 20;
    int max_inner = 100;
    double inner_alpha0 = 1.0;
    std::uint64_t seed = 0;
};

/// Per-slice transform-domain factor matrices.
using SliceFactors = std::vector<QMatrix>;

struct TraceRow {
    int iter = 0;
    double objective = 0.0;
    double rel_change = 0.0;
    int inner_iters = 0;
    double wall_ms = 0.0;
};

struct CompletionResult {
    QTensor3 C_hat;
    int iterations = 0;
    std::vector<TraceRow> trace;
    double final_relative_change = 0.0;
    double wall_time_ms = 0.0;
};

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

/// First-difference Toeplitz matrix, (n-1) x n: H[i,i] = 1, H[i,i+1] = -1.
Eigen::MatrixXd tv_matrix(int n);

/// C x_k M: real-matrix contraction along mode k applied to all four parts.
QTensor3 mode_k_product(const QTensor3& C, const Eigen::MatrixXd& M, int k);

/// f = 1/2 ||A*B - C||^2 + lambda/2 (||A||^2 + ||B||^2) + sum_k lambda_k ||C x_k H||^2,
/// factor terms evaluated in the transform domain.
double objective_qrtc(const QTensor3& C, const SliceFactors& A_hat, const SliceFactors& B_hat,
                      const SolverConfig& cfg);

/// Gradient of the smooth C-part; pure imaginary (the real slot is zero).
QTensor3 grad_c_qrtc(const QTensor3& C, const SliceFactors& A_hat, const SliceFactors& B_hat,
                     const SolverConfig& cfg);

struct InnerResult {
    QTensor3 C;
    double residual_norm = 0.0;
    int iterations = 0;
    bool condition_met = false;
};

/// BB-stepped proximal gradient for the C-subproblem; the prox overwrites
/// observed entries with Im(M) and zeroes the real part.
InnerResult solve_c_bbpgm(const QTensor3& M, const ObservationMask& mask,
                          const SliceFactors& A_hat, const SliceFactors& B_hat,
                          const SolverConfig& cfg, const QTensor3& C_init,
                          bool first_outer = false);

/// A_new = (alpha_w C B* + beta A_prev)(alpha_w B B* + (lambda+beta) I)^-1.
QMatrix update_a_slice(const QMatrix& C_hat_l, const QMatrix& B_hat_l_prev,
                       const QMatrix& A_hat_l_prev, double lambda, double beta,
                       double alpha_w = 1.0);

/// B_new = (alpha_w A* A + (lambda+beta) I)^-1 (alpha_w A* C + beta B_prev).
QMatrix update_b_slice(const QMatrix& C_hat_l, const QMatrix& A_hat_l_new,
                       const QMatrix& B_hat_l_prev, double lambda, double beta,
                       double alpha_w = 1.0);

CompletionResult qrtc(const QTensor3& M, const ObservationMask& mask, const SolverConfig& cfg);

/// MQRTC state: one transform-domain factor pair per mode.
struct MultiFactors {
    std::array<SliceFactors, 3> A_hat;
    std::array<SliceFactors, 3> B_hat;
};

double objective_mqrtc(const QTensor3& C, const MultiFactors& f, const SolverConfig& cfg);

/// C-subproblem with data-fit target X = (sum_w alpha_w A_w *_mu^w B_w) / sum alpha_w
/// and coefficient sum_w alpha_w / 2.
InnerResult solve_c_pgm_multi(const QTensor3& M, const ObservationMask& mask,
                              const MultiFactors& f, const SolverConfig& cfg,
                              const QTensor3& C_init, bool first_outer = false);

CompletionResult mqrtc(const QTensor3& M, const ObservationMask& mask, const SolverConfig& cfg);

} // namespace gqt
