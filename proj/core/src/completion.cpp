#include "gqt/completion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "gqt/errors.hpp"
#include "gqt/gqt_algebra.hpp"
#include "gqt/qdft.hpp"
#include "gqt/rng.hpp"

namespace gqt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

QTensor3 im_part(const QTensor3& T) {
    QTensor3 r = T;
    for (auto& q : r.data()) q.w = 0.0;
    return r;
}

int slices_of_mode(int n1, int n2, int n3, int w) { return w == 1 ? n1 : w == 2 ? n2 : n3; }

// Factor slice shapes for the mode-w product A *_mu^w B with result n1 x n2 x n3:
// w=3: A^(l) n1 x r, B^(l) r x n2;  w=1: n2 x r, r x n3;  w=2: n1 x r, r x n3.
void factor_dims(int n1, int n2, int n3, int w, int& arows, int& bcols) {
    if (w == 3) { arows = n1; bcols = n2; }
    else if (w == 1) { arows = n2; bcols = n3; }
    else { arows = n1; bcols = n3; }
}

std::vector<int> resolve_ranks(const SolverConfig& cfg, int slices, int arows, int bcols) {
    std::vector<int> r;
    if (cfg.rank.size() == 1) r.assign(slices, cfg.rank[0]);
    else if (int(cfg.rank.size()) == slices) r = cfg.rank;
    else throw ConfigError("rank vector must have size 1 or one entry per slice");
    for (int v : r)
        if (v < 1 || v > std::min(arows, bcols))
            throw ConfigError("rank entry outside [1, min(slice dims)]");
    return r;
}

void init_factor_pair(SliceFactors& A, SliceFactors& B, const std::vector<int>& ranks,
                      int arows, int bcols, SplitMix64& rng) {
    const int slices = int(ranks.size());
    A.resize(slices);
    B.resize(slices);
    for (int l = 0; l < slices; ++l) {
        const int r = ranks[l];
        const double s = 1.0 / std::sqrt(double(r));
        A[l] = QMatrix(arows, r);
        for (auto& q : A[l].data())
            q = Quaternion(rng.next_normal(), rng.next_normal(), rng.next_normal(),
                           rng.next_normal()) * s;
        B[l] = QMatrix(r, bcols);
        for (auto& q : B[l].data())
            q = Quaternion(rng.next_normal(), rng.next_normal(), rng.next_normal(),
                           rng.next_normal()) * s;
    }
}

QMatrix fetch_slice(const QTensor3& T, int w, int idx) {
    return w == 1 ? T.horizontal_slice(idx)
         : w == 2 ? T.lateral_slice(idx)
                  : T.frontal_slice(idx);
}

void store_slice(QTensor3& T, int w, int idx, const QMatrix& M) {
    if (w == 1) T.set_horizontal_slice(idx, M);
    else if (w == 2) T.set_lateral_slice(idx, M);
    else T.set_frontal_slice(idx, M);
}

// Spatial-domain A *_mu^w B from the transform-domain factor slices.
QTensor3 product_spatial(const SliceFactors& A, const SliceFactors& B, int w, int n1, int n2,
                         int n3, const QdftPlan& plan) {
    QTensor3 Ph(n1, n2, n3);
    for (std::size_t s = 0; s < A.size(); ++s)
        store_slice(Ph, w, int(s), qm_mul(A[s], B[s]));
    return ifft_mode(Ph, w, plan, true);
}

// Data-fit 1/(2 n_w) sum_s ||A^s B^s - C_w^s||^2 plus the lambda/(2 n_w) factor
// energies, all in the mode-w transform domain (Parseval with the sqrt(n_w) scale).
double factor_terms(const QTensor3& Ch_w, const SliceFactors& A, const SliceFactors& B, int w,
                    double data_weight, double lambda) {
    const double inv_n = 1.0 / double(A.size());
    double data = 0, energy = 0;
    for (std::size_t s = 0; s < A.size(); ++s) {
        data += (qm_mul(A[s], B[s]) - fetch_slice(Ch_w, w, int(s))).frobenius_norm_sq();
        energy += A[s].frobenius_norm_sq() + B[s].frobenius_norm_sq();
    }
    return 0.5 * inv_n * (data_weight * data + lambda * energy);
}

double tv_terms(const QTensor3& C, const SolverConfig& cfg) {
    double v = 0;
    if (cfg.lambda1 > 0 && C.n1() >= 2)
        v += cfg.lambda1 * mode_k_product(C, tv_matrix(C.n1()), 1).frobenius_norm_sq();
    if (cfg.lambda2 > 0 && C.n2() >= 2)
        v += cfg.lambda2 * mode_k_product(C, tv_matrix(C.n2()), 2).frobenius_norm_sq();
    return v;
}

void check_finite(double v, const char* where) {
    if (!std::isfinite(v)) throw NonFinite(std::string(where) + ": non-finite objective");
}

// Shared BB-PGM core. Minimizes s/2 ||C - P||^2 + TV(C) over feasible C
// (observed entries pinned to Im(M), real part zero).
InnerResult bbpgm_core(const QTensor3& P, double s, const QTensor3& M,
                       const ObservationMask& mask, const SolverConfig& cfg,
                       const QTensor3& C_init, bool first_outer) {
    const int n1 = C_init.n1(), n2 = C_init.n2();
    Eigen::MatrixXd HtH1, HtH2;
    if (cfg.lambda1 > 0 && n1 >= 2) {
        const Eigen::MatrixXd H = tv_matrix(n1);
        HtH1 = H.transpose() * H;
    }
    if (cfg.lambda2 > 0 && n2 >= 2) {
        const Eigen::MatrixXd H = tv_matrix(n2);
        HtH2 = H.transpose() * H;
    }
    const QTensor3 Mim = im_part(M);

    auto prox = [&](QTensor3& C) {
        for (int k = 0; k < C.n3(); ++k)
            for (int j = 0; j < n2; ++j)
                for (int i = 0; i < n1; ++i) {
                    Quaternion& q = C(i, j, k);
                    if (mask.at(i, j, k)) q = Mim(i, j, k);
                    else q.w = 0.0;
                }
    };
    auto grad = [&](const QTensor3& C) {
        QTensor3 g = (C - P) * s;
        for (auto& q : g.data()) q.w = 0.0;
        if (HtH1.size()) g += mode_k_product(C, HtH1, 1) * (2.0 * cfg.lambda1);
        if (HtH2.size()) g += mode_k_product(C, HtH2, 2) * (2.0 * cfg.lambda2);
        return g;
    };
    auto free_residual = [&](const QTensor3& g) {
        double acc = 0;
        for (int k = 0; k < g.n3(); ++k)
            for (int j = 0; j < n2; ++j)
                for (int i = 0; i < n1; ++i)
                    if (!mask.at(i, j, k)) acc += g(i, j, k).norm_sq();
        return std::sqrt(acc);
    };

    const double abs_tol = 1e-8 * M.frobenius_norm();
    QTensor3 C = C_init;
    prox(C);
    QTensor3 g = grad(C);

    InnerResult out;
    double alpha = cfg.inner_alpha0;
    QTensor3 C_prev_in = C, g_prev = g;
    for (int it = 0; it < cfg.max_inner; ++it) {
        if (it > 0) {
            // BB step from the last accepted pair; safeguard on tiny denominators.
            const QTensor3 dz = C - C_prev_in;
            const QTensor3 dg = g - g_prev;
            double num = dz.frobenius_norm_sq(), den = 0;
            for (std::size_t t = 0; t < dz.data().size(); ++t) {
                const Quaternion &a = dz.data()[t], &b = dg.data()[t];
                den += a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
            }
            if (std::abs(den) > 1e-15 * std::max(num, 1.0))
                alpha = std::clamp(num / den, 1e-8, 1e8);
        }
        C_prev_in = C;
        g_prev = g;
        C = C - g * alpha;
        prox(C);
        g = grad(C);

        const double res = free_residual(g);
        const double rhs = 0.25 * (C - C_init).frobenius_norm();
        out.iterations = it + 1;
        out.residual_norm = res;
        check_finite(res, "solve_c");
        if (res <= rhs || (first_outer && res <= abs_tol)) {
            out.condition_met = true;
            break;
        }
    }
    out.C = std::move(C);
    return out;
}

} // namespace

std::size_t ObservationMask::count() const {
    return std::size_t(std::count(observed_.begin(), observed_.end(), std::uint8_t(1)));
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open trace file: " + path);
    // Timing stays out of the file so identical runs produce identical bytes.
    f << "iter,objective,rel_change,inner_iters\n";
    f.precision(17);
    for (const auto& r : trace)
        f << r.iter << ',' << r.objective << ',' << r.rel_change << ',' << r.inner_iters
          << '\n';
}

Eigen::MatrixXd tv_matrix(int n) {
    if (n < 2) throw DimensionTooSmall("tv_matrix: n must be >= 2");
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n - 1, n);
    for (int i = 0; i < n - 1; ++i) {
        H(i, i) = 1.0;
        H(i, i + 1) = -1.0;
    }
    return H;
}

QTensor3 mode_k_product(const QTensor3& C, const Eigen::MatrixXd& M, int k) {
    if (k != 1 && k != 2) throw DimensionMismatch("mode_k_product: k must be 1 or 2");
    const int extent = k == 1 ? C.n1() : C.n2();
    if (M.cols() != extent) throw DimensionMismatch("mode_k_product: M.cols != mode extent");
    const int m = int(M.rows());
    QTensor3 R(k == 1 ? m : C.n1(), k == 2 ? m : C.n2(), C.n3());
    for (int kk = 0; kk < C.n3(); ++kk) {
        if (k == 1) {
            for (int j = 0; j < C.n2(); ++j)
                for (int p = 0; p < m; ++p) {
                    Quaternion acc;
                    for (int i = 0; i < extent; ++i)
                        if (M(p, i) != 0.0) acc += C(i, j, kk) * M(p, i);
                    R(p, j, kk) = acc;
                }
        } else {
            for (int p = 0; p < m; ++p)
                for (int i = 0; i < C.n1(); ++i) {
                    Quaternion acc;
                    for (int j = 0; j < extent; ++j)
                        if (M(p, j) != 0.0) acc += C(i, j, kk) * M(p, j);
                    R(i, p, kk) = acc;
                }
        }
    }
    return R;
}

double objective_qrtc(const QTensor3& C, const SliceFactors& A_hat, const SliceFactors& B_hat,
                      const SolverConfig& cfg) {
    if (A_hat.size() != std::size_t(C.n3()) || B_hat.size() != A_hat.size())
        throw DimensionMismatch("objective_qrtc: one factor pair per frontal slice required");
    QdftPlan plan(cfg.mu, C.n3());
    const QTensor3 Ch = fft_mode(C, 3, plan, true);
    const double v = factor_terms(Ch, A_hat, B_hat, 3, 1.0, cfg.lambda) + tv_terms(C, cfg);
    check_finite(v, "objective_qrtc");
    return v;
}

QTensor3 grad_c_qrtc(const QTensor3& C, const SliceFactors& A_hat, const SliceFactors& B_hat,
                     const SolverConfig& cfg) {
    QdftPlan plan(cfg.mu, C.n3());
    const QTensor3 P =
        im_part(product_spatial(A_hat, B_hat, 3, C.n1(), C.n2(), C.n3(), plan));
    QTensor3 g = C - P;
    for (auto& q : g.data()) q.w = 0.0;
    if (cfg.lambda1 > 0 && C.n1() >= 2) {
        const Eigen::MatrixXd H = tv_matrix(C.n1());
        g += mode_k_product(C, Eigen::MatrixXd(H.transpose() * H), 1) * (2.0 * cfg.lambda1);
    }
    if (cfg.lambda2 > 0 && C.n2() >= 2) {
        const Eigen::MatrixXd H = tv_matrix(C.n2());
        g += mode_k_product(C, Eigen::MatrixXd(H.transpose() * H), 2) * (2.0 * cfg.lambda2);
    }
    return g;
}

InnerResult solve_c_bbpgm(const QTensor3& M, const ObservationMask& mask,
                          const SliceFactors& A_hat, const SliceFactors& B_hat,
                          const SolverConfig& cfg, const QTensor3& C_init, bool first_outer) {
    QdftPlan plan(cfg.mu, M.n3());
    const QTensor3 P =
        im_part(product_spatial(A_hat, B_hat, 3, M.n1(), M.n2(), M.n3(), plan));
    return bbpgm_core(P, 1.0, M, mask, cfg, C_init, first_outer);
}

QMatrix update_a_slice(const QMatrix& C_hat_l, const QMatrix& B_hat_l_prev,
                       const QMatrix& A_hat_l_prev, double lambda, double beta,
                       double alpha_w) {
    if (lambda + beta <= 0) throw ConfigError("update_a_slice: lambda + beta must be > 0");
    QMatrix H = qm_mul(B_hat_l_prev, B_hat_l_prev.conj_transpose()) * alpha_w +
                QMatrix::identity(B_hat_l_prev.rows()) * (lambda + beta);
    QMatrix R = qm_mul(C_hat_l, B_hat_l_prev.conj_transpose()) * alpha_w +
                A_hat_l_prev * beta;
    // Right division R H^-1 via the Hermitian solve of H X = R*.
    return hermitian_solve(H, R.conj_transpose()).conj_transpose();
}

QMatrix update_b_slice(const QMatrix& C_hat_l, const QMatrix& A_hat_l_new,
                       const QMatrix& B_hat_l_prev, double lambda, double beta,
                       double alpha_w) {
    if (lambda + beta <= 0) throw ConfigError("update_b_slice: lambda + beta must be > 0");
    QMatrix H = qm_mul(A_hat_l_new.conj_transpose(), A_hat_l_new) * alpha_w +
                QMatrix::identity(A_hat_l_new.cols()) * (lambda + beta);
    QMatrix R = qm_mul(A_hat_l_new.conj_transpose(), C_hat_l) * alpha_w +
                B_hat_l_prev * beta;
    return hermitian_solve(H, R);
}

CompletionResult qrtc(const QTensor3& M, const ObservationMask& mask, const SolverConfig& cfg) {
    if (mask.n1() != M.n1() || mask.n2() != M.n2() || mask.n3() != M.n3())
        throw ConfigError("qrtc: mask shape differs from data shape");
    const auto t0 = Clock::now();
    const int n1 = M.n1(), n2 = M.n2(), n3 = M.n3();
    const std::vector<int> ranks = resolve_ranks(cfg, n3, n1, n2);
    QdftPlan plan(cfg.mu, n3);

    SliceFactors A, B;
    SplitMix64 rng(cfg.seed);
    init_factor_pair(A, B, ranks, n1, n2, rng);

    // C^0 = P_Omega(Im(M)), zeros elsewhere.
    QTensor3 C(n1, n2, n3);
    const QTensor3 Mim = im_part(M);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i)
                if (mask.at(i, j, k)) C(i, j, k) = Mim(i, j, k);

    CompletionResult out;
    double f_prev = objective_qrtc(C, A, B, cfg);
    for (int t = 1; t <= cfg.max_outer; ++t) {
        const QTensor3 P = im_part(product_spatial(A, B, 3, n1, n2, n3, plan));
        const InnerResult inner = bbpgm_core(P, 1.0, M, mask, cfg, C, t == 1);
        C = inner.C;

        const QTensor3 Ch = fft_mode(C, 3, plan, true);
        for (int l = 0; l < n3; ++l) {
            const QMatrix Cl = Ch.frontal_slice(l);
            A[l] = update_a_slice(Cl, B[l], A[l], cfg.lambda, cfg.beta);
            B[l] = update_b_slice(Cl, A[l], B[l], cfg.lambda, cfg.beta);
        }

        const double f = objective_qrtc(C, A, B, cfg);
        const double rel = std::abs(f_prev - f) / std::max(std::abs(f_prev), 1e-12);
        out.trace.push_back({t, f, rel, inner.iterations, ms_since(t0)});
        out.iterations = t;
        out.final_relative_change = rel;
        f_prev = f;
        if (rel < cfg.epsilon) break;
    }
    out.C_hat = std::move(C);
    out.wall_time_ms = ms_since(t0);
    return out;
}

double objective_mqrtc(const QTensor3& C, const MultiFactors& f, const SolverConfig& cfg) {
    const int n1 = C.n1(), n2 = C.n2(), n3 = C.n3();
    double v = tv_terms(C, cfg);
    for (int w = 1; w <= 3; ++w) {
        QdftPlan plan(cfg.mu, slices_of_mode(n1, n2, n3, w));
        const QTensor3 Ch = fft_mode(C, w, plan, true);
        v += factor_terms(Ch, f.A_hat[w - 1], f.B_hat[w - 1], w, cfg.alpha[w - 1], cfg.lambda);
    }
    check_finite(v, "objective_mqrtc");
    return v;
}

namespace {

QTensor3 mqrtc_target(const QTensor3& C_like, const MultiFactors& f, const SolverConfig& cfg) {
    const int n1 = C_like.n1(), n2 = C_like.n2(), n3 = C_like.n3();
    const double asum = cfg.alpha[0] + cfg.alpha[1] + cfg.alpha[2];
    if (asum <= 0) throw ConfigError("mqrtc: alpha weights sum to zero");
    QTensor3 X(n1, n2, n3);
    for (int w = 1; w <= 3; ++w) {
        if (cfg.alpha[w - 1] == 0.0) continue;
        QdftPlan plan(cfg.mu, slices_of_mode(n1, n2, n3, w));
        X += product_spatial(f.A_hat[w - 1], f.B_hat[w - 1], w, n1, n2, n3, plan) *
             (cfg.alpha[w - 1] / asum);
    }
    return im_part(X);
}

} // namespace

InnerResult solve_c_pgm_multi(const QTensor3& M, const ObservationMask& mask,
                              const MultiFactors& f, const SolverConfig& cfg,
                              const QTensor3& C_init, bool first_outer) {
    const double asum = cfg.alpha[0] + cfg.alpha[1] + cfg.alpha[2];
    return bbpgm_core(mqrtc_target(C_init, f, cfg), asum, M, mask, cfg, C_init, first_outer);
}

CompletionResult mqrtc(const QTensor3& M, const ObservationMask& mask, const SolverConfig& cfg) {
    if (mask.n1() != M.n1() || mask.n2() != M.n2() || mask.n3() != M.n3())
        throw ConfigError("mqrtc: mask shape differs from data shape");
    const auto t0 = Clock::now();
    const int n1 = M.n1(), n2 = M.n2(), n3 = M.n3();

    MultiFactors f;
    std::array<std::vector<int>, 3> ranks;
    std::array<QdftPlan, 3> plans = {QdftPlan(cfg.mu, n1), QdftPlan(cfg.mu, n2),
                                     QdftPlan(cfg.mu, n3)};
    // Mode 3 draws from the same stream as qrtc so the alpha = (0,0,1)
    // degeneracy reproduces its iterates exactly; modes 1/2 get shifted seeds.
    for (int w : {3, 1, 2}) {
        int arows, bcols;
        factor_dims(n1, n2, n3, w, arows, bcols);
        ranks[w - 1] = resolve_ranks(cfg, slices_of_mode(n1, n2, n3, w), arows, bcols);
        SplitMix64 rng(w == 3 ? cfg.seed : cfg.seed + (w == 1 ? 1 : 2));
        init_factor_pair(f.A_hat[w - 1], f.B_hat[w - 1], ranks[w - 1], arows, bcols, rng);
    }

    QTensor3 C(n1, n2, n3);
    const QTensor3 Mim = im_part(M);
    for (int k = 0; k < n3; ++k)
        for (int j = 0; j < n2; ++j)
            for (int i = 0; i < n1; ++i)
                if (mask.at(i, j, k)) C(i, j, k) = Mim(i, j, k);

    CompletionResult out;
    double f_prev = objective_mqrtc(C, f, cfg);
    for (int t = 1; t <= cfg.max_outer; ++t) {
        const InnerResult inner = solve_c_pgm_multi(M, mask, f, cfg, C, t == 1);
        C = inner.C;

        for (int w = 1; w <= 3; ++w) {
            const double aw = cfg.alpha[w - 1];
            const QdftPlan& plan = plans[w == 1 ? 0 : w == 2 ? 1 : 2];
            const QTensor3 Ch = fft_mode(C, w, plan, true);
            auto& A = f.A_hat[w - 1];
            auto& B = f.B_hat[w - 1];
            for (std::size_t s = 0; s < A.size(); ++s) {
                const QMatrix Cs = fetch_slice(Ch, w, int(s));
                A[s] = update_a_slice(Cs, B[s], A[s], cfg.lambda, cfg.beta, aw);
                B[s] = update_b_slice(Cs, A[s], B[s], cfg.lambda, cfg.beta, aw);
            }
        }

        const double fv = objective_mqrtc(C, f, cfg);
        const double rel = std::abs(f_prev - fv) / std::max(std::abs(f_prev), 1e-12);
        out.trace.push_back({t, fv, rel, inner.iterations, ms_since(t0)});
        out.iterations = t;
        out.final_relative_change = rel;
        f_prev = fv;
        if (rel < cfg.epsilon) break;
    }
    out.C_hat = std::move(C);
    out.wall_time_ms = ms_since(t0);
    return out;
}

} // namespace gqt
