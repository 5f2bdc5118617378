#pragma once

#include <vector>

#include "gqt/qdft.hpp"
#include "gqt/qmatrix.hpp"
#include "gqt/tensor.hpp"

namespace gqt {

/// Block circulant matrix of the frontal slices, (n1 n3) x (n2 n3).
QMatrix circ(const QTensor3& A);
/// Stacked frontal slices [A1; A2; ...; An3], (n1 n3) x n2.
QMatrix unfold(const QTensor3& A);
QTensor3 fold(const QMatrix& M, int n1, int n2, int n3);
/// Block diagonal of the frontal slices.
QMatrix block_diag(const QTensor3& A);

/// gQt-product in the transform domain: slice-wise products of the QDFT
/// tensors (scaled convention), then inverse transform.
QTensor3 gqt_product(const QTensor3& A, const QTensor3& B, const PureUnitQuaternion& mu);

/// Literal block-circulant definition with the T_i/T_j/T_k couplings.
/// O((n3 n)^3) dense; a correctness oracle for small sizes.
QTensor3 gqt_product_oracle(const QTensor3& A, const QTensor3& B, const PureUnitQuaternion& mu);

/// Mode-w gQt-product (w = 3 is gqt_product).
QTensor3 gqt_product_mode(const QTensor3& A, const QTensor3& B, const PureUnitQuaternion& mu,
                          int w);

/// Tensor conjugate transpose: fft, slice-wise matrix conjugate transpose, ifft.
QTensor3 conj_transpose(const QTensor3& A, const PureUnitQuaternion& mu);

/// First frontal slice identity, all other slices zero.
QTensor3 identity_tensor(int n, int l);

bool is_unitary(const QTensor3& U, const PureUnitQuaternion& mu, double tol);

struct GqtSvd {
    QTensor3 U;  // n1 x n1 x n3
    QTensor3 S;  // n1 x n2 x n3, f-diagonal
    QTensor3 V;  // n2 x n2 x n3
    /// Per-slice transform-domain singular values, sigma(i, l) for slice l.
    std::vector<std::vector<double>> sigma;  // [min(n1,n2)][n3]
};

GqtSvd gqt_svd(const QTensor3& A, const PureUnitQuaternion& mu);

/// Number of nonzero diagonal fibers S(i,i,:); tol < 0 picks
/// max(n1,n2) * eps * (largest per-slice singular value).
int gqt_rank(const QTensor3& A, const PureUnitQuaternion& mu, double tol = -1.0);

/// sigma_i(A) = (1/n3) * l1 norm of the transform-domain fiber S(i,i,:).
std::vector<double> singular_values(const QTensor3& A, const PureUnitQuaternion& mu);

/// (1/n3) * sum of slice nuclear norms of the QDFT tensor.
double nuclear_norm(const QTensor3& A, const PureUnitQuaternion& mu);

/// Best gQt-rank-k approximation from the gQt-SVD.
QTensor3 truncate(const QTensor3& A, const PureUnitQuaternion& mu, int k);

struct MultiGqtRank {
    int r1 = 0;
    int r2 = 0;
    int r3 = 0;
};

MultiGqtRank multi_gqt_rank(const QTensor3& A, const PureUnitQuaternion& mu, double tol = -1.0);

/// Per-slice singular values of the mode-w QDFT tensor; profile[l] is the
/// descending spectrum of slice l.
std::vector<std::vector<double>> singular_value_profile(const QTensor3& A,
                                                        const PureUnitQuaternion& mu, int w);

} // namespace gqt
