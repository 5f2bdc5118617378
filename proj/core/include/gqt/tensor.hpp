#pragma once

#include <vector>

#include "gqt/qmatrix.hpp"
#include "gqt/quaternion.hpp"

namespace gqt {

/// Dense third-order quaternion tensor, linear index ((k*n2 + j)*n1 + i).
class QTensor3 {
public:
    QTensor3() = default;
    QTensor3(int n1, int n2, int n3)
        : n1_(n1), n2_(n2), n3_(n3), data_(std::size_t(n1) * n2 * n3) {}

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::size_t size() const { return data_.size(); }

    Quaternion& operator()(int i, int j, int k) {
        return data_[(std::size_t(k) * n2_ + j) * n1_ + i];
    }
    const Quaternion& operator()(int i, int j, int k) const {
        return data_[(std::size_t(k) * n2_ + j) * n1_ + i];
    }

    std::vector<Quaternion>& data() { return data_; }
    const std::vector<Quaternion>& data() const { return data_; }

    bool same_shape(const QTensor3& o) const {
        return n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
    }

    QTensor3 operator+(const QTensor3& o) const;
    QTensor3 operator-(const QTensor3& o) const;
    QTensor3 operator*(double s) const;
    QTensor3& operator+=(const QTensor3& o);

    double frobenius_norm_sq() const {
        double s = 0;
        for (const auto& q : data_) s += q.norm_sq();
        return s;
    }
    double frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

    /// A(:,:,k)
    QMatrix frontal_slice(int k) const;
    void set_frontal_slice(int k, const QMatrix& m);
    /// A(i,:,:) as an n2 x n3 matrix
    QMatrix horizontal_slice(int i) const;
    void set_horizontal_slice(int i, const QMatrix& m);
    /// A(:,j,:) as an n1 x n3 matrix
    QMatrix lateral_slice(int j) const;
    void set_lateral_slice(int j, const QMatrix& m);

private:
    int n1_ = 0;
    int n2_ = 0;
    int n3_ = 0;
    std::vector<Quaternion> data_;
};

} // namespace gqt
