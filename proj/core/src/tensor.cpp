#include "gqt/tensor.hpp"

#include "gqt/errors.hpp"

namespace gqt {

QTensor3 QTensor3::operator+(const QTensor3& o) const {
    if (!same_shape(o)) throw DimensionMismatch("QTensor3::operator+");
    QTensor3 r = *this;
    for (std::size_t t = 0; t < data_.size(); ++t) r.data_[t] += o.data_[t];
    return r;
}

QTensor3 QTensor3::operator-(const QTensor3& o) const {
    if (!same_shape(o)) throw DimensionMismatch("QTensor3::operator-");
    QTensor3 r = *this;
    for (std::size_t t = 0; t < data_.size(); ++t) r.data_[t] -= o.data_[t];
    return r;
}

QTensor3 QTensor3::operator*(double s) const {
    QTensor3 r = *this;
    for (auto& q : r.data_) q *= s;
    return r;
}

QTensor3& QTensor3::operator+=(const QTensor3& o) {
    if (!same_shape(o)) throw DimensionMismatch("QTensor3::operator+=");
    for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += o.data_[t];
    return *this;
}

QMatrix QTensor3::frontal_slice(int k) const {
    QMatrix m(n1_, n2_);
    for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i) m(i, j) = (*this)(i, j, k);
    return m;
}

void QTensor3::set_frontal_slice(int k, const QMatrix& m) {
    if (m.rows() != n1_ || m.cols() != n2_) throw DimensionMismatch("set_frontal_slice");
    for (int j = 0; j < n2_; ++j)
        for (int i = 0; i < n1_; ++i) (*this)(i, j, k) = m(i, j);
}

QMatrix QTensor3::horizontal_slice(int i) const {
    QMatrix m(n2_, n3_);
    for (int k = 0; k < n3_; ++k)
        for (int j = 0; j < n2_; ++j) m(j, k) = (*this)(i, j, k);
    return m;
}

void QTensor3::set_horizontal_slice(int i, const QMatrix& m) {
    if (m.rows() != n2_ || m.cols() != n3_) throw DimensionMismatch("set_horizontal_slice");
    for (int k = 0; k < n3_; ++k)
        for (int j = 0; j < n2_; ++j) (*this)(i, j, k) = m(j, k);
}

QMatrix QTensor3::lateral_slice(int j) const {
    QMatrix m(n1_, n3_);
    for (int k = 0; k < n3_; ++k)
        for (int i = 0; i < n1_; ++i) m(i, k) = (*this)(i, j, k);
    return m;
}

void QTensor3::set_lateral_slice(int j, const QMatrix& m) {
    if (m.rows() != n1_ || m.cols() != n3_) throw DimensionMismatch("set_lateral_slice");
    for (int k = 0; k < n3_; ++k)
        for (int i = 0; i < n1_; ++i) (*this)(i, j, k) = m(i, k);
}

} // namespace gqt
