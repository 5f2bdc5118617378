#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gqt/completion.hpp"
#include "gqt/tensor.hpp"

namespace gqt {

/// RGB video as three real channel tensors in [0,1], height x width x frames.
struct VideoTensor {
    int n1 = 0;  // height
    int n2 = 0;  // width
    int n3 = 0;  // frames
    std::vector<double> R, G, B;  // linear index ((k*n2 + j)*n1 + i)

    VideoTensor() = default;
    VideoTensor(int n1_, int n2_, int n3_)
        : n1(n1_), n2(n2_), n3(n3_), R(std::size_t(n1_) * n2_ * n3_),
          G(R.size()), B(R.size()) {}

    std::size_t idx(int i, int j, int k) const { return (std::size_t(k) * n2 + j) * n1 + i; }
};

/// C = R i + G j + B k; real part zero.
QTensor3 encode_quaternion(const VideoTensor& V);

/// Inverse of encode_quaternion. Rejects tensors with |Re| > 1e-9 and clamps
/// channels to [0,1]; the number of clamped samples is reported when asked.
VideoTensor decode_quaternion(const QTensor3& T, std::size_t* clamp_count = nullptr);

/// Exactly round(rho * n1*n2*n3) pixels observed, uniform without replacement,
/// a pure function of (shape, rho, seed) via the named counter generator.
ObservationMask sample_mask(int n1, int n2, int n3, double rho, std::uint64_t seed);

/// Directory of frame_0000.png, frame_0001.png, ... 8-bit RGB.
VideoTensor load_frames(const std::string& dir);
void save_frames(const VideoTensor& V, const std::string& dir);

QTensor3 read_qt3(const std::string& path);
void write_qt3(const QTensor3& T, const std::string& path);

ObservationMask read_mask(const std::string& path);
void write_mask(const ObservationMask& mask, const std::string& path);

} // namespace gqt
