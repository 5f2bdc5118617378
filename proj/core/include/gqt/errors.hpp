#pragma once

#include <stdexcept>
#include <string>

namespace gqt {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroReference : std::domain_error {
    using std::domain_error::domain_error;
};

struct FrameTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ImpureTensor : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Malformed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InconsistentFrameSizes : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gqt
