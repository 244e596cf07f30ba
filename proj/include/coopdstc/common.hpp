#ifndef COOPDSTC_COMMON_HPP
#define COOPDSTC_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace coopdstc {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// A BPSK symbol, always +1 or -1.
using Symbol = std::int8_t;

enum class DetectorKind { Rake, Mmse };

/// Bad numeric parameter (non-positive sizes, non-positive noise for MMSE, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input data (non-BPSK symbol, dimension mismatch, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Protocol state that should be unreachable.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline bool is_bpsk(int value) { return value == 1 || value == -1; }

inline void require_bpsk(int value, const char* what)
{
    if (!is_bpsk(value)) {
        throw InputError(std::string(what) + ": symbol " + std::to_string(value) + " is not BPSK (+1/-1)");
    }
}

const char* to_string(DetectorKind kind);

} // namespace coopdstc

#endif // COOPDSTC_COMMON_HPP
