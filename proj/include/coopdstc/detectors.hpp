#ifndef COOPDSTC_DETECTORS_HPP
#define COOPDSTC_DETECTORS_HPP

#include <span>
#include <vector>

#include "coopdstc/common.hpp"

namespace coopdstc {

struct ReceiveFilter {
    CVec weights;
    DetectorKind kind = DetectorKind::Rake;
};

/// Matched filter: the weights are the target signature itself.
ReceiveFilter rake_filter(const CVec& target);

/// Linear MMSE filter w = (sum_k h_k h_k^H + noise_var I)^-1 h_target.
/// Throws ParameterError when noise_var <= 0.
ReceiveFilter mmse_filter(std::span<const CVec> signatures, std::size_t target, double noise_var);

/// MMSE filters for every signature in `signatures`, sharing one factorization.
std::vector<ReceiveFilter> mmse_filters(std::span<const CVec> signatures, double noise_var);

/// Filters of the requested kind for every signature.
std::vector<ReceiveFilter> make_filters(DetectorKind kind, std::span<const CVec> signatures, double noise_var);

/// Soft output w^H y.
cd detect(const ReceiveFilter& filter, const CVec& y);

/// BPSK decision on the real part; a zero real part decides +1.
inline Symbol slice(cd soft) { return soft.real() >= 0.0 ? Symbol{1} : Symbol{-1}; }

} // namespace coopdstc

#endif // COOPDSTC_DETECTORS_HPP
