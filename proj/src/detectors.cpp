#include "coopdstc/detectors.hpp"

#include <string>

namespace coopdstc {

namespace {

void check_common_length(std::span<const CVec> signatures)
{
    if (signatures.empty()) {
        throw InputError("mmse filter: no signatures supplied");
    }
    const auto n = signatures.front().size();
    for (const auto& h : signatures) {
        if (h.size() != n) {
            throw InputError("mmse filter: signatures differ in length");
        }
    }
}

Eigen::LDLT<CMat> factor_covariance(std::span<const CVec> signatures, double noise_var)
{
    if (!(noise_var > 0.0)) {
        throw ParameterError("mmse filter: noise variance must be > 0, got " + std::to_string(noise_var));
    }
    check_common_length(signatures);
    const auto n = signatures.front().size();
    CMat covariance = CMat::Identity(n, n) * noise_var;
    for (const auto& h : signatures) {
        covariance.selfadjointView<Eigen::Lower>().rankUpdate(h, 1.0);
    }
    return covariance.selfadjointView<Eigen::Lower>().ldlt();
}

} // namespace

ReceiveFilter rake_filter(const CVec& target)
{
    return {target, DetectorKind::Rake};
}

ReceiveFilter mmse_filter(std::span<const CVec> signatures, std::size_t target, double noise_var)
{
    if (target >= signatures.size()) {
        throw InputError("mmse filter: target index out of range");
    }
    const auto ldlt = factor_covariance(signatures, noise_var);
    return {ldlt.solve(signatures[target]), DetectorKind::Mmse};
}

std::vector<ReceiveFilter> mmse_filters(std::span<const CVec> signatures, double noise_var)
{
    const auto ldlt = factor_covariance(signatures, noise_var);
    std::vector<ReceiveFilter> out;
    out.reserve(signatures.size());
    for (const auto& h : signatures) {
        out.push_back({ldlt.solve(h), DetectorKind::Mmse});
    }
    return out;
}

std::vector<ReceiveFilter> make_filters(DetectorKind kind, std::span<const CVec> signatures, double noise_var)
{
    if (kind == DetectorKind::Mmse) {
        return mmse_filters(signatures, noise_var);
    }
    std::vector<ReceiveFilter> out;
    out.reserve(signatures.size());
    for (const auto& h : signatures) {
        out.push_back(rake_filter(h));
    }
    return out;
}

cd detect(const ReceiveFilter& filter, const CVec& y)
{
    if (filter.weights.size() != y.size()) {
        throw InputError("detect: filter has " + std::to_string(filter.weights.size()) +
                         " taps but the received vector has " + std::to_string(y.size()));
    }
    return filter.weights.dot(y); // Eigen's dot conjugates the left operand
}

} // namespace coopdstc
