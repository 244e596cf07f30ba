#include "coopdstc/dstc.hpp"

#include <string>

namespace coopdstc {

AlamoutiBlock alamouti_encode(Symbol b1, Symbol b2)
{
    require_bpsk(b1, "alamouti_encode");
    require_bpsk(b2, "alamouti_encode");
    const cd s1(b1, 0.0);
    const cd s2(b2, 0.0);
    AlamoutiBlock block;
    block.matrix << s1, -std::conj(s2),
                    s2, std::conj(s1);
    return block;
}

EffectiveAlamoutiMatrix build_effective_matrix(const CVec& h_m, const CVec& h_n)
{
    if (h_m.size() != h_n.size()) {
        throw InputError("build_effective_matrix: signatures have lengths " + std::to_string(h_m.size()) + " and " +
                         std::to_string(h_n.size()));
    }
    const auto n = h_m.size();
    EffectiveAlamoutiMatrix out;
    out.matrix.resize(2 * n, 2);
    out.matrix.col(0).head(n) = h_m;
    out.matrix.col(1).head(n) = h_n;
    out.matrix.col(0).tail(n) = h_n.conjugate();
    out.matrix.col(1).tail(n) = -h_m.conjugate();
    return out;
}

CVec stack_slots(const CVec& first, const CVec& second)
{
    if (first.size() != second.size()) {
        throw InputError("stack_slots: slot vectors differ in length");
    }
    CVec out(first.size() + second.size());
    out << first, second.conjugate();
    return out;
}

AlamoutiCombiner::AlamoutiCombiner(std::span<const EffectiveAlamoutiMatrix> users, DetectorKind kind,
                                   double noise_var)
{
    if (users.empty()) {
        throw InputError("AlamoutiCombiner: no users");
    }
    const auto rows = users.front().matrix.rows();
    for (const auto& h : users) {
        if (h.matrix.rows() != rows || h.matrix.cols() != 2) {
            throw InputError("AlamoutiCombiner: effective matrices have inconsistent shapes");
        }
    }

    filters_.reserve(users.size());
    if (kind == DetectorKind::Rake) {
        for (const auto& h : users) {
            filters_.push_back(h.matrix);
        }
        return;
    }

    if (!(noise_var > 0.0)) {
        throw ParameterError("AlamoutiCombiner: MMSE requires noise variance > 0");
    }
    CMat covariance = CMat::Identity(rows, rows) * noise_var;
    for (const auto& h : users) {
        covariance.selfadjointView<Eigen::Lower>().rankUpdate(h.matrix, 1.0);
    }
    const auto ldlt = covariance.selfadjointView<Eigen::Lower>().ldlt();
    for (const auto& h : users) {
        filters_.push_back(ldlt.solve(h.matrix));
    }
}

std::array<cd, 2> AlamoutiCombiner::combine(int user, const CVec& stacked) const
{
    if (user < 0 || user >= users()) {
        throw InputError("AlamoutiCombiner: user index out of range");
    }
    const CMat& w = filters_[static_cast<std::size_t>(user)];
    if (stacked.size() != w.rows()) {
        throw InputError("AlamoutiCombiner: stacked vector has " + std::to_string(stacked.size()) +
                         " entries, expected " + std::to_string(w.rows()));
    }
    const Eigen::Vector2cd soft = w.adjoint() * stacked;
    return {soft(0), soft(1)};
}

std::array<CVec, 2> transmit_blocks(const SignatureSet& signatures, std::span<const AlamoutiBlock> blocks,
                                    int relay_p, int relay_q, const NoiseModel& noise, Rng& rng)
{
    if (relay_p == relay_q || relay_p < 0 || relay_q < 0 || relay_p >= signatures.relays ||
        relay_q >= signatures.relays) {
        throw InputError("transmit_blocks: invalid relay pair");
    }
    if (static_cast<int>(blocks.size()) != signatures.users) {
        throw InputError("transmit_blocks: expected one Alamouti block per user");
    }
    std::array<CVec, 2> y{CVec::Zero(signatures.chips), CVec::Zero(signatures.chips)};
    for (int k = 0; k < signatures.users; ++k) {
        const auto& b = blocks[static_cast<std::size_t>(k)].matrix;
        for (int slot = 0; slot < 2; ++slot) {
            y[slot] += signatures.rd(relay_p, k) * b(0, slot) + signatures.rd(relay_q, k) * b(1, slot);
        }
    }
    y[0] += noise.sample(rng, signatures.chips);
    y[1] += noise.sample(rng, signatures.chips);
    return y;
}

std::array<cd, 2> alamouti_detect(const CVec& stacked, std::span<const EffectiveAlamoutiMatrix> all_users,
                                  int user, DetectorKind kind, double noise_var)
{
    return AlamoutiCombiner(all_users, kind, noise_var).combine(user, stacked);
}

} // namespace coopdstc
