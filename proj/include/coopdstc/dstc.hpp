#ifndef COOPDSTC_DSTC_HPP
#define COOPDSTC_DSTC_HPP

#include <array>
#include <span>
#include <vector>

#include "coopdstc/common.hpp"
#include "coopdstc/random.hpp"
#include "coopdstc/signal_model.hpp"

namespace coopdstc {

/// 2x2 Alamouti block of one user. Column 1 is what the relays emit in slot
/// 2i-1 (relay p, relay q), column 2 what they emit in slot 2i.
struct AlamoutiBlock {
    Eigen::Matrix2cd matrix;
};

/// [[b1, -conj(b2)], [b2, conj(b1)]] with b1 from relay p and b2 from relay q.
AlamoutiBlock alamouti_encode(Symbol b1, Symbol b2);

/// 2N x 2 matrix [[h_m, h_n], [conj(h_n), -conj(h_m)]]. Its columns are orthogonal
/// and share the squared norm |h_m|^2 + |h_n|^2.
struct EffectiveAlamoutiMatrix {
    CMat matrix;

    int chips() const { return static_cast<int>(matrix.rows() / 2); }
};

EffectiveAlamoutiMatrix build_effective_matrix(const CVec& h_m, const CVec& h_n);

/// Stacks two received slots as [y(2i-1); conj(y(2i))] so that the block
/// obeys y = H b + n with H from build_effective_matrix.
CVec stack_slots(const CVec& first, const CVec& second);

/// Destination combiner for one relay pair, holding a 2N x 2 filter per user.
///
/// Rake: the filter is H_k itself (matched-filter Alamouti combining).
/// Mmse: W_k = (sum_j H_j H_j^H + noise_var I)^-1 H_k over all users' columns.
class AlamoutiCombiner {
public:
    AlamoutiCombiner(std::span<const EffectiveAlamoutiMatrix> users, DetectorKind kind, double noise_var);

    std::array<cd, 2> combine(int user, const CVec& stacked) const;
    int users() const { return static_cast<int>(filters_.size()); }

private:
    std::vector<CMat> filters_;
};

/// Destination samples of two slots while relays p and q emit one Alamouti
/// block per user: row 0 of each block is relay p's output, row 1 relay q's,
/// column s is slot s.
std::array<CVec, 2> transmit_blocks(const SignatureSet& signatures, std::span<const AlamoutiBlock> blocks,
                                    int relay_p, int relay_q, const NoiseModel& noise, Rng& rng);

/// Soft estimates of (b_p(2i-1), b_q(2i)) for `user`.
std::array<cd, 2> alamouti_detect(const CVec& stacked, std::span<const EffectiveAlamoutiMatrix> all_users,
                                  int user, DetectorKind kind, double noise_var);

} // namespace coopdstc

#endif // COOPDSTC_DSTC_HPP
