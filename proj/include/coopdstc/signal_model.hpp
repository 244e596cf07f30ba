#ifndef COOPDSTC_SIGNAL_MODEL_HPP
#define COOPDSTC_SIGNAL_MODEL_HPP

#include <array>
#include <span>
#include <vector>

#include "coopdstc/common.hpp"
#include "coopdstc/random.hpp"

namespace coopdstc {

/// Real spreading sequence with chips of +-1/sqrt(N), so the code has unit norm.
struct SpreadingCode {
    RVec chips;

    int length() const { return static_cast<int>(chips.size()); }
};

/// Per-user flat-fading coefficients for both hops. Relay indices are 0-based.
///
/// For every user the coefficients of one hop are normalized across the
/// relays so that sum_l |h|^2 = 1.
struct ChannelRealization {
    int users = 0;
    int relays = 0;
    CMat source_relay; ///< users x relays
    CMat relay_dest;   ///< relays x users

    cd sr(int user, int relay) const { return source_relay(user, relay); }
    cd rd(int relay, int user) const { return relay_dest(relay, user); }
};

/// amplitude * code * fading, the chip-rate vector one user presents on one link.
struct EffectiveSignature {
    CVec vector;
    double amplitude = 1.0;
};

EffectiveSignature make_signature(const SpreadingCode& code, cd fading, double amplitude);

/// Zero-mean circularly-symmetric complex Gaussian noise, total variance per
/// chip equal to `variance`. A zero variance gives a noiseless channel.
class NoiseModel {
public:
    explicit NoiseModel(double variance);

    double variance() const { return variance_; }
    CVec sample(Rng& rng, int length) const;

private:
    double variance_;
};

/// All effective signatures of one trial, flattened user-major.
struct SignatureSet {
    int users = 0;
    int relays = 0;
    int chips = 0;
    std::vector<CVec> source_relay; ///< index user * relays + relay
    std::vector<CVec> relay_dest;   ///< index user * relays + relay

    const CVec& sr(int user, int relay) const { return source_relay[static_cast<std::size_t>(user * relays + relay)]; }
    const CVec& rd(int relay, int user) const { return relay_dest[static_cast<std::size_t>(user * relays + relay)]; }
};

/// Amplitudes used when assembling a SignatureSet. Each DSTC relay transmits
/// at 1/sqrt(2) so that the pair's total power per user equals the source's.
struct LinkAmplitudes {
    double source = 1.0;
    double relay = 0.70710678118654752440;
};

std::vector<SpreadingCode> generate_spreading_codes(int users, int chips, Rng& rng);

ChannelRealization draw_channels(int users, int relays, Rng& rng);

SignatureSet build_signatures(std::span<const SpreadingCode> codes, const ChannelRealization& channels,
                              LinkAmplitudes amplitudes = {});

/// Two slots received by one relay: y(slot) = sum_k h_{s_k r_l} b_k(slot) + n(slot).
/// `symbols` holds user-major pairs: symbols[2k] for slot 2i-1, symbols[2k+1] for slot 2i.
std::array<CVec, 2> receive_source_relay(const SignatureSet& signatures, std::span<const Symbol> symbols, int relay,
                                         const NoiseModel& noise, Rng& rng);

/// Two slots at the destination while relays p and q emit one Alamouti block.
/// `first_slot[k]` is relay p's decoded b_k(2i-1), `second_slot[k]` relay q's b_k(2i).
std::array<CVec, 2> receive_relay_dest(const SignatureSet& signatures, std::span<const Symbol> first_slot,
                                       std::span<const Symbol> second_slot, int relay_p, int relay_q,
                                       const NoiseModel& noise, Rng& rng);

} // namespace coopdstc

#endif // COOPDSTC_SIGNAL_MODEL_HPP
