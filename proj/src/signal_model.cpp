#include "coopdstc/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace coopdstc {

EffectiveSignature make_signature(const SpreadingCode& code, cd fading, double amplitude)
{
    if (!(amplitude > 0.0)) {
        throw ParameterError("signature amplitude must be positive");
    }
    return {code.chips.cast<cd>() * (amplitude * fading), amplitude};
}

NoiseModel::NoiseModel(double variance) : variance_(variance)
{
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw ParameterError("noise variance must be finite and nonnegative");
    }
}

CVec NoiseModel::sample(Rng& rng, int length) const
{
    CVec out = CVec::Zero(length);
    if (variance_ == 0.0) {
        return out;
    }
    for (int i = 0; i < length; ++i) {
        out(i) = complex_gaussian(rng, variance_);
    }
    return out;
}

std::vector<SpreadingCode> generate_spreading_codes(int users, int chips, Rng& rng)
{
    if (users < 1) {
        throw ParameterError("spreading codes: user count must be >= 1, got " + std::to_string(users));
    }
    if (chips < 1) {
        throw ParameterError("spreading codes: processing gain must be >= 1, got " + std::to_string(chips));
    }
    const double chip = 1.0 / std::sqrt(static_cast<double>(chips));
    std::vector<SpreadingCode> codes(static_cast<std::size_t>(users));
    for (auto& code : codes) {
        code.chips.resize(chips);
        for (int n = 0; n < chips; ++n) {
            code.chips(n) = fair_coin(rng) ? chip : -chip;
        }
    }
    return codes;
}

namespace {

cd draw_coefficient(Rng& rng)
{
    const double amplitude = uniform_open_closed(rng);
    const double phase = 2.0 * std::numbers::pi * uniform01(rng);
    return std::polar(amplitude, phase);
}

} // namespace

ChannelRealization draw_channels(int users, int relays, Rng& rng)
{
    if (users < 1 || relays < 1) {
        throw ParameterError("draw_channels: users and relays must be >= 1");
    }
    ChannelRealization ch;
    ch.users = users;
    ch.relays = relays;
    ch.source_relay.resize(users, relays);
    ch.relay_dest.resize(relays, users);

    for (int k = 0; k < users; ++k) {
        for (int l = 0; l < relays; ++l) {
            ch.source_relay(k, l) = draw_coefficient(rng);
        }
        ch.source_relay.row(k) /= ch.source_relay.row(k).norm();
    }
    for (int k = 0; k < users; ++k) {
        for (int l = 0; l < relays; ++l) {
            ch.relay_dest(l, k) = draw_coefficient(rng);
        }
        ch.relay_dest.col(k) /= ch.relay_dest.col(k).norm();
    }
    return ch;
}

SignatureSet build_signatures(std::span<const SpreadingCode> codes, const ChannelRealization& channels,
                              LinkAmplitudes amplitudes)
{
    if (static_cast<int>(codes.size()) != channels.users) {
        throw InputError("build_signatures: code count does not match channel user count");
    }
    SignatureSet set;
    set.users = channels.users;
    set.relays = channels.relays;
    set.chips = codes.empty() ? 0 : codes.front().length();
    const auto total = static_cast<std::size_t>(set.users * set.relays);
    set.source_relay.resize(total);
    set.relay_dest.resize(total);
    for (int k = 0; k < set.users; ++k) {
        const auto& code = codes[static_cast<std::size_t>(k)];
        if (code.length() != set.chips) {
            throw InputError("build_signatures: spreading codes differ in length");
        }
        for (int l = 0; l < set.relays; ++l) {
            const auto idx = static_cast<std::size_t>(k * set.relays + l);
            set.source_relay[idx] = make_signature(code, channels.sr(k, l), amplitudes.source).vector;
            set.relay_dest[idx] = make_signature(code, channels.rd(l, k), amplitudes.relay).vector;
        }
    }
    return set;
}

std::array<CVec, 2> receive_source_relay(const SignatureSet& signatures, std::span<const Symbol> symbols, int relay,
                                         const NoiseModel& noise, Rng& rng)
{
    if (relay < 0 || relay >= signatures.relays) {
        throw InputError("receive_source_relay: relay index out of range");
    }
    if (static_cast<int>(symbols.size()) != 2 * signatures.users) {
        throw InputError("receive_source_relay: expected two symbols per user");
    }
    for (const Symbol s : symbols) {
        require_bpsk(s, "receive_source_relay");
    }

    std::array<CVec, 2> y;
    for (int slot = 0; slot < 2; ++slot) {
        y[slot] = CVec::Zero(signatures.chips);
        for (int k = 0; k < signatures.users; ++k) {
            y[slot] += signatures.sr(k, relay) * static_cast<double>(symbols[static_cast<std::size_t>(2 * k + slot)]);
        }
        y[slot] += noise.sample(rng, signatures.chips);
    }
    return y;
}

std::array<CVec, 2> receive_relay_dest(const SignatureSet& signatures, std::span<const Symbol> first_slot,
                                       std::span<const Symbol> second_slot, int relay_p, int relay_q,
                                       const NoiseModel& noise, Rng& rng)
{
    if (relay_p == relay_q) {
        throw InputError("receive_relay_dest: relay pair must contain two distinct relays");
    }
    if (relay_p < 0 || relay_q < 0 || relay_p >= signatures.relays || relay_q >= signatures.relays) {
        throw InputError("receive_relay_dest: relay index out of range");
    }
    if (static_cast<int>(first_slot.size()) != signatures.users ||
        static_cast<int>(second_slot.size()) != signatures.users) {
        throw InputError("receive_relay_dest: expected one symbol per user for each relay");
    }

    // BPSK symbols are real, so the conjugates in the second slot are no-ops on them.
    std::array<CVec, 2> y{CVec::Zero(signatures.chips), CVec::Zero(signatures.chips)};
    for (int k = 0; k < signatures.users; ++k) {
        const int bp = first_slot[static_cast<std::size_t>(k)];
        const int bq = second_slot[static_cast<std::size_t>(k)];
        require_bpsk(bp, "receive_relay_dest");
        require_bpsk(bq, "receive_relay_dest");
        const CVec& hp = signatures.rd(relay_p, k);
        const CVec& hq = signatures.rd(relay_q, k);
        y[0] += hp * static_cast<double>(bp) + hq * static_cast<double>(bq);
        y[1] += hq * static_cast<double>(bp) - hp * static_cast<double>(bq);
    }
    y[0] += noise.sample(rng, signatures.chips);
    y[1] += noise.sample(rng, signatures.chips);
    return y;
}

} // namespace coopdstc
