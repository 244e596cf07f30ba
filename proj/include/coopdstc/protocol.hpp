#ifndef COOPDSTC_PROTOCOL_HPP
#define COOPDSTC_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "coopdstc/buffers.hpp"
#include "coopdstc/common.hpp"
#include "coopdstc/dstc.hpp"
#include "coopdstc/random.hpp"
#include "coopdstc/signal_model.hpp"
#include "coopdstc/sinr_selection.hpp"

namespace coopdstc {

enum class SelectionKind { Exhaustive, Greedy, Random, FixedPairs };
enum class Scheme { Buffered, NonBuffered, NoSelection, SingleUserBound };

const char* to_string(SelectionKind kind);
const char* to_string(Scheme scheme);

/// Invalid configuration; key() names the offending setting.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key + ": " + message), key_(std::move(key))
    {
    }
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Experiment parameters. relays == 0 selects the direct-link calibration
/// mode: every user reaches the destination over an unfaded AWGN link.
struct SimConfig {
    int users = 3;
    int relays = 6;
    int chips = 16;
    int packet_symbols = 1000;
    int packets = 100;
    std::vector<double> snr_db{0, 2, 4, 6, 8, 10, 12, 14, 16};
    DetectorKind relay_detector = DetectorKind::Mmse;
    DetectorKind dest_detector = DetectorKind::Rake;
    SelectionKind policy = SelectionKind::Exhaustive;
    Scheme scheme = Scheme::Buffered;
    DynamicBufferPolicy buffer{};
    std::uint64_t seed = 1;

    void validate() const;

    /// Users actually simulated (the single-user bound always runs one).
    int simulated_users() const { return scheme == Scheme::SingleUserBound ? 1 : users; }
    /// Selection policy actually used by the scheme.
    SelectionKind effective_policy() const;
    bool buffered() const { return scheme == Scheme::Buffered || scheme == Scheme::SingleUserBound; }
    int blocks_per_packet() const { return packet_symbols / 2; }
};

/// Noise variance for an SNR in dB with unit transmit power: 10^(-snr/10).
double noise_variance_from_snr_db(double snr_db);

enum class EpochMode { Reception, Transmission, Idle };

const char* to_string(EpochMode mode);

struct EpochMetrics {
    std::uint64_t epoch = 0;
    EpochMode mode = EpochMode::Idle;
    std::optional<LinkSinrEntry> selected;
    std::vector<int> bit_errors;          ///< per user; transmission epochs only
    std::optional<std::uint64_t> delay;   ///< delivery epoch minus reception epoch
    std::vector<std::size_t> occupancy;   ///< blocks held per relay after the epoch
    int capacity = 0;
    OpCounter ops;

    int total_errors() const;
};

/// One packet: a channel realization, its source bits, relay buffers, and
/// the epoch counter. Epochs are strictly sequential.
class TrialState {
public:
    TrialState(const SimConfig& config, double noise_var, int capacity, std::uint64_t packet);

    /// Buffer-aided step: rank both hops, take the best feasible entry, execute it.
    EpochMetrics run_epoch();
    /// Non-buffered step: reception to a pair chosen on relay-destination SINR
    /// alone, then forwarding of that block in the next epoch.
    EpochMetrics run_non_buffered_epoch();

    bool finished() const;
    std::uint64_t epoch() const { return epoch_; }
    std::uint64_t cutoff() const { return cutoff_; }
    int capacity() const { return capacity_; }

    std::uint64_t blocks_generated() const { return next_block_; }
    std::uint64_t blocks_delivered() const { return delivered_; }
    std::uint64_t blocks_in_flight() const;

    const std::vector<RelayBuffer>& buffers() const { return buffers_; }
    const SignatureSet& signatures() const { return signatures_; }
    const SelectionModel& selection_model() const { return model_; }
    const OpCounter& setup_ops() const { return setup_ops_; }

    bool feasible(Hop hop, RelayPair pair) const;

private:
    std::optional<LinkSinrEntry> choose_buffered(OpCounter& ops);
    std::optional<LinkSinrEntry> choose_forwarding_pair(OpCounter& ops);
    std::vector<Symbol> decode_at_relay(int relay, std::span<const Symbol> bits);
    void deliver(EpochMetrics& metrics, RelayPair pair, const BufferBlock& at_p, const BufferBlock& at_q);
    const AlamoutiCombiner& combiner(RelayPair pair);
    std::size_t take_source_block();
    EpochMetrics start_epoch();

    SimConfig config_;
    int users_;
    int relays_;
    double noise_var_;
    NoiseModel noise_;
    Rng bit_rng_;
    Rng noise_rng_;
    Rng policy_rng_;

    SignatureSet signatures_;
    HopModel relay_filters_;
    SelectionModel model_;
    LinkSinrTable static_table_;
    OpCounter setup_ops_;
    std::vector<std::optional<AlamoutiCombiner>> combiners_;

    int capacity_;
    std::vector<RelayBuffer> buffers_;
    std::vector<std::vector<Symbol>> source_;
    std::vector<std::int64_t> block_of_epoch_;
    std::size_t next_block_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t epoch_ = 0;
    std::uint64_t cutoff_ = 0;

    struct Pending {
        LinkSinrEntry entry;
        BufferBlock at_p;
        BufferBlock at_q;
    };
    std::optional<Pending> pending_;
};

struct TrialResult {
    std::vector<EpochMetrics> epochs; ///< empty unless requested
    std::uint64_t blocks_generated = 0;
    std::uint64_t blocks_delivered = 0;
    std::uint64_t residual_blocks = 0;
    std::uint64_t bits_judged = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t delay_sum = 0;
    std::uint64_t delayed_blocks = 0; ///< delivered blocks that went through relays
    std::uint64_t reception_epochs = 0;
    std::uint64_t transmission_epochs = 0;
    std::uint64_t idle_epochs = 0;
    int capacity = 0;
    OpCounter ops;
};

/// Runs one packet to completion (or the 4*(P/2)+4J epoch cutoff).
/// `base_capacity` is the buffer size before any per-packet power rule.
TrialResult run_trial(const SimConfig& config, double noise_var, int base_capacity, std::uint64_t packet,
                      bool keep_epochs = false);

/// Mean delay over delivered blocks; std::nullopt when nothing was delivered.
std::optional<double> measure_delay(std::span<const EpochMetrics> epochs);

} // namespace coopdstc

#endif // COOPDSTC_PROTOCOL_HPP
