#include "coopdstc/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "coopdstc/detectors.hpp"

namespace coopdstc {

const char* to_string(SelectionKind kind)
{
    switch (kind) {
    case SelectionKind::Exhaustive: return "exhaustive";
    case SelectionKind::Greedy: return "greedy";
    case SelectionKind::Random: return "random";
    case SelectionKind::FixedPairs: return "fixed-pairs";
    }
    return "?";
}

const char* to_string(Scheme scheme)
{
    switch (scheme) {
    case Scheme::Buffered: return "buffered";
    case Scheme::NonBuffered: return "non-buffered";
    case Scheme::NoSelection: return "no-selection";
    case Scheme::SingleUserBound: return "single-user-bound";
    }
    return "?";
}

const char* to_string(EpochMode mode)
{
    switch (mode) {
    case EpochMode::Reception: return "reception";
    case EpochMode::Transmission: return "transmission";
    case EpochMode::Idle: return "idle";
    }
    return "?";
}

SelectionKind SimConfig::effective_policy() const
{
    switch (scheme) {
    case Scheme::NoSelection: return SelectionKind::FixedPairs;
    case Scheme::SingleUserBound: return SelectionKind::Exhaustive;
    default: return policy;
    }
}

void SimConfig::validate() const
{
    if (users < 1) {
        throw ConfigError("users", "must be >= 1");
    }
    if (relays < 0 || relays == 1) {
        throw ConfigError("relays", "must be 0 (direct-link calibration) or >= 2");
    }
    if (chips < 1) {
        throw ConfigError("chips", "must be >= 1");
    }
    if (packet_symbols < 2 || packet_symbols % 2 != 0) {
        throw ConfigError("symbols", "must be a positive even number (two symbols per epoch)");
    }
    if (packets < 1) {
        throw ConfigError("packets", "must be >= 1");
    }
    if (snr_db.empty()) {
        throw ConfigError("snr", "grid must not be empty");
    }
    for (const double s : snr_db) {
        if (!std::isfinite(s)) {
            throw ConfigError("snr", "grid values must be finite");
        }
    }
    if (effective_policy() == SelectionKind::FixedPairs && relays > 0 && relays % 2 != 0) {
        throw ConfigError("relays", "fixed relay pairs need an even relay count");
    }
    try {
        buffer.validate();
    } catch (const ParameterError& e) {
        throw ConfigError("buffer", e.what());
    }
    if (buffer.capacity < buffer.min_capacity || buffer.capacity > buffer.max_capacity) {
        throw ConfigError("J", "must lie within [j_min, j_max]");
    }
}

double noise_variance_from_snr_db(double snr_db)
{
    return std::pow(10.0, -snr_db / 10.0);
}

int EpochMetrics::total_errors() const
{
    int total = 0;
    for (const int e : bit_errors) {
        total += e;
    }
    return total;
}

TrialState::TrialState(const SimConfig& config, double noise_var, int capacity, std::uint64_t packet)
    : config_(config),
      users_(config.simulated_users()),
      relays_(config.relays),
      noise_var_(noise_var),
      noise_(noise_var),
      bit_rng_(derive_stream(config.seed, packet, 1)),
      noise_rng_(derive_stream(config.seed, packet, 2)),
      policy_rng_(derive_stream(config.seed, packet, 3)),
      capacity_(capacity)
{
    if (relays_ < 2) {
        throw ParameterError("TrialState: relayed schemes need at least two relays");
    }
    Rng setup = derive_stream(config.seed, packet, 0);
    const auto codes = generate_spreading_codes(users_, config.chips, setup);
    const auto channels = draw_channels(users_, relays_, setup);
    signatures_ = build_signatures(codes, channels);

    relay_filters_ = make_hop_model(signatures_, Hop::SourceRelay, config.relay_detector, noise_var);
    model_.relays = relays_;
    model_.noise_var = noise_var;
    model_.source_relay = compute_link_terms(relay_filters_, setup_ops_);
    model_.relay_dest = compute_link_terms(
        make_hop_model(signatures_, Hop::RelayDest, config.dest_detector, noise_var), setup_ops_);
    OpCounter listing; // the static table only enumerates entries for the random policy
    static_table_ = build_table(model_, listing);
    combiners_.resize(static_cast<std::size_t>(relays_ * relays_));

    if (config.buffer.mode == BufferMode::PowerDriven) {
        DynamicBufferPolicy policy = config.buffer;
        policy.capacity = capacity;
        capacity_ = resize_power(policy, min_link_power(signatures_));
    }
    if (capacity_ < 1) {
        throw ParameterError("TrialState: buffer capacity must be >= 1");
    }
    buffers_.assign(static_cast<std::size_t>(relays_), RelayBuffer(static_cast<std::size_t>(capacity_)));

    const auto blocks = static_cast<std::uint64_t>(config.blocks_per_packet());
    cutoff_ = 4 * blocks + 4 * static_cast<std::uint64_t>(capacity_);
    source_.reserve(blocks);
    block_of_epoch_.assign(cutoff_, -1);
}

std::uint64_t TrialState::blocks_in_flight() const
{
    // Every stored tag lives in exactly two buffers.
    std::uint64_t stored = 0;
    for (const auto& b : buffers_) {
        stored += b.size();
    }
    return stored / 2 + (pending_ ? 1 : 0);
}

bool TrialState::finished() const
{
    return next_block_ == static_cast<std::size_t>(config_.blocks_per_packet()) && blocks_in_flight() == 0;
}

bool TrialState::feasible(Hop hop, RelayPair pair) const
{
    const auto& p = buffers_[static_cast<std::size_t>(pair.first)];
    const auto& q = buffers_[static_cast<std::size_t>(pair.second)];
    if (hop == Hop::SourceRelay) {
        return next_block_ < static_cast<std::size_t>(config_.blocks_per_packet()) && !p.is_full() && !q.is_full();
    }
    return oldest_common_tag(p, q).has_value();
}

std::optional<LinkSinrEntry> TrialState::choose_buffered(OpCounter& ops)
{
    const Feasibility feasible_now = [this](Hop hop, RelayPair pair) { return feasible(hop, pair); };
    switch (config_.effective_policy()) {
    case SelectionKind::Exhaustive:
        return select_best(build_table(model_, ops), feasible_now);
    case SelectionKind::Greedy:
        return select_greedy(model_, feasible_now, ops);
    case SelectionKind::Random:
        return select_random(static_table_, feasible_now, policy_rng_);
    case SelectionKind::FixedPairs:
        return select_best(build_table(model_, ops), [this](Hop hop, RelayPair pair) {
            return pair.first % 2 == 0 && pair.second == pair.first + 1 && feasible(hop, pair);
        });
    }
    return std::nullopt;
}

std::optional<LinkSinrEntry> TrialState::choose_forwarding_pair(OpCounter& ops)
{
    const Feasibility relay_dest_only = [](Hop hop, RelayPair) { return hop == Hop::RelayDest; };
    switch (config_.effective_policy()) {
    case SelectionKind::Exhaustive: {
        std::optional<LinkSinrEntry> best;
        for (int m = 0; m < relays_; ++m) {
            for (int n = m + 1; n < relays_; ++n) {
                const LinkSinrEntry e{Hop::RelayDest, {m, n}, pair_sinr(model_.relay_dest, {m, n}, noise_var_, ops)};
                if (!best || ranks_before(e, *best)) {
                    best = e;
                }
            }
        }
        return best;
    }
    case SelectionKind::Greedy:
        return select_greedy(model_, relay_dest_only, ops);
    case SelectionKind::Random:
        return select_random(static_table_, relay_dest_only, policy_rng_);
    case SelectionKind::FixedPairs: {
        const int group = static_cast<int>(next_block_ % static_cast<std::size_t>(relays_ / 2));
        const RelayPair pair{2 * group, 2 * group + 1};
        OpCounter unused;
        return LinkSinrEntry{Hop::RelayDest, pair, pair_sinr(model_.relay_dest, pair, noise_var_, unused)};
    }
    }
    return std::nullopt;
}

std::size_t TrialState::take_source_block()
{
    std::vector<Symbol> bits(static_cast<std::size_t>(2 * users_));
    for (auto& b : bits) {
        b = random_bpsk(bit_rng_);
    }
    source_.push_back(std::move(bits));
    block_of_epoch_[epoch_] = static_cast<std::int64_t>(next_block_);
    return next_block_++;
}

std::vector<Symbol> TrialState::decode_at_relay(int relay, std::span<const Symbol> bits)
{
    const auto y = receive_source_relay(signatures_, bits, relay, noise_, noise_rng_);
    std::vector<Symbol> decided(static_cast<std::size_t>(2 * users_));
    for (int k = 0; k < users_; ++k) {
        const ReceiveFilter filter{relay_filters_.filter(k, relay), config_.relay_detector};
        for (int slot = 0; slot < 2; ++slot) {
            decided[static_cast<std::size_t>(2 * k + slot)] = slice(detect(filter, y[slot]));
        }
    }
    return decided;
}

const AlamoutiCombiner& TrialState::combiner(RelayPair pair)
{
    auto& slot = combiners_[static_cast<std::size_t>(pair.first * relays_ + pair.second)];
    if (!slot) {
        std::vector<EffectiveAlamoutiMatrix> matrices;
        matrices.reserve(static_cast<std::size_t>(users_));
        for (int k = 0; k < users_; ++k) {
            matrices.push_back(build_effective_matrix(signatures_.rd(pair.first, k), signatures_.rd(pair.second, k)));
        }
        slot.emplace(matrices, config_.dest_detector, noise_var_);
    }
    return *slot;
}

void TrialState::deliver(EpochMetrics& metrics, RelayPair pair, const BufferBlock& at_p, const BufferBlock& at_q)
{
    if (at_p.epoch_tag != at_q.epoch_tag || at_p.epoch_tag >= epoch_) {
        throw InvariantViolation("deliver: blocks do not belong to one earlier reception epoch");
    }
    const std::int64_t block = block_of_epoch_[at_p.epoch_tag];
    if (block < 0) {
        throw InvariantViolation("deliver: epoch tag has no source block");
    }

    std::vector<AlamoutiBlock> encoded;
    encoded.reserve(static_cast<std::size_t>(users_));
    for (int k = 0; k < users_; ++k) {
        encoded.push_back(alamouti_encode(at_p.at(k, 0), at_q.at(k, 1)));
    }
    const auto y = transmit_blocks(signatures_, encoded, pair.first, pair.second, noise_, noise_rng_);
    const CVec stacked = stack_slots(y[0], y[1]);
    const auto& comb = combiner(pair);
    const auto& sent = source_[static_cast<std::size_t>(block)];

    metrics.bit_errors.assign(static_cast<std::size_t>(users_), 0);
    for (int k = 0; k < users_; ++k) {
        const auto soft = comb.combine(k, stacked);
        for (int slot = 0; slot < 2; ++slot) {
            if (slice(soft[static_cast<std::size_t>(slot)]) != sent[static_cast<std::size_t>(2 * k + slot)]) {
                ++metrics.bit_errors[static_cast<std::size_t>(k)];
            }
        }
    }
    metrics.mode = EpochMode::Transmission;
    metrics.delay = epoch_ - at_p.epoch_tag;
    ++delivered_;
}

EpochMetrics TrialState::start_epoch()
{
    if (epoch_ >= cutoff_) {
        throw InvariantViolation("epoch past the trial cutoff");
    }
    EpochMetrics m;
    m.epoch = epoch_;
    m.capacity = capacity_;
    return m;
}

namespace {

void record_occupancy(EpochMetrics& m, const std::vector<RelayBuffer>& buffers)
{
    m.occupancy.reserve(buffers.size());
    for (const auto& b : buffers) {
        m.occupancy.push_back(b.size());
    }
}

} // namespace

EpochMetrics TrialState::run_epoch()
{
    EpochMetrics m = start_epoch();
    m.selected = choose_buffered(m.ops);

    if (m.selected && m.selected->hop == Hop::SourceRelay) {
        const RelayPair pair = m.selected->pair;
        for (const int relay : {pair.first, pair.second}) {
            if (buffers_[static_cast<std::size_t>(relay)].is_full()) {
                throw InvariantViolation("reception selected into a full buffer");
            }
        }
        const std::size_t block = take_source_block();
        for (const int relay : {pair.first, pair.second}) {
            buffers_[static_cast<std::size_t>(relay)].push({decode_at_relay(relay, source_[block]), epoch_});
        }
        m.mode = EpochMode::Reception;
    } else if (m.selected) {
        const RelayPair pair = m.selected->pair;
        auto blocks = pop_common(buffers_[static_cast<std::size_t>(pair.first)],
                                 buffers_[static_cast<std::size_t>(pair.second)]);
        if (!blocks) {
            throw InvariantViolation("transmission selected for a pair without a common block");
        }
        deliver(m, pair, blocks->first, blocks->second);
    }

    record_occupancy(m, buffers_);
    ++epoch_;
    return m;
}

EpochMetrics TrialState::run_non_buffered_epoch()
{
    EpochMetrics m = start_epoch();
    if (pending_) {
        const Pending held = std::move(*pending_);
        pending_.reset();
        m.selected = held.entry;
        deliver(m, held.entry.pair, held.at_p, held.at_q);
    } else if (next_block_ < static_cast<std::size_t>(config_.blocks_per_packet())) {
        m.selected = choose_forwarding_pair(m.ops);
        if (!m.selected) {
            throw InvariantViolation("non-buffered selection returned no pair");
        }
        const RelayPair pair = m.selected->pair;
        const std::size_t block = take_source_block();
        pending_ = Pending{*m.selected,
                           {decode_at_relay(pair.first, source_[block]), epoch_},
                           {decode_at_relay(pair.second, source_[block]), epoch_}};
        m.mode = EpochMode::Reception;
    }
    record_occupancy(m, buffers_);
    ++epoch_;
    return m;
}

namespace {

void accumulate(TrialResult& r, const EpochMetrics& m)
{
    switch (m.mode) {
    case EpochMode::Reception: ++r.reception_epochs; break;
    case EpochMode::Transmission: ++r.transmission_epochs; break;
    case EpochMode::Idle: ++r.idle_epochs; break;
    }
    if (m.mode == EpochMode::Transmission) {
        r.bits_judged += 2 * m.bit_errors.size();
        r.bit_errors += static_cast<std::uint64_t>(m.total_errors());
        if (m.delay) {
            r.delay_sum += *m.delay;
            ++r.delayed_blocks;
        }
    }
    r.ops += m.ops;
}

TrialResult run_direct_trial(const SimConfig& config, double noise_var, std::uint64_t packet, bool keep_epochs)
{
    TrialResult r;
    Rng setup = derive_stream(config.seed, packet, 0);
    Rng bits = derive_stream(config.seed, packet, 1);
    Rng noise_rng = derive_stream(config.seed, packet, 2);
    const NoiseModel noise(noise_var);
    const int users = config.simulated_users();
    const auto codes = generate_spreading_codes(users, config.chips, setup);

    std::vector<CVec> signatures;
    for (const auto& c : codes) {
        signatures.push_back(c.chips.cast<cd>());
    }
    const auto filters = make_filters(DetectorKind::Rake, signatures, noise_var);

    std::vector<Symbol> sent(static_cast<std::size_t>(2 * users));
    for (int block = 0; block < config.blocks_per_packet(); ++block) {
        EpochMetrics m;
        m.epoch = static_cast<std::uint64_t>(block);
        m.mode = EpochMode::Transmission;
        m.bit_errors.assign(static_cast<std::size_t>(users), 0);
        for (auto& b : sent) {
            b = random_bpsk(bits);
        }
        for (int slot = 0; slot < 2; ++slot) {
            CVec y = noise.sample(noise_rng, config.chips);
            for (int k = 0; k < users; ++k) {
                y += signatures[static_cast<std::size_t>(k)] * static_cast<double>(sent[static_cast<std::size_t>(2 * k + slot)]);
            }
            for (int k = 0; k < users; ++k) {
                if (slice(detect(filters[static_cast<std::size_t>(k)], y)) != sent[static_cast<std::size_t>(2 * k + slot)]) {
                    ++m.bit_errors[static_cast<std::size_t>(k)];
                }
            }
        }
        accumulate(r, m);
        if (keep_epochs) {
            r.epochs.push_back(std::move(m));
        }
    }
    r.blocks_generated = r.blocks_delivered = static_cast<std::uint64_t>(config.blocks_per_packet());
    return r;
}

} // namespace

TrialResult run_trial(const SimConfig& config, double noise_var, int base_capacity, std::uint64_t packet,
                      bool keep_epochs)
{
    config.validate();
    if (config.relays == 0) {
        return run_direct_trial(config, noise_var, packet, keep_epochs);
    }

    TrialState state(config, noise_var, base_capacity, packet);
    TrialResult r;
    r.capacity = state.capacity();
    r.ops = state.setup_ops();
    while (!state.finished() && state.epoch() < state.cutoff()) {
        EpochMetrics m = config.buffered() ? state.run_epoch() : state.run_non_buffered_epoch();
        accumulate(r, m);
        if (keep_epochs) {
            r.epochs.push_back(std::move(m));
        }
    }
    r.blocks_generated = state.blocks_generated();
    r.blocks_delivered = state.blocks_delivered();
    r.residual_blocks = state.blocks_in_flight();
    if (r.blocks_generated != r.blocks_delivered + r.residual_blocks) {
        throw InvariantViolation("block conservation violated");
    }
    return r;
}

std::optional<double> measure_delay(std::span<const EpochMetrics> epochs)
{
    std::uint64_t total = 0;
    std::uint64_t count = 0;
    for (const auto& m : epochs) {
        if (m.delay) {
            total += *m.delay;
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return static_cast<double>(total) / static_cast<double>(count);
}

} // namespace coopdstc
