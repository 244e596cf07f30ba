#include "coopdstc/buffers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coopdstc {

RelayBuffer::RelayBuffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0) {
        throw ParameterError("relay buffer capacity must be >= 1");
    }
}

void RelayBuffer::push(BufferBlock block)
{
    if (is_full()) {
        throw BufferOverflow("relay buffer full (capacity " + std::to_string(capacity_) + ")");
    }
    if (!blocks_.empty() && block.epoch_tag <= blocks_.back().epoch_tag) {
        throw InputError("relay buffer: epoch tags must be pushed in increasing order");
    }
    blocks_.push_back(std::move(block));
}

void RelayBuffer::set_capacity(std::size_t capacity)
{
    if (capacity == 0) {
        throw ParameterError("relay buffer capacity must be >= 1");
    }
    capacity_ = capacity;
}

std::optional<std::uint64_t> oldest_common_tag(const RelayBuffer& p, const RelayBuffer& q)
{
    // Both queues are sorted by tag, so a merge walk finds the first match.
    auto a = p.blocks().begin();
    auto b = q.blocks().begin();
    while (a != p.blocks().end() && b != q.blocks().end()) {
        if (a->epoch_tag == b->epoch_tag) {
            return a->epoch_tag;
        }
        if (a->epoch_tag < b->epoch_tag) {
            ++a;
        } else {
            ++b;
        }
    }
    return std::nullopt;
}

std::optional<std::pair<BufferBlock, BufferBlock>> pop_common(RelayBuffer& p, RelayBuffer& q)
{
    const auto tag = oldest_common_tag(p, q);
    if (!tag) {
        return std::nullopt;
    }
    auto take = [tag](std::deque<BufferBlock>& blocks) {
        auto it = std::find_if(blocks.begin(), blocks.end(), [tag](const BufferBlock& b) { return b.epoch_tag == *tag; });
        BufferBlock out = std::move(*it);
        blocks.erase(it);
        return out;
    };
    auto first = take(p.blocks_);
    auto second = take(q.blocks_);
    return std::make_pair(std::move(first), std::move(second));
}

const char* to_string(BufferMode mode)
{
    switch (mode) {
    case BufferMode::Fixed: return "fixed";
    case BufferMode::SnrDriven: return "dynamic-snr";
    case BufferMode::PowerDriven: return "dynamic-power";
    }
    return "?";
}

void DynamicBufferPolicy::validate() const
{
    if (min_capacity < 1) {
        throw ParameterError("buffer policy: j_min must be >= 1");
    }
    if (min_capacity > max_capacity) {
        throw ParameterError("buffer policy: j_min must not exceed j_max");
    }
    if (capacity < 1) {
        throw ParameterError("buffer policy: J must be >= 1");
    }
    if (!(snr_step_db > 0.0) || snr_buffer_step < 1 || power_buffer_step < 1) {
        throw ParameterError("buffer policy: step sizes must be positive");
    }
    if (!(power_threshold > 0.0)) {
        throw ParameterError("buffer policy: gamma must be positive");
    }
}

namespace {

int clamp_capacity(const DynamicBufferPolicy& policy, long long value)
{
    return static_cast<int>(std::clamp<long long>(value, policy.min_capacity, policy.max_capacity));
}

} // namespace

int resize_snr(DynamicBufferPolicy& policy, double snr_cur_db)
{
    if (policy.mode != BufferMode::SnrDriven) {
        throw ParameterError("resize_snr requires an SNR-driven buffer policy");
    }
    if (!policy.snr_prev_db) {
        policy.snr_prev_db = snr_cur_db;
        return policy.capacity;
    }
    const double rise = snr_cur_db - *policy.snr_prev_db;
    if (rise < 0.0) {
        policy.snr_prev_db = snr_cur_db;
        return policy.capacity;
    }
    // Small tolerance so that a 2 dB grid built by repeated addition still counts whole steps.
    const auto steps = static_cast<long long>(std::floor(rise / policy.snr_step_db + 1e-9));
    if (steps > 0) {
        policy.capacity = clamp_capacity(policy, policy.capacity - steps * policy.snr_buffer_step);
        *policy.snr_prev_db += static_cast<double>(steps) * policy.snr_step_db;
    }
    return policy.capacity;
}

int resize_power(DynamicBufferPolicy& policy, double min_link_power)
{
    if (policy.mode != BufferMode::PowerDriven) {
        throw ParameterError("resize_power requires a power-driven buffer policy");
    }
    const long long step = min_link_power <= policy.power_threshold ? policy.power_buffer_step
                                                                    : -policy.power_buffer_step;
    policy.capacity = clamp_capacity(policy, policy.capacity + step);
    return policy.capacity;
}

double min_link_power(const SignatureSet& signatures)
{
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& h : signatures.source_relay) {
        lowest = std::min(lowest, h.squaredNorm());
    }
    for (const auto& h : signatures.relay_dest) {
        lowest = std::min(lowest, h.squaredNorm());
    }
    return lowest;
}

} // namespace coopdstc
