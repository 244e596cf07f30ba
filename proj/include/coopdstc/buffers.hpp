#ifndef COOPDSTC_BUFFERS_HPP
#define COOPDSTC_BUFFERS_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coopdstc/common.hpp"
#include "coopdstc/signal_model.hpp"

namespace coopdstc {

/// One epoch's decoded symbols for all users, tagged with the reception epoch.
/// symbols[2k] is user k's slot 2i-1 decision, symbols[2k+1] its slot 2i decision.
struct BufferBlock {
    std::vector<Symbol> symbols;
    std::uint64_t epoch_tag = 0;

    Symbol at(int user, int slot) const { return symbols[static_cast<std::size_t>(2 * user + slot)]; }
};

class BufferOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// FIFO of decoded blocks with an adjustable capacity (in blocks).
///
/// Lowering the capacity below the current occupancy keeps every stored
/// block; the buffer just reports full until it drains below the new limit.
class RelayBuffer {
public:
    explicit RelayBuffer(std::size_t capacity = 1);

    void push(BufferBlock block);
    bool is_full() const { return blocks_.size() >= capacity_; }
    bool empty() const { return blocks_.empty(); }
    std::size_t size() const { return blocks_.size(); }
    std::size_t capacity() const { return capacity_; }
    void set_capacity(std::size_t capacity);

    const std::deque<BufferBlock>& blocks() const { return blocks_; }

private:
    friend std::optional<std::pair<BufferBlock, BufferBlock>> pop_common(RelayBuffer&, RelayBuffer&);

    std::deque<BufferBlock> blocks_;
    std::size_t capacity_;
};

/// Oldest epoch tag present in both buffers, if any.
std::optional<std::uint64_t> oldest_common_tag(const RelayBuffer& p, const RelayBuffer& q);

/// Removes and returns the two blocks carrying the oldest common tag.
std::optional<std::pair<BufferBlock, BufferBlock>> pop_common(RelayBuffer& p, RelayBuffer& q);

enum class BufferMode { Fixed, SnrDriven, PowerDriven };

const char* to_string(BufferMode mode);

/// Capacity control. Fixed keeps `capacity`; SnrDriven shrinks it by
/// `snr_buffer_step` for every full `snr_step_db` increase of the input SNR;
/// PowerDriven grows it by `power_buffer_step` when the weakest link power is
/// at or below `power_threshold` and shrinks it otherwise.
struct DynamicBufferPolicy {
    BufferMode mode = BufferMode::Fixed;
    int capacity = 6;
    int min_capacity = 1;
    int max_capacity = 12;
    double snr_step_db = 2.0;   // d1
    int snr_buffer_step = 2;    // d2
    int power_buffer_step = 2;  // d3
    double power_threshold = 1.5e-4; // gamma; about the median weakest-link power at K=3, L=6
    std::optional<double> snr_prev_db;

    void validate() const;
};

/// Applies the SNR rule for a new input SNR and returns the new capacity.
int resize_snr(DynamicBufferPolicy& policy, double snr_cur_db);

/// Applies the channel-power rule for the given weakest link power.
int resize_power(DynamicBufferPolicy& policy, double min_link_power);

/// min over users and relays of |h|^2 on both hops.
double min_link_power(const SignatureSet& signatures);

} // namespace coopdstc

#endif // COOPDSTC_BUFFERS_HPP
