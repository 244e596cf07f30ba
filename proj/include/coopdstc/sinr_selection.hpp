#ifndef COOPDSTC_SINR_SELECTION_HPP
#define COOPDSTC_SINR_SELECTION_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coopdstc/common.hpp"
#include "coopdstc/random.hpp"
#include "coopdstc/signal_model.hpp"

namespace coopdstc {

enum class Hop : std::uint8_t { SourceRelay = 0, RelayDest = 1 };

const char* to_string(Hop hop);

/// Unordered relay pair stored with first < second (0-based indices).
struct RelayPair {
    int first = 0;
    int second = 1;

    static RelayPair of(int a, int b);
    bool contains(int relay) const { return first == relay || second == relay; }
    auto operator<=>(const RelayPair&) const = default;
};

struct LinkSinrEntry {
    Hop hop = Hop::SourceRelay;
    RelayPair pair;
    double sinr = 0.0;
};

/// Strict ranking used everywhere: higher SINR first, ties broken by the
/// lowest (hop, first, second).
bool ranks_before(const LinkSinrEntry& a, const LinkSinrEntry& b);

/// Complex multiply / complex add counts, plus how many pair SINRs were evaluated.
struct OpCounter {
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
    std::uint64_t pair_evaluations = 0;

    OpCounter& operator+=(const OpCounter& other)
    {
        multiplications += other.multiplications;
        additions += other.additions;
        pair_evaluations += other.pair_evaluations;
        return *this;
    }
};

/// Signatures and receive filters of every (user, relay) link of one hop.
struct HopModel {
    Hop hop = Hop::SourceRelay;
    DetectorKind kind = DetectorKind::Rake;
    int users = 0;
    int relays = 0;
    std::vector<CVec> signatures; ///< user * relays + relay
    std::vector<CVec> filters;    ///< user * relays + relay

    const CVec& signature(int user, int relay) const { return signatures[index(user, relay)]; }
    const CVec& filter(int user, int relay) const { return filters[index(user, relay)]; }

private:
    std::size_t index(int user, int relay) const { return static_cast<std::size_t>(user * relays + relay); }
};

/// Builds per-link filters. Mmse filters at relay l are solved against the
/// covariance of all users' signatures on that same link.
HopModel make_hop_model(const SignatureSet& signatures, Hop hop, DetectorKind kind, double noise_var);

/// Scalar per-link terms of the pair SINR: w^H rho w (signal) and w^H w (filter energy),
/// with rho = h^H h.
struct LinkTerms {
    int users = 0;
    int relays = 0;
    std::vector<double> signal;
    std::vector<double> filter_energy;

    double signal_at(int user, int relay) const { return signal[static_cast<std::size_t>(user * relays + relay)]; }
    double energy_at(int user, int relay) const
    {
        return filter_energy[static_cast<std::size_t>(user * relays + relay)];
    }
};

LinkTerms compute_link_terms(const HopModel& hop, OpCounter& ops);

/// Pair SINR from cached link terms. A zero denominator yields +infinity.
double pair_sinr(const LinkTerms& terms, RelayPair pair, double noise_var, OpCounter& ops);

/// SINR of the combined paths from all users to relays (m, n).
/// Throws ParameterError on a zero denominator (noiseless and no interfering relays).
double sinr_source_relay_pair(const HopModel& source_relay, RelayPair pair, double noise_var);

/// SINR of the combined paths from relays (m, n) to the destination.
double sinr_relay_dest_pair(const HopModel& relay_dest, RelayPair pair, double noise_var);

/// Everything selection needs for one channel realization and noise level.
struct SelectionModel {
    int relays = 0;
    double noise_var = 0.0;
    LinkTerms source_relay;
    LinkTerms relay_dest;

    const LinkTerms& terms(Hop hop) const { return hop == Hop::SourceRelay ? source_relay : relay_dest; }
};

SelectionModel build_selection_model(const SignatureSet& signatures, DetectorKind relay_kind, DetectorKind dest_kind,
                                     double noise_var, OpCounter& ops);

class LinkSinrTable {
public:
    LinkSinrTable() = default;
    explicit LinkSinrTable(std::vector<LinkSinrEntry> entries);

    /// Entries in (hop, first, second) order.
    const std::vector<LinkSinrEntry>& entries() const { return entries_; }
    /// Indices into entries() by descending SINR.
    const std::vector<std::size_t>& order() const { return order_; }
    const LinkSinrEntry& ranked(std::size_t rank) const { return entries_[order_[rank]]; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<LinkSinrEntry> entries_;
    std::vector<std::size_t> order_;
};

/// Evaluates every pair on both hops: L(L-1) entries. Throws ParameterError when L < 2.
LinkSinrTable build_table(const SelectionModel& model, OpCounter& ops);

using Feasibility = std::function<bool(Hop, RelayPair)>;

/// Highest-ranked feasible entry; std::nullopt means the epoch stays idle.
std::optional<LinkSinrEntry> select_best(const LinkSinrTable& table, const Feasibility& feasible);

/// Two-stage reduced search.
///
/// Stage 1 scores every relay that takes part in at least one feasible entry
/// by its strongest single-link numerator term (sum over users of w^H rho w,
/// best of the two hops) and keeps the top relay. Stage 2 evaluates only the
/// 2(L-1) pair SINRs that contain that relay and returns the best feasible one.
std::optional<LinkSinrEntry> select_greedy(const SelectionModel& model, const Feasibility& feasible, OpCounter& ops);

/// Uniform choice among feasible entries of the table.
std::optional<LinkSinrEntry> select_random(const LinkSinrTable& table, const Feasibility& feasible, Rng& rng);

/// Closed-form operation counts of exhaustive search and the greedy upper bound.
struct ComplexityEstimate {
    std::int64_t exhaustive_multiplications = 0;
    std::int64_t exhaustive_additions = 0;
    std::int64_t greedy_multiplications = 0;
    std::int64_t greedy_additions = 0;
};

ComplexityEstimate count_complexity(std::int64_t users, std::int64_t chips, std::int64_t relays);

} // namespace coopdstc

#endif // COOPDSTC_SINR_SELECTION_HPP
