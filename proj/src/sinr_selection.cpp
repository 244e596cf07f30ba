#include "coopdstc/sinr_selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "coopdstc/detectors.hpp"

namespace coopdstc {

const char* to_string(Hop hop)
{
    return hop == Hop::SourceRelay ? "source-relay" : "relay-dest";
}

RelayPair RelayPair::of(int a, int b)
{
    if (a == b) {
        throw InputError("relay pair needs two distinct relays, got " + std::to_string(a) + " twice");
    }
    if (a < 0 || b < 0) {
        throw InputError("relay pair indices must be nonnegative");
    }
    return a < b ? RelayPair{a, b} : RelayPair{b, a};
}

bool ranks_before(const LinkSinrEntry& a, const LinkSinrEntry& b)
{
    if (a.sinr != b.sinr) {
        return a.sinr > b.sinr;
    }
    if (a.hop != b.hop) {
        return a.hop < b.hop;
    }
    return a.pair < b.pair;
}

HopModel make_hop_model(const SignatureSet& signatures, Hop hop, DetectorKind kind, double noise_var)
{
    HopModel model;
    model.hop = hop;
    model.kind = kind;
    model.users = signatures.users;
    model.relays = signatures.relays;
    const auto total = static_cast<std::size_t>(model.users * model.relays);
    model.signatures.resize(total);
    model.filters.resize(total);

    std::vector<CVec> at_relay(static_cast<std::size_t>(model.users));
    for (int l = 0; l < model.relays; ++l) {
        for (int k = 0; k < model.users; ++k) {
            at_relay[static_cast<std::size_t>(k)] = hop == Hop::SourceRelay ? signatures.sr(k, l) : signatures.rd(l, k);
        }
        const auto filters = make_filters(kind, at_relay, noise_var);
        for (int k = 0; k < model.users; ++k) {
            const auto idx = static_cast<std::size_t>(k * model.relays + l);
            model.signatures[idx] = at_relay[static_cast<std::size_t>(k)];
            model.filters[idx] = filters[static_cast<std::size_t>(k)].weights;
        }
    }
    return model;
}

LinkTerms compute_link_terms(const HopModel& hop, OpCounter& ops)
{
    LinkTerms terms;
    terms.users = hop.users;
    terms.relays = hop.relays;
    const auto total = static_cast<std::size_t>(hop.users * hop.relays);
    terms.signal.resize(total);
    terms.filter_energy.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        const CVec& h = hop.signatures[i];
        const CVec& w = hop.filters[i];
        const double rho = h.squaredNorm();
        const double energy = w.squaredNorm();
        terms.signal[i] = rho * energy;
        terms.filter_energy[i] = energy;

        const auto n = static_cast<std::uint64_t>(h.size());
        ops.multiplications += 2 * n + 1;
        ops.additions += n > 0 ? 2 * (n - 1) : 0;
    }
    return terms;
}

namespace {

struct SinrParts {
    double numerator = 0.0;
    double denominator = 0.0;
};

std::uint64_t sum_adds(std::uint64_t terms) { return terms > 0 ? terms - 1 : 0; }

SinrParts pair_sinr_parts(const LinkTerms& terms, RelayPair pair, double noise_var, OpCounter& ops)
{
    if (pair.first == pair.second || pair.first < 0 || pair.second >= terms.relays) {
        throw InputError("pair SINR: relay pair out of range");
    }
    SinrParts parts;
    double interference = 0.0;
    double energy = 0.0;
    for (int k = 0; k < terms.users; ++k) {
        parts.numerator += terms.signal_at(k, pair.first) + terms.signal_at(k, pair.second);
        energy += terms.energy_at(k, pair.first) + terms.energy_at(k, pair.second);
        for (int l = 0; l < terms.relays; ++l) {
            if (!pair.contains(l)) {
                interference += terms.signal_at(k, l);
            }
        }
    }
    parts.denominator = interference + noise_var * energy;

    const auto users = static_cast<std::uint64_t>(terms.users);
    const auto others = static_cast<std::uint64_t>(terms.relays - 2);
    ops.additions += sum_adds(2 * users) + sum_adds(users * others) + sum_adds(2 * users) + (others > 0 ? 1 : 0);
    ops.multiplications += 2; // noise scaling and the final ratio
    ops.pair_evaluations += 1;
    return parts;
}

double checked_pair_sinr(const HopModel& model, Hop expected, RelayPair pair, double noise_var)
{
    if (model.hop != expected) {
        throw InputError(std::string("pair SINR: expected a ") + to_string(expected) + " hop model");
    }
    if (noise_var < 0.0) {
        throw ParameterError("pair SINR: noise variance must be nonnegative");
    }
    OpCounter ops;
    const auto parts = pair_sinr_parts(compute_link_terms(model, ops), pair, noise_var, ops);
    if (parts.denominator == 0.0) {
        throw ParameterError("pair SINR: zero denominator (noiseless link with no interfering relays)");
    }
    return parts.numerator / parts.denominator;
}

} // namespace

double pair_sinr(const LinkTerms& terms, RelayPair pair, double noise_var, OpCounter& ops)
{
    const auto parts = pair_sinr_parts(terms, pair, noise_var, ops);
    if (parts.denominator == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return parts.numerator / parts.denominator;
}

double sinr_source_relay_pair(const HopModel& source_relay, RelayPair pair, double noise_var)
{
    return checked_pair_sinr(source_relay, Hop::SourceRelay, pair, noise_var);
}

double sinr_relay_dest_pair(const HopModel& relay_dest, RelayPair pair, double noise_var)
{
    return checked_pair_sinr(relay_dest, Hop::RelayDest, pair, noise_var);
}

SelectionModel build_selection_model(const SignatureSet& signatures, DetectorKind relay_kind, DetectorKind dest_kind,
                                     double noise_var, OpCounter& ops)
{
    SelectionModel model;
    model.relays = signatures.relays;
    model.noise_var = noise_var;
    model.source_relay =
        compute_link_terms(make_hop_model(signatures, Hop::SourceRelay, relay_kind, noise_var), ops);
    model.relay_dest = compute_link_terms(make_hop_model(signatures, Hop::RelayDest, dest_kind, noise_var), ops);
    return model;
}

LinkSinrTable::LinkSinrTable(std::vector<LinkSinrEntry> entries) : entries_(std::move(entries)), order_(entries_.size())
{
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(),
              [this](std::size_t a, std::size_t b) { return ranks_before(entries_[a], entries_[b]); });
}

LinkSinrTable build_table(const SelectionModel& model, OpCounter& ops)
{
    if (model.relays < 2) {
        throw ParameterError("build_table: need at least two relays, got " + std::to_string(model.relays));
    }
    std::vector<LinkSinrEntry> entries;
    entries.reserve(static_cast<std::size_t>(model.relays * (model.relays - 1)));
    for (const Hop hop : {Hop::SourceRelay, Hop::RelayDest}) {
        for (int m = 0; m < model.relays; ++m) {
            for (int n = m + 1; n < model.relays; ++n) {
                const RelayPair pair{m, n};
                entries.push_back({hop, pair, pair_sinr(model.terms(hop), pair, model.noise_var, ops)});
            }
        }
    }
    return LinkSinrTable(std::move(entries));
}

std::optional<LinkSinrEntry> select_best(const LinkSinrTable& table, const Feasibility& feasible)
{
    for (std::size_t rank = 0; rank < table.size(); ++rank) {
        const auto& entry = table.ranked(rank);
        if (feasible(entry.hop, entry.pair)) {
            return entry;
        }
    }
    return std::nullopt;
}

std::optional<LinkSinrEntry> select_greedy(const SelectionModel& model, const Feasibility& feasible, OpCounter& ops)
{
    if (model.relays < 2) {
        throw ParameterError("select_greedy: need at least two relays, got " + std::to_string(model.relays));
    }
    const int relays = model.relays;
    const auto users = static_cast<std::uint64_t>(model.source_relay.users);

    auto takes_part = [&](int relay) {
        for (const Hop hop : {Hop::SourceRelay, Hop::RelayDest}) {
            for (int other = 0; other < relays; ++other) {
                if (other != relay && feasible(hop, RelayPair::of(relay, other))) {
                    return true;
                }
            }
        }
        return false;
    };

    int anchor = -1;
    double anchor_score = -1.0;
    for (int l = 0; l < relays; ++l) {
        if (!takes_part(l)) {
            continue;
        }
        double score = 0.0;
        for (const Hop hop : {Hop::SourceRelay, Hop::RelayDest}) {
            double single = 0.0;
            for (int k = 0; k < model.terms(hop).users; ++k) {
                single += model.terms(hop).signal_at(k, l);
            }
            score = std::max(score, single);
        }
        ops.additions += 2 * sum_adds(users);
        if (score > anchor_score) {
            anchor = l;
            anchor_score = score;
        }
    }
    if (anchor < 0) {
        return std::nullopt;
    }

    std::optional<LinkSinrEntry> best;
    for (const Hop hop : {Hop::SourceRelay, Hop::RelayDest}) {
        for (int other = 0; other < relays; ++other) {
            if (other == anchor) {
                continue;
            }
            const auto pair = RelayPair::of(anchor, other);
            const LinkSinrEntry entry{hop, pair, pair_sinr(model.terms(hop), pair, model.noise_var, ops)};
            if (feasible(hop, pair) && (!best || ranks_before(entry, *best))) {
                best = entry;
            }
        }
    }
    return best;
}

std::optional<LinkSinrEntry> select_random(const LinkSinrTable& table, const Feasibility& feasible, Rng& rng)
{
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& e = table.entries()[i];
        if (feasible(e.hop, e.pair)) {
            candidates.push_back(i);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    const auto pick = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(candidates.size()));
    return table.entries()[candidates[std::min(pick, candidates.size() - 1)]];
}

ComplexityEstimate count_complexity(std::int64_t users, std::int64_t chips, std::int64_t relays)
{
    if (users < 1 || chips < 1 || relays < 1) {
        throw ParameterError("count_complexity: parameters must be positive");
    }
    const std::int64_t k = users;
    const std::int64_t n = chips;
    const std::int64_t l = relays;
    const std::int64_t l2 = l * l;
    const std::int64_t l3 = l2 * l;
    ComplexityEstimate est;
    est.exhaustive_multiplications = 7 * k * n * l3 - 7 * k * n * l2;
    est.exhaustive_additions = 2 * k * n * l3 - 2 * k * n * l2 + k * l3 - k * l2 - 2 * l2 + 2 * l;
    est.greedy_multiplications = 21 * k * n * l2 - 7 * k * n * l;
    est.greedy_additions = 6 * k * n * l2 + 3 * k * l2 - 3 * k * l - l + 1;
    return est;
}

} // namespace coopdstc
