#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "coopdstc/protocol.hpp"
#include "coopdstc/sweep.hpp"

using namespace coopdstc;

namespace {

SimConfig small_config()
{
    SimConfig c;
    c.users = 2;
    c.relays = 4;
    c.chips = 8;
    c.packet_symbols = 60;
    c.packets = 6;
    c.snr_db = {4.0};
    c.buffer.capacity = 3;
    c.seed = 17;
    return c;
}

SimConfig noiseless_config(Scheme scheme, SelectionKind policy, int relays)
{
    SimConfig c;
    c.users = 1;
    c.relays = relays;
    c.chips = 8;
    c.packet_symbols = 40;
    c.packets = 1;
    c.relay_detector = DetectorKind::Rake;
    c.dest_detector = DetectorKind::Rake;
    c.scheme = scheme;
    c.policy = policy;
    c.buffer.capacity = 2;
    return c;
}

bool same(const TrialResult& a, const TrialResult& b)
{
    return a.bit_errors == b.bit_errors && a.bits_judged == b.bits_judged && a.delay_sum == b.delay_sum &&
           a.reception_epochs == b.reception_epochs && a.transmission_epochs == b.transmission_epochs &&
           a.idle_epochs == b.idle_epochs && a.ops.multiplications == b.ops.multiplications &&
           a.ops.additions == b.ops.additions && a.capacity == b.capacity;
}

} // namespace

TEST_CASE("a fresh buffered trial starts with a reception")
{
    const auto c = small_config();
    TrialState state(c, 0.4, 3, 0);
    CHECK(state.blocks_in_flight() == 0);
    for (int m = 0; m < 4; ++m) {
        for (int n = m + 1; n < 4; ++n) {
            CHECK_FALSE(state.feasible(Hop::RelayDest, RelayPair{m, n}));
            CHECK(state.feasible(Hop::SourceRelay, RelayPair{m, n}));
        }
    }
    const auto m = state.run_epoch();
    CHECK(m.mode == EpochMode::Reception);
    REQUIRE(m.selected);
    CHECK(m.selected->hop == Hop::SourceRelay);
    CHECK(state.blocks_in_flight() == 1);
}

TEST_CASE("full buffers that share tags force a transmission")
{
    auto c = small_config();
    c.relays = 2;
    TrialState state(c, 0.4, 1, 0);
    auto first = state.run_epoch();
    CHECK(first.mode == EpochMode::Reception);
    CHECK_FALSE(state.feasible(Hop::SourceRelay, RelayPair{0, 1}));
    CHECK(state.feasible(Hop::RelayDest, RelayPair{0, 1}));
    auto second = state.run_epoch();
    CHECK(second.mode == EpochMode::Transmission);
    REQUIRE(second.delay);
    CHECK(*second.delay == 1);
}

TEST_CASE("buffer of one with two relays forces strict alternation")
{
    auto c = small_config();
    c.relays = 2;
    c.buffer.capacity = 1;
    const auto r = run_trial(c, 0.4, 1, 0, true);
    CHECK(r.delayed_blocks == 30);
    CHECK(measure_delay(r.epochs) == 1.0);
    CHECK(r.reception_epochs == 30);
    CHECK(r.transmission_epochs == 30);
}

TEST_CASE("noiseless single-user trials are error free")
{
    for (const auto scheme : {Scheme::Buffered, Scheme::NonBuffered, Scheme::NoSelection, Scheme::SingleUserBound}) {
        for (const auto policy :
             {SelectionKind::Exhaustive, SelectionKind::Greedy, SelectionKind::Random, SelectionKind::FixedPairs}) {
            for (const int relays : {2, 4}) {
                const auto c = noiseless_config(scheme, policy, relays);
                const auto r = run_trial(c, 0.0, 2, 3, true);
                CAPTURE(to_string(scheme));
                CAPTURE(to_string(policy));
                CHECK(r.bit_errors == 0);
                CHECK(r.residual_blocks == 0);
                CHECK(r.blocks_delivered == 20);
                for (const auto& e : r.epochs) {
                    if (e.delay) {
                        CHECK(*e.delay >= 1);
                    }
                }
            }
        }
    }
}

TEST_CASE("non-buffered trials alternate strictly with unit delay")
{
    auto c = small_config();
    c.packet_symbols = 1000;
    for (const auto scheme : {Scheme::NonBuffered, Scheme::NoSelection}) {
        for (const auto policy : {SelectionKind::Exhaustive, SelectionKind::Greedy, SelectionKind::Random}) {
            c.scheme = scheme;
            c.policy = policy;
            const auto r = run_trial(c, 0.4, 3, 1, true);
            CHECK(r.blocks_generated == 500);
            CHECK(r.reception_epochs == 500);
            CHECK(r.transmission_epochs == 500);
            CHECK(r.idle_epochs == 0);
            CHECK(measure_delay(r.epochs) == 1.0);
            for (const auto& e : r.epochs) {
                CHECK(e.occupancy == std::vector<std::size_t>(4, 0));
            }
        }
    }
}

TEST_CASE("no-selection cycles through the fixed pairs")
{
    auto c = small_config();
    c.scheme = Scheme::NoSelection;
    const auto r = run_trial(c, 0.4, 3, 0, true);
    std::vector<RelayPair> used;
    for (const auto& e : r.epochs) {
        if (e.mode == EpochMode::Reception) {
            used.push_back(e.selected->pair);
        }
    }
    REQUIRE(used.size() == 30);
    for (std::size_t i = 0; i < used.size(); ++i) {
        const int group = static_cast<int>(i % 2);
        CHECK(used[i] == RelayPair{2 * group, 2 * group + 1});
    }
}

TEST_CASE("non-buffered random policy spreads over all pairs")
{
    auto c = small_config();
    c.scheme = Scheme::NonBuffered;
    c.policy = SelectionKind::Random;
    c.packet_symbols = 1200;
    const auto r = run_trial(c, 0.4, 3, 0, true);
    std::map<RelayPair, int> counts;
    for (const auto& e : r.epochs) {
        if (e.mode == EpochMode::Reception) {
            CHECK(e.selected->hop == Hop::RelayDest);
            ++counts[e.selected->pair];
        }
    }
    CHECK(counts.size() == 6);
    for (const auto& [pair, n] : counts) {
        CHECK(std::abs(n - 100) < 40);
    }
}

TEST_CASE("per-epoch metrics respect their invariants")
{
    auto c = small_config();
    c.packet_symbols = 200;
    for (const auto policy : {SelectionKind::Exhaustive, SelectionKind::Greedy, SelectionKind::Random}) {
        c.policy = policy;
        const auto r = run_trial(c, 0.6, 3, 2, true);
        std::uint64_t errors = 0;
        for (const auto& e : r.epochs) {
            CHECK(e.total_errors() <= 2 * c.users);
            errors += static_cast<std::uint64_t>(e.total_errors());
            if (e.delay) {
                CHECK(*e.delay >= 1);
            }
            for (const auto occ : e.occupancy) {
                CHECK(occ <= static_cast<std::size_t>(e.capacity));
            }
            if (e.mode == EpochMode::Idle) {
                CHECK_FALSE(e.selected);
            }
        }
        CHECK(errors == r.bit_errors);
        CHECK(r.blocks_generated == r.blocks_delivered + r.residual_blocks);
        CHECK(r.epochs.size() <= 4 * 100 + 4 * 3);
    }
}

TEST_CASE("trials are reproducible per seed and packet")
{
    const auto c = small_config();
    const auto a = run_trial(c, 0.5, 3, 4);
    const auto b = run_trial(c, 0.5, 3, 4);
    CHECK(same(a, b));
    auto other = c;
    other.seed = 18;
    CHECK_FALSE(same(a, run_trial(other, 0.5, 3, 4)));
}

TEST_CASE("measure_delay averages delivered blocks only")
{
    CHECK_FALSE(measure_delay({}));
    std::vector<EpochMetrics> epochs(3);
    epochs[0].delay = 1;
    epochs[2].delay = 4;
    CHECK(measure_delay(epochs) == 2.5);
}

TEST_CASE("power-driven trials move the buffer one step from the base")
{
    auto c = small_config();
    c.buffer.mode = BufferMode::PowerDriven;
    c.buffer.capacity = 6;
    c.buffer.power_threshold = 1.5e-4;
    int grown = 0;
    int shrunk = 0;
    for (std::uint64_t p = 0; p < 40; ++p) {
        TrialState s(c, 0.5, 6, p);
        CHECK((s.capacity() == 8 || s.capacity() == 4));
        (s.capacity() == 8 ? grown : shrunk) += 1;
    }
    CHECK(grown > 0);
    CHECK(shrunk > 0);
}

TEST_CASE("configuration validation names the key")
{
    auto c = small_config();
    c.users = 0;
    try {
        c.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "users");
    }
    c = small_config();
    c.relays = 5;
    c.policy = SelectionKind::FixedPairs;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.packet_symbols = 7;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.snr_db.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("SNR to noise variance")
{
    CHECK(noise_variance_from_snr_db(0.0) == 1.0);
    CHECK(noise_variance_from_snr_db(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(noise_variance_from_snr_db(-3.0) == doctest::Approx(1.9952623149688795).epsilon(1e-15));
}
