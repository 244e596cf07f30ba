#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "coopdstc/config_io.hpp"
#include "coopdstc/sweep.hpp"
#include "oracles.hpp"

using namespace coopdstc;

namespace {

SimConfig pinned_config()
{
    return parse_config("users=2 relays=4 chips=8 symbols=40 packets=4 snr=0:8:4 J=3 seed=2024");
}

std::string csv_of(const SweepResult& r)
{
    std::ostringstream out;
    write_csv(r, out);
    return out.str();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("parallel sweep equals the serial reference")
{
    for (const auto* extra : {"", " policy=greedy", " policy=random", " scheme=non-buffered", " scheme=no-selection",
                              " buffer=dynamic-snr J=6", " buffer=dynamic-power J=6"}) {
        const auto c = parse_config(std::string("users=2 relays=4 chips=8 symbols=40 packets=5 snr=0:8:4 J=3") + extra);
        const auto a = run_sweep(c);
        const auto b = run_sweep_serial(c);
        CHECK(csv_of(a) == csv_of(b));
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].bit_errors == b.points[i].bit_errors);
            CHECK(a.points[i].ber_std_err == b.points[i].ber_std_err);
            CHECK(a.points[i].pair_evaluations == b.points[i].pair_evaluations);
        }
    }
}

TEST_CASE("sweep totals are consistent")
{
    const auto r = run_sweep(pinned_config());
    REQUIRE(r.points.size() == 3);
    for (const auto& p : r.points) {
        CHECK(p.packets == 4);
        CHECK(p.generated_blocks == 80);
        CHECK(p.generated_blocks == p.delivered_blocks + p.residual_blocks);
        CHECK(p.bits == 2 * 2 * p.delivered_blocks);
        CHECK(p.ber == doctest::Approx(static_cast<double>(p.bit_errors) / static_cast<double>(p.bits)));
        CHECK(p.ber <= 0.5);
        REQUIRE(p.avg_delay_epochs);
        CHECK(*p.avg_delay_epochs >= 1.0);
        CHECK(p.avg_buffer_size == 3.0);
    }
}

TEST_CASE("SNR-driven plan lowers J by one step per grid point")
{
    const auto c = parse_config("buffer=dynamic-snr J=8 d1=2 d2=2 snr=0:16:2");
    const auto plan = plan_sweep(c);
    std::vector<int> caps;
    for (const auto& p : plan) {
        caps.push_back(p.capacity);
    }
    CHECK(caps == std::vector<int>{8, 6, 4, 2, 1, 1, 1, 1, 1});
    CHECK(plan[1].noise_var == doctest::Approx(std::pow(10.0, -0.2)));
}

TEST_CASE("direct-link calibration tracks the AWGN BPSK curve")
{
    const auto c = parse_config("relays=0 users=1 symbols=1000 packets=100 snr=0,4");
    const auto r = run_sweep(c);
    for (const auto& p : r.points) {
        const double expected = oracle::bpsk_awgn_ber(p.snr_db);
        CHECK(p.bits == 100000);
        CHECK(std::abs(p.ber - expected) < 4.0 * oracle::binomial_sigma(expected, static_cast<double>(p.bits)));
        CHECK_FALSE(p.avg_delay_epochs);
    }
}

TEST_CASE("parse_config defaults and errors")
{
    const auto d = parse_config("");
    CHECK(d.users == 3);
    CHECK(d.relays == 6);
    CHECK(d.chips == 16);
    CHECK(d.packet_symbols == 1000);
    CHECK(d.relay_detector == DetectorKind::Mmse);
    CHECK(d.dest_detector == DetectorKind::Rake);

    for (const auto* bad : {"users=0", "users=abc", "relays=3 policy=fixed-pairs", "colour=blue", "snr=4:0:2",
                            "detector_relay=zf", "J=20", "gamma=-1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_config(bad), ConfigError);
    }
    try {
        parse_config("users=0");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "users");
    }
    try {
        parse_config("colour=blue");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "colour");
    }

    const auto dbag = parse_config("policy=greedy buffer=dynamic-snr d1=2 d2=2");
    CHECK(dbag.policy == SelectionKind::Greedy);
    CHECK(dbag.buffer.mode == BufferMode::SnrDriven);
    CHECK(dbag.buffer.snr_step_db == 2.0);
    CHECK(dbag.buffer.snr_buffer_step == 2);
    CHECK(dbag.scheme == Scheme::Buffered);

    const auto multi = parse_config("# comment\nusers=1   # trailing\n\nsnr=1,2.5,7\n");
    CHECK(multi.users == 1);
    CHECK(multi.snr_db == std::vector<double>{1.0, 2.5, 7.0});
}

TEST_CASE("CSV has one row per SNR point and is reproducible")
{
    auto c = pinned_config();
    c.snr_db = {6.0};
    const auto one = csv_of(run_sweep(c));
    CHECK(std::count(one.begin(), one.end(), '\n') == 2);
    CHECK(one.rfind("snr_db,scheme,policy,detector_relay,detector_dest,ber,avg_delay_epochs,avg_buffer_size,"
                    "residual_blocks,mults,adds\n",
                    0) == 0);
    CHECK(one == csv_of(run_sweep(c)));
}

TEST_CASE("JSON round trip preserves config and rows")
{
    const auto r = run_sweep(pinned_config());
    std::ostringstream out;
    write_json(r, RunManifest{kArtifactVersion, r.config.seed, 0.5}, out);
    const auto back = read_json(out.str());
    CHECK(csv_of(back) == csv_of(r));
    CHECK(back.config.seed == r.config.seed);
    CHECK(back.config.snr_db == r.config.snr_db);
    REQUIRE(back.points.size() == r.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        CHECK(back.points[i].ber == r.points[i].ber);
        CHECK(back.points[i].ber_std_err == r.points[i].ber_std_err);
        CHECK(back.points[i].bits == r.points[i].bits);
    }
}

TEST_CASE("pinned sweep matches the golden CSV")
{
    const std::string path = std::string(COOPDSTC_GOLDEN_DIR) + "/pinned_sweep.csv";
    const auto csv = csv_of(run_sweep(pinned_config()));
    if (std::getenv("COOPDSTC_UPDATE_GOLDEN") != nullptr) {
        std::ofstream(path) << csv;
    }
    const auto golden = read_file(path);
    REQUIRE_FALSE(golden.empty());
    CHECK(csv == golden);
}
