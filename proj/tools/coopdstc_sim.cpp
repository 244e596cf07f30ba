/**
 * coopdstc_sim - batch BER/delay sweeps of buffer-aided DSTC relaying.
 *
 *   coopdstc_sim --config run.cfg --format csv --out results.csv
 *   coopdstc_sim --scheme non-buffered --snr 0:16:2 --seed 7
 *
 * Exit status: 0 on success, 2 for configuration errors, 3 for I/O errors.
 */

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coopdstc/config_io.hpp"
#include "coopdstc/sweep.hpp"

namespace {

constexpr int kConfigFailure = 2;
constexpr int kIoFailure = 3;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator for buffer-aided cooperative DS-CDMA with distributed Alamouti coding"};

    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    std::string scheme;
    std::string snr;
    std::uint64_t seed = 0;
    int packets = 0;

    app.add_option("--config", config_path, "key=value configuration file");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit master seed (overrides config)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--scheme", scheme, "buffered | non-buffered | no-selection | single-user-bound");
    app.add_option("--snr", snr, "SNR grid in dB as start:stop:step");
    auto* packets_opt = app.add_option("--packets", packets, "packets per SNR point (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kConfigFailure;
    }

    coopdstc::SimConfig config;
    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot read config file " << config_path << "\n";
                return kIoFailure;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        }
        config = coopdstc::parse_config(text);
        if (!scheme.empty()) {
            config.scheme = coopdstc::parse_scheme(scheme);
        }
        if (!snr.empty()) {
            config.snr_db = coopdstc::parse_snr_grid(snr);
        }
        if (*seed_opt) {
            config.seed = seed;
        }
        if (*packets_opt) {
            config.packets = packets;
        }
        config.validate();
    } catch (const coopdstc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigFailure;
    }

    const auto start = std::chrono::steady_clock::now();
    const auto result = coopdstc::run_sweep(config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    coopdstc::RunManifest manifest;
    manifest.seed = config.seed;
    manifest.runtime_seconds = elapsed.count();

    try {
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path, std::ios::binary);
            if (!file) {
                std::cerr << "error: cannot open " << out_path << " for writing\n";
                return kIoFailure;
            }
        }
        std::ostream& out = out_path.empty() ? std::cout : file;
        if (format == "json") {
            coopdstc::write_json(result, manifest, out);
        } else {
            coopdstc::write_csv(result, out);
        }
        out.flush();
        if (!out) {
            std::cerr << "error: write failed\n";
            return kIoFailure;
        }
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoFailure;
    }
    return 0;
}
