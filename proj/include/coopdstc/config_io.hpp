#ifndef COOPDSTC_CONFIG_IO_HPP
#define COOPDSTC_CONFIG_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coopdstc/protocol.hpp"
#include "coopdstc/sweep.hpp"

namespace coopdstc {

/// Version string stamped into run manifests.
inline constexpr const char* kArtifactVersion = "0.1.0";
/// Bumped whenever the CSV columns or their formatting change.
inline constexpr int kCsvSchemaVersion = 1;

/// Parses the flat key=value format. Pairs are separated by newlines or
/// whitespace; '#' starts a comment. Unset keys keep SimConfig defaults.
/// Throws ConfigError naming the offending key.
SimConfig parse_config(std::string_view text);

/// "a:b:step" (inclusive end) or a single value. Throws ConfigError("snr", ...).
std::vector<double> parse_snr_grid(std::string_view text);

Scheme parse_scheme(std::string_view name);

struct RunManifest {
    std::string version = kArtifactVersion;
    std::uint64_t seed = 0;
    double runtime_seconds = 0.0;
};

/// One header line plus one row per SNR point, columns:
/// snr_db,scheme,policy,detector_relay,detector_dest,ber,avg_delay_epochs,
/// avg_buffer_size,residual_blocks,mults,adds
void write_csv(const SweepResult& result, std::ostream& out);

void write_json(const SweepResult& result, const RunManifest& manifest, std::ostream& out);

/// Inverse of write_json for the result part.
SweepResult read_json(std::string_view text);

} // namespace coopdstc

#endif // COOPDSTC_CONFIG_IO_HPP
