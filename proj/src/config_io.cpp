#include "coopdstc/config_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace coopdstc {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_integer(const std::string& key, std::string_view text)
{
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

double parse_real(const std::string& key, std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError(key, "expected a finite number, got '" + std::string(text) + "'");
    }
    return value;
}

DetectorKind parse_detector(const std::string& key, std::string_view v)
{
    if (v == "rake" || v == "mf") {
        return DetectorKind::Rake;
    }
    if (v == "mmse") {
        return DetectorKind::Mmse;
    }
    throw ConfigError(key, "expected rake or mmse, got '" + std::string(v) + "'");
}

SelectionKind parse_policy(std::string_view v)
{
    if (v == "exhaustive") return SelectionKind::Exhaustive;
    if (v == "greedy") return SelectionKind::Greedy;
    if (v == "random") return SelectionKind::Random;
    if (v == "fixed-pairs" || v == "fixed") return SelectionKind::FixedPairs;
    throw ConfigError("policy", "expected exhaustive, greedy, random or fixed-pairs, got '" + std::string(v) + "'");
}

BufferMode parse_buffer_mode(std::string_view v)
{
    if (v == "fixed") return BufferMode::Fixed;
    if (v == "dynamic-snr") return BufferMode::SnrDriven;
    if (v == "dynamic-power") return BufferMode::PowerDriven;
    throw ConfigError("buffer", "expected fixed, dynamic-snr or dynamic-power, got '" + std::string(v) + "'");
}

std::string format_real(const char* fmt, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, value);
    return buf;
}

void apply(SimConfig& c, const std::string& key, std::string_view v)
{
    if (key == "users") c.users = parse_integer<int>(key, v);
    else if (key == "relays") c.relays = parse_integer<int>(key, v);
    else if (key == "chips") c.chips = parse_integer<int>(key, v);
    else if (key == "symbols") c.packet_symbols = parse_integer<int>(key, v);
    else if (key == "packets") c.packets = parse_integer<int>(key, v);
    else if (key == "snr") c.snr_db = parse_snr_grid(v);
    else if (key == "detector_relay") c.relay_detector = parse_detector(key, v);
    else if (key == "detector_dest") c.dest_detector = parse_detector(key, v);
    else if (key == "policy") c.policy = parse_policy(v);
    else if (key == "scheme") c.scheme = parse_scheme(v);
    else if (key == "buffer") c.buffer.mode = parse_buffer_mode(v);
    else if (key == "J") c.buffer.capacity = parse_integer<int>(key, v);
    else if (key == "j_min") c.buffer.min_capacity = parse_integer<int>(key, v);
    else if (key == "j_max") c.buffer.max_capacity = parse_integer<int>(key, v);
    else if (key == "d1") c.buffer.snr_step_db = parse_real(key, v);
    else if (key == "d2") c.buffer.snr_buffer_step = parse_integer<int>(key, v);
    else if (key == "d3") c.buffer.power_buffer_step = parse_integer<int>(key, v);
    else if (key == "gamma") c.buffer.power_threshold = parse_real(key, v);
    else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, v);
    else throw ConfigError(key, "unknown key");
}

/// Canonical key=value echo, readable back by parse_config.
std::map<std::string, std::string> config_entries(const SimConfig& c)
{
    std::string grid;
    for (std::size_t i = 0; i < c.snr_db.size(); ++i) {
        grid += (i ? "," : "") + format_real("%.17g", c.snr_db[i]);
    }
    return {
        {"users", std::to_string(c.users)},
        {"relays", std::to_string(c.relays)},
        {"chips", std::to_string(c.chips)},
        {"symbols", std::to_string(c.packet_symbols)},
        {"packets", std::to_string(c.packets)},
        {"snr", grid},
        {"detector_relay", to_string(c.relay_detector)},
        {"detector_dest", to_string(c.dest_detector)},
        {"policy", to_string(c.policy)},
        {"scheme", to_string(c.scheme)},
        {"buffer", to_string(c.buffer.mode)},
        {"J", std::to_string(c.buffer.capacity)},
        {"j_min", std::to_string(c.buffer.min_capacity)},
        {"j_max", std::to_string(c.buffer.max_capacity)},
        {"d1", format_real("%.17g", c.buffer.snr_step_db)},
        {"d2", std::to_string(c.buffer.snr_buffer_step)},
        {"d3", std::to_string(c.buffer.power_buffer_step)},
        {"gamma", format_real("%.17g", c.buffer.power_threshold)},
        {"seed", std::to_string(c.seed)},
    };
}

} // namespace

Scheme parse_scheme(std::string_view v)
{
    if (v == "buffered") return Scheme::Buffered;
    if (v == "non-buffered") return Scheme::NonBuffered;
    if (v == "no-selection") return Scheme::NoSelection;
    if (v == "single-user-bound") return Scheme::SingleUserBound;
    throw ConfigError("scheme",
                      "expected buffered, non-buffered, no-selection or single-user-bound, got '" + std::string(v) + "'");
}

std::vector<double> parse_snr_grid(std::string_view text)
{
    const std::string key = "snr";
    text = trim(text);
    std::vector<double> grid;
    if (text.find(':') != std::string_view::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
            throw ConfigError(key, "range must look like start:stop:step");
        }
        const double start = parse_real(key, text.substr(0, c1));
        const double stop = parse_real(key, text.substr(c1 + 1, c2 - c1 - 1));
        const double step = parse_real(key, text.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) {
            throw ConfigError(key, "range needs step > 0 and stop >= start");
        }
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= count; ++i) {
            grid.push_back(start + static_cast<double>(i) * step);
        }
        return grid;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (item.empty()) {
            throw ConfigError(key, "empty value in list");
        }
        grid.push_back(parse_real(key, item));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return grid;
}

SimConfig parse_config(std::string_view text)
{
    SimConfig config;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        const auto nl = text.find('\n', line_start);
        auto line = text.substr(line_start, nl == std::string_view::npos ? std::string_view::npos : nl - line_start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
                ++i;
            }
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
                ++j;
            }
            if (j > i) {
                const auto token = line.substr(i, j - i);
                const auto eq = token.find('=');
                if (eq == std::string_view::npos || eq == 0) {
                    throw ConfigError(std::string(token.substr(0, eq)), "expected key=value");
                }
                apply(config, std::string(token.substr(0, eq)), token.substr(eq + 1));
            }
            i = j;
        }
        if (nl == std::string_view::npos) {
            break;
        }
        line_start = nl + 1;
    }
    config.validate();
    return config;
}

void write_csv(const SweepResult& result, std::ostream& out)
{
    const auto& c = result.config;
    out << "snr_db,scheme,policy,detector_relay,detector_dest,ber,avg_delay_epochs,avg_buffer_size,"
           "residual_blocks,mults,adds\n";
    for (const auto& p : result.points) {
        out << format_real("%.6g", p.snr_db) << ',' << to_string(c.scheme) << ','
            << to_string(c.effective_policy()) << ',' << to_string(c.relay_detector) << ','
            << to_string(c.dest_detector) << ',' << format_real("%.9e", p.ber) << ','
            << (p.avg_delay_epochs ? format_real("%.6f", *p.avg_delay_epochs) : std::string()) << ','
            << format_real("%.4f", p.avg_buffer_size) << ',' << p.residual_blocks << ',' << p.multiplications
            << ',' << p.additions << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_csv: output stream failed");
    }
}

void write_json(const SweepResult& result, const RunManifest& manifest, std::ostream& out)
{
    ordered_json doc;
    ordered_json config = ordered_json::object();
    for (const auto& [key, value] : config_entries(result.config)) {
        config[key] = value;
    }
    doc["manifest"] = {{"version", manifest.version},
                       {"csv_schema", kCsvSchemaVersion},
                       {"seed", manifest.seed},
                       {"runtime_seconds", manifest.runtime_seconds},
                       {"snr_definition", "SNR_dB = 10 log10(1 / noise_variance), unit transmit power"},
                       {"config", config}};
    ordered_json rows = ordered_json::array();
    const auto& c = result.config;
    for (const auto& p : result.points) {
        rows.push_back({{"snr_db", p.snr_db},
                        {"scheme", to_string(c.scheme)},
                        {"policy", to_string(c.effective_policy())},
                        {"detector_relay", to_string(c.relay_detector)},
                        {"detector_dest", to_string(c.dest_detector)},
                        {"ber", p.ber},
                        {"avg_delay_epochs", p.avg_delay_epochs ? ordered_json(*p.avg_delay_epochs) : ordered_json()},
                        {"avg_buffer_size", p.avg_buffer_size},
                        {"residual_blocks", p.residual_blocks},
                        {"mults", p.multiplications},
                        {"adds", p.additions},
                        {"noise_var", p.noise_var},
                        {"ber_std_err", p.ber_std_err},
                        {"bit_errors", p.bit_errors},
                        {"bits", p.bits},
                        {"generated_blocks", p.generated_blocks},
                        {"delivered_blocks", p.delivered_blocks},
                        {"pair_evaluations", p.pair_evaluations},
                        {"packets", p.packets}});
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write_json: output stream failed");
    }
}

SweepResult read_json(std::string_view text)
{
    const auto doc = ordered_json::parse(text);
    std::string config_text;
    for (const auto& [key, value] : doc.at("manifest").at("config").items()) {
        config_text += key + "=" + value.get<std::string>() + "\n";
    }
    SweepResult result;
    result.config = parse_config(config_text);
    for (const auto& row : doc.at("rows")) {
        PointResult p;
        p.snr_db = row.at("snr_db").get<double>();
        p.noise_var = row.at("noise_var").get<double>();
        p.ber = row.at("ber").get<double>();
        p.ber_std_err = row.at("ber_std_err").get<double>();
        p.bit_errors = row.at("bit_errors").get<std::uint64_t>();
        p.bits = row.at("bits").get<std::uint64_t>();
        if (!row.at("avg_delay_epochs").is_null()) {
            p.avg_delay_epochs = row.at("avg_delay_epochs").get<double>();
        }
        p.avg_buffer_size = row.at("avg_buffer_size").get<double>();
        p.generated_blocks = row.at("generated_blocks").get<std::uint64_t>();
        p.delivered_blocks = row.at("delivered_blocks").get<std::uint64_t>();
        p.residual_blocks = row.at("residual_blocks").get<std::uint64_t>();
        p.multiplications = row.at("mults").get<std::uint64_t>();
        p.additions = row.at("adds").get<std::uint64_t>();
        p.pair_evaluations = row.at("pair_evaluations").get<std::uint64_t>();
        p.packets = row.at("packets").get<std::uint64_t>();
        result.points.push_back(p);
    }
    return result;
}

} // namespace coopdstc
