#ifndef COOPDSTC_SWEEP_HPP
#define COOPDSTC_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "coopdstc/protocol.hpp"

namespace coopdstc {

/// Noise level and starting buffer size of one SNR grid point.
struct SweepPoint {
    double snr_db = 0.0;
    double noise_var = 1.0;
    int capacity = 1;
};

/// Aggregate over all packets of one SNR point.
struct PointResult {
    double snr_db = 0.0;
    double noise_var = 1.0;
    double ber = 0.0;
    double ber_std_err = 0.0; ///< standard error of the per-packet BER mean
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    std::optional<double> avg_delay_epochs;
    double avg_buffer_size = 0.0;
    std::uint64_t generated_blocks = 0;
    std::uint64_t delivered_blocks = 0;
    std::uint64_t residual_blocks = 0;
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
    std::uint64_t pair_evaluations = 0;
    std::uint64_t packets = 0;
};

struct SweepResult {
    SimConfig config;
    std::vector<PointResult> points;
};

/// Resolves noise variances and buffer sizes for the grid. The SNR-driven
/// rule is applied between consecutive grid points, starting from the
/// configured J at the first point.
std::vector<SweepPoint> plan_sweep(const SimConfig& config);

PointResult aggregate_point(const SweepPoint& point, std::span<const TrialResult> trials);

/// Monte Carlo sweep with packets distributed over OpenMP threads.
SweepResult run_sweep(const SimConfig& config);

/// Single-threaded reference; produces results identical to run_sweep.
SweepResult run_sweep_serial(const SimConfig& config);

} // namespace coopdstc

#endif // COOPDSTC_SWEEP_HPP
