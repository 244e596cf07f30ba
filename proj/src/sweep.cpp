#include "coopdstc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace coopdstc {

std::vector<SweepPoint> plan_sweep(const SimConfig& config)
{
    config.validate();
    std::vector<SweepPoint> plan;
    plan.reserve(config.snr_db.size());
    DynamicBufferPolicy policy = config.buffer;
    for (const double snr : config.snr_db) {
        SweepPoint p;
        p.snr_db = snr;
        p.noise_var = noise_variance_from_snr_db(snr);
        p.capacity = policy.mode == BufferMode::SnrDriven ? resize_snr(policy, snr) : policy.capacity;
        plan.push_back(p);
    }
    return plan;
}

PointResult aggregate_point(const SweepPoint& point, std::span<const TrialResult> trials)
{
    PointResult r;
    r.snr_db = point.snr_db;
    r.noise_var = point.noise_var;
    r.packets = trials.size();

    std::uint64_t delay_sum = 0;
    std::uint64_t delayed = 0;
    double capacity_sum = 0.0;
    double ber_sum = 0.0;
    double ber_sq_sum = 0.0;
    std::uint64_t judged_packets = 0;
    for (const auto& t : trials) {
        r.bit_errors += t.bit_errors;
        r.bits += t.bits_judged;
        r.generated_blocks += t.blocks_generated;
        r.delivered_blocks += t.blocks_delivered;
        r.residual_blocks += t.residual_blocks;
        r.multiplications += t.ops.multiplications;
        r.additions += t.ops.additions;
        r.pair_evaluations += t.ops.pair_evaluations;
        delay_sum += t.delay_sum;
        delayed += t.delayed_blocks;
        capacity_sum += t.capacity;
        if (t.bits_judged > 0) {
            const double b = static_cast<double>(t.bit_errors) / static_cast<double>(t.bits_judged);
            ber_sum += b;
            ber_sq_sum += b * b;
            ++judged_packets;
        }
    }
    if (r.bits > 0) {
        r.ber = static_cast<double>(r.bit_errors) / static_cast<double>(r.bits);
    }
    if (judged_packets > 1) {
        const double n = static_cast<double>(judged_packets);
        const double mean = ber_sum / n;
        const double variance = std::max(0.0, (ber_sq_sum - n * mean * mean) / (n - 1.0));
        r.ber_std_err = std::sqrt(variance / n);
    }
    if (delayed > 0) {
        r.avg_delay_epochs = static_cast<double>(delay_sum) / static_cast<double>(delayed);
    }
    if (!trials.empty()) {
        r.avg_buffer_size = capacity_sum / static_cast<double>(trials.size());
    }
    return r;
}

namespace {

SweepResult collect(const SimConfig& config, const std::vector<SweepPoint>& plan,
                    const std::vector<TrialResult>& trials)
{
    SweepResult out;
    out.config = config;
    const auto packets = static_cast<std::size_t>(config.packets);
    for (std::size_t i = 0; i < plan.size(); ++i) {
        out.points.push_back(
            aggregate_point(plan[i], std::span<const TrialResult>(trials).subspan(i * packets, packets)));
    }
    return out;
}

} // namespace

SweepResult run_sweep(const SimConfig& config)
{
    const auto plan = plan_sweep(config);
    const auto packets = static_cast<std::int64_t>(config.packets);
    const auto total = static_cast<std::int64_t>(plan.size()) * packets;
    std::vector<TrialResult> trials(static_cast<std::size_t>(total));
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t job = 0; job < total; ++job) {
        const auto& point = plan[static_cast<std::size_t>(job / packets)];
        try {
            trials[static_cast<std::size_t>(job)] = run_trial(config, point.noise_var, point.capacity,
                                                              static_cast<std::uint64_t>(job % packets));
        } catch (...) {
#pragma omp critical(coopdstc_sweep_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return collect(config, plan, trials);
}

SweepResult run_sweep_serial(const SimConfig& config)
{
    const auto plan = plan_sweep(config);
    const auto packets = static_cast<std::size_t>(config.packets);
    std::vector<TrialResult> trials;
    trials.reserve(plan.size() * packets);
    for (const auto& point : plan) {
        for (std::size_t packet = 0; packet < packets; ++packet) {
            trials.push_back(run_trial(config, point.noise_var, point.capacity, packet));
        }
    }
    return collect(config, plan, trials);
}

} // namespace coopdstc
