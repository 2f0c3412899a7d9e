#pragma once

#include "apu/config.hpp"
#include "apu/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace apu {

/// Runs `config` once per strategy with identical seeds, so mobility and traffic
/// are shared and only beaconing differs. `jobs == 0` uses all hardware threads.
std::vector<MetricsReport> compare(const ScenarioConfig& config, std::span<const Strategy> strategies,
                                   unsigned jobs = 0);

struct SweepSpec {
    ScenarioConfig base;
    std::string parameter;  // dotted scenario key, e.g. "mobility.max_speed"
    std::vector<double> values;
    std::uint32_t replications = 1;  // replication r uses seed base.seed + r
    std::vector<Strategy> strategies{Strategy::Adaptive};
};

void validate(const SweepSpec& spec);

struct SweepPoint {
    double value = 0.0;
    std::uint32_t replication = 0;
    Strategy strategy = Strategy::Adaptive;
    MetricsReport report;
};

std::vector<SweepPoint> sweep(const SweepSpec& spec, unsigned jobs = 0);

struct SweepSummary {
    double value = 0.0;
    Strategy strategy = Strategy::Adaptive;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single replication
    std::size_t count = 0;
};

/// Mean and standard deviation per (value, strategy, metric); metrics that are
/// undefined in some replication average over the defined ones.
std::vector<SweepSummary> summarize(std::span<const SweepPoint> points);

/// Writes sweep.csv (long format, one row per value/replication/strategy/metric)
/// and sweep_summary.csv into `dir`.
void write_sweep(const SweepSpec& spec, std::span<const SweepPoint> points, const std::filesystem::path& dir);

}  // namespace apu
